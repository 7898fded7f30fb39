#include "texcat/roi.hpp"

#include <algorithm>
#include <stdexcept>

#include "texcat/glcm.hpp"
#include "texcat/kmeans.hpp"

namespace texcat {

std::string to_string(RoiMode mode) {
    switch (mode) {
        case RoiMode::fixed_bloc: return "fixed_bloc";
        case RoiMode::pixel_wise: return "pixel_wise";
        case RoiMode::bloc_wise: return "bloc_wise";
    }
    return "?";
}

RoiMode roi_mode_from_string(const std::string& s) {
    if (s == "fixed_bloc") return RoiMode::fixed_bloc;
    if (s == "pixel_wise") return RoiMode::pixel_wise;
    if (s == "bloc_wise") return RoiMode::bloc_wise;
    throw std::invalid_argument("unknown ROI mode '" + s + "'");
}

int PartitionConfig::feature_dim() const {
    int per_sub = (mode == RoiMode::fixed_bloc) ? blocs() : clusters;
    return sn() * per_sub * kTextureFeatureCount;
}

std::vector<GrayImage> split_grid(const GrayImage& img, int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("split_grid: non-positive grid");
    if (rows > img.height || cols > img.width)
        throw std::invalid_argument("split_grid: grid exceeds image dimensions");
    int th = img.height / rows;
    int tw = img.width / cols;
    std::vector<GrayImage> tiles;
    tiles.reserve(static_cast<size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            GrayImage t;
            t.width = tw;
            t.height = th;
            t.levels = img.levels;
            t.pixels.reserve(static_cast<size_t>(tw) * th);
            for (int y = r * th; y < (r + 1) * th; ++y)
                for (int x = c * tw; x < (c + 1) * tw; ++x) t.pixels.push_back(img.at(x, y));
            tiles.push_back(std::move(t));
        }
    }
    return tiles;
}

namespace {

void check_levels(const GrayImage& img, const PartitionConfig& cfg) {
    if (img.levels != cfg.gray_levels)
        throw std::invalid_argument("extract: image carries " + std::to_string(img.levels) +
                                    " levels, config expects " + std::to_string(cfg.gray_levels));
}

void append(std::vector<double>& out, const TextureFeatures& f, int& degenerate) {
    out.push_back(f.dissimilarity);
    out.push_back(f.uniformity);
    out.push_back(f.entropy);
    out.push_back(f.contrast);
    if (f.degenerate) ++degenerate;
}

TextureFeatures tile_features(const GrayImage& tile, const std::vector<uint8_t>* mask = nullptr) {
    return features_from_glcm(compute_glcm(tile, 1, 0, mask));
}

// Cluster index order sorted by centroid, ascending lexicographically; stable
// so duplicate centroids keep their original order.
std::vector<int> sorted_cluster_order(const ClusterModel& cm) {
    std::vector<int> order(cm.k);
    for (int i = 0; i < cm.k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return cm.centroids[a] < cm.centroids[b]; });
    return order;
}

}  // namespace

ExtractionResult extract_fixed_bloc(const GrayImage& img, const PartitionConfig& cfg) {
    check_levels(img, cfg);
    ExtractionResult res;
    for (const auto& sub : split_grid(img, cfg.sub_rows, cfg.sub_cols))
        for (const auto& bloc : split_grid(sub, cfg.bloc_rows, cfg.bloc_cols))
            append(res.values, tile_features(bloc), res.degenerate_regions);
    return res;
}

ExtractionResult extract_pixel_wise(const GrayImage& img, const PartitionConfig& cfg) {
    check_levels(img, cfg);
    ExtractionResult res;
    for (const auto& sub : split_grid(img, cfg.sub_rows, cfg.sub_cols)) {
        std::vector<std::vector<double>> intensities;
        intensities.reserve(sub.pixels.size());
        for (int v : sub.pixels) intensities.push_back({static_cast<double>(v)});
        ClusterModel cm = kmeans(intensities, cfg.clusters, cfg.kmeans_seed);

        for (int c : sorted_cluster_order(cm)) {
            std::vector<uint8_t> mask(sub.pixels.size(), 0);
            for (size_t i = 0; i < mask.size(); ++i) mask[i] = cm.assignments[i] == c;
            append(res.values, tile_features(sub, &mask), res.degenerate_regions);
        }
    }
    return res;
}

ExtractionResult extract_bloc_wise(const GrayImage& img, const PartitionConfig& cfg) {
    check_levels(img, cfg);
    if (cfg.clusters > cfg.blocs())
        throw std::invalid_argument("bloc_wise: L clusters cannot exceed M blocs");
    ExtractionResult res;
    for (const auto& sub : split_grid(img, cfg.sub_rows, cfg.sub_cols)) {
        std::vector<std::vector<double>> bloc_feats;
        for (const auto& bloc : split_grid(sub, cfg.bloc_rows, cfg.bloc_cols)) {
            TextureFeatures f = tile_features(bloc);
            if (f.degenerate) ++res.degenerate_regions;
            bloc_feats.push_back({f.dissimilarity, f.uniformity, f.entropy, f.contrast});
        }
        ClusterModel cm = kmeans(bloc_feats, cfg.clusters, cfg.kmeans_seed);

        for (int c : sorted_cluster_order(cm)) {
            std::vector<double> rep(kTextureFeatureCount, 0.0);
            long members = 0;
            for (size_t i = 0; i < bloc_feats.size(); ++i)
                if (cm.assignments[i] == c) {
                    ++members;
                    for (int d = 0; d < kTextureFeatureCount; ++d) rep[d] += bloc_feats[i][d];
                }
            if (members > 0)
                for (double& v : rep) v /= members;
            else
                rep = cm.centroids[c];  // duplicate centroid lost the tie-break
            res.values.insert(res.values.end(), rep.begin(), rep.end());
        }
    }
    return res;
}

ExtractionResult extract_features(const GrayImage& img, const PartitionConfig& cfg) {
    switch (cfg.mode) {
        case RoiMode::fixed_bloc: return extract_fixed_bloc(img, cfg);
        case RoiMode::pixel_wise: return extract_pixel_wise(img, cfg);
        case RoiMode::bloc_wise: return extract_bloc_wise(img, cfg);
    }
    throw std::logic_error("unreachable");
}

std::vector<std::string> feature_names_for(const PartitionConfig& cfg) {
    std::vector<std::string> names;
    bool fixed = cfg.mode == RoiMode::fixed_bloc;
    int regions = fixed ? cfg.blocs() : cfg.clusters;
    const char* region = fixed ? "bloc" : "clu";
    for (int s = 0; s < cfg.sn(); ++s)
        for (int r = 0; r < regions; ++r)
            for (int f = 0; f < kTextureFeatureCount; ++f)
                names.push_back("sub" + std::to_string(s) + "_" + region + std::to_string(r) + "_" +
                                kTextureFeatureNames[f]);
    return names;
}

FeatureDataset assemble_dataset(const DatasetManifest& manifest, const PartitionConfig& cfg,
                                AssemblyReport* report) {
    if (manifest.records.empty()) throw std::invalid_argument("assemble_dataset: empty manifest");
    FeatureDataset ds;
    ds.dim = cfg.feature_dim();
    ds.feature_names = feature_names_for(cfg);
    ds.class_names = manifest.class_names;
    for (const auto& rec : manifest.records) {
        ExtractionResult r = extract_features(rec.image, cfg);
        if (static_cast<int>(r.values.size()) != ds.dim)
            throw std::logic_error("assemble_dataset: inconsistent feature length");
        if (report) {
            ++report->images;
            report->degenerate_regions += r.degenerate_regions;
            if (r.degenerate_regions > 0) report->flagged_ids.push_back(rec.id);
        }
        ds.rows.push_back({rec.id, std::move(r.values), rec.class_label});
    }
    return ds;
}

}  // namespace texcat
