#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "texcat/image.hpp"

namespace texcat {

enum class RoiMode { fixed_bloc, pixel_wise, bloc_wise };

std::string to_string(RoiMode mode);
RoiMode roi_mode_from_string(const std::string& s);

struct PartitionConfig {
    int sub_rows = 3, sub_cols = 2;    // SN = sub_rows * sub_cols
    int bloc_rows = 4, bloc_cols = 2;  // M = bloc_rows * bloc_cols
    int clusters = 3;                  // L
    RoiMode mode = RoiMode::fixed_bloc;
    uint64_t kmeans_seed = 1;
    int gray_levels = 32;              // G, the quantized level count images must carry

    int sn() const { return sub_rows * sub_cols; }
    int blocs() const { return bloc_rows * bloc_cols; }
    int feature_dim() const;           // SN*M*4 or SN*L*4
};

struct FeatureRow {
    std::string id;
    std::vector<double> values;
    std::string label;
};

struct FeatureDataset {
    int dim = 0;
    std::vector<FeatureRow> rows;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
};

struct ExtractionResult {
    std::vector<double> values;
    int degenerate_regions = 0;  // regions that produced the zero feature vector
};

// rows x cols non-overlapping tiles in row-major order; tile size
// floor(h/rows) x floor(w/cols); remainder pixels at right/bottom dropped.
std::vector<GrayImage> split_grid(const GrayImage& img, int rows, int cols);

ExtractionResult extract_fixed_bloc(const GrayImage& img, const PartitionConfig& cfg);
ExtractionResult extract_pixel_wise(const GrayImage& img, const PartitionConfig& cfg);
ExtractionResult extract_bloc_wise(const GrayImage& img, const PartitionConfig& cfg);
ExtractionResult extract_features(const GrayImage& img, const PartitionConfig& cfg);

std::vector<std::string> feature_names_for(const PartitionConfig& cfg);

struct AssemblyReport {
    int images = 0;
    int degenerate_regions = 0;
    std::vector<std::string> flagged_ids;  // images with at least one degenerate region
};

// Images must already be preprocessed and quantized to cfg.gray_levels.
FeatureDataset assemble_dataset(const DatasetManifest& manifest, const PartitionConfig& cfg,
                                AssemblyReport* report = nullptr);

}  // namespace texcat
