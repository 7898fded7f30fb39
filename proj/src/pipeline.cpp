#include "texcat/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "texcat/dataset_io.hpp"
#include "texcat/mias.hpp"
#include "texcat/pgm.hpp"
#include "texcat/preprocess.hpp"

namespace fs = std::filesystem;

namespace texcat {
namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "': expected on/off, got '" + v + "'");
}

long parse_long(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
    }
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
    }
}

std::pair<int, int> parse_map_size(const std::string& v) {
    size_t x = v.find('x');
    if (x == std::string::npos) throw ConfigError("map size must look like 10x10, got '" + v + "'");
    return {static_cast<int>(parse_long(v.substr(0, x), "som_sizes")),
            static_cast<int>(parse_long(v.substr(x + 1), "som_sizes"))};
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string percent(double frac) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", frac * 100.0);
    return buf;
}

std::string base_name(RoiMode mode) {
    switch (mode) {
        case RoiMode::fixed_bloc: return "FixedBloc";
        case RoiMode::pixel_wise: return "PixelWise";
        case RoiMode::bloc_wise: return "BlocWise";
    }
    return "?";
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "data_root") cfg.data_root = val;
            else if (key == "index_file") cfg.index_file = val;
            else if (key == "out_dir") cfg.out_dir = val;
            else if (key == "crop_threshold") cfg.crop_threshold = static_cast<int>(parse_long(val, key));
            else if (key == "gray_levels") cfg.gray_levels = static_cast<int>(parse_long(val, key));
            else if (key == "sub_rows") cfg.sub_rows = static_cast<int>(parse_long(val, key));
            else if (key == "sub_cols") cfg.sub_cols = static_cast<int>(parse_long(val, key));
            else if (key == "bloc_rows") cfg.bloc_rows = static_cast<int>(parse_long(val, key));
            else if (key == "bloc_cols") cfg.bloc_cols = static_cast<int>(parse_long(val, key));
            else if (key == "clusters") cfg.clusters = static_cast<int>(parse_long(val, key));
            else if (key == "kmeans_seed") cfg.kmeans_seed = static_cast<uint64_t>(parse_long(val, key));
            else if (key == "modes") {
                cfg.modes.clear();
                for (const auto& m : split_list(val)) cfg.modes.push_back(roi_mode_from_string(m));
            } else if (key == "fisherfaces") cfg.fisherfaces = parse_bool(val, key);
            else if (key == "som_mode") cfg.som_mode = som_use_from_string(val);
            else if (key == "som_sizes") {
                cfg.som_sizes.clear();
                for (const auto& m : split_list(val)) cfg.som_sizes.push_back(parse_map_size(m));
            } else if (key == "som_iterations") cfg.som_iterations = parse_long(val, key);
            else if (key == "som_alpha0") cfg.som_alpha0 = parse_double(val, key);
            else if (key == "som_sigma_final") cfg.som_sigma_final = parse_double(val, key);
            else if (key == "som_seed") cfg.som_seed = static_cast<uint64_t>(parse_long(val, key));
            else if (key == "classifiers") {
                cfg.classifiers.clear();
                for (const auto& c : split_list(val)) cfg.classifiers.push_back(classifier_from_string(c));
            } else if (key == "cv_folds") cfg.cv_folds = static_cast<int>(parse_long(val, key));
            else if (key == "cv_seed") cfg.cv_seed = static_cast<uint64_t>(parse_long(val, key));
            else if (key == "cv_stratified") cfg.cv_stratified = parse_bool(val, key);
            else if (key == "leakage_mode") cfg.leakage = leakage_mode_from_string(val);
            else if (key == "strict") cfg.strict = parse_bool(val, key);
            else throw ConfigError("unknown config key '" + key + "'");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    RunConfig cfg = parse(read_file(path));
    if (const char* root = std::getenv("TEXCAT_DATA_ROOT")) cfg.data_root = root;
    if (const char* out = std::getenv("TEXCAT_OUT_DIR")) cfg.out_dir = out;
    return cfg;
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    out << "data_root = " << data_root << "\n";
    out << "index_file = " << index_file << "\n";
    out << "out_dir = " << out_dir << "\n";
    out << "crop_threshold = " << crop_threshold << "\n";
    out << "gray_levels = " << gray_levels << "\n";
    out << "sub_rows = " << sub_rows << "\n";
    out << "sub_cols = " << sub_cols << "\n";
    out << "bloc_rows = " << bloc_rows << "\n";
    out << "bloc_cols = " << bloc_cols << "\n";
    out << "clusters = " << clusters << "\n";
    out << "kmeans_seed = " << kmeans_seed << "\n";
    out << "modes = ";
    for (size_t i = 0; i < modes.size(); ++i) out << (i ? ", " : "") << to_string(modes[i]);
    out << "\nfisherfaces = " << (fisherfaces ? "on" : "off") << "\n";
    out << "som_mode = " << to_string(som_mode) << "\n";
    out << "som_sizes = ";
    for (size_t i = 0; i < som_sizes.size(); ++i)
        out << (i ? ", " : "") << som_sizes[i].first << 'x' << som_sizes[i].second;
    out << "\nsom_iterations = " << som_iterations << "\n";
    out << "som_alpha0 = " << format_sig(som_alpha0, 9) << "\n";
    out << "som_sigma_final = " << format_sig(som_sigma_final, 9) << "\n";
    out << "som_seed = " << som_seed << "\n";
    out << "classifiers = ";
    for (size_t i = 0; i < classifiers.size(); ++i) out << (i ? ", " : "") << to_string(classifiers[i]);
    out << "\ncv_folds = " << cv_folds << "\n";
    out << "cv_seed = " << cv_seed << "\n";
    out << "cv_stratified = " << (cv_stratified ? "on" : "off") << "\n";
    out << "leakage_mode = " << to_string(leakage) << "\n";
    out << "strict = " << (strict ? "on" : "off") << "\n";
    return out.str();
}

std::string RunConfig::fingerprint() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(serialize())));
    return buf;
}

PartitionConfig RunConfig::partition_config(RoiMode mode) const {
    PartitionConfig p;
    p.sub_rows = sub_rows;
    p.sub_cols = sub_cols;
    p.bloc_rows = bloc_rows;
    p.bloc_cols = bloc_cols;
    p.clusters = clusters;
    p.mode = mode;
    p.kmeans_seed = kmeans_seed;
    p.gray_levels = gray_levels;
    return p;
}

SomConfig RunConfig::som_config(int rows, int cols) const {
    SomConfig s;
    s.rows = rows;
    s.cols = cols;
    s.iterations = som_iterations;
    s.alpha0 = som_alpha0;
    s.sigma_final = som_sigma_final;
    s.seed = som_seed;
    return s;
}

IngestResult cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    if (cfg.index_file.empty() || !fs::exists(cfg.index_file))
        throw std::runtime_error("index file not found: " + cfg.index_file);
    if (cfg.data_root.empty() || !fs::exists(cfg.data_root))
        throw std::runtime_error("data root not found: " + cfg.data_root);

    auto entries = parse_mias_index(read_file(cfg.index_file));

    IngestResult result;
    std::vector<ManifestCacheEntry> cache;
    std::map<std::string, int> histogram;
    std::vector<std::string> seen;
    for (const auto& e : entries) {
        // Multiple abnormality lines for one image: the first one defines
        // the record's class label.
        if (std::find(seen.begin(), seen.end(), e.id) != seen.end()) {
            result.warnings.push_back("image " + e.id + ": additional abnormality line ignored");
            continue;
        }
        seen.push_back(e.id);
        std::string path = (fs::path(cfg.data_root) / (e.id + ".pgm")).string();
        try {
            load_pgm_file(path);  // validates readability up front
        } catch (const std::exception& ex) {
            std::string msg = "image " + e.id + ": " + ex.what();
            if (cfg.strict) throw std::runtime_error(msg);
            result.warnings.push_back(msg);
            continue;
        }
        cache.push_back({e.id, e.class_label, e.severity.value_or(""), path});
        ++histogram[e.class_label];
    }
    if (cache.empty()) throw std::runtime_error("ingest produced no usable records");

    result.records = static_cast<int>(cache.size());
    for (const auto& [label, count] : histogram) result.class_histogram.push_back({label, count});
    result.manifest_path = (fs::path(cfg.out_dir) / "manifest.jsonl").string();
    atomic_write_file(result.manifest_path, manifest_cache_to_jsonl(cache));

    log << "ingested " << result.records << " records\n";
    for (const auto& [label, count] : result.class_histogram)
        log << "  " << label << ": " << count << "\n";
    for (const auto& w : result.warnings) log << "warning: " << w << "\n";
    return result;
}

DatasetManifest load_preprocessed(const RunConfig& cfg) {
    std::string manifest_path = (fs::path(cfg.out_dir) / "manifest.jsonl").string();
    auto cache = manifest_cache_from_jsonl(read_file(manifest_path));
    if (cache.empty()) throw std::runtime_error("manifest cache is empty: " + manifest_path);

    DatasetManifest manifest;
    for (const auto& e : cache) {
        ImageRecord rec;
        rec.id = e.id;
        rec.class_label = e.label;
        if (!e.severity.empty()) rec.severity = e.severity;
        GrayImage img = load_pgm_file(e.path);
        img = crop_black_border(img, cfg.crop_threshold);
        img = equalize_histogram(img);
        rec.image = quantize_gray_levels(img, cfg.gray_levels);
        manifest.records.push_back(std::move(rec));
    }
    manifest.class_names = collect_class_names(manifest.records);
    return manifest;
}

ExtractResult cmd_extract(const RunConfig& cfg, std::ostream& log) {
    DatasetManifest manifest = load_preprocessed(cfg);
    std::string fp = cfg.fingerprint();

    ExtractResult result;
    for (RoiMode mode : cfg.modes) {
        AssemblyReport rep;
        FeatureDataset ds = assemble_dataset(manifest, cfg.partition_config(mode), &rep);
        std::string stem = (fs::path(cfg.out_dir) / ("features_" + to_string(mode))).string();
        atomic_write_file(stem + ".csv", dataset_to_csv(ds, fp));
        atomic_write_file(stem + ".arff",
                          dataset_to_arff(ds, "texcat_" + to_string(mode), fp, &result.warnings));
        result.csv_paths.push_back(stem + ".csv");
        result.arff_paths.push_back(stem + ".arff");
        log << to_string(mode) << ": " << ds.rows.size() << " rows x " << ds.dim << " features";
        if (rep.degenerate_regions > 0) {
            log << " (" << rep.degenerate_regions << " degenerate regions across "
                << rep.flagged_ids.size() << " images)";
            result.warnings.push_back(to_string(mode) + ": " +
                                      std::to_string(rep.degenerate_regions) +
                                      " degenerate regions flagged");
        }
        log << "\n";
    }
    return result;
}

std::string cmd_reduce(const RunConfig& cfg, const std::string& features_csv, std::ostream& log) {
    FeatureDataset ds = dataset_from_csv(read_file(features_csv));
    FisherModel model = fit_fisherfaces(ds);
    FeatureDataset reduced = project_dataset(model, ds);

    std::string stem = (fs::path(cfg.out_dir) /
                        fs::path(features_csv).stem().string()).string();
    atomic_write_file(stem + "_fisher.model", serialize_fisher_model(model));
    std::string reduced_csv = stem + "_reduced.csv";
    atomic_write_file(reduced_csv, dataset_to_csv(reduced, cfg.fingerprint()));
    log << "reduced " << ds.dim << " -> " << model.output_dim << " dims\n";
    return reduced_csv;
}

std::string cmd_som(const RunConfig& cfg, const std::string& reduced_csv, int rows, int cols,
                    std::ostream& log) {
    FeatureDataset ds = dataset_from_csv(read_file(reduced_csv));
    SomConfig sc = cfg.som_config(rows, cols);
    auto vectors = dataset_vectors(ds);
    SomMap map = train_som(init_som(sc, vectors), vectors, sc);
    FeatureDataset quantized = quantize_replace(map, ds);

    std::string tag = std::to_string(rows) + "x" + std::to_string(cols);
    std::string stem = (fs::path(cfg.out_dir) / fs::path(reduced_csv).stem().string()).string();
    atomic_write_file(stem + "_som" + tag + ".map", serialize_som_map(map));
    std::string out_csv = stem + "_som" + tag + ".csv";
    atomic_write_file(out_csv, dataset_to_csv(quantized, cfg.fingerprint()));
    log << "trained " << tag << " map, mean QE " << format_sig(mean_quantization_error(map, vectors), 6)
        << "\n";
    return out_csv;
}

EvalReport cmd_evaluate(const RunConfig& cfg, RoiMode mode, SomUse som_use, int som_rows,
                        int som_cols, Classifier classifier, std::ostream& log) {
    DatasetManifest manifest = load_preprocessed(cfg);
    FeatureDataset ds = assemble_dataset(manifest, cfg.partition_config(mode));

    std::vector<std::string> labels;
    for (const auto& row : ds.rows) labels.push_back(row.label);
    FoldPlan plan = kfold_split(labels, cfg.cv_folds, cfg.cv_seed, cfg.cv_stratified);

    PipelineOptions opts;
    opts.fisherfaces = cfg.fisherfaces;
    opts.som_use = som_use;
    opts.som = cfg.som_config(som_rows, som_cols);
    opts.classifier = classifier;
    opts.leakage = cfg.leakage;
    opts.fingerprint = cfg.fingerprint();

    EvalReport report = evaluate_features(ds, plan, opts);
    log << to_string(mode) << " / " << to_string(som_use) << " / " << to_string(classifier)
        << ": accuracy " << percent(report.overall_accuracy) << "\n";
    return report;
}

RunResult cmd_run(const RunConfig& cfg, std::ostream& log) {
    DatasetManifest manifest = load_preprocessed(cfg);
    std::string fp = cfg.fingerprint();

    RunResult result;
    for (RoiMode mode : cfg.modes) {
        FeatureDataset ds = assemble_dataset(manifest, cfg.partition_config(mode));
        std::string arff_path =
            (fs::path(cfg.out_dir) / ("features_" + to_string(mode) + ".arff")).string();
        atomic_write_file(arff_path, dataset_to_arff(ds, "texcat_" + to_string(mode), fp));
        result.arff_paths.push_back(arff_path);

        std::vector<std::string> labels;
        for (const auto& row : ds.rows) labels.push_back(row.label);
        FoldPlan plan = kfold_split(labels, cfg.cv_folds, cfg.cv_seed, cfg.cv_stratified);

        auto eval_cell = [&](SomUse use, int rows, int cols, Classifier cls) {
            RunCell cell;
            cell.feature_set = base_name(mode);
            if (use == SomUse::replace) cell.feature_set = base_name(mode) + ":SOMBased";
            if (use == SomUse::augment) cell.feature_set = base_name(mode) + "+SOMBased";
            cell.map_size = use == SomUse::off
                                ? "-"
                                : std::to_string(rows) + "x" + std::to_string(cols);
            cell.classifier = to_string(cls);
            try {
                PipelineOptions opts;
                opts.fisherfaces = cfg.fisherfaces;
                opts.som_use = use;
                opts.som = cfg.som_config(rows, cols);
                opts.classifier = cls;
                opts.leakage = cfg.leakage;
                opts.fingerprint = fp;
                EvalReport rep = evaluate_features(ds, plan, opts);
                cell.accuracy = rep.overall_accuracy;
                cell.sensitivity = rep.sensitivity;
                cell.specificity = rep.specificity;
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
            }
            result.cells.push_back(cell);
            log << cell.feature_set << " " << cell.map_size << " " << cell.classifier << ": "
                << (cell.failed ? "FAILED (" + cell.error + ")" : percent(cell.accuracy)) << "\n";
        };

        for (Classifier cls : cfg.classifiers) {
            eval_cell(SomUse::off, 0, 0, cls);
            if (cfg.som_mode != SomUse::off)
                for (auto [r, c] : cfg.som_sizes) eval_cell(cfg.som_mode, r, c, cls);
        }
    }

    result.report_text_path = (fs::path(cfg.out_dir) / "report.txt").string();
    result.report_json_path = (fs::path(cfg.out_dir) / "report.json").string();
    atomic_write_file(result.report_text_path, render_report_text(cfg, result.cells));
    atomic_write_file(result.report_json_path, render_report_json(cfg, result.cells));
    return result;
}

std::string render_report_text(const RunConfig& cfg, const std::vector<RunCell>& cells) {
    std::ostringstream out;
    out << "# fingerprint=" << cfg.fingerprint() << "\n";
    for (RoiMode mode : cfg.modes) {
        std::string base = base_name(mode);
        out << "\n== " << base << " ==\n";
        out << "Classifier";
        out << "\t" << base;
        if (cfg.som_mode != SomUse::off)
            for (auto [r, c] : cfg.som_sizes)
                out << "\tSOM " << r << 'x' << c;
        out << "\n";
        for (Classifier cls : cfg.classifiers) {
            out << to_string(cls);
            for (const auto& cell : cells) {
                bool is_base = cell.feature_set == base && cell.map_size == "-";
                bool is_som = cell.feature_set.rfind(base, 0) == 0 && cell.map_size != "-";
                if ((is_base || is_som) && cell.classifier == to_string(cls))
                    out << "\t" << (cell.failed ? "FAIL" : percent(cell.accuracy));
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string render_report_json(const RunConfig& cfg, const std::vector<RunCell>& cells) {
    nlohmann::json j;
    j["fingerprint"] = cfg.fingerprint();
    j["config"] = cfg.serialize();
    j["cells"] = nlohmann::json::array();
    for (const auto& cell : cells) {
        nlohmann::json c;
        c["feature_set"] = cell.feature_set;
        c["map_size"] = cell.map_size;
        c["classifier"] = cell.classifier;
        if (cell.failed) {
            c["error"] = cell.error;
        } else {
            c["accuracy"] = cell.accuracy;
            c["sensitivity"] = cell.sensitivity;
            c["specificity"] = cell.specificity;
        }
        j["cells"].push_back(c);
    }
    return j.dump(2) + "\n";
}

}  // namespace texcat
