#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "texcat/eval.hpp"
#include "texcat/roi.hpp"
#include "texcat/som.hpp"

namespace texcat {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One plain-text key=value configuration file drives everything; a run is
// reproducible from the config alone.
struct RunConfig {
    std::string data_root;
    std::string index_file;
    std::string out_dir = "out";

    int crop_threshold = 10;
    int gray_levels = 32;

    int sub_rows = 3, sub_cols = 2;
    int bloc_rows = 4, bloc_cols = 2;
    int clusters = 3;
    uint64_t kmeans_seed = 1;
    std::vector<RoiMode> modes = {RoiMode::fixed_bloc, RoiMode::pixel_wise, RoiMode::bloc_wise};

    bool fisherfaces = true;
    SomUse som_mode = SomUse::replace;
    std::vector<std::pair<int, int>> som_sizes = {{5, 5}, {10, 10}, {15, 15}};
    long som_iterations = 0;
    double som_alpha0 = 0.5;
    double som_sigma_final = 0.5;
    uint64_t som_seed = 1;

    std::vector<Classifier> classifiers = {Classifier::one_nn, Classifier::gnb};
    int cv_folds = 10;
    uint64_t cv_seed = 1;
    bool cv_stratified = true;
    LeakageMode leakage = LeakageMode::per_fold;

    bool strict = false;

    static RunConfig parse(const std::string& text);
    static RunConfig parse_file(const std::string& path);  // applies env overrides
    std::string serialize() const;
    std::string fingerprint() const;  // FNV-1a over the canonical serialization

    PartitionConfig partition_config(RoiMode mode) const;
    SomConfig som_config(int rows, int cols) const;
};

struct IngestResult {
    int records = 0;
    std::vector<std::pair<std::string, int>> class_histogram;
    std::vector<std::string> warnings;
    std::string manifest_path;
};
IngestResult cmd_ingest(const RunConfig& cfg, std::ostream& log);

// Loads the manifest cache and the referenced images, applying
// crop -> equalize -> quantize.
DatasetManifest load_preprocessed(const RunConfig& cfg);

struct ExtractResult {
    std::vector<std::string> csv_paths;
    std::vector<std::string> arff_paths;
    std::vector<std::string> warnings;
};
ExtractResult cmd_extract(const RunConfig& cfg, std::ostream& log);

std::string cmd_reduce(const RunConfig& cfg, const std::string& features_csv, std::ostream& log);
std::string cmd_som(const RunConfig& cfg, const std::string& reduced_csv, int rows, int cols,
                    std::ostream& log);

EvalReport cmd_evaluate(const RunConfig& cfg, RoiMode mode, SomUse som_use, int som_rows,
                        int som_cols, Classifier classifier, std::ostream& log);

struct RunCell {
    std::string feature_set;   // e.g. "FixedBloc", "PixelWise+SOMBased"
    std::string map_size;      // "-", "5x5", ...
    std::string classifier;
    double accuracy = 0;
    double sensitivity = 0;
    double specificity = 0;
    bool failed = false;
    std::string error;
};

struct RunResult {
    std::vector<RunCell> cells;
    std::string report_text_path;
    std::string report_json_path;
    std::vector<std::string> arff_paths;
};
RunResult cmd_run(const RunConfig& cfg, std::ostream& log);

std::string render_report_text(const RunConfig& cfg, const std::vector<RunCell>& cells);
std::string render_report_json(const RunConfig& cfg, const std::vector<RunCell>& cells);

}  // namespace texcat
