#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "texcat/fisherfaces.hpp"
#include "texcat/roi.hpp"
#include "texcat/som.hpp"

namespace texcat {

struct FoldPlan {
    int k = 0;
    std::vector<int> assignment;  // fold index per row
    uint64_t seed = 0;
    bool stratified = true;
};

FoldPlan kfold_split(const std::vector<std::string>& labels, int k, uint64_t seed, bool stratified);

struct ConfusionMatrix {
    int classes = 0;
    std::vector<long> counts;  // rows = true class, cols = predicted

    long& at(int truth, int pred) { return counts[static_cast<size_t>(truth) * classes + pred]; }
    long at(int truth, int pred) const { return counts[static_cast<size_t>(truth) * classes + pred]; }
    long total() const;
    long trace() const;
};

ConfusionMatrix make_confusion(int classes);
void add_confusion(ConfusionMatrix& acc, const ConfusionMatrix& part);

// Sensitivity/specificity under normal-vs-abnormal binarization: the class
// at index normal_index is negative, everything else positive.
struct BinaryRates {
    double sensitivity = 0;
    double specificity = 0;
};
BinaryRates binarized_rates(const ConfusionMatrix& cm, int normal_index);

struct EvalReport {
    std::vector<ConfusionMatrix> per_fold;
    ConfusionMatrix pooled;
    double overall_accuracy = 0;
    double sensitivity = 0;
    double specificity = 0;
    std::vector<std::string> class_names;
    std::string leakage_mode;
    std::string fingerprint;
    std::vector<std::string> warnings;
};

std::string classify_1nn(const FeatureDataset& train, const std::vector<double>& x);

struct GnbModel {
    std::vector<std::string> class_names;
    std::vector<double> log_prior;
    std::vector<std::vector<double>> mean;  // per class, per feature
    std::vector<std::vector<double>> var;   // floored at 1e-9
};
GnbModel fit_gnb(const FeatureDataset& train);
std::string predict_gnb(const GnbModel& model, const std::vector<double>& x);

enum class Classifier { one_nn, gnb };
std::string to_string(Classifier c);
Classifier classifier_from_string(const std::string& s);

enum class SomUse { off, replace, augment };
std::string to_string(SomUse u);
SomUse som_use_from_string(const std::string& s);

enum class LeakageMode { per_fold, paper };
std::string to_string(LeakageMode m);
LeakageMode leakage_mode_from_string(const std::string& s);

struct PipelineOptions {
    bool fisherfaces = true;
    SomUse som_use = SomUse::off;
    SomConfig som;
    Classifier classifier = Classifier::one_nn;
    LeakageMode leakage = LeakageMode::per_fold;
    std::string normal_label = "NORM";  // falls back to class_names[0] when absent
    std::string fingerprint;
};

// Cross-validated evaluation of an already-extracted feature dataset.
// per_fold mode fits standardization, Fisherfaces and the SOM on each
// training fold only; paper mode fits them once on the full dataset.
EvalReport evaluate_features(const FeatureDataset& features, const FoldPlan& plan,
                             const PipelineOptions& opts);

// Convenience wrapper: extract features from the manifest first.
EvalReport evaluate_pipeline(const DatasetManifest& manifest, const PartitionConfig& cfg,
                             const FoldPlan& plan, const PipelineOptions& opts);

}  // namespace texcat
