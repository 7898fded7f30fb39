#include "texcat/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace texcat {
namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

int class_index(const std::vector<std::string>& names, const std::string& label) {
    auto it = std::find(names.begin(), names.end(), label);
    if (it == names.end()) throw std::invalid_argument("label '" + label + "' not in class set");
    return static_cast<int>(it - names.begin());
}

FeatureDataset subset(const FeatureDataset& ds, const std::vector<size_t>& rows) {
    FeatureDataset out;
    out.dim = ds.dim;
    out.feature_names = ds.feature_names;
    out.class_names = ds.class_names;
    for (size_t i : rows) out.rows.push_back(ds.rows[i]);
    return out;
}

// Fold-fitted transform chain: Fisherfaces then SOM (replace or augment).
struct FittedChain {
    bool has_fisher = false;
    FisherModel fisher;
    SomUse som_use = SomUse::off;
    SomMap map;

    FeatureDataset apply(const FeatureDataset& ds) const {
        FeatureDataset cur = has_fisher ? project_dataset(fisher, ds) : ds;
        if (som_use == SomUse::off) return cur;
        FeatureDataset quantized = quantize_replace(map, cur);
        return som_use == SomUse::replace ? quantized : augment(cur, quantized);
    }
};

FittedChain fit_chain(const FeatureDataset& train, const PipelineOptions& opts) {
    FittedChain chain;
    chain.som_use = opts.som_use;
    FeatureDataset reduced = train;
    if (opts.fisherfaces) {
        chain.has_fisher = true;
        chain.fisher = fit_fisherfaces(train);
        reduced = project_dataset(chain.fisher, train);
    }
    if (opts.som_use != SomUse::off) {
        auto vectors = dataset_vectors(reduced);
        chain.map = train_som(init_som(opts.som, vectors), vectors, opts.som);
    }
    return chain;
}

}  // namespace

FoldPlan kfold_split(const std::vector<std::string>& labels, int k, uint64_t seed,
                     bool stratified) {
    size_t n = labels.size();
    if (k < 2) throw std::invalid_argument("kfold_split: k must be >= 2");
    if (static_cast<size_t>(k) > n) throw std::invalid_argument("kfold_split: k exceeds sample count");

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.stratified = stratified;
    plan.assignment.assign(n, -1);

    std::mt19937_64 rng(seed);
    if (!stratified) {
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (size_t i = 0; i < n; ++i) plan.assignment[order[i]] = static_cast<int>(i % k);
    } else {
        std::vector<std::string> classes;
        for (const auto& l : labels)
            if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
        // The fold cursor carries across classes so overall fold sizes also
        // stay within one of each other.
        int cursor = 0;
        for (const auto& cls : classes) {
            std::vector<size_t> members;
            for (size_t i = 0; i < n; ++i)
                if (labels[i] == cls) members.push_back(i);
            std::shuffle(members.begin(), members.end(), rng);
            for (size_t i : members) plan.assignment[i] = cursor++ % k;
        }
    }
    return plan;
}

ConfusionMatrix make_confusion(int classes) {
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(static_cast<size_t>(classes) * classes, 0);
    return cm;
}

long ConfusionMatrix::total() const {
    long t = 0;
    for (long v : counts) t += v;
    return t;
}

long ConfusionMatrix::trace() const {
    long t = 0;
    for (int i = 0; i < classes; ++i) t += at(i, i);
    return t;
}

void add_confusion(ConfusionMatrix& acc, const ConfusionMatrix& part) {
    if (acc.classes != part.classes) throw std::invalid_argument("confusion size mismatch");
    for (size_t i = 0; i < acc.counts.size(); ++i) acc.counts[i] += part.counts[i];
}

BinaryRates binarized_rates(const ConfusionMatrix& cm, int normal_index) {
    long tp = 0, fn = 0, tn = 0, fp = 0;
    for (int t = 0; t < cm.classes; ++t)
        for (int p = 0; p < cm.classes; ++p) {
            bool true_abnormal = t != normal_index;
            bool pred_abnormal = p != normal_index;
            long v = cm.at(t, p);
            if (true_abnormal && pred_abnormal) tp += v;
            else if (true_abnormal) fn += v;
            else if (pred_abnormal) fp += v;
            else tn += v;
        }
    BinaryRates r;
    r.sensitivity = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    r.specificity = tn + fp > 0 ? static_cast<double>(tn) / (tn + fp) : 0.0;
    return r;
}

std::string classify_1nn(const FeatureDataset& train, const std::vector<double>& x) {
    if (train.rows.empty()) throw std::invalid_argument("classify_1nn: empty training set");
    if (x.size() != static_cast<size_t>(train.dim))
        throw std::invalid_argument("classify_1nn: dimension mismatch");
    size_t best = 0;
    double best_d = sq_dist(train.rows[0].values, x);
    for (size_t i = 1; i < train.rows.size(); ++i) {
        double d = sq_dist(train.rows[i].values, x);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return train.rows[best].label;
}

GnbModel fit_gnb(const FeatureDataset& train) {
    GnbModel m;
    for (const auto& name : train.class_names)
        for (const auto& row : train.rows)
            if (row.label == name) {
                m.class_names.push_back(name);
                break;
            }
    size_t c = m.class_names.size();
    if (c < 1) throw std::invalid_argument("fit_gnb: empty training set");
    m.log_prior.assign(c, 0);
    m.mean.assign(c, std::vector<double>(train.dim, 0));
    m.var.assign(c, std::vector<double>(train.dim, 0));
    std::vector<long> counts(c, 0);
    for (const auto& row : train.rows) {
        int k = class_index(m.class_names, row.label);
        ++counts[k];
        for (int j = 0; j < train.dim; ++j) m.mean[k][j] += row.values[j];
    }
    for (size_t k = 0; k < c; ++k) {
        if (counts[k] < 2)
            throw std::invalid_argument("fit_gnb: class '" + m.class_names[k] +
                                        "' has fewer than 2 training rows");
        for (int j = 0; j < train.dim; ++j) m.mean[k][j] /= counts[k];
        m.log_prior[k] = std::log(static_cast<double>(counts[k]) / train.rows.size());
    }
    for (const auto& row : train.rows) {
        int k = class_index(m.class_names, row.label);
        for (int j = 0; j < train.dim; ++j) {
            double d = row.values[j] - m.mean[k][j];
            m.var[k][j] += d * d;
        }
    }
    for (size_t k = 0; k < c; ++k)
        for (int j = 0; j < train.dim; ++j) m.var[k][j] = std::max(m.var[k][j] / counts[k], 1e-9);
    return m;
}

std::string predict_gnb(const GnbModel& m, const std::vector<double>& x) {
    if (m.mean.empty() || x.size() != m.mean[0].size())
        throw std::invalid_argument("predict_gnb: dimension mismatch");
    size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < m.class_names.size(); ++k) {
        double score = m.log_prior[k];
        for (size_t j = 0; j < x.size(); ++j) {
            double d = x[j] - m.mean[k][j];
            score += -0.5 * std::log(2.0 * M_PI * m.var[k][j]) - d * d / (2.0 * m.var[k][j]);
        }
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }
    return m.class_names[best];
}

std::string to_string(Classifier c) { return c == Classifier::one_nn ? "1nn" : "gnb"; }

Classifier classifier_from_string(const std::string& s) {
    if (s == "1nn") return Classifier::one_nn;
    if (s == "gnb") return Classifier::gnb;
    throw std::invalid_argument("unknown classifier '" + s + "'");
}

std::string to_string(SomUse u) {
    switch (u) {
        case SomUse::off: return "off";
        case SomUse::replace: return "replace";
        case SomUse::augment: return "augment";
    }
    return "?";
}

SomUse som_use_from_string(const std::string& s) {
    if (s == "off") return SomUse::off;
    if (s == "replace") return SomUse::replace;
    if (s == "augment") return SomUse::augment;
    throw std::invalid_argument("unknown som mode '" + s + "'");
}

std::string to_string(LeakageMode m) { return m == LeakageMode::per_fold ? "per_fold" : "paper"; }

LeakageMode leakage_mode_from_string(const std::string& s) {
    if (s == "per_fold") return LeakageMode::per_fold;
    if (s == "paper") return LeakageMode::paper;
    throw std::invalid_argument("unknown leakage mode '" + s + "'");
}

EvalReport evaluate_features(const FeatureDataset& features, const FoldPlan& plan,
                             const PipelineOptions& opts) {
    size_t n = features.rows.size();
    if (plan.assignment.size() != n)
        throw std::invalid_argument("evaluate_features: fold plan does not match dataset");

    int c = static_cast<int>(features.class_names.size());
    EvalReport report;
    report.class_names = features.class_names;
    report.leakage_mode = to_string(opts.leakage);
    report.fingerprint = opts.fingerprint;
    report.pooled = make_confusion(c);

    FittedChain shared_chain;
    FeatureDataset shared_transformed;
    if (opts.leakage == LeakageMode::paper) {
        shared_chain = fit_chain(features, opts);
        shared_transformed = shared_chain.apply(features);
    }

    std::vector<int> tested(n, 0);
    for (int fold = 0; fold < plan.k; ++fold) {
        std::vector<size_t> train_rows, test_rows;
        for (size_t i = 0; i < n; ++i)
            (plan.assignment[i] == fold ? test_rows : train_rows).push_back(i);

        ConfusionMatrix cm = make_confusion(c);
        try {
            FeatureDataset train_t, test_t;
            if (opts.leakage == LeakageMode::per_fold) {
                FeatureDataset train = subset(features, train_rows);
                FittedChain chain = fit_chain(train, opts);
                train_t = chain.apply(train);
                test_t = chain.apply(subset(features, test_rows));
            } else {
                train_t = subset(shared_transformed, train_rows);
                test_t = subset(shared_transformed, test_rows);
            }

            GnbModel gnb;
            if (opts.classifier == Classifier::gnb) gnb = fit_gnb(train_t);
            for (const auto& row : test_t.rows) {
                std::string pred = opts.classifier == Classifier::one_nn
                                       ? classify_1nn(train_t, row.values)
                                       : predict_gnb(gnb, row.values);
                ++cm.at(class_index(features.class_names, row.label),
                        class_index(features.class_names, pred));
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("fold " + std::to_string(fold) + ": " + e.what());
        }
        for (size_t i : test_rows) ++tested[i];
        add_confusion(report.pooled, cm);
        report.per_fold.push_back(std::move(cm));
    }

    for (size_t i = 0; i < n; ++i)
        if (tested[i] != 1)
            throw std::logic_error("evaluate_features: sample " + std::to_string(i) +
                                   " tested " + std::to_string(tested[i]) + " times");

    report.overall_accuracy =
        report.pooled.total() > 0
            ? static_cast<double>(report.pooled.trace()) / report.pooled.total()
            : 0.0;
    int normal = 0;
    auto it = std::find(features.class_names.begin(), features.class_names.end(),
                        opts.normal_label);
    if (it != features.class_names.end())
        normal = static_cast<int>(it - features.class_names.begin());
    BinaryRates rates = binarized_rates(report.pooled, normal);
    report.sensitivity = rates.sensitivity;
    report.specificity = rates.specificity;
    return report;
}

EvalReport evaluate_pipeline(const DatasetManifest& manifest, const PartitionConfig& cfg,
                             const FoldPlan& plan, const PipelineOptions& opts) {
    return evaluate_features(assemble_dataset(manifest, cfg), plan, opts);
}

}  // namespace texcat
