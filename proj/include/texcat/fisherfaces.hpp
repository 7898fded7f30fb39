#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "texcat/roi.hpp"

namespace texcat {

struct ScatterSet {
    Eigen::MatrixXd between;  // S_b
    Eigen::MatrixXd within;   // S_w
    Eigen::MatrixXd total;    // S_T = S_b + S_w
    Eigen::VectorXd mean;     // global mean
    std::vector<Eigen::VectorXd> class_means;
    std::vector<int> class_counts;
};

struct FisherModel {
    Eigen::VectorXd mean;       // raw-space column means
    Eigen::VectorXd scale;      // raw-space column stddevs (1 for constant columns)
    Eigen::MatrixXd w_pca;      // n x d_pca, column-orthonormal
    Eigen::MatrixXd w_fld;      // d_pca x m
    Eigen::MatrixXd w_opt;      // n x m, W_opt = W_pca * W_fld
    int output_dim = 0;         // m <= c-1

    int input_dim() const { return static_cast<int>(mean.size()); }
};

struct FisherOptions {
    bool standardize = true;    // z-score columns before PCA
    double rank_tol = 1e-10;    // relative eigenvalue cutoff
};

// labels are class indices in [0, c).
ScatterSet compute_scatter(const Eigen::MatrixXd& X, const std::vector<int>& labels);

// Rows of X are samples. Columns of the returned basis are the top
// eigenvectors of the total scatter, descending eigenvalue, rank-cut at
// eigenvalue > rank_tol * largest, sign-fixed (largest-magnitude
// component positive).
std::pair<Eigen::VectorXd, Eigen::MatrixXd> fit_pca(const Eigen::MatrixXd& X, int target_dim,
                                                    double rank_tol = 1e-10);

FisherModel fit_fisherfaces(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                            const FisherOptions& opts = {});

Eigen::VectorXd project(const FisherModel& model, const Eigen::VectorXd& x);

// Dataset-level wrappers (labels mapped through ds.class_names order).
FisherModel fit_fisherfaces(const FeatureDataset& ds, const FisherOptions& opts = {});
FeatureDataset project_dataset(const FisherModel& model, const FeatureDataset& ds);

// Flat decimal text serialization, 12 significant digits.
std::string serialize_fisher_model(const FisherModel& model);
FisherModel deserialize_fisher_model(const std::string& text);

}  // namespace texcat
