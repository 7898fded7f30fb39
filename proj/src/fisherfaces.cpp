#include "texcat/fisherfaces.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "texcat/dataset_io.hpp"

namespace texcat {
namespace {

// Largest-magnitude component of each column made positive.
void fix_signs(Eigen::MatrixXd& w) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
        Eigen::Index imax = 0;
        w.col(c).cwiseAbs().maxCoeff(&imax);
        if (w(imax, c) < 0) w.col(c) = -w.col(c);
    }
}

std::vector<int> label_indices(const FeatureDataset& ds, std::vector<std::string>* present_out) {
    std::vector<std::string> present;
    for (const auto& name : ds.class_names) {
        for (const auto& row : ds.rows)
            if (row.label == name) {
                present.push_back(name);
                break;
            }
    }
    std::vector<int> labels;
    labels.reserve(ds.rows.size());
    for (const auto& row : ds.rows) {
        auto it = std::find(present.begin(), present.end(), row.label);
        if (it == present.end())
            throw std::invalid_argument("label '" + row.label + "' not in class_names");
        labels.push_back(static_cast<int>(it - present.begin()));
    }
    if (present_out) *present_out = present;
    return labels;
}

Eigen::MatrixXd dataset_matrix(const FeatureDataset& ds) {
    Eigen::MatrixXd X(ds.rows.size(), ds.dim);
    for (size_t i = 0; i < ds.rows.size(); ++i)
        for (int j = 0; j < ds.dim; ++j) X(static_cast<Eigen::Index>(i), j) = ds.rows[i].values[j];
    return X;
}

}  // namespace

ScatterSet compute_scatter(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
    const Eigen::Index n_samples = X.rows();
    const Eigen::Index dim = X.cols();
    if (static_cast<size_t>(n_samples) != labels.size())
        throw std::invalid_argument("compute_scatter: label count mismatch");
    int c = 0;
    for (int l : labels) c = std::max(c, l + 1);
    if (c < 2) throw std::invalid_argument("compute_scatter: need at least 2 classes");

    ScatterSet s;
    s.mean = X.colwise().mean();
    s.class_counts.assign(c, 0);
    s.class_means.assign(c, Eigen::VectorXd::Zero(dim));
    for (Eigen::Index i = 0; i < n_samples; ++i) {
        ++s.class_counts[labels[i]];
        s.class_means[labels[i]] += X.row(i).transpose();
    }
    for (int k = 0; k < c; ++k) {
        if (s.class_counts[k] == 0)
            throw std::invalid_argument("compute_scatter: class " + std::to_string(k) + " empty");
        s.class_means[k] /= s.class_counts[k];
    }

    s.between = Eigen::MatrixXd::Zero(dim, dim);
    s.within = Eigen::MatrixXd::Zero(dim, dim);
    s.total = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < c; ++k) {
        Eigen::VectorXd d = s.class_means[k] - s.mean;
        s.between += s.class_counts[k] * d * d.transpose();
    }
    for (Eigen::Index i = 0; i < n_samples; ++i) {
        Eigen::VectorXd dw = X.row(i).transpose() - s.class_means[labels[i]];
        s.within += dw * dw.transpose();
        Eigen::VectorXd dt = X.row(i).transpose() - s.mean;
        s.total += dt * dt.transpose();
    }
    return s;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> fit_pca(const Eigen::MatrixXd& X, int target_dim,
                                                    double rank_tol) {
    if (X.rows() < 2) throw std::invalid_argument("fit_pca: need at least 2 samples");
    Eigen::VectorXd mean = X.colwise().mean();
    Eigen::MatrixXd centered = X.rowwise() - mean.transpose();
    Eigen::MatrixXd total = centered.transpose() * centered;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(total);
    if (es.info() != Eigen::Success) throw std::runtime_error("fit_pca: eigensolver failed");
    Eigen::VectorXd evals = es.eigenvalues();  // ascending
    double lmax = evals(evals.size() - 1);
    if (lmax <= 0) throw std::invalid_argument("fit_pca: zero-variance data");

    int rank = 0;
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals(i) > rank_tol * lmax) ++rank;
    int d = std::min(target_dim, rank);
    if (d < 1) throw std::invalid_argument("fit_pca: no retained components");

    Eigen::MatrixXd w(X.cols(), d);
    for (int j = 0; j < d; ++j) w.col(j) = es.eigenvectors().col(evals.size() - 1 - j);
    fix_signs(w);
    return {mean, w};
}

FisherModel fit_fisherfaces(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                            const FisherOptions& opts) {
    const Eigen::Index n_samples = X.rows();
    const Eigen::Index dim = X.cols();
    int c = 0;
    for (int l : labels) c = std::max(c, l + 1);
    if (c < 2) throw std::invalid_argument("fit_fisherfaces: need at least 2 classes");
    if (n_samples <= c) throw std::invalid_argument("fit_fisherfaces: need N > c samples");

    FisherModel model;
    model.mean = X.colwise().mean();
    model.scale = Eigen::VectorXd::Ones(dim);
    if (opts.standardize) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            double var = (X.col(j).array() - model.mean(j)).square().sum() / n_samples;
            if (var > 0) model.scale(j) = std::sqrt(var);
        }
    }
    Eigen::MatrixXd z = (X.rowwise() - model.mean.transpose()) *
                        model.scale.cwiseInverse().asDiagonal();

    auto [pca_mean, w_pca] = fit_pca(z, static_cast<int>(n_samples) - c, opts.rank_tol);
    (void)pca_mean;  // z is already centered
    model.w_pca = w_pca;
    Eigen::MatrixXd projected = z * w_pca;

    ScatterSet s = compute_scatter(projected, labels);

    // Whiten the projected within-class scatter, Cholesky when positive
    // definite, otherwise an eigen-floored inverse square root.
    const Eigen::Index d_pca = w_pca.cols();
    Eigen::MatrixXd b;                // whitened between-class scatter
    Eigen::MatrixXd unwhiten;        // maps whitened directions back: W_fld = unwhiten * V
    Eigen::LLT<Eigen::MatrixXd> llt(s.within);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd l = llt.matrixL();
        Eigen::MatrixXd linv_sb = l.triangularView<Eigen::Lower>().solve(s.between);
        b = l.triangularView<Eigen::Lower>().solve(linv_sb.transpose()).transpose();
        b = 0.5 * (b + b.transpose());
        unwhiten = l.transpose().triangularView<Eigen::Upper>()
                       .solve(Eigen::MatrixXd::Identity(d_pca, d_pca));
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ew(s.within);
        Eigen::VectorXd lam = ew.eigenvalues();
        double lmax = std::max(lam.maxCoeff(), 0.0);
        double floor_val = std::max(opts.rank_tol, opts.rank_tol * lmax);
        Eigen::VectorXd floored = lam.cwiseMax(floor_val);
        double cond = floored.maxCoeff() / floored.minCoeff();
        if (!(cond < 1e15))
            throw std::runtime_error("fit_fisherfaces: projected S_w singular, condition " +
                                     std::to_string(cond));
        Eigen::MatrixXd inv_sqrt = ew.eigenvectors() *
                                   floored.cwiseSqrt().cwiseInverse().asDiagonal() *
                                   ew.eigenvectors().transpose();
        b = inv_sqrt * s.between * inv_sqrt;
        b = 0.5 * (b + b.transpose());
        unwhiten = inv_sqrt;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(b);
    Eigen::VectorXd bvals = eb.eigenvalues();  // ascending
    double bmax = bvals(bvals.size() - 1);
    int rank_b = 0;
    if (bmax > 0)
        for (Eigen::Index i = 0; i < bvals.size(); ++i)
            if (bvals(i) > opts.rank_tol * bmax) ++rank_b;
    int m = std::min(c - 1, rank_b);
    model.output_dim = m;

    model.w_fld = Eigen::MatrixXd(d_pca, m);
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd v = unwhiten * eb.eigenvectors().col(bvals.size() - 1 - j);
        model.w_fld.col(j) = v / v.norm();
    }
    fix_signs(model.w_fld);
    model.w_opt = model.w_pca * model.w_fld;
    return model;
}

Eigen::VectorXd project(const FisherModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.mean.size())
        throw std::invalid_argument("project: dimension mismatch (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(model.mean.size()) + ")");
    return model.w_opt.transpose() * ((x - model.mean).cwiseQuotient(model.scale));
}

FisherModel fit_fisherfaces(const FeatureDataset& ds, const FisherOptions& opts) {
    std::vector<int> labels = label_indices(ds, nullptr);
    return fit_fisherfaces(dataset_matrix(ds), labels, opts);
}

FeatureDataset project_dataset(const FisherModel& model, const FeatureDataset& ds) {
    FeatureDataset out;
    out.dim = model.output_dim;
    out.class_names = ds.class_names;
    for (int j = 0; j < model.output_dim; ++j)
        out.feature_names.push_back("fisher" + std::to_string(j));
    for (const auto& row : ds.rows) {
        Eigen::VectorXd x(row.values.size());
        for (size_t i = 0; i < row.values.size(); ++i) x(static_cast<Eigen::Index>(i)) = row.values[i];
        Eigen::VectorXd y = project(model, x);
        out.rows.push_back({row.id, std::vector<double>(y.data(), y.data() + y.size()), row.label});
    }
    return out;
}

std::string serialize_fisher_model(const FisherModel& model) {
    std::ostringstream out;
    out << "fishermodel\n";
    out << model.mean.size() << ' ' << model.w_pca.cols() << ' ' << model.output_dim << '\n';
    auto write_vec = [&](const Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (i) out << ' ';
            out << format_sig(v(i), 12);
        }
        out << '\n';
    };
    write_vec(model.mean);
    write_vec(model.scale);
    for (Eigen::Index r = 0; r < model.w_pca.rows(); ++r) write_vec(model.w_pca.row(r));
    for (Eigen::Index r = 0; r < model.w_fld.rows(); ++r) write_vec(model.w_fld.row(r));
    return out.str();
}

FisherModel deserialize_fisher_model(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    in >> magic;
    if (magic != "fishermodel") throw std::runtime_error("not a fisher model file");
    Eigen::Index n, d_pca;
    int m;
    in >> n >> d_pca >> m;
    if (!in || n < 1 || d_pca < 0 || m < 0) throw std::runtime_error("bad fisher model header");
    FisherModel model;
    model.output_dim = m;
    model.mean.resize(n);
    model.scale.resize(n);
    model.w_pca.resize(n, d_pca);
    model.w_fld.resize(d_pca, m);
    for (Eigen::Index i = 0; i < n; ++i) in >> model.mean(i);
    for (Eigen::Index i = 0; i < n; ++i) in >> model.scale(i);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < d_pca; ++c) in >> model.w_pca(r, c);
    for (Eigen::Index r = 0; r < d_pca; ++r)
        for (int c = 0; c < m; ++c) in >> model.w_fld(r, c);
    if (!in) throw std::runtime_error("truncated fisher model file");
    model.w_opt = model.w_pca * model.w_fld;
    return model;
}

}  // namespace texcat
