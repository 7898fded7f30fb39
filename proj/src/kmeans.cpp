#include "texcat/kmeans.hpp"

#include <cmath>
#include <limits>
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

int nearest(const std::vector<std::vector<double>>& centroids, const std::vector<double>& p) {
    int best = 0;
    double best_d = sq_dist(centroids[0], p);
    for (size_t c = 1; c < centroids.size(); ++c) {
        double d = sq_dist(centroids[c], p);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

std::vector<std::vector<double>> distinct_points(const std::vector<std::vector<double>>& pts) {
    std::vector<std::vector<double>> out;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : out)
            if (q == p) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    return out;
}

}  // namespace

ClusterModel kmeans(const std::vector<std::vector<double>>& points, int k, uint64_t seed) {
    if (points.empty()) throw std::invalid_argument("kmeans: empty point set");
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    size_t n = points.size();

    ClusterModel model;
    model.k = k;

    auto distinct = distinct_points(points);
    if (static_cast<int>(distinct.size()) <= k) {
        // Each distinct point its own centroid; extra slots repeat points
        // cyclically so the centroid count stays k.
        model.centroids = distinct;
        for (size_t i = distinct.size(); i < static_cast<size_t>(k); ++i)
            model.centroids.push_back(distinct[i % distinct.size()]);
        model.assignments.resize(n);
        model.objective = 0;
        for (size_t i = 0; i < n; ++i) model.assignments[i] = nearest(model.centroids, points[i]);
        return model;
    }

    std::mt19937_64 rng(seed);

    // k-means++ seeding
    model.centroids.clear();
    std::uniform_int_distribution<size_t> first(0, n - 1);
    model.centroids.push_back(points[first(rng)]);
    std::vector<double> d2(n);
    while (static_cast<int>(model.centroids.size()) < k) {
        double total = 0;
        for (size_t i = 0; i < n; ++i) {
            double d = sq_dist(points[i], model.centroids[0]);
            for (size_t c = 1; c < model.centroids.size(); ++c)
                d = std::min(d, sq_dist(points[i], model.centroids[c]));
            d2[i] = d;
            total += d;
        }
        std::uniform_real_distribution<double> u(0.0, total);
        double r = u(rng);
        size_t pick = n - 1;
        double acc = 0;
        for (size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= r && d2[i] > 0) {
                pick = i;
                break;
            }
        }
        model.centroids.push_back(points[pick]);
    }

    size_t dim = points[0].size();
    model.assignments.assign(n, -1);
    double prev_objective = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        double objective = 0;
        for (size_t i = 0; i < n; ++i) {
            int a = nearest(model.centroids, points[i]);
            objective += sq_dist(model.centroids[a], points[i]);
            if (a != model.assignments[i]) {
                model.assignments[i] = a;
                changed = true;
            }
        }
        if (objective > prev_objective + 1e-9 * (1.0 + prev_objective))
            throw std::logic_error("kmeans: objective increased across Lloyd iteration");
        model.objective = objective;
        if (!changed || prev_objective - objective < 1e-6) break;
        prev_objective = objective;

        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<long> counts(k, 0);
        for (size_t i = 0; i < n; ++i) {
            int a = model.assignments[i];
            ++counts[a];
            for (size_t d = 0; d < dim; ++d) sums[a][d] += points[i][d];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (size_t d = 0; d < dim; ++d) model.centroids[c][d] = sums[c][d] / counts[c];
            } else {
                // re-seed from the point farthest from its centroid
                size_t far = 0;
                double far_d = -1;
                for (size_t i = 0; i < n; ++i) {
                    double d = sq_dist(model.centroids[model.assignments[i]], points[i]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                model.centroids[c] = points[far];
            }
        }
    }

    // Final pass so assignments/objective match the returned centroids.
    model.objective = 0;
    for (size_t i = 0; i < n; ++i) {
        model.assignments[i] = nearest(model.centroids, points[i]);
        model.objective += sq_dist(model.centroids[model.assignments[i]], points[i]);
    }
    return model;
}

}  // namespace texcat
