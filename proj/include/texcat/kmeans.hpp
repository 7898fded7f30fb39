#pragma once

#include <cstdint>
#include <vector>

namespace texcat {

struct ClusterModel {
    int k = 0;
    std::vector<std::vector<double>> centroids;  // k vectors
    std::vector<int> assignments;                // per point, nearest centroid (ties: lowest index)
    double objective = 0;                        // sum of squared point-to-centroid distances
};

// Seeded k-means++ init, Lloyd iterations until assignment fixpoint,
// 100 iterations, or objective improvement < 1e-6. Empty clusters are
// re-seeded from the point farthest from its centroid. Deterministic
// given (point order, k, seed). If k >= number of distinct points, each
// distinct point becomes its own centroid (remaining slots repeat
// distinct points cyclically, so exactly k centroids are returned).
ClusterModel kmeans(const std::vector<std::vector<double>>& points, int k, uint64_t seed);

}  // namespace texcat
