#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "texcat/roi.hpp"

namespace texcat {

struct SomConfig {
    int rows = 10, cols = 10;
    long iterations = 0;       // 0 -> 500 * rows * cols
    double alpha0 = 0.5;
    double sigma0 = 0;         // 0 -> max(rows, cols) / 2
    double sigma_final = 0.5;
    uint64_t seed = 1;

    long effective_iterations() const { return iterations > 0 ? iterations : 500L * rows * cols; }
    double effective_sigma0() const;
};

struct SomMap {
    int rows = 0, cols = 0;
    int dim = 0;  // prototype dimension S
    std::vector<std::vector<double>> prototypes;  // row-major over the grid

    int units() const { return rows * cols; }
    // Integer lattice position of a unit.
    std::pair<int, int> position(int unit) const { return {unit / cols, unit % cols}; }
};

// alpha(t) = alpha0 * (1 - t/T), linear; sigma(t) geometric from sigma0 to sigma_final.
double som_alpha(const SomConfig& cfg, long t);
double som_sigma(const SomConfig& cfg, long t);

// Components drawn uniformly from per-component [min, max] over the data.
SomMap init_som(const SomConfig& cfg, const std::vector<std::vector<double>>& data);

// argmin over Euclidean distance; ties -> lowest row-major index.
int find_bmu(const SomMap& map, const std::vector<double>& x);

// Gaussian kernel over grid-coordinate Euclidean distance.
double neighborhood(const SomMap& map, int winner, int unit, double sigma);

// Sequential training: seed-shuffled presentation order, reshuffled each epoch.
SomMap train_som(SomMap map, const std::vector<std::vector<double>>& data, const SomConfig& cfg);

double mean_quantization_error(const SomMap& map, const std::vector<std::vector<double>>& data);

// Each row's vector replaced by its BMU prototype; labels/order preserved.
FeatureDataset quantize_replace(const SomMap& map, const FeatureDataset& data);

// Per-row concatenation (original || som_based); names suffixed by provenance.
FeatureDataset augment(const FeatureDataset& original, const FeatureDataset& som_based);

std::string serialize_som_map(const SomMap& map);
SomMap deserialize_som_map(const std::string& text);

std::vector<std::vector<double>> dataset_vectors(const FeatureDataset& ds);

}  // namespace texcat
