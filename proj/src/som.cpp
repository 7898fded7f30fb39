#include "texcat/som.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "texcat/dataset_io.hpp"

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

}  // namespace

double SomConfig::effective_sigma0() const {
    return sigma0 > 0 ? sigma0 : std::max(std::max(rows, cols) / 2.0, sigma_final);
}

double som_alpha(const SomConfig& cfg, long t) {
    long total = cfg.effective_iterations();
    return cfg.alpha0 * (1.0 - static_cast<double>(t) / total);
}

double som_sigma(const SomConfig& cfg, long t) {
    long total = cfg.effective_iterations();
    double s0 = cfg.effective_sigma0();
    return s0 * std::pow(cfg.sigma_final / s0, static_cast<double>(t) / total);
}

SomMap init_som(const SomConfig& cfg, const std::vector<std::vector<double>>& data) {
    if (data.empty()) throw std::invalid_argument("init_som: empty data");
    if (cfg.rows < 1 || cfg.cols < 1) throw std::invalid_argument("init_som: bad grid shape");
    size_t dim = data[0].size();
    std::vector<double> lo(data[0]), hi(data[0]);
    for (const auto& v : data)
        for (size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], v[d]);
            hi[d] = std::max(hi[d], v[d]);
        }
    SomMap map;
    map.rows = cfg.rows;
    map.cols = cfg.cols;
    map.dim = static_cast<int>(dim);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    map.prototypes.assign(map.units(), std::vector<double>(dim));
    for (auto& proto : map.prototypes)
        for (size_t d = 0; d < dim; ++d) proto[d] = lo[d] + u(rng) * (hi[d] - lo[d]);
    return map;
}

int find_bmu(const SomMap& map, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != map.dim)
        throw std::invalid_argument("find_bmu: dimension mismatch");
    int best = 0;
    double best_d = sq_dist(map.prototypes[0], x);
    for (int i = 1; i < map.units(); ++i) {
        double d = sq_dist(map.prototypes[i], x);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

double neighborhood(const SomMap& map, int winner, int unit, double sigma) {
    if (sigma <= 0) throw std::invalid_argument("neighborhood: sigma must be > 0");
    auto [wr, wc] = map.position(winner);
    auto [ur, uc] = map.position(unit);
    double d2 = static_cast<double>((wr - ur) * (wr - ur) + (wc - uc) * (wc - uc));
    return std::exp(-d2 / (2.0 * sigma * sigma));
}

SomMap train_som(SomMap map, const std::vector<std::vector<double>>& data, const SomConfig& cfg) {
    if (data.empty()) throw std::invalid_argument("train_som: empty data");
    if (static_cast<int>(data[0].size()) != map.dim)
        throw std::invalid_argument("train_som: dimension mismatch");

    long total = cfg.effective_iterations();
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    for (long t = 0; t < total; ++t) {
        size_t pos = static_cast<size_t>(t) % data.size();
        if (pos == 0) std::shuffle(order.begin(), order.end(), rng);
        const auto& x = data[order[pos]];

        double alpha = som_alpha(cfg, t);
        double sigma = som_sigma(cfg, t);
        int winner = find_bmu(map, x);
        for (int i = 0; i < map.units(); ++i) {
            double h = neighborhood(map, winner, i, sigma);
            double step = alpha * h;
            auto& w = map.prototypes[i];
            for (int d = 0; d < map.dim; ++d) w[d] += step * (x[d] - w[d]);
        }
    }
    return map;
}

double mean_quantization_error(const SomMap& map, const std::vector<std::vector<double>>& data) {
    if (data.empty()) throw std::invalid_argument("mean_quantization_error: empty data");
    double total = 0;
    for (const auto& x : data) total += std::sqrt(sq_dist(map.prototypes[find_bmu(map, x)], x));
    return total / data.size();
}

FeatureDataset quantize_replace(const SomMap& map, const FeatureDataset& data) {
    if (data.dim != map.dim) throw std::invalid_argument("quantize_replace: dimension mismatch");
    FeatureDataset out = data;
    for (auto& row : out.rows) row.values = map.prototypes[find_bmu(map, row.values)];
    return out;
}

FeatureDataset augment(const FeatureDataset& original, const FeatureDataset& som_based) {
    if (original.rows.size() != som_based.rows.size())
        throw std::invalid_argument("augment: row count mismatch");
    for (size_t i = 0; i < original.rows.size(); ++i)
        if (original.rows[i].id != som_based.rows[i].id)
            throw std::invalid_argument("augment: row id mismatch at index " + std::to_string(i));

    FeatureDataset out;
    out.dim = original.dim + som_based.dim;
    out.class_names = original.class_names;
    for (const auto& n : original.feature_names) out.feature_names.push_back(n + "_base");
    for (const auto& n : som_based.feature_names) out.feature_names.push_back(n + "_som");
    for (size_t i = 0; i < original.rows.size(); ++i) {
        FeatureRow row;
        row.id = original.rows[i].id;
        row.label = original.rows[i].label;
        row.values = original.rows[i].values;
        row.values.insert(row.values.end(), som_based.rows[i].values.begin(),
                          som_based.rows[i].values.end());
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::string serialize_som_map(const SomMap& map) {
    std::ostringstream out;
    out << "sommap\n" << map.rows << ' ' << map.cols << ' ' << map.dim << '\n';
    for (const auto& proto : map.prototypes) {
        for (size_t d = 0; d < proto.size(); ++d) {
            if (d) out << ' ';
            out << format_sig(proto[d], 12);
        }
        out << '\n';
    }
    return out.str();
}

SomMap deserialize_som_map(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    in >> magic;
    if (magic != "sommap") throw std::runtime_error("not a som map file");
    SomMap map;
    in >> map.rows >> map.cols >> map.dim;
    if (!in || map.rows < 1 || map.cols < 1 || map.dim < 1)
        throw std::runtime_error("bad som map header");
    map.prototypes.assign(map.units(), std::vector<double>(map.dim));
    for (auto& proto : map.prototypes)
        for (int d = 0; d < map.dim; ++d) in >> proto[d];
    if (!in) throw std::runtime_error("truncated som map file");
    return map;
}

std::vector<std::vector<double>> dataset_vectors(const FeatureDataset& ds) {
    std::vector<std::vector<double>> out;
    out.reserve(ds.rows.size());
    for (const auto& row : ds.rows) out.push_back(row.values);
    return out;
}

}  // namespace texcat
