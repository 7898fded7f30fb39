#include "texcat/glcm.hpp"

#include <cmath>
#include <stdexcept>

namespace texcat {

Glcm compute_glcm(const GrayImage& img, int dx, int dy, const std::vector<uint8_t>* mask,
                  bool symmetric) {
    if (dx == 0 && dy == 0) throw std::invalid_argument("glcm: offset must be non-zero");
    if (mask && mask->size() != img.pixels.size())
        throw std::invalid_argument("glcm: mask dimensions mismatch");

    int g = img.levels;
    Glcm m;
    m.levels = g;
    m.p.assign(static_cast<size_t>(g) * g, 0.0);

    auto masked = [&](int x, int y) {
        return mask && !(*mask)[static_cast<size_t>(y) * img.width + x];
    };

    long increments = 0;
    for (int y = 0; y < img.height; ++y) {
        int y2 = y + dy;
        if (y2 < 0 || y2 >= img.height) continue;
        for (int x = 0; x < img.width; ++x) {
            int x2 = x + dx;
            if (x2 < 0 || x2 >= img.width) continue;
            if (masked(x, y) || masked(x2, y2)) continue;
            int a = img.at(x, y), b = img.at(x2, y2);
            m.p[static_cast<size_t>(a) * g + b] += 1.0;
            ++increments;
            if (symmetric) {
                m.p[static_cast<size_t>(b) * g + a] += 1.0;
                ++increments;
            }
            ++m.pair_count;
        }
    }
    if (m.pair_count == 0) return m;  // all-zero matrix, caller branches on pair_count
    for (double& v : m.p) v /= increments;
    return m;
}

TextureFeatures features_from_glcm(const Glcm& m) {
    TextureFeatures f;
    if (m.pair_count == 0) {
        f.degenerate = true;
        return f;
    }
    for (int i = 0; i < m.levels; ++i) {
        for (int j = 0; j < m.levels; ++j) {
            double c = m.at(i, j);
            double d = std::abs(i - j);
            f.dissimilarity += c * d;
            f.uniformity += c * c;
            f.contrast += c * d * d;
            if (c > 0) f.entropy -= c * std::log2(c);
        }
    }
    if (f.entropy < 0) f.entropy = 0;  // -0.0 from a single full cell
    return f;
}

}  // namespace texcat
