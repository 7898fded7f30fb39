#pragma once

#include <cstdint>
#include <vector>

#include "texcat/image.hpp"

namespace texcat {

// Normalized co-occurrence probability matrix, G x G.
struct Glcm {
    int levels = 0;
    std::vector<double> p;   // row-major, levels*levels
    long pair_count = 0;     // raw (unsymmetrized) pairs counted

    double at(int i, int j) const { return p[static_cast<size_t>(i) * levels + j]; }
    double& at(int i, int j) { return p[static_cast<size_t>(i) * levels + j]; }
};

struct TextureFeatures {
    double dissimilarity = 0;
    double uniformity = 0;
    double entropy = 0;   // bits
    double contrast = 0;
    bool degenerate = false;  // zero countable pairs
};

// Counts every in-bounds pair (p, p + offset). With a mask, both pixels must
// be mask-true. Symmetric counting by default: each pair increments (i,j)
// and (j,i); entries are normalized by total increments.
// Zero countable pairs yields pair_count=0 and an all-zero matrix.
Glcm compute_glcm(const GrayImage& img, int dx, int dy,
                  const std::vector<uint8_t>* mask = nullptr,
                  bool symmetric = true);

// dissimilarity = sum C_ij |i-j|; uniformity = sum C_ij^2;
// entropy = -sum C_ij log2 C_ij (0 log 0 := 0); contrast = sum C_ij (i-j)^2.
TextureFeatures features_from_glcm(const Glcm& m);

inline constexpr int kTextureFeatureCount = 4;
inline constexpr const char* kTextureFeatureNames[kTextureFeatureCount] = {
    "dissimilarity", "uniformity", "entropy", "contrast"};

}  // namespace texcat
