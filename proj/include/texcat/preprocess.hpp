#pragma once

#include "texcat/image.hpp"

namespace texcat {

// Minimal bounding sub-image of all pixels >= threshold.
// Returns the input unchanged when no pixel qualifies.
GrayImage crop_black_border(const GrayImage& img, int threshold = 10);

// CDF_min-anchored histogram equalization; identity on single-level images.
GrayImage equalize_histogram(const GrayImage& img);

// out = floor(v * G / levels); output levels = G.
GrayImage quantize_gray_levels(const GrayImage& img, int target_levels);

}  // namespace texcat
