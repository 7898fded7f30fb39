#include "texcat/preprocess.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace texcat {

GrayImage crop_black_border(const GrayImage& img, int threshold) {
    if (threshold >= img.levels) throw std::invalid_argument("crop threshold must be < levels");
    int x0 = img.width, y0 = img.height, x1 = -1, y1 = -1;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y) >= threshold) {
                if (x < x0) x0 = x;
                if (x > x1) x1 = x;
                if (y < y0) y0 = y;
                if (y > y1) y1 = y;
            }
    if (x1 < 0) return img;  // nothing above threshold
    GrayImage out;
    out.width = x1 - x0 + 1;
    out.height = y1 - y0 + 1;
    out.levels = img.levels;
    out.pixels.reserve(static_cast<size_t>(out.width) * out.height);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) out.pixels.push_back(img.at(x, y));
    return out;
}

GrayImage equalize_histogram(const GrayImage& img) {
    if (img.levels < 2) throw std::invalid_argument("equalize: levels must be >= 2");
    if (img.pixels.empty()) return img;

    std::vector<long> hist(img.levels, 0);
    for (int v : img.pixels) ++hist[v];

    double n = static_cast<double>(img.pixels.size());
    std::vector<double> cdf(img.levels, 0);
    double acc = 0;
    for (int v = 0; v < img.levels; ++v) {
        acc += hist[v] / n;
        cdf[v] = acc;
    }
    double cdf_min = 0;
    for (int v = 0; v < img.levels; ++v)
        if (hist[v] > 0) {
            cdf_min = cdf[v];
            break;
        }
    if (cdf_min >= 1.0) return img;  // single occupied level

    std::vector<int> lut(img.levels, 0);
    for (int v = 0; v < img.levels; ++v)
        lut[v] = static_cast<int>(std::lround((img.levels - 1) * (cdf[v] - cdf_min) / (1.0 - cdf_min)));

    GrayImage out = img;
    for (int& v : out.pixels) v = lut[v];
    return out;
}

GrayImage quantize_gray_levels(const GrayImage& img, int target_levels) {
    if (target_levels < 2 || target_levels > img.levels)
        throw std::invalid_argument("quantize: need 2 <= G <= levels");
    GrayImage out = img;
    out.levels = target_levels;
    for (int& v : out.pixels)
        v = static_cast<int>(static_cast<long>(v) * target_levels / img.levels);
    return out;
}

}  // namespace texcat
