#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace texcat {

// Row-major grid of integer gray levels, top-left origin.
struct GrayImage {
    int width = 0;
    int height = 0;
    int levels = 256;  // max gray value + 1
    std::vector<int> pixels;

    int at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    int& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }

    bool valid() const {
        if (pixels.size() != static_cast<size_t>(width) * height) return false;
        for (int v : pixels)
            if (v < 0 || v >= levels) return false;
        return true;
    }
};

inline GrayImage make_image(int width, int height, int levels, std::vector<int> pixels) {
    GrayImage img{width, height, levels, std::move(pixels)};
    if (!img.valid()) throw std::invalid_argument("GrayImage: pixel buffer inconsistent with dimensions/levels");
    return img;
}

struct ImageRecord {
    std::string id;
    std::string class_label;                // NORM, CALC, CIRC, SPIC, MISC, ARCH, ASYM
    std::optional<std::string> severity;    // "benign" / "malignant"; absent iff NORM
    GrayImage image;
};

struct DatasetManifest {
    std::vector<ImageRecord> records;
    std::vector<std::string> class_names;   // ordered distinct labels present
};

// Distinct labels in first-appearance order.
std::vector<std::string> collect_class_names(const std::vector<ImageRecord>& records);

}  // namespace texcat
