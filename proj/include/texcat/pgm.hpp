#pragma once

#include <string>

#include "texcat/image.hpp"

namespace texcat {

struct PgmError : std::runtime_error {
    size_t offset;
    PgmError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " (byte offset " + std::to_string(off) + ")"), offset(off) {}
};

// P2 (ASCII) and P5 (binary) netpbm grayscale. Top-left origin, row-major.
GrayImage decode_pgm(const std::string& bytes);

// binary=true writes P5 (only for maxval <= 255), else P2.
std::string encode_pgm(const GrayImage& img, bool binary = true);

GrayImage load_pgm_file(const std::string& path);
void save_pgm_file(const GrayImage& img, const std::string& path, bool binary = true);

}  // namespace texcat
