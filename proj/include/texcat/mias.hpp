#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "texcat/image.hpp"

namespace texcat {

// One line of the MIAS index file. Abnormal images may list several
// abnormalities (one line each); all lines are retained here.
struct MiasEntry {
    std::string id;                                // mdb001 ...
    std::string tissue;                            // F / G / D
    std::string class_label;                       // NORM / CALC / CIRC / SPIC / MISC / ARCH / ASYM
    std::optional<std::string> severity;           // benign / malignant
    std::optional<std::pair<int, int>> center;     // (x, y)
    std::optional<int> radius;
};

std::vector<MiasEntry> parse_mias_index(const std::string& text);

bool is_known_mias_class(const std::string& token);

}  // namespace texcat
