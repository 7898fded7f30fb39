#include "texcat/mias.hpp"

#include <array>
#include <sstream>

namespace texcat {
namespace {

const std::array<const char*, 7> kClasses = {"NORM", "CALC", "CIRC", "SPIC", "MISC", "ARCH", "ASYM"};

}  // namespace

bool is_known_mias_class(const std::string& token) {
    for (const char* c : kClasses)
        if (token == c) return true;
    return false;
}

std::vector<MiasEntry> parse_mias_index(const std::string& text) {
    std::vector<MiasEntry> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> fields;
        std::string tok;
        while (ls >> tok) fields.push_back(tok);
        if (fields.empty()) continue;
        if (fields.size() < 3)
            throw std::runtime_error("MIAS index line " + std::to_string(lineno) +
                                     ": expected at least 3 fields");
        MiasEntry e;
        e.id = fields[0];
        e.tissue = fields[1];
        e.class_label = fields[2];
        if (!is_known_mias_class(e.class_label))
            throw std::runtime_error("MIAS index line " + std::to_string(lineno) +
                                     ": unknown class token '" + e.class_label + "'");
        if (e.class_label != "NORM" && fields.size() >= 4) {
            if (fields[3] == "B") e.severity = "benign";
            else if (fields[3] == "M") e.severity = "malignant";
            else
                throw std::runtime_error("MIAS index line " + std::to_string(lineno) +
                                         ": unknown severity token '" + fields[3] + "'");
            // Geometry is absent on some abnormal lines (e.g. widespread
            // calcifications); *NOTE* placeholders are skipped.
            if (fields.size() >= 7 && fields[4].find_first_not_of("0123456789-") == std::string::npos) {
                e.center = std::make_pair(std::stoi(fields[4]), std::stoi(fields[5]));
                e.radius = std::stoi(fields[6]);
            }
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace texcat
