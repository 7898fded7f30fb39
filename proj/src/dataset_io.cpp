#include "texcat/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace texcat {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::string format_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string dataset_to_csv(const FeatureDataset& ds, const std::string& fingerprint) {
    std::ostringstream out;
    if (!fingerprint.empty()) out << "# fingerprint=" << fingerprint << "\n";
    out << "# classes=";
    for (size_t i = 0; i < ds.class_names.size(); ++i)
        out << (i ? "," : "") << ds.class_names[i];
    out << "\n# ids=";
    for (size_t i = 0; i < ds.rows.size(); ++i) out << (i ? "," : "") << ds.rows[i].id;
    out << "\n";
    for (size_t i = 0; i < ds.feature_names.size(); ++i) out << ds.feature_names[i] << ',';
    out << "class\n";
    for (const auto& row : ds.rows) {
        for (double v : row.values) out << format_sig(v, 9) << ',';
        out << row.label << '\n';
    }
    return out.str();
}

FeatureDataset dataset_from_csv(const std::string& text) {
    FeatureDataset ds;
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> ids;
    bool header_seen = false;
    size_t row_index = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (line[0] == '#') {
            std::string body = trim(line.substr(1));
            if (body.rfind("ids=", 0) == 0) ids = split_csv_line(body.substr(4));
            else if (body.rfind("classes=", 0) == 0) ds.class_names = split_csv_line(body.substr(8));
            continue;
        }
        auto fields = split_csv_line(line);
        if (!header_seen) {
            if (fields.empty() || fields.back() != "class")
                throw std::runtime_error("CSV header must end with 'class'");
            ds.feature_names.assign(fields.begin(), fields.end() - 1);
            ds.dim = static_cast<int>(ds.feature_names.size());
            header_seen = true;
            continue;
        }
        if (fields.size() != static_cast<size_t>(ds.dim) + 1)
            throw std::runtime_error("CSV row has wrong field count");
        FeatureRow row;
        row.id = row_index < ids.size() ? ids[row_index] : "r" + std::to_string(row_index);
        for (int j = 0; j < ds.dim; ++j) row.values.push_back(std::stod(fields[j]));
        row.label = trim(fields.back());
        ds.rows.push_back(std::move(row));
        ++row_index;
    }
    if (!header_seen) throw std::runtime_error("CSV has no header");
    if (ds.class_names.empty())
        for (const auto& row : ds.rows)
            if (std::find(ds.class_names.begin(), ds.class_names.end(), row.label) ==
                ds.class_names.end())
                ds.class_names.push_back(row.label);
    return ds;
}

std::string dataset_to_arff(const FeatureDataset& ds, const std::string& relation,
                            const std::string& fingerprint, std::vector<std::string>* warnings) {
    auto sanitize = [&](const std::string& name) {
        std::string out;
        bool changed = false;
        for (char c : name) {
            if (c == ',' || c == '{' || c == '}' || c == ' ' || c == '\'' || c == '"' || c == '%') {
                out += '_';
                changed = true;
            } else {
                out += c;
            }
        }
        if (changed && warnings)
            warnings->push_back("ARFF attribute name '" + name + "' sanitized to '" + out + "'");
        return out;
    };

    std::ostringstream out;
    if (!fingerprint.empty()) out << "% fingerprint=" << fingerprint << "\n";
    out << "@RELATION " << sanitize(relation) << "\n";
    for (const auto& name : ds.feature_names)
        out << "@ATTRIBUTE " << sanitize(name) << " NUMERIC\n";
    out << "@ATTRIBUTE class {";
    for (size_t i = 0; i < ds.class_names.size(); ++i)
        out << (i ? "," : "") << ds.class_names[i];
    out << "}\n@DATA\n";
    for (const auto& row : ds.rows) {
        for (double v : row.values) out << format_sig(v, 9) << ',';
        out << row.label << '\n';
    }
    return out.str();
}

FeatureDataset dataset_from_arff(const std::string& text) {
    FeatureDataset ds;
    std::istringstream in(text);
    std::string line;
    bool in_data = false;
    size_t row_index = 0;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '%') continue;
        if (!in_data) {
            std::string low = lower(line);
            if (low.rfind("@relation", 0) == 0) continue;
            if (low.rfind("@data", 0) == 0) {
                in_data = true;
                ds.dim = static_cast<int>(ds.feature_names.size());
                continue;
            }
            if (low.rfind("@attribute", 0) == 0) {
                std::istringstream ls(line.substr(10));
                std::string name, type;
                ls >> name;
                std::getline(ls, type);
                type = trim(type);
                if (name == "class") {
                    size_t a = type.find('{'), b = type.find('}');
                    if (a == std::string::npos || b == std::string::npos || b < a)
                        throw std::runtime_error("ARFF class attribute must be nominal");
                    for (auto& tok : split_csv_line(type.substr(a + 1, b - a - 1)))
                        ds.class_names.push_back(trim(tok));
                } else {
                    if (lower(type) != "numeric")
                        throw std::runtime_error("ARFF attribute '" + name + "' is not NUMERIC");
                    ds.feature_names.push_back(name);
                }
                continue;
            }
            throw std::runtime_error("unrecognized ARFF header line: " + line);
        }
        auto fields = split_csv_line(line);
        if (fields.size() != static_cast<size_t>(ds.dim) + 1)
            throw std::runtime_error("ARFF data row has wrong field count");
        FeatureRow row;
        row.id = "r" + std::to_string(row_index++);
        for (int j = 0; j < ds.dim; ++j) row.values.push_back(std::stod(fields[j]));
        row.label = trim(fields.back());
        ds.rows.push_back(std::move(row));
    }
    if (!in_data) throw std::runtime_error("ARFF file has no @DATA section");
    return ds;
}

std::string manifest_cache_to_jsonl(const std::vector<ManifestCacheEntry>& entries) {
    std::ostringstream out;
    for (const auto& e : entries) {
        nlohmann::json j{{"id", e.id}, {"label", e.label}, {"path", e.path}};
        if (!e.severity.empty()) j["severity"] = e.severity;
        out << j.dump() << '\n';
    }
    return out.str();
}

std::vector<ManifestCacheEntry> manifest_cache_from_jsonl(const std::string& text) {
    std::vector<ManifestCacheEntry> entries;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto j = nlohmann::json::parse(line);
        ManifestCacheEntry e;
        e.id = j.at("id").get<std::string>();
        e.label = j.at("label").get<std::string>();
        e.path = j.at("path").get<std::string>();
        if (j.contains("severity")) e.severity = j["severity"].get<std::string>();
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace texcat
