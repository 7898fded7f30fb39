#pragma once

#include <string>
#include <vector>

#include "texcat/roi.hpp"

namespace texcat {

// Decimal with the given number of significant digits ("%.*g").
std::string format_sig(double v, int digits);

// Write-temp-then-rename.
void atomic_write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// CSV: '#' comment lines (fingerprint, row ids), then header
// feature_names + "class", then one row per image at 9 significant digits.
std::string dataset_to_csv(const FeatureDataset& ds, const std::string& fingerprint = "");
FeatureDataset dataset_from_csv(const std::string& text);

// ARFF with NUMERIC attributes plus a nominal class attribute; LF endings,
// ASCII only, 9 significant digits. Attribute names containing ARFF
// metacharacters are sanitized (a warning is appended when given).
std::string dataset_to_arff(const FeatureDataset& ds, const std::string& relation,
                            const std::string& fingerprint = "",
                            std::vector<std::string>* warnings = nullptr);
FeatureDataset dataset_from_arff(const std::string& text);

// Manifest cache: JSON-lines, one record per image (id, label, severity, path).
struct ManifestCacheEntry {
    std::string id;
    std::string label;
    std::string severity;  // empty when absent
    std::string path;
};
std::string manifest_cache_to_jsonl(const std::vector<ManifestCacheEntry>& entries);
std::vector<ManifestCacheEntry> manifest_cache_from_jsonl(const std::string& text);

}  // namespace texcat
