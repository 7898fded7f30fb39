#include "texcat/image.hpp"

#include <algorithm>

namespace texcat {

std::vector<std::string> collect_class_names(const std::vector<ImageRecord>& records) {
    std::vector<std::string> names;
    for (const auto& rec : records)
        if (std::find(names.begin(), names.end(), rec.class_label) == names.end())
            names.push_back(rec.class_label);
    return names;
}

}  // namespace texcat
