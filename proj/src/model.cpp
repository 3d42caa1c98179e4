#include "featgrid/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "featgrid/error.hpp"

namespace featgrid {

std::vector<double> FeatureTable::importances() const {
    std::vector<double> out;
    out.reserve(features_.size());
    for (const auto& f : features_) out.push_back(f.importance);
    return out;
}

std::size_t FeatureTable::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].name == name) return i;
    }
    return features_.size();
}

void Weights::validate() const {
    if (!std::isfinite(w1) || w1 < 0.0) {
        throw ValidationError("weight w1 must be finite and >= 0, got " + std::to_string(w1));
    }
    if (!std::isfinite(w2) || w2 < 0.0) {
        throw ValidationError("weight w2 must be finite and >= 0, got " + std::to_string(w2));
    }
}

FeatureTable build_table(std::vector<FeatureRecord> records) {
    std::unordered_set<std::string> seen;
    seen.reserve(records.size());
    for (const auto& r : records) {
        if (r.name.empty()) throw ValidationError("feature with empty name");
        if (!seen.insert(r.name).second) {
            throw ValidationError("duplicate feature name '" + r.name + "'");
        }
        if (!std::isfinite(r.importance) || r.importance < 0.0) {
            throw ValidationError("feature '" + r.name +
                                  "': importance must be finite and >= 0");
        }
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const FeatureRecord& a, const FeatureRecord& b) {
                         return a.importance > b.importance;
                     });
    FeatureTable table;
    table.features_ = std::move(records);
    return table;
}

std::vector<int> normalize_importance(const FeatureTable& table) {
    if (table.empty()) throw ValidationError("cannot normalize an empty feature table");
    // Sorted descending, so the extremes are at the ends.
    const double hi = table[0].importance;
    const double lo = table[table.size() - 1].importance;
    std::vector<int> out(table.size(), 255);
    if (hi == lo) return out;
    const double span = hi - lo;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double s = 255.0 * (table[i].importance - lo) / span;
        out[i] = static_cast<int>(std::clamp(std::round(s), 0.0, 255.0));
    }
    return out;
}

}  // namespace featgrid
