#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace featgrid {

struct FeatureRecord {
    std::string name;
    std::string type_tag;
    double importance = 0.0;
    // Shown in pop-ups and tooltips, in input column order.
    std::vector<std::pair<std::string, std::string>> stats;

    bool operator==(const FeatureRecord&) const = default;
};

// Features in selection order: descending importance, ties by input order.
// Index i is the 0-based selection index; rank i+1 is what gets displayed.
class FeatureTable {
public:
    FeatureTable() = default;

    std::size_t size() const { return features_.size(); }
    bool empty() const { return features_.empty(); }
    const FeatureRecord& operator[](std::size_t i) const { return features_[i]; }
    std::span<const FeatureRecord> features() const { return features_; }
    auto begin() const { return features_.begin(); }
    auto end() const { return features_.end(); }

    std::vector<double> importances() const;
    // Selection index of a feature, or size() when absent.
    std::size_t index_of(const std::string& name) const;

    friend FeatureTable build_table(std::vector<FeatureRecord> records);

private:
    std::vector<FeatureRecord> features_;
};

struct GridPos {
    std::int64_t x = 0;
    std::int64_t y = 0;  // grows downward when rendered

    bool operator==(const GridPos&) const = default;
    auto operator<=>(const GridPos&) const = default;

    std::int64_t norm2() const { return x * x + y * y; }
};

inline std::int64_t distance2(GridPos a, GridPos b) {
    const std::int64_t dx = a.x - b.x;
    const std::int64_t dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Ordering used for every spatial tie-break: row first, then column.
inline bool row_major_less(GridPos a, GridPos b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
}

struct Weights {
    double w1 = 0.05;  // center pull
    double w2 = 0.02;  // consecutive-rank pull

    void validate() const;
};

// Sorts by (importance desc, input order asc). Throws ValidationError on
// duplicate or empty names and on negative or non-finite importance.
FeatureTable build_table(std::vector<FeatureRecord> records);

// Maps importance linearly onto [0, 255], rounding half away from zero.
// All-equal importances map to 255.
std::vector<int> normalize_importance(const FeatureTable& table);

}  // namespace featgrid
