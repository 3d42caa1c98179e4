#pragma once

// Data-parallel inner loops of the engine. Every kernel exists twice: a plain
// serial loop (the reference the tests compare against) and an OpenMP
// version. Both write each output element from the same expression in the
// same summation order, so their results are bit-identical.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "featgrid/model.hpp"

namespace featgrid {

enum class Execution { serial, parallel };

// Square of cells with max(|x|, |y|) <= radius. Cell indices run in row-major
// order (y ascending, then x ascending), which is also the tie-break order.
struct CandidateBox {
    std::int64_t radius = 0;

    std::int64_t side() const { return 2 * radius + 1; }
    std::size_t cell_count() const { return static_cast<std::size_t>(side() * side()); }
    bool contains(GridPos p) const {
        return p.x >= -radius && p.x <= radius && p.y >= -radius && p.y <= radius;
    }
    std::size_t index_of(GridPos p) const {
        return static_cast<std::size_t>((p.y + radius) * side() + (p.x + radius));
    }
    GridPos position(std::size_t index) const {
        const auto i = static_cast<std::int64_t>(index);
        return {i % side() - radius, i / side() - radius};
    }
};

// Running sums over the features already placed before step i:
//   s = sum_j G_ij, (mx, my) = sum_j G_ij p_j, t = sum_j G_ij |p_j|^2
// so that sum_j G_ij |q - p_j|^2 = s |q|^2 - 2 q.m + t.
struct StepAggregate {
    double s = 0.0;
    double mx = 0.0;
    double my = 0.0;
    double t = 0.0;
    std::optional<GridPos> previous;  // p_{i-1}; absent for the first feature

    // Proxy cost of putting the current feature at q.
    double cost(GridPos q, const Weights& w) const {
        const double qx = static_cast<double>(q.x);
        const double qy = static_cast<double>(q.y);
        const double q2 = qx * qx + qy * qy;
        double c = s * q2 - 2.0 * (qx * mx + qy * my) + t + w.w1 * q2;
        if (previous) c += w.w2 * static_cast<double>(distance2(q, *previous));
        return c;
    }
};

// Costs within this relative band of the minimum count as ties; the tie is
// then resolved by row-major cell order.
inline constexpr double kTieRelTolerance = 1e-9;

inline double tie_band(double best) {
    return kTieRelTolerance * std::max(1.0, std::abs(best));
}

namespace kernels {

// Absolute or signed Pearson correlation for every column pair. `centered` is
// column-major (column c at [c*rows, (c+1)*rows)) with column means removed;
// `norms` holds each column's sum of squares. Zero-variance columns yield 0.
// `out` is cols*cols, row-major, diagonal set to 0.
void correlation_pairs(Execution exec, std::span<const double> centered,
                       std::span<const double> norms, std::size_t cols, std::size_t rows,
                       std::span<double> out);

// Per-feature aggregates for all features not yet placed.
struct Aggregates {
    std::vector<double> s, mx, my, t;

    explicit Aggregates(std::size_t n) : s(n, 0.0), mx(n, 0.0), my(n, 0.0), t(n, 0.0) {}
};

// Folds the placement of feature j at p into the aggregates of every k > j.
// `g_col` is column j of G (equal to row j by symmetry).
void absorb_placement(Execution exec, std::span<const double> g_col, std::size_t j, GridPos p,
                      Aggregates& agg);

// Writes the proxy cost of each box cell; occupied cells get +infinity.
void score_candidates(Execution exec, const CandidateBox& box,
                      std::span<const std::uint8_t> occupied, const StepAggregate& step,
                      const Weights& w, std::span<double> costs);

// Lowest index whose cost lies within tie_band of the minimum, or
// costs.size() when every cost is infinite.
std::size_t select_candidate(Execution exec, std::span<const double> costs);

// rows[i] = I_i * sum_{j<i} G_ij |p_i - p_j|^2, summed over ascending j.
void main_term_rows(Execution exec, std::span<const double> importance,
                    std::span<const double> g, std::span<const GridPos> positions,
                    std::span<double> rows);

namespace serial {
void correlation_pairs(std::span<const double> centered, std::span<const double> norms,
                       std::size_t cols, std::size_t rows, std::span<double> out);
void absorb_placement(std::span<const double> g_col, std::size_t j, GridPos p, Aggregates& agg);
void score_candidates(const CandidateBox& box, std::span<const std::uint8_t> occupied,
                      const StepAggregate& step, const Weights& w, std::span<double> costs);
std::size_t select_candidate(std::span<const double> costs);
void main_term_rows(std::span<const double> importance, std::span<const double> g,
                    std::span<const GridPos> positions, std::span<double> rows);
}  // namespace serial

namespace omp {
void correlation_pairs(std::span<const double> centered, std::span<const double> norms,
                       std::size_t cols, std::size_t rows, std::span<double> out);
void absorb_placement(std::span<const double> g_col, std::size_t j, GridPos p, Aggregates& agg);
void score_candidates(const CandidateBox& box, std::span<const std::uint8_t> occupied,
                      const StepAggregate& step, const Weights& w, std::span<double> costs);
std::size_t select_candidate(std::span<const double> costs);
void main_term_rows(std::span<const double> importance, std::span<const double> g,
                    std::span<const GridPos> positions, std::span<double> rows);
}  // namespace omp

}  // namespace kernels
}  // namespace featgrid
