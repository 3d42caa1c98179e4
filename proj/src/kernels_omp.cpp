#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "featgrid/kernels.hpp"

namespace featgrid::kernels::omp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
using Index = std::ptrdiff_t;
}

void correlation_pairs(std::span<const double> centered, std::span<const double> norms,
                       std::size_t cols, std::size_t rows, std::span<double> out) {
    const Index n = static_cast<Index>(cols);
#pragma omp parallel for schedule(dynamic, 4)
    for (Index ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        out[i * cols + i] = 0.0;
        const double* ci = centered.data() + i * rows;
        for (std::size_t j = i + 1; j < cols; ++j) {
            const double* cj = centered.data() + j * rows;
            double r = 0.0;
            if (norms[i] > 0.0 && norms[j] > 0.0) {
                double dot = 0.0;
                for (std::size_t k = 0; k < rows; ++k) dot += ci[k] * cj[k];
                r = std::clamp(dot / std::sqrt(norms[i] * norms[j]), -1.0, 1.0);
            }
            out[i * cols + j] = r;
            out[j * cols + i] = r;
        }
    }
}

void absorb_placement(std::span<const double> g_col, std::size_t j, GridPos p, Aggregates& agg) {
    const double px = static_cast<double>(p.x);
    const double py = static_cast<double>(p.y);
    const double p2 = static_cast<double>(p.norm2());
    const Index n = static_cast<Index>(g_col.size());
    double* s = agg.s.data();
    double* mx = agg.mx.data();
    double* my = agg.my.data();
    double* t = agg.t.data();
#pragma omp parallel for schedule(static) if (n > 4096)
    for (Index k = static_cast<Index>(j) + 1; k < n; ++k) {
        const double g = g_col[static_cast<std::size_t>(k)];
        s[k] += g;
        mx[k] += g * px;
        my[k] += g * py;
        t[k] += g * p2;
    }
}

void score_candidates(const CandidateBox& box, std::span<const std::uint8_t> occupied,
                      const StepAggregate& step, const Weights& w, std::span<double> costs) {
    const Index n = static_cast<Index>(costs.size());
#pragma omp parallel for schedule(static) if (n > 2048)
    for (Index ci = 0; ci < n; ++ci) {
        const auto c = static_cast<std::size_t>(ci);
        costs[c] = occupied[c] ? kInf : step.cost(box.position(c), w);
    }
}

std::size_t select_candidate(std::span<const double> costs) {
    const Index n = static_cast<Index>(costs.size());
    double best = kInf;
#pragma omp parallel for reduction(min : best) schedule(static) if (n > 2048)
    for (Index c = 0; c < n; ++c) best = std::min(best, costs[static_cast<std::size_t>(c)]);
    if (best == kInf) return costs.size();
    const double limit = best + tie_band(best);
    Index first = n;
#pragma omp parallel for reduction(min : first) schedule(static) if (n > 2048)
    for (Index c = 0; c < n; ++c) {
        if (costs[static_cast<std::size_t>(c)] <= limit) first = std::min(first, c);
    }
    return static_cast<std::size_t>(first);
}

void main_term_rows(std::span<const double> importance, std::span<const double> g,
                    std::span<const GridPos> positions, std::span<double> rows) {
    const std::size_t n = positions.size();
    const Index count = static_cast<Index>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (Index ii = 0; ii < count; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            acc += g[i * n + j] * static_cast<double>(distance2(positions[i], positions[j]));
        }
        rows[i] = importance[i] * acc;
    }
}

}  // namespace featgrid::kernels::omp
