#include <algorithm>
#include <cmath>
#include <limits>

#include "featgrid/kernels.hpp"

namespace featgrid::kernels {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

namespace serial {

void correlation_pairs(std::span<const double> centered, std::span<const double> norms,
                       std::size_t cols, std::size_t rows, std::span<double> out) {
    for (std::size_t i = 0; i < cols; ++i) {
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
    for (std::size_t k = j + 1; k < g_col.size(); ++k) {
        const double g = g_col[k];
        agg.s[k] += g;
        agg.mx[k] += g * px;
        agg.my[k] += g * py;
        agg.t[k] += g * p2;
    }
}

void score_candidates(const CandidateBox& box, std::span<const std::uint8_t> occupied,
                      const StepAggregate& step, const Weights& w, std::span<double> costs) {
    for (std::size_t c = 0; c < costs.size(); ++c) {
        costs[c] = occupied[c] ? kInf : step.cost(box.position(c), w);
    }
}

std::size_t select_candidate(std::span<const double> costs) {
    double best = kInf;
    for (double c : costs) best = std::min(best, c);
    if (best == kInf) return costs.size();
    const double limit = best + tie_band(best);
    for (std::size_t c = 0; c < costs.size(); ++c) {
        if (costs[c] <= limit) return c;
    }
    return costs.size();
}

void main_term_rows(std::span<const double> importance, std::span<const double> g,
                    std::span<const GridPos> positions, std::span<double> rows) {
    const std::size_t n = positions.size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            acc += g[i * n + j] * static_cast<double>(distance2(positions[i], positions[j]));
        }
        rows[i] = importance[i] * acc;
    }
}

}  // namespace serial

void correlation_pairs(Execution exec, std::span<const double> centered,
                       std::span<const double> norms, std::size_t cols, std::size_t rows,
                       std::span<double> out) {
    if (exec == Execution::parallel) return omp::correlation_pairs(centered, norms, cols, rows, out);
    serial::correlation_pairs(centered, norms, cols, rows, out);
}

void absorb_placement(Execution exec, std::span<const double> g_col, std::size_t j, GridPos p,
                      Aggregates& agg) {
    if (exec == Execution::parallel) return omp::absorb_placement(g_col, j, p, agg);
    serial::absorb_placement(g_col, j, p, agg);
}

void score_candidates(Execution exec, const CandidateBox& box,
                      std::span<const std::uint8_t> occupied, const StepAggregate& step,
                      const Weights& w, std::span<double> costs) {
    if (exec == Execution::parallel) return omp::score_candidates(box, occupied, step, w, costs);
    serial::score_candidates(box, occupied, step, w, costs);
}

std::size_t select_candidate(Execution exec, std::span<const double> costs) {
    if (exec == Execution::parallel) return omp::select_candidate(costs);
    return serial::select_candidate(costs);
}

void main_term_rows(Execution exec, std::span<const double> importance,
                    std::span<const double> g, std::span<const GridPos> positions,
                    std::span<double> rows) {
    if (exec == Execution::parallel) return omp::main_term_rows(importance, g, positions, rows);
    serial::main_term_rows(importance, g, positions, rows);
}

}  // namespace featgrid::kernels
