#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "featgrid/interaction.hpp"
#include "featgrid/kernels.hpp"
#include "featgrid/model.hpp"

namespace featgrid {

// Grid cell of every feature, index-aligned with the FeatureTable.
struct Layout {
    std::vector<GridPos> positions;
    std::int64_t candidate_radius = 0;

    // Distinct cells, all within Chebyshev radius candidate_radius.
    void validate() const;

    bool operator==(const Layout&) const = default;
};

struct LayoutConfig {
    Weights weights;
    std::optional<std::int64_t> candidate_radius_override;
    int postprocess_passes = 3;
    int window_size = 4;  // features permuted together, 2..6
    Execution exec = Execution::parallel;

    void validate() const;
};

// Loss split into its parts. r_center and r_seq are the unweighted
// regularizers; total = main + w1 * r_center + w2 * r_seq.
struct LossTerms {
    double main = 0.0;
    double r_center = 0.0;
    double r_seq = 0.0;
    double total = 0.0;

    bool operator==(const LossTerms&) const = default;
};

LossTerms loss_terms(const FeatureTable& table, const InteractionMatrix& g, const Layout& layout,
                     const Weights& w, Execution exec = Execution::parallel);

inline double full_loss(const FeatureTable& table, const InteractionMatrix& g,
                        const Layout& layout, const Weights& w,
                        Execution exec = Execution::parallel) {
    return loss_terms(table, g, layout, w, exec).total;
}

// Smallest R with (2R + 1)^2 >= 4n.
std::int64_t candidate_radius_for(std::size_t n);

// Called before feature i is placed, with the aggregates used to score its
// candidates and the positions of features 0..i-1.
using StepObserver =
    std::function<void(std::size_t i, const StepAggregate& step, std::span<const GridPos> placed)>;

// Places features one at a time in selection order, each on the free cell of
// the candidate box minimizing
//   sum_{j<i} G_ij |q - p_j|^2 + w1 |q|^2 + w2 |q - p_{i-1}|^2.
// Near-equal costs (see tie_band) resolve to the first cell in row-major order.
Layout greedy_place(const FeatureTable& table, const InteractionMatrix& g, const LayoutConfig& config,
                    const StepObserver& observer = {});

struct PostprocessStats {
    int passes = 0;  // passes executed, including a final unchanged one
    int moves = 0;   // windows whose arrangement changed
};

// Local refinement: for each feature in rank order, permutes it and its
// nearest placed neighbours over their current cells and keeps the best
// arrangement under the full loss. Never increases the loss.
Layout postprocess(const FeatureTable& table, const InteractionMatrix& g, Layout layout,
                   const LayoutConfig& config, PostprocessStats* stats = nullptr);

}  // namespace featgrid
