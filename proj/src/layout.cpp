#include "featgrid/layout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "featgrid/error.hpp"

namespace featgrid {

namespace {

void check_sizes(const FeatureTable& table, const InteractionMatrix& g) {
    if (g.size() != table.size()) {
        throw ValidationError("interaction matrix covers " + std::to_string(g.size()) +
                              " features but the table has " + std::to_string(table.size()));
    }
}

constexpr int kMaxWindow = 6;

}  // namespace

void Layout::validate() const {
    if (candidate_radius < 0) throw ValidationError("negative candidate radius");
    const CandidateBox box{candidate_radius};
    std::set<GridPos> seen;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const GridPos p = positions[i];
        if (!box.contains(p)) {
            throw ValidationError("feature " + std::to_string(i) + " at (" + std::to_string(p.x) +
                                  ", " + std::to_string(p.y) + ") lies outside radius " +
                                  std::to_string(candidate_radius));
        }
        if (!seen.insert(p).second) {
            throw ValidationError("two features share cell (" + std::to_string(p.x) + ", " +
                                  std::to_string(p.y) + ")");
        }
    }
}

void LayoutConfig::validate() const {
    weights.validate();
    if (postprocess_passes < 0) throw ValidationError("postprocess passes must be >= 0");
    if (window_size < 2 || window_size > kMaxWindow) {
        throw ValidationError("window size must be in [2, 6], got " + std::to_string(window_size));
    }
    if (candidate_radius_override && *candidate_radius_override < 0) {
        throw ValidationError("candidate radius must be >= 0");
    }
}

LossTerms loss_terms(const FeatureTable& table, const InteractionMatrix& g, const Layout& layout,
                     const Weights& w, Execution exec) {
    check_sizes(table, g);
    if (layout.positions.size() != table.size()) {
        throw ValidationError("layout has " + std::to_string(layout.positions.size()) +
                              " positions for " + std::to_string(table.size()) + " features");
    }
    layout.validate();
    w.validate();

    const std::vector<double> imp = table.importances();
    const auto& pos = layout.positions;
    std::vector<double> rows(pos.size(), 0.0);
    kernels::main_term_rows(exec, imp, g.entries(), pos, rows);

    LossTerms terms;
    for (double r : rows) terms.main += r;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        terms.r_center += imp[i] * static_cast<double>(pos[i].norm2());
        if (i > 0) terms.r_seq += imp[i] * static_cast<double>(distance2(pos[i], pos[i - 1]));
    }
    terms.total = terms.main + w.w1 * terms.r_center + w.w2 * terms.r_seq;
    return terms;
}

std::int64_t candidate_radius_for(std::size_t n) {
    std::int64_t r = 0;
    while (static_cast<std::size_t>((2 * r + 1) * (2 * r + 1)) < 4 * n) ++r;
    return r;
}

Layout greedy_place(const FeatureTable& table, const InteractionMatrix& g, const LayoutConfig& config,
                    const StepObserver& observer) {
    config.validate();
    check_sizes(table, g);
    if (table.empty()) throw ValidationError("cannot place an empty feature table");

    const std::size_t n = table.size();
    const CandidateBox box{config.candidate_radius_override.value_or(candidate_radius_for(n))};
    if (box.cell_count() < n) {
        throw ValidationError("candidate radius " + std::to_string(box.radius) + " holds " +
                              std::to_string(box.cell_count()) + " cells, fewer than " +
                              std::to_string(n) + " features");
    }

    Layout layout;
    layout.candidate_radius = box.radius;
    layout.positions.resize(n);
    std::vector<std::uint8_t> occupied(box.cell_count(), 0);
    std::vector<double> costs(box.cell_count());
    kernels::Aggregates agg(n);

    for (std::size_t i = 0; i < n; ++i) {
        StepAggregate step{agg.s[i], agg.mx[i], agg.my[i], agg.t[i], std::nullopt};
        if (i > 0) step.previous = layout.positions[i - 1];
        if (observer) observer(i, step, std::span<const GridPos>(layout.positions.data(), i));

        kernels::score_candidates(config.exec, box, occupied, step, config.weights, costs);
        const std::size_t c = kernels::select_candidate(config.exec, costs);
        if (c >= costs.size()) throw ValidationError("no free candidate cell left");
        layout.positions[i] = box.position(c);
        occupied[c] = 1;
        kernels::absorb_placement(config.exec, g.row(i), i, layout.positions[i], agg);
    }
    return layout;
}

namespace {

// Re-arranges one window of features over their own cells.
class WindowOptimizer {
public:
    WindowOptimizer(const std::vector<double>& imp, const InteractionMatrix& g, const Weights& w)
        : imp_(imp), g_(g), w_(w) {}

    // Returns true when the window's features were moved.
    bool improve(std::span<const std::size_t> members, std::vector<GridPos>& pos) {
        const std::size_t k = members.size();
        const std::size_t n = pos.size();
        std::array<GridPos, kMaxWindow> slots{};
        for (std::size_t u = 0; u < k; ++u) slots[u] = pos[members[u]];

        std::vector<std::uint8_t> in_window(n, 0);
        for (std::size_t m : members) in_window[m] = 1;

        // unary[u][v]: every term that involves member u alone when it sits in slot v.
        std::array<std::array<double, kMaxWindow>, kMaxWindow> unary{};
        for (std::size_t u = 0; u < k; ++u) {
            const std::size_t a = members[u];
            for (std::size_t v = 0; v < k; ++v) {
                const GridPos q = slots[v];
                double c = 0.0;
                for (std::size_t b = 0; b < n; ++b) {
                    if (in_window[b]) continue;
                    const double gab = g_(a, b);
                    if (gab != 0.0) c += pair_importance(a, b) * gab * static_cast<double>(distance2(q, pos[b]));
                }
                c += w_.w1 * imp_[a] * static_cast<double>(q.norm2());
                if (a > 0 && !in_window[a - 1]) {
                    c += w_.w2 * imp_[a] * static_cast<double>(distance2(q, pos[a - 1]));
                }
                if (a + 1 < n && !in_window[a + 1]) {
                    c += w_.w2 * imp_[a + 1] * static_cast<double>(distance2(q, pos[a + 1]));
                }
                unary[u][v] = c;
            }
        }
        // pair[u][u2]: weight on |q_u - q_u2|^2 for two members.
        std::array<std::array<double, kMaxWindow>, kMaxWindow> pair{};
        for (std::size_t u = 0; u < k; ++u) {
            for (std::size_t u2 = u + 1; u2 < k; ++u2) {
                const std::size_t a = members[u];
                const std::size_t b = members[u2];
                double c = pair_importance(a, b) * g_(a, b);
                if (a + 1 == b || b + 1 == a) c += w_.w2 * imp_[std::max(a, b)];
                pair[u][u2] = c;
            }
        }

        auto cost_of = [&](const std::array<std::size_t, kMaxWindow>& perm) {
            double c = 0.0;
            for (std::size_t u = 0; u < k; ++u) c += unary[u][perm[u]];
            for (std::size_t u = 0; u < k; ++u) {
                for (std::size_t u2 = u + 1; u2 < k; ++u2) {
                    if (pair[u][u2] != 0.0) {
                        c += pair[u][u2] * static_cast<double>(distance2(slots[perm[u]], slots[perm[u2]]));
                    }
                }
            }
            return c;
        };

        std::array<std::size_t, kMaxWindow> perm{};
        std::iota(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k), std::size_t{0});
        std::array<std::size_t, kMaxWindow> best_perm = perm;
        double best = cost_of(perm);
        bool found = false;
        while (std::next_permutation(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k))) {
            const double c = cost_of(perm);
            if (c < best - kImprovementTolerance * std::max(1.0, std::abs(best))) {
                best = c;
                best_perm = perm;
                found = true;
            }
        }
        if (!found) return false;
        for (std::size_t u = 0; u < k; ++u) pos[members[u]] = slots[best_perm[u]];
        return true;
    }

private:
    // The main term weights pair (a, b) by the importance of the later-ranked one.
    double pair_importance(std::size_t a, std::size_t b) const { return imp_[std::max(a, b)]; }

    static constexpr double kImprovementTolerance = 1e-12;

    const std::vector<double>& imp_;
    const InteractionMatrix& g_;
    const Weights& w_;
};

// Feature i followed by its k-1 nearest other features (distance, then rank).
void nearest_window(std::size_t i, const std::vector<GridPos>& pos, std::size_t k,
                    std::vector<std::size_t>& scratch, std::vector<std::size_t>& members) {
    scratch.clear();
    for (std::size_t b = 0; b < pos.size(); ++b) {
        if (b != i) scratch.push_back(b);
    }
    const GridPos center = pos[i];
    auto closer = [&](std::size_t a, std::size_t b) {
        const auto da = distance2(center, pos[a]);
        const auto db = distance2(center, pos[b]);
        return da != db ? da < db : a < b;
    };
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1),
                      scratch.end(), closer);
    members.assign(1, i);
    members.insert(members.end(), scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1));
}

}  // namespace

Layout postprocess(const FeatureTable& table, const InteractionMatrix& g, Layout layout,
                   const LayoutConfig& config, PostprocessStats* stats) {
    config.validate();
    check_sizes(table, g);
    if (layout.positions.size() != table.size()) {
        throw ValidationError("layout has " + std::to_string(layout.positions.size()) +
                              " positions for " + std::to_string(table.size()) + " features");
    }
    layout.validate();

    PostprocessStats local;
    const std::size_t n = table.size();
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config.window_size), n);
    if (k >= 2) {
        const std::vector<double> imp = table.importances();
        WindowOptimizer optimizer(imp, g, config.weights);
        std::vector<std::size_t> scratch;
        std::vector<std::size_t> members;
        scratch.reserve(n);
        for (int pass = 0; pass < config.postprocess_passes; ++pass) {
            ++local.passes;
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                nearest_window(i, layout.positions, k, scratch, members);
                if (optimizer.improve(members, layout.positions)) {
                    changed = true;
                    ++local.moves;
                }
            }
            if (!changed) break;
        }
    }
    if (stats) *stats = local;
    return layout;
}

}  // namespace featgrid
