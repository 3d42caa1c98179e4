#include <random>

#include <doctest.h>

#include "featgrid/error.hpp"
#include "featgrid/layout.hpp"
#include "oracles.hpp"

using namespace featgrid;

namespace {

FeatureTable table_of(std::vector<double> imp) {
    std::vector<FeatureRecord> recs;
    for (std::size_t i = 0; i < imp.size(); ++i) recs.push_back({"f" + std::to_string(i), "t", imp[i], {}});
    return build_table(std::move(recs));
}

InteractionMatrix g_with(std::size_t n, std::vector<std::tuple<std::size_t, std::size_t, double>> pairs) {
    std::vector<double> e(n * n, 0.0);
    for (auto [i, j, v] : pairs) e[i * n + j] = e[j * n + i] = v;
    return InteractionMatrix::from_dense(n, std::move(e));
}

}  // namespace

TEST_CASE("full_loss hand-derived examples") {
    const Weights w;
    CHECK(full_loss(table_of({4}), InteractionMatrix::zeros(1), Layout{{{0, 0}}, 1}, w) == 0.0);

    const auto two = full_loss(table_of({2, 1}), g_with(2, {{0, 1, 0.5}}), Layout{{{0, 0}, {1, 0}}, 1}, w);
    CHECK(two == doctest::Approx(0.57).epsilon(1e-12));
    CHECK(oracle::loss({2, 1}, {{0, 0.5}, {0.5, 0}}, {{0, 0}, {1, 0}}, 0.05, 0.02) == doctest::Approx(0.57));

    const auto three = loss_terms(table_of({3, 2, 1}), g_with(3, {{0, 2, 1.0}}),
                                  Layout{{{0, 0}, {0, -1}, {-1, 0}}, 1}, w);
    CHECK(three.total == doctest::Approx(1.23).epsilon(1e-12));
    CHECK(three.main == 1.0);
    CHECK(three.r_center == 3.0);
    CHECK(three.r_seq == 4.0);
}

TEST_CASE("full_loss rejects inconsistent input") {
    const Weights w;
    CHECK_THROWS_AS(full_loss(table_of({1, 1}), InteractionMatrix::zeros(3), Layout{{{0, 0}, {1, 0}}, 1}, w),
                    ValidationError);
    CHECK_THROWS_AS(full_loss(table_of({1, 1}), InteractionMatrix::zeros(2), Layout{{{0, 0}}, 1}, w),
                    ValidationError);
    CHECK_THROWS_AS(full_loss(table_of({1, 1}), InteractionMatrix::zeros(2), Layout{{{0, 0}, {0, 0}}, 1}, w),
                    ValidationError);
    CHECK_THROWS_AS(full_loss(table_of({1, 1}), InteractionMatrix::zeros(2), Layout{{{0, 0}, {5, 0}}, 1}, w),
                    ValidationError);
}

TEST_CASE("candidate radius rule") {
    CHECK(candidate_radius_for(1) == 1);
    CHECK(candidate_radius_for(2) == 1);
    CHECK(candidate_radius_for(3) == 2);
    CHECK(candidate_radius_for(6) == 2);
    CHECK(candidate_radius_for(7) == 3);
    CHECK(candidate_radius_for(2000) == 45);
}

TEST_CASE("greedy examples") {
    LayoutConfig cfg;
    CHECK(greedy_place(table_of({1}), InteractionMatrix::zeros(1), cfg).positions == std::vector<GridPos>{{0, 0}});
    CHECK(greedy_place(table_of({2, 1}), InteractionMatrix::zeros(2), cfg).positions ==
          std::vector<GridPos>{{0, 0}, {0, -1}});

    const auto table = table_of({3, 2, 1});
    const auto g = g_with(3, {{0, 2, 1.0}});
    double step2 = -1;
    const auto layout = greedy_place(table, g, cfg, [&](std::size_t i, const StepAggregate& s, auto) {
        if (i == 2) step2 = s.cost({-1, 0}, cfg.weights);
    });
    CHECK(layout.positions == std::vector<GridPos>{{0, 0}, {0, -1}, {-1, 0}});
    CHECK(layout.candidate_radius == 2);
    CHECK(step2 == doctest::Approx(1.09).epsilon(1e-12));
}

TEST_CASE("greedy errors") {
    LayoutConfig cfg;
    CHECK_THROWS_AS(greedy_place(FeatureTable{}, InteractionMatrix::zeros(0), cfg), ValidationError);
    CHECK_THROWS_AS(greedy_place(table_of({1, 1}), InteractionMatrix::zeros(3), cfg), ValidationError);
    cfg.candidate_radius_override = 0;
    CHECK_THROWS_AS(greedy_place(table_of({1, 1}), InteractionMatrix::zeros(2), cfg), ValidationError);
    cfg.candidate_radius_override = std::nullopt;
    cfg.window_size = 7;
    CHECK_THROWS_AS(greedy_place(table_of({1}), InteractionMatrix::zeros(1), cfg), ValidationError);
}

TEST_CASE("greedy per-step optimality against enumeration") {
    std::mt19937_64 rng(29);
    LayoutConfig cfg;
    for (int trial = 0; trial < 40; ++trial) {
        const auto inst = oracle::random_instance(rng, 1 + trial % 12, 0.4);
        const auto layout = greedy_place(inst.table, inst.g, cfg);
        layout.validate();
        const auto pts = oracle::to_pts(layout.positions);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto q = oracle::brute_force_step(i, inst.dense, pts, layout.candidate_radius, 0.05, 0.02);
            CHECK(q.x == pts[i].x);
            CHECK(q.y == pts[i].y);
        }
    }
}

TEST_CASE("greedy invariants: scale invariance, center ordering, determinism") {
    std::mt19937_64 rng(31);
    const auto inst = oracle::random_instance(rng, 50, 0.2);
    LayoutConfig cfg;
    const auto base = greedy_place(inst.table, inst.g, cfg);
    CHECK(greedy_place(inst.table, inst.g, cfg) == base);

    std::vector<FeatureRecord> scaled(inst.table.begin(), inst.table.end());
    for (auto& r : scaled) r.importance *= 3.0;
    CHECK(greedy_place(build_table(scaled), inst.g, cfg) == base);

    cfg.weights.w2 = 0.0;
    const auto centered = greedy_place(inst.table, InteractionMatrix::zeros(50), cfg);
    for (std::size_t i = 1; i < 50; ++i) CHECK(centered.positions[i - 1].norm2() <= centered.positions[i].norm2());
}

TEST_CASE("postprocess examples") {
    LayoutConfig cfg;
    // Two features already optimal.
    const auto t2 = table_of({2, 1});
    const auto g2 = g_with(2, {{0, 1, 0.5}});
    const auto l2 = greedy_place(t2, g2, cfg);
    CHECK(postprocess(t2, g2, l2, cfg) == l2);

    // f1 and f2 interact strongly but start diagonal to each other.
    cfg.weights = {0.0, 0.0};
    const auto t3 = table_of({1, 1, 1});
    const auto g3 = g_with(3, {{1, 2, 10.0}});
    const Layout start{{{0, 0}, {0, -1}, {-1, 0}}, 1};
    CHECK(full_loss(t3, g3, start, cfg.weights) == 20.0);
    PostprocessStats stats;
    const auto improved = postprocess(t3, g3, start, cfg, &stats);
    CHECK(full_loss(t3, g3, improved, cfg.weights) == 10.0);
    CHECK(distance2(improved.positions[1], improved.positions[2]) == 1);
    CHECK(stats.moves >= 1);
    CHECK(stats.passes == 2);
    CHECK(oracle::brute_force_min({1, 1, 1}, oracle::to_dense(g3), {{0, 0}, {0, -1}, {-1, 0}}, 0, 0) == 10.0);

    // G = 0 and w2 = 0: greedy is already rank-ordered by distance to center.
    LayoutConfig centered;
    centered.weights.w2 = 0.0;
    const auto t = table_of({9, 8, 7, 6, 5, 4, 3, 2, 1, 0.5});
    const auto z = InteractionMatrix::zeros(10);
    const auto greedy = greedy_place(t, z, centered);
    CHECK(postprocess(t, z, greedy, centered) == greedy);
}

TEST_CASE("postprocess never increases the loss") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = oracle::random_instance(rng, 5 + trial * 3, 0.3);
        LayoutConfig cfg;
        cfg.window_size = 2 + trial % 5;
        cfg.postprocess_passes = 1;
        auto layout = greedy_place(inst.table, inst.g, cfg);
        double prev = full_loss(inst.table, inst.g, layout, cfg.weights);
        for (int pass = 0; pass < 4; ++pass) {
            layout = postprocess(inst.table, inst.g, layout, cfg);
            layout.validate();
            const double now = full_loss(inst.table, inst.g, layout, cfg.weights);
            CHECK(now <= prev);
            CHECK(oracle::rel_close(now, oracle::loss(inst.table.importances(), inst.dense,
                                                      oracle::to_pts(layout.positions), 0.05, 0.02), 1e-9));
            prev = now;
        }
    }
}

TEST_CASE("full_loss linearity in importance") {
    std::mt19937_64 rng(41);
    const auto inst = oracle::random_instance(rng, 30, 0.5);
    const auto layout = greedy_place(inst.table, inst.g, LayoutConfig{});
    const double base = full_loss(inst.table, inst.g, layout, Weights{});
    for (double c : {0.5, 3.0, 100.0}) {
        std::vector<FeatureRecord> scaled(inst.table.begin(), inst.table.end());
        for (auto& r : scaled) r.importance *= c;
        CHECK(oracle::rel_close(full_loss(build_table(scaled), inst.g, layout, Weights{}), c * base, 1e-9));
    }
}
