#include <random>
#include <set>

#include <doctest.h>

#include "featgrid/error.hpp"
#include "featgrid/overlay.hpp"

using namespace featgrid;

namespace {

std::int64_t loop_length(const VertexLoop& loop) {
    std::int64_t len = 0;
    for (std::size_t v = 0; v < loop.size(); ++v) {
        const GridPos a = loop[v], b = loop[(v + 1) % loop.size()];
        len += std::abs(a.x - b.x) + std::abs(a.y - b.y);
    }
    return len;
}

// Twice the signed area; positive means clockwise on screen (y down).
std::int64_t signed_area2(const VertexLoop& loop) {
    std::int64_t a = 0;
    for (std::size_t v = 0; v < loop.size(); ++v) {
        const GridPos p = loop[v], q = loop[(v + 1) % loop.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return a;
}

// Winding number of the point (x + 0.5, y + 0.5) around an axis-aligned loop,
// counting vertical edges crossed by a ray towards +x.
int winding(const VertexLoop& loop, GridPos cell) {
    int w = 0;
    for (std::size_t v = 0; v < loop.size(); ++v) {
        const GridPos a = loop[v], b = loop[(v + 1) % loop.size()];
        if (a.x != b.x || a.x <= cell.x) continue;
        const auto lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
        if (cell.y >= lo && cell.y < hi) w += b.y > a.y ? 1 : -1;
    }
    return w;
}

std::vector<GridPos> block(std::int64_t w, std::int64_t h, std::int64_t x0 = 0, std::int64_t y0 = 0) {
    std::vector<GridPos> out;
    for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x) out.push_back({x0 + x, y0 + y});
    return out;
}

}  // namespace

TEST_CASE("area_perimeter examples") {
    CHECK(area_perimeter(block(2, 2)) == AreaPerimeter{4, 8});
    CHECK(area_perimeter(block(4, 1)) == AreaPerimeter{4, 10});
    CHECK(area_perimeter(block(1, 1)) == AreaPerimeter{1, 4});
    CHECK_THROWS_AS(area_perimeter(std::vector<GridPos>{}), ValidationError);
}

TEST_CASE("trace_contours examples") {
    auto one = trace_contours(block(1, 1));
    REQUIRE(one.size() == 1);
    CHECK(one[0] == VertexLoop{{0, 0}, {1, 0}, {1, 1}, {0, 1}});

    auto bar = trace_contours(block(2, 1));
    REQUIRE(bar.size() == 1);
    CHECK(bar[0] == VertexLoop{{0, 0}, {2, 0}, {2, 1}, {0, 1}});

    auto diag = trace_contours(std::vector<GridPos>{{0, 0}, {1, 1}});
    REQUIRE(diag.size() == 2);
    CHECK(diag[0] == VertexLoop{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(diag[1] == VertexLoop{{1, 1}, {2, 1}, {2, 2}, {1, 2}});

    // 3x3 ring: outer clockwise, hole counter-clockwise.
    auto ring_cells = block(3, 3);
    ring_cells.erase(ring_cells.begin() + 4);
    auto ring = trace_contours(ring_cells);
    REQUIRE(ring.size() == 2);
    CHECK(ring[0] == VertexLoop{{0, 0}, {3, 0}, {3, 3}, {0, 3}});
    CHECK(ring[1] == VertexLoop{{1, 1}, {1, 2}, {2, 2}, {2, 1}});
    CHECK(signed_area2(ring[0]) > 0);
    CHECK(signed_area2(ring[1]) < 0);

    CHECK_THROWS_AS(trace_contours(std::vector<GridPos>{}), ValidationError);
}

TEST_CASE("contours of random cell sets") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const std::int64_t side = 2 + trial % 7;
        std::bernoulli_distribution take(0.3 + 0.4 * ((trial % 5) / 4.0));
        std::vector<GridPos> cells;
        for (std::int64_t y = -side; y < side; ++y)
            for (std::int64_t x = -side; x < side; ++x)
                if (take(rng)) cells.push_back({x, y});
        if (cells.empty()) cells.push_back({0, 0});

        const auto loops = trace_contours(cells);
        std::int64_t total = 0;
        for (const auto& l : loops) {
            total += loop_length(l);
            CHECK(signed_area2(l) != 0);
            // Collinear vertices are merged.
            for (std::size_t v = 0; v < l.size(); ++v) {
                const GridPos a = l[(v + l.size() - 1) % l.size()], b = l[v], c = l[(v + 1) % l.size()];
                CHECK(!((a.x == b.x && b.x == c.x) || (a.y == b.y && b.y == c.y)));
            }
        }
        CHECK(total == area_perimeter(cells).perimeter);

        const std::set<GridPos> members(cells.begin(), cells.end());
        for (std::int64_t y = -side - 1; y <= side; ++y) {
            for (std::int64_t x = -side - 1; x <= side; ++x) {
                int w = 0;
                for (const auto& l : loops) w += winding(l, {x, y});
                CHECK(w == (members.contains({x, y}) ? 1 : 0));
            }
        }

        auto shuffled = cells;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(trace_contours(shuffled) == loops);
    }
}

namespace {

FeatureTable line_table(std::size_t n) {
    std::vector<FeatureRecord> recs;
    for (std::size_t i = 0; i < n; ++i) recs.push_back({"f" + std::to_string(i), "t", double(n - i), {}});
    return build_table(std::move(recs));
}

}  // namespace

TEST_CASE("resolve_styles") {
    // f0..f3 form a 2x2 block, f4..f7 a 1x4 line.
    const auto table = line_table(8);
    const Layout layout{{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 3}, {1, 3}, {2, 3}, {3, 3}}, 3};
    const FeatureSubset block_set{"block", {"f0", "f1", "f2", "f3"}, std::nullopt};
    const FeatureSubset line_set{"line", {"f4", "f5", "f6", "f7"}, std::nullopt};

    auto specs = resolve_styles(std::vector{line_set, block_set}, table, layout);
    REQUIRE(specs.size() == 2);
    CHECK(specs[0].style == OverlayStyle::dots);
    CHECK(specs[1].style == OverlayStyle::contour);
    CHECK(specs[0].color == "#FFFF00");
    CHECK(specs[1].color == "#FFFFFF");
    CHECK(specs[0].polygons.empty());
    CHECK(specs[1].polygons == std::vector<VertexLoop>{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}});

    auto single = resolve_styles(std::vector{line_set}, table, layout);
    CHECK(single[0].style == OverlayStyle::contour);

    const FeatureSubset a{"a", {"f0", "f1"}, "#123456"};
    const FeatureSubset b{"b", {"f2", "f3"}, std::nullopt};
    auto tie = resolve_styles(std::vector{a, b}, table, layout);
    CHECK(tie[0].style == OverlayStyle::contour);
    CHECK(tie[1].style == OverlayStyle::dots);
    CHECK(tie[0].color == "#123456");

    CHECK_THROWS_AS(resolve_styles(std::vector{a, b, a}, table, layout), ValidationError);
    CHECK_THROWS_WITH_AS(resolve_styles(std::vector{FeatureSubset{"x", {"nope"}, {}}}, table, layout),
                         doctest::Contains("nope"), ValidationError);
    CHECK_THROWS_AS(resolve_styles(std::vector{FeatureSubset{"x", {}, {}}}, table, layout), ValidationError);
}
