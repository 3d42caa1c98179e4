#include "featgrid/overlay.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "featgrid/error.hpp"

namespace featgrid {

const char* to_string(OverlayStyle style) {
    return style == OverlayStyle::contour ? "contour" : "dots";
}

AreaPerimeter area_perimeter(std::span<const GridPos> cells) {
    if (cells.empty()) throw ValidationError("area/perimeter of an empty cell set");
    const std::set<GridPos> set(cells.begin(), cells.end());
    AreaPerimeter out;
    out.area = static_cast<std::int64_t>(set.size());
    for (const GridPos c : set) {
        for (const GridPos d : {GridPos{1, 0}, GridPos{-1, 0}, GridPos{0, 1}, GridPos{0, -1}}) {
            if (!set.contains(GridPos{c.x + d.x, c.y + d.y})) ++out.perimeter;
        }
    }
    return out;
}

namespace {

// Direction index: 0 east, 1 south, 2 west, 3 north (screen coordinates).
constexpr GridPos kStep[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

struct Edge {
    GridPos from;
    int dir;
};

}  // namespace

std::vector<VertexLoop> trace_contours(std::span<const GridPos> cells) {
    if (cells.empty()) throw ValidationError("cannot trace contours of an empty cell set");
    const std::set<GridPos> set(cells.begin(), cells.end());
    auto member = [&](std::int64_t x, std::int64_t y) { return set.contains(GridPos{x, y}); };

    // Directed boundary edges with the member cell on the right-hand side.
    std::multimap<GridPos, int> outgoing;
    for (const GridPos c : set) {
        if (!member(c.x, c.y - 1)) outgoing.emplace(GridPos{c.x, c.y}, 0);
        if (!member(c.x + 1, c.y)) outgoing.emplace(GridPos{c.x + 1, c.y}, 1);
        if (!member(c.x, c.y + 1)) outgoing.emplace(GridPos{c.x + 1, c.y + 1}, 2);
        if (!member(c.x - 1, c.y)) outgoing.emplace(GridPos{c.x, c.y + 1}, 3);
    }

    auto take = [&](GridPos at, int dir) {
        auto [lo, hi] = outgoing.equal_range(at);
        for (auto it = lo; it != hi; ++it) {
            if (it->second == dir) {
                outgoing.erase(it);
                return true;
            }
        }
        return false;
    };

    std::vector<VertexLoop> loops;
    while (!outgoing.empty()) {
        // The smallest remaining vertex in (y, x) order starts a loop there.
        auto start_it = std::min_element(outgoing.begin(), outgoing.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return row_major_less(a.first, b.first);
            return a.second < b.second;
        });
        const GridPos start = start_it->first;
        int dir = start_it->second;
        outgoing.erase(start_it);

        std::vector<Edge> edges{{start, dir}};
        GridPos at{start.x + kStep[dir].x, start.y + kStep[dir].y};
        while (at != start) {
            // Prefer the sharpest right turn so diagonal neighbours split apart.
            bool moved = false;
            for (int turn : {1, 0, 3}) {
                const int next = (dir + turn) % 4;
                if (take(at, next)) {
                    edges.push_back({at, next});
                    dir = next;
                    at = GridPos{at.x + kStep[dir].x, at.y + kStep[dir].y};
                    moved = true;
                    break;
                }
            }
            if (!moved) throw std::logic_error("open contour while tracing cell boundary");
        }

        VertexLoop loop;
        const std::size_t m = edges.size();
        for (std::size_t e = 0; e < m; ++e) {
            const int prev_dir = edges[(e + m - 1) % m].dir;
            if (edges[e].dir != prev_dir) loop.push_back(edges[e].from);
        }
        // The start vertex is always a corner: nothing lies above or left of it.
        loops.push_back(std::move(loop));
    }

    std::sort(loops.begin(), loops.end(), [](const VertexLoop& a, const VertexLoop& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), row_major_less);
    });
    return loops;
}

std::vector<OverlaySpec> resolve_styles(std::span<const FeatureSubset> subsets,
                                        const FeatureTable& table, const Layout& layout) {
    if (subsets.size() > 2) {
        throw ValidationError("at most two highlight subsets are supported, got " +
                              std::to_string(subsets.size()));
    }
    if (layout.positions.size() != table.size()) {
        throw ValidationError("layout and feature table sizes differ");
    }

    std::vector<OverlaySpec> out;
    std::vector<AreaPerimeter> shape;
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        const FeatureSubset& subset = subsets[s];
        if (subset.members.empty()) {
            throw ValidationError("highlight subset '" + subset.label + "' is empty");
        }
        std::vector<std::size_t> indices;
        std::unordered_set<std::string> seen;
        for (const auto& name : subset.members) {
            const std::size_t idx = table.index_of(name);
            if (idx == table.size()) {
                throw ValidationError("highlight subset '" + subset.label + "' names unknown feature '" +
                                      name + "'");
            }
            if (seen.insert(name).second) indices.push_back(idx);
        }
        std::sort(indices.begin(), indices.end());

        OverlaySpec spec;
        spec.label = subset.label;
        spec.color = subset.requested_color.value_or(kDefaultOverlayColors[s]);
        for (std::size_t idx : indices) {
            spec.members.push_back(table[idx].name);
            spec.cells.push_back(layout.positions[idx]);
        }
        shape.push_back(area_perimeter(spec.cells));
        out.push_back(std::move(spec));
    }

    if (out.size() == 2) {
        // area0/perimeter0 >= area1/perimeter1, compared exactly.
        const bool first_wins = shape[0].area * shape[1].perimeter >= shape[1].area * shape[0].perimeter;
        out[0].style = first_wins ? OverlayStyle::contour : OverlayStyle::dots;
        out[1].style = first_wins ? OverlayStyle::dots : OverlayStyle::contour;
    }
    for (auto& spec : out) {
        if (spec.style == OverlayStyle::contour) spec.polygons = trace_contours(spec.cells);
    }
    return out;
}

}  // namespace featgrid
