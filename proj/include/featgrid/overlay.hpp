#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "featgrid/layout.hpp"
#include "featgrid/model.hpp"

namespace featgrid {

struct FeatureSubset {
    std::string label;
    std::vector<std::string> members;
    std::optional<std::string> requested_color;  // "#RRGGBB"
};

enum class OverlayStyle { contour, dots };

const char* to_string(OverlayStyle style);

// Closed loop of grid-corner vertices; the closing edge back to the first
// vertex is implicit.
using VertexLoop = std::vector<GridPos>;

struct OverlaySpec {
    std::string label;
    std::vector<std::string> members;
    std::string color;
    OverlayStyle style = OverlayStyle::contour;
    std::vector<GridPos> cells;        // member cells in selection order
    std::vector<VertexLoop> polygons;  // contour style only

    bool operator==(const OverlaySpec&) const = default;
};

inline const char* kDefaultOverlayColors[] = {"#FFFF00", "#FFFFFF"};

struct AreaPerimeter {
    std::int64_t area = 0;
    std::int64_t perimeter = 0;

    bool operator==(const AreaPerimeter&) const = default;
};

// Area is the number of distinct cells; perimeter counts unit edges shared
// with exactly one member cell.
AreaPerimeter area_perimeter(std::span<const GridPos> cells);

// Boundary loops of the union of unit cells. Cells group by 4-connectivity;
// outer loops run clockwise on screen (y down), holes counter-clockwise;
// collinear vertices are merged. Loops are sorted by their smallest (y, x)
// vertex and start there.
std::vector<VertexLoop> trace_contours(std::span<const GridPos> cells);

// One subset draws as a contour. With two, the higher area/perimeter ratio
// draws as a contour and the other as dots; a tie favours the first.
std::vector<OverlaySpec> resolve_styles(std::span<const FeatureSubset> subsets,
                                        const FeatureTable& table, const Layout& layout);

}  // namespace featgrid
