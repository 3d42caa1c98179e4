#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "featgrid/layout.hpp"
#include "featgrid/model.hpp"
#include "featgrid/overlay.hpp"

namespace featgrid {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;

    // Accepts "#RRGGBB" or "#RGB", case-insensitive.
    static Rgb parse(std::string_view hex);
    std::string hex() const;  // "#RRGGBB", uppercase

    bool operator==(const Rgb&) const = default;
};

std::vector<std::string> default_palette();

struct RenderConfig {
    int cell_px = 28;
    int gap_px = 2;
    int margin_px = 20;
    std::vector<std::string> palette = default_palette();
    std::optional<std::string> annotation;  // drawn at the top right
    std::string font_family = "Helvetica, Arial, sans-serif";
    int label_font_px = 11;
    int legend_font_px = 12;

    void validate() const;
};

struct LegendEntry {
    std::string type;
    std::string color;
    std::size_t count = 0;

    bool operator==(const LegendEntry&) const = default;
};

// Type tags ordered by (count desc, name asc) take palette colors in order,
// cycling when there are more types than colors.
std::vector<LegendEntry> assign_colors(const FeatureTable& table, std::span<const std::string> palette);

// White at saturation 0, the base color at 255, linear per channel.
std::string cell_fill(std::string_view base_hex, int saturation);

struct CellView {
    std::string name;
    std::string type;
    double importance = 0.0;
    int rank = 0;  // 1-based
    GridPos pos;
    int saturation = 0;
    std::string fill;
    std::vector<std::pair<std::string, std::string>> stats;

    bool operator==(const CellView&) const = default;
};

// Everything needed to draw a layout, independent of pixel geometry.
struct RenderDocument {
    std::vector<CellView> cells;
    std::vector<LegendEntry> legend;
    std::vector<OverlaySpec> overlays;
    std::optional<std::string> annotation;
    LossTerms loss;

    bool operator==(const RenderDocument&) const = default;
};

RenderDocument build_document(const FeatureTable& table, const Layout& layout,
                              std::vector<OverlaySpec> overlays, const LossTerms& loss,
                              const RenderConfig& config, std::vector<std::string>* warnings = nullptr);

std::string to_svg(const RenderDocument& doc, const RenderConfig& config);

// Layout JSON, schema_version 1.
std::string to_json(const RenderDocument& doc);
RenderDocument document_from_json(std::string_view text);

struct RenderOutput {
    std::string svg;
    std::string json;
};

RenderOutput render(const Layout& layout, const FeatureTable& table, std::vector<OverlaySpec> overlays,
                    const LossTerms& loss, const RenderConfig& config,
                    std::vector<std::string>* warnings = nullptr);

}  // namespace featgrid
