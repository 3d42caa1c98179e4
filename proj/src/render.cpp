#include "featgrid/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "featgrid/error.hpp"

namespace featgrid {

namespace {

using ojson = nlohmann::ordered_json;

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// Shortest round-trip decimal, locale independent, no "-0".
std::string num(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

// Rough advance width for legend layout; the canvas only needs to be wide enough.
double text_width(std::string_view s, int font_px) {
    return static_cast<double>(s.size()) * 0.6 * font_px;
}

std::string label_color(const Rgb& fill) {
    return 299 * fill.r + 587 * fill.g + 114 * fill.b < 128000 ? "#FFFFFF" : "#000000";
}

}  // namespace

Rgb Rgb::parse(std::string_view hex) {
    const bool short_form = hex.size() == 4;
    if ((hex.size() != 7 && !short_form) || hex[0] != '#') {
        throw ValidationError("invalid color '" + std::string(hex) + "', expected #RRGGBB");
    }
    int ch[3];
    for (int i = 0; i < 3; ++i) {
        int hi, lo;
        if (short_form) {
            hi = lo = hex_digit(hex[1 + i]);
        } else {
            hi = hex_digit(hex[1 + 2 * i]);
            lo = hex_digit(hex[2 + 2 * i]);
        }
        if (hi < 0 || lo < 0) throw ValidationError("invalid color '" + std::string(hex) + "'");
        ch[i] = hi * 16 + lo;
    }
    return {static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]),
            static_cast<std::uint8_t>(ch[2])};
}

std::string Rgb::hex() const {
    static constexpr char digits[] = "0123456789ABCDEF";
    std::string out = "#";
    for (int c : {r, g, b}) {
        out += digits[c >> 4];
        out += digits[c & 15];
    }
    return out;
}

std::vector<std::string> default_palette() {
    return {"#E41A1C", "#377EB8", "#4DAF4A", "#984EA3", "#FF7F00", "#A65628",
            "#F781BF", "#999999", "#66C2A5", "#FC8D62", "#8DA0CB", "#E6AB02"};
}

void RenderConfig::validate() const {
    if (cell_px <= 0) throw ValidationError("cell size must be positive");
    if (gap_px < 0 || gap_px >= cell_px) throw ValidationError("gap must be in [0, cell size)");
    if (margin_px < 0) throw ValidationError("margin must be >= 0");
    if (palette.empty()) throw ValidationError("palette must not be empty");
    for (const auto& c : palette) Rgb::parse(c);
    if (label_font_px <= 0 || legend_font_px <= 0) throw ValidationError("font sizes must be positive");
}

std::vector<LegendEntry> assign_colors(const FeatureTable& table, std::span<const std::string> palette) {
    if (palette.empty()) throw ValidationError("palette must not be empty");
    std::map<std::string, std::size_t> counts;
    for (const auto& f : table) ++counts[f.type_tag];
    std::vector<LegendEntry> legend;
    for (const auto& [type, count] : counts) legend.push_back({type, "", count});
    std::stable_sort(legend.begin(), legend.end(),
                     [](const LegendEntry& a, const LegendEntry& b) { return a.count > b.count; });
    for (std::size_t i = 0; i < legend.size(); ++i) {
        legend[i].color = Rgb::parse(palette[i % palette.size()]).hex();
    }
    return legend;
}

std::string cell_fill(std::string_view base_hex, int saturation) {
    if (saturation < 0 || saturation > 255) {
        throw ValidationError("saturation must be in [0, 255], got " + std::to_string(saturation));
    }
    const Rgb base = Rgb::parse(base_hex);
    // round(255 - (255 - c) * s / 255), done in integers: numerator >= 0.
    auto channel = [saturation](int c) {
        const int num = 255 * 255 - (255 - c) * saturation;
        return static_cast<std::uint8_t>((2 * num + 255) / 510);
    };
    return Rgb{channel(base.r), channel(base.g), channel(base.b)}.hex();
}

RenderDocument build_document(const FeatureTable& table, const Layout& layout,
                              std::vector<OverlaySpec> overlays, const LossTerms& loss,
                              const RenderConfig& config, std::vector<std::string>* warnings) {
    config.validate();
    if (table.empty()) throw ValidationError("nothing to render: empty feature table");
    if (layout.positions.size() != table.size()) {
        throw ValidationError("layout has " + std::to_string(layout.positions.size()) +
                              " positions for " + std::to_string(table.size()) + " features");
    }
    layout.validate();

    RenderDocument doc;
    doc.legend = assign_colors(table, config.palette);
    if (warnings && doc.legend.size() > config.palette.size()) {
        warnings->push_back(std::to_string(doc.legend.size()) + " feature types share a palette of " +
                            std::to_string(config.palette.size()) + " colors; colors repeat");
    }
    std::map<std::string, std::string> type_color;
    for (const auto& e : doc.legend) type_color[e.type] = e.color;

    const std::vector<int> sat = normalize_importance(table);
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& f = table[i];
        doc.cells.push_back({f.name, f.type_tag, f.importance, static_cast<int>(i + 1), layout.positions[i],
                             sat[i], cell_fill(type_color[f.type_tag], sat[i]), f.stats});
    }
    doc.overlays = std::move(overlays);
    doc.annotation = config.annotation;
    doc.loss = loss;
    return doc;
}

std::string to_svg(const RenderDocument& doc, const RenderConfig& config) {
    config.validate();
    if (doc.cells.empty()) throw ValidationError("nothing to render: no cells");

    std::int64_t min_x = doc.cells[0].pos.x, max_x = min_x;
    std::int64_t min_y = doc.cells[0].pos.y, max_y = min_y;
    for (const auto& c : doc.cells) {
        min_x = std::min(min_x, c.pos.x);
        max_x = std::max(max_x, c.pos.x);
        min_y = std::min(min_y, c.pos.y);
        max_y = std::max(max_y, c.pos.y);
    }

    const double pitch = config.cell_px + config.gap_px;
    const double margin = config.margin_px;
    const double header = doc.annotation ? config.legend_font_px + 12.0 : 0.0;
    const double grid_left = margin;
    const double grid_top = margin + header;
    const double grid_w = static_cast<double>(max_x - min_x + 1) * pitch - config.gap_px;
    const double grid_h = static_cast<double>(max_y - min_y + 1) * pitch - config.gap_px;

    const double swatch = config.legend_font_px + 2.0;
    const double legend_row = config.legend_font_px + 8.0;
    const double legend_left = grid_left + grid_w + 24.0;
    double legend_text_w = 0.0;
    std::vector<std::string> legend_text;
    for (const auto& e : doc.legend) {
        legend_text.push_back(e.type + " (" + std::to_string(e.count) + ")");
        legend_text_w = std::max(legend_text_w, text_width(legend_text.back(), config.legend_font_px));
    }
    const double legend_h = static_cast<double>(doc.legend.size()) * legend_row;

    double width = legend_left + swatch + 6.0 + legend_text_w + margin;
    if (doc.annotation) {
        width = std::max(width, 2 * margin + text_width(*doc.annotation, config.legend_font_px));
    }
    width = std::ceil(width);
    const double height = std::ceil(grid_top + std::max(grid_h, legend_h) + margin);

    auto cell_left = [&](GridPos p) { return grid_left + static_cast<double>(p.x - min_x) * pitch; };
    auto cell_top = [&](GridPos p) { return grid_top + static_cast<double>(p.y - min_y) * pitch; };
    // Grid corners sit in the middle of the gaps between cells.
    auto corner_x = [&](std::int64_t x) { return grid_left + static_cast<double>(x - min_x) * pitch - config.gap_px / 2.0; };
    auto corner_y = [&](std::int64_t y) { return grid_top + static_cast<double>(y - min_y) * pitch - config.gap_px / 2.0; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width)
        << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height)
        << "\" font-family=\"" << xml_escape(config.font_family) << "\">\n";

    out << "<g id=\"cells\">\n";
    const double half = config.cell_px / 2.0;
    for (const auto& c : doc.cells) {
        const double x = cell_left(c.pos);
        const double y = cell_top(c.pos);
        std::string tip = c.name + "\ntype: " + c.type + "\nimportance: " + num(c.importance) +
                          "\nrank: " + std::to_string(c.rank);
        for (const auto& [k, v] : c.stats) tip += "\n" + k + ": " + v;
        out << "<g class=\"feature\" data-rank=\"" << c.rank << "\" data-name=\"" << xml_escape(c.name)
            << "\">";
        out << "<title>" << xml_escape(tip) << "</title>";
        out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << config.cell_px
            << "\" height=\"" << config.cell_px << "\" fill=\"" << c.fill
            << "\" stroke=\"#BBBBBB\" stroke-width=\"0.5\"/>";
        out << "<text x=\"" << num(x + half) << "\" y=\"" << num(y + half)
            << "\" text-anchor=\"middle\" dominant-baseline=\"central\" font-size=\""
            << config.label_font_px << "\" fill=\"" << label_color(Rgb::parse(c.fill)) << "\">" << c.rank
            << "</text>";
        out << "</g>\n";
    }
    out << "</g>\n";

    out << "<g id=\"overlays\">\n";
    for (const auto& o : doc.overlays) {
        out << "<g class=\"overlay\" data-label=\"" << xml_escape(o.label) << "\" data-style=\""
            << to_string(o.style) << "\">\n";
        if (o.style == OverlayStyle::contour) {
            std::string d;
            for (const auto& loop : o.polygons) {
                for (std::size_t v = 0; v < loop.size(); ++v) {
                    d += (v == 0 ? "M" : " L");
                    d += num(corner_x(loop[v].x)) + " " + num(corner_y(loop[v].y));
                }
                d += " Z ";
            }
            if (!d.empty()) d.pop_back();
            out << "<path d=\"" << d
                << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"4\" stroke-linejoin=\"miter\"/>\n";
            out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << o.color
                << "\" stroke-width=\"2\" stroke-linejoin=\"miter\"/>\n";
        } else {
            const double r = config.cell_px * 0.18;
            for (const auto& p : o.cells) {
                out << "<circle cx=\"" << num(cell_left(p) + half) << "\" cy=\"" << num(cell_top(p) + half)
                    << "\" r=\"" << num(r) << "\" fill=\"" << o.color
                    << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
            }
        }
        out << "</g>\n";
    }
    out << "</g>\n";

    out << "<g id=\"legend\" font-size=\"" << config.legend_font_px << "\">\n";
    for (std::size_t i = 0; i < doc.legend.size(); ++i) {
        const double y = grid_top + static_cast<double>(i) * legend_row;
        out << "<path d=\"M" << num(legend_left) << ' ' << num(y) << " h" << num(swatch) << " v"
            << num(swatch) << " h-" << num(swatch) << " Z\" fill=\"" << doc.legend[i].color << "\"/>";
        out << "<text x=\"" << num(legend_left + swatch + 6.0) << "\" y=\"" << num(y + swatch / 2.0)
            << "\" dominant-baseline=\"central\">" << xml_escape(legend_text[i]) << "</text>\n";
    }
    out << "</g>\n";

    if (doc.annotation) {
        out << "<text id=\"annotation\" x=\"" << num(width - margin) << "\" y=\"" << num(margin)
            << "\" text-anchor=\"end\" dominant-baseline=\"hanging\" font-size=\"" << config.legend_font_px
            << "\">" << xml_escape(*doc.annotation) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string to_json(const RenderDocument& doc) {
    ojson root;
    root["schema_version"] = 1;
    ojson features = ojson::array();
    for (const auto& c : doc.cells) {
        ojson f;
        f["name"] = c.name;
        f["type"] = c.type;
        f["importance"] = c.importance;
        f["rank"] = c.rank;
        f["x"] = c.pos.x;
        f["y"] = c.pos.y;
        f["saturation"] = c.saturation;
        f["fill"] = c.fill;
        ojson stats = ojson::object();
        for (const auto& [k, v] : c.stats) stats[k] = v;
        f["stats"] = std::move(stats);
        features.push_back(std::move(f));
    }
    root["features"] = std::move(features);

    ojson legend = ojson::array();
    for (const auto& e : doc.legend) legend.push_back({{"type", e.type}, {"color", e.color}, {"count", e.count}});
    root["legend"] = std::move(legend);

    ojson overlays = ojson::array();
    for (const auto& o : doc.overlays) {
        ojson entry;
        entry["label"] = o.label;
        entry["style"] = to_string(o.style);
        entry["color"] = o.color;
        ojson cells = ojson::array();
        for (const auto& p : o.cells) cells.push_back({p.x, p.y});
        entry["cells"] = std::move(cells);
        ojson polygons = ojson::array();
        for (const auto& loop : o.polygons) {
            ojson vertices = ojson::array();
            for (const auto& v : loop) vertices.push_back({v.x, v.y});
            polygons.push_back(std::move(vertices));
        }
        entry["polygons"] = std::move(polygons);
        overlays.push_back(std::move(entry));
    }
    root["overlays"] = std::move(overlays);
    root["annotation"] = doc.annotation ? ojson(*doc.annotation) : ojson(nullptr);
    root["loss"] = {{"total", doc.loss.total},
                    {"main", doc.loss.main},
                    {"r_center", doc.loss.r_center},
                    {"r_seq", doc.loss.r_seq}};
    return root.dump(2) + "\n";
}

RenderDocument document_from_json(std::string_view text) {
    ojson root;
    try {
        root = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("layout JSON: ") + e.what());
    }
    try {
        if (root.at("schema_version").get<int>() != 1) {
            throw ValidationError("layout JSON: unsupported schema_version");
        }
        RenderDocument doc;
        for (const auto& f : root.at("features")) {
            CellView c;
            c.name = f.at("name").get<std::string>();
            c.type = f.at("type").get<std::string>();
            c.importance = f.at("importance").get<double>();
            c.rank = f.at("rank").get<int>();
            c.pos = {f.at("x").get<std::int64_t>(), f.at("y").get<std::int64_t>()};
            c.saturation = f.at("saturation").get<int>();
            c.fill = f.at("fill").get<std::string>();
            for (const auto& [k, v] : f.at("stats").items()) c.stats.emplace_back(k, v.get<std::string>());
            doc.cells.push_back(std::move(c));
        }
        for (const auto& e : root.at("legend")) {
            doc.legend.push_back({e.at("type").get<std::string>(), e.at("color").get<std::string>(),
                                  e.at("count").get<std::size_t>()});
        }
        std::map<GridPos, std::string> name_at;
        for (const auto& c : doc.cells) name_at[c.pos] = c.name;
        for (const auto& o : root.at("overlays")) {
            OverlaySpec spec;
            spec.label = o.at("label").get<std::string>();
            const auto style = o.at("style").get<std::string>();
            if (style != "contour" && style != "dots") {
                throw ValidationError("layout JSON: unknown overlay style '" + style + "'");
            }
            spec.style = style == "contour" ? OverlayStyle::contour : OverlayStyle::dots;
            spec.color = o.at("color").get<std::string>();
            for (const auto& p : o.at("cells")) {
                const GridPos pos{p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>()};
                auto it = name_at.find(pos);
                if (it == name_at.end()) throw ValidationError("layout JSON: overlay cell without a feature");
                spec.cells.push_back(pos);
                spec.members.push_back(it->second);
            }
            for (const auto& loop : o.at("polygons")) {
                VertexLoop vertices;
                for (const auto& v : loop) vertices.push_back({v.at(0).get<std::int64_t>(), v.at(1).get<std::int64_t>()});
                spec.polygons.push_back(std::move(vertices));
            }
            doc.overlays.push_back(std::move(spec));
        }
        if (!root.at("annotation").is_null()) doc.annotation = root.at("annotation").get<std::string>();
        const auto& loss = root.at("loss");
        doc.loss = {loss.at("main").get<double>(), loss.at("r_center").get<double>(),
                    loss.at("r_seq").get<double>(), loss.at("total").get<double>()};
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("layout JSON: ") + e.what());
    }
}

RenderOutput render(const Layout& layout, const FeatureTable& table, std::vector<OverlaySpec> overlays,
                    const LossTerms& loss, const RenderConfig& config, std::vector<std::string>* warnings) {
    const RenderDocument doc = build_document(table, layout, std::move(overlays), loss, config, warnings);
    return {to_svg(doc, config), to_json(doc)};
}

}  // namespace featgrid
