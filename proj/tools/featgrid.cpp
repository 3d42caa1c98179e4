// featgrid: lay out ML features on a grid and render them as SVG + JSON.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "featgrid/run.hpp"

int main(int argc, char** argv) {
    using featgrid::InteractionMode;
    featgrid::RunConfig config;
    std::string interaction_file;
    std::int64_t radius = -1;
    std::string annotation;

    CLI::App app{"Place features on a 2D grid by importance and interaction, render SVG and layout JSON"};
    app.add_option("--features", config.features_path, "Features CSV (name,type,importance[,stats...]) or JSON");
    const std::map<std::string, InteractionMode> modes{{"none", InteractionMode::none},
                                                       {"pearson", InteractionMode::pearson},
                                                       {"cooccurrence", InteractionMode::cooccurrence},
                                                       {"matrix", InteractionMode::matrix}};
    app.add_option("--interaction", config.interaction, "Interaction source")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
        ->default_str("none");
    auto* file_opt = app.add_option("--interaction-file", interaction_file,
                                    "Values CSV, co-occurrence triplets, or square matrix CSV");
    const std::map<std::string, featgrid::SignPolicy> signs{{"abs", featgrid::SignPolicy::absolute},
                                                            {"clip", featgrid::SignPolicy::clip}};
    app.add_option("--pearson-sign", config.sign, "Negative correlations: abs or clip")
        ->transform(CLI::CheckedTransformer(signs, CLI::ignore_case))
        ->default_str("abs");
    app.add_option("--w1", config.layout.weights.w1, "Center regularizer weight")->capture_default_str();
    app.add_option("--w2", config.layout.weights.w2, "Sequence regularizer weight")->capture_default_str();
    app.add_option("--passes", config.layout.postprocess_passes, "Postprocess passes")->capture_default_str();
    app.add_option("--window", config.layout.window_size, "Postprocess window size (2-6)")->capture_default_str();
    auto* radius_opt = app.add_option("--radius", radius, "Candidate box radius (default: fits 4x the features)");
    app.add_option("--highlight", config.highlight_paths, "Subset file to highlight (up to two)");
    app.add_option("--highlight-color", config.highlight_colors, "Color for the matching --highlight (#RRGGBB)");
    auto* annotate_opt = app.add_option("--annotate", annotation, "Text shown at the top right");
    app.add_option("--out-svg", config.out_svg, "SVG output path")->capture_default_str();
    app.add_option("--out-json", config.out_json, "Layout JSON output path")->capture_default_str();
    app.add_option("--cell-px", config.render.cell_px, "Grid square size in pixels")->capture_default_str();
    bool serial = false;
    app.add_flag("--serial", serial, "Use the serial kernels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*file_opt) config.interaction_path = interaction_file;
    if (*radius_opt) config.layout.candidate_radius_override = radius;
    if (*annotate_opt) config.render.annotation = annotation;
    if (serial) config.layout.exec = featgrid::Execution::serial;
    return featgrid::run_and_report(config, std::cout, std::cerr);
}
