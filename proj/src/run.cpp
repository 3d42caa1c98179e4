#include "featgrid/run.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include "featgrid/error.hpp"
#include "featgrid/io.hpp"
#include "featgrid/overlay.hpp"

namespace featgrid {

void RunConfig::validate() const {
    if (features_path.empty()) throw ValidationError("--features is required");
    if (interaction != InteractionMode::none && !interaction_path) {
        throw ValidationError("--interaction-file is required when --interaction is not 'none'");
    }
    if (interaction == InteractionMode::none && interaction_path) {
        throw ValidationError("--interaction-file given but --interaction is 'none'");
    }
    if (highlight_paths.size() > 2) throw ValidationError("--highlight may be given at most twice");
    if (highlight_colors.size() > highlight_paths.size()) {
        throw ValidationError("more --highlight-color values than --highlight files");
    }
    for (const auto& c : highlight_colors) Rgb::parse(c);
    if (out_svg.empty() || out_json.empty()) throw ValidationError("output paths must not be empty");
    layout.validate();
    render.validate();
}

std::string RunSummary::line() const {
    std::ostringstream s;
    s.precision(10);
    s << "features=" << features << " radius=" << radius << " loss=" << loss.total << " main=" << loss.main
      << " r_center=" << loss.r_center << " r_seq=" << loss.r_seq << " greedy_loss=" << greedy_loss.total
      << " passes=" << postprocess.passes << " moves=" << postprocess.moves;
    s.precision(3);
    s << std::fixed << " time=" << seconds << "s";
    return s.str();
}

RunSummary run(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    RunSummary summary;

    const FeatureTable table = parse_features(config.features_path);
    InteractionMatrix g;
    switch (config.interaction) {
        case InteractionMode::none:
            g = InteractionMatrix::zeros(table.size());
            break;
        case InteractionMode::pearson: {
            const auto& path = *config.interaction_path;
            const ValueMatrix values = parse_value_matrix(read_file(path), path, table);
            try {
                g = pearson_interaction(values, config.sign, config.layout.exec);
            } catch (const ValidationError& e) {
                throw ValidationError(path + ": " + e.what());
            }
            break;
        }
        case InteractionMode::cooccurrence: {
            const auto& path = *config.interaction_path;
            const CooccurrenceCounts counts = parse_cooccurrence(read_file(path), path, table);
            try {
                g = cooccurrence_interaction(counts);
            } catch (const ValidationError& e) {
                throw ValidationError(path + ": " + e.what());
            }
            break;
        }
        case InteractionMode::matrix: {
            const auto& path = *config.interaction_path;
            g = parse_interaction_matrix(read_file(path), path, table, &summary.warnings);
            break;
        }
    }

    std::vector<FeatureSubset> subsets;
    for (std::size_t h = 0; h < config.highlight_paths.size(); ++h) {
        subsets.push_back(parse_subset_file(config.highlight_paths[h]));
        if (h < config.highlight_colors.size()) {
            subsets.back().requested_color = Rgb::parse(config.highlight_colors[h]).hex();
        }
    }

    const Layout greedy = greedy_place(table, g, config.layout);
    summary.greedy_loss = loss_terms(table, g, greedy, config.layout.weights, config.layout.exec);
    const Layout layout = postprocess(table, g, greedy, config.layout, &summary.postprocess);
    summary.loss = loss_terms(table, g, layout, config.layout.weights, config.layout.exec);
    summary.features = table.size();
    summary.radius = layout.candidate_radius;

    std::vector<OverlaySpec> overlays = resolve_styles(subsets, table, layout);
    const RenderOutput out = render(layout, table, std::move(overlays), summary.loss, config.render, &summary.warnings);
    write_file(config.out_svg, out.svg);
    write_file(config.out_json, out.json);

    summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

int run_and_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const RunSummary summary = run(config);
        for (const auto& w : summary.warnings) err << "warning: " << w << '\n';
        out << summary.line() << '\n';
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace featgrid
