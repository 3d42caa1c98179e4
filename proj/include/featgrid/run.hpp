#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "featgrid/interaction.hpp"
#include "featgrid/layout.hpp"
#include "featgrid/render.hpp"

namespace featgrid {

enum class InteractionMode { none, pearson, cooccurrence, matrix };

struct RunConfig {
    std::string features_path;
    InteractionMode interaction = InteractionMode::none;
    std::optional<std::string> interaction_path;
    SignPolicy sign = SignPolicy::absolute;
    LayoutConfig layout;
    std::vector<std::string> highlight_paths;   // at most two
    std::vector<std::string> highlight_colors;  // aligned with highlight_paths
    RenderConfig render;
    std::string out_svg = "layout.svg";
    std::string out_json = "layout.json";

    void validate() const;
};

struct RunSummary {
    std::size_t features = 0;
    std::int64_t radius = 0;
    LossTerms greedy_loss;
    LossTerms loss;
    PostprocessStats postprocess;
    double seconds = 0.0;
    std::vector<std::string> warnings;

    std::string line() const;
};

// Reads inputs, lays out, renders, writes both outputs.
// Throws ValidationError or IoError.
RunSummary run(const RunConfig& config);

// run() with diagnostics: summary to `out`, warnings and errors to `err`.
// Returns 0 on success, 2 on validation errors, 1 on I/O errors.
int run_and_report(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace featgrid
