#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "featgrid/interaction.hpp"
#include "featgrid/model.hpp"
#include "featgrid/overlay.hpp"

namespace featgrid {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// CSV with header `name,type,importance[,stat...]`, or (for *.json) an array
// of objects with name, type, importance and either a `stats` object or extra
// keys. Extra columns become pop-up stats in their input order.
FeatureTable parse_features(const std::string& path);
FeatureTable parse_features_csv(std::string_view text, const std::string& source);
FeatureTable parse_features_json(std::string_view text, const std::string& source);

// Per-example values: header row of feature names, one row per example.
// Columns are reordered into the table's selection order.
ValueMatrix parse_value_matrix(std::string_view text, const std::string& source, const FeatureTable& table);

// Rows `name_a,name_b,count`; a row naming the same feature twice gives its
// usage count. An optional header `name_a,name_b,count` is skipped.
CooccurrenceCounts parse_cooccurrence(std::string_view text, const std::string& source,
                                      const FeatureTable& table);

// Square matrix with a header row and a leading column of feature names.
InteractionMatrix parse_interaction_matrix(std::string_view text, const std::string& source,
                                           const FeatureTable& table,
                                           std::vector<std::string>* warnings = nullptr);

// JSON array of names, JSON object {"label", "features"}, or CSV with one
// name per line (first column; a leading `name` header is skipped). The label
// defaults to `default_label`.
FeatureSubset parse_subset(std::string_view text, const std::string& source, bool json,
                           const std::string& default_label);
FeatureSubset parse_subset_file(const std::string& path);

}  // namespace featgrid
