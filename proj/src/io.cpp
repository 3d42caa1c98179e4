#include "featgrid/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "featgrid/csv.hpp"
#include "featgrid/error.hpp"

namespace featgrid {

namespace {

using ojson = nlohmann::ordered_json;

std::string at_line(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_double(std::string_view s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    const char* first = t.data();
    if (*first == '+') ++first;
    auto res = std::from_chars(first, t.data() + t.size(), out);
    return res.ec == std::errc{} && res.ptr == t.data() + t.size();
}

bool parse_count(std::string_view s, std::uint64_t& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    return res.ec == std::errc{} && res.ptr == t.data() + t.size();
}

bool has_json_extension(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".json";
}

std::unordered_map<std::string, std::size_t> name_index(const FeatureTable& table) {
    std::unordered_map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < table.size(); ++i) out.emplace(table[i].name, i);
    return out;
}

std::size_t require_feature(const std::unordered_map<std::string, std::size_t>& index,
                            const std::string& name, const std::string& where) {
    auto it = index.find(name);
    if (it == index.end()) throw ValidationError(where + "unknown feature '" + name + "'");
    return it->second;
}

ojson parse_json(std::string_view text, const std::string& source) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(source + ": invalid JSON: " + e.what());
    }
}

std::string json_text(const ojson& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error writing '" + path + "'");
}

FeatureTable parse_features(const std::string& path) {
    const std::string text = read_file(path);
    return has_json_extension(path) ? parse_features_json(text, path) : parse_features_csv(text, path);
}

FeatureTable parse_features_csv(std::string_view text, const std::string& source) {
    const auto records = parse_csv(text, source);
    if (records.empty()) throw ValidationError(source + ": empty features file");
    const auto& header = records[0].fields;
    std::map<std::string, std::size_t> col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string h = trim(header[c]);
        if (!col.emplace(h, c).second) {
            throw ValidationError(at_line(source, records[0].line) + "duplicate column '" + h + "'");
        }
    }
    for (const char* required : {"name", "type", "importance"}) {
        if (!col.contains(required)) {
            throw ValidationError(at_line(source, records[0].line) + "missing required column '" +
                                  required + "'");
        }
    }
    const std::size_t name_col = col["name"], type_col = col["type"], imp_col = col["importance"];

    std::vector<FeatureRecord> features;
    std::map<std::string, std::size_t> first_line;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = at_line(source, rec.line);
        if (rec.fields.size() != header.size()) {
            throw ValidationError(where + "expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(rec.fields.size()));
        }
        FeatureRecord f;
        f.name = trim(rec.fields[name_col]);
        f.type_tag = trim(rec.fields[type_col]);
        if (f.name.empty()) throw ValidationError(where + "empty feature name");
        if (auto [it, fresh] = first_line.emplace(f.name, rec.line); !fresh) {
            throw ValidationError(where + "duplicate feature name '" + f.name + "' (first on line " +
                                  std::to_string(it->second) + ")");
        }
        if (!parse_double(rec.fields[imp_col], f.importance)) {
            throw ValidationError(where + "field 'importance': cannot parse '" + rec.fields[imp_col] + "'");
        }
        if (!std::isfinite(f.importance) || f.importance < 0.0) {
            throw ValidationError(where + "field 'importance': must be finite and >= 0");
        }
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == name_col || c == type_col || c == imp_col) continue;
            f.stats.emplace_back(trim(header[c]), rec.fields[c]);
        }
        features.push_back(std::move(f));
    }
    if (features.empty()) throw ValidationError(source + ": no features");
    return build_table(std::move(features));
}

FeatureTable parse_features_json(std::string_view text, const std::string& source) {
    const ojson root = parse_json(text, source);
    if (!root.is_array()) throw ValidationError(source + ": expected a JSON array of feature records");
    std::vector<FeatureRecord> features;
    std::map<std::string, std::size_t> first;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const auto& obj = root[i];
        const std::string where = source + ": record " + std::to_string(i) + ": ";
        if (!obj.is_object()) throw ValidationError(where + "not an object");
        for (const char* key : {"name", "type", "importance"}) {
            if (!obj.contains(key)) throw ValidationError(where + "missing field '" + key + "'");
        }
        if (!obj["name"].is_string() || !obj["type"].is_string()) {
            throw ValidationError(where + "fields 'name' and 'type' must be strings");
        }
        if (!obj["importance"].is_number()) throw ValidationError(where + "field 'importance' must be a number");
        FeatureRecord f;
        f.name = obj["name"].get<std::string>();
        f.type_tag = obj["type"].get<std::string>();
        f.importance = obj["importance"].get<double>();
        if (f.name.empty()) throw ValidationError(where + "empty feature name");
        if (auto [it, fresh] = first.emplace(f.name, i); !fresh) {
            throw ValidationError(where + "duplicate feature name '" + f.name + "' (first in record " +
                                  std::to_string(it->second) + ")");
        }
        if (!std::isfinite(f.importance) || f.importance < 0.0) {
            throw ValidationError(where + "field 'importance': must be finite and >= 0");
        }
        for (const auto& [key, value] : obj.items()) {
            if (key == "name" || key == "type" || key == "importance") continue;
            if (key == "stats" && value.is_object()) {
                for (const auto& [k, v] : value.items()) f.stats.emplace_back(k, json_text(v));
            } else {
                f.stats.emplace_back(key, json_text(value));
            }
        }
        features.push_back(std::move(f));
    }
    if (features.empty()) throw ValidationError(source + ": no features");
    return build_table(std::move(features));
}

ValueMatrix parse_value_matrix(std::string_view text, const std::string& source, const FeatureTable& table) {
    const auto records = parse_csv(text, source);
    if (records.empty()) throw ValidationError(source + ": empty value matrix");
    const auto index = name_index(table);
    const auto& header = records[0].fields;
    std::vector<std::size_t> target(header.size());
    std::vector<bool> covered(table.size(), false);
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string where = at_line(source, records[0].line) + "column " + std::to_string(c + 1) + ": ";
        target[c] = require_feature(index, trim(header[c]), where);
        if (covered[target[c]]) throw ValidationError(where + "duplicate column '" + trim(header[c]) + "'");
        covered[target[c]] = true;
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!covered[i]) throw ValidationError(source + ": no column for feature '" + table[i].name + "'");
    }

    ValueMatrix m;
    for (const auto& f : table) m.columns.push_back(f.name);
    m.rows = records.size() - 1;
    m.values.assign(m.rows * table.size(), 0.0);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size()) {
            throw ValidationError(at_line(source, rec.line) + "expected " + std::to_string(header.size()) +
                                  " values, got " + std::to_string(rec.fields.size()));
        }
        for (std::size_t c = 0; c < header.size(); ++c) {
            double v;
            if (!parse_double(rec.fields[c], v) || !std::isfinite(v)) {
                throw ValidationError(at_line(source, rec.line) + "column '" + trim(header[c]) +
                                      "': missing or non-finite value '" + rec.fields[c] + "'");
            }
            m.values[(r - 1) * table.size() + target[c]] = v;
        }
    }
    if (m.rows < 2) throw ValidationError(source + ": value matrix needs at least 2 rows");
    return m;
}

CooccurrenceCounts parse_cooccurrence(std::string_view text, const std::string& source,
                                      const FeatureTable& table) {
    const auto records = parse_csv(text, source);
    const auto index = name_index(table);
    const std::size_t n = table.size();
    CooccurrenceCounts counts{std::vector<std::uint64_t>(n, 0), std::vector<std::uint64_t>(n * n, 0)};
    std::vector<bool> usage_seen(n, false);
    std::vector<bool> pair_seen(n * n, false);

    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = at_line(source, rec.line);
        if (rec.fields.size() != 3) throw ValidationError(where + "expected name_a,name_b,count");
        const std::string a = trim(rec.fields[0]);
        const std::string b = trim(rec.fields[1]);
        if (r == 0 && a == "name_a" && b == "name_b") continue;
        const std::size_t i = require_feature(index, a, where);
        const std::size_t j = require_feature(index, b, where);
        std::uint64_t c;
        if (!parse_count(rec.fields[2], c)) {
            throw ValidationError(where + "count must be a non-negative integer, got '" + rec.fields[2] + "'");
        }
        if (i == j) {
            if (usage_seen[i]) throw ValidationError(where + "repeated usage count for '" + a + "'");
            usage_seen[i] = true;
            counts.usage[i] = c;
        } else {
            if (pair_seen[i * n + j]) {
                throw ValidationError(where + "repeated pair '" + a + "', '" + b + "'");
            }
            pair_seen[i * n + j] = pair_seen[j * n + i] = true;
            counts.pairs[i * n + j] = counts.pairs[j * n + i] = c;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::uint64_t c = counts.pairs[i * n + j];
            if (c > std::min(counts.usage[i], counts.usage[j])) {
                throw ValidationError(source + ": pair '" + table[i].name + "', '" + table[j].name + "' count " +
                                      std::to_string(c) + " exceeds a per-feature usage count (" +
                                      std::to_string(counts.usage[i]) + ", " + std::to_string(counts.usage[j]) + ")");
            }
        }
    }
    return counts;
}

InteractionMatrix parse_interaction_matrix(std::string_view text, const std::string& source,
                                           const FeatureTable& table, std::vector<std::string>* warnings) {
    const auto records = parse_csv(text, source);
    if (records.empty()) throw ValidationError(source + ": empty interaction matrix");
    const auto index = name_index(table);
    const auto& header = records[0].fields;
    const std::size_t n = header.size() - 1;
    if (header.size() < 2) throw ValidationError(at_line(source, records[0].line) + "header has no feature names");
    if (n != table.size() || records.size() - 1 != n) {
        throw ValidationError(source + ": matrix is " + std::to_string(records.size() - 1) + "x" +
                              std::to_string(n) + " but there are " + std::to_string(table.size()) +
                              " features");
    }
    std::vector<std::size_t> col_target(n);
    std::vector<bool> seen(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        const std::string where = at_line(source, records[0].line) + "column " + std::to_string(c + 2) + ": ";
        col_target[c] = require_feature(index, trim(header[c + 1]), where);
        if (seen[col_target[c]]) throw ValidationError(where + "duplicate column '" + trim(header[c + 1]) + "'");
        seen[col_target[c]] = true;
    }
    std::vector<double> entries(n * n, 0.0);
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t r = 1; r <= n; ++r) {
        const auto& rec = records[r];
        const std::string where = at_line(source, rec.line);
        if (rec.fields.size() != n + 1) {
            throw ValidationError(where + "expected " + std::to_string(n + 1) + " fields, got " +
                                  std::to_string(rec.fields.size()));
        }
        const std::size_t i = require_feature(index, trim(rec.fields[0]), where);
        if (seen[i]) throw ValidationError(where + "duplicate row '" + trim(rec.fields[0]) + "'");
        seen[i] = true;
        for (std::size_t c = 0; c < n; ++c) {
            double v;
            const std::string cell = where + "row '" + table[i].name + "', column '" + table[col_target[c]].name + "': ";
            if (!parse_double(rec.fields[c + 1], v)) throw ValidationError(cell + "cannot parse '" + rec.fields[c + 1] + "'");
            if (!std::isfinite(v)) throw ValidationError(cell + "non-finite entry");
            if (v < 0.0) throw ValidationError(cell + "negative entry");
            entries[i * n + col_target[c]] = v;
        }
    }
    try {
        return load_interaction(table.size(), n, std::move(entries), warnings);
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

FeatureSubset parse_subset(std::string_view text, const std::string& source, bool json,
                           const std::string& default_label) {
    FeatureSubset subset;
    subset.label = default_label;
    if (json) {
        const ojson root = parse_json(text, source);
        const ojson* names = &root;
        if (root.is_object()) {
            if (root.contains("label")) {
                if (!root["label"].is_string()) throw ValidationError(source + ": 'label' must be a string");
                subset.label = root["label"].get<std::string>();
            }
            if (!root.contains("features")) throw ValidationError(source + ": missing 'features' array");
            names = &root["features"];
        }
        if (!names->is_array()) throw ValidationError(source + ": expected an array of feature names");
        for (const auto& v : *names) {
            if (!v.is_string()) throw ValidationError(source + ": feature names must be strings");
            subset.members.push_back(v.get<std::string>());
        }
    } else {
        const auto records = parse_csv(text, source);
        for (std::size_t r = 0; r < records.size(); ++r) {
            const std::string name = trim(records[r].fields[0]);
            if (r == 0 && name == "name") continue;
            if (name.empty()) throw ValidationError(at_line(source, records[r].line) + "empty feature name");
            subset.members.push_back(name);
        }
    }
    if (subset.members.empty()) throw ValidationError(source + ": subset lists no features");
    return subset;
}

FeatureSubset parse_subset_file(const std::string& path) {
    return parse_subset(read_file(path), path, has_json_extension(path),
                        std::filesystem::path(path).stem().string());
}

}  // namespace featgrid
