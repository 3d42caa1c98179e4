#include <random>

#include <doctest.h>

#include "featgrid/error.hpp"
#include "featgrid/model.hpp"

using namespace featgrid;

namespace {

std::vector<FeatureRecord> records(std::vector<std::pair<std::string, double>> items) {
    std::vector<FeatureRecord> out;
    for (auto& [name, imp] : items) out.push_back({name, "num", imp, {}});
    return out;
}

std::vector<std::string> names(const FeatureTable& t) {
    std::vector<std::string> out;
    for (const auto& f : t) out.push_back(f.name);
    return out;
}

}  // namespace

TEST_CASE("build_table sorts by descending importance") {
    const auto t = build_table(records({{"a", 1}, {"b", 5}, {"c", 3}}));
    CHECK(names(t) == std::vector<std::string>{"b", "c", "a"});
    CHECK(t.index_of("c") == 1);
    CHECK(t.index_of("zzz") == 3);
}

TEST_CASE("build_table keeps input order for ties") {
    CHECK(names(build_table(records({{"a", 2}, {"b", 2}}))) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("build_table rejects bad records") {
    CHECK_THROWS_AS(build_table(records({{"a", -1}})), ValidationError);
    CHECK_THROWS_AS(build_table(records({{"a", std::nan("")}})), ValidationError);
    CHECK_THROWS_AS(build_table(records({{"", 1}})), ValidationError);
    CHECK_THROWS_WITH_AS(build_table(records({{"a", 1}, {"b", 2}, {"a", 3}})),
                         doctest::Contains("'a'"), ValidationError);
}

TEST_CASE("normalize_importance examples") {
    CHECK(normalize_importance(build_table(records({{"a", 0}, {"b", 10}}))) == std::vector<int>{255, 0});
    CHECK(normalize_importance(build_table(records({{"a", 2}, {"b", 4}, {"c", 6}}))) ==
          std::vector<int>{255, 128, 0});
    CHECK(normalize_importance(build_table(records({{"a", 7}}))) == std::vector<int>{255});
    CHECK(normalize_importance(build_table(records({{"a", 3}, {"b", 3}}))) == std::vector<int>{255, 255});
    CHECK_THROWS_AS(normalize_importance(FeatureTable{}), ValidationError);
}

TEST_CASE("table and saturation properties on random inputs") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> imp(0, 20);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 15;
        std::vector<FeatureRecord> recs;
        for (int i = 0; i < n; ++i) recs.push_back({"f" + std::to_string(i), "t", double(imp(rng)), {}});
        const auto t = build_table(recs);

        // Permutation of the input.
        auto sorted_in = names(build_table(recs));
        std::vector<std::string> input;
        for (const auto& r : recs) input.push_back(r.name);
        std::sort(sorted_in.begin(), sorted_in.end());
        std::sort(input.begin(), input.end());
        CHECK(sorted_in == input);

        const auto s = normalize_importance(t);
        const double hi = t[0].importance, lo = t[t.size() - 1].importance;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i > 0) CHECK(s[i] <= s[i - 1]);
            if (hi > lo) {
                CHECK((s[i] == 255) == (t[i].importance == hi));
                CHECK((s[i] == 0) == (t[i].importance == lo));
            }
        }

        // Positive affine maps with exactly representable results.
        auto scaled = recs;
        for (auto& r : scaled) r.importance = 4.0 * r.importance + 3.0;
        CHECK(normalize_importance(build_table(scaled)) == s);
    }
}

TEST_CASE("weights validation") {
    CHECK_NOTHROW(Weights{}.validate());
    CHECK(Weights{}.w1 == 0.05);
    CHECK(Weights{}.w2 == 0.02);
    CHECK_THROWS_AS((Weights{-0.1, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((Weights{0.0, INFINITY}.validate()), ValidationError);
}
