#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "featgrid/kernels.hpp"

namespace featgrid {

// Largest feature count stored densely (5000^2 doubles = 200 MB).
inline constexpr std::size_t kMaxDenseFeatures = 5000;

// Symmetric, non-negative, zero-diagonal pairwise interaction G. Every
// constructor path enforces those invariants.
class InteractionMatrix {
public:
    InteractionMatrix() = default;

    // G = 0 for n features.
    static InteractionMatrix zeros(std::size_t n);

    // Takes a row-major n*n matrix that already satisfies the invariants.
    // Throws ValidationError naming the first offending entry otherwise.
    static InteractionMatrix from_dense(std::size_t n, std::vector<double> entries);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(entries_).subspan(i * n_, n_);
    }
    std::span<const double> entries() const { return entries_; }

    bool operator==(const InteractionMatrix&) const = default;

private:
    InteractionMatrix(std::size_t n, std::vector<double> entries)
        : n_(n), entries_(std::move(entries)) {}

    std::size_t n_ = 0;
    std::vector<double> entries_;
};

// Per-example feature values, columns in selection (rank) order.
struct ValueMatrix {
    std::vector<std::string> columns;
    std::size_t rows = 0;
    std::vector<double> values;  // row-major, rows * columns.size()

    double at(std::size_t row, std::size_t col) const { return values[row * columns.size() + col]; }
};

// How negative correlations become non-negative interactions.
enum class SignPolicy {
    absolute,  // G = |r|
    clip,      // G = max(r, 0)
};

// G_ij from Pearson correlation of columns i and j; zero-variance columns
// interact with nothing.
InteractionMatrix pearson_interaction(const ValueMatrix& values,
                                      SignPolicy policy = SignPolicy::absolute,
                                      Execution exec = Execution::parallel);

struct CooccurrenceCounts {
    std::vector<std::uint64_t> usage;  // tasks using feature i
    std::vector<std::uint64_t> pairs;  // row-major n*n, tasks using both; diagonal ignored
};

// Cosine-normalized co-occurrence: c_ij / sqrt(c_i c_j), 0 when either count is 0.
InteractionMatrix cooccurrence_interaction(const CooccurrenceCounts& counts);

// Validates a user-supplied n*n matrix: non-negative and finite entries,
// symmetry enforced by averaging with the transpose (a warning is appended
// when the largest asymmetry exceeds 1e-9), diagonal zeroed.
InteractionMatrix load_interaction(std::size_t expected_n, std::size_t n,
                                   std::vector<double> entries,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace featgrid
