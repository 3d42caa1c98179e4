#include "featgrid/interaction.hpp"

#include <cmath>
#include <sstream>

#include "featgrid/error.hpp"

namespace featgrid {

namespace {

void check_dense_size(std::size_t n) {
    if (n > kMaxDenseFeatures) {
        throw ValidationError("interaction matrix for " + std::to_string(n) +
                              " features exceeds the dense limit of " +
                              std::to_string(kMaxDenseFeatures));
    }
}

std::string cell_name(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

InteractionMatrix InteractionMatrix::zeros(std::size_t n) {
    check_dense_size(n);
    return InteractionMatrix(n, std::vector<double>(n * n, 0.0));
}

InteractionMatrix InteractionMatrix::from_dense(std::size_t n, std::vector<double> entries) {
    check_dense_size(n);
    if (entries.size() != n * n) {
        throw ValidationError("interaction matrix has " + std::to_string(entries.size()) +
                              " entries, expected " + std::to_string(n * n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = entries[i * n + j];
            if (!std::isfinite(v)) throw ValidationError("non-finite interaction at " + cell_name(i, j));
            if (v < 0.0) throw ValidationError("negative interaction at " + cell_name(i, j));
            if (i == j && v != 0.0) throw ValidationError("non-zero diagonal at " + cell_name(i, j));
            if (v != entries[j * n + i]) throw ValidationError("asymmetric interaction at " + cell_name(i, j));
        }
    }
    return InteractionMatrix(n, std::move(entries));
}

InteractionMatrix pearson_interaction(const ValueMatrix& values, SignPolicy policy, Execution exec) {
    const std::size_t cols = values.columns.size();
    const std::size_t rows = values.rows;
    check_dense_size(cols);
    if (rows < 2) throw ValidationError("value matrix needs at least 2 rows, got " + std::to_string(rows));
    if (values.values.size() != rows * cols) {
        throw ValidationError("value matrix has " + std::to_string(values.values.size()) +
                              " cells, expected " + std::to_string(rows * cols));
    }

    std::vector<double> centered(rows * cols);
    std::vector<double> norms(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        bool constant = true;
        const double first = values.at(0, c);
        for (std::size_t r = 0; r < rows; ++r) {
            const double v = values.at(r, c);
            if (!std::isfinite(v)) {
                throw ValidationError("non-finite value at row " + std::to_string(r + 1) +
                                      ", column '" + values.columns[c] + "'");
            }
            sum += v;
            constant = constant && v == first;
        }
        double* out = centered.data() + c * rows;
        if (constant) continue;  // stays zero, norm 0
        const double mean = sum / static_cast<double>(rows);
        double ss = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            out[r] = values.at(r, c) - mean;
            ss += out[r] * out[r];
        }
        norms[c] = ss;
    }

    std::vector<double> g(cols * cols, 0.0);
    kernels::correlation_pairs(exec, centered, norms, cols, rows, g);
    for (double& v : g) {
        v = policy == SignPolicy::absolute ? std::abs(v) : std::max(v, 0.0);
    }
    return InteractionMatrix::from_dense(cols, std::move(g));
}

InteractionMatrix cooccurrence_interaction(const CooccurrenceCounts& counts) {
    const std::size_t n = counts.usage.size();
    check_dense_size(n);
    if (counts.pairs.size() != n * n) {
        throw ValidationError("pair counts have " + std::to_string(counts.pairs.size()) +
                              " entries, expected " + std::to_string(n * n));
    }
    std::vector<double> g(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const std::uint64_t cij = counts.pairs[i * n + j];
            if (cij != counts.pairs[j * n + i]) {
                throw ValidationError("pair count asymmetric at " + cell_name(i, j));
            }
            if (cij > std::min(counts.usage[i], counts.usage[j])) {
                throw ValidationError("pair count " + std::to_string(cij) + " at " + cell_name(i, j) +
                                      " exceeds a per-feature usage count");
            }
            if (counts.usage[i] > 0 && counts.usage[j] > 0) {
                g[i * n + j] = static_cast<double>(cij) /
                               std::sqrt(static_cast<double>(counts.usage[i]) *
                                         static_cast<double>(counts.usage[j]));
            }
        }
    }
    return InteractionMatrix::from_dense(n, std::move(g));
}

InteractionMatrix load_interaction(std::size_t expected_n, std::size_t n, std::vector<double> entries,
                                   std::vector<std::string>* warnings) {
    if (n != expected_n) {
        throw ValidationError("interaction matrix is " + std::to_string(n) + "x" + std::to_string(n) +
                              " but there are " + std::to_string(expected_n) + " features");
    }
    check_dense_size(n);
    if (entries.size() != n * n) {
        throw ValidationError("interaction matrix has " + std::to_string(entries.size()) +
                              " entries, expected " + std::to_string(n * n));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = entries[i * n + j];
            if (!std::isfinite(v)) throw ValidationError("non-finite interaction at " + cell_name(i, j));
            if (v < 0.0) throw ValidationError("negative interaction at " + cell_name(i, j));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        entries[i * n + i] = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double& a = entries[i * n + j];
            double& b = entries[j * n + i];
            worst = std::max(worst, std::abs(a - b));
            const double avg = 0.5 * (a + b);
            a = avg;
            b = avg;
        }
    }
    if (worst > 1e-9 && warnings) {
        std::ostringstream msg;
        msg << "interaction matrix asymmetric (max difference " << worst
            << "); replaced by (M + M^T) / 2";
        warnings->push_back(msg.str());
    }
    return InteractionMatrix::from_dense(n, std::move(entries));
}

}  // namespace featgrid
