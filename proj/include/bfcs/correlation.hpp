#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bfcs/bayes_factors.hpp"
#include "bfcs/dataset.hpp"
#include "bfcs/errors.hpp"
#include "bfcs/threading.hpp"

namespace bfcs {

// All pairwise correlations a triplet scan needs, computed once: the
// scan touches each (marker, trait, trait) triplet with three O(1)
// lookups instead of three O(n) data passes.
struct CorrelationStore {
    std::int64_t n = 0;  // sample count behind every correlation
    std::vector<std::string> trait_names;
    std::vector<std::string> marker_names;
    std::vector<double> trait_trait;   // T x T, row-major, symmetric
    std::vector<double> marker_trait;  // M x T, row-major

    std::size_t n_traits() const { return trait_names.size(); }
    std::size_t n_markers() const { return marker_names.size(); }

    double tt(std::size_t i, std::size_t j) const {
        return trait_trait[i * n_traits() + j];
    }
    double mt(std::size_t k, std::size_t i) const {
        return marker_trait[k * n_traits() + i];
    }
};

namespace detail {

// Column scaled to unit L2 norm, optionally after centering. With
// centering this turns pairwise dot products into Pearson correlations;
// without, into cosine similarities of the raw columns.
inline std::vector<double> standardize(const std::vector<double>& column, bool center,
                                       const std::string& name) {
    std::vector<double> z(column.size());
    double mean = 0.0;
    if (center) {
        for (double v : column) mean += v;
        mean /= static_cast<double>(column.size());
    }
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < column.size(); ++i) {
        z[i] = column[i] - mean;
        norm_sq += z[i] * z[i];
    }
    if (!(norm_sq > 0.0)) {
        throw DataError("column '" + name + "' has zero variance");
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (double& v : z) v *= inv_norm;
    return z;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

// Pearson (or uncentered, per cfg.center_data) correlations for all
// trait-trait and marker-trait pairs. Each entry is one fixed-order dot
// product written to its own slot, so the result is identical for every
// thread count.
inline CorrelationStore compute_correlations(const Dataset& d,
                                             const AnalysisConfig& cfg = {},
                                             int threads = 1) {
    validate(cfg);
    const int workers = resolve_thread_count(threads);
    const auto trait_idx = d.trait_indices();
    const auto marker_idx = d.marker_indices();
    const std::size_t t_count = trait_idx.size();
    const std::size_t m_count = marker_idx.size();

    CorrelationStore store;
    store.n = static_cast<std::int64_t>(d.n_samples);
    store.trait_names.reserve(t_count);
    for (auto i : trait_idx) store.trait_names.push_back(d.names[i]);
    store.marker_names.reserve(m_count);
    for (auto k : marker_idx) store.marker_names.push_back(d.names[k]);

    std::vector<std::vector<double>> traits(t_count), markers(m_count);
    parallel_for_ranges(t_count + m_count, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            if (c < t_count) {
                traits[c] = detail::standardize(d.columns[trait_idx[c]], cfg.center_data,
                                                d.names[trait_idx[c]]);
            } else {
                const std::size_t k = c - t_count;
                markers[k] = detail::standardize(d.columns[marker_idx[k]], cfg.center_data,
                                                 d.names[marker_idx[k]]);
            }
        }
    });

    store.trait_trait.assign(t_count * t_count, 1.0);
    const std::size_t upper_pairs = t_count * (t_count + 1) / 2;
    parallel_for_ranges(upper_pairs, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t flat = begin; flat < end; ++flat) {
            // flat = j(j+1)/2 + i enumerates the pairs (i, j) with i <= j
            std::size_t j = static_cast<std::size_t>(
                (std::sqrt(8.0 * static_cast<double>(flat) + 1.0) - 1.0) / 2.0);
            while (j * (j + 1) / 2 > flat) --j;
            while ((j + 1) * (j + 2) / 2 <= flat) ++j;
            const std::size_t i = flat - j * (j + 1) / 2;
            const double r = i == j ? 1.0 : detail::dot(traits[i], traits[j]);
            store.trait_trait[i * t_count + j] = r;
            store.trait_trait[j * t_count + i] = r;
        }
    });

    store.marker_trait.assign(m_count * t_count, 0.0);
    parallel_for_ranges(m_count * t_count, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t flat = begin; flat < end; ++flat) {
            const std::size_t k = flat / t_count;
            const std::size_t i = flat % t_count;
            store.marker_trait[flat] = detail::dot(markers[k], traits[i]);
        }
    });
    return store;
}

// Correlations among exactly three columns, as a scoring-ready triplet.
inline CorrelationTriplet correlation_triplet(const std::vector<double>& x1,
                                              const std::vector<double>& x2,
                                              const std::vector<double>& x3,
                                              bool center = true) {
    if (x1.size() != x2.size() || x1.size() != x3.size() || x1.empty()) {
        throw DataError("correlation_triplet: columns must be non-empty and equal length");
    }
    const auto z1 = detail::standardize(x1, center, "x1");
    const auto z2 = detail::standardize(x2, center, "x2");
    const auto z3 = detail::standardize(x3, center, "x3");
    CorrelationTriplet t;
    t.r12 = detail::dot(z1, z2);
    t.r13 = detail::dot(z1, z3);
    t.r23 = detail::dot(z2, z3);
    t.n = static_cast<std::int64_t>(x1.size());
    return t;
}

}  // namespace bfcs
