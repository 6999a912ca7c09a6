#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "bfcs/bayes_factors.hpp"
#include "bfcs/correlation.hpp"
#include "bfcs/errors.hpp"
#include "bfcs/posterior.hpp"
#include "bfcs/priors.hpp"
#include "bfcs/text.hpp"
#include "bfcs/threading.hpp"

namespace bfcs {

// Which markers are considered for each regulator trait. The default is
// every marker; TopK restricts to the K markers most correlated with the
// regulator; MarkerMap pins an explicit candidate list per trait (the
// preselection style of linkage-based pipelines, off by default).
struct ScanFilter {
    enum class Kind { AllMarkers, TopK, MarkerMap };

    Kind kind = Kind::AllMarkers;
    int top_k = 0;
    // MarkerMap: candidate marker indices per trait index.
    std::vector<std::vector<std::size_t>> markers_per_trait;

    static ScanFilter all() { return {}; }

    static ScanFilter top_k_markers(int k) {
        if (k < 1) throw ConfigError("top-k filter requires k >= 1");
        ScanFilter f;
        f.kind = Kind::TopK;
        f.top_k = k;
        return f;
    }

    static ScanFilter marker_map(std::vector<std::vector<std::size_t>> map) {
        ScanFilter f;
        f.kind = Kind::MarkerMap;
        f.markers_per_trait = std::move(map);
        return f;
    }
};

// Best causal-chain posterior per ordered trait pair, with the marker
// achieving it. prob(i, j) is max_k p(L_k -> T_i -> T_j | D): a lower
// bound on the probability that some marker makes the chain real.
struct RegulationMatrix {
    std::vector<std::string> trait_names;
    std::vector<std::string> marker_names;
    std::vector<double> prob;              // T x T row-major, diagonal unused
    std::vector<std::int64_t> best_marker; // marker index, -1 when no valid triplet

    std::size_t n_traits() const { return trait_names.size(); }
    double prob_at(std::size_t i, std::size_t j) const { return prob[i * n_traits() + j]; }
    std::int64_t best_marker_at(std::size_t i, std::size_t j) const {
        return best_marker[i * n_traits() + j];
    }
};

struct ScanSummary {
    std::uint64_t pairs = 0;
    std::uint64_t triplets_scored = 0;
    std::uint64_t triplets_skipped_singular = 0;
    std::uint64_t pairs_without_support = 0;  // pairs where every candidate was singular
    double wall_seconds = 0.0;
};

struct ScanResult {
    RegulationMatrix matrix;
    ScanSummary summary;
};

namespace detail {

// Candidate marker lists per regulator trait, ascending by index so the
// smallest-k tie-break falls out of a strict max comparison.
inline std::vector<std::vector<std::size_t>> candidate_markers(
    const CorrelationStore& store, const ScanFilter& filter) {
    const std::size_t t_count = store.n_traits();
    const std::size_t m_count = store.n_markers();
    std::vector<std::vector<std::size_t>> out(t_count);

    switch (filter.kind) {
        case ScanFilter::Kind::AllMarkers: {
            std::vector<std::size_t> all(m_count);
            std::iota(all.begin(), all.end(), std::size_t{0});
            for (auto& v : out) v = all;
            break;
        }
        case ScanFilter::Kind::TopK: {
            const std::size_t k = std::min<std::size_t>(filter.top_k, m_count);
            std::vector<std::size_t> order(m_count);
            for (std::size_t i = 0; i < t_count; ++i) {
                std::iota(order.begin(), order.end(), std::size_t{0});
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) {
                                     return std::abs(store.mt(a, i)) >
                                            std::abs(store.mt(b, i));
                                 });
                out[i].assign(order.begin(), order.begin() + k);
                std::sort(out[i].begin(), out[i].end());
            }
            break;
        }
        case ScanFilter::Kind::MarkerMap: {
            if (filter.markers_per_trait.size() != t_count) {
                throw DataError("marker map must list candidates for every trait");
            }
            for (std::size_t i = 0; i < t_count; ++i) {
                auto v = filter.markers_per_trait[i];
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
                if (!v.empty() && v.back() >= m_count) {
                    throw DataError("marker map references marker index " +
                                    std::to_string(v.back()) + " out of range");
                }
                out[i] = std::move(v);
            }
            break;
        }
    }
    return out;
}

}  // namespace detail

// Sweeps every ordered trait pair (T_i, T_j) and every candidate marker
// L_k, scores the triplet (X1 = L_k, X2 = T_i, X3 = T_j), and keeps the
// best causal-chain posterior per pair. Pairs partition across threads
// and each pair reduces over its markers in ascending order, so the
// output is bit-for-bit identical for any thread count. Singular triplets
// are skipped and counted.
inline ScanResult scan(const CorrelationStore& store, const StructurePrior& prior,
                       const AnalysisConfig& cfg = {}, const ScanFilter& filter = {},
                       int threads = 1) {
    validate(cfg);
    if (store.n < 1) throw DataError("scan requires a positive sample count");
    const std::size_t t_count = store.n_traits();
    if (t_count < 2) throw DataError("scan requires at least two traits");
    if (store.n_markers() < 1) throw DataError("scan requires at least one marker");

    const auto start = std::chrono::steady_clock::now();
    const BfConstants constants = bf_constants(store.n, cfg.nu);
    const PreparedPrior prepared(prior);
    const auto candidates = detail::candidate_markers(store, filter);

    ScanResult result;
    result.matrix.trait_names = store.trait_names;
    result.matrix.marker_names = store.marker_names;
    result.matrix.prob.assign(t_count * t_count, 0.0);
    result.matrix.best_marker.assign(t_count * t_count, -1);

    const std::size_t n_pairs = t_count * (t_count - 1);
    const int workers = resolve_thread_count(threads);
    std::vector<std::uint64_t> scored(workers, 0), skipped(workers, 0), empty(workers, 0);
    std::atomic<int> next_worker{0};

    parallel_for_ranges(n_pairs, workers, [&](std::size_t begin, std::size_t end) {
        const int w = next_worker.fetch_add(1);
        for (std::size_t flat = begin; flat < end; ++flat) {
            const std::size_t i = flat / (t_count - 1);
            const std::size_t rem = flat % (t_count - 1);
            const std::size_t j = rem < i ? rem : rem + 1;

            const double r23 = store.tt(i, j);
            double best = -1.0;
            std::int64_t best_k = -1;
            for (const std::size_t k : candidates[i]) {
                CorrelationTriplet t{store.mt(k, i), store.mt(k, j), r23, store.n};
                if (validate(t) != TripletStatus::Ok) {
                    ++skipped[w];
                    continue;
                }
                const BayesFactorVector bf = log_bayes_factors_with(t, constants);
                const double p = causal_chain_probability(posterior(bf, prepared));
                ++scored[w];
                if (p > best) {
                    best = p;
                    best_k = static_cast<std::int64_t>(k);
                }
            }
            if (best_k < 0) {
                ++empty[w];
                best = 0.0;
            }
            result.matrix.prob[i * t_count + j] = best;
            result.matrix.best_marker[i * t_count + j] = best_k;
        }
    });

    result.summary.pairs = n_pairs;
    for (int w = 0; w < workers; ++w) {
        result.summary.triplets_scored += scored[w];
        result.summary.triplets_skipped_singular += skipped[w];
        result.summary.pairs_without_support += empty[w];
    }
    if (result.summary.triplets_scored == 0) {
        throw NumericError("empty scan: no candidate triplet produced a valid score");
    }
    result.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// Long-format regulation table, best pairs first. Probabilities carry six
// significant digits; ties keep (regulator, target) order.
inline void write_regulation_matrix(const RegulationMatrix& m, const std::string& path) {
    const std::size_t t_count = m.n_traits();
    std::vector<std::size_t> order;
    order.reserve(t_count * (t_count - 1));
    for (std::size_t i = 0; i < t_count; ++i) {
        for (std::size_t j = 0; j < t_count; ++j) {
            if (i != j) order.push_back(i * t_count + j);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return m.prob[a] > m.prob[b];
    });

    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "regulator\ttarget\tprobability\tbest_marker\n";
    for (const std::size_t flat : order) {
        const std::size_t i = flat / t_count;
        const std::size_t j = flat % t_count;
        const std::int64_t k = m.best_marker[flat];
        out << m.trait_names[i] << '\t' << m.trait_names[j] << '\t'
            << format_sig(m.prob[flat], 6) << '\t'
            << (k >= 0 ? m.marker_names[static_cast<std::size_t>(k)] : "NA") << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace bfcs
