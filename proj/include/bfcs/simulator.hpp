#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bfcs/bayes_factors.hpp"
#include "bfcs/correlation.hpp"
#include "bfcs/dataset.hpp"
#include "bfcs/errors.hpp"
#include "bfcs/posterior.hpp"
#include "bfcs/priors.hpp"
#include "bfcs/rng.hpp"
#include "bfcs/text.hpp"
#include "bfcs/threading.hpp"

namespace bfcs {

// ---------------------------------------------------------------------
// Three-variable generators for the consistency experiments.

// Edge sets: Chain {1->2, 2->3}, Independent {1->2, 1->3},
// Full {1->2, 2->3, 1->3}. All three leave the variables mutually
// marginally dependent; only Chain satisfies X3 _|_ X1 | X2.
enum class TripletModel { Chain, Independent, Full };

inline constexpr std::array<std::string_view, 3> kTripletModelNames = {
    "chain", "independent", "full"};

constexpr std::string_view triplet_model_name(TripletModel m) {
    return kTripletModelNames[static_cast<int>(m)];
}

inline std::optional<TripletModel> triplet_model_from_name(std::string_view name) {
    for (int i = 0; i < 3; ++i) {
        if (kTripletModelNames[i] == name) return static_cast<TripletModel>(i);
    }
    return std::nullopt;
}

enum class X1Kind { Gaussian, Bernoulli };

struct TripletGenerator {
    TripletModel model = TripletModel::Chain;
    X1Kind x1_kind = X1Kind::Gaussian;
    double b12 = 1.0;          // X1 -> X2 strength
    double b23 = 1.0;          // X2 -> X3 strength (Chain, Full)
    double b13 = 1.0;          // X1 -> X3 strength (Independent, Full)
    double bernoulli_p = 0.5;  // X1 success probability when Bernoulli
};

// Fresh parameter configuration: structural coefficients from standard
// normals; Bernoulli success probability uniform on [0.1, 0.9].
inline TripletGenerator random_triplet_generator(TripletModel model, X1Kind x1_kind,
                                                 Rng& rng) {
    TripletGenerator gen;
    gen.model = model;
    gen.x1_kind = x1_kind;
    gen.b12 = standard_normal(rng);
    if (model == TripletModel::Chain || model == TripletModel::Full) {
        gen.b23 = standard_normal(rng);
    }
    if (model == TripletModel::Independent || model == TripletModel::Full) {
        gen.b13 = standard_normal(rng);
    }
    if (x1_kind == X1Kind::Bernoulli) {
        gen.bernoulli_p = uniform(rng, 0.1, 0.9);
    }
    return gen;
}

struct TripletData {
    std::vector<double> x1, x2, x3;
};

// One sample per row: X1 = e1 (or Bernoulli(p)); X2 = b12 X1 + e2;
// X3 = sum of incoming edges + e3; e_i iid standard normal. Three RNG
// draws per row in fixed order, so the stream is seed-reproducible.
inline TripletData sample_triplet_data(const TripletGenerator& gen, std::size_t n,
                                       Rng& rng) {
    TripletData d;
    d.x1.resize(n);
    d.x2.resize(n);
    d.x3.resize(n);
    const bool edge23 =
        gen.model == TripletModel::Chain || gen.model == TripletModel::Full;
    const bool edge13 =
        gen.model == TripletModel::Independent || gen.model == TripletModel::Full;
    for (std::size_t s = 0; s < n; ++s) {
        const double x1 = gen.x1_kind == X1Kind::Gaussian
                              ? standard_normal(rng)
                              : bernoulli01(rng, gen.bernoulli_p);
        const double x2 = gen.b12 * x1 + standard_normal(rng);
        double x3 = standard_normal(rng);
        if (edge23) x3 += gen.b23 * x2;
        if (edge13) x3 += gen.b13 * x1;
        d.x1[s] = x1;
        d.x2[s] = x2;
        d.x3[s] = x3;
    }
    return d;
}

inline TripletData sample_triplet_data(const TripletGenerator& gen, std::size_t n,
                                       std::uint64_t seed) {
    Rng rng(seed);
    return sample_triplet_data(gen, n, rng);
}

// ---------------------------------------------------------------------
// Consistency experiment: how fast does the chain posterior converge
// under each generating model?

struct ConsistencyRow {
    TripletModel model{};
    std::size_t n = 0;
    int rep = 0;
    double chain_posterior = 0.0;  // meaningless when singular
    bool singular = false;
};

// For each (model, rep): draw one parameter configuration, then for each
// sample size draw data, correlate, score, and record the causal-chain
// posterior. The configuration is shared across sizes so convergence is
// comparable within a repetition. Each (model, rep) owns an RNG stream
// derived from the seed; parallel and serial runs emit identical tables.
inline std::vector<ConsistencyRow> run_consistency_experiment(
    const std::vector<TripletModel>& models, X1Kind x1_kind,
    const std::vector<std::size_t>& sizes, int reps, const StructurePrior& prior,
    const AnalysisConfig& cfg, std::uint64_t seed, int threads = 1) {
    validate(cfg);
    if (reps < 1) throw ConfigError("consistency experiment requires reps >= 1");
    if (models.empty() || sizes.empty()) {
        throw ConfigError("consistency experiment requires at least one model and size");
    }
    for (std::size_t n : sizes) {
        if (n < 3) throw ConfigError("consistency experiment requires sizes >= 3");
    }

    const PreparedPrior prepared(prior);
    const std::size_t n_tasks = models.size() * static_cast<std::size_t>(reps);
    std::vector<ConsistencyRow> rows(n_tasks * sizes.size());

    parallel_for_ranges(
        n_tasks, resolve_thread_count(threads), [&](std::size_t begin, std::size_t end) {
            for (std::size_t task = begin; task < end; ++task) {
                const std::size_t model_idx = task / static_cast<std::size_t>(reps);
                const int rep = static_cast<int>(task % static_cast<std::size_t>(reps));
                Rng rng = derive_rng(seed, task);
                const TripletGenerator gen =
                    random_triplet_generator(models[model_idx], x1_kind, rng);
                for (std::size_t si = 0; si < sizes.size(); ++si) {
                    const std::size_t n = sizes[si];
                    const TripletData data = sample_triplet_data(gen, n, rng);
                    ConsistencyRow row;
                    row.model = models[model_idx];
                    row.n = n;
                    row.rep = rep;
                    CorrelationTriplet t;
                    bool ok = true;
                    try {
                        t = correlation_triplet(data.x1, data.x2, data.x3,
                                                cfg.center_data);
                    } catch (const DataError&) {
                        ok = false;  // a constant column (e.g. all-zero Bernoulli draw)
                    }
                    if (ok && validate(t) == TripletStatus::Ok) {
                        const BayesFactorVector bf =
                            log_bayes_factors_with(t, bf_constants(t.n, cfg.nu));
                        row.chain_posterior =
                            causal_chain_probability(posterior(bf, prepared));
                    } else {
                        row.singular = true;
                    }
                    rows[task * sizes.size() + si] = row;
                }
            }
        });
    return rows;
}

// Long-format table for box plots: model, n, rep, chain_posterior, note.
// Singular draws keep their row with `NA` and a reason.
inline void write_consistency_table(const std::vector<ConsistencyRow>& rows,
                                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "model\tn\trep\tchain_posterior\tnote\n";
    for (const auto& row : rows) {
        out << triplet_model_name(row.model) << '\t' << row.n << '\t' << row.rep << '\t';
        if (row.singular) {
            out << "NA\tsingular\n";
        } else {
            out << format_sig(row.chain_posterior, 6) << "\t\n";
        }
    }
    if (!out) throw DataError("write failed: " + path);
}

// ---------------------------------------------------------------------
// Synthetic gene-regulatory network: t := B t + l + eps with B strictly
// lower triangular, eps ~ N(0, I), and trait T_i loading on its own
// marker L_i with unit coefficient.

struct GrnEdge {
    std::size_t source = 0;  // regulator trait index (column of B)
    std::size_t target = 0;  // regulated trait index (row of B), > source
    double coefficient = 0.0;
};

struct GrnSpec {
    std::size_t n_genes = 0;
    std::vector<GrnEdge> edges;     // ground-truth regulatory relationships
    std::vector<double> marker_p;   // per-marker Bernoulli success probability

    std::string trait_name(std::size_t i) const { return "T" + std::to_string(i + 1); }
    std::string marker_name(std::size_t i) const { return "L" + std::to_string(i + 1); }
};

// Edge positions drawn uniformly without replacement from the strictly
// lower triangular index set; coefficients standard normal; marker
// success probabilities uniform on [0.1, 0.5].
inline GrnSpec generate_grn(std::size_t n_genes, std::size_t n_edges, Rng& rng) {
    if (n_genes < 1) throw ConfigError("GRN requires at least one gene");
    const std::size_t max_edges = n_genes * (n_genes - 1) / 2;
    if (n_edges > max_edges) {
        throw ConfigError("too many edges: " + std::to_string(n_edges) + " > " +
                          std::to_string(max_edges));
    }

    std::vector<std::pair<std::size_t, std::size_t>> positions;
    positions.reserve(max_edges);
    for (std::size_t target = 1; target < n_genes; ++target) {
        for (std::size_t source = 0; source < target; ++source) {
            positions.emplace_back(source, target);
        }
    }
    // Partial Fisher-Yates: the first n_edges entries become the sample.
    for (std::size_t t = 0; t < n_edges; ++t) {
        const std::size_t pick =
            t + static_cast<std::size_t>(uniform_index(rng, positions.size() - t));
        std::swap(positions[t], positions[pick]);
    }
    positions.resize(n_edges);
    std::sort(positions.begin(), positions.end());

    GrnSpec spec;
    spec.n_genes = n_genes;
    spec.edges.reserve(n_edges);
    for (const auto& [source, target] : positions) {
        spec.edges.push_back({source, target, standard_normal(rng)});
    }
    spec.marker_p.resize(n_genes);
    for (auto& p : spec.marker_p) p = uniform(rng, 0.1, 0.5);
    return spec;
}

inline GrnSpec generate_grn(std::size_t n_genes, std::size_t n_edges,
                            std::uint64_t seed) {
    Rng rng(seed);
    return generate_grn(n_genes, n_edges, rng);
}

struct GrnSample {
    Dataset data;                            // markers first, then traits
    std::vector<std::vector<double>> noise;  // eps, column-major per trait
};

// Markers iid Bernoulli(p_i); traits solved by forward substitution in
// index order, which is exact because B is strictly lower triangular:
//   t_i = sum_{j < i} B_ij t_j + l_i + eps_i.
// Draw order is fixed (marker columns, then noise columns) so a seed
// pins the dataset.
inline GrnSample sample_grn_data_with_noise(const GrnSpec& spec, std::size_t n,
                                            Rng& rng) {
    if (n < 3) throw ConfigError("GRN sampling requires n >= 3");
    const std::size_t g = spec.n_genes;

    std::vector<std::vector<double>> markers(g), noise(g), traits(g);
    for (std::size_t i = 0; i < g; ++i) {
        markers[i].resize(n);
        for (std::size_t s = 0; s < n; ++s) {
            markers[i][s] = bernoulli01(rng, spec.marker_p[i]);
        }
    }
    for (std::size_t i = 0; i < g; ++i) {
        noise[i].resize(n);
        for (std::size_t s = 0; s < n; ++s) noise[i][s] = standard_normal(rng);
    }
    for (std::size_t i = 0; i < g; ++i) {
        traits[i] = noise[i];
        for (std::size_t s = 0; s < n; ++s) traits[i][s] += markers[i][s];
    }
    for (const auto& edge : spec.edges) {
        // edges are sorted by (source, target); every source < target, so
        // traits[source] is final before any edge adds it to a target.
        auto& target = traits[edge.target];
        const auto& source = traits[edge.source];
        for (std::size_t s = 0; s < n; ++s) target[s] += edge.coefficient * source[s];
    }

    GrnSample sample;
    sample.noise = std::move(noise);
    sample.data.n_samples = n;
    for (std::size_t i = 0; i < g; ++i) {
        sample.data.names.push_back(spec.marker_name(i));
        sample.data.roles.push_back(ColumnRole::Marker);
        sample.data.columns.push_back(std::move(markers[i]));
    }
    for (std::size_t i = 0; i < g; ++i) {
        sample.data.names.push_back(spec.trait_name(i));
        sample.data.roles.push_back(ColumnRole::Trait);
        sample.data.columns.push_back(std::move(traits[i]));
    }
    return sample;
}

inline Dataset sample_grn_data(const GrnSpec& spec, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_grn_data_with_noise(spec, n, rng).data;
}

// ---------------------------------------------------------------------
// Ground-truth serialization (feeds the eval module).

inline void write_grn_edges(const GrnSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "source\ttarget\tcoefficient\n";
    for (const auto& edge : spec.edges) {
        out << spec.trait_name(edge.source) << '\t' << spec.trait_name(edge.target)
            << '\t' << format_exact(edge.coefficient) << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

inline void write_marker_probabilities(const GrnSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "marker\tsuccess_probability\n";
    for (std::size_t i = 0; i < spec.n_genes; ++i) {
        out << spec.marker_name(i) << '\t' << format_exact(spec.marker_p[i]) << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

// Writes a dataset's marker or trait columns as a samples-by-variables
// TSV. Values use shortest round-trip formatting so a written dataset
// reloads to the same doubles.
inline void write_dataset_columns(const Dataset& d, ColumnRole role,
                                  const std::string& path) {
    const auto idx = role == ColumnRole::Marker ? d.marker_indices() : d.trait_indices();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (std::size_t c = 0; c < idx.size(); ++c) {
        out << (c ? "\t" : "") << d.names[idx[c]];
    }
    out << '\n';
    for (std::size_t s = 0; s < d.n_samples; ++s) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
            out << (c ? "\t" : "") << format_exact(d.columns[idx[c]][s]);
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace bfcs
