#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>

#include "bfcs/errors.hpp"
#include "bfcs/models.hpp"
#include "bfcs/text.hpp"

namespace bfcs {

enum class PriorFamily { Dag, DagBk, Dmag, DmagBk, UniformModels, Custom };

inline constexpr std::array<std::string_view, 6> kPriorFamilyNames = {
    "dag", "dag-bk", "dmag", "dmag-bk", "uniform-models", "custom"};

constexpr std::string_view prior_family_name(PriorFamily f) {
    return kPriorFamilyNames[static_cast<int>(f)];
}

// Prior mass over the eleven conditional-independence models.
struct StructurePrior {
    std::array<double, kCiModelCount> prob{};
    PriorFamily label = PriorFamily::Custom;

    double operator[](CiModel m) const { return prob[index_of(m)]; }
};

// The four graph families whose structure counts are tabulated below.
enum class GraphFamily { Dag, DagBk, Dmag, DmagBk };

// Number of causal graph structures consistent with each model, per
// family. "Bk" columns count under the background knowledge that X1
// precedes X2 and X3 (no arrowhead into X1); the zero rows for Indep23
// are real: no BK-compatible graph leaves exactly X2 _|_ X3.
// These are fixed combinatorial constants, not derived at runtime.
inline constexpr std::array<int, kCiModelCount> kDagCounts = {6, 1, 1, 1, 3, 3,
                                                              3, 2, 2, 2, 1};
inline constexpr std::array<int, kCiModelCount> kDagBkCounts = {2, 1, 0, 1, 1, 1,
                                                                1, 2, 1, 1, 1};
inline constexpr std::array<int, kCiModelCount> kDmagCounts = {19, 3, 3, 3, 5, 5,
                                                               5,  3, 3, 3, 1};
inline constexpr std::array<int, kCiModelCount> kDmagBkCounts = {3, 2, 0, 2, 1, 1,
                                                                 1, 3, 1, 1, 1};

constexpr const std::array<int, kCiModelCount>& graph_counts(GraphFamily f) {
    switch (f) {
        case GraphFamily::Dag: return kDagCounts;
        case GraphFamily::DagBk: return kDagBkCounts;
        case GraphFamily::Dmag: return kDmagCounts;
        case GraphFamily::DmagBk: return kDmagBkCounts;
    }
    return kDagCounts;  // unreachable
}

constexpr PriorFamily prior_family_of(GraphFamily f) {
    switch (f) {
        case GraphFamily::Dag: return PriorFamily::Dag;
        case GraphFamily::DagBk: return PriorFamily::DagBk;
        case GraphFamily::Dmag: return PriorFamily::Dmag;
        case GraphFamily::DmagBk: return PriorFamily::DmagBk;
    }
    return PriorFamily::Dag;  // unreachable
}

// Uniform prior over the graphs of a family, folded to model classes:
// p(M) = count(M) / sum of counts.
inline StructurePrior prior_from_counts(GraphFamily family) {
    const auto& counts = graph_counts(family);
    int total = 0;
    for (int c : counts) total += c;
    StructurePrior prior;
    prior.label = prior_family_of(family);
    for (int i = 0; i < kCiModelCount; ++i) {
        prior.prob[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return prior;
}

// Uniform over the eleven model classes themselves (not over graphs).
inline StructurePrior uniform_model_prior() {
    StructurePrior prior;
    prior.label = PriorFamily::UniformModels;
    prior.prob.fill(1.0 / kCiModelCount);
    return prior;
}

// Normalizes arbitrary non-negative weights into a prior.
inline StructurePrior prior_from_weights(const std::array<double, kCiModelCount>& weights,
                                         PriorFamily label = PriorFamily::Custom) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw DataError("prior weights must be non-negative and finite");
        total += w;
    }
    if (!(total > 0.0)) throw DataError("prior weights must not all be zero");
    StructurePrior prior;
    prior.label = label;
    for (int i = 0; i < kCiModelCount; ++i) prior.prob[i] = weights[i] / total;
    return prior;
}

// Custom prior file: 11 lines of `model_id<TAB>weight` covering M0..M10
// exactly once each, in any order. Blank lines and lines starting with
// '#' are ignored.
inline StructurePrior prior_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open prior file: " + path);

    std::array<double, kCiModelCount> weights{};
    std::array<bool, kCiModelCount> seen{};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_fields(text, '\t');
        if (fields.size() != 2) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected `model_id<TAB>weight`");
        }
        const auto model = model_from_id(fields[0]);
        if (!model) {
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown model id '" +
                            std::string(fields[0]) + "'");
        }
        const int idx = index_of(*model);
        if (seen[idx]) {
            throw DataError(path + ":" + std::to_string(line_no) + ": duplicate entry for " +
                            std::string(fields[0]));
        }
        const double w =
            parse_double(fields[1], path + ":" + std::to_string(line_no));
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": weight must be non-negative and finite");
        }
        seen[idx] = true;
        weights[idx] = w;
    }
    for (int i = 0; i < kCiModelCount; ++i) {
        if (!seen[i]) {
            throw DataError(path + ": missing entry for " + std::string(kModelIds[i]));
        }
    }
    return prior_from_weights(weights, PriorFamily::Custom);
}

// Named prior lookup used by the CLI ("dag", "dag-bk", "dmag", "dmag-bk",
// "uniform-models").
inline std::optional<StructurePrior> prior_from_name(std::string_view name) {
    if (name == "dag") return prior_from_counts(GraphFamily::Dag);
    if (name == "dag-bk") return prior_from_counts(GraphFamily::DagBk);
    if (name == "dmag") return prior_from_counts(GraphFamily::Dmag);
    if (name == "dmag-bk") return prior_from_counts(GraphFamily::DmagBk);
    if (name == "uniform-models") return uniform_model_prior();
    return std::nullopt;
}

}  // namespace bfcs
