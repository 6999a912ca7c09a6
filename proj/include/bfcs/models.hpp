#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace bfcs {

// The eleven conditional-independence models over a variable triplet
// (X1, X2, X3). The numeric order is fixed: every 11-vector in this
// library (Bayes factors, priors, posteriors) and every file format is
// indexed this way.
enum class CiModel : int {
    Full = 0,         // no independence anywhere
    Indep12 = 1,      // X1 _|_ X2
    Indep23 = 2,      // X2 _|_ X3
    Indep31 = 3,      // X3 _|_ X1
    CondIndep12 = 4,  // X1 _|_ X2 | X3
    CondIndep23 = 5,  // X2 _|_ X3 | X1
    CondIndep31 = 6,  // X3 _|_ X1 | X2
    Isolated1 = 7,    // X1 _|_ (X2, X3)
    Isolated2 = 8,    // X2 _|_ (X3, X1)
    Isolated3 = 9,    // X3 _|_ (X1, X2)
    Empty = 10,       // X1 _|_ X2 _|_ X3
};

inline constexpr int kCiModelCount = 11;

constexpr int index_of(CiModel m) { return static_cast<int>(m); }
constexpr CiModel model_at(int index) { return static_cast<CiModel>(index); }

inline constexpr std::array<CiModel, kCiModelCount> kAllModels = {
    CiModel::Full,        CiModel::Indep12,   CiModel::Indep23,
    CiModel::Indep31,     CiModel::CondIndep12, CiModel::CondIndep23,
    CiModel::CondIndep31, CiModel::Isolated1, CiModel::Isolated2,
    CiModel::Isolated3,   CiModel::Empty,
};

// The five canonical covariance patterns; each model belongs to one.
enum class CovariancePattern { Full, Acausal, Causal, Independent, Empty };

constexpr CovariancePattern pattern_of(CiModel m) {
    const int i = index_of(m);
    if (i == 0) return CovariancePattern::Full;
    if (i <= 3) return CovariancePattern::Acausal;
    if (i <= 6) return CovariancePattern::Causal;
    if (i <= 9) return CovariancePattern::Independent;
    return CovariancePattern::Empty;
}

inline constexpr std::array<std::string_view, 5> kPatternNames = {
    "full", "acausal", "causal", "independent", "empty"};

constexpr std::string_view pattern_name(CovariancePattern p) {
    return kPatternNames[static_cast<int>(p)];
}

// Stable identifiers, used by every file format that names models.
inline constexpr std::array<std::string_view, kCiModelCount> kModelIds = {
    "M0", "M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8", "M9", "M10"};

constexpr std::string_view model_id(CiModel m) { return kModelIds[index_of(m)]; }

inline std::optional<CiModel> model_from_id(std::string_view id) {
    for (int i = 0; i < kCiModelCount; ++i) {
        if (kModelIds[i] == id) return model_at(i);
    }
    return std::nullopt;
}

// Human-readable independence statements.
inline constexpr std::array<std::string_view, kCiModelCount> kModelStatements = {
    "(saturated)",
    "X1 _|_ X2",
    "X2 _|_ X3",
    "X3 _|_ X1",
    "X1 _|_ X2 | X3",
    "X2 _|_ X3 | X1",
    "X3 _|_ X1 | X2",
    "X1 _|_ (X2,X3)",
    "X2 _|_ (X3,X1)",
    "X3 _|_ (X1,X2)",
    "X1 _|_ X2 _|_ X3",
};

constexpr std::string_view model_statement(CiModel m) {
    return kModelStatements[index_of(m)];
}

// ---------------------------------------------------------------------
// Relabeling action of S3 on the model set.
//
// A permutation p encodes a relabeling of the triplet: position i of the
// relabeled triplet holds the old variable p[i] (0-based).
using VariablePermutation = std::array<int, 3>;

inline constexpr std::array<VariablePermutation, 6> kAllVariablePermutations = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

constexpr VariablePermutation inverse(const VariablePermutation& p) {
    VariablePermutation q{};
    for (int i = 0; i < 3; ++i) q[p[i]] = i;
    return q;
}

// Model asserting marginal independence of the (0-based) pair {a, b}.
constexpr CiModel marginal_indep_model(int a, int b) {
    // pair {0,1} -> Indep12, {1,2} -> Indep23, {0,2} -> Indep31
    const int s = a + b;
    return s == 1 ? CiModel::Indep12 : (s == 3 ? CiModel::Indep23 : CiModel::Indep31);
}

// Model asserting independence of pair {a, b} given the third variable.
constexpr CiModel cond_indep_model(int a, int b) {
    const int s = a + b;
    return s == 1 ? CiModel::CondIndep12
                  : (s == 3 ? CiModel::CondIndep23 : CiModel::CondIndep31);
}

// Model isolating variable v from the other two.
constexpr CiModel isolated_model(int v) {
    return v == 0 ? CiModel::Isolated1 : (v == 1 ? CiModel::Isolated2 : CiModel::Isolated3);
}

// Image of a model when the triplet's variables are relabeled by p: the
// statement keeps its meaning, expressed in the new labels.
constexpr CiModel relabel(CiModel m, const VariablePermutation& p) {
    const VariablePermutation q = inverse(p);  // q[old] = new label
    switch (m) {
        case CiModel::Full:
        case CiModel::Empty:
            return m;
        case CiModel::Indep12: return marginal_indep_model(q[0], q[1]);
        case CiModel::Indep23: return marginal_indep_model(q[1], q[2]);
        case CiModel::Indep31: return marginal_indep_model(q[2], q[0]);
        case CiModel::CondIndep12: return cond_indep_model(q[0], q[1]);
        case CiModel::CondIndep23: return cond_indep_model(q[1], q[2]);
        case CiModel::CondIndep31: return cond_indep_model(q[2], q[0]);
        case CiModel::Isolated1: return isolated_model(q[0]);
        case CiModel::Isolated2: return isolated_model(q[1]);
        case CiModel::Isolated3: return isolated_model(q[2]);
    }
    return m;  // unreachable
}

}  // namespace bfcs
