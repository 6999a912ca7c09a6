#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "bfcs/errors.hpp"
#include "bfcs/models.hpp"

namespace bfcs {

// Settings shared by the whole scoring pipeline. nu is the degrees of
// freedom of the (analytically eliminated) inverse Wishart prior on
// covariance matrices; nu = 4 gives uniform marginals on the off-diagonal
// correlations of a 3x3 correlation matrix. Other values of nu remain
// valid scores and are exposed for sensitivity analysis.
struct AnalysisConfig {
    int nu = 4;               // degrees of freedom, >= 3
    bool center_data = true;  // subtract column means before correlating
};

inline void validate(const AnalysisConfig& cfg) {
    if (cfg.nu < 3) {
        throw ConfigError("nu must be >= 3, got " + std::to_string(cfg.nu));
    }
}

// The three pairwise sample correlations plus the sample count: the
// complete input of every Bayes factor in this library.
struct CorrelationTriplet {
    double r12 = 0.0;
    double r13 = 0.0;
    double r23 = 0.0;
    std::int64_t n = 0;

    // det of [[1, r12, r13], [r12, 1, r23], [r13, r23, 1]]; lies in [0, 1]
    // for any valid correlation matrix. The determinant is a symmetric
    // function of the three correlations, so it is evaluated on their
    // sorted values: every relabeling of the triplet then produces the
    // same floating-point bits, which the permutation-equivariance
    // guarantee depends on.
    double determinant() const {
        double x = r12, y = r13, z = r23;
        if (x > y) std::swap(x, y);
        if (y > z) std::swap(y, z);
        if (x > y) std::swap(x, y);
        return 1.0 - x * x - y * y - z * z + 2.0 * x * y * z;
    }
};

// Triplets with det at or below this floor are rejected as singular:
// collinear data drives the unconstrained model's evidence to a
// meaningless -inf.
inline constexpr double kDetFloor = 1e-12;

// Correlations within this slack above |1| are rounding artifacts and are
// clamped to +-1 (and then rejected as singular); anything further out is
// a hard input error.
inline constexpr double kCorrelationSlack = 1e-12;

enum class TripletStatus { Ok, OutOfRange, Singular };

// Clamps near-unit correlations in place and classifies the triplet.
// Ok means regular: all |r| < 1 and det above the floor.
inline TripletStatus validate(CorrelationTriplet& t) noexcept {
    for (double* r : {&t.r12, &t.r13, &t.r23}) {
        if (!(std::abs(*r) <= 1.0 + kCorrelationSlack)) return TripletStatus::OutOfRange;
        if (*r > 1.0) *r = 1.0;
        if (*r < -1.0) *r = -1.0;
    }
    for (double r : {t.r12, t.r13, t.r23}) {
        if (std::abs(r) >= 1.0) return TripletStatus::Singular;
    }
    if (!(t.determinant() > kDetFloor)) return TripletStatus::Singular;
    return TripletStatus::Ok;
}

// Triplet relabeled by p: entry (i, j) of the new correlation matrix is
// entry (p[i], p[j]) of the old one.
inline CorrelationTriplet relabel(const CorrelationTriplet& t, const VariablePermutation& p) {
    const auto r = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        if (a == 0) return b == 1 ? t.r12 : t.r13;
        return t.r23;
    };
    return CorrelationTriplet{r(p[0], p[1]), r(p[0], p[2]), r(p[1], p[2]), t.n};
}

// ln f(n, nu) with f = (n + nu - 2) / (nu - 2): the rational factor shared
// by the independent-pattern and empty-pattern Bayes factors.
inline double log_f(std::int64_t n, int nu) {
    if (nu < 3) throw ConfigError("log_f requires nu >= 3, got " + std::to_string(nu));
    if (n < 0) throw ConfigError("log_f requires n >= 0");
    return std::log(static_cast<double>(n + nu - 2)) - std::log(static_cast<double>(nu - 2));
}

// ln g(n, nu) with
//   g = Gamma((n+nu)/2) Gamma((nu-1)/2) / (Gamma((n+nu-1)/2) Gamma(nu/2)),
// evaluated through lgamma so n in the millions stays representable.
inline double log_g(std::int64_t n, int nu) {
    if (nu < 2) throw ConfigError("log_g requires nu >= 2, got " + std::to_string(nu));
    if (n < 0) throw ConfigError("log_g requires n >= 0");
    const double a = 0.5 * static_cast<double>(n + nu);
    const double b = 0.5 * static_cast<double>(nu);
    return std::lgamma(a) - std::lgamma(a - 0.5) + std::lgamma(b - 0.5) - std::lgamma(b);
}

// Eleven log-scale Bayes factors, each model against the unconstrained
// reference, so log_bf[Full] == 0 always.
struct BayesFactorVector {
    std::array<double, kCiModelCount> log_bf{};

    double operator[](CiModel m) const { return log_bf[index_of(m)]; }
    double& operator[](CiModel m) { return log_bf[index_of(m)]; }
};

// Per-scan constants of the closed forms: they depend only on (n, nu),
// never on the correlations, so a sweep over many triplets pays the gamma
// functions once.
struct BfConstants {
    double log_f = 0.0;
    double log_g = 0.0;
    double half_n_nu = 0.0;    // (n + nu) / 2
    double half_n_nu_m1 = 0.0; // (n + nu - 1) / 2
};

inline BfConstants bf_constants(std::int64_t n, int nu) {
    BfConstants c;
    c.log_f = log_f(n, nu);
    c.log_g = log_g(n, nu);
    c.half_n_nu = 0.5 * static_cast<double>(n + nu);
    c.half_n_nu_m1 = 0.5 * static_cast<double>(n + nu - 1);
    return c;
}

// Core evaluation; assumes t was already validated as regular.
//
// With d = ln det(R) and l_ab = ln(1 - r_ab^2):
//   empty        : ln f + ln g + (n+nu)/2 * d
//   isolated v   : ln f + (n+nu)/2 * (d - l_ab), {a,b} the non-isolated pair
//   cond. indep  : ln g + (n+nu)/2 * (d - l_ac - l_bc), c the conditioner
//   marg. indep  : ln f - ln g + (n+nu-1)/2 * l_ab
// Each l_ab is computed as log1p(-r) + log1p(r), which stays accurate as
// |r| approaches 1. Paired l terms are grouped into a two-term sum:
// addition commutes exactly in floating point, so together with the
// canonical determinant this makes relabeled triplets score bit-for-bit
// identically on the relabeled models.
inline BayesFactorVector log_bayes_factors_with(const CorrelationTriplet& t,
                                                const BfConstants& c) noexcept {
    const double d = std::log(t.determinant());
    const double l12 = std::log1p(-t.r12) + std::log1p(t.r12);
    const double l13 = std::log1p(-t.r13) + std::log1p(t.r13);
    const double l23 = std::log1p(-t.r23) + std::log1p(t.r23);

    BayesFactorVector bf;
    bf[CiModel::Full] = 0.0;
    bf[CiModel::Empty] = c.log_f + c.log_g + c.half_n_nu * d;
    bf[CiModel::Isolated1] = c.log_f + c.half_n_nu * (d - l23);
    bf[CiModel::Isolated2] = c.log_f + c.half_n_nu * (d - l13);
    bf[CiModel::Isolated3] = c.log_f + c.half_n_nu * (d - l12);
    bf[CiModel::CondIndep12] = c.log_g + c.half_n_nu * (d - (l13 + l23));
    bf[CiModel::CondIndep23] = c.log_g + c.half_n_nu * (d - (l12 + l13));
    bf[CiModel::CondIndep31] = c.log_g + c.half_n_nu * (d - (l12 + l23));
    bf[CiModel::Indep12] = c.log_f - c.log_g + c.half_n_nu_m1 * l12;
    bf[CiModel::Indep23] = c.log_f - c.log_g + c.half_n_nu_m1 * l23;
    bf[CiModel::Indep31] = c.log_f - c.log_g + c.half_n_nu_m1 * l13;
    return bf;
}

inline BayesFactorVector log_bayes_factors(CorrelationTriplet t,
                                           const AnalysisConfig& cfg = {}) {
    validate(cfg);
    if (t.n < 1) throw NumericError("sample count must be >= 1");
    switch (validate(t)) {
        case TripletStatus::OutOfRange:
            throw NumericError("correlation out of range: |r| > 1");
        case TripletStatus::Singular:
            throw NumericError("singular correlation matrix: det(R) <= " +
                               std::to_string(kDetFloor));
        case TripletStatus::Ok:
            break;
    }
    return log_bayes_factors_with(t, bf_constants(t.n, cfg.nu));
}

}  // namespace bfcs
