#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "bfcs/bayes_factors.hpp"
#include "bfcs/errors.hpp"
#include "bfcs/models.hpp"
#include "bfcs/priors.hpp"

namespace bfcs {

// Posterior mass over the eleven models; entries sum to 1.
struct PosteriorVector {
    std::array<double, kCiModelCount> prob{};

    double operator[](CiModel m) const { return prob[index_of(m)]; }
    double& operator[](CiModel m) { return prob[index_of(m)]; }
};

// Prior with the logs taken once, for sweeps that normalize millions of
// Bayes-factor vectors against the same prior.
struct PreparedPrior {
    std::array<double, kCiModelCount> log_prob{};

    explicit PreparedPrior(const StructurePrior& prior) {
        for (int i = 0; i < kCiModelCount; ++i) {
            log_prob[i] = prior.prob[i] > 0.0
                              ? std::log(prior.prob[i])
                              : -std::numeric_limits<double>::infinity();
        }
    }
};

// posterior_j = BF_j p_j / sum_k BF_k p_k, evaluated entirely in log
// space with a max shift: the |R|^((n+nu)/2) factors underflow raw
// arithmetic for n beyond a few hundred. Models with zero prior keep
// exactly zero posterior.
inline PosteriorVector posterior(const BayesFactorVector& bf, const PreparedPrior& prior) {
    std::array<double, kCiModelCount> w{};
    double shift = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kCiModelCount; ++i) {
        w[i] = bf.log_bf[i] + prior.log_prob[i];
        if (w[i] > shift) shift = w[i];
    }
    if (!std::isfinite(shift)) {
        throw NumericError(
            "degenerate prior: no model with positive prior mass has finite evidence");
    }
    PosteriorVector post;
    double total = 0.0;
    for (int i = 0; i < kCiModelCount; ++i) {
        const double e = std::isfinite(w[i]) ? std::exp(w[i] - shift) : 0.0;
        post.prob[i] = e;
        total += e;
    }
    for (int i = 0; i < kCiModelCount; ++i) post.prob[i] /= total;
    return post;
}

inline PosteriorVector posterior(const BayesFactorVector& bf, const StructurePrior& prior) {
    return posterior(bf, PreparedPrior(prior));
}

// Posterior probability of the causal chain X1 -> X2 -> X3: the mass of
// the "X3 _|_ X1 | X2" class. Meaningful as a chain probability when the
// prior encodes that X1 precedes X2 and X3, which leaves the chain as the
// only structure in that class.
inline double causal_chain_probability(const PosteriorVector& post) {
    return post[CiModel::CondIndep31];
}

}  // namespace bfcs
