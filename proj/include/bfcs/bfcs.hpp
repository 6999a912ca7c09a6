#pragma once

// Umbrella header: closed-form Bayesian scoring of the conditional
// independence models over variable triplets, structure priors, the
// regulation scanner, synthetic-data generators, and evaluation metrics.

#include "bfcs/bayes_factors.hpp"
#include "bfcs/correlation.hpp"
#include "bfcs/dataset.hpp"
#include "bfcs/errors.hpp"
#include "bfcs/eval.hpp"
#include "bfcs/models.hpp"
#include "bfcs/posterior.hpp"
#include "bfcs/priors.hpp"
#include "bfcs/rng.hpp"
#include "bfcs/scanner.hpp"
#include "bfcs/simulator.hpp"
#include "bfcs/threading.hpp"
#include "bfcs/version.hpp"
