#pragma once

#include <cstdint>

#include "haarlab/functions.hpp"
#include "haarlab/random.hpp"

namespace haarlab {

// x rounded to `bits` significant binary digits; such values keep exact
// rational arithmetic cheap.
double round_mantissa(double x, int bits = 12);

// Random tree with at most `max_atoms` atoms and at least one splitting atom.
Filtration small_tree(std::uint64_t seed, std::size_t max_atoms, int max_depth = 4, int max_branching = 3);

// Same tree with every leaf mass rounded to a short mantissa.
Filtration rounded_tree(const Filtration& f, int bits = 12);

bool has_split(const Filtration& f);

// Log-uniform leaf weights on [lo, hi].
Weight<double> random_weight(const Filtration& f, Rng& rng, double lo = 1e-3, double hi = 1e3);

// w = exp(t g) for a random profile g, with t chosen by bisection so that
// [w]_{A2} is close to the target. Returns the weight actually reached.
Weight<double> weight_with_a2(const Filtration& f, Rng& rng, double target);

// Uniform values in [-1, 1], optionally rounded.
LeafFunction<double> random_leaf_function(const Filtration& f, Rng& rng, int bits = 0);
TreeFunction<double> random_tree_function(const Filtration& f, Rng& rng, int bits = 0);

// Coefficients uniform in [-1, 1] on splitting atoms, 0 elsewhere.
MultiplierSymbol<double> random_symbol(const Filtration& f, Rng& rng, int bits = 0);

// Log-uniform densities on [lo, hi]; each leaf is zero with probability zero_probability,
// but at least one leaf keeps a positive density.
LeafFunction<double> random_density(const Filtration& f, Rng& rng, double zero_probability = 0.0, double lo = 1e-2,
                                    double hi = 1e2, int bits = 0);

}  // namespace haarlab
