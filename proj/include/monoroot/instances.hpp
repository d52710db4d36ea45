#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"

#include "monoroot/domain.hpp"

namespace monoroot {

/// A real-valued test map on a box with a max-norm Lipschitz bound.
struct RealInstance {
  std::string family;
  std::size_t dim = 0;
  BoxDomain box = BoxDomain::unit(1);
  RealOracle::Evaluator f;
  double lipschitz = 1.0;
  /// Monotonicity conditions the construction guarantees.
  MonotoneProfile profile{1};
};

/// f_1 = a (x_1 - phi(x_2)), f_2 = b (x_2 - psi(x_1)); phi, psi piecewise linear into [0,1].
RealInstance random_monotone_2d(std::uint64_t seed);
/// Same shape with phi increasing, so f_1 also decreases in x_2.
RealInstance random_exdiag_2d(std::uint64_t seed);
/// Sum-switching but generally not positive-switching: f_2 = b (x_2 - psi(x_1)) - x_2 f_1.
RealInstance random_sum_2d(std::uint64_t seed);
/// f_i = a_i (x_i - clip(c_i + sum_{j != i} w_ij x_j)) with w_ij >= 0.
RealInstance random_exdiag_nd(std::size_t d, std::uint64_t seed);
/// f_i = x_i - c_i.
RealInstance decoupled(const RealVector& centers);

/// Sign map on an n x n index grid whose first-component zero set is a random monotone
/// staircase and whose second component crosses zero along it.
SignOracle::Evaluator staircase_2d(std::int64_t n, std::uint64_t seed);

/// A discretized instance owning both oracles. epsilon = L * delta.
struct DiscreteProblem {
  std::unique_ptr<RealOracle> real;
  std::unique_ptr<SignOracle> sign;
  GridSpec grid;
  double epsilon;
};

DiscreteProblem discretize_instance(const RealInstance& inst, int delta_exponent);

/// Builds an instance from {"family": ..., "seed": ..., "dim": ..., "centers": [...]}.
RealInstance instance_from_json(const nlohmann::json& j);

}  // namespace monoroot
