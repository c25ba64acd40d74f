#pragma once

// Small linear integer arithmetic decision procedure used by the builtin
// oracle backend.

#include <map>
#include <string>
#include <vector>

#include "patcheck/types.hpp"

namespace patcheck::detail {

/// sum(coeffs[k] * k) + constant  REL  0
struct LinearRow {
  enum class Rel { Le, Eq, Ne };

  std::map<std::string, Integer> coeffs;
  Integer constant = 0;
  Rel rel = Rel::Le;
};

struct LinearResult {
  enum class Kind { Sat, Unsat, Unknown };

  Kind kind = Kind::Unknown;
  std::map<std::string, Integer> model;
};

struct LinearLimits {
  std::size_t max_vars = 8;
  std::size_t max_nodes = 200000;
  std::size_t max_candidates = 64;
  std::size_t max_rows = 4000;  // Fourier-Motzkin blow-up guard
};

/// Finds the integer solution closest to the origin (per variable, in
/// declaration order) or proves there is none. Unknown when a budget runs out.
LinearResult solve_linear(const std::vector<LinearRow>& rows, const LinearLimits& limits);

}  // namespace patcheck::detail
