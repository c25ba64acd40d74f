#include "linear_solver.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace patcheck::detail {

namespace {

using Coeffs = std::map<std::string, Integer>;

struct BudgetExceeded {};

Integer abs_value(const Integer& v) { return v < 0 ? Integer(-v) : v; }

Integer gcd_of(const Coeffs& c) {
  Integer g = 0;
  for (const auto& [_, a] : c) g = boost::multiprecision::gcd(g, abs_value(a));
  return g;
}

Integer floor_div(const Integer& a, const Integer& b) {  // b > 0
  Integer q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

Integer ceil_div(const Integer& a, const Integer& b) {  // b > 0
  Integer q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

/// sum(c) + k <= 0
struct Le {
  Coeffs c;
  Integer k;
};

/// Divide by the coefficient gcd, rounding the constant so integer solutions
/// are preserved. Returns false for a constant row that is violated.
bool tighten(Le& row) {
  if (row.c.empty()) return row.k <= 0;
  Integer g = gcd_of(row.c);
  if (g > 1) {
    for (auto& [_, a] : row.c) a /= g;
    row.k = ceil_div(row.k, g);
  }
  return true;
}

void substitute(Coeffs& c, Integer& k, const std::string& x, const Integer& v) {
  auto it = c.find(x);
  if (it == c.end()) return;
  k += it->second * v;
  c.erase(it);
}

struct Bounds {
  bool feasible = true;
  std::optional<Integer> lo, hi;
};

class Search {
 public:
  Search(std::vector<std::string> vars, const LinearLimits& limits) : vars_(std::move(vars)), limits_(limits) {}

  /// Eliminates every variable except `keep` and returns the bounds on it.
  Bounds project(std::vector<Le> rows, const std::string* keep) {
    Bounds b;
    std::set<std::string> others;
    for (const auto& r : rows)
      for (const auto& [x, _] : r.c)
        if (!keep || x != *keep) others.insert(x);
    for (const auto& x : others) {
      std::vector<Le> pos, neg, next;
      for (auto& r : rows) {
        auto it = r.c.find(x);
        if (it == r.c.end()) {
          next.push_back(std::move(r));
        } else if (it->second > 0) {
          pos.push_back(std::move(r));
        } else {
          neg.push_back(std::move(r));
        }
      }
      if (next.size() + pos.size() * neg.size() > limits_.max_rows) throw BudgetExceeded{};
      for (const auto& p : pos) {
        for (const auto& n : neg) {
          Integer ap = p.c.at(x), an = -n.c.at(x);
          Le r;
          r.k = p.k * an + n.k * ap;
          for (const auto& [y, a] : p.c) r.c[y] += a * an;
          for (const auto& [y, a] : n.c) r.c[y] += a * ap;
          std::erase_if(r.c, [](const auto& e) { return e.second == 0; });
          if (!tighten(r)) {
            b.feasible = false;
            return b;
          }
          if (!r.c.empty()) next.push_back(std::move(r));
        }
      }
      rows = std::move(next);
    }
    for (auto& r : rows) {
      if (!tighten(r)) {
        b.feasible = false;
        return b;
      }
      if (r.c.empty()) continue;
      // a*x + k <= 0
      const Integer& a = r.c.begin()->second;
      if (a > 0) {
        Integer v = floor_div(-r.k, a);
        if (!b.hi || v < *b.hi) b.hi = v;
      } else {
        Integer v = ceil_div(r.k, -a);
        if (!b.lo || v > *b.lo) b.lo = v;
      }
    }
    if (b.lo && b.hi && *b.lo > *b.hi) b.feasible = false;
    return b;
  }

  LinearResult::Kind run(std::vector<Le> rows, std::vector<std::pair<Coeffs, Integer>> ne, std::size_t idx) {
    if (++nodes_ > limits_.max_nodes) throw BudgetExceeded{};
    if (idx == vars_.size()) {
      for (const auto& [c, k] : ne)
        if (c.empty() && k == 0) return LinearResult::Kind::Unsat;
      for (const auto& r : rows)
        if (r.c.empty() && r.k > 0) return LinearResult::Kind::Unsat;
      return LinearResult::Kind::Sat;
    }
    const std::string& x = vars_[idx];
    Bounds b = project(rows, &x);
    if (!b.feasible) return LinearResult::Kind::Unsat;

    Integer center = 0;
    if (b.lo && center < *b.lo) center = *b.lo;
    if (b.hi && center > *b.hi) center = *b.hi;
    bool unknown = false;
    std::size_t tried = 0;
    for (Integer d = 0;; ++d) {
      bool any_in_range = false;
      for (int side = 0; side < 2; ++side) {
        if (d == 0 && side == 1) break;
        Integer v = side == 0 ? Integer(center + d) : Integer(center - d);
        if ((b.lo && v < *b.lo) || (b.hi && v > *b.hi)) continue;
        any_in_range = true;
        if (tried++ >= limits_.max_candidates) return LinearResult::Kind::Unknown;
        std::vector<Le> next_rows = rows;
        for (auto& r : next_rows) substitute(r.c, r.k, x, v);
        auto next_ne = ne;
        for (auto& [c, k] : next_ne) substitute(c, k, x, v);
        auto kind = run(std::move(next_rows), std::move(next_ne), idx + 1);
        if (kind == LinearResult::Kind::Sat) {
          model_[x] = v;
          return kind;
        }
        if (kind == LinearResult::Kind::Unknown) unknown = true;
      }
      if (!any_in_range) break;  // both bounds exhausted
    }
    return unknown ? LinearResult::Kind::Unknown : LinearResult::Kind::Unsat;
  }

  std::map<std::string, Integer> model_;

 private:
  std::vector<std::string> vars_;
  LinearLimits limits_;
  std::size_t nodes_ = 0;
};

}  // namespace

LinearResult solve_linear(const std::vector<LinearRow>& input, const LinearLimits& limits) {
  LinearResult result;
  std::vector<Le> rows;
  std::vector<std::pair<Coeffs, Integer>> ne;
  std::vector<std::string> vars;
  std::set<std::string> seen;

  for (const auto& row : input) {
    Coeffs c;
    for (const auto& [x, a] : row.coeffs) {
      if (a == 0) continue;
      c[x] = a;
      if (seen.insert(x).second) vars.push_back(x);
    }
    Integer k = row.constant;
    switch (row.rel) {
      case LinearRow::Rel::Le: {
        Le r{c, k};
        if (!tighten(r)) {
          result.kind = LinearResult::Kind::Unsat;
          return result;
        }
        if (!r.c.empty()) rows.push_back(std::move(r));
        break;
      }
      case LinearRow::Rel::Eq: {
        Integer g = gcd_of(c);
        if ((g == 0 && k != 0) || (g != 0 && k % g != 0)) {
          result.kind = LinearResult::Kind::Unsat;
          return result;
        }
        if (c.empty()) break;
        Le up{c, k};
        Le down{c, -k};
        for (auto& [_, a] : down.c) a = -a;
        tighten(up);
        tighten(down);
        rows.push_back(std::move(up));
        rows.push_back(std::move(down));
        break;
      }
      case LinearRow::Rel::Ne: {
        if (c.empty()) {
          if (k == 0) {
            result.kind = LinearResult::Kind::Unsat;
            return result;
          }
          break;
        }
        Integer g = gcd_of(c);
        if (k % g != 0) break;  // never zero over the integers
        ne.emplace_back(std::move(c), std::move(k));
        break;
      }
    }
  }

  Search search(vars, limits);
  try {
    if (!search.project(rows, nullptr).feasible) {
      result.kind = LinearResult::Kind::Unsat;
      return result;
    }
    result.kind = search.run(rows, ne, 0);
  } catch (const BudgetExceeded&) {
    result.kind = LinearResult::Kind::Unknown;
  }
  // Too many variables: a found solution still counts, a failed search does not.
  if (vars.size() > limits.max_vars && result.kind == LinearResult::Kind::Unsat)
    result.kind = LinearResult::Kind::Unknown;
  if (result.kind == LinearResult::Kind::Sat) result.model = std::move(search.model_);
  return result;
}

}  // namespace patcheck::detail
