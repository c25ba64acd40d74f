#include <map>
#include <optional>
#include <set>

#include "linear_solver.hpp"
#include "patcheck/oracle.hpp"

namespace patcheck {

namespace {

using detail::LinearResult;
using detail::LinearRow;

enum class Tri { False, True, Unknown };

Tri tri_not(Tri t) {
  if (t == Tri::Unknown) return t;
  return t == Tri::True ? Tri::False : Tri::True;
}

/// A Boolean atom is either a symbol or a comparison, keyed by its text.
struct Atom {
  std::string key;
  const Formula* cmp = nullptr;
};

/// Formula with atoms resolved to indices.
struct Node {
  Formula::Kind kind = Formula::Kind::True;
  int atom = -1;
  std::vector<Node> args;
};

using Assignment = std::vector<Tri>;

class Dpll {
 public:
  Dpll(const Translation& t, const SolverLimits& limits) : t_(t), limits_(limits) {
    for (const auto& f : t.conjuncts) {
      std::set<int> used;
      conjuncts_.push_back(compile(f, used));
      uses_.emplace_back(used.begin(), used.end());
    }
    occurs_.resize(atoms_.size());
    for (std::size_t c = 0; c < uses_.size(); ++c)
      for (int a : uses_[c]) occurs_[static_cast<std::size_t>(a)].push_back(c);
  }

  SolverVerdict solve() {
    Assignment assignment(atoms_.size(), Tri::Unknown);
    bool complete = true;
    auto found = search(assignment, complete);
    if (found) return SolverVerdict::sat(model(*found));
    if (!complete) return SolverVerdict::unknown(reason_.empty() ? "search budget exhausted" : reason_);
    return SolverVerdict::unsat("no satisfying assignment");
  }

 private:
  struct Solution {
    std::map<std::string, bool> bools;
    std::map<std::string, Integer> ints;
  };

  Node compile(const Formula& f, std::set<int>& used) {
    Node n;
    n.kind = f.kind;
    if (f.kind == Formula::Kind::BoolVar || f.kind == Formula::Kind::Cmp) {
      n.atom = add_atom(f.kind == Formula::Kind::BoolVar ? f.key : f.to_string(),
                        f.kind == Formula::Kind::Cmp ? &f : nullptr);
      used.insert(n.atom);
      return n;
    }
    for (const auto& a : f.args) n.args.push_back(compile(a, used));
    return n;
  }

  int add_atom(const std::string& key, const Formula* cmp) {
    auto [it, fresh] = index_.emplace(key, atoms_.size());
    if (fresh) atoms_.push_back({key, cmp});
    return static_cast<int>(it->second);
  }

  static Tri eval(const Node& f, const Assignment& a) {
    switch (f.kind) {
      case Formula::Kind::True: return Tri::True;
      case Formula::Kind::False: return Tri::False;
      case Formula::Kind::BoolVar:
      case Formula::Kind::Cmp: return a[static_cast<std::size_t>(f.atom)];
      case Formula::Kind::Not: return tri_not(eval(f.args[0], a));
      case Formula::Kind::And: {
        Tri r = Tri::True;
        for (const auto& g : f.args) {
          Tri v = eval(g, a);
          if (v == Tri::False) return v;
          if (v == Tri::Unknown) r = v;
        }
        return r;
      }
      case Formula::Kind::Or: {
        Tri r = Tri::False;
        for (const auto& g : f.args) {
          Tri v = eval(g, a);
          if (v == Tri::True) return v;
          if (v == Tri::Unknown) r = v;
        }
        return r;
      }
      case Formula::Kind::Iff: {
        Tri l = eval(f.args[0], a), r = eval(f.args[1], a);
        if (l == Tri::Unknown || r == Tri::Unknown) return Tri::Unknown;
        return l == r ? Tri::True : Tri::False;
      }
    }
    return Tri::Unknown;
  }

  bool falsifies(std::size_t atom, const Assignment& a) const {
    for (std::size_t c : occurs_[atom])
      if (eval(conjuncts_[c], a) == Tri::False) return true;
    return false;
  }

  // Assigns every atom whose other value falsifies a conjunct, and checks the
  // arithmetic of the partial assignment. False on conflict.
  bool propagate(Assignment& a) {
    for (const auto& c : conjuncts_)
      if (eval(c, a) == Tri::False) return false;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (a[i] != Tri::Unknown || occurs_[i].empty()) continue;
        a[i] = Tri::False;
        bool f_bad = falsifies(i, a);
        a[i] = Tri::True;
        bool t_bad = falsifies(i, a);
        a[i] = Tri::Unknown;
        if (f_bad && t_bad) return false;
        if (f_bad || t_bad) {
          a[i] = f_bad ? Tri::True : Tri::False;
          changed = true;
        }
      }
    }
    return arithmetic(a).kind != LinearResult::Kind::Unsat;
  }

  std::optional<Solution> search(Assignment& a, bool& complete) {
    if (++nodes_ > limits_.max_search_nodes) {
      complete = false;
      reason_ = "search budget exhausted";
      return std::nullopt;
    }
    if (!propagate(a)) return std::nullopt;
    std::optional<std::size_t> next;
    for (std::size_t c = 0; c < conjuncts_.size() && !next; ++c) {
      if (eval(conjuncts_[c], a) == Tri::True) continue;
      for (int i : uses_[c])
        if (a[static_cast<std::size_t>(i)] == Tri::Unknown) {
          next = static_cast<std::size_t>(i);
          break;
        }
    }
    if (!next) return theory(a, complete);
    for (Tri value : {Tri::False, Tri::True}) {
      Assignment b = a;
      b[*next] = value;
      auto found = search(b, complete);
      if (found) return found;
    }
    return std::nullopt;
  }

  LinearResult arithmetic(const Assignment& a) const {
    std::vector<LinearRow> rows;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const Atom& atom = atoms_[i];
      if (!atom.cmp || a[i] == Tri::Unknown) continue;
      CmpOp op = a[i] == Tri::True ? atom.cmp->op : negate(atom.cmp->op);
      LinearTerm d = atom.cmp->lhs;
      LinearTerm r = atom.cmp->rhs;
      r *= Integer(-1);
      d += r;
      LinearRow row;
      switch (op) {
        case CmpOp::Eq: row.rel = LinearRow::Rel::Eq; break;
        case CmpOp::Ne: row.rel = LinearRow::Rel::Ne; break;
        case CmpOp::Le: row.rel = LinearRow::Rel::Le; break;
        case CmpOp::Lt:
          row.rel = LinearRow::Rel::Le;
          d.constant += 1;
          break;
        case CmpOp::Ge:
          row.rel = LinearRow::Rel::Le;
          d *= Integer(-1);
          break;
        case CmpOp::Gt:
          row.rel = LinearRow::Rel::Le;
          d *= Integer(-1);
          d.constant += 1;
          break;
      }
      row.coeffs = std::move(d.coeffs);
      row.constant = std::move(d.constant);
      rows.push_back(std::move(row));
    }
    if (rows.empty()) return {LinearResult::Kind::Sat, {}};
    detail::LinearLimits lim;
    lim.max_vars = limits_.max_int_vars;
    lim.max_candidates = limits_.max_candidates_per_var;
    lim.max_nodes = limits_.max_search_nodes;
    return detail::solve_linear(rows, lim);
  }

  // atoms left unassigned occur only in satisfied conjuncts; they stay free
  std::optional<Solution> theory(const Assignment& a, bool& complete) {
    LinearResult r = arithmetic(a);
    if (r.kind == LinearResult::Kind::Unknown) {
      complete = false;
      reason_ = "arithmetic search budget exhausted";
      return std::nullopt;
    }
    if (r.kind == LinearResult::Kind::Unsat) return std::nullopt;
    Solution s;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (!atoms_[i].cmp && a[i] != Tri::Unknown) s.bools[atoms_[i].key] = a[i] == Tri::True;
    s.ints = std::move(r.model);
    return s;
  }

  std::vector<ModelEntry> model(const Solution& s) const {
    std::vector<ModelEntry> out;
    for (const auto& sym : t_.symbols) {
      ModelEntry e;
      e.key = sym.key;
      e.var = sym.var;
      e.atom = sym.atom;
      e.is_bool = sym.is_bool;
      if (sym.is_bool) {
        auto it = s.bools.find(sym.key);
        e.value = it != s.bools.end() && it->second ? "True" : "False";
      } else {
        auto it = s.ints.find(sym.key);
        e.value = it != s.ints.end() ? it->second.str() : "0";
      }
      out.push_back(std::move(e));
    }
    return out;
  }

  const Translation& t_;
  SolverLimits limits_;
  std::vector<Atom> atoms_;
  std::map<std::string, std::size_t> index_;
  std::vector<Node> conjuncts_;
  std::vector<std::vector<int>> uses_;           // atoms of each conjunct
  std::vector<std::vector<std::size_t>> occurs_;  // conjuncts of each atom
  std::size_t nodes_ = 0;
  std::string reason_;
};

}  // namespace

SolverVerdict builtin_solve(const Translation& t, const SolverLimits& limits) {
  return Dpll(t, limits).solve();
}

}  // namespace patcheck
