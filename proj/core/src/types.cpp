#include "patcheck/types.hpp"

#include <algorithm>

namespace patcheck {

SourceSpan SourceSpan::merge(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan out = a;
  if (b.end_line > out.end_line || (b.end_line == out.end_line && b.end_col > out.end_col)) {
    out.end_line = b.end_line;
    out.end_col = b.end_col;
  }
  return out;
}

TypeExpr TypeExpr::var(std::string name) {
  TypeExpr t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  return t;
}

TypeExpr TypeExpr::con(std::string name, std::vector<TypeExpr> args) {
  TypeExpr t;
  t.kind = Kind::Con;
  t.name = std::move(name);
  t.args = std::move(args);
  return t;
}

TypeExpr TypeExpr::list(TypeExpr elem) { return con("[]", {std::move(elem)}); }

TypeExpr TypeExpr::tuple(std::vector<TypeExpr> elems) {
  auto n = elems.size();
  return con(tuple_type_name(n), std::move(elems));
}

std::string tuple_type_name(std::size_t arity) {
  if (arity == 0) return "()";
  return "(" + std::string(arity - 1, ',') + ")";
}

bool is_tuple_name(std::string_view name) {
  if (name.size() < 2 || name.front() != '(' || name.back() != ')') return false;
  return std::all_of(name.begin() + 1, name.end() - 1, [](char c) { return c == ','; });
}

std::string TypeExpr::to_string() const {
  if (kind == Kind::Var) return name;
  if (name == "[]" && args.size() == 1) return "[" + args[0].to_string() + "]";
  if (is_tuple_name(name)) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += args[i].to_string();
    }
    return out + ")";
  }
  std::string out = name;
  for (const auto& a : args) {
    out += ' ';
    bool wrap = a.kind == Kind::Con && !a.args.empty() && a.name != "[]" && !is_tuple_name(a.name);
    out += wrap ? "(" + a.to_string() + ")" : a.to_string();
  }
  return out;
}

TypeExpr substitute(const TypeExpr& t, const std::vector<std::string>& params,
                    const std::vector<TypeExpr>& args) {
  if (t.kind == TypeExpr::Kind::Var) {
    for (std::size_t i = 0; i < params.size() && i < args.size(); ++i) {
      if (params[i] == t.name) return args[i];
    }
    return t;
  }
  TypeExpr out = t;
  for (auto& a : out.args) a = substitute(a, params, args);
  return out;
}

}  // namespace patcheck
