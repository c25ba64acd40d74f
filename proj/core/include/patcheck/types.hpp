#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace patcheck {

using Integer = boost::multiprecision::cpp_int;

/// Source range, 1-based and inclusive of the start column.
struct SourceSpan {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_col = 0;

  bool operator==(const SourceSpan&) const = default;
  static SourceSpan merge(const SourceSpan& a, const SourceSpan& b);
};

/// A MiniFun type: a type variable or a saturated type constructor.
///
/// Built-in constructor names are "Bool", "Int", "Word8", "[]" (lists, one
/// argument), "()" and the tuple names "(,)", "(,,)", ... up to arity 8.
struct TypeExpr {
  enum class Kind { Var, Con };

  Kind kind = Kind::Con;
  std::string name;
  std::vector<TypeExpr> args;

  static TypeExpr var(std::string name);
  static TypeExpr con(std::string name, std::vector<TypeExpr> args = {});
  static TypeExpr list(TypeExpr elem);
  static TypeExpr tuple(std::vector<TypeExpr> elems);

  bool is_var() const { return kind == Kind::Var; }
  bool is_con(std::string_view n) const { return kind == Kind::Con && name == n; }

  bool operator==(const TypeExpr&) const = default;

  std::string to_string() const;
};

std::string tuple_type_name(std::size_t arity);
bool is_tuple_name(std::string_view name);

/// Substitute type variables according to `params[i] -> args[i]`.
TypeExpr substitute(const TypeExpr& t, const std::vector<std::string>& params,
                    const std::vector<TypeExpr>& args);

inline constexpr std::size_t kMaxTupleArity = 8;

}  // namespace patcheck
