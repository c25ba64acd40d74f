#include <set>
#include <stdexcept>

#include "lexer.hpp"
#include "patcheck/syntax.hpp"

namespace patcheck {

namespace {

using detail::Token;
using detail::TokenKind;

struct ParseFailure : std::runtime_error {
  SourceSpan span;
  ParseFailure(SourceSpan s, const std::string& msg) : std::runtime_error(msg), span(s) {}
};

/// One function clause before grouping.
struct RawClause {
  std::string name;
  SourceSpan name_span;
  Clause clause;
};

class Parser {
 public:
  Parser(std::string_view source, std::string file_name)
      : source_(source), tokens_(detail::tokenize(source)) {
    program_.file_name = std::move(file_name);
    if (!tokens_.empty()) base_col_ = tokens_.front().col;
  }

  Outcome<Program> run() {
    std::vector<RawClause> clauses;
    while (!peek().is(TokenKind::End)) {
      std::size_t start = pos_;
      try {
        parse_declaration(clauses);
      } catch (const ParseFailure& f) {
        errors_.push_back({SourceError::Kind::Parse, f.span, f.what()});
        if (pos_ == start) ++pos_;
        skip_to_boundary();
      }
    }
    group(clauses);

    Outcome<Program> out;
    out.errors = std::move(errors_);
    if (out.errors.empty()) out.value = std::move(program_);
    return out;
  }

 private:
  // ---- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool at_boundary() const {
    const Token& t = peek();
    return t.is(TokenKind::End) || (t.line_start && t.col <= base_col_);
  }

  /// Tokens of one declaration may continue on indented lines only.
  bool in_decl() const { return !at_boundary(); }

  void skip_to_boundary() {
    while (!at_boundary()) next();
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    std::string found = at.is(TokenKind::End) ? "end of input" : "'" + at.text + "'";
    throw ParseFailure(at.span(), msg + ", found " + found);
  }

  const Token& expect_op(std::string_view op, const char* what) {
    if (!in_decl() || !peek().is_op(op)) fail(peek(), std::string("expected ") + what);
    return next();
  }

  const Token& expect(TokenKind k, const char* what) {
    if (!in_decl() || !peek().is(k)) fail(peek(), std::string("expected ") + what);
    return next();
  }

  SourceSpan span_from(const Token& first) const {
    const Token& last = tokens_[pos_ > 0 ? pos_ - 1 : 0];
    return SourceSpan::merge(first.span(), last.span());
  }

  // ---- declarations --------------------------------------------------------

  void parse_declaration(std::vector<RawClause>& clauses) {
    const Token& t = peek();
    if (!t.line_start || t.col != base_col_) fail(t, "expected a declaration at the start of a line");
    if (t.is_word("data")) {
      parse_data();
    } else if (t.is(TokenKind::LowerIdent) && peek(1).is_op("::")) {
      parse_signature();
    } else if (t.is(TokenKind::LowerIdent) && t.text != "_") {
      parse_clauses(clauses);
    } else {
      fail(t, "expected a data declaration, type signature or function clause");
    }
    if (!at_boundary()) fail(peek(), "unexpected token at end of declaration");
  }

  void parse_data() {
    const Token& kw = next();
    auto decl = std::make_shared<DataDecl>();
    decl->type_name = expect(TokenKind::UpperIdent, "a type name").text;
    if (program_.find_data(decl->type_name)) {
      fail(tokens_[pos_ - 1], "type '" + decl->type_name + "' is already declared");
    }
    std::set<std::string> seen;
    while (in_decl() && peek().is(TokenKind::LowerIdent)) {
      const Token& p = next();
      if (!seen.insert(p.text).second) fail(p, "duplicate type parameter '" + p.text + "'");
      decl->type_params.push_back(p.text);
    }
    std::vector<TypeExpr> params;
    for (const auto& p : decl->type_params) params.push_back(TypeExpr::var(p));
    TypeExpr result = TypeExpr::con(decl->type_name, params);

    expect_op("=", "'=' in data declaration");
    std::set<std::string> local;
    for (;;) {
      const Token& cname = expect(TokenKind::UpperIdent, "a constructor name");
      if (program_.find_constructor(cname.text) || !local.insert(cname.text).second) {
        fail(cname, "constructor '" + cname.text + "' is already declared");
      }
      ConstructorSig k;
      k.name = cname.text;
      k.type_name = decl->type_name;
      k.result_type = result;
      k.index = decl->constructors.size();
      while (in_decl() && starts_atype(peek())) k.arg_types.push_back(parse_atype());
      decl->constructors.push_back(std::move(k));
      if (in_decl() && peek().is_op("|")) {
        next();
        continue;
      }
      break;
    }
    if (in_decl() && peek().is_word("deriving")) skip_to_boundary();
    decl->span = span_from(kw);
    program_.add_data(std::move(decl));
  }

  void parse_signature() {
    const Token& name = next();
    next();  // ::
    TypeExpr t = parse_type();
    Signature sig;
    sig.name = name.text;
    while (t.is_con("->")) {
      sig.arg_types.push_back(t.args[0]);
      TypeExpr rest = t.args[1];
      t = std::move(rest);
    }
    sig.result_type = std::move(t);
    sig.span = span_from(name);
    if (program_.find_signature(sig.name)) fail(name, "duplicate type signature for '" + sig.name + "'");
    program_.signatures.push_back(std::move(sig));
  }

  // ---- types ---------------------------------------------------------------

  bool starts_atype(const Token& t) const {
    return t.is(TokenKind::LowerIdent) || t.is(TokenKind::UpperIdent) || t.is(TokenKind::LParen) ||
           t.is(TokenKind::LBracket);
  }

  TypeExpr parse_type() {
    TypeExpr lhs = parse_btype();
    if (in_decl() && peek().is_op("->")) {
      next();
      TypeExpr rhs = parse_type();
      return TypeExpr::con("->", {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  TypeExpr parse_btype() {
    if (in_decl() && peek().is(TokenKind::UpperIdent)) {
      std::string name = next().text;
      std::vector<TypeExpr> args;
      while (in_decl() && starts_atype(peek())) args.push_back(parse_atype());
      return TypeExpr::con(std::move(name), std::move(args));
    }
    return parse_atype();
  }

  TypeExpr parse_atype() {
    if (!in_decl()) fail(peek(), "expected a type");
    const Token& t = next();
    switch (t.kind) {
      case TokenKind::LowerIdent:
        return TypeExpr::var(t.text);
      case TokenKind::UpperIdent:
        return TypeExpr::con(t.text);
      case TokenKind::LBracket: {
        TypeExpr elem = parse_type();
        expect(TokenKind::RBracket, "']'");
        return TypeExpr::list(std::move(elem));
      }
      case TokenKind::LParen: {
        if (in_decl() && peek().is(TokenKind::RParen)) {
          next();
          return TypeExpr::tuple({});
        }
        std::vector<TypeExpr> elems{parse_type()};
        while (in_decl() && peek().is(TokenKind::Comma)) {
          next();
          elems.push_back(parse_type());
        }
        expect(TokenKind::RParen, "')'");
        if (elems.size() == 1) return std::move(elems.front());
        if (elems.size() > kMaxTupleArity) fail(t, "tuples are limited to arity 8");
        return TypeExpr::tuple(std::move(elems));
      }
      default:
        fail(t, "expected a type");
    }
  }

  // ---- clauses -------------------------------------------------------------

  void parse_clauses(std::vector<RawClause>& clauses) {
    const Token& name = next();
    std::vector<SurfacePattern> patterns;
    while (in_decl() && !peek().is_op("=") && !peek().is_op("|")) patterns.push_back(parse_apat());

    if (in_decl() && peek().is_op("=")) {
      next();
      RawClause rc{name.text, name.span(), {}};
      rc.clause.patterns = std::move(patterns);
      parse_rhs(rc.clause);
      rc.clause.span = span_from(name);
      clauses.push_back(std::move(rc));
      return;
    }
    if (!in_decl() || !peek().is_op("|")) fail(peek(), "expected '=' or '|' after clause patterns");
    // One clause per guard alternative, all sharing the pattern vector.
    while (in_decl() && peek().is_op("|")) {
      const Token& bar = next();
      RawClause rc{name.text, name.span(), {}};
      rc.clause.patterns = patterns;
      rc.clause.guard = parse_expr();
      expect_op("=", "'=' after guard");
      parse_rhs(rc.clause);
      rc.clause.span = SourceSpan::merge(name.span(), span_from(bar));
      clauses.push_back(std::move(rc));
    }
  }

  /// The right-hand side is kept as an opaque source slice. It ends at the
  /// next declaration or at a bracket-level '|' starting another guard.
  void parse_rhs(Clause& clause) {
    if (!in_decl() || peek().is_op("|")) fail(peek(), "expected an expression after '='");
    const Token& first = peek();
    int depth = 0;
    const Token* last = nullptr;
    while (in_decl()) {
      const Token& t = peek();
      if (depth == 0 && t.is_op("|")) break;
      if (t.is(TokenKind::LParen) || t.is(TokenKind::LBracket)) ++depth;
      if ((t.is(TokenKind::RParen) || t.is(TokenKind::RBracket)) && depth > 0) --depth;
      last = &next();
    }
    clause.rhs_span = SourceSpan::merge(first.span(), last->span());
    clause.rhs_text = std::string(source_.substr(first.offset, last->offset + last->length - first.offset));
  }

  // ---- patterns ------------------------------------------------------------

  SurfacePattern literal_pattern(const Token& t, bool negative, const Token& start) {
    SurfacePattern p;
    p.kind = SurfacePattern::Kind::IntLiteral;
    p.int_value = Integer(t.text);
    if (negative) p.int_value = -p.int_value;
    p.span = SourceSpan::merge(start.span(), t.span());
    return p;
  }

  SurfacePattern parse_apat() {
    if (!in_decl()) fail(peek(), "expected a pattern");
    const Token& t = next();
    SurfacePattern p;
    p.span = t.span();
    switch (t.kind) {
      case TokenKind::LowerIdent:
        if (t.text == "_") {
          p.kind = SurfacePattern::Kind::Wildcard;
        } else {
          p.kind = SurfacePattern::Kind::Variable;
          p.name = t.text;
        }
        return p;
      case TokenKind::UpperIdent:
        if (t.text == "True" || t.text == "False") {
          p.kind = SurfacePattern::Kind::BoolLiteral;
          p.bool_value = t.text == "True";
        } else {
          p.kind = SurfacePattern::Kind::ConApp;
          p.name = t.text;
        }
        return p;
      case TokenKind::Integer:
        return literal_pattern(t, false, t);
      case TokenKind::Operator:
        if (t.text == "-" && in_decl() && peek().is(TokenKind::Integer)) return literal_pattern(next(), true, t);
        fail(t, "expected a pattern");
      case TokenKind::LBracket: {
        p.kind = SurfacePattern::Kind::List;
        if (in_decl() && peek().is(TokenKind::RBracket)) {
          next();
        } else {
          p.args.push_back(parse_pat());
          while (in_decl() && peek().is(TokenKind::Comma)) {
            next();
            p.args.push_back(parse_pat());
          }
          expect(TokenKind::RBracket, "']' or ','");
        }
        p.span = span_from(t);
        return p;
      }
      case TokenKind::LParen: {
        if (in_decl() && peek().is(TokenKind::RParen)) {
          next();
          p.kind = SurfacePattern::Kind::Tuple;
          p.span = span_from(t);
          return p;
        }
        std::vector<SurfacePattern> elems{parse_pat()};
        while (in_decl() && peek().is(TokenKind::Comma)) {
          next();
          elems.push_back(parse_pat());
        }
        expect(TokenKind::RParen, "')' or ','");
        if (elems.size() == 1) return std::move(elems.front());
        if (elems.size() > kMaxTupleArity) fail(t, "tuples are limited to arity 8");
        p.kind = SurfacePattern::Kind::Tuple;
        p.args = std::move(elems);
        p.span = span_from(t);
        return p;
      }
      default:
        fail(t, "expected a pattern");
    }
  }

  SurfacePattern parse_pat() {
    const Token& start = peek();
    SurfacePattern head;
    if (in_decl() && peek().is(TokenKind::UpperIdent) && peek().text != "True" && peek().text != "False") {
      head.kind = SurfacePattern::Kind::ConApp;
      head.name = next().text;
      while (in_decl() && starts_apat(peek())) head.args.push_back(parse_apat());
      head.span = span_from(start);
    } else {
      head = parse_apat();
    }
    if (in_decl() && peek().is_op(":")) {
      next();
      SurfacePattern cons;
      cons.kind = SurfacePattern::Kind::Cons;
      cons.args.push_back(std::move(head));
      cons.args.push_back(parse_pat());
      cons.span = span_from(start);
      return cons;
    }
    return head;
  }

  bool starts_apat(const Token& t) const {
    return t.is(TokenKind::LowerIdent) || t.is(TokenKind::UpperIdent) || t.is(TokenKind::Integer) ||
           t.is(TokenKind::LParen) || t.is(TokenKind::LBracket);
  }

  // ---- guard expressions ---------------------------------------------------

  std::optional<BinaryOp> binary_op(const Token& t) const {
    if (t.kind != TokenKind::Operator) return std::nullopt;
    static const std::pair<std::string_view, BinaryOp> table[] = {
        {"||", BinaryOp::Or}, {"&&", BinaryOp::And}, {"==", BinaryOp::Eq}, {"/=", BinaryOp::Ne},
        {"<", BinaryOp::Lt},  {"<=", BinaryOp::Le},  {">", BinaryOp::Gt},  {">=", BinaryOp::Ge},
        {"+", BinaryOp::Add}, {"-", BinaryOp::Sub},  {"*", BinaryOp::Mul}};
    for (const auto& [text, op] : table) {
      if (t.text == text) return op;
    }
    return std::nullopt;
  }

  Expr parse_expr() { return parse_binary(2); }

  /// Precedence climbing. || and && associate to the right, comparisons do
  /// not associate, arithmetic associates to the left.
  Expr parse_binary(int min_prec) {
    const Token& start = peek();
    Expr lhs = parse_unary();
    for (;;) {
      if (!in_decl()) break;
      const Token& t = peek();
      if (t.kind == TokenKind::Operator && !binary_op(t) && t.text != "=" && t.text != "|") {
        fail(t, "unsupported operator '" + t.text + "' in guard");
      }
      if (t.is(TokenKind::Backtick)) fail(t, "infix function application is not supported in guards");
      auto op = binary_op(t);
      if (!op || precedence(*op) < min_prec) break;
      next();
      int prec = precedence(*op);
      int next_min = prec + 1;
      if (*op == BinaryOp::Or || *op == BinaryOp::And) next_min = prec;
      Expr rhs = parse_binary(next_min);
      lhs = Expr::binary(*op, std::move(lhs), std::move(rhs));
      lhs.span = span_from(start);
      if (is_comparison(*op) && in_decl()) {
        auto follow = binary_op(peek());
        if (follow && is_comparison(*follow)) fail(peek(), "comparison operators do not associate");
      }
    }
    return lhs;
  }

  Expr parse_unary() {
    const Token& start = peek();
    if (in_decl() && peek().is_op("-")) {
      next();
      Expr inner = parse_unary();
      Expr e = Expr::unary(UnaryOp::Negate, std::move(inner));
      e.span = span_from(start);
      return e;
    }
    return parse_application();
  }

  bool starts_atom(const Token& t) const {
    return t.is(TokenKind::LowerIdent) || t.is(TokenKind::UpperIdent) || t.is(TokenKind::Integer) ||
           t.is(TokenKind::LParen);
  }

  Expr parse_application() {
    if (!in_decl()) fail(peek(), "expected an expression");
    const Token& start = peek();
    if (start.is(TokenKind::LowerIdent) && in_decl_after(1) && starts_atom(peek(1))) {
      std::string fn = next().text;
      std::vector<Expr> args;
      while (in_decl() && starts_atom(peek())) args.push_back(parse_atom());
      Expr e;
      if ((fn == "not" || fn == "negate") && args.size() == 1) {
        e = Expr::unary(fn == "not" ? UnaryOp::Not : UnaryOp::Negate, std::move(args.front()));
      } else {
        e = Expr::apply(std::move(fn), std::move(args));
      }
      e.span = span_from(start);
      return e;
    }
    return parse_atom();
  }

  bool in_decl_after(std::size_t ahead) const {
    const Token& t = peek(ahead);
    return !(t.is(TokenKind::End) || (t.line_start && t.col <= base_col_));
  }

  Expr parse_atom() {
    const Token& t = next();
    Expr e;
    switch (t.kind) {
      case TokenKind::LowerIdent:
        if (t.text == "_") fail(t, "wildcard in expression");
        e = Expr::variable(t.text);
        break;
      case TokenKind::Integer:
        e = Expr::integer(Integer(t.text));
        break;
      case TokenKind::UpperIdent:
        if (t.text != "True" && t.text != "False") fail(t, "constructor expressions are not supported in guards");
        e = Expr::boolean(t.text == "True");
        break;
      case TokenKind::LParen: {
        e = parse_expr();
        expect(TokenKind::RParen, "')'");
        break;
      }
      default:
        fail(t, "expected an expression");
    }
    e.span = span_from(t);
    return e;
  }

  // ---- grouping ------------------------------------------------------------

  void group(std::vector<RawClause>& clauses) {
    std::set<std::string> finished;
    for (auto& rc : clauses) {
      if (!program_.functions.empty() && program_.functions.back().name == rc.name) {
        auto& fn = program_.functions.back();
        if (fn.arity() != rc.clause.patterns.size()) {
          errors_.push_back({SourceError::Kind::Parse, rc.clause.span,
                             "clauses of '" + rc.name + "' have different numbers of arguments (" +
                                 std::to_string(fn.arity()) + " and " +
                                 std::to_string(rc.clause.patterns.size()) + ")"});
        }
        fn.span = SourceSpan::merge(fn.span, rc.clause.span);
        fn.clauses.push_back(std::move(rc.clause));
        continue;
      }
      if (!program_.functions.empty()) finished.insert(program_.functions.back().name);
      if (finished.count(rc.name)) {
        errors_.push_back({SourceError::Kind::Parse, rc.clause.span,
                           "clauses of '" + rc.name + "' are not contiguous"});
      }
      FunctionDef fn;
      fn.name = rc.name;
      fn.span = rc.clause.span;
      fn.clauses.push_back(std::move(rc.clause));
      program_.functions.push_back(std::move(fn));
    }
  }

  std::string_view source_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::uint32_t base_col_ = 1;
  Program program_;
  std::vector<SourceError> errors_;
};

}  // namespace

Outcome<Program> parse_program(std::string_view source, std::string file_name) {
  return Parser(source, std::move(file_name)).run();
}

Outcome<Program> load_program(std::string_view source, std::string file_name) {
  auto parsed = parse_program(source, std::move(file_name));
  if (!parsed.ok()) return parsed;
  return check_arity_and_scope(std::move(*parsed.value));
}

}  // namespace patcheck
