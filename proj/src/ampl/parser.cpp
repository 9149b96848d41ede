#include "exeos/ampl/parser.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>

#include "exeos/ampl/lexer.hpp"

namespace exeos::ampl {

namespace {

struct ParseFailure {
  CompileError error;
};

// Recursive-descent over the token stream. Throws ParseFailure internally;
// the public entry points convert to Result.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  AmplModelAst model() {
    AmplModelAst ast;
    while (!at(TokenKind::End)) {
      if (accept_kw("set")) {
        SetDecl d;
        d.loc = cur().loc;
        d.name = expect_ident("set name");
        expect(TokenKind::Semicolon, "';'");
        ast.sets.push_back(std::move(d));
      } else if (accept_kw("param")) {
        ParamDecl d;
        d.loc = cur().loc;
        d.name = expect_ident("parameter name");
        d.index_sets = index_block(2, "parameter");
        attributes(d.lower_bound, d.upper_bound, nullptr);
        expect(TokenKind::Semicolon, "';'");
        ast.params.push_back(std::move(d));
      } else if (accept_kw("var")) {
        VarDecl d;
        d.loc = cur().loc;
        d.name = expect_ident("variable name");
        d.index_sets = index_block(1, "variable");
        attributes(d.lower_bound, d.upper_bound, &d.integrality);
        expect(TokenKind::Semicolon, "';'");
        ast.vars.push_back(std::move(d));
      } else if (accept_kw("subject")) {
        if (!accept_kw("to")) fail("expected 'to' after 'subject'");
        ConstraintDecl d;
        d.loc = cur().loc;
        d.name = expect_ident("constraint name");
        d.index_sets = index_block(1, "constraint");
        expect(TokenKind::Colon, "':'");
        d.lhs = expr();
        d.relation = relation();
        d.rhs = expr();
        expect(TokenKind::Semicolon, "';'");
        ast.constraints.push_back(std::move(d));
      } else if (peek_kw("maximize") || peek_kw("minimize")) {
        ObjectiveDecl d;
        d.loc = cur().loc;
        d.sense = accept_kw("maximize") ? ObjectiveSense::Maximize
                                        : (next(), ObjectiveSense::Minimize);
        d.name = expect_ident("objective name");
        expect(TokenKind::Colon, "':'");
        d.expr = expr();
        expect(TokenKind::Semicolon, "';'");
        ast.objectives.push_back(std::move(d));
      } else {
        fail("expected 'set', 'param', 'var', 'subject to', 'maximize' or 'minimize'");
      }
    }
    return ast;
  }

  DataSection data() {
    DataSection out;
    accept_kw_statement("data");  // optional AMPL-style leader
    while (!at(TokenKind::End)) {
      if (accept_kw("set")) {
        std::string name = expect_ident("set name");
        expect(TokenKind::Assign, "':='");
        std::vector<std::string> members;
        std::set<std::string> seen;
        while (!at(TokenKind::Semicolon)) {
          std::string m = member_token();
          if (!seen.insert(m).second)
            fail("duplicate member '" + m + "' in set " + name);
          members.push_back(std::move(m));
        }
        next();  // ';'
        if (find_name(out.set_values, name))
          fail("set '" + name + "' given data twice");
        out.set_values.emplace_back(std::move(name), std::move(members));
      } else if (accept_kw("param")) {
        std::string name = expect_ident("parameter name");
        if (find_name(out.param_values, name))
          fail("parameter '" + name + "' given data twice");
        if (accept(TokenKind::Colon)) {
          out.param_values.emplace_back(std::move(name), two_d_table());
        } else {
          expect(TokenKind::Assign, "':='");
          out.param_values.emplace_back(std::move(name), scalar_or_one_d());
        }
      } else {
        fail("expected 'set' or 'param'");
      }
    }
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool accept(TokenKind k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  bool peek_kw(std::string_view kw) const {
    return cur().kind == TokenKind::Ident && cur().text == kw;
  }
  bool accept_kw(std::string_view kw) {
    if (!peek_kw(kw)) return false;
    next();
    return true;
  }
  void accept_kw_statement(std::string_view kw) {
    if (peek_kw(kw) && pos_ + 1 < toks_.size() &&
        toks_[pos_ + 1].kind == TokenKind::Semicolon) {
      next();
      next();
    }
  }
  [[noreturn]] void fail(std::string msg) const {
    throw ParseFailure{
        {CompileErrorKind::Syntax, cur().loc, "", std::move(msg)}};
  }
  [[noreturn]] void fail_kind(CompileErrorKind kind, std::string msg) const {
    throw ParseFailure{{kind, cur().loc, "", std::move(msg)}};
  }
  void expect(TokenKind k, std::string_view what) {
    if (!accept(k))
      fail("expected " + std::string(what) + " before '" +
           (cur().kind == TokenKind::End ? "end of input" : cur().text) + "'");
  }
  std::string expect_ident(std::string_view what) {
    if (!at(TokenKind::Ident)) fail("expected " + std::string(what));
    std::string s = cur().text;
    next();
    return s;
  }

  // ---- model pieces ----

  std::vector<IndexBinding> index_block(std::size_t max_arity, std::string_view what) {
    std::vector<IndexBinding> out;
    if (!accept(TokenKind::LBrace)) return out;
    do {
      IndexBinding b;
      std::string first = expect_ident("set or index name");
      if (accept_kw("in")) {
        b.index_name = std::move(first);
        b.set_name = expect_ident("set name");
      } else {
        b.set_name = std::move(first);
      }
      out.push_back(std::move(b));
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RBrace, "'}'");
    if (out.size() > max_arity)
      fail("a " + std::string(what) + " takes at most " +
           std::to_string(max_arity) + " index set(s)");
    return out;
  }

  void attributes(std::optional<double>& lower, std::optional<double>& upper,
                  Integrality* integrality) {
    for (;;) {
      if (accept(TokenKind::Ge)) {
        if (lower) fail("duplicate '>=' bound");
        lower = signed_number();
      } else if (accept(TokenKind::Le)) {
        if (upper) fail("duplicate '<=' bound");
        upper = signed_number();
      } else if (integrality && peek_kw("integer")) {
        if (*integrality != Integrality::Continuous) fail("duplicate integrality attribute");
        *integrality = Integrality::Integer;
        next();
      } else if (integrality && peek_kw("binary")) {
        if (*integrality != Integrality::Continuous) fail("duplicate integrality attribute");
        *integrality = Integrality::Binary;
        next();
      } else {
        break;
      }
    }
  }

  double signed_number() {
    bool neg = accept(TokenKind::Minus);
    if (!at(TokenKind::Number)) fail("expected a numeric literal");
    double v = cur().number;
    next();
    return neg ? -v : v;
  }

  Relation relation() {
    if (accept(TokenKind::Le)) return Relation::Le;
    if (accept(TokenKind::Ge)) return Relation::Ge;
    if (accept(TokenKind::Eq)) return Relation::Eq;
    fail("expected '<=', '=' or '>=' in constraint");
  }

  ExprPtr expr() { return additive(); }

  ExprPtr additive() {
    ExprPtr lhs = term();
    for (;;) {
      SourceLoc loc = cur().loc;
      if (accept(TokenKind::Plus)) {
        lhs = make_binary(ExprOp::Add, std::move(lhs), term(), loc);
      } else if (accept(TokenKind::Minus)) {
        lhs = make_binary(ExprOp::Sub, std::move(lhs), term(), loc);
      } else {
        return lhs;
      }
    }
  }

  // `sum` captures the following multiplicative term, as in
  // `sum {p in PRODUCTS} unit[r,p] * x[p]`.
  ExprPtr term() {
    if (peek_kw("sum")) {
      SourceLoc loc = cur().loc;
      next();
      expect(TokenKind::LBrace, "'{'");
      std::string index = expect_ident("index name");
      if (!accept_kw("in")) fail("expected 'in' inside sum binder");
      std::string set = expect_ident("set name");
      expect(TokenKind::RBrace, "'}'");
      return make_sum(std::move(index), std::move(set), term(), loc);
    }
    ExprPtr lhs = factor();
    while (at(TokenKind::Star)) {
      SourceLoc loc = cur().loc;
      next();
      lhs = make_binary(ExprOp::Mul, std::move(lhs), factor(), loc);
    }
    return lhs;
  }

  ExprPtr factor() {
    SourceLoc loc = cur().loc;
    if (accept(TokenKind::Minus)) return make_neg(factor(), loc);
    if (at(TokenKind::Number)) {
      double v = cur().number;
      next();
      return make_number(v, loc);
    }
    if (accept(TokenKind::LParen)) {
      ExprPtr e = expr();
      expect(TokenKind::RParen, "')'");
      return e;
    }
    if (at(TokenKind::Ident)) {
      std::string name = cur().text;
      next();
      std::vector<std::string> subs;
      if (accept(TokenKind::LBracket)) {
        do {
          subs.push_back(expect_ident("subscript index name"));
        } while (accept(TokenKind::Comma));
        expect(TokenKind::RBracket, "']'");
      }
      return make_ref(std::move(name), std::move(subs), loc);
    }
    fail("expected a number, reference, 'sum' or '('");
  }

  // ---- data pieces ----

  std::string member_token() {
    if (at(TokenKind::Ident) || at(TokenKind::Number)) {
      std::string s = cur().text;
      next();
      return s;
    }
    fail("expected a set member (identifier or number)");
  }

  ParamValue scalar_or_one_d() {
    // Scalar iff a single signed number precedes ';'.
    auto kind_at = [&](std::size_t off) {
      return pos_ + off < toks_.size() ? toks_[pos_ + off].kind
                                       : TokenKind::End;
    };
    if ((at(TokenKind::Number) && kind_at(1) == TokenKind::Semicolon) ||
        (at(TokenKind::Minus) && kind_at(1) == TokenKind::Number &&
         kind_at(2) == TokenKind::Semicolon)) {
      double v = signed_number();
      next();  // ';'
      return v;
    }
    OneDValues vals;
    std::set<std::string> seen;
    while (!at(TokenKind::Semicolon)) {
      std::string key = member_token();
      if (!seen.insert(key).second) fail("duplicate entry for key '" + key + "'");
      vals.entries.emplace_back(std::move(key), signed_number());
    }
    next();  // ';'
    if (vals.entries.empty()) fail("parameter data lists no values");
    return vals;
  }

  TwoDTable two_d_table() {
    TwoDTable t;
    std::set<std::string> seen_cols;
    while (!at(TokenKind::Assign)) {
      std::string c = member_token();
      if (!seen_cols.insert(c).second) fail("duplicate column '" + c + "'");
      t.col_keys.push_back(std::move(c));
    }
    next();  // ':='
    if (t.col_keys.empty()) fail("2-D table declares no columns");
    std::set<std::string> seen_rows;
    while (!at(TokenKind::Semicolon)) {
      std::string r = member_token();
      if (!seen_rows.insert(r).second) fail("duplicate row '" + r + "'");
      t.row_keys.push_back(std::move(r));
      for (std::size_t c = 0; c < t.col_keys.size(); ++c) {
        if (at(TokenKind::Semicolon) || at(TokenKind::End))
          fail_kind(CompileErrorKind::RaggedTable,
                    "row '" + t.row_keys.back() + "' supplies " +
                        std::to_string(c) + " of " +
                        std::to_string(t.col_keys.size()) + " columns");
        // A row key where a value belongs also means a short row.
        if (at(TokenKind::Ident))
          fail_kind(CompileErrorKind::RaggedTable,
                    "row '" + t.row_keys.back() + "' supplies " +
                        std::to_string(c) + " of " +
                        std::to_string(t.col_keys.size()) + " columns");
        t.values.push_back(signed_number());
      }
    }
    next();  // ';'
    return t;
  }

  template <class Seq>
  static bool find_name(const Seq& seq, const std::string& name) {
    for (const auto& [n, v] : seq)
      if (n == name) return true;
    return false;
  }
};

// ---------------------------------------------------------------------------
// Model semantic pass: the AST invariants hold for every AST we hand out.
// ---------------------------------------------------------------------------

class ModelChecker {
 public:
  explicit ModelChecker(const AmplModelAst& ast) : ast_(ast) {}

  std::optional<CompileError> run() {
    if (auto e = collect_names()) return e;
    for (const auto& p : ast_.params)
      if (auto e = check_index_sets(p.index_sets, p.loc)) return e;
    for (const auto& v : ast_.vars)
      if (auto e = check_index_sets(v.index_sets, v.loc)) return e;
    for (const auto& c : ast_.constraints) {
      if (auto e = check_index_sets(c.index_sets, c.loc)) return e;
      Scope scope;
      for (const auto& b : c.index_sets)
        if (!b.index_name.empty()) scope[b.index_name] = b.set_name;
      if (auto e = check_expr(*c.lhs, scope)) return e;
      if (auto e = check_expr(*c.rhs, scope)) return e;
    }
    for (const auto& o : ast_.objectives) {
      Scope scope;
      if (auto e = check_expr(*o.expr, scope)) return e;
    }
    if (ast_.vars.empty())
      return CompileError{CompileErrorKind::Syntax, {}, "",
                          "model declares no variables"};
    if (ast_.objectives.empty())
      return CompileError{CompileErrorKind::Syntax, {}, "",
                          "model declares no objective"};
    return std::nullopt;
  }

 private:
  using Scope = std::unordered_map<std::string, std::string>;  // index -> set

  const AmplModelAst& ast_;
  std::unordered_set<std::string> set_names_;
  std::unordered_map<std::string, std::size_t> param_arity_;
  std::unordered_map<std::string, std::size_t> var_arity_;

  std::optional<CompileError> collect_names() {
    std::unordered_set<std::string> all;
    auto add = [&](const std::string& name, SourceLoc loc)
        -> std::optional<CompileError> {
      if (!all.insert(name).second)
        return CompileError{CompileErrorKind::DuplicateName, loc, name,
                            "name '" + name + "' is declared more than once"};
      return std::nullopt;
    };
    for (const auto& s : ast_.sets) {
      if (auto e = add(s.name, s.loc)) return e;
      set_names_.insert(s.name);
    }
    for (const auto& p : ast_.params) {
      if (auto e = add(p.name, p.loc)) return e;
      param_arity_[p.name] = p.index_sets.size();
    }
    for (const auto& v : ast_.vars) {
      if (auto e = add(v.name, v.loc)) return e;
      var_arity_[v.name] = v.index_sets.size();
    }
    for (const auto& c : ast_.constraints)
      if (auto e = add(c.name, c.loc)) return e;
    for (const auto& o : ast_.objectives)
      if (auto e = add(o.name, o.loc)) return e;
    return std::nullopt;
  }

  std::optional<CompileError> check_index_sets(
      const std::vector<IndexBinding>& bindings, SourceLoc loc) {
    std::unordered_set<std::string> binder_names;
    for (const auto& b : bindings) {
      if (!set_names_.contains(b.set_name))
        return CompileError{CompileErrorKind::UnresolvedSymbol, loc, b.set_name,
                            "'" + b.set_name + "' is not a declared set"};
      if (!b.index_name.empty() && !binder_names.insert(b.index_name).second)
        return CompileError{CompileErrorKind::DuplicateName, loc, b.index_name,
                            "index '" + b.index_name + "' bound twice"};
    }
    return std::nullopt;
  }

  std::optional<CompileError> check_expr(const Expr& e, Scope scope) {
    switch (e.op) {
      case ExprOp::Number:
        return std::nullopt;
      case ExprOp::Ref: {
        std::size_t arity = 0;
        if (auto it = param_arity_.find(e.name); it != param_arity_.end()) {
          arity = it->second;
        } else if (auto it2 = var_arity_.find(e.name); it2 != var_arity_.end()) {
          arity = it2->second;
        } else {
          return CompileError{CompileErrorKind::UnresolvedSymbol, e.loc, e.name,
                              "'" + e.name +
                                  "' is not a declared parameter or variable"};
        }
        if (e.subscripts.size() != arity)
          return CompileError{
              CompileErrorKind::ArityMismatch, e.loc, e.name,
              "'" + e.name + "' takes " + std::to_string(arity) +
                  " subscript(s), " + std::to_string(e.subscripts.size()) +
                  " given"};
        for (const auto& s : e.subscripts) {
          if (!scope.contains(s))
            return CompileError{CompileErrorKind::UnresolvedSymbol, e.loc, s,
                                "subscript '" + s +
                                    "' is not a bound index here"};
        }
        return std::nullopt;
      }
      case ExprOp::Sum: {
        if (!set_names_.contains(e.set_name))
          return CompileError{CompileErrorKind::UnresolvedSymbol, e.loc,
                              e.set_name,
                              "'" + e.set_name + "' is not a declared set"};
        if (scope.contains(e.name))
          return CompileError{CompileErrorKind::DuplicateName, e.loc, e.name,
                              "index '" + e.name + "' bound twice"};
        scope[e.name] = e.set_name;
        return check_expr(*e.lhs, scope);
      }
      case ExprOp::Neg:
        return check_expr(*e.lhs, scope);
      case ExprOp::Add:
      case ExprOp::Sub:
      case ExprOp::Mul:
        if (auto err = check_expr(*e.lhs, scope)) return err;
        return check_expr(*e.rhs, scope);
    }
    return std::nullopt;
  }
};

template <class Fn>
auto run_parser(std::string_view text, Fn&& fn)
    -> Result<decltype(fn(std::declval<Parser&>())), CompileError> {
  auto toks = lex(text);
  if (!toks.ok()) return toks.error();
  Parser p(std::move(toks.value()));
  try {
    return fn(p);
  } catch (const ParseFailure& f) {
    return f.error;
  }
}

}  // namespace

Result<AmplModelAst, CompileError> parse_model(std::string_view text) {
  auto ast = run_parser(text, [](Parser& p) { return p.model(); });
  if (!ast.ok()) return ast;
  if (auto err = ModelChecker(ast.value()).run()) return *err;
  return ast;
}

Result<DataSection, CompileError> parse_data(std::string_view text) {
  return run_parser(text, [](Parser& p) { return p.data(); });
}

}  // namespace exeos::ampl
