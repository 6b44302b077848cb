#include "munj/syntax.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "munj/unify.hpp"

namespace munj {

namespace {

enum class Tok { Ident, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

bool op_char(char c) {
  return std::string_view("+-*/\\<>=~:|&^%@!?$").find(c) != std::string_view::npos;
}

std::vector<Token> lex(const std::string& text, const std::string& path) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    std::size_t j = i;
    Tok kind = Tok::Sym;
    if (ident_char(c)) {
      while (j < text.size() && ident_char(text[j])) ++j;
      kind = Tok::Ident;
    } else if (op_char(c)) {
      while (j < text.size() && op_char(text[j])) ++j;
    } else if (std::string_view("()[]{},;.").find(c) != std::string_view::npos) {
      j = i + 1;
    } else {
      fail(ErrorKind::Syntax, path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                  ": unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back({kind, text.substr(i, j - i), line, col});
    advance(j - i);
  }
  out.push_back({Tok::End, "<end of input>", line, col});
  return out;
}

// Words that cannot name sorts, constants, variables or predicates.
const std::set<std::string> kReserved = {
    "sort", "const", "pred",  "rewrite", "recursive", "define", "theorem", "proof", "end",
    "assume", "infix", "by",  "lex",     "and",       "top",    "bot",     "forall", "exists",
    "mu",   "nu",    "in",    "using",   "then",      "o"};

// Proof-term keywords; these cannot name hypotheses or theorems.
const std::set<std::string> kProofKeywords = {
    "unit", "abort", "lam",  "app",    "pair", "fst",  "snd",  "inl",    "inr",    "case", "lamx",
    "tapp", "wit",   "dest", "refl",   "eqcase", "fold", "iter", "coiter", "unfold", "subst"};

using Definition = std::variant<Formula, Predicate>;

EqElimData blank_eq_data() {
  Term dummy = Term::var("_", TermType::prop());
  return EqElimData{Context{}, VarSet{}, TermSubst{}, ProofSubst{}, dummy, dummy, Formula::top(), ProofTerm::unit(), {}};
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string path) : toks_(std::move(toks)), path_(std::move(path)) {}

  TheoryFile parse_file() {
    TheoryFile f;
    f.path = path_;
    while (peek().kind != Tok::End) f.decls.push_back(parse_decl());
    f.sig = sig_;
    return f;
  }

 private:
  // -------------------------------------------------------------------------
  // Tokens

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(const std::string& text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind != Tok::End && t.text == text;
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void error_at(const Token& t, const std::string& msg) const {
    fail(ErrorKind::Syntax, path_ + ":" + std::to_string(t.line) + ":" + std::to_string(t.col) +
                                ": " + msg + " (at '" + t.text + "')");
  }
  [[noreturn]] void error(const std::string& msg) const { error_at(peek(), msg); }
  void expect(const std::string& text) {
    if (!at(text)) error("expected '" + text + "'");
    next();
  }
  bool accept(const std::string& text) {
    if (!at(text)) return false;
    next();
    return true;
  }
  std::string expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) error("expected " + what);
    return next().text;
  }
  std::string expect_name(const std::string& what) {
    if (peek().kind != Tok::Ident || kReserved.count(peek().text)) error("expected " + what);
    return next().text;
  }
  std::string expect_proof_name(const std::string& what) {
    if (peek().kind != Tok::Ident || kProofKeywords.count(peek().text)) error("expected " + what);
    return expect_name(what);
  }

  // Runs `f`, turning kernel errors into syntax errors at `tok`.
  template <typename F>
  auto located(const Token& tok, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Syntax) throw;
      error_at(tok, e.what());
    }
  }

  // -------------------------------------------------------------------------
  // Scopes

  struct ScopeMark {
    Parser& p;
    std::size_t terms, preds, proofs;
    explicit ScopeMark(Parser& parser)
        : p(parser),
          terms(parser.term_scope_.size()),
          preds(parser.pred_scope_.size()),
          proofs(parser.proof_scope_.size()) {}
    ~ScopeMark() {
      p.term_scope_.erase(p.term_scope_.begin() + static_cast<std::ptrdiff_t>(terms), p.term_scope_.end());
      p.pred_scope_.erase(p.pred_scope_.begin() + static_cast<std::ptrdiff_t>(preds), p.pred_scope_.end());
      p.proof_scope_.resize(proofs);
    }
  };

  // Replaces the term and proof scopes for its lifetime.
  struct ScopeSwap {
    Parser& p;
    std::vector<Term> terms;
    std::vector<std::string> proofs;
    ScopeSwap(Parser& parser, std::vector<Term> new_terms, std::vector<std::string> new_proofs)
        : p(parser), terms(std::move(parser.term_scope_)), proofs(std::move(parser.proof_scope_)) {
      p.term_scope_ = std::move(new_terms);
      p.proof_scope_ = std::move(new_proofs);
    }
    ~ScopeSwap() {
      p.term_scope_ = std::move(terms);
      p.proof_scope_ = std::move(proofs);
    }
  };

  const Term* find_term_var(const std::string& name) const {
    for (auto it = term_scope_.rbegin(); it != term_scope_.rend(); ++it)
      if (it->name() == name) return &*it;
    return nullptr;
  }
  const PredVar* find_pred_var(const std::string& name) const {
    for (auto it = pred_scope_.rbegin(); it != pred_scope_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }
  bool in_proof_scope(const std::string& name) const {
    for (const auto& n : proof_scope_)
      if (n == name) return true;
    return false;
  }

  // -------------------------------------------------------------------------
  // Types and binders

  TermType parse_type() {
    TermType from = parse_type_atom();
    if (accept("->")) return TermType::arrow(from, parse_type());
    return from;
  }

  TermType parse_type_atom() {
    if (accept("(")) {
      TermType t = parse_type();
      expect(")");
      return t;
    }
    Token tok = peek();
    std::string name = expect_ident("a type");
    if (name == "o") return TermType::prop();
    if (!sig_.has_sort(name)) error_at(tok, "unknown sort " + name);
    return TermType::base(name);
  }

  Term parse_binder() {
    std::string name = expect_name("a variable name");
    expect(":");
    TermType type = parse_type();
    if (!type.is_term_type()) error("variable " + name + " cannot have type " + type.str());
    return Term::var(name, type);
  }

  // x:T y:U ... (commas optional) up to, not including, `stop`.
  std::vector<Term> parse_binders_until(const std::string& stop) {
    std::vector<Term> out;
    while (!at(stop)) {
      out.push_back(parse_binder());
      accept(",");
    }
    return out;
  }

  // -------------------------------------------------------------------------
  // Terms

  bool term_atom_start() const {
    const Token& t = peek();
    if (t.kind == Tok::End) return false;
    if (t.text == "(" || t.text == "\\") return true;
    if (t.kind != Tok::Ident || kReserved.count(t.text)) return false;
    return find_term_var(t.text) != nullptr ||
           (sig_.constant_type(t.text) != nullptr && find_pred_var(t.text) == nullptr);
  }

  Term parse_term() {
    Token start = peek();
    Term t = parse_infix(1);
    located(start, [&] { return infer_term_type(sig_, t); });
    return t;
  }

  static int infix_level(const std::string& sym) { return sym == "*" ? 2 : 1; }

  Term parse_infix(int min_level) {
    Term lhs = parse_app();
    while (peek().kind == Tok::Sym && sig_.infix_constant(peek().text) != nullptr &&
           infix_level(peek().text) >= min_level) {
      std::string sym = next().text;
      Term rhs = parse_infix(infix_level(sym) + 1);
      lhs = Term::apps(sig_.make_constant(*sig_.infix_constant(sym)), {lhs, rhs});
    }
    return lhs;
  }

  Term parse_app() {
    Term head = parse_term_atom();
    while (term_atom_start()) head = Term::app(head, parse_term_atom());
    return head;
  }

  Term parse_term_atom() {
    Token tok = peek();
    if (accept("(")) {
      Term t = parse_infix(1);
      expect(")");
      return t;
    }
    if (accept("\\")) {
      ScopeMark mark(*this);
      Term x = parse_binder();
      expect(".");
      term_scope_.push_back(x);
      return Term::lam(x, parse_infix(1));
    }
    if (tok.kind != Tok::Ident || kReserved.count(tok.text)) error("expected a term");
    next();
    if (const Term* v = find_term_var(tok.text)) return *v;
    if (sig_.constant_type(tok.text) != nullptr) return sig_.make_constant(tok.text);
    error_at(tok, "unknown term " + tok.text);
  }

  std::vector<Term> parse_atom_args() {
    std::vector<Term> out;
    while (term_atom_start()) {
      Token start = peek();
      Term t = parse_term_atom();
      located(start, [&] { return infer_term_type(sig_, t); });
      out.push_back(t);
    }
    return out;
  }

  void check_args(const Token& tok, const std::string& what, const std::vector<TermType>& arity,
                  const std::vector<Term>& args) {
    if (arity.size() != args.size())
      error_at(tok, what + " expects " + std::to_string(arity.size()) + " arguments, got " +
                        std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i)
      if (type_of(args[i]) != arity[i])
        error_at(tok, what + " argument " + std::to_string(i + 1) + " has type " +
                          type_of(args[i]).str() + ", expected " + arity[i].str());
  }

  // -------------------------------------------------------------------------
  // Formulas

  Formula parse_formula() {
    Formula lhs = parse_or();
    if (accept("=>")) return Formula::imp(lhs, parse_formula());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    if (accept("\\/")) return Formula::disj(lhs, parse_or());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    if (accept("/\\")) return Formula::conj(lhs, parse_and());
    return lhs;
  }

  Formula parse_equation() {
    Token tok = peek();
    Term a = parse_term();
    expect("=");
    Term b = parse_term();
    if (type_of(a) != type_of(b))
      error_at(tok, "equation between types " + type_of(a).str() + " and " + type_of(b).str());
    return Formula::eq(a, b);
  }

  Formula parse_unary() {
    Token tok = peek();
    if (accept("top")) return Formula::top();
    if (accept("bot")) return Formula::bot();
    if (at("forall") || at("exists")) {
      bool all = next().text == "forall";
      ScopeMark mark(*this);
      std::vector<Term> xs;
      do {
        xs.push_back(parse_binder());
        term_scope_.push_back(xs.back());
      } while (!at(","));
      expect(",");
      Formula body = parse_formula();
      for (auto it = xs.rbegin(); it != xs.rend(); ++it)
        body = all ? Formula::forall(*it, body) : Formula::exists(*it, body);
      return body;
    }
    if (at("mu") || at("nu")) {
      bool mu = next().text == "mu";
      PredOperator op = parse_op_body();
      std::vector<Term> args = parse_atom_args();
      check_args(tok, mu ? "mu" : "nu", op.pred.arity, args);
      return mu ? Formula::mu(op, args) : Formula::nu(op, args);
    }
    if (at("(")) {
      std::size_t save = pos_;
      try {
        next();
        Formula f = parse_formula();
        expect(")");
        if (!at("=") && !(peek().kind == Tok::Sym && sig_.infix_constant(peek().text)))
          return f;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Syntax) throw;
      }
      pos_ = save;
      return parse_equation();
    }
    if (tok.kind == Tok::Ident && !kReserved.count(tok.text) && find_term_var(tok.text) == nullptr) {
      if (const PredVar* p = find_pred_var(tok.text)) {
        next();
        PredVar pv = *p;
        std::vector<Term> args = parse_atom_args();
        check_args(tok, pv.name, pv.arity, args);
        return Formula::pred_app(pv, args);
      }
      if (const auto* arity = sig_.predicate_arity(tok.text)) {
        next();
        std::vector<TermType> ar = *arity;
        std::vector<Term> args = parse_atom_args();
        check_args(tok, tok.text, ar, args);
        return Formula::atom(tok.text, args);
      }
      auto def = defines_.find(tok.text);
      if (def != defines_.end()) {
        next();
        if (const auto* f = std::get_if<Formula>(&def->second)) return *f;
        const Predicate& s = std::get<Predicate>(def->second);
        std::vector<Term> args = parse_atom_args();
        check_args(tok, tok.text, s.arity(), args);
        return apply_predicate(s, args);
      }
    }
    return parse_equation();
  }

  // After `mu`/`nu`: (N, x:T ... . body)
  PredOperator parse_op_body() {
    expect("(");
    std::string name = expect_name("a predicate variable");
    std::vector<Term> params;
    if (accept(",")) params = parse_binders_until(".");
    expect(".");
    std::vector<TermType> arity;
    for (const Term& x : params) arity.push_back(x.type());
    PredVar pv{name, arity};
    ScopeMark mark(*this);
    pred_scope_.push_back(pv);
    for (const Term& x : params) term_scope_.push_back(x);
    Formula body = parse_formula();
    expect(")");
    return PredOperator{pv, params, body};
  }

  Predicate parse_predicate() {
    Token tok = peek();
    if (accept("(")) {
      Predicate s = parse_predicate();
      expect(")");
      return s;
    }
    if (accept("\\")) {
      std::vector<Term> params = parse_binders_until(".");
      expect(".");
      ScopeMark mark(*this);
      for (const Term& x : params) term_scope_.push_back(x);
      return Predicate{params, parse_formula()};
    }
    if (at("mu") || at("nu")) {
      bool mu = next().text == "mu";
      PredOperator op = parse_op_body();
      return mu ? Predicate::of_mu(op) : Predicate::of_nu(op);
    }
    std::string name = expect_ident("a predicate");
    if (const PredVar* p = find_pred_var(name)) return Predicate::of_pred_var(*p);
    if (const auto* arity = sig_.predicate_arity(name)) return Predicate::of_atom(name, *arity);
    auto def = defines_.find(name);
    if (def != defines_.end() && std::holds_alternative<Predicate>(def->second))
      return std::get<Predicate>(def->second);
    error_at(tok, "unknown predicate " + name);
  }

  PredOperator parse_operator(bool mu) {
    Token tok = peek();
    const char* want = mu ? "mu" : "nu";
    if (accept(want)) return parse_op_body();
    std::string name = expect_ident(std::string("a ") + want + " operator");
    auto def = defines_.find(name);
    if (def != defines_.end() && std::holds_alternative<Predicate>(def->second)) {
      const Predicate& s = std::get<Predicate>(def->second);
      const Formula& b = s.body;
      if (b.is(mu ? Formula::Kind::Mu : Formula::Kind::Nu) && b.args().size() == s.params.size()) {
        bool direct = true;
        for (std::size_t i = 0; i < s.params.size(); ++i)
          direct = direct && b.args()[i].is_var() && b.args()[i].name() == s.params[i].name();
        if (direct) return b.op();
      }
    }
    error_at(tok, name + " does not name a " + want + " operator");
  }

  std::optional<Formula> parse_annot() {
    if (!accept("{")) return std::nullopt;
    Formula f = parse_formula();
    expect("}");
    return f;
  }

  // -------------------------------------------------------------------------
  // Proofs

  ProofTerm parse_proof() {
    Token tok = peek();
    if (accept("(")) {
      ProofTerm p = parse_proof();
      expect(")");
      return p;
    }
    if (tok.kind != Tok::Ident) error("expected a proof term");
    const std::string& kw = tok.text;
    if (kw == "unit") {
      next();
      return ProofTerm::unit();
    }
    if (kw == "abort" || kw == "inl" || kw == "inr") {
      next();
      auto annot = parse_annot();
      expect("(");
      ProofTerm p = parse_proof();
      expect(")");
      if (kw == "abort") return ProofTerm::abort(p, annot);
      return kw == "inl" ? ProofTerm::in1(p, annot) : ProofTerm::in2(p, annot);
    }
    if (kw == "lam") {
      next();
      std::string h = expect_proof_name("a hypothesis name");
      std::optional<Formula> dom;
      if (accept(":")) dom = parse_formula();
      expect(".");
      ScopeMark mark(*this);
      proof_scope_.push_back(h);
      return ProofTerm::lam(h, dom, parse_proof());
    }
    if (kw == "app" || kw == "pair") {
      next();
      expect("(");
      ProofTerm a = parse_proof();
      expect(",");
      ProofTerm b = parse_proof();
      expect(")");
      return kw == "app" ? ProofTerm::app(a, b) : ProofTerm::pair(a, b);
    }
    if (kw == "fst" || kw == "snd") {
      next();
      expect("(");
      ProofTerm p = parse_proof();
      expect(")");
      return kw == "fst" ? ProofTerm::proj1(p) : ProofTerm::proj2(p);
    }
    if (kw == "case") {
      next();
      expect("(");
      ProofTerm m = parse_proof();
      expect(",");
      auto [a, l] = parse_proof_abstraction();
      expect(",");
      auto [b, r] = parse_proof_abstraction();
      expect(")");
      return ProofTerm::case_of(m, a, l, b, r);
    }
    if (kw == "lamx") {
      next();
      ScopeMark mark(*this);
      Term x = parse_binder();
      expect(".");
      term_scope_.push_back(x);
      return ProofTerm::lam_term(x, parse_proof());
    }
    if (kw == "tapp") {
      next();
      expect("(");
      ProofTerm p = parse_proof();
      expect(",");
      Term t = parse_term();
      expect(")");
      return ProofTerm::app_term(p, t);
    }
    if (kw == "wit") {
      next();
      auto annot = parse_annot();
      expect("(");
      Term t = parse_term();
      expect(",");
      ProofTerm p = parse_proof();
      expect(")");
      return ProofTerm::witness(t, p, annot);
    }
    if (kw == "dest") {
      next();
      expect("(");
      ProofTerm m = parse_proof();
      expect(",");
      ScopeMark mark(*this);
      Term x = parse_binder();
      expect(".");
      std::string h = expect_proof_name("a hypothesis name");
      expect(".");
      term_scope_.push_back(x);
      proof_scope_.push_back(h);
      ProofTerm body = parse_proof();
      expect(")");
      return ProofTerm::destruct(m, x, h, body);
    }
    if (kw == "refl") {
      next();
      expect("(");
      Term t = parse_term();
      expect(")");
      return ProofTerm::refl(t);
    }
    if (kw == "fold" || kw == "unfold") {
      next();
      bool mu = kw == "fold";
      expect("[");
      PredOperator op = parse_operator(mu);
      expect("]");
      expect("(");
      std::vector<Term> args;
      if (!at(";")) {
        args.push_back(parse_term());
        while (accept(",")) args.push_back(parse_term());
      }
      expect(";");
      ProofTerm p = parse_proof();
      expect(")");
      check_args(tok, kw, op.pred.arity, args);
      return mu ? ProofTerm::mu_intro(op, args, p) : ProofTerm::nu_elim(op, args, p);
    }
    if (kw == "iter" || kw == "coiter") {
      next();
      expect("[");
      Predicate s = parse_predicate();
      expect("]");
      auto annot = parse_annot();
      expect("(");
      ProofTerm major = parse_proof();
      expect(",");
      ScopeMark mark(*this);
      std::vector<Term> xs;
      while (at(":", 1)) xs.push_back(parse_binder());
      std::string h = expect_proof_name("a hypothesis name");
      expect(".");
      for (const Term& x : xs) term_scope_.push_back(x);
      proof_scope_.push_back(h);
      ProofTerm step = parse_proof();
      expect(")");
      if (kw == "iter") return ProofTerm::mu_elim(s, major, xs, h, step);
      return ProofTerm::nu_intro(s, major, xs, h, step, annot);
    }
    if (kw == "eqcase") return parse_eqcase();
    if (kw == "subst") return parse_subst();
    next();
    if (in_proof_scope(kw)) return ProofTerm::var(kw);
    // Earlier theorems stay free; the driver substitutes their checked proofs.
    if (theorems_.count(kw)) return ProofTerm::var(kw);
    error_at(tok, "unknown hypothesis or theorem " + kw);
  }

  std::pair<std::string, ProofTerm> parse_proof_abstraction() {
    std::string h = expect_proof_name("a hypothesis name");
    expect(".");
    ScopeMark mark(*this);
    proof_scope_.push_back(h);
    return {h, parse_proof()};
  }

  // [x := t, ...] with keys drawn from `keys`; values parsed in the current scope.
  TermSubst parse_term_subst(const std::vector<Term>& keys) {
    TermSubst s;
    expect("[");
    while (!at("]")) {
      Token tok = peek();
      std::string name = expect_ident("a variable");
      const Term* key = nullptr;
      for (const Term& k : keys)
        if (k.name() == name) key = &k;
      if (key == nullptr) error_at(tok, name + " is not an eqcase variable");
      expect(":=");
      Term value = parse_term();
      located(tok, [&] {
        s.bind(*key, value);
        return 0;
      });
      if (!accept(",")) break;
    }
    expect("]");
    return s;
  }

  ProofTerm parse_eqcase() {
    Token tok = next();
    expect("{");
    EqElimData d = blank_eq_data();
    std::vector<Term> vars;
    if (accept("vars")) {
      vars = parse_binders_until(";");
      expect(";");
    }
    if (accept("ctx")) {
      ScopeSwap swap(*this, vars, {});
      while (!at(";")) {
        std::string h = expect_proof_name("a hypothesis name");
        expect(":");
        d.ctx.extend(h, parse_formula());
        if (!accept(",")) break;
      }
      expect(";");
    }
    if (accept("theta")) {
      d.theta = parse_term_subst(vars);
      expect(";");
    }
    if (accept("sigma")) {
      expect("[");
      while (!at("]")) {
        std::string h = expect_ident("a hypothesis name");
        expect(":=");
        d.sigma.bind(h, parse_proof());
        if (!accept(",")) break;
      }
      expect("]");
      expect(";");
    }
    {
      ScopeSwap swap(*this, vars, {});
      expect("eq");
      Token etok = peek();
      d.u = parse_term();
      expect("=");
      d.v = parse_term();
      if (type_of(d.u) != type_of(d.v)) error_at(etok, "eqcase equation relates different types");
      expect(";");
      expect("goal");
      d.goal = parse_formula();
      expect(";");
    }
    expect("major");
    d.major = parse_proof();
    expect(";");
    std::vector<std::string> hyps;
    for (const auto& [name, f] : d.ctx.entries()) hyps.push_back(name);
    while (accept("branch")) {
      expect("{");
      std::vector<Term> bvars = parse_binders_until("}");
      expect("}");
      ScopeSwap swap(*this, bvars, hyps);
      TermSubst unifier = parse_term_subst(vars);
      expect("=>");
      ProofTerm p = parse_proof();
      expect(";");
      d.branches.push_back({unifier, p});
    }
    expect("}");
    return located(tok, [&] { return ProofTerm::eq_elim(d); });
  }

  // subst e : u = v in Q [using h : F [:= p], ...] [then p]
  ProofTerm parse_subst() {
    Token tok = next();
    EqElimData d = blank_eq_data();
    d.major = parse_proof();
    expect(":");
    Token etok = peek();
    d.u = parse_term();
    expect("=");
    d.v = parse_term();
    if (type_of(d.u) != type_of(d.v)) error_at(etok, "subst equation relates different types");
    expect("in");
    d.goal = parse_formula();
    std::vector<std::string> hyps;
    if (accept("using")) {
      do {
        std::string h = expect_proof_name("a hypothesis name");
        expect(":");
        d.ctx.extend(h, parse_formula());
        d.sigma.bind(h, accept(":=") ? parse_proof() : ProofTerm::var(h));
        hyps.push_back(h);
      } while (accept(","));
    }
    std::optional<TermSubst> mgu;
    located(etok, [&] {
      CsuResult csu = fo_unify(rs_, rw_normalize_term(rs_, d.u), rw_normalize_term(rs_, d.v));
      if (!csu.unifiers.empty()) mgu = csu.unifiers.front();
      return 0;
    });
    if (mgu) {
      VarSet scope;
      d.ctx.collect_free_vars(scope);
      collect_free_vars(d.u, scope);
      collect_free_vars(d.v, scope);
      collect_free_vars(d.goal, scope);
      TermSubst total = mgu->totalized(scope);
      VarSet branch;
      total.collect_range_vars(branch);
      std::vector<Term> bvars;
      for (const auto& [name, type] : branch) bvars.push_back(Term::var(name, type));
      expect("then");
      ScopeSwap swap(*this, bvars, hyps);
      d.branches.push_back({total, parse_proof()});
    } else if (at("then")) {
      error("the equation has no unifier, so subst takes no branch");
    }
    return located(tok, [&] { return ProofTerm::eq_elim(d); });
  }

  // -------------------------------------------------------------------------
  // Declarations

  std::vector<Term> parse_rule_vars() {
    std::vector<Term> vars;
    if (accept("[")) {
      vars = parse_binders_until("]");
      expect("]");
    }
    return vars;
  }

  AtomRule parse_atom_rule() {
    Token tok = peek();
    std::string pred = expect_ident("a predicate");
    const auto* arity = sig_.predicate_arity(pred);
    if (arity == nullptr) error_at(tok, pred + " is not a predicate");
    std::vector<TermType> ar = *arity;
    std::vector<Term> args = parse_atom_args();
    check_args(tok, pred, ar, args);
    expect("~>");
    return AtomRule{pred, args, parse_formula()};
  }

  Decl parse_decl() {
    Token tok = peek();
    Decl d{{tok.line, tok.col}, SortDecl{}};
    std::string kw = expect_ident("a declaration");
    if (kw == "sort") {
      std::string name = expect_name("a sort name");
      located(tok, [&] {
        if (sig_.has_sort(name)) fail(ErrorKind::Syntax, "sort " + name + " declared twice");
        sig_.add_sort(name);
        return 0;
      });
      d.value = SortDecl{name};
    } else if (kw == "const") {
      std::string name = expect_name("a constant name");
      expect(":");
      TermType type = parse_type();
      std::string infix;
      if (accept("infix")) {
        if (peek().kind != Tok::Sym) error("expected an infix symbol");
        infix = next().text;
        static const std::set<std::string> taken = {"->", "=>", "~>", "/\\", "\\/", "=", ":=", ":", "\\"};
        if (taken.count(infix)) error("symbol " + infix + " is reserved");
      }
      located(tok, [&] {
        if (sig_.declares(name)) fail(ErrorKind::Syntax, name + " declared twice");
        sig_.add_constant(name, type);
        if (!infix.empty()) sig_.set_infix(infix, name);
        return 0;
      });
      d.value = ConstDecl{name, type, infix};
    } else if (kw == "pred") {
      std::string name = expect_name("a predicate name");
      expect(":");
      TermType type = parse_type();
      located(tok, [&] {
        if (sig_.declares(name)) fail(ErrorKind::Syntax, name + " declared twice");
        sig_.add_predicate(name, type);
        return 0;
      });
      d.value = PredDecl{name, type};
    } else if (kw == "rewrite") {
      ScopeMark mark(*this);
      RewriteDecl r{parse_rule_vars(), TermRule{Term::var("_", TermType::prop()), Term::var("_", TermType::prop())}};
      for (const Term& v : r.vars) term_scope_.push_back(v);
      if (peek().kind == Tok::Ident && sig_.predicate_arity(peek().text) && !find_term_var(peek().text)) {
        r.rule = parse_atom_rule();
      } else {
        Term lhs = parse_term();
        expect("~>");
        Term rhs = parse_term();
        r.rule = TermRule{lhs, rhs};
        rs_.term_rules.push_back(TermRule{lhs, rhs});
      }
      d.value = r;
    } else if (kw == "recursive") {
      RecursiveDecl r;
      do {
        Token ptok = peek();
        std::string name = expect_name("a predicate name");
        if (accept("(")) {
          std::vector<TermType> arity;
          while (!at(")")) {
            arity.push_back(parse_type());
            if (!accept(",")) break;
          }
          expect(")");
          located(ptok, [&] {
            if (sig_.declares(name)) fail(ErrorKind::Syntax, name + " declared twice");
            sig_.add_predicate(name, TermType::arrows(arity, TermType::prop()));
            return 0;
          });
          r.declared.emplace_back(name, arity);
        } else if (sig_.predicate_arity(name) == nullptr) {
          error_at(ptok, name + " needs its argument types");
        }
        r.preds.push_back(name);
      } while (accept("and"));
      r.order.precedence = r.preds;
      expect("by");
      expect("lex");
      expect("(");
      while (!at(")")) {
        std::string cmp = expect_ident("subterm or subtermeq");
        if (cmp != "subterm" && cmp != "subtermeq") error("expected subterm or subtermeq");
        Token ntok = peek();
        std::string num = expect_ident("an argument position");
        std::size_t pos = 0;
        try {
          pos = std::stoul(num);
        } catch (const std::exception&) {
          error_at(ntok, "expected an argument position");
        }
        r.order.measures.push_back(
            {pos, cmp == "subterm" ? Comparison::StrictSubterm : Comparison::EqualOrSubterm});
        if (!accept(",")) break;
      }
      expect(")");
      expect("{");
      while (!at("}")) {
        ScopeMark mark(*this);
        std::vector<Term> vars = parse_rule_vars();
        for (const Term& v : vars) term_scope_.push_back(v);
        Token rtok = peek();
        AtomRule rule = parse_atom_rule();
        if (std::find(r.preds.begin(), r.preds.end(), rule.pred) == r.preds.end())
          error_at(rtok, rule.pred + " is not defined by this block");
        r.rule_vars.push_back(vars);
        r.rules.push_back(rule);
        if (!accept(";")) break;
      }
      expect("}");
      d.value = r;
    } else if (kw == "define") {
      std::string name = expect_name("a definition name");
      if (defines_.count(name) || sig_.declares(name)) error_at(tok, name + " declared twice");
      expect(":=");
      Definition value = parse_definition_body();
      defines_.emplace(name, value);
      d.value = DefineDecl{name, value};
    } else if (kw == "theorem") {
      std::string name = expect_proof_name("a theorem name");
      if (theorems_.count(name)) error_at(tok, "theorem " + name + " declared twice");
      expect(":");
      Formula statement = parse_formula();
      expect("proof");
      ProofTerm proof = parse_proof();
      expect("end");
      theorems_.insert(name);
      d.value = TheoremDecl{name, statement, proof};
    } else if (kw == "assume") {
      std::string what = expect_ident("confluent or terminating");
      if (what != "confluent" && what != "terminating") error("expected confluent or terminating");
      d.value = AssumeDecl{what == "confluent"};
    } else {
      error_at(tok, "unknown declaration " + kw);
    }
    return d;
  }

  Definition parse_definition_body() {
    if (at("\\")) return parse_predicate();
    if (at("mu") || at("nu")) {
      std::size_t save = pos_;
      bool mu = next().text == "mu";
      PredOperator op = parse_op_body();
      if (!op.params.empty() && !term_atom_start() && !at("/\\") && !at("\\/") && !at("=>"))
        return mu ? Predicate::of_mu(op) : Predicate::of_nu(op);
      pos_ = save;
    }
    return parse_formula();
  }

  std::vector<Token> toks_;
  std::string path_;
  std::size_t pos_ = 0;

  std::vector<Term> term_scope_;
  std::vector<PredVar> pred_scope_;
  std::vector<std::string> proof_scope_;

  Signature sig_;
  RewriteSystem rs_;
  std::map<std::string, Definition> defines_;
  std::set<std::string> theorems_;
};

// ---------------------------------------------------------------------------
// Printing

std::string vars_str(const std::vector<Term>& vars) {
  if (vars.empty()) return "";
  std::string out = "[";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += " ";
    out += vars[i].name() + ":" + vars[i].type().str();
  }
  return out + "] ";
}

std::string atom_rule_str(const AtomRule& r, const Signature& sig) {
  return to_string(Formula::atom(r.pred, r.args), &sig) + " ~> " + to_string(r.rhs, &sig);
}

}  // namespace

TheoryFile parse_theory(const std::string& text, const std::string& path) {
  Parser p(lex(text, path), path);
  return p.parse_file();
}

TheoryFile parse_theory_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str(), path);
}

std::string print_theory(const TheoryFile& f) {
  std::ostringstream os;
  const Signature* sig = &f.sig;
  for (const Decl& d : f.decls) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, SortDecl>) {
            os << "sort " << v.name << "\n";
          } else if constexpr (std::is_same_v<T, ConstDecl>) {
            os << "const " << v.name << " : " << v.type.str();
            if (!v.infix.empty()) os << " infix " << v.infix;
            os << "\n";
          } else if constexpr (std::is_same_v<T, PredDecl>) {
            os << "pred " << v.name << " : " << v.type.str() << "\n";
          } else if constexpr (std::is_same_v<T, RewriteDecl>) {
            os << "rewrite " << vars_str(v.vars);
            if (const auto* tr = std::get_if<TermRule>(&v.rule))
              os << to_string(tr->lhs, sig) << " ~> " << to_string(tr->rhs, sig);
            else
              os << atom_rule_str(std::get<AtomRule>(v.rule), f.sig);
            os << "\n";
          } else if constexpr (std::is_same_v<T, RecursiveDecl>) {
            os << "recursive ";
            for (std::size_t i = 0; i < v.preds.size(); ++i) {
              if (i) os << " and ";
              os << v.preds[i];
              for (const auto& [name, arity] : v.declared) {
                if (name != v.preds[i]) continue;
                os << " (";
                for (std::size_t k = 0; k < arity.size(); ++k) os << (k ? ", " : "") << arity[k].str();
                os << ")";
              }
            }
            os << " by lex(";
            for (std::size_t i = 0; i < v.order.measures.size(); ++i) {
              const Measure& m = v.order.measures[i];
              os << (i ? ", " : "") << (m.cmp == Comparison::StrictSubterm ? "subterm " : "subtermeq ")
                 << m.position;
            }
            os << ") {\n";
            for (std::size_t i = 0; i < v.rules.size(); ++i)
              os << "  " << vars_str(v.rule_vars[i]) << atom_rule_str(v.rules[i], f.sig) << ";\n";
            os << "}\n";
          } else if constexpr (std::is_same_v<T, DefineDecl>) {
            os << "define " << v.name << " := ";
            if (const auto* fm = std::get_if<Formula>(&v.value))
              os << to_string(*fm, sig);
            else
              os << to_string(std::get<Predicate>(v.value), sig);
            os << "\n";
          } else if constexpr (std::is_same_v<T, TheoremDecl>) {
            os << "theorem " << v.name << " : " << to_string(v.statement, sig) << "\nproof\n  "
               << to_string(v.proof, sig) << "\nend\n";
          } else if constexpr (std::is_same_v<T, AssumeDecl>) {
            os << "assume " << (v.confluent ? "confluent" : "terminating") << "\n";
          }
        },
        d.value);
  }
  return os.str();
}

namespace {

bool terms_alpha(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!alpha_eq(a[i], b[i])) return false;
  return true;
}

bool atom_rule_eq(const AtomRule& a, const AtomRule& b) {
  return a.pred == b.pred && terms_alpha(a.args, b.args) && alpha_eq(a.rhs, b.rhs);
}

bool decl_eq(const Decl& a, const Decl& b) {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, SortDecl>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, ConstDecl>) {
          return x.name == y.name && x.type == y.type && x.infix == y.infix;
        } else if constexpr (std::is_same_v<T, PredDecl>) {
          return x.name == y.name && x.type == y.type;
        } else if constexpr (std::is_same_v<T, RewriteDecl>) {
          if (x.rule.index() != y.rule.index()) return false;
          if (const auto* tr = std::get_if<TermRule>(&x.rule)) {
            const auto& ur = std::get<TermRule>(y.rule);
            return alpha_eq(tr->lhs, ur.lhs) && alpha_eq(tr->rhs, ur.rhs);
          }
          return atom_rule_eq(std::get<AtomRule>(x.rule), std::get<AtomRule>(y.rule));
        } else if constexpr (std::is_same_v<T, RecursiveDecl>) {
          if (x.preds != y.preds || x.rules.size() != y.rules.size() ||
              x.order.measures.size() != y.order.measures.size())
            return false;
          for (std::size_t i = 0; i < x.order.measures.size(); ++i)
            if (x.order.measures[i].position != y.order.measures[i].position ||
                x.order.measures[i].cmp != y.order.measures[i].cmp)
              return false;
          for (std::size_t i = 0; i < x.rules.size(); ++i)
            if (!atom_rule_eq(x.rules[i], y.rules[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, DefineDecl>) {
          if (x.name != y.name || x.value.index() != y.value.index()) return false;
          if (const auto* fm = std::get_if<Formula>(&x.value))
            return alpha_eq(*fm, std::get<Formula>(y.value));
          return alpha_eq(std::get<Predicate>(x.value), std::get<Predicate>(y.value));
        } else if constexpr (std::is_same_v<T, TheoremDecl>) {
          return x.name == y.name && alpha_eq(x.statement, y.statement) &&
                 alpha_eq(x.proof, y.proof);
        } else {
          return x.confluent == y.confluent;
        }
      },
      a.value);
}

}  // namespace

bool alpha_eq(const TheoryFile& a, const TheoryFile& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (!decl_eq(a.decls[i], b.decls[i])) return false;
  return true;
}

}  // namespace munj
