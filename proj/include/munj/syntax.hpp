#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "munj/proof.hpp"
#include "munj/recdefs.hpp"
#include "munj/rewrite.hpp"

namespace munj {

struct Span {
  int line = 0;
  int col = 0;
};

struct SortDecl {
  std::string name;
};

struct ConstDecl {
  std::string name;
  TermType type;
  std::string infix;  // empty when not infix
};

struct PredDecl {
  std::string name;
  TermType type;
};

struct RewriteDecl {
  std::vector<Term> vars;
  std::variant<TermRule, AtomRule> rule;
};

struct RecursiveDecl {
  // Predicates introduced by this block; already-declared ones are omitted.
  std::vector<std::pair<std::string, std::vector<TermType>>> declared;
  std::vector<std::string> preds;
  OrderSpec order;
  std::vector<std::vector<Term>> rule_vars;
  std::vector<AtomRule> rules;
};

struct DefineDecl {
  std::string name;
  std::variant<Formula, Predicate> value;
};

struct TheoremDecl {
  std::string name;
  Formula statement;
  ProofTerm proof;
};

struct AssumeDecl {
  bool confluent;  // otherwise terminating
};

struct Decl {
  Span span;
  std::variant<SortDecl, ConstDecl, PredDecl, RewriteDecl, RecursiveDecl, DefineDecl, TheoremDecl,
               AssumeDecl>
      value;
};

struct TheoryFile {
  std::string path;
  std::vector<Decl> decls;
  // Signature after every declaration, used to print infix constants.
  Signature sig;
};

// Throws ErrorKind::Syntax with `path:line:col` on malformed input.
TheoryFile parse_theory(const std::string& text, const std::string& path = "<input>");
// Throws ErrorKind::Io when the file cannot be read.
TheoryFile parse_theory_file(const std::string& path);

std::string print_theory(const TheoryFile& f);

// Declarations pairwise α-equivalent.
bool alpha_eq(const TheoryFile& a, const TheoryFile& b);

}  // namespace munj
