#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "munj/syntax.hpp"
#include "munj/trust.hpp"

namespace munj {

struct CheckedTheorem {
  std::string name;
  Formula statement;
  ProofTerm proof;  // elaborated
};

struct SessionOptions {
  std::size_t rewrite_fuel = kDefaultRewriteFuel;
  bool check_theorems = true;  // false for `admit`
};

// Outcome of processing one theory file declaration by declaration.
struct Session {
  Signature sig;
  RewriteSystem rs;
  TrustLog log;
  std::vector<CheckedTheorem> theorems;  // those that checked
  std::size_t admitted = 0;
  std::size_t errors = 0;            // logical failures
  std::size_t resource_errors = 0;   // fuel exhaustion

  const CheckedTheorem* find(const std::string& name) const;
};

// Diagnostics go to `err`, one per failing declaration.
Session process_theory(const TheoryFile& file, const SessionOptions& opts, std::ostream& err);

// The `munj` command line. Returns the exit code: 0 ok, 1 logical failure,
// 2 fuel, parse, I/O or usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace munj
