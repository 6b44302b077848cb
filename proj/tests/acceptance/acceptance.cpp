// One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

#include <chrono>
#include <functional>
#include <iostream>

#include "properties.hpp"

using namespace munj::testing;

int main(int argc, char** argv) {
  std::string data_dir = MUNJ_TEST_DATA_DIR;
  if (argc > 1) data_dir = argv[1];

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "one-step arithmetic modulo rewriting", criterion_one_step_arith},
      {2, "derived nat rules and induction instance", criterion_nat_rules},
      {3, "closed-world equality and suspended substitution", criterion_closed_world},
      {4, "subject reduction over the corpus", criterion_subject_reduction},
      {5, "normalization within fuel, scanner, baselines",
       [&] { return criterion_normalization_baselines(data_dir + "/baselines/steps.txt"); }},
      {6, "functoriality terms check", criterion_functoriality},
      {7, "mu redex on the numeral 2 against the oracle",
       [&] { return criterion_delta_mu(data_dir + "/oracles"); }},
      {8, "recursive definition admission", criterion_recdefs},
      {9, "unification against brute force", criterion_unification_oracle},
      {10, "substitution properties, 1000 trials each", [] { return criterion_substitution_properties(1000); }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("uncaught: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " ("
              << secs << " s)";
    if (!o.detail.empty()) std::cout << " -- " << o.detail;
    std::cout << std::endl;
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
