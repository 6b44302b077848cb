#include "munj/cli.hpp"

#include <CLI11.hpp>
#include <ostream>
#include <set>

#include "munj/checker.hpp"
#include "munj/normalizer.hpp"
#include "munj/recdefs.hpp"

namespace munj {

const CheckedTheorem* Session::find(const std::string& name) const {
  for (const CheckedTheorem& t : theorems)
    if (t.name == name) return &t;
  return nullptr;
}

namespace {

std::string where(const TheoryFile& file, const Decl& d) {
  return file.path + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.col);
}

void report_admission(Session& s, const AdmissionReport& rep, const std::string& loc,
                      const std::string& what, std::ostream& err) {
  for (const auto& w : rep.warnings) err << loc << ": warning: " << w << "\n";
  if (rep.ok()) {
    ++s.admitted;
    return;
  }
  ++s.errors;
  err << loc << ": error: " << what << " rejected\n";
  for (const auto& v : rep.violations) err << "  " << v << "\n";
}

// Replaces references to earlier theorems by their closed proofs, also inside
// equality branches, where a closed proof cannot capture anything.
ProofTerm inline_theorems(const ProofTerm& p, const Session& s, const std::set<std::string>& bound) {
  using K = ProofTerm::Kind;
  if (p.is(K::Var)) {
    if (bound.count(p.name())) return p;
    const CheckedTheorem* t = s.find(p.name());
    if (t == nullptr) fail(ErrorKind::Check, "depends on theorem " + p.name() + ", which did not check");
    return t->proof;
  }
  auto under = [&](const std::string& name) {
    std::set<std::string> inner = bound;
    inner.insert(name);
    return inner;
  };
  if (p.is(K::EqElim)) {
    EqElimData d = p.eq();
    ProofSubst sigma;
    for (const auto& [name, value] : d.sigma) sigma.bind(name, inline_theorems(value, s, bound));
    d.sigma = sigma;
    d.major = inline_theorems(d.major, s, bound);
    std::set<std::string> hyps = d.ctx.names();
    for (EqBranch& b : d.branches) b.proof = inline_theorems(b.proof, s, hyps);
    return ProofTerm::eq_elim(d);
  }
  std::vector<ProofTerm> subs = p.subs();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    std::set<std::string> scope = bound;
    if (p.is(K::Lam) || (i == 1 && (p.is(K::Destruct) || p.is(K::MuElim) || p.is(K::NuIntro))))
      scope = under(p.name());
    else if (p.is(K::Case) && i == 1)
      scope = under(p.name());
    else if (p.is(K::Case) && i == 2)
      scope = under(p.name2());
    subs[i] = inline_theorems(subs[i], s, scope);
  }
  return subs.empty() ? p : rebuild(p, subs);
}

}  // namespace

Session process_theory(const TheoryFile& file, const SessionOptions& opts, std::ostream& err) {
  Session s;
  s.sig = file.sig;
  s.rs.fuel = opts.rewrite_fuel;
  for (const Decl& d : file.decls) {
    std::string loc = where(file, d);
    try {
      if (const auto* r = std::get_if<RewriteDecl>(&d.value)) {
        if (const auto* tr = std::get_if<TermRule>(&r->rule)) {
          RewriteSystem probe;
          probe.term_rules.push_back(*tr);
          auto msgs = validate_system(s.sig, probe);
          if (msgs.empty()) {
            s.rs.term_rules.push_back(*tr);
          } else {
            ++s.errors;
            for (const auto& m : msgs) err << loc << ": error: " << m << "\n";
          }
        } else {
          const AtomRule& ar = std::get<AtomRule>(r->rule);
          AdmissionReport rep = admit(s.sig, s.rs, {ar}, OrderSpec{{}, {ar.pred}}, &s.log);
          report_admission(s, rep, loc, "atom rule for " + ar.pred, err);
        }
      } else if (const auto* rec = std::get_if<RecursiveDecl>(&d.value)) {
        AdmissionReport rep = admit(s.sig, s.rs, rec->rules, rec->order, &s.log);
        std::string names;
        for (const auto& p : rec->preds) names += (names.empty() ? "" : " and ") + p;
        report_admission(s, rep, loc, "recursive definition of " + names, err);
      } else if (const auto* def = std::get_if<DefineDecl>(&d.value)) {
        if (const auto* f = std::get_if<Formula>(&def->value))
          check_formula(s.sig, *f);
        else
          check_predicate(s.sig, std::get<Predicate>(def->value));
      } else if (const auto* thm = std::get_if<TheoremDecl>(&d.value)) {
        if (!opts.check_theorems) continue;
        check_formula(s.sig, thm->statement);
        VarSet fv = free_vars(thm->statement);
        if (!fv.empty())
          fail(ErrorKind::Check, "statement has free variable " + fv.begin()->first);
        ProofTerm closed = inline_theorems(thm->proof, s, {});
        ProofTerm elaborated = check_proof(s.sig, s.rs, Context{}, closed, thm->statement, &s.log);
        s.theorems.push_back({thm->name, thm->statement, elaborated});
      } else if (const auto* as = std::get_if<AssumeDecl>(&d.value)) {
        (as->confluent ? s.rs.confluent : s.rs.terminating) = true;
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Fuel)
        ++s.resource_errors;
      else
        ++s.errors;
      std::string what;
      if (const auto* thm = std::get_if<TheoremDecl>(&d.value)) what = " in theorem " + thm->name;
      if (const auto* def = std::get_if<DefineDecl>(&d.value)) what = " in definition " + def->name;
      err << loc << ": " << to_string(e.kind()) << " error" << what << ": " << e.what() << "\n";
    }
  }
  record_system_assumptions(s.rs, s.log);
  return s;
}

namespace {

struct Totals {
  std::size_t theorems = 0;
  std::size_t admitted = 0;
  std::size_t errors = 0;
  bool resource = false;
};

int finish(const Totals& t, std::ostream& out) {
  if (t.errors == 0 && !t.resource) {
    out << "RESULT ok theorems=" << t.theorems << " admitted=" << t.admitted << "\n";
    return 0;
  }
  out << "RESULT fail theorems=" << t.theorems << " admitted=" << t.admitted
      << " errors=" << t.errors << "\n";
  return t.resource ? 2 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"munj: proof checker and normalizer for natural deduction modulo rewriting"};
  app.require_subcommand(1);

  std::size_t fuel = kDefaultProofFuel;
  bool debug_sr = false;
  bool trust_report = false;
  app.add_option("--fuel", fuel, "Step budget for rewriting and proof reduction")
      ->default_val(kDefaultProofFuel)
      ->check(CLI::PositiveNumber);
  app.add_flag("--debug-subject-reduction", debug_sr, "Re-check every reduct at the theorem's type");
  app.add_flag("--trust-report", trust_report, "Print every trusted assumption");

  std::vector<std::string> check_files;
  auto* check = app.add_subcommand("check", "Validate rules, admit definitions, check theorems");
  check->add_option("files", check_files, "Theory files")->required()->check(CLI::ExistingFile);
  check->fallthrough();

  std::string norm_file;
  std::string theorem;
  bool trace = false;
  auto* norm = app.add_subcommand("normalize", "Normalize checked theorem proofs");
  norm->add_option("file", norm_file, "Theory file")->required()->check(CLI::ExistingFile);
  norm->add_option("--theorem", theorem, "Theorem to normalize (default: all)");
  norm->add_flag("--trace", trace, "Print one line per reduction step");
  norm->fallthrough();

  std::vector<std::string> admit_files;
  auto* adm = app.add_subcommand("admit", "Run only the recursive-definition checks");
  adm->add_option("files", admit_files, "Theory files")->required()->check(CLI::ExistingFile);
  adm->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  SessionOptions sopts;
  sopts.rewrite_fuel = fuel;
  sopts.check_theorems = !adm->parsed();
  std::vector<std::string> files = check->parsed() ? check_files
                                   : adm->parsed() ? admit_files
                                                   : std::vector<std::string>{norm_file};
  Totals totals;
  TrustLog trust;
  for (const std::string& path : files) {
    TheoryFile file;
    try {
      file = parse_theory_file(path);
    } catch (const Error& e) {
      err << e.what() << "\n";
      ++totals.errors;
      totals.resource = true;
      continue;
    }
    Session s = process_theory(file, sopts, err);
    totals.theorems += s.theorems.size();
    totals.admitted += s.admitted;
    totals.errors += s.errors + s.resource_errors;
    totals.resource = totals.resource || s.resource_errors > 0;
    trust.merge(s.log);

    if (!norm->parsed()) continue;
    std::vector<const CheckedTheorem*> targets;
    if (theorem.empty()) {
      for (const auto& t : s.theorems) targets.push_back(&t);
    } else if (const CheckedTheorem* t = s.find(theorem)) {
      targets.push_back(t);
    } else {
      err << path << ": no checked theorem named " << theorem << "\n";
      ++totals.errors;
    }
    for (const CheckedTheorem* t : targets) {
      NormalizeOptions nopts;
      nopts.fuel = fuel;
      nopts.debug_subject_reduction = debug_sr;
      nopts.sig = &s.sig;
      nopts.goal = t->statement;
      if (trace)
        nopts.trace = [&](std::size_t step, const ReductionStep& r, std::size_t size) {
          out << "step " << step << " " << r.rule << " " << r.path << " size=" << size << "\n";
        };
      try {
        NormalizeResult res = normalize(s.rs, t->proof, nopts);
        auto left = find_redexes(res.proof);
        if (!left.empty())
          fail(ErrorKind::Check, "normal form still has a redex at " + left.front());
        out << "theorem " << t->name << " steps " << res.steps << "\n";
        out << "normal " << to_string(res.proof, &s.sig) << "\n";
      } catch (const Error& e) {
        ++totals.errors;
        if (e.kind() == ErrorKind::Fuel) totals.resource = true;
        err << path << ": " << to_string(e.kind()) << " error in normalizing " << t->name << ": "
            << e.what() << "\n";
      }
    }
  }
  if (trust_report) out << trust.report();
  return finish(totals, out);
}

}  // namespace munj
