// Command-line front end: file conversion, generators, the solver, the oracle
// and the property suites.
//
// Exit codes: 0 success / SAT / agreement, 10 UNSAT or empty, 2 input error,
// 3 lemma violation, 1 check failed (check-algebra, compare).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jcsp/errors.hpp"
#include "jcsp/generate.hpp"
#include "jcsp/io.hpp"
#include "jcsp/solver.hpp"
#include "jcsp/suites.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;
constexpr int kLemma = 3;
constexpr int kUnsat = 10;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    jcsp::write_file(path, text);
  }
}

void print_assignment(const std::vector<jcsp::Element>& a) {
  std::cout << "SAT";
  for (auto e : a) std::cout << ' ' << e;
  std::cout << '\n';
}

std::string show_scope(const jcsp::Scope& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

int report(const jcsp::SolveOutcome& out) {
  if (!out.satisfiable()) {
    std::cout << "UNSAT\n";
    const auto& cert = std::get<jcsp::NoSolution>(out.result).certificate;
    if (cert) {
      std::cerr << "emptied: " << (cert->constraint ? "constraint " + std::to_string(*cert->constraint) + " on " : "")
                << show_scope(cert->scope) << '\n';
    }
    return kUnsat;
  }
  print_assignment(out.assignment());
  for (const auto& d : out.diagnostics) std::cerr << "LemmaViolation: " << d << '\n';
  return out.diagnostics.empty() ? kOk : kLemma;
}

int print_suite(const jcsp::SuiteReport& r) {
  for (const auto& n : r.notes) std::cout << n << '\n';
  return r.ok() ? kOk : kLemma;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure and tooling for CSPs over CD(3) algebras"};
  app.require_subcommand(1);
  int status = kOk;

  // check-algebra
  std::string algebra_path;
  auto* check = app.add_subcommand("check-algebra", "Check the CD(3) identities of an algebra file");
  check->add_option("file", algebra_path, "algebra file")->required();
  check->callback([&] {
    const auto report = jcsp::check_cd3(jcsp::load_algebra(algebra_path));
    if (report.ok) {
      std::cout << "ok\n";
      return;
    }
    for (const auto& f : report.failures) {
      std::cout << "FAIL " << f.identity << " at (" << f.witness[0] << ',' << f.witness[1] << ',' << f.witness[2]
                << ")\n";
    }
    status = kFailed;
  });

  // gen-algebra
  std::size_t size = 2;
  std::uint64_t seed = 0;
  std::string out_path;
  auto* gen_alg = app.add_subcommand("gen-algebra", "Generate a random CD(3) algebra");
  gen_alg->add_option("--size", size, "universe size (1..6)")->required();
  gen_alg->add_option("--seed", seed, "generator seed")->required();
  gen_alg->add_option("-o,--output", out_path, "output file (default stdout)");
  gen_alg->callback([&] {
    jcsp::GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.domain_size = size;
    const jcsp::FileStamp stamp{std::string(jcsp::Rng::kAlgorithm), seed, {{"size", size}}};
    emit(out_path, jcsp::algebra_to_text(jcsp::gen_cd3_algebra(cfg), stamp));
  });

  // gen-instance
  jcsp::GeneratorConfig icfg;
  auto* gen_inst = app.add_subcommand("gen-instance", "Generate a random instance over one algebra");
  gen_inst->add_option("--algebra", algebra_path, "algebra file")->required();
  gen_inst->add_option("--vars", icfg.num_vars, "number of variables")->required();
  gen_inst->add_option("--constraints", icfg.num_constraints, "number of constraints")->required();
  gen_inst->add_option("--arity", icfg.max_arity, "maximum constraint arity")->required();
  gen_inst->add_option("--min-arity", icfg.min_arity, "minimum constraint arity");
  gen_inst->add_option("--seed-count", icfg.subpower_seed_count, "tuples generating each relation");
  gen_inst->add_option("--seed", seed, "generator seed")->required();
  gen_inst->add_option("-o,--output", out_path, "output file (default stdout)");
  gen_inst->callback([&] {
    icfg.seed = seed;
    const auto alg = jcsp::load_algebra(algebra_path);
    icfg.domain_size = alg.size();
    const jcsp::FileStamp stamp{std::string(jcsp::Rng::kAlgorithm),
                                seed,
                                {{"vars", icfg.num_vars},
                                 {"constraints", icfg.num_constraints},
                                 {"min_arity", icfg.min_arity},
                                 {"max_arity", icfg.max_arity},
                                 {"seed_count", icfg.subpower_seed_count}}};
    emit(out_path, jcsp::instance_to_text(jcsp::gen_instance(alg, icfg), stamp));
  });

  // minimalize
  std::string instance_path;
  std::size_t k = 3;
  auto* mini = app.add_subcommand("minimalize", "Write the k-minimal instance (input constraints plus k-system)");
  mini->add_option("instance", instance_path, "instance file")->required();
  mini->add_option("--k", k, "consistency level")->required();
  mini->add_option("-o,--output", out_path, "output file (default stdout)");
  mini->callback([&] {
    const auto mi = jcsp::k_minimalize(jcsp::load_instance(instance_path), k);
    emit(out_path, jcsp::instance_to_text(jcsp::to_instance(mi)));
    if (mi.empty) {
      std::cerr << "empty relation on " << show_scope(mi.certificate->scope) << '\n';
      status = kUnsat;
    }
  });

  // solve
  std::optional<std::size_t> solve_k;
  std::string mode = "global";
  bool stats = false;
  auto* solve = app.add_subcommand("solve", "Decide an instance and print a solution");
  solve->add_option("instance", instance_path, "instance file")->required();
  solve->add_option("--k", solve_k, "consistency level (default chosen from the instance)");
  solve->add_option("--mode", mode, "ideal reduction mode")->check(CLI::IsMember({"local", "global"}));
  solve->add_flag("--stats", stats, "print pipeline counters to stderr");
  solve->callback([&] {
    jcsp::SolveOptions opts;
    opts.k = solve_k;
    opts.mode = mode == "local" ? jcsp::IdealMode::Local : jcsp::IdealMode::Global;
    const auto out = jcsp::solve(jcsp::load_instance(instance_path), opts);
    if (stats) {
      const auto& s = out.stats;
      std::cerr << "k=" << s.k << " minimalizations=" << s.minimalizations << " ideal=" << s.ideal_reductions
                << " quotient=" << s.quotient_reductions << " base=" << s.base_cases << " exact=" << s.exact_decisions
                << " depth=" << s.max_depth << '\n';
    }
    status = report(out);
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Decide an instance by backtracking");
  oracle->add_option("instance", instance_path, "instance file")->required();
  oracle->callback([&] { status = report(jcsp::brute_force_solve(jcsp::load_instance(instance_path))); });

  // compare
  jcsp::CompareConfig ccfg;
  auto* compare = app.add_subcommand("compare", "Run the solver against the oracle on generated instances");
  compare->add_option("--trials", ccfg.trials, "number of instances");
  compare->add_option("--seed", ccfg.seed, "run seed");
  compare->add_option("--size", ccfg.size, "algebra size (0: 2 or 3 per algebra)");
  compare->add_option("--algebras", ccfg.algebras, "distinct algebras");
  compare->add_option("--vars", ccfg.max_vars, "maximum variables");
  compare->add_option("--constraints", ccfg.max_constraints, "maximum constraints");
  compare->add_option("--arity", ccfg.max_arity, "maximum arity");
  compare->add_option("--seed-count", ccfg.max_seed_count, "maximum generating tuples per relation");
  compare->callback([&] {
    std::vector<jcsp::TrialVerdict> verdicts;
    const auto r = jcsp::compare_suite(ccfg, &verdicts);
    for (const auto& v : verdicts) {
      std::cout << "trial " << v.trial << ": solver " << (v.solver_sat ? "SAT" : "UNSAT") << ", oracle "
                << (v.oracle_sat ? "SAT" : "UNSAT") << (v.agree ? " agree" : " DISAGREE");
      if (!v.error.empty()) std::cout << " [" << v.error << ']';
      std::cout << '\n';
    }
    std::cout << r.notes.front() << '\n';
    status = r.ok() ? kOk : kFailed;
  });

  // lemma-suite
  std::string which;
  std::size_t trials = 100;
  auto* suite = app.add_subcommand("lemma-suite", "Run a randomized property suite");
  suite->add_option("--which", which, "suite name")->required()->check(CLI::IsMember(jcsp::suite_names()));
  suite->add_option("--trials", trials, "trials (seeds for congruence and connected-simple)");
  suite->add_option("--seed", seed, "run seed");
  suite->callback([&] { status = print_suite(jcsp::run_suite(which, trials, seed)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  } catch (const jcsp::Error& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == jcsp::ErrorKind::LemmaViolation ? kLemma : kInputError;
  }
  return status;
}
