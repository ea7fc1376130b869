// Acceptance run: one PASS/FAIL line per criterion. A criterion passes when its
// suite reports no violations, examined at least the required number of
// objects, and finished inside its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "jcsp/io.hpp"
#include "jcsp/suites.hpp"

namespace {

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::size_t min_trials;
  std::function<jcsp::SuiteReport()> run;
  // Extra coverage condition; returns an empty string when satisfied.
  std::function<std::string()> coverage = [] { return std::string(); };
};

jcsp::CompareConfig instance_corpus() {
  jcsp::CompareConfig cfg;
  cfg.trials = 3000;
  cfg.seed = 2024;
  cfg.algebras = 150;
  cfg.max_vars = 6;
  cfg.max_constraints = 6;
  cfg.max_arity = 3;
  return cfg;
}

std::string distinct_algebras(const jcsp::CompareConfig& cfg, std::size_t need) {
  std::set<std::string> seen;
  for (std::size_t t = 0; t < cfg.algebras && t < cfg.trials; ++t) {
    seen.insert(jcsp::algebra_to_text(jcsp::compare_instance(cfg, t).domains.front()));
  }
  if (seen.size() >= need) return {};
  return "only " + std::to_string(seen.size()) + " distinct algebras";
}

}  // namespace

int main() {
  const auto corpus = instance_corpus();
  const std::vector<Criterion> criteria = {
      {1, "width: 3-minimal nonempty implies satisfiable", 60, 500, [&] { return jcsp::width_suite(corpus); },
       [&] { return distinct_algebras(corpus, 50); }},
      {2, "solve agrees with brute force", 120, 500, [&] { return jcsp::compare_suite(corpus); }},
      {3, "2-SAT over MAJ2", 10, 100, [] { return jcsp::two_sat_suite(100, 3); }},
      {4, "binary relations over simple Jonsson-trivial A", 60, 20,
       [] { return jcsp::connected_simple_suite(40, 4); }},
      {5, "distance inequality", 30, 200, [] { return jcsp::distance_suite(1000, 5); }},
      {6, "Lambda_J on 3-minimal systems", 60, 100, [] { return jcsp::gamma_j_suite(500, 6); }},
      {7, "R_J on 4-minimal instances", 60, 50, [] { return jcsp::rj_suite(200, 7); }},
      {8, "quotient pullback on direct squares", 30, 50, [] { return jcsp::pullback_suite(400, 8); }},
      {9, "almost-trivial decomposition", 60, 50, [] { return jcsp::almost_trivial_suite(400, 9); }},
      {10, "congruences against partition enumeration", 30, 20, [] { return jcsp::congruence_suite(40, 10); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    jcsp::SuiteReport r;
    std::string problem;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      problem = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (problem.empty() && !r.ok()) problem = std::to_string(r.violations) + " violations";
    if (problem.empty() && r.trials < c.min_trials) {
      problem = std::to_string(r.trials) + " trials, need " + std::to_string(c.min_trials);
    }
    if (problem.empty()) problem = c.coverage();
    if (problem.empty() && secs >= c.limit_s) problem = "over the time limit";
    const bool pass = problem.empty();
    failed += pass ? 0 : 1;
    std::printf("%s [%d] %s (%.2fs, limit %.0fs)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, secs, c.limit_s,
                pass ? "" : ": ", problem.c_str());
    for (const auto& n : r.notes) std::printf("    %s\n", n.c_str());
  }
  return failed == 0 ? 0 : 1;
}
