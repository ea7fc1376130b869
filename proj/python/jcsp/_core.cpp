#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jcsp/consistency.hpp"
#include "jcsp/errors.hpp"
#include "jcsp/generate.hpp"
#include "jcsp/io.hpp"
#include "jcsp/solver.hpp"
#include "jcsp/suites.hpp"

namespace py = pybind11;
using namespace jcsp;

namespace {

py::dict outcome_dict(const SolveOutcome& out) {
  py::dict d;
  d["satisfiable"] = out.satisfiable();
  d["assignment"] = out.satisfiable() ? py::cast(out.assignment()) : py::none();
  py::dict stats;
  stats["k"] = out.stats.k;
  stats["minimalizations"] = out.stats.minimalizations;
  stats["ideal_reductions"] = out.stats.ideal_reductions;
  stats["quotient_reductions"] = out.stats.quotient_reductions;
  stats["base_cases"] = out.stats.base_cases;
  stats["max_depth"] = out.stats.max_depth;
  d["stats"] = stats;
  d["diagnostics"] = out.diagnostics;
  return d;
}

Instance make_instance(const Algebra& alg, std::size_t num_vars,
                       const std::vector<std::pair<std::vector<std::size_t>, std::vector<Tuple>>>& constraints) {
  Instance inst;
  inst.domains.assign(num_vars, alg);
  for (const auto& [scope, tuples] : constraints) {
    for (auto v : scope) {
      if (v >= num_vars) fail(ErrorKind::InvalidArgument, "scope variable out of range");
    }
    inst.constraints.push_back(normalize_constraint(scope, inst.scope_sizes(scope), tuples));
  }
  validate(inst, true);
  return inst;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decision procedure for CSPs over CD(3) algebras";

  // Messages start with the error kind, e.g. "NotCd3: ...".
  py::register_exception<Error>(m, "JcspError", PyExc_ValueError);

  py::class_<Algebra>(m, "Algebra")
      .def_static("from_json", [](const std::string& text) { return algebra_from_text(text); })
      .def("to_json", [](const Algebra& a) { return algebra_to_text(a); })
      .def_property_readonly("size", &Algebra::size)
      .def("op", [](const Algebra& a, const std::string& name, std::vector<Element> args) { return a.op(name)(args); })
      .def("check_cd3",
           [](const Algebra& a) {
             std::vector<std::pair<std::string, std::array<Element, 3>>> out;
             for (const auto& f : check_cd3(a).failures) out.emplace_back(f.identity, f.witness);
             return out;
           },
           "Failed identities with a witness; empty when the algebra is CD(3)")
      .def("is_simple", [](const Algebra& a) { return is_simple(a); })
      .def("is_jonsson_trivial", [](const Algebra& a) { return is_jonsson_trivial(a); })
      .def("__eq__", [](const Algebra& a, const Algebra& b) { return a == b; })
      .def("__repr__", [](const Algebra& a) { return "<Algebra size=" + std::to_string(a.size()) + ">"; });

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("algebra"), py::arg("num_vars"), py::arg("constraints"),
           "All variables over one algebra; constraints are (scope, tuples) pairs")
      .def_static("from_json", [](const std::string& text) { return instance_from_text(text); })
      .def("to_json", [](const Instance& i) { return instance_to_text(i); })
      .def_property_readonly("num_vars", &Instance::num_vars)
      .def("satisfies", [](const Instance& i, std::vector<Element> a) {
        if (a.size() != i.num_vars()) fail(ErrorKind::InvalidArgument, "assignment length differs from num_vars");
        return satisfies(i, a);
      })
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

  m.def("maj2", &jcsp::maj2);
  m.def("dd2", &jcsp::dd2);
  m.def("gen_algebra", [](std::size_t size, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.domain_size = size;
    return gen_cd3_algebra(cfg);
  }, py::arg("size"), py::arg("seed"));
  m.def("gen_instance",
        [](const Algebra& alg, std::size_t vars, std::size_t constraints, std::size_t arity, std::uint64_t seed) {
          GeneratorConfig cfg;
          cfg.seed = seed;
          cfg.domain_size = alg.size();
          cfg.num_vars = vars;
          cfg.num_constraints = constraints;
          cfg.max_arity = arity;
          return gen_instance(alg, cfg);
        },
        py::arg("algebra"), py::arg("vars"), py::arg("constraints"), py::arg("arity"), py::arg("seed"));

  m.def("solve",
        [](const Instance& inst, std::optional<std::size_t> k, const std::string& mode) {
          SolveOptions opts;
          opts.k = k;
          if (mode != "global" && mode != "local") fail(ErrorKind::InvalidArgument, "mode must be 'global' or 'local'");
          opts.mode = mode == "local" ? IdealMode::Local : IdealMode::Global;
          SolveOutcome out;
          {
            py::gil_scoped_release release;
            out = solve(inst, opts);
          }
          return outcome_dict(out);
        },
        py::arg("instance"), py::arg("k") = py::none(), py::arg("mode") = "global");
  m.def("brute_force", [](const Instance& inst) -> std::optional<std::vector<Element>> {
    const auto out = brute_force_solve(inst);
    if (!out.satisfiable()) return std::nullopt;
    return out.assignment();
  });
  m.def("k_minimalize",
        [](const Instance& inst, std::size_t k) -> std::optional<Instance> {
          const auto mi = k_minimalize(inst, k);
          if (mi.empty) return std::nullopt;
          return to_instance(mi);
        },
        py::arg("instance"), py::arg("k"), "The k-minimal instance, or None when a relation empties");

  m.def("suite_names", &suite_names);
  m.def("run_suite",
        [](const std::string& name, std::size_t trials, std::uint64_t seed) {
          SuiteReport r;
          {
            py::gil_scoped_release release;
            r = run_suite(name, trials, seed);
          }
          py::dict d;
          d["name"] = r.name;
          d["trials"] = r.trials;
          d["checks"] = r.checks;
          d["violations"] = r.violations;
          d["notes"] = r.notes;
          return d;
        },
        py::arg("name"), py::arg("trials") = 100, py::arg("seed") = 1);
}
