#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xoscc/distributions.hpp"
#include "xoscc/errors.hpp"
#include "xoscc/experiments.hpp"
#include "xoscc/family.hpp"
#include "xoscc/io.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/simulator.hpp"
#include "xoscc/version.hpp"
#include "xoscc/welfare.hpp"

namespace py = pybind11;
using namespace xoscc;

namespace {

std::string dump(const Json& j) { return j.dump(); }

ExperimentConfig make_config(int r, int k, double eps, std::optional<int> p, long trials, std::uint64_t seed,
                             const std::string& protocol) {
  ExperimentConfig cfg;
  cfg.r = r;
  cfg.k = k;
  cfg.eps = eps;
  cfg.p = p;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.protocol = protocol;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "xoscc core bindings; documents cross the boundary as JSON text";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<FamilyInfeasible>(m, "FamilyInfeasible", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("derive_params", [](int r, int k, double eps, std::optional<int> p) {
    const auto params = derive_params(r, k, eps, p);
    return py::dict(py::arg("r") = params.r, py::arg("k") = params.k, py::arg("eps") = params.eps,
                    py::arg("p") = params.p, py::arg("q") = params.q, py::arg("t") = params.t,
                    py::arg("l") = params.l);
  }, py::arg("r"), py::arg("k"), py::arg("eps") = 0.5, py::arg("p") = py::none());

  m.def("generate_family", [](int p, int q, int t, int l, std::uint64_t seed) {
    Params params;
    params.p = p;
    params.q = q;
    params.t = t;
    params.l = l;
    return dump(to_json(generate_family(params, seed)));
  }, py::arg("p"), py::arg("q"), py::arg("t"), py::arg("l"), py::arg("seed") = 0);

  m.def("verify_family", [](const std::string& doc) {
    return dump(to_json(verify_family(family_from_json(Json::parse(doc)))));
  }, py::arg("family"));

  m.def("sample", [](int r, int k, double eps, std::optional<int> p, std::uint64_t seed,
                     std::optional<int> force_theta) {
    const auto families = make_families(r, k, eps, p, derive_seed(seed, {tag(Stream::kFamily)}));
    return dump(to_json(sample_instance(r, k, eps, families, seed, force_theta)));
  }, py::arg("r"), py::arg("k"), py::arg("eps") = 0.5, py::arg("p") = py::none(), py::arg("seed") = 0,
     py::arg("force_theta") = py::none());

  m.def("social_welfare", [](const std::string& doc, const std::string& oracle) {
    const auto inst = read_instance_document(Json::parse(doc));
    return (oracle == "bruteforce" ? sw_bruteforce(inst) : sw_clause_union(inst)).value;
  }, py::arg("instance"), py::arg("oracle") = "clause-union");

  m.def("run", [](const std::string& protocol, const std::string& doc, std::uint64_t seed, double eps,
                  std::optional<int> p) {
    const auto inst = read_instance_document(Json::parse(doc));
    const int level = std::max(inst.level, 1);
    const ProtocolContext ctx{level, inst.k, eps, p ? *p : default_p(std::max(inst.k, 2), eps), kDefaultNodeCap};
    return dump(to_json(run(make_protocol(protocol, ctx), inst, seed)));
  }, py::arg("protocol"), py::arg("instance"), py::arg("seed") = 0, py::arg("eps") = 0.5, py::arg("p") = py::none());

  m.def("experiment", [](const std::string& name, int r, int k, double eps, std::optional<int> p, long trials,
                         std::uint64_t seed, const std::string& protocol) {
    const auto cfg = make_config(r, k, eps, p, trials, seed, protocol);
    if (name == "gap") return dump(experiment_gap(cfg).to_json());
    if (name == "distinguish") return dump(experiment_distinguish(cfg).to_json());
    if (name == "mi") return dump(experiment_mi(cfg).to_json());
    if (name == "embed") return dump(experiment_embed(cfg).to_json());
    throw InvalidArgument("unknown experiment '" + name + "'");
  }, py::arg("name"), py::arg("r") = 1, py::arg("k") = 3, py::arg("eps") = 0.5, py::arg("p") = py::none(),
     py::arg("trials") = 100, py::arg("seed") = 0, py::arg("protocol") = "full-rev");
}
