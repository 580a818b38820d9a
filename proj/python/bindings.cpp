#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trirem/errors.hpp"
#include "trirem/extgraph.hpp"
#include "trirem/harness.hpp"
#include "trirem/homcount.hpp"
#include "trirem/ladders.hpp"
#include "trirem/process.hpp"
#include "trirem/trajectory.hpp"

namespace py = pybind11;
using namespace trirem;

namespace {

py::dict snapshot_dict(const Snapshot& s) {
  py::dict d;
  d["i"] = s.i;
  d["p"] = s.p;
  d["edges"] = s.edges;
  d["Q"] = s.Q;
  d["q_rel_dev"] = s.q_rel_dev;
  d["max_y_rel_dev"] = s.max_y_rel_dev;
  d["y_min"] = s.y_min;
  d["y_max"] = s.y_max;
  d["sampled_pairs"] = s.sampled_pairs;
  d["full_scan"] = s.full_scan;
  d["tauQ"] = s.flags.tauQ;
  d["tauY"] = s.flags.tauY;
  d["tauC"] = s.flags.tauC;
  return d;
}

py::dict run_process(std::uint64_t n, std::uint64_t seed, double snapshot_dp, std::optional<double> permutation_at,
                     std::optional<double> certify_at, std::uint64_t pair_sample, double stop_below_p) {
  ProcessConfig cfg;
  cfg.seed = seed;
  cfg.snapshots.dp = snapshot_dp;
  cfg.snapshots.pair_sample = pair_sample;
  cfg.stop_below_p = stop_below_p;
  if (permutation_at) cfg.permutation_at = step_at_density(n, *permutation_at);
  if (certify_at) cfg.certify_at = step_at_density(n, *certify_at);
  RunResult r;
  {
    py::gil_scoped_release release;
    r = Process(n, cfg).run();
  }
  py::dict d;
  d["n"] = r.n;
  d["seed"] = r.seed;
  d["tau0"] = r.tau0;
  d["final_edges"] = r.final_edges;
  d["completed"] = r.completed;
  d["mode"] = mode_name(r.mode);
  py::list snaps;
  for (const auto& s : r.snapshots) snaps.append(snapshot_dict(s));
  d["snapshots"] = snaps;
  if (r.survivors) {
    py::dict s;
    s["activation_step"] = r.survivors->activation_step;
    s["x_size"] = r.survivors->x_size();
    s["y_size"] = r.survivors->y_size;
    s["certified_edges"] = r.survivors->certified_edges;
    s["disjoint_at_insertion"] = r.survivors->disjoint_at_insertion;
    d["survivors"] = s;
  } else {
    d["survivors"] = py::none();
  }
  return d;
}

Graph host_graph(Vertex n, const std::vector<std::pair<Vertex, Vertex>>& edges) { return Graph::from_edges(n, edges); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random greedy triangle removal";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceGuardError>(m, "ResourceGuardError", PyExc_MemoryError);
  py::register_exception<OverflowError>(m, "CountOverflowError", PyExc_OverflowError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  m.def("run", &run_process, py::arg("n"), py::arg("seed"), py::arg("snapshot_dp") = 0.01,
        py::arg("permutation_at") = py::none(), py::arg("certify_at") = py::none(), py::arg("pair_sample") = 0,
        py::arg("stop_below_p") = 0.0, "Run the process on K_n; activation points are edge densities.");

  m.def("edge_density", &edge_density, py::arg("n"), py::arg("i"));
  m.def("step_at_density", &step_at_density, py::arg("n"), py::arg("p"));
  m.def(
      "scales",
      [](std::uint64_t n, std::uint64_t i) {
        const auto s = scales_at(n, i);
        py::dict d;
        d["p"] = s.p;
        d["predicted_edges"] = s.predicted_edges;
        d["predicted_Q"] = s.predicted_Q;
        d["predicted_codegree"] = s.predicted_codegree;
        d["zeta"] = s.zeta;
        d["phi"] = s.phi;
        return d;
      },
      py::arg("n"), py::arg("i"));
  m.def(
      "expected_drift",
      [](Vertex n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
        const auto g = host_graph(n, edges);
        const auto r = expected_dQ(g);
        return std::pair{static_cast<std::int64_t>(r.num()), static_cast<std::int64_t>(r.den())};
      },
      py::arg("n"), py::arg("edges"), "Exact expected one-step change of the triangle count as (num, den).");

  m.def("validate_word", [](const std::string& w) { return validate_word(w); }, py::arg("word"));
  m.def("ladder_edges", [](const std::string& w) { return build_ladder(w).edges; }, py::arg("word"));
  m.def(
      "max_fan",
      [](const std::string& w) -> std::optional<std::pair<Vertex, int>> {
        const auto f = max_fan(w);
        if (!f) return std::nullopt;
        return std::pair{f->a, f->f};
      },
      py::arg("word"));
  m.def("bounded_family", &enumerate_bounded_family, py::arg("M"));
  m.def(
      "classify_edge",
      [](const std::string& w, Vertex y, Vertex z, int M) { return std::string(edge_class_name(classify_edge(w, y, z, M).cls)); },
      py::arg("word"), py::arg("y"), py::arg("z"), py::arg("M"));
  m.def("omega", [](const std::string& w, int M) { return omega(w, M); }, py::arg("word"), py::arg("M"));
  m.def(
      "backward_extension_density",
      [](const std::string& w, Vertex y, Vertex z, int M) {
        const auto b = backward_extension(w, y, z, M);
        const auto d = density(b);
        return py::make_tuple(static_cast<std::int64_t>(d.num()), static_cast<std::int64_t>(d.den()), is_balanced(b));
      },
      py::arg("word"), py::arg("y"), py::arg("z"), py::arg("M"), "(num, den, balanced) of the backward extension.");

  m.def(
      "psi_ladder",
      [](const std::string& w, Vertex u, Vertex v, Vertex n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
        return psi_ladder(w, u, v, host_graph(n, edges));
      },
      py::arg("word"), py::arg("u"), py::arg("v"), py::arg("n"), py::arg("edges"));
  m.def(
      "hom_audit_json",
      [](std::uint64_t n, int M, double p_min, std::uint64_t pairs, std::size_t max_length, std::uint64_t seed) {
        HomAuditConfig cfg;
        cfg.M = M;
        cfg.p_min = p_min;
        cfg.pair_count = pairs;
        cfg.max_word_length = max_length;
        cfg.seed = seed;
        py::gil_scoped_release release;
        return audit_report_json(hom_audit(n, cfg));
      },
      py::arg("n"), py::arg("M") = 3, py::arg("p_min") = 0.3, py::arg("pairs") = 20, py::arg("max_length") = 3,
      py::arg("seed") = 0);

  m.def(
      "fit_exponent",
      [](const std::vector<std::pair<double, double>>& points) {
        const auto f = fit_exponent(points);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["r2"] = f.r2;
        return d;
      },
      py::arg("points"), "OLS of log(mean) on log(n) for (n, mean) pairs.");
}
