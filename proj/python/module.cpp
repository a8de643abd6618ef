// Python bindings: descriptor-driven access to the forward engine, posterior
// analysis, regret bounds, and scenario generation.  Matrices cross the
// boundary as plain lists of rows.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eswitch/bounds.hpp"
#include "eswitch/descriptor.hpp"
#include "eswitch/forward.hpp"
#include "eswitch/infer.hpp"
#include "eswitch/models.hpp"
#include "eswitch/scenario.hpp"

namespace py = pybind11;
using namespace eswitch;

namespace {

LikelihoodMatrix to_matrix(const std::vector<std::vector<double>>& rows, Mode mode) {
  const LikelihoodMatrix m = LikelihoodMatrix::from_rows(rows);
  const std::string err = m.check(mode);
  if (!err.empty()) throw std::invalid_argument(err);
  return m;
}

Model make_model(const std::string& descriptor, int k,
                 const std::vector<std::vector<double>>& rows) {
  if (k <= 0) k = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  return parse_model(descriptor, k);
}

py::dict reference_dict(const ReferenceSequence& ref) {
  py::dict d;
  d["experts"] = ref.experts;
  d["m"] = ref.m;
  d["d"] = ref.d;
  d["last_switch"] = ref.last_switch;
  d["alpha_star"] = ref.alpha_star;
  return d;
}

}  // namespace

PYBIND11_MODULE(eswitch, m) {
  m.doc() = "Switching expert mixtures: forward evidence, posteriors, bounds";
  m.attr("__version__") = "0.1.0";

  py::register_exception<EvidenceCollapse>(m, "EvidenceCollapse", PyExc_ValueError);

  m.def(
      "evidence",
      [](const std::string& descriptor, const std::vector<std::vector<double>>& rows,
         int k) {
        const LikelihoodMatrix data = to_matrix(rows, Mode::predict);
        return make_model(descriptor, k, rows).evidence(data);
      },
      py::arg("model"), py::arg("data"), py::arg("k") = 0,
      "Cumulative log loss -ln Q(data) in nats.");

  m.def(
      "run",
      [](const std::string& descriptor, const std::vector<std::vector<double>>& rows,
         int k) {
        const LikelihoodMatrix data = to_matrix(rows, Mode::predict);
        const Model model = make_model(descriptor, k, rows);
        const RunResult r = model.fused ? run(*model.fused, data, true)
                                        : run(model.graph(), data, true);
        py::dict out;
        out["log_loss"] = r.log_evidence;
        out["predictions"] = r.predictions;
        return out;
      },
      py::arg("model"), py::arg("data"), py::arg("k") = 0,
      "Log loss plus the per-round predictive distributions over experts.");

  m.def(
      "invest",
      [](const std::string& descriptor, const std::vector<std::vector<double>>& rows,
         int k) {
        const LikelihoodMatrix returns = to_matrix(rows, Mode::invest);
        const Model model = make_model(descriptor, k, rows);
        const InvestResult r = model.fused ? invest(*model.fused, returns)
                                           : invest(model.graph(), returns);
        py::dict out;
        out["wealth"] = r.wealth;
        out["log_wealth"] = r.log_wealth;
        out["ruined"] = r.ruined;
        out["portfolios"] = r.portfolios;
        return out;
      },
      py::arg("model"), py::arg("returns"), py::arg("k") = 0,
      "Compound wealth under full reinvestment of the model's portfolio.");

  m.def(
      "marginals",
      [](const std::string& descriptor, const std::vector<std::vector<double>>& rows,
         int k) {
        const LikelihoodMatrix data = to_matrix(rows, Mode::predict);
        const Model model = make_model(descriptor, k, rows);
        const MarginalGrid g = marginals(model.graph(), data);
        py::dict out;
        out["rows"] = g.rows;
        out["log_loss"] = g.log_evidence;
        out["retained_prior_mass"] = g.retained_prior_mass;
        return out;
      },
      py::arg("model"), py::arg("data"), py::arg("k") = 0,
      "Smoothed per-round expert marginals given all data.");

  m.def(
      "viterbi",
      [](const std::string& descriptor, const std::vector<std::vector<double>>& rows,
         int k) {
        const LikelihoodMatrix data = to_matrix(rows, Mode::predict);
        const Model model = make_model(descriptor, k, rows);
        const StatePath p = viterbi(model.graph(), data);
        py::dict out;
        out["experts"] = p.experts;
        out["log_joint"] = p.log_joint;
        return out;
      },
      py::arg("model"), py::arg("data"), py::arg("k") = 0,
      "Most likely expert sequence and its joint log score.");

  m.def(
      "validate",
      [](const std::string& descriptor, int k, int horizon) {
        const Model model = parse_model(descriptor, k);
        std::vector<py::dict> out;
        for (const Violation& v : validate_spec(model.graph(), horizon)) {
          py::dict d;
          d["round"] = v.round;
          d["node"] = v.node;
          d["kind"] = v.kind;
          d["detail"] = v.detail;
          out.push_back(d);
        }
        return out;
      },
      py::arg("model"), py::arg("k"), py::arg("horizon") = 50,
      "Structural violations of the model's state graph (empty = valid).");

  m.def(
      "best_reference",
      [](const std::vector<std::vector<double>>& rows, int max_blocks) {
        const LikelihoodMatrix data = to_matrix(rows, Mode::predict);
        return reference_dict(best_reference(data, max_blocks));
      },
      py::arg("data"), py::arg("max_blocks"),
      "Best piecewise-constant comparator with at most max_blocks blocks.");

  m.def(
      "regret",
      [](const std::string& descriptor, const std::vector<std::vector<double>>& rows,
         const std::vector<int>& reference, int k) {
        const LikelihoodMatrix data = to_matrix(rows, Mode::predict);
        const Model model = make_model(descriptor, k, rows);
        const auto ref = ReferenceSequence::from_experts(reference);
        return empirical_regret(model.graph(), data, ref);
      },
      py::arg("model"), py::arg("data"), py::arg("reference"), py::arg("k") = 0,
      "Realized regret against a comparator expert sequence, in nats.");

  m.def("bound_fixed_share", &bound_fixed_share, py::arg("k"), py::arg("t"),
        py::arg("m"), py::arg("alpha"),
        "Regret guarantee m ln k + (t-1) H((m-1)/(t-1), alpha).");
  m.def("bound_switching_method", &bound_switching_method, py::arg("t"),
        "Overhead of the switch-count estimator vs any fixed rate.");
  m.def(
      "bound_parameter_drift",
      [](int t, int d, double alpha) {
        const DriftBound b = bound_parameter_drift(t, d, alpha);
        return py::make_tuple(b.bound, b.alpha_star);
      },
      py::arg("t"), py::arg("d"), py::arg("alpha"),
      "Drift guarantee and the rate minimizing it, as (bound, alpha_star).");
  m.def("binary_entropy", &binary_entropy, py::arg("p"));

  m.def(
      "generate_piecewise",
      [](int k, int t, const std::vector<int>& boundaries,
         const std::vector<int>& experts, double p_hi, double p_lo, uint64_t seed) {
        ScenarioConfig cfg;
        cfg.kind = ScenarioConfig::Kind::piecewise;
        cfg.k = k;
        cfg.t = t;
        cfg.boundaries = boundaries;
        cfg.experts = experts;
        cfg.p_hi = p_hi;
        cfg.p_lo = p_lo;
        cfg.seed = seed;
        const Scenario s = generate(cfg);
        py::dict out;
        std::vector<std::vector<double>> rows(s.data.t);
        for (int i = 0; i < s.data.t; ++i)
          rows[i].assign(s.data.row(i), s.data.row(i) + s.data.k);
        out["data"] = rows;
        out["reference"] = reference_dict(s.reference);
        return out;
      },
      py::arg("k"), py::arg("t"), py::arg("boundaries"),
      py::arg("experts") = std::vector<int>{}, py::arg("p_hi") = 0.8,
      py::arg("p_lo") = 0.2, py::arg("seed") = uint64_t{0},
      "Planted piecewise-constant scenario; deterministic given the seed.");

  m.def(
      "generate_drift",
      [](int k, int t, const std::vector<int>& path, double decay, double p_hi,
         uint64_t seed) {
        ScenarioConfig cfg;
        cfg.kind = ScenarioConfig::Kind::drift;
        cfg.k = k;
        cfg.t = t;
        cfg.path = path;
        cfg.decay = decay;
        cfg.p_hi = p_hi;
        cfg.seed = seed;
        const Scenario s = generate(cfg);
        py::dict out;
        std::vector<std::vector<double>> rows(s.data.t);
        for (int i = 0; i < s.data.t; ++i)
          rows[i].assign(s.data.row(i), s.data.row(i) + s.data.k);
        out["data"] = rows;
        out["reference"] = reference_dict(s.reference);
        return out;
      },
      py::arg("k"), py::arg("t"), py::arg("path"), py::arg("decay") = 0.5,
      py::arg("p_hi") = 0.8, py::arg("seed") = uint64_t{0},
      "Planted drifting-expert scenario; deterministic given the seed.");
}
