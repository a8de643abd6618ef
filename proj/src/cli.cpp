#include "eswitch/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "eswitch/bounds.hpp"
#include "eswitch/descriptor.hpp"
#include "eswitch/forward.hpp"
#include "eswitch/infer.hpp"
#include "eswitch/interpolate.hpp"
#include "eswitch/io.hpp"
#include "eswitch/models.hpp"
#include "eswitch/oracle.hpp"
#include "eswitch/scenario.hpp"

namespace eswitch {

namespace {

// Presentation units: nats by default, bits with --bits (conversion happens
// at the printing boundary only).
struct Units {
  bool bits = false;
  double value(double nats) const { return bits ? nats / std::log(2.0) : nats; }
  std::string suffix() const { return bits ? "bits" : "nats"; }
};

// Writes either to a file or to the fallback stream; summary lines go to
// `out` when a file is used, to `err` otherwise, keeping piped CSV clean.
struct Sink {
  std::ofstream file;
  std::ostream* stream;
  std::ostream* summary;

  Sink(const std::string& path, std::ostream& out, std::ostream& err) {
    if (path.empty()) {
      stream = &out;
      summary = &err;
    } else {
      file.open(path);
      if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
      stream = &file;
      summary = &out;
    }
  }
};

std::optional<ReferenceSequence> resolve_reference(const std::string& source,
                                                   const LikelihoodMatrix& data) {
  if (source.empty() || source == "none") return std::nullopt;
  if (source.rfind("file:", 0) == 0) {
    ReferenceSequence ref = read_reference_file(source.substr(5));
    if (ref.t != data.t)
      throw std::invalid_argument("reference has " + std::to_string(ref.t) +
                                  " rounds but the data has " + std::to_string(data.t));
    for (int e : ref.experts)
      if (e >= data.k)
        throw std::invalid_argument("reference names expert " + std::to_string(e) +
                                    " but the data has " + std::to_string(data.k));
    return ref;
  }
  if (source.rfind("best:", 0) == 0) {
    const long m = parse_integer(source.substr(5), "reference block budget");
    if (m < 1) throw std::invalid_argument("reference block budget must be >= 1");
    return best_reference(data, static_cast<int>(m));
  }
  throw std::invalid_argument("reference must be none, file:PATH, or best:M (got '" +
                              source + "')");
}

// Loss of the best Fixed Share rate on a 10^-3 grid: the comparator the
// switch-count estimator's guarantee speaks about.
double best_grid_share_loss(const LikelihoodMatrix& data) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) {
    const Model fs = fixed_share(data.k, i / 1000.0);
    best = std::min(best, fs.evidence(data));
  }
  return best;
}

// The interpolator a kernel-switch model was built around, for its bound.
std::shared_ptr<const EhmmSpec> model_interpolator(const Model& m) {
  if (m.schedule) return bernoulli_interpolator(*m.schedule);
  if (m.tau) return run_length_interpolator(*m.tau);
  return counts_interpolator();
}

std::string sanitize_cell(std::string text) {
  for (char& ch : text)
    if (ch == ',' || ch == '\n') ch = ';';
  return text;
}

// Theoretical guarantee for one model against one reference; throws
// std::invalid_argument when the theorem does not apply.
double model_bound(const Model& m, const LikelihoodMatrix& data,
                   const ReferenceSequence& ref) {
  const int t = data.t, k = data.k;
  switch (m.family) {
    case BoundFamily::bayes:
      return ref.m <= 1 ? std::log(static_cast<double>(k))
                        : std::numeric_limits<double>::infinity();
    case BoundFamily::elementwise:
      return t * std::log(static_cast<double>(k));  // sum of -ln w over the path
    case BoundFamily::fixed_share:
      return bound_fixed_share(k, t, ref.m, m.alpha);
    case BoundFamily::decreasing_slow:
      return bound_dsr_slow(k, t, ref.m, m.schedule->c);
    case BoundFamily::decreasing_fast:
      return bound_dsr_fast(k, ref.m, m.schedule->c, TailPrior::fat(), ref.last_switch);
    case BoundFamily::counts:
      return bound_switching_method(t);
    case BoundFamily::grid: {
      double best = std::numeric_limits<double>::infinity();
      for (double a : m.grid) best = std::min(best, bound_fixed_share(k, t, ref.m, a));
      return best + std::log(static_cast<double>(m.grid.size()));
    }
    case BoundFamily::run_length:
      return bound_run_length(k, ref.m, ref.last_switch, *m.tau);
    case BoundFamily::drift:
      if (!m.kappa->is_geometric())
        throw std::invalid_argument(
            "drift bound is stated for the two-sided geometric kernel only");
      return bound_parameter_drift(t, ref.d, m.alpha).bound;
    case BoundFamily::drift_decreasing:
      return bound_decreasing_drift(t, ref.d);
    case BoundFamily::kernel_interp: {
      std::vector<int> sigma;
      for (int i = 1; i < ref.t; ++i)
        sigma.push_back(ref.experts[i] != ref.experts[i - 1] ? 1 : 0);
      const double cost = interpolator_cost(*model_interpolator(m), sigma);
      return bound_kernel_interp(cost, *m.kappa, ref.block_experts);
    }
  }
  throw std::logic_error("unhandled bound family");
}

void report_rows(std::ostream& os, const std::vector<Model>& models,
                 const LikelihoodMatrix& data, const ReferenceSequence& ref,
                 const Units& units, bool with_regret) {
  os << "model,params,t,k,m,d,";
  if (with_regret) os << "empirical_regret_" << units.suffix() << ",";
  os << "bound_" << units.suffix();
  if (with_regret) os << ",slack_" << units.suffix();
  os << "\n";

  // The switch-count estimator's guarantee compares against the best grid
  // rate, not the reference codelength; compute that comparator once.
  double grid_loss = 0.0;
  bool need_grid = false;
  for (const Model& m : models)
    need_grid = need_grid || (with_regret && m.family == BoundFamily::counts);
  if (need_grid) grid_loss = best_grid_share_loss(data);

  for (const Model& m : models) {
    os << m.name << "," << sanitize_cell(m.params) << "," << data.t << "," << data.k
       << "," << ref.m << "," << ref.d;
    std::string bound_cell;
    double bound = 0.0;
    bool bound_ok = true;
    try {
      bound = model_bound(m, data, ref);
      bound_cell = format_g9(units.value(bound));
    } catch (const std::invalid_argument& e) {
      bound_ok = false;
      bound_cell = "error: " + sanitize_cell(e.what());
    }
    if (with_regret) {
      const double loss = m.evidence(data);
      const double comparator =
          m.family == BoundFamily::counts ? grid_loss : ref.codelength(data);
      const double regret = std::isinf(comparator) && comparator > 0
                                ? -std::numeric_limits<double>::infinity()
                                : loss - comparator;
      os << "," << format_g9(units.value(regret));
      os << "," << bound_cell;
      os << "," << (bound_ok ? format_g9(units.value(bound - regret)) : "");
    } else {
      os << "," << bound_cell;
    }
    os << "\n";
  }
}

struct ManifestOptions {
  std::string input, output, reference = "none";
  std::vector<std::string> models;
  Mode mode = Mode::predict;
};

ManifestOptions read_manifest(const std::string& path) {
  ManifestOptions mo;
  for (const auto& [key, value] : read_keyvalue_file(path)) {
    if (key == "input") {
      mo.input = value;
    } else if (key == "output") {
      mo.output = value;
    } else if (key == "model") {
      mo.models.push_back(value);
    } else if (key == "mode") {
      if (value == "predict")
        mo.mode = Mode::predict;
      else if (value == "invest")
        mo.mode = Mode::invest;
      else
        throw std::invalid_argument(path + ": mode must be predict or invest");
    } else if (key == "reference") {
      mo.reference = value;
    } else {
      throw std::invalid_argument(path + ": unknown manifest key '" + key + "'");
    }
  }
  if (mo.input.empty()) throw std::invalid_argument(path + ": missing input=");
  if (mo.models.empty()) throw std::invalid_argument(path + ": no model= entries");
  return mo;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expert-switching prediction engine"};
  app.require_subcommand(1);

  Units units;
  app.add_flag("--bits", units.bits, "print codelengths in bits instead of nats");

  std::string input, output, model_desc, reference = "none", manifest_path, config_path;
  std::string ref_output;
  std::vector<std::string> model_descs;
  int experts = 0, horizon = 50;

  auto* validate = app.add_subcommand("validate", "check a model's state graph invariants");
  validate->add_option("--model", model_desc, "model descriptor")->required();
  validate->add_option("-k,--experts", experts, "expert count")->required();
  validate->add_option("--horizon", horizon, "rounds to check");

  auto* predict = app.add_subcommand("predict", "per-round predictive distributions");
  predict->add_option("--input", input, "likelihood CSV")->required();
  predict->add_option("--model", model_desc, "model descriptor")->required();
  predict->add_option("--output", output, "predictions CSV path");

  auto* evaluate = app.add_subcommand("evaluate", "total log loss per model");
  evaluate->add_option("--input", input, "likelihood CSV")->required();
  evaluate->add_option("--model", model_descs, "model descriptors")->required();
  evaluate->add_option("--output", output, "CSV path");

  auto* bounds_cmd = app.add_subcommand("bounds", "theoretical guarantees per model");
  bounds_cmd->add_option("--input", input, "likelihood CSV")->required();
  bounds_cmd->add_option("--model", model_descs, "model descriptors")->required();
  bounds_cmd->add_option("--reference", reference, "file:PATH or best:M")->required();
  bounds_cmd->add_option("--output", output, "CSV path");

  auto* report = app.add_subcommand("report", "bounds vs empirical regret");
  report->add_option("--manifest", manifest_path, "run manifest (key=value)");
  report->add_option("--input", input, "likelihood CSV");
  report->add_option("--model", model_descs, "model descriptors");
  report->add_option("--reference", reference, "file:PATH or best:M");
  report->add_option("--output", output, "CSV path");

  auto* marginals_cmd = app.add_subcommand("marginals", "smoothed expert posteriors");
  marginals_cmd->add_option("--input", input, "likelihood CSV")->required();
  marginals_cmd->add_option("--model", model_desc, "model descriptor")->required();
  marginals_cmd->add_option("--output", output, "CSV path");

  auto* viterbi_cmd = app.add_subcommand("viterbi", "most likely expert path");
  viterbi_cmd->add_option("--input", input, "likelihood CSV")->required();
  viterbi_cmd->add_option("--model", model_desc, "model descriptor")->required();
  viterbi_cmd->add_option("--output", output, "CSV path");

  auto* invest_cmd = app.add_subcommand("invest", "reinvestment run on return factors");
  invest_cmd->add_option("--input", input, "return-factor CSV")->required();
  invest_cmd->add_option("--model", model_desc, "model descriptor")->required();
  invest_cmd->add_option("--output", output, "portfolio CSV path");

  auto* generate_cmd = app.add_subcommand("generate", "synthetic scenario data");
  generate_cmd->add_option("--config", config_path, "scenario config (key=value)")->required();
  generate_cmd->add_option("--output", output, "likelihood CSV path")->required();
  generate_cmd->add_option("--reference-output", ref_output, "planted reference CSV path");

  std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 wants reversed args
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();  // delegates to the selected subcommand if any
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (validate->parsed()) {
      const Model m = parse_model(model_desc, experts);
      const auto violations = validate_spec(m.graph(), horizon);
      if (violations.empty()) {
        out << "ok: " << m.descriptor() << " satisfies all invariants through round "
            << horizon << "\n";
        return 0;
      }
      out << format_violations(violations);
      return 2;
    }

    if (predict->parsed()) {
      const LikelihoodMatrix data = read_likelihood_file(input, Mode::predict);
      const Model m = parse_model(model_desc, data.k);
      const RunResult r = m.fused ? run(*m.fused, data, true) : run(m.graph(), data, true);
      Sink sink(output, out, err);
      write_distribution_csv(*sink.stream, r.predictions);
      *sink.summary << "log_loss_" << units.suffix() << "="
                    << format_g9(units.value(r.log_evidence)) << "\n";
      return 0;
    }

    if (evaluate->parsed()) {
      const LikelihoodMatrix data = read_likelihood_file(input, Mode::predict);
      Sink sink(output, out, err);
      *sink.stream << "model,params,log_loss_" << units.suffix() << "\n";
      for (const std::string& desc : model_descs) {
        const Model m = parse_model(desc, data.k);
        *sink.stream << m.name << "," << sanitize_cell(m.params) << ","
                     << format_g9(units.value(m.evidence(data))) << "\n";
      }
      return 0;
    }

    if (bounds_cmd->parsed()) {
      const LikelihoodMatrix data = read_likelihood_file(input, Mode::predict);
      const auto ref = resolve_reference(reference, data);
      if (!ref) throw std::invalid_argument("bounds needs a reference (file:PATH or best:M)");
      std::vector<Model> models;
      for (const std::string& desc : model_descs) models.push_back(parse_model(desc, data.k));
      Sink sink(output, out, err);
      report_rows(*sink.stream, models, data, *ref, units, false);
      return 0;
    }

    if (report->parsed()) {
      std::string rep_input = input, rep_output = output, rep_reference = reference;
      std::vector<std::string> rep_models = model_descs;
      if (!manifest_path.empty()) {
        const ManifestOptions mo = read_manifest(manifest_path);
        if (mo.mode != Mode::predict)
          throw std::invalid_argument("report requires mode=predict");
        rep_input = mo.input;
        rep_models = mo.models;
        rep_reference = mo.reference;
        if (rep_output.empty()) rep_output = mo.output;
      }
      if (rep_input.empty())
        throw std::invalid_argument("report needs --manifest or --input");
      if (rep_models.empty()) throw std::invalid_argument("report needs model descriptors");
      const LikelihoodMatrix data = read_likelihood_file(rep_input, Mode::predict);
      const auto ref = resolve_reference(rep_reference, data);
      if (!ref)
        throw std::invalid_argument("report needs a reference (file:PATH or best:M)");
      std::vector<Model> models;
      for (const std::string& desc : rep_models) models.push_back(parse_model(desc, data.k));
      Sink sink(rep_output, out, err);
      report_rows(*sink.stream, models, data, *ref, units, true);
      return 0;
    }

    if (marginals_cmd->parsed()) {
      const LikelihoodMatrix data = read_likelihood_file(input, Mode::predict);
      const Model m = parse_model(model_desc, data.k);
      const MarginalGrid grid = marginals(m.graph(), data);
      Sink sink(output, out, err);
      write_distribution_csv(*sink.stream, grid.rows);
      *sink.summary << "log_loss_" << units.suffix() << "="
                    << format_g9(units.value(grid.log_evidence)) << "\n";
      *sink.summary << "retained_prior_mass=" << format_g9(grid.retained_prior_mass)
                    << "\n";
      return 0;
    }

    if (viterbi_cmd->parsed()) {
      const LikelihoodMatrix data = read_likelihood_file(input, Mode::predict);
      const Model m = parse_model(model_desc, data.k);
      const StatePath path = viterbi(m.graph(), data);
      Sink sink(output, out, err);
      *sink.stream << "round,expert\n";
      for (size_t i = 0; i < path.experts.size(); ++i)
        *sink.stream << (i + 1) << "," << path.experts[i] << "\n";
      *sink.summary << "log_joint_" << units.suffix() << "="
                    << format_g9(units.value(path.log_joint)) << "\n";
      return 0;
    }

    if (invest_cmd->parsed()) {
      const LikelihoodMatrix data = read_likelihood_file(input, Mode::invest);
      const Model m = parse_model(model_desc, data.k);
      const InvestResult r = m.fused ? invest(*m.fused, data) : invest(m.graph(), data);
      if (!output.empty()) {
        Sink sink(output, out, err);
        write_distribution_csv(*sink.stream, r.portfolios);
      }
      out << "final_wealth=" << format_g9(r.wealth) << "\n";
      out << "log_wealth_" << units.suffix() << "=" << format_g9(units.value(r.log_wealth))
          << "\n";
      out << "ruined=" << (r.ruined ? 1 : 0) << "\n";
      return 0;
    }

    if (generate_cmd->parsed()) {
      const ScenarioConfig cfg =
          ScenarioConfig::from_keyvalue(read_keyvalue_file(config_path), config_path);
      const Scenario scenario = generate(cfg);
      {
        std::ofstream f(output);
        if (!f) throw std::invalid_argument("cannot open output file '" + output + "'");
        write_likelihood_csv(f, scenario.data);
      }
      if (!ref_output.empty()) {
        std::ofstream f(ref_output);
        if (!f)
          throw std::invalid_argument("cannot open output file '" + ref_output + "'");
        write_reference_csv(f, scenario.reference);
      }
      err << "generated " << scenario.data.t << " rounds, " << scenario.data.k
          << " experts, " << scenario.reference.m << " blocks\n";
      return 0;
    }
  } catch (const EvidenceCollapse& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const PathBudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: a subcommand is required
}

}  // namespace eswitch
