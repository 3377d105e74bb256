#include "app.hpp"

#include "handles.hpp"
#include "presets.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cvtele::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string input;
  std::string resource;
  int cutoff = 40;
  double max_deficit = 1e-6;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  double threshold = 4.0;
  std::string outcomes_path;
  std::string family = "svs";
  double r_min = 0.0;
  double r_max = 2.0;
  int steps = 21;
  std::string out_path;
  std::string format = "json";
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json parse_library_json(char* text) { return json::parse(take_string(text)); }

json state_json(const cvt_state* s) {
  char* text = nullptr;
  check(cvt_state_to_json(s, &text), "serializing state");
  return parse_library_json(text);
}

json epr_json(const cvt_epr_moments& m) {
  return {{"mean_Q", m.mean_Q}, {"mean_P", m.mean_P},   {"var_QQ", m.var_QQ},
          {"var_PP", m.var_PP}, {"cov_QP", m.cov_QP}, {"delta_mean", m.delta_mean}};
}

json cmd_epr_stats(const Options& o) {
  const StatePtr res = load_state(o.resource, StateRole::resource);
  cvt_epr_moments m{};
  check(cvt_epr_moments_of(res.get(), &m), "EPR moments");
  double delta = 0.0;
  int inseparable = 0;
  check(cvt_epr_uncertainty(res.get(), &delta, &inseparable), "EPR uncertainty");
  return {{"command", "epr-stats"},
          {"resource", state_json(res.get())},
          {"epr", epr_json(m)},
          {"epr_uncertainty", delta},
          {"inseparable", inseparable != 0}};
}

// A zero-mean field whose covariance is proportional to the identity.
json thermal_diagnosis(const cvt_state* field) {
  double mean[2];
  double cov[4];
  check(cvt_state_mean(field, mean, 2), "field mean");
  check(cvt_state_cov(field, cov, 4), "field covariance");
  const double scale = std::max({std::abs(cov[0]), std::abs(cov[3]), 1.0});
  const double tol = 1e-12 * scale;
  const bool thermal = std::abs(mean[0]) <= tol && std::abs(mean[1]) <= tol &&
                       std::abs(cov[1]) <= tol && std::abs(cov[2]) <= tol &&
                       std::abs(cov[0] - cov[3]) <= tol;
  json d = {{"thermal", thermal}};
  d["mean_photon_number"] = thermal ? json(0.5 * (cov[0] + cov[3]) - 0.5) : json(nullptr);
  return d;
}

json cmd_distort(const Options& o) {
  const StatePtr res = load_state(o.resource, StateRole::resource);
  cvt_field* raw_field = nullptr;
  check(cvt_field_create(res.get(), &raw_field), "distorting field");
  const FieldPtr field(raw_field);

  cvt_state* raw_state = nullptr;
  check(cvt_field_state(field.get(), &raw_state), "distorting field");
  const StatePtr fstate(raw_state);

  double margin = 0.0;
  check(cvt_field_classicality_margin(field.get(), &margin), "classicality margin");

  cvt_fock* raw_fock = nullptr;
  const cvt_status st = cvt_field_fock_matrix(field.get(), o.cutoff, o.max_deficit, &raw_fock);
  const FockPtr fock(raw_fock);
  if (st == CVT_ERR_TRUNCATION) {
    throw CliError(kExitFailure, "truncation deficit " + fmt(cvt_last_error_value()) +
                                     " at cutoff " + std::to_string(o.cutoff) +
                                     " exceeds the bound " + fmt(o.max_deficit));
  }
  check(st, "Fock matrix");
  json photons = json::array();
  for (int n = 0; n <= o.cutoff; ++n) {
    cvt_complex e{};
    check(cvt_fock_entry(fock.get(), n, n, &e), "Fock matrix");
    photons.push_back(e.re);
  }

  json gen = json::array();
  for (int k = 0; k <= 4; ++k) {
    const double s = 0.25 * k;
    double g = 0.0;
    check(cvt_field_generating_function(field.get(), s, &g), "generating function");
    gen.push_back({{"s", s}, {"value", g}});
  }

  cvt_epr_moments source{};
  check(cvt_field_source_epr(field.get(), &source), "distorting field");

  return {{"command", "distort"},
          {"resource", state_json(res.get())},
          {"field", state_json(fstate.get())},
          {"source_epr", epr_json(source)},
          {"classicality_margin", margin},
          {"classical", margin >= -1e-10},
          {"thermal_diagnosis", thermal_diagnosis(fstate.get())},
          {"cutoff", o.cutoff},
          {"photon_distribution", photons},
          {"truncation_deficit", cvt_fock_deficit(fock.get())},
          {"generating_function", gen}};
}

json cmd_teleport(const Options& o) {
  const StatePtr in = load_state(o.input, StateRole::input);
  const StatePtr res = load_state(o.resource, StateRole::resource);
  char* text = nullptr;
  check(cvt_channel_report_json(in.get(), res.get(), &text), "teleportation");
  json report = parse_library_json(text);
  return {{"command", "teleport"},
          {"input", state_json(in.get())},
          {"resource", state_json(res.get())},
          {"report", report}};
}

json cmd_fidelity(const Options& o) {
  const StatePtr res = load_state(o.resource, StateRole::resource);
  double f = 0.0;
  double noise = 0.0;
  check(cvt_fidelity_coherent(res.get(), &f), "fidelity");
  check(cvt_added_noise(res.get(), &noise), "added noise");
  return {{"command", "fidelity"},
          {"resource", state_json(res.get())},
          {"fidelity_coherent", f},
          {"added_noise", noise}};
}

json cmd_simulate(const Options& o) {
  const StatePtr in = load_state(o.input, StateRole::input);
  const StatePtr res = load_state(o.resource, StateRole::resource);
  cvt_protocol_config cfg{};
  cfg.n_samples = o.samples;
  cfg.seed = o.seed;
  cfg.record_outcomes = o.outcomes_path.empty() ? 0 : 1;
  cfg.threads = o.threads;
  cvt_ensemble* raw = nullptr;
  check(cvt_run_protocol(in.get(), res.get(), &cfg, &raw), "Monte Carlo run");
  const EnsemblePtr ens(raw);
  if (!o.outcomes_path.empty()) {
    check(cvt_ensemble_write_outcomes_csv(ens.get(), o.outcomes_path.c_str()), "writing outcomes");
  }

  cvt_state* raw_out = nullptr;
  check(cvt_teleport(in.get(), res.get(), &raw_out), "teleportation");
  const StatePtr analytic(raw_out);
  cvt_comparison cmp{};
  check(cvt_compare_to_analytic(ens.get(), analytic.get(), o.threshold, &cmp), "comparison");

  char* text = nullptr;
  check(cvt_ensemble_to_json(ens.get(), &text), "serializing ensemble");
  return {{"command", "simulate"},
          {"input", state_json(in.get())},
          {"resource", state_json(res.get())},
          {"estimate", parse_library_json(text)},
          {"analytic", state_json(analytic.get())},
          {"comparison",
           {{"z_mean", {cmp.z_mean[0], cmp.z_mean[1]}},
            {"z_cov", {{cmp.z_cov[0], cmp.z_cov[1]}, {cmp.z_cov[2], cmp.z_cov[3]}}},
            {"max_abs_z", cmp.max_abs_z},
            {"threshold", cmp.threshold},
            {"pass", cmp.pass != 0}}}};
}

struct SweepRow {
  double r, epr, noise, fidelity;
};

std::vector<SweepRow> sweep_rows(const Options& o) {
  if (o.family != "svs") throw CliError(kExitUsage, "unknown resource family '" + o.family + "'");
  if (o.steps > 1 && o.r_max < o.r_min) throw CliError(kExitUsage, "--r-max must be >= --r-min");
  std::vector<SweepRow> rows;
  for (int i = 0; i < o.steps; ++i) {
    const double r = o.steps == 1 ? o.r_min : o.r_min + (o.r_max - o.r_min) * i / (o.steps - 1);
    cvt_state* raw = nullptr;
    const cvt_status st = cvt_state_two_mode_squeezed_vacuum(r, &raw);
    const StatePtr s(raw);
    check(st, "squeezed vacuum at r = " + fmt(r));
    SweepRow row{r, 0.0, 0.0, 0.0};
    int inseparable = 0;
    check(cvt_epr_uncertainty(s.get(), &row.epr, &inseparable), "EPR uncertainty");
    check(cvt_added_noise(s.get(), &row.noise), "added noise");
    check(cvt_fidelity_coherent(s.get(), &row.fidelity), "fidelity");
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string text = "r,epr_uncertainty,added_noise,fidelity_coherent\n";
  for (const SweepRow& row : rows) {
    text += fmt(row.r) + ',' + fmt(row.epr) + ',' + fmt(row.noise) + ',' + fmt(row.fidelity) + '\n';
  }
  return text;
}

json sweep_json(const Options& o, const std::vector<SweepRow>& rows) {
  json table = json::array();
  for (const SweepRow& row : rows) {
    table.push_back({{"r", row.r},
                     {"epr_uncertainty", row.epr},
                     {"added_noise", row.noise},
                     {"fidelity_coherent", row.fidelity}});
  }
  return {{"command", "sweep"}, {"family", o.family}, {"rows", table}};
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  file << text;
  file.close();
  if (!file) throw CliError(kExitFailure, "cannot write output file '" + o.out_path + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Continuous-variable teleportation of Gaussian states", "cvtele"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cvt_version()));

  const std::string state_help =
      "preset (vacuum, coherent:A, svs:R, thermal:N) or path to a JSON state";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out_path, "Write the report to this file instead of stdout");
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };
  auto add_resource = [&](CLI::App* sub) {
    sub->add_option("--resource", o.resource, "Two-mode resource: " + state_help)->required();
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Single-mode input: " + state_help)->required();
  };

  CLI::App* epr = app.add_subcommand("epr-stats", "EPR moments and inseparability of a resource");
  add_resource(epr);
  add_common(epr);

  CLI::App* distort = app.add_subcommand("distort", "Distorting-field state of a resource");
  add_resource(distort);
  distort->add_option("--cutoff", o.cutoff, "Fock cutoff for the photon distribution")
      ->check(CLI::Range(1, 2000))
      ->capture_default_str();
  distort->add_option("--max-deficit", o.max_deficit,
                      "Fail when 1 - trace of the truncated Fock matrix exceeds this (<= 0 disables)")
      ->capture_default_str();
  add_common(distort);

  CLI::App* tele = app.add_subcommand("teleport", "Analytic teleportation channel output");
  add_input(tele);
  add_resource(tele);
  add_common(tele);

  CLI::App* fid = app.add_subcommand("fidelity", "Coherent-state teleportation fidelity");
  add_resource(fid);
  add_common(fid);

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo run of the protocol");
  add_input(sim);
  add_resource(sim);
  sim->add_option("--samples", o.samples, "Number of protocol runs")
      ->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40))
      ->capture_default_str();
  sim->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  sim->add_option("--threads", o.threads, "Worker threads (0 = all cores); output is unaffected")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sim->add_option("--threshold", o.threshold, "|z| bound for the analytic comparison")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--outcomes", o.outcomes_path, "Write measured (q, p) outcomes to this CSV file");
  add_common(sim);

  CLI::App* sweep = app.add_subcommand("sweep", "Tabulate figures of merit over squeezing");
  sweep->add_option("--family", o.family, "Resource family")
      ->check(CLI::IsMember({"svs"}))
      ->capture_default_str();
  sweep->add_option("--r-min", o.r_min, "Smallest squeezing parameter")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep->add_option("--r-max", o.r_max, "Largest squeezing parameter")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep->add_option("--steps", o.steps, "Number of grid points")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (o.format == "csv" && name != "sweep") {
      throw CliError(kExitUsage, "--format csv is only available for sweep");
    }
    std::string text;
    if (name == "sweep") {
      const std::vector<SweepRow> rows = sweep_rows(o);
      text = o.format == "csv" ? sweep_csv(rows) : sweep_json(o, rows).dump(2) + '\n';
    } else if (name == "epr-stats") {
      text = cmd_epr_stats(o).dump(2) + '\n';
    } else if (name == "distort") {
      text = cmd_distort(o).dump(2) + '\n';
    } else if (name == "teleport") {
      text = cmd_teleport(o).dump(2) + '\n';
    } else if (name == "fidelity") {
      text = cmd_fidelity(o).dump(2) + '\n';
    } else {
      text = cmd_simulate(o).dump(2) + '\n';
    }
    emit(o, text, out);
    return kExitOk;
  } catch (const CliError& e) {
    err << "cvtele: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "cvtele: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace cvtele::cli
