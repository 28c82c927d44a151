// Command-line front end: spectra, critical sets, eigenspace assembly,
// biorthogonal families, control synthesis, forward simulation and the
// obstruction demos, all emitting deterministic JSON/CSV.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kstree/errors.hpp"
#include "kstree/experiment.hpp"

using namespace kstree;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Named presets wiring the worked examples: configuration, mode count,
// channel mask, initial state and interval variant in one switch.
struct Preset {
  const char* name;
  const char* config;
  int modes;
  const char* mask;
  const char* y0;
  const char* variant;
};

const Preset kPresets[] = {
    {"model1-null",
     R"({"edges":3,"length":1.0,"lambda":1.0,"model":"I","horizon":1.0})", 8, "110",
     "mix", ""},
    {"model2-null",
     R"({"edges":3,"length":1.0,"lambda":1.0,"model":"II","horizon":1.0})", 8,
     "110110", "mix", ""},
    {"model2-2n3",
     R"({"edges":3,"length":1.0,"lambda":1.0,"model":"II","horizon":1.0})", 8,
     "100110", "mix", ""},
    {"obstruct-model1",
     R"({"edges":3,"length":1.0,"lambda":1.0,"model":"I","horizon":1.0})", 4, "001",
     R"([{"eigen":1,"basis":0,"coeff":1.0}])", ""},
    {"obstruct-model2",
     R"({"edges":3,"length":1.0,"lambda":24.674011002723397,"model":"II","horizon":1.0})",
     5, "100110", "mix", ""},
    {"interval-neumann",
     R"({"edges":1,"length":1.0,"lambda":1.0,"model":"II","horizon":1.0})", 8, "",
     "mix", "neumann"},
    {"interval-dirichlet",
     R"({"edges":1,"length":1.0,"lambda":1.0,"model":"II","horizon":1.0})", 8, "",
     "mix", "dirichlet"},
    {"interval-dirichlet-critical",
     R"({"edges":1,"length":1.0,"lambda":2.4674011002723395,"model":"II","horizon":1.0})",
     8, "", "mix", "dirichlet"},
};

ChannelMask parse_mask(const StarTreeConfig& cfg, const std::string& text) {
  ChannelMask m = ChannelMask::all_active(cfg);
  if (text.empty()) return m;
  const std::size_t n = static_cast<std::size_t>(cfg.num_edges);
  const std::size_t want = cfg.model == Model::II ? 2 * n : n;
  if (text.size() != want) {
    throw std::invalid_argument(
        "channel mask must have one 0/1 per control input (" +
        std::to_string(want) + " characters)");
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    const bool on = text[i] == '1';
    if (!on && text[i] != '0') {
      throw std::invalid_argument("channel mask characters must be 0 or 1");
    }
    if (i < n) {
      m.primary[i] = on;
    } else {
      m.secondary[i - n] = on;
    }
  }
  return m;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path.string());
  out << content;
}

json traces_json(const GraphEigenpair& ep) {
  json per_fn = json::array();
  for (int i = 0; i < ep.multiplicity; ++i) {
    json edges = json::array();
    for (const EdgeTraces& t : ep.edge_traces[static_cast<std::size_t>(i)]) {
      edges.push_back({{"value_at_L", t.value_at_L},
                       {"dxx_at_L", t.dxx_at_L},
                       {"lambda_value_plus_dxx_at_L", t.lambda_value_plus_dxx_at_L},
                       {"dx_at_0", t.dx_at_0},
                       {"dxxx_at_0", t.dxxx_at_0}});
    }
    per_fn.push_back(edges);
  }
  return per_fn;
}

json report_json(const VerificationReport& rep, double tol) {
  json j;
  j["modal_residuals"] = rep.modal_residuals;
  j["uncontrolled_residuals"] = rep.uncontrolled_residuals;
  j["free_decay_ratio"] = rep.free_decay_ratio;
  j["tail_estimate"] = rep.tail_estimate;
  j["tolerance"] = tol;
  json pass = json::array();
  for (double r : rep.modal_residuals) pass.push_back(r < tol);
  j["pass_per_mode"] = pass;
  j["pass"] = rep.residuals_below(tol);
  return j;
}

json targets_json(const MomentTargets& t) {
  json channels = json::array();
  for (const ChannelId& c : t.channels) {
    channels.push_back({{"edge", c.edge}, {"input", c.secondary ? "b" : "a"}});
  }
  json rows = json::array();
  for (std::size_t n = 0; n < t.sigmas.size(); ++n) {
    json row;
    row["sigma"] = t.sigmas[n];
    json vals = json::array();
    for (Eigen::Index c = 0; c < t.values.cols(); ++c) {
      vals.push_back(t.values(static_cast<Eigen::Index>(n), c));
    }
    row["moments"] = vals;
    rows.push_back(row);
  }
  return json{{"channels", channels}, {"rows", rows}};
}

std::string control_samples_csv(const ControlSignal& u, int samples) {
  std::string csv = "t";
  for (std::size_t c = 0; c < u.channels.size(); ++c) {
    csv += ",";
    csv += (u.channels[c].secondary ? "b" : "u");
    csv += std::to_string(u.channels[c].edge);
  }
  csv += "\n";
  for (int s = 0; s < samples; ++s) {
    const double t = u.horizon * s / (samples - 1.0);
    csv += fmt(t);
    for (std::size_t c = 0; c < u.channels.size(); ++c) {
      csv += "," + fmt(u.value(c, t));
    }
    csv += "\n";
  }
  return csv;
}

GraphFunction resolve_y0(const std::string& spec,
                         const std::vector<GraphEigenpair>& eps,
                         const StarTreeConfig& cfg) {
  if (spec.empty() || spec == "mix") return unit_mix(eps, cfg);
  // inline JSON: [{"eigen":0,"basis":0,"coeff":1.0}, ...] or a file path
  std::string text = spec;
  if (!spec.empty() && spec[0] != '[') {
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open y0 spec: " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("y0 spec: invalid JSON: ") + e.what());
  }
  std::vector<EigenCoefficient> coeffs;
  for (const auto& item : j) {
    EigenCoefficient c;
    c.eigen = item.at("eigen").get<int>();
    c.basis = item.at("basis").get<int>();
    c.coeff = item.at("coeff").get<double>();
    coeffs.push_back(c);
  }
  return from_coefficients(eps, cfg, coeffs);
}

int run_spectrum(const StarTreeConfig& cfg, const std::string& problem_filter,
                 int modes, const std::string& format, const fs::path& out) {
  std::vector<ScalarProblem> problems;
  if (problem_filter.empty()) {
    if (cfg.model == Model::I) {
      problems = {ScalarProblem::P1, ScalarProblem::P2};
    } else {
      problems = {ScalarProblem::E1, ScalarProblem::E2};
    }
  } else if (problem_filter == "P1") {
    problems = {ScalarProblem::P1};
  } else if (problem_filter == "P2") {
    problems = {ScalarProblem::P2};
  } else if (problem_filter == "E1") {
    problems = {ScalarProblem::E1};
  } else if (problem_filter == "E2") {
    problems = {ScalarProblem::E2};
  } else {
    throw std::invalid_argument("unknown problem: " + problem_filter);
  }
  std::string csv = "problem,index,branch,sigma,alpha,beta,gamma,value_at_L,dxx_at_L\n";
  for (ScalarProblem p : problems) {
    for (const ScalarEigenpair& ep : full_spectrum(p, cfg, modes)) {
      const char* branch = ep.params.branch == SpectralBranch::Positive ? "positive"
                           : ep.params.branch == SpectralBranch::Zero   ? "zero"
                                                                        : "negative";
      csv += to_string(ep.problem) + "," + std::to_string(ep.index) + "," + branch +
             "," + fmt(ep.params.sigma) + "," + fmt(ep.params.alpha) + "," +
             fmt(ep.params.beta) + "," + fmt(ep.params.gamma) + "," +
             fmt(ep.traces.value_at_L) + "," + fmt(ep.traces.dxx_at_L) + "\n";
    }
  }
  write_file(out / "spectrum.csv", csv);
  if (format == "json") {
    json rows = json::array();
    for (ScalarProblem p : problems) {
      for (const ScalarEigenpair& ep : full_spectrum(p, cfg, modes)) {
        rows.push_back({{"problem", to_string(ep.problem)},
                        {"index", ep.index},
                        {"sigma", ep.params.sigma}});
      }
    }
    std::cout << rows.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
  return 0;
}

int run_critical(const StarTreeConfig& cfg, const std::string& format,
                 const fs::path& out) {
  json arr = json::array();
  for (CriticalSet s : {CriticalSet::N0, CriticalSet::N1, CriticalSet::N2,
                        CriticalSet::N3, CriticalSet::N4, CriticalSet::Nodd,
                        CriticalSet::Nmixt}) {
    const Membership m = is_member(s, cfg.lambda, cfg.edge_length);
    json e;
    e["set"] = to_string(s);
    e["member"] = m.member;
    if (m.witness) {
      e["witness"] = {m.witness->first, m.witness->second};
    } else {
      e["witness"] = nullptr;
    }
    e["scaled_value"] = m.scaled_value;
    arr.push_back(e);
  }
  const std::string text = arr.dump(2) + "\n";
  write_file(out / "critical.json", text);
  if (format == "csv") {
    std::string csv = "set,member,witness_m,witness_n,scaled_value\n";
    for (const auto& e : arr) {
      csv += e["set"].get<std::string>();
      csv += e["member"].get<bool>() ? ",1" : ",0";
      if (e["witness"].is_null()) {
        csv += ",,";
      } else {
        csv += "," + std::to_string(e["witness"][0].get<int>()) + "," +
               std::to_string(e["witness"][1].get<int>());
      }
      csv += "," + fmt(e["scaled_value"].get<double>()) + "\n";
    }
    std::cout << csv;
  } else {
    std::cout << text;
  }
  return 0;
}

int run_assemble(const StarTreeConfig& cfg, int modes, const fs::path& out) {
  const auto eps = assemble(cfg, modes);
  json arr = json::array();
  for (const auto& ep : eps) {
    json e;
    e["sigma"] = ep.sigma;
    e["multiplicity"] = ep.multiplicity;
    e["origin"] = to_string(ep.origin);
    e["traces"] = traces_json(ep);
    if (!ep.warning.empty()) e["warning"] = ep.warning;
    arr.push_back(e);
  }
  const std::string text = arr.dump(2) + "\n";
  write_file(out / "assemble.json", text);
  std::cout << text;
  return 0;
}

int run_biorthogonal(const StarTreeConfig& cfg, int modes, const fs::path& out) {
  const auto eps = assemble(cfg, modes);
  std::vector<double> sig;
  for (const auto& ep : eps) sig.push_back(ep.sigma);
  const auto fam = build_biorthogonal(sig, cfg.horizon);
  json j;
  j["sigmas"] = fam.sigmas;
  j["horizon"] = fam.horizon;
  j["gram_condition"] = fam.gram_condition;
  json rows = json::array();
  for (Eigen::Index n = 0; n < fam.coeffs.rows(); ++n) {
    json row = json::array();
    for (Eigen::Index k = 0; k < fam.coeffs.cols(); ++k) row.push_back(fam.coeffs(n, k));
    rows.push_back(row);
  }
  j["coefficients"] = rows;
  const std::string text = j.dump(2) + "\n";
  write_file(out / "biorthogonal.json", text);
  std::cout << text;
  return 0;
}

int run_synthesize(const StarTreeConfig& cfg, int modes, const ChannelMask& mask,
                   const std::string& y0spec, bool route_b,
                   const std::string& format, const fs::path& out) {
  const auto pre = assemble(cfg, modes);
  const GraphFunction y0 = resolve_y0(y0spec, pre, cfg);
  const auto r = synthesize(cfg, y0, modes, mask,
                            route_b ? ModelIIRouting::BChannels
                                    : ModelIIRouting::AChannels);
  json j;
  j["targets"] = targets_json(r.targets);
  j["gram_condition"] = r.family.gram_condition;
  json weights = json::array();
  for (Eigen::Index c = 0; c < r.control.weights.rows(); ++c) {
    json row = json::array();
    for (Eigen::Index k = 0; k < r.control.weights.cols(); ++k) {
      row.push_back(r.control.weights(c, k));
    }
    weights.push_back(row);
  }
  j["control_weights"] = weights;
  j["control_exponents"] = r.control.exponents;
  json crit = json::array();
  for (const auto& c : r.critical_report) {
    crit.push_back({{"set", to_string(c.set)}, {"member", c.membership.member}});
  }
  j["critical_report"] = crit;
  const std::string text = j.dump(2) + "\n";
  write_file(out / "synthesize.json", text);
  const std::string csv = control_samples_csv(r.control, 1000);
  write_file(out / "controls.csv", csv);
  std::cout << (format == "csv" ? csv : text);
  return 0;
}

int run_simulate(const StarTreeConfig& cfg, int modes, const ChannelMask& mask,
                 const std::string& y0spec, bool uncontrolled, int steps,
                 int dump_state, double tol, const std::string& format,
                 const fs::path& out) {
  const auto pre = assemble(cfg, modes);
  const GraphFunction y0 = resolve_y0(y0spec, pre, cfg);
  const ControlSystem system = make_tree_system(cfg, pre);
  ControlSignal u = ControlSignal::zero(cfg);
  if (!uncontrolled) {
    u = synthesize(cfg, y0, modes, mask).control;
  }
  const SimState st = simulate(system, y0, u, steps);

  std::string csv = "t,mode,coefficient\n";
  for (std::size_t s = 0; s < st.times.size(); ++s) {
    for (std::size_t n = 0; n < system.mode_sigma.size(); ++n) {
      csv += fmt(st.times[s]) + "," + std::to_string(n) + "," +
             fmt(st.y_modal(static_cast<Eigen::Index>(s),
                            static_cast<Eigen::Index>(n))) +
             "\n";
    }
  }
  write_file(out / "trajectory.csv", csv);

  if (dump_state > 1) {
    std::string state = "t,edge,x,y\n";
    for (std::size_t s = 0; s < st.times.size(); ++s) {
      for (int k = 0; k < cfg.num_edges; ++k) {
        for (int i = 0; i < dump_state; ++i) {
          const double x = cfg.edge_length * i / (dump_state - 1);
          state += fmt(st.times[s]) + "," + std::to_string(k + 1) + "," + fmt(x) +
                   "," + fmt(st.reconstruct(s, static_cast<std::size_t>(k), x)) +
                   "\n";
        }
      }
    }
    write_file(out / "state.csv", state);
  }

  const auto rep = verify_null(st, static_cast<int>(system.mode_sigma.size()));
  const std::string text = report_json(rep, tol).dump(2) + "\n";
  write_file(out / "verification.json", text);
  std::cout << (format == "csv" ? csv : text);
  return 0;
}

int run_end_to_end(const StarTreeConfig& cfg, int modes, const ChannelMask& mask,
                   const std::string& y0spec, double tol, const std::string& format,
                   const fs::path& out) {
  const auto pre = assemble(cfg, modes);
  const GraphFunction y0 = resolve_y0(y0spec, pre, cfg);
  const auto r = end_to_end_null_control(cfg, y0, modes, mask);

  // persist every stage of the chain
  json stages;
  json eigen = json::array();
  for (const auto& ep : r.synthesis.eigenpairs) {
    eigen.push_back({{"sigma", ep.sigma},
                     {"multiplicity", ep.multiplicity},
                     {"origin", to_string(ep.origin)}});
  }
  stages["eigenvalues"] = eigen;
  stages["targets"] = targets_json(r.synthesis.targets);
  stages["gram_condition"] = r.synthesis.family.gram_condition;
  write_file(out / "synthesize.json", stages.dump(2) + "\n");
  write_file(out / "controls.csv", control_samples_csv(r.synthesis.control, 1000));

  json j;
  j["controlled"] = report_json(r.report, tol);
  j["uncontrolled"] = report_json(r.uncontrolled_report, tol);
  j["gram_condition"] = r.synthesis.family.gram_condition;
  const std::string text = j.dump(2) + "\n";
  write_file(out / "verification.json", text);
  std::cout << (format == "csv" ? control_samples_csv(r.synthesis.control, 1000)
                                : text);
  return r.report.residuals_below(tol) ? 0 : 2;
}

int run_obstruct(const StarTreeConfig& cfg, int modes, const ChannelMask& mask,
                 const std::string& y0spec, const fs::path& out) {
  const auto pre = assemble(cfg, modes);
  const GraphFunction y0 = resolve_y0(y0spec, pre, cfg);
  try {
    synthesize(cfg, y0, modes, mask);
  } catch (const UncontrollableDirection& e) {
    json j;
    j["refusal"] = "uncontrollable";
    j["sigma"] = e.sigma;
    j["null_direction"] = e.direction;
    j["message"] = e.what();
    const std::string text = j.dump(2) + "\n";
    write_file(out / "obstruction.json", text);
    std::cout << text;
    return 2;
  }
  json j;
  j["refusal"] = nullptr;
  j["message"] = "synthesis succeeded; no obstruction under this channel pattern";
  const std::string text = j.dump(2) + "\n";
  write_file(out / "obstruction.json", text);
  std::cout << text;
  return 0;
}

int run_interval(const StarTreeConfig& cfg, const std::string& variant_name,
                 int modes, double tol, const fs::path& out) {
  if (cfg.num_edges != 1) {
    throw std::invalid_argument("interval-demo needs a config with edges = 1");
  }
  IntervalVariant variant;
  if (variant_name == "neumann") {
    variant = IntervalVariant::NeumannPair;
  } else if (variant_name == "dirichlet") {
    variant = IntervalVariant::DirichletPair;
  } else {
    throw std::invalid_argument("variant must be neumann or dirichlet");
  }
  const auto modes_list = interval_modes(cfg, variant, modes);
  const EdgeFunction y0 = interval_unit_mix(modes_list);
  const auto r = interval_end_to_end(cfg, variant, y0, modes);
  json j;
  j["variant"] = variant_name;
  j["controlled"] = report_json(r.report, tol);
  j["uncontrolled"] = report_json(r.uncontrolled_report, tol);
  j["gram_condition"] = r.synthesis.family.gram_condition;
  const std::string text = j.dump(2) + "\n";
  write_file(out / "interval.json", text);
  write_file(out / "controls.csv", control_samples_csv(r.synthesis.control, 1000));
  std::cout << text;
  return r.report.residuals_below(tol) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary null-control toolkit for the linear KS equation on star trees"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string preset_name;
  std::string out_dir = ".";
  std::string mask_text;
  std::string y0spec;
  std::string problem_filter;
  std::string variant = "neumann";
  std::string format;
  int modes = 8;
  int steps = 64;
  int dump_state = 0;
  double tol = 1e-6;
  bool uncontrolled = false;
  bool route_b = false;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--preset", preset_name,
                 "named experiment preset (model1-null, model2-null, model2-2n3, "
                 "obstruct-model1, obstruct-model2, interval-neumann, "
                 "interval-dirichlet, interval-dirichlet-critical)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "stdout artifact: json or csv");
  app.add_option("--modes", modes, "number of retained distinct eigenvalues");
  app.add_option("--channels", mask_text,
                 "0/1 mask over control inputs (edges 1..N, then the b "
                 "inputs for model II)");
  app.add_option("--y0", y0spec, "initial state: 'mix' or eigen-coefficient JSON");
  app.add_option("--tol", tol, "residual tolerance for pass/fail");

  auto* spectrum = app.add_subcommand("spectrum", "scalar eigenvalues as CSV");
  spectrum->add_option("--problem", problem_filter, "restrict to P1|P2|E1|E2");
  auto* critical = app.add_subcommand("critical", "critical-set membership report");
  auto* assemble_cmd = app.add_subcommand("assemble", "tree eigenpairs as JSON");
  auto* biorth = app.add_subcommand("biorthogonal", "biorthogonal family as JSON");
  auto* synth = app.add_subcommand("synthesize", "boundary controls from moments");
  synth->add_flag("--route-b", route_b, "route difference targets through b inputs");
  auto* sim = app.add_subcommand("simulate", "forward run with trajectories");
  sim->add_option("--steps", steps, "output sampling steps");
  sim->add_flag("--uncontrolled", uncontrolled, "zero controls");
  sim->add_option("--dump-state", dump_state, "emit y(t,x) on a K-point grid");
  auto* verify = app.add_subcommand("verify", "end-to-end null control report");
  auto* obstruct = app.add_subcommand("obstruct", "expect an uncontrollable pattern");
  auto* interval = app.add_subcommand("interval-demo", "single-interval systems");
  interval->add_option("--variant", variant, "neumann | dirichlet");

  CLI11_PARSE(app, argc, argv);

  try {
    std::string config_text;
    if (!preset_name.empty()) {
      const Preset* found = nullptr;
      for (const Preset& p : kPresets) {
        if (preset_name == p.name) found = &p;
      }
      if (!found) throw std::invalid_argument("unknown preset: " + preset_name);
      config_text = found->config;
      if (app.count("--modes") == 0) modes = found->modes;
      if (mask_text.empty()) mask_text = found->mask;
      if (y0spec.empty()) y0spec = found->y0;
      if (interval->count("--variant") == 0 && *found->variant) {
        variant = found->variant;
      }
    } else if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      config_text = ss.str();
    } else {
      throw std::invalid_argument("either --config or --preset is required");
    }
    if (!format.empty() && format != "json" && format != "csv") {
      throw std::invalid_argument("--format must be json or csv");
    }
    const StarTreeConfig cfg = parse_config(config_text);
    const fs::path out(out_dir);
    fs::create_directories(out);
    const ChannelMask mask =
        cfg.num_edges >= 2 ? parse_mask(cfg, mask_text) : ChannelMask{};

    if (spectrum->parsed()) {
      return run_spectrum(cfg, problem_filter, modes, format, out);
    }
    if (critical->parsed()) return run_critical(cfg, format, out);
    if (assemble_cmd->parsed()) return run_assemble(cfg, modes, out);
    if (biorth->parsed()) return run_biorthogonal(cfg, modes, out);
    if (synth->parsed()) {
      return run_synthesize(cfg, modes, mask, y0spec, route_b, format, out);
    }
    if (sim->parsed()) {
      return run_simulate(cfg, modes, mask, y0spec, uncontrolled, steps, dump_state,
                          tol, format, out);
    }
    if (verify->parsed()) {
      return run_end_to_end(cfg, modes, mask, y0spec, tol, format, out);
    }
    if (obstruct->parsed()) return run_obstruct(cfg, modes, mask, y0spec, out);
    if (interval->parsed()) return run_interval(cfg, variant, modes, tol, out);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const UncontrollableDirection& e) {
    json j{{"error", "uncontrollable"}, {"sigma", e.sigma},
           {"null_direction", e.direction}, {"message", e.what()}};
    std::cerr << j.dump(2) << "\n";
    return 2;
  } catch (const ConditioningRefusal& e) {
    json j{{"error", "conditioning"}, {"condition", e.condition},
           {"message", e.what()}};
    std::cerr << j.dump(2) << "\n";
    return 2;
  } catch (const NumericalError& e) {
    json j{{"error", "numerical"}, {"message", e.what()}};
    std::cerr << j.dump(2) << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    json j{{"error", "invalid_input"}, {"message", e.what()}};
    std::cerr << j.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    json j{{"error", "internal"}, {"message", e.what()}};
    std::cerr << j.dump(2) << "\n";
    return 1;
  }
}
