// decx command line: dec | ir | exo | div | simulate | verify | env

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "decx/core.hpp"
#include "decx/dec.hpp"
#include "decx/divergences.hpp"
#include "decx/environments.hpp"
#include "decx/error.hpp"
#include "decx/exo.hpp"
#include "decx/harness.hpp"
#include "decx/info_ratio.hpp"

using nlohmann::json;
using namespace decx;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;  // empty: csv for simulate, json elsewhere
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
}

// Accepts a JSON file path or an inline JSON value.
nlohmann::json json_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) return read_json_file(arg);
  try {
    return json::parse(arg);
  } catch (const json::exception&) {
    throw ValidationError("not a file or JSON value: " + arg);
  }
}

std::vector<double> numbers(const std::string& arg) {
  const json j = json_arg(arg.front() == '[' || std::filesystem::exists(arg) ? arg : "[" + arg + "]");
  try {
    return j.get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ValidationError("expected a list of numbers: " + arg);
  }
}

void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(g.out);
  const std::string path = (std::filesystem::path(g.out) / name).string();
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::string csv_from(const json& obj) {
  // Flat key,value listing for scalar fields.
  std::ostringstream os;
  os << "# decx-csv v1\nkey,value\n";
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (it->is_primitive()) os << it.key() << ',' << it->dump() << '\n';
  return os.str();
}

void emit_json(const Globals& g, const std::string& stem, const json& obj) {
  if (g.format == "csv") {
    emit(g, stem + ".csv", csv_from(obj));
  } else {
    emit(g, stem + ".json", obj.dump(2));
  }
}

json dec_json(const DecResult& r, std::size_t resolution) {
  return {{"value", r.value},
          {"p_star", r.p_star.vector()},
          {"worst_model", r.worst_model},
          {"duality_gap", r.duality_gap},
          {"reference", r.reference_label},
          {"class_size", r.class_size},
          {"resolution", resolution}};
}

// Appends --key=value for config entries the user did not pass.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const json cfg = read_json_file(path);
  if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string flag = "--" + it.key();
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    std::string value;
    if (it->is_string()) {
      value = it->get<std::string>();
    } else if (it->is_boolean()) {
      if (it->get<bool>()) args.push_back(flag);
      continue;
    } else if (it->is_array() && std::all_of(it->begin(), it->end(), [](const json& x) { return x.is_number(); })) {
      for (const auto& x : *it) value += (value.empty() ? "" : ",") + x.dump();
    } else {
      value = it->dump();
    }
    args.push_back(flag + "=" + value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decx: decision-estimation coefficient, information ratio and ExO toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON file of option defaults");
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--out", g.out, "Output directory (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // dec
  auto* dec = app.add_subcommand("dec", "Decision-Estimation Coefficient");
  std::string cls_path;
  double gamma = 1.0;
  std::string reference;
  bool sup = false;
  std::optional<double> eps;
  std::size_t hull = 0;
  dec->add_option("--class", cls_path, "Model class JSON")->required();
  dec->add_option("--gamma", gamma)->required();
  dec->add_option("--reference", reference, "Reference model label");
  dec->add_flag("--sup", sup, "Sup over references in the class");
  dec->add_option("--eps", eps, "Localization radius");
  dec->add_option("--hull", hull, "Hull grid resolution (0 = class as given)");

  // ir
  auto* ir = app.add_subcommand("ir", "Parameterized Information Ratio search");
  IrBudget ir_budget;
  ir->add_option("--class", cls_path)->required();
  ir->add_option("--gamma", gamma)->required();
  ir->add_option("--grid", ir_budget.grid_resolution);
  ir->add_option("--restarts", ir_budget.restarts);
  ir->add_option("--iterations", ir_budget.iterations);

  // exo
  auto* exo = app.add_subcommand("exo", "High-probability ExO objective");
  double eta = 1.0;
  std::string q_arg = "uniform";
  std::size_t sup_q = 0;
  ExoOptions exo_opts;
  exo->add_option("--class", cls_path)->required();
  exo->add_option("--eta", eta)->required();
  exo->add_option("--q", q_arg, "uniform, a JSON list or a file");
  exo->add_option("--sup-q", sup_q, "Grid resolution for the sup over q");
  exo->add_option("--iterations", exo_opts.iterations);
  exo->add_option("--tolerance", exo_opts.tolerance);

  // div
  auto* div = app.add_subcommand("div", "Divergences and the Hellinger/MGF quantity");
  std::string p_arg, q2_arg, kind = "hellinger";
  std::optional<double> clip;
  div->add_option("--p", p_arg, "Comma list, JSON list or file")->required();
  div->add_option("--q", q2_arg)->required();
  div->add_option("--kind", kind)->check(CLI::IsMember({"hellinger", "kl", "tv"}));
  div->add_option("--clip", clip, "Clip bound alpha for the MGF quantity");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run ExO+ or EXP3");
  std::string adv_arg;
  SimulationConfig sim_cfg;
  sim->add_option("--class", cls_path)->required();
  sim->add_option("--adversary", adv_arg, "Adversary spec (file or inline JSON)")->required();
  sim->add_option("--algo", sim_cfg.algorithm)->check(CLI::IsMember({"exo+", "exp3"}));
  sim->add_option("--T", sim_cfg.horizon)->required();
  sim->add_option("--eta", sim_cfg.eta, "Learning rate (default from T and delta)");
  sim->add_option("--delta", sim_cfg.delta);
  sim->add_option("--seeds", sim_cfg.seeds);
  sim->add_option("--exploration", sim_cfg.options.exploration, "EXP3 uniform mixing");

  // verify
  auto* ver = app.add_subcommand("verify", "Equivalence-chain report on a tiny class");
  EquivalenceBudget eq;
  ver->add_option("--class", cls_path)->required();
  ver->add_option("--etas", eq.etas)->delimiter(',');
  ver->add_option("--resolutions", eq.resolutions)->delimiter(',');
  ver->add_option("--q-grid", eq.exo.resolution);
  ver->add_option("--tol", eq.tol);

  // env
  auto* env = app.add_subcommand("env", "Build example model classes");
  std::string family;
  std::size_t arms = 2, m = 2, S = 2, H = 1, K = 1;
  double delta_gap = 0.1;
  std::string actions_arg, thetas_arg;
  env->add_option("family", family)->required()->check(CLI::IsMember({"bandit-grid", "bandit-hard", "linear", "mdp-hard"}));
  env->add_option("--arms,--A", arms);
  env->add_option("--m", m, "Mean grid resolution");
  env->add_option("--delta", delta_gap, "Gap Delta");
  env->add_option("--S", S);
  env->add_option("--H", H);
  env->add_option("--K", K);
  env->add_option("--actions", actions_arg, "JSON list of action vectors");
  env->add_option("--thetas", thetas_arg, "JSON list of parameter vectors");

  try {
    std::vector<std::string> args = merge_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::kValidation);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kValidation);
  }

  try {
    if (*dec) {
      ModelClass cls = load_model_class(cls_path);
      if (hull > 0) cls = hull_grid(cls, hull);
      DecResult r;
      if (sup || reference.empty()) {
        r = dec_value_sup(cls, gamma, eps);
      } else {
        const std::size_t idx = cls.find(reference);
        r = dec_value(cls, gamma, cls[idx], eps);
        r.reference = idx;
      }
      emit_json(g, "dec", dec_json(r, hull));
    } else if (*ir) {
      const ModelClass cls = load_model_class(cls_path);
      ir_budget.seed = g.seed;
      const IrResult r = ir_search(cls, gamma, ir_budget);
      const auto mass = r.best_prior.mass();
      emit_json(g, "ir", {{"value", r.value},
                          {"argmin_decision", r.argmin_decision},
                          {"best_prior", std::vector<double>(mass.begin(), mass.end())},
                          {"method", r.search_report.method},
                          {"evaluations", r.search_report.evaluations},
                          {"trace", r.search_report.trace}});
    } else if (*exo) {
      const ModelClass cls = load_model_class(cls_path);
      if (sup_q > 0) {
        SupQBudget b;
        b.resolution = sup_q;
        b.options = exo_opts;
        const SupQReport r = exo_sup_q(cls, eta, b);
        emit_json(g, "exo", {{"lower", r.lower},
                             {"best_q", r.q_points[r.best_q]},
                             {"q_points", r.q_points},
                             {"per_q_uppers", r.per_q_uppers},
                             {"per_q_lowers", r.per_q_lowers},
                             {"resolution", r.resolution},
                             {"note", "max of per_q_uppers is not an upper bound on the sup over q"}});
      } else {
        std::vector<double> q = q_arg == "uniform"
                                    ? std::vector<double>(cls.num_decisions(), 1.0 / static_cast<double>(cls.num_decisions()))
                                    : FiniteDistribution::from_weights(numbers(q_arg)).vector();
        const ExoSolution s = exo_solve(cls, q, eta, exo_opts);
        const auto gv = s.g.values();
        emit_json(g, "exo", {{"upper", s.upper},
                             {"lower", s.lower},
                             {"p", s.p.vector()},
                             {"g", std::vector<double>(gv.begin(), gv.end())},
                             {"iterations", s.iterations},
                             {"converged", s.converged},
                             {"saturated", s.saturated},
                             {"floor", s.floor},
                             {"clip", s.clip}});
        if (!s.converged) {
          std::cerr << "warning: gap " << s.upper - s.lower << " above tolerance\n";
          return static_cast<int>(ExitCode::kSolver);
        }
      }
    } else if (*div) {
      const auto p = FiniteDistribution::from_weights(numbers(p_arg));
      const auto q = FiniteDistribution::from_weights(numbers(q2_arg));
      if (p.size() != q.size()) throw ValidationError("p and q have different supports");
      json out{{"kind", kind},
               {"value", divergence(parse_divergence_kind(kind), p, q)},
               {"hellinger_sq", hellinger_sq(p.probs(), q.probs())},
               {"mgf_sup", mgf_variational(p, q)}};
      if (clip) out["mgf_clipped"] = mgf_variational(p, q, *clip);
      emit_json(g, "div", out);
    } else if (*sim) {
      const ModelClass cls = load_model_class(cls_path);
      const Adversary adv = make_adversary(cls, json_arg(adv_arg));
      sim_cfg.base_seed = g.seed;
      const SimulationResult res = run_simulation(cls, adv, sim_cfg);
      if (g.format != "json") {
        std::ostringstream os;
        write_csv(os, res);
        emit(g, "simulate.csv", os.str());
      } else {
        emit(g, "simulate.json", to_json(res).dump(2));
      }
      if (res.summary.unconverged_rounds > 0)
        std::cerr << "warning: " << res.summary.unconverged_rounds << " round(s) above the solver tolerance\n";
      if (res.summary.failed > 0) {
        std::cerr << "error: " << res.summary.failed << " seed(s) failed\n";
        return static_cast<int>(ExitCode::kSolver);
      }
    } else if (*ver) {
      const ModelClass cls = load_model_class(cls_path);
      eq.ir.seed = g.seed;
      const EquivalenceReport rep = verify_equivalence(cls, eq);
      if (g.format == "csv") {
        std::ostringstream os;
        os << "# decx-csv v1\nname,kind,eta,resolution,lhs,rhs,passed\n";
        for (const auto& c : rep.checks)
          os << '"' << c.name << "\"," << c.kind << ',' << c.eta << ',' << c.resolution << ',' << c.lhs << ','
             << c.rhs << ',' << (c.passed ? 1 : 0) << '\n';
        emit(g, "verify.csv", os.str());
      } else {
        emit(g, "verify.json", to_json(rep).dump(2));
      }
      if (!rep.rigorous_ok()) return static_cast<int>(ExitCode::kRigorousViolation);
    } else if (*env) {
      BuiltFamily built{ModelClass({make_model(OutcomeSpace({0.0}, {""}), {{1.0}}, "x")}), std::nullopt};
      if (family == "bandit-grid") {
        built = build_bandit_grid(arms, m);
      } else if (family == "bandit-hard") {
        built = build_bandit_hard(arms, delta_gap);
      } else if (family == "linear") {
        built.cls = build_linear(json_arg(actions_arg).get<std::vector<std::vector<double>>>(),
                                 json_arg(thetas_arg).get<std::vector<std::vector<double>>>());
        built.certificate.reset();
      } else {
        built = build_mdp_hard(MdpShape{S, arms, H, K}, delta_gap);
      }
      json doc = to_json(built.cls);
      if (built.certificate) {
        const auto& c = *built.certificate;
        const CertificateCheck chk = check_certificate(built.cls, c);
        doc["certificate"] = {{"alpha", c.alpha}, {"beta", c.beta}, {"delta", c.delta}, {"N", c.n},
                              {"reference", c.reference}, {"members", c.members}, {"u", c.u},
                              {"v", c.v}, {"checks_pass", chk.ok}};
      }
      emit(g, "class.json", doc.dump(2));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kValidation);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kValidation);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (gap " << e.achieved_gap() << ")\n";
    return static_cast<int>(ExitCode::kSolver);
  }
  return static_cast<int>(ExitCode::kOk);
}
