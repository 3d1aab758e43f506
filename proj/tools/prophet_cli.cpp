// prophet: stopping rules for the iid prophet inequality with random horizon.
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prophet/classify.hpp"
#include "prophet/distributions.hpp"
#include "prophet/exact.hpp"
#include "prophet/hardness.hpp"
#include "prophet/json_io.hpp"
#include "prophet/montecarlo.hpp"
#include "prophet/policies.hpp"
#include "prophet/reproduce.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriteriaFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PROPHET_SEED")) return std::strtoull(env, nullptr, 10);
  return 12345;
}

nlohmann::json parse_json_arg(const std::string& text, const char* what) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw prophet::JsonError(std::string(what) + ": malformed JSON");
  return j;
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw prophet::JsonError("config: cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw prophet::JsonError("config: malformed JSON in " + path);
  return j;
}

// Flags override config-file values; a config key only lands in `var` when
// the matching flag was not given on the command line.
bool config_wins(const nlohmann::json& cfg, CLI::App* sub, const std::string& key) {
  if (!cfg.contains(key)) return false;
  CLI::Option* opt = sub->get_option_no_throw("--" + key);
  return opt == nullptr || opt->count() == 0;
}

void take_json_text(const nlohmann::json& cfg, CLI::App* sub, const std::string& key,
                    std::string& var) {
  if (!config_wins(cfg, sub, key)) return;
  const nlohmann::json& v = cfg.at(key);
  var = v.is_string() ? v.get<std::string>() : v.dump();
}

template <typename T>
void take_value(const nlohmann::json& cfg, CLI::App* sub, const std::string& key, T& var) {
  if (config_wins(cfg, sub, key)) var = cfg.at(key).get<T>();
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw prophet::JsonError("output: cannot open " + path);
  out << text;
}

int cmd_classify(const std::string& horizon_text, const std::string& classes_text,
                 const std::string& output) {
  prophet::HorizonDist H = prophet::horizon_from_json(parse_json_arg(horizon_text, "horizon"));
  std::vector<std::string> classes = split_csv(classes_text);
  nlohmann::json out = nlohmann::json::array();
  for (const std::string& c : classes) {
    if (c == "ihr") {
      out.push_back(prophet::to_json(prophet::hazard_monotonicity(H).first));
    } else if (c == "dhr") {
      out.push_back(prophet::to_json(prophet::hazard_monotonicity(H).second));
    } else if (c == "g") {
      out.push_back(
          prophet::to_json(prophet::pgf_order_check(H, prophet::PgfDirection::DominatesGeometric)));
    } else if (c == "gbar") {
      out.push_back(prophet::to_json(
          prophet::pgf_order_check(H, prophet::PgfDirection::DominatedByGeometric)));
    } else if (c == "nbu") {
      out.push_back(prophet::to_json(prophet::aging_class_check(H, prophet::AgingClass::NBU)));
    } else if (c == "hnbue") {
      out.push_back(prophet::to_json(prophet::aging_class_check(H, prophet::AgingClass::HNBUE)));
    } else if (c == "cv") {
      double mu = H.mean();
      out.push_back(
          prophet::to_json(prophet::concentration_check(mu, H.variance(), 2.0 - 1.0 / mu)));
    } else {
      throw prophet::JsonError("classify: unknown class \"" + c + "\"");
    }
  }
  write_out(output, out.dump(2) + "\n");
  return kExitOk;
}

int cmd_eval(const std::string& horizon_text, const std::string& value_text,
             const std::string& policy_text, const std::string& method, std::int64_t runs,
             std::uint64_t seed, const std::string& output) {
  prophet::HorizonDist H = prophet::horizon_from_json(parse_json_arg(horizon_text, "horizon"));
  prophet::ValueDist X = prophet::value_from_json(parse_json_arg(value_text, "value"));
  nlohmann::json pj = parse_json_arg(policy_text, "policy");
  std::string kind = pj.value("kind", "");
  nlohmann::json out;

  if (method == "exact" || method == "both") {
    prophet::EvalReport rep;
    if (kind == "threshold") {
      rep = prophet::threshold_value(H, X, pj.at("pi").get<double>());
    } else if (kind == "randomized") {
      rep = prophet::randomized_threshold_value(H, X, pj.at("pi").get<double>(),
                                                pj.at("q").get<double>());
    } else if (kind == "backward_induction") {
      rep = prophet::backward_induction_value(H, X);
    } else {
      throw prophet::JsonError("eval: no exact formula for policy kind \"" + kind +
                               "\"; use --method mc");
    }
    out["exact"] = prophet::to_json(rep);
  }
  if (method == "mc" || method == "both") {
    prophet::Policy policy = prophet::policy_from_json(pj, H, X);
    out["mc"] = prophet::to_json(prophet::simulate_pair(H, X, policy, runs, seed));
  }
  if (!(method == "exact" || method == "mc" || method == "both"))
    throw prophet::JsonError("eval: --method must be exact, mc, or both");
  write_out(output, out.dump(2) + "\n");
  return kExitOk;
}

int cmd_simulate(const std::string& horizon_text, const std::string& value_text,
                 const std::string& policy_text, std::int64_t runs, std::uint64_t seed,
                 const std::string& output) {
  prophet::HorizonDist H = prophet::horizon_from_json(parse_json_arg(horizon_text, "horizon"));
  prophet::ValueDist X = prophet::value_from_json(parse_json_arg(value_text, "value"));
  prophet::Policy policy = prophet::policy_from_json(parse_json_arg(policy_text, "policy"), H, X);
  prophet::SimReport rep = prophet::simulate_pair(H, X, policy, runs, seed);
  write_out(output, prophet::to_json(rep).dump(2) + "\n");
  return kExitOk;
}

int cmd_hard(double epsilon, const std::string& m_grid_text, bool perturbed, bool cv, int moments,
             const std::string& output) {
  std::vector<std::int64_t> ms;
  for (const std::string& tok : split_csv(m_grid_text)) ms.push_back(std::stoll(tok));
  if (ms.empty()) throw prophet::JsonError("hard: --m-grid must list at least one m");

  std::ostringstream os;
  os << "m,Z_m,E_H,E_MH,pi_bar,gambler,ratio";
  if (perturbed) os << ",linear_slack,concave_slack,target_slack";
  if (cv) os << ",cv2,cv_limit";
  if (moments > 0) os << ",moment_exact,moment_asymptote,moment_ratio";
  os << "\n";
  os.precision(12);
  for (std::int64_t m : ms) {
    prophet::HardCurveRow row = prophet::hard_ratio_curve(epsilon, {m}).front();
    os << row.m << "," << row.Z << "," << row.E_H << "," << row.E_MH << "," << row.pi_bar << ","
       << row.gambler << "," << row.ratio;
    if (perturbed) {
      prophet::PerturbedFamilyPoint pt = prophet::perturbed_horizon(m, epsilon);
      prophet::GbarStepReport steps = prophet::gbar_step_verify(pt);
      os << "," << steps.linear_slack << "," << steps.concave_slack << "," << steps.target_slack;
    }
    if (cv) {
      prophet::CvReport c = prophet::hard_family_cv(epsilon, m);
      os << "," << c.cv2 << "," << c.limit;
    }
    if (moments > 0) {
      prophet::MomentRow mr = prophet::horizon_moment_asymptotics(epsilon, moments, {m}).front();
      os << "," << mr.exact << "," << mr.asymptote << "," << mr.ratio;
    }
    os << "\n";
  }
  write_out(output, os.str());
  return kExitOk;
}

int cmd_reproduce(const std::string& only_text, const std::string& emit,
                  const std::string& output) {
  std::vector<prophet::CriterionResult> results = prophet::reproduce_suite(split_csv(only_text));
  if (results.empty()) throw prophet::JsonError("reproduce: --only matched no criterion");
  std::ostringstream os;
  os.precision(12);
  bool all_pass = true;
  if (emit == "csv") {
    os << "id,name,pass,computed,bound,detail\n";
    for (const auto& r : results) {
      std::string detail = r.detail;
      for (char& ch : detail)
        if (ch == ',') ch = ';';
      os << r.id << "," << r.name << "," << (r.pass ? "pass" : "fail") << "," << r.computed << ","
         << r.bound << "," << detail << "\n";
      all_pass = all_pass && r.pass;
    }
  } else {
    for (const auto& r : results) {
      os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << " " << r.name << ": " << r.detail
         << "\n";
      all_pass = all_pass && r.pass;
    }
  }
  write_out(output, os.str());
  return all_pass ? kExitOk : kExitCriteriaFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stopping rules for the iid prophet inequality with random horizon"};
  app.require_subcommand(1);

  std::string config_path, horizon, value, policy, classes = "ihr,dhr,g,gbar,nbu,hnbue,cv";
  std::string method = "exact", output, m_grid, only, emit = "table";
  std::int64_t runs = 100000;
  std::uint64_t seed = default_seed();
  double epsilon = 0.1;
  bool perturbed = false, cv_flag = false;
  int moments = 0;
  int threads = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    sub->add_option("--output", output, "write the report here instead of stdout");
    sub->add_option("--threads", threads, "worker cap (evaluation is sequential per instance)");
  };

  CLI::App* c_classify = app.add_subcommand("classify", "certify horizon distribution classes");
  c_classify->add_option("--horizon", horizon, "horizon JSON");
  c_classify->add_option("--classes", classes, "comma list of ihr,dhr,g,gbar,nbu,hnbue,cv");
  add_common(c_classify);

  CLI::App* c_eval = app.add_subcommand("eval", "exact and/or Monte Carlo policy evaluation");
  c_eval->add_option("--horizon", horizon, "horizon JSON");
  c_eval->add_option("--value", value, "value JSON");
  c_eval->add_option("--policy", policy, "policy JSON");
  c_eval->add_option("--method", method, "exact | mc | both");
  c_eval->add_option("--runs", runs, "Monte Carlo runs");
  c_eval->add_option("--seed", seed, "RNG seed (default: PROPHET_SEED or 12345)");
  add_common(c_eval);

  CLI::App* c_sim = app.add_subcommand("simulate", "seeded Monte Carlo simulation");
  c_sim->add_option("--horizon", horizon, "horizon JSON");
  c_sim->add_option("--value", value, "value JSON");
  c_sim->add_option("--policy", policy, "policy JSON");
  c_sim->add_option("--runs", runs, "Monte Carlo runs");
  c_sim->add_option("--seed", seed, "RNG seed (default: PROPHET_SEED or 12345)");
  add_common(c_sim);

  CLI::App* c_hard = app.add_subcommand("hard", "hard-family curves as CSV");
  c_hard->add_option("--epsilon", epsilon, "Pareto shape offset");
  c_hard->add_option("--m-grid", m_grid, "comma list of horizon caps");
  c_hard->add_flag("--perturbed", perturbed, "include the Gbar perturbation slack columns");
  c_hard->add_flag("--cv", cv_flag, "include CV^2 and its limit");
  c_hard->add_option("--moments", moments, "include the n-th moment asymptote ratio");
  add_common(c_hard);

  CLI::App* c_rep = app.add_subcommand("reproduce", "run the acceptance-criteria suite");
  c_rep->add_option("--only", only, "comma list of criterion names");
  c_rep->add_option("--emit", emit, "table | csv");
  add_common(c_rep);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) {
      nlohmann::json cfg = load_config(config_path);
      if (sub == c_classify) {
        prophet::detail::check_keys(cfg, {"horizon", "classes", "output", "threads"}, "classify");
        take_json_text(cfg, sub, "horizon", horizon);
        take_value(cfg, sub, "classes", classes);
      } else if (sub == c_eval) {
        prophet::detail::check_keys(
            cfg, {"horizon", "value", "policy", "method", "runs", "seed", "output", "threads"},
            "eval");
        take_json_text(cfg, sub, "horizon", horizon);
        take_json_text(cfg, sub, "value", value);
        take_json_text(cfg, sub, "policy", policy);
        take_value(cfg, sub, "method", method);
        take_value(cfg, sub, "runs", runs);
        take_value(cfg, sub, "seed", seed);
      } else if (sub == c_sim) {
        prophet::detail::check_keys(
            cfg, {"horizon", "value", "policy", "runs", "seed", "output", "threads"}, "simulate");
        take_json_text(cfg, sub, "horizon", horizon);
        take_json_text(cfg, sub, "value", value);
        take_json_text(cfg, sub, "policy", policy);
        take_value(cfg, sub, "runs", runs);
        take_value(cfg, sub, "seed", seed);
      } else if (sub == c_hard) {
        prophet::detail::check_keys(
            cfg, {"epsilon", "m-grid", "perturbed", "cv", "moments", "output", "threads"}, "hard");
        take_value(cfg, sub, "epsilon", epsilon);
        take_value(cfg, sub, "m-grid", m_grid);
        take_value(cfg, sub, "perturbed", perturbed);
        take_value(cfg, sub, "cv", cv_flag);
        take_value(cfg, sub, "moments", moments);
      } else {
        prophet::detail::check_keys(cfg, {"only", "emit", "output", "threads"}, "reproduce");
        take_value(cfg, sub, "only", only);
        take_value(cfg, sub, "emit", emit);
      }
      take_value(cfg, sub, "output", output);
      take_value(cfg, sub, "threads", threads);
    }
    if (sub == c_classify) {
      if (horizon.empty()) throw prophet::JsonError("classify: --horizon is required");
      return cmd_classify(horizon, classes, output);
    }
    if (sub == c_eval) {
      if (horizon.empty() || value.empty() || policy.empty())
        throw prophet::JsonError("eval: --horizon, --value, and --policy are required");
      return cmd_eval(horizon, value, policy, method, runs, seed, output);
    }
    if (sub == c_sim) {
      if (horizon.empty() || value.empty() || policy.empty())
        throw prophet::JsonError("simulate: --horizon, --value, and --policy are required");
      return cmd_simulate(horizon, value, policy, runs, seed, output);
    }
    if (sub == c_hard) return cmd_hard(epsilon, m_grid, perturbed, cv_flag, moments, output);
    return cmd_reproduce(only, emit, output);
  } catch (const std::overflow_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}
