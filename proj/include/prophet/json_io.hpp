#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "prophet/classify.hpp"
#include "prophet/distributions.hpp"
#include "prophet/exact.hpp"
#include "prophet/montecarlo.hpp"
#include "prophet/policies.hpp"

namespace prophet {

struct JsonError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                       const char* what) {
  if (!j.is_object()) throw JsonError(std::string(what) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw JsonError(std::string(what) + ": unknown key \"" + it.key() + "\"");
  }
}

inline std::string kind_of(const nlohmann::json& j, const char* what) {
  if (!j.is_object() || !j.contains("kind"))
    throw JsonError(std::string(what) + ": missing \"kind\"");
  return j.at("kind").get<std::string>();
}

}  // namespace detail

inline HorizonDist horizon_from_json(const nlohmann::json& j) {
  std::string kind = detail::kind_of(j, "horizon");
  if (kind == "finite") {
    detail::check_keys(j, {"kind", "support", "pmf", "renormalize"}, "horizon");
    return HorizonDist::finite(j.at("support").get<std::vector<std::int64_t>>(),
                               j.at("pmf").get<std::vector<double>>(),
                               j.value("renormalize", false));
  }
  if (kind == "geometric") {
    detail::check_keys(j, {"kind", "q"}, "horizon");
    return HorizonDist::geometric(j.at("q").get<double>());
  }
  if (kind == "zipf") {
    detail::check_keys(j, {"kind", "n", "a"}, "horizon");
    return HorizonDist::zipf(j.at("n").get<std::int64_t>(), j.at("a").get<double>());
  }
  if (kind == "degenerate") {
    detail::check_keys(j, {"kind", "m"}, "horizon");
    return HorizonDist::degenerate(j.at("m").get<std::int64_t>());
  }
  throw JsonError("horizon: unknown kind \"" + kind + "\"");
}

inline ValueDist value_from_json(const nlohmann::json& j) {
  std::string kind = detail::kind_of(j, "value");
  if (kind == "pareto") {
    detail::check_keys(j, {"kind", "epsilon"}, "value");
    return ValueDist::pareto(j.at("epsilon").get<double>());
  }
  if (kind == "two_point") {
    detail::check_keys(j, {"kind", "x1", "x2", "p"}, "value");
    return ValueDist::two_point(j.at("x1").get<double>(), j.at("x2").get<double>(),
                                j.at("p").get<double>());
  }
  if (kind == "uniform") {
    detail::check_keys(j, {"kind", "a", "b"}, "value");
    return ValueDist::uniform(j.at("a").get<double>(), j.at("b").get<double>());
  }
  if (kind == "atomic") {
    detail::check_keys(j, {"kind", "atoms", "probs", "renormalize"}, "value");
    return ValueDist::atomic(j.at("atoms").get<std::vector<double>>(),
                             j.at("probs").get<std::vector<double>>(),
                             j.value("renormalize", false));
  }
  throw JsonError("value: unknown kind \"" + kind + "\"");
}

// "backward_induction" resolves to the per-step thresholds of the discounted
// recursion, so it needs the instance.
inline Policy policy_from_json(const nlohmann::json& j, const HorizonDist& H, const ValueDist& X) {
  std::string kind = detail::kind_of(j, "policy");
  if (kind == "threshold") {
    detail::check_keys(j, {"kind", "pi"}, "policy");
    return Policy(FixedThreshold{j.at("pi").get<double>()});
  }
  if (kind == "randomized") {
    detail::check_keys(j, {"kind", "pi", "q"}, "policy");
    return Policy(RandomizedThreshold{j.at("pi").get<double>(), j.at("q").get<double>()});
  }
  if (kind == "secretary") {
    detail::check_keys(j, {"kind", "m"}, "policy");
    return Policy(SecretaryRule{secretary_waiting_index(j.at("m").get<std::int64_t>())});
  }
  if (kind == "backward_induction") {
    detail::check_keys(j, {"kind"}, "policy");
    DiscountedPolicy dp =
        backward_induction(H.is_finite() ? H : H.truncated(1e-12), X);
    return Policy(StepThresholds{std::move(dp.thresholds)});
  }
  throw JsonError("policy: unknown kind \"" + kind + "\"");
}

inline nlohmann::json to_json(const ClassReport& r) {
  nlohmann::json j{{"class", r.label},
                   {"verdict", to_string(r.verdict)},
                   {"margin", r.margin},
                   {"grid_size", r.grid_size},
                   {"refine_depth", r.refine_depth}};
  if (std::isfinite(r.witness_t)) j["witness_t"] = r.witness_t;
  if (r.witness_h != 0) j["witness_h"] = r.witness_h;
  if (r.witness_k != 0) j["witness_k"] = r.witness_k;
  return j;
}

inline nlohmann::json to_json(const ConcentrationReport& r) {
  return nlohmann::json{{"class", "cv"},
                        {"admissible", r.admissible},
                        {"min_admissible_c", r.min_admissible_c},
                        {"cv", r.cv},
                        {"cv_bound", r.cv_bound},
                        {"variance_bound", r.variance_bound},
                        {"verdict", r.satisfied ? "member" : "non-member"}};
}

inline nlohmann::json to_json(const EvalReport& r) {
  return nlohmann::json{{"gambler", r.gambler}, {"prophet", r.prophet}, {"ratio", r.ratio},
                        {"method", r.method},   {"err", r.err},         {"never_stops", r.never_stops}};
}

inline nlohmann::json to_json(const SimReport& r) {
  nlohmann::json j{{"estimate", r.estimate}, {"se", r.se},           {"runs", r.runs},
                   {"seed", r.seed},         {"policy", r.policy_tag}};
  if (r.paired) {
    j["prophet_estimate"] = r.prophet_estimate;
    j["prophet_se"] = r.prophet_se;
    j["ratio"] = r.ratio;
    j["ratio_se"] = r.ratio_se;
  }
  return j;
}

}  // namespace prophet
