#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hejhal_lab/geometry.hpp"

namespace hejhal_lab {

struct SampleSettings {
  int z = 8;        // interior z samples for the fit
  int w = 12;       // parameter samples, kept off the cuts
  int suita = 20;   // Suita points
  int kappa = 10;   // parameters for the vanishing-period check
  double margin = 0.08;
};

struct SweepSpec {
  cplx start{0.0, 0.75};
  cplx end{0.0, 0.75};
  double r0 = 0.1;
  double ratio = 0.5;
};

// Parsed run configuration. Unknown keys are rejected so that typos in
// tolerance names do not pass silently.
struct RunConfig {
  Domain domain;
  int N = 256;
  int dirichlet_oversample = 2;
  std::optional<std::vector<AnchorHint>> anchors;  // empty optional: automatic cuts
  uint64_t seed = 42;
  SampleSettings samples;
  std::optional<double> tolerance;           // global override
  std::map<std::string, double> tolerances;  // per-check overrides
  SweepSpec sweep;
  cplx tabulate_w{0.0, 0.0};
  int tabulate_j = 1;
  std::optional<cplx> a;      // interior parameter for single-point checks
  double boundary_t = 0.0;    // outer-curve parameter for the boundary sign checks

  double tol(const std::string& name, double fallback) const {
    if (tolerance) return *tolerance;
    const auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
};

namespace detail {

using nlohmann::json;

inline Error config_error(const std::string& what) { return Error(Errc::config, what); }

inline cplx parse_point(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw config_error(std::string(key) + " must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline CurveParam parse_curve(const json& c, size_t index) {
  const auto& co = c.at("coeffs");
  if (!co.is_array() || co.empty()) throw config_error("curve " + std::to_string(index) + ": coeffs must be a list");
  std::vector<FourierTerm> terms;
  for (const auto& t : co) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number() || !t[2].is_number())
      throw config_error("curve " + std::to_string(index) + ": each coefficient is [k, re, im]");
    terms.push_back({t[0].get<int>(), cplx(t[1].get<double>(), t[2].get<double>())});
  }
  return CurveParam(terms);
}

template <class T>
T get_number(const json& j, const char* key) {
  if (!j.is_number()) throw config_error(std::string(key) + " must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw config_error(std::string(key) + " must be an integer");
  }
  return j.get<T>();
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw config_error("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::config_error;
  using detail::get_number;
  if (!j.is_object()) throw config_error("config must be a JSON object");
  detail::reject_unknown(j,
                         {"curves", "N", "cuts", "seed", "samples", "tolerance", "tolerances", "dirichlet_oversample",
                          "sweep", "tabulate", "a", "boundary_t", "name", "description"},
                         "config");
  RunConfig rc;
  if (!j.contains("curves") || !j["curves"].is_array()) throw config_error("'curves' list is required");
  std::optional<CurveParam> outer;
  std::vector<CurveParam> inners;
  for (size_t i = 0; i < j["curves"].size(); ++i) {
    const auto& c = j["curves"][i];
    if (!c.is_object() || !c.contains("role") || !c["role"].is_string())
      throw config_error("curve " + std::to_string(i) + ": 'role' is required");
    const std::string role = c["role"];
    CurveParam cp;
    try {
      cp = detail::parse_curve(c, i);
    } catch (const nlohmann::json::exception& e) {
      throw config_error("curve " + std::to_string(i) + ": " + e.what());
    }
    if (role == "outer") {
      if (outer) throw config_error("more than one outer curve");
      outer = cp;
    } else if (role == "inner") {
      inners.push_back(cp);
    } else {
      throw config_error("curve " + std::to_string(i) + ": role must be 'outer' or 'inner'");
    }
  }
  if (!outer) throw config_error("no curve tagged outer");
  rc.domain = build_domain(*outer, inners);

  if (j.contains("N")) rc.N = get_number<int>(j["N"], "N");
  if (rc.N <= 0 || rc.N % 2) throw config_error("N must be a positive even integer");
  if (j.contains("dirichlet_oversample")) rc.dirichlet_oversample = get_number<int>(j["dirichlet_oversample"], "dirichlet_oversample");
  if (rc.dirichlet_oversample < 1) throw config_error("dirichlet_oversample must be >= 1");
  if (j.contains("seed")) rc.seed = get_number<uint64_t>(j["seed"], "seed");

  if (j.contains("cuts")) {
    const auto& c = j["cuts"];
    if (c.is_string()) {
      if (c != "auto") throw config_error("cuts must be \"auto\" or an object");
    } else if (c.is_object()) {
      detail::reject_unknown(c, {"anchors"}, "cuts");
      if (c.contains("anchors")) {
        const auto& a = c["anchors"];
        if (a.is_string()) {
          if (a != "auto") throw config_error("anchors must be \"auto\" or a list");
        } else if (a.is_array()) {
          std::vector<AnchorHint> hints;
          for (const auto& h : a) {
            if (!h.is_object() || !h.contains("outer_t") || !h.contains("inner_t"))
              throw config_error("each anchor is {\"outer_t\": t, \"inner_t\": t}");
            hints.push_back({get_number<double>(h["outer_t"], "outer_t"), get_number<double>(h["inner_t"], "inner_t")});
          }
          rc.anchors = hints;
        } else {
          throw config_error("anchors must be \"auto\" or a list");
        }
      }
    } else {
      throw config_error("cuts must be \"auto\" or an object");
    }
  }

  if (j.contains("samples")) {
    const auto& s = j["samples"];
    if (!s.is_object()) throw config_error("samples must be an object");
    detail::reject_unknown(s, {"z", "w", "suita", "kappa", "margin"}, "samples");
    if (s.contains("z")) rc.samples.z = get_number<int>(s["z"], "samples.z");
    if (s.contains("w")) rc.samples.w = get_number<int>(s["w"], "samples.w");
    if (s.contains("suita")) rc.samples.suita = get_number<int>(s["suita"], "samples.suita");
    if (s.contains("kappa")) rc.samples.kappa = get_number<int>(s["kappa"], "samples.kappa");
    if (s.contains("margin")) rc.samples.margin = get_number<double>(s["margin"], "samples.margin");
    if (rc.samples.z < 1 || rc.samples.w < 1 || rc.samples.suita < 1 || rc.samples.kappa < 1)
      throw config_error("sample counts must be positive");
    if (!(rc.samples.margin > 0.0)) throw config_error("samples.margin must be positive");
  }

  if (j.contains("tolerance")) {
    rc.tolerance = get_number<double>(j["tolerance"], "tolerance");
    if (!(*rc.tolerance > 0.0)) throw config_error("tolerance must be positive");
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw config_error("tolerances must be an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      const double v = get_number<double>(it.value(), it.key().c_str());
      if (!(v > 0.0)) throw config_error("tolerance " + it.key() + " must be positive");
      rc.tolerances[it.key()] = v;
    }
  }

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (!s.is_object()) throw config_error("sweep must be an object");
    detail::reject_unknown(s, {"start", "end", "r0", "ratio"}, "sweep");
    if (s.contains("start")) rc.sweep.start = rc.sweep.end = detail::parse_point(s["start"], "sweep.start");
    if (s.contains("end")) rc.sweep.end = detail::parse_point(s["end"], "sweep.end");
    if (s.contains("r0")) rc.sweep.r0 = get_number<double>(s["r0"], "sweep.r0");
    if (s.contains("ratio")) rc.sweep.ratio = get_number<double>(s["ratio"], "sweep.ratio");
    if (!(rc.sweep.r0 > 0.0) || !(rc.sweep.ratio > 0.0 && rc.sweep.ratio < 1.0))
      throw config_error("sweep needs r0 > 0 and 0 < ratio < 1");
  }
  if (j.contains("tabulate")) {
    const auto& t = j["tabulate"];
    if (!t.is_object()) throw config_error("tabulate must be an object");
    detail::reject_unknown(t, {"w", "j"}, "tabulate");
    if (t.contains("w")) rc.tabulate_w = detail::parse_point(t["w"], "tabulate.w");
    if (t.contains("j")) rc.tabulate_j = get_number<int>(t["j"], "tabulate.j");
  }
  if (j.contains("a")) rc.a = detail::parse_point(j["a"], "a");
  if (j.contains("boundary_t")) rc.boundary_t = get_number<double>(j["boundary_t"], "boundary_t");
  return rc;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace hejhal_lab
