#include "curlmhd/config.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace curlmhd {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(prefix + it.key(), "unknown key");
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

template <class T, class F>
std::vector<T> scalar_or_list(const json& v, const std::string& key, F get) {
  std::vector<T> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(key, "list must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get(v[i], key + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(get(v, key));
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "top level must be an object");
  reject_unknown(j, {"scenario", "method", "k", "n", "nu_s", "nu_m", "T", "dt", "params", "newton", "mesh", "seed",
                     "threads", "output"},
                 "");
  RunConfig c;
  if (!j.contains("scenario") || !j["scenario"].is_string()) throw ConfigError("scenario", "required string");
  c.scenario = j["scenario"].get<std::string>();
  static const std::set<std::string> scenarios{"smooth", "lshape", "field_loop", "orszag_tang"};
  if (!scenarios.count(c.scenario)) throw ConfigError("scenario", "unknown scenario '" + c.scenario + "'");

  if (j.contains("method"))
    c.methods = scalar_or_list<Variant>(j["method"], "method", [](const json& v, const std::string& key) {
      if (!v.is_string()) throw ConfigError(key, "expected a method name");
      try {
        return variant_from_string(v.get<std::string>());
      } catch (const ConfigError& e) {
        throw ConfigError(key, e.what());
      }
    });
  if (j.contains("k")) c.degrees = scalar_or_list<int>(j["k"], "k", get_int);
  for (std::size_t i = 0; i < c.degrees.size(); ++i)
    if (c.degrees[i] != 1 && c.degrees[i] != 2)
      throw ConfigError(j["k"].is_array() ? "k[" + std::to_string(i) + "]" : "k",
                        "unsupported polynomial degree " + std::to_string(c.degrees[i]) + " (expected 1 or 2)");
  if (j.contains("n")) c.resolutions = scalar_or_list<int>(j["n"], "n", get_int);
  for (int n : c.resolutions)
    if (n < 2) throw ConfigError("n", "resolutions must be at least 2");

  std::vector<double> ns, nm;
  if (j.contains("nu_s")) ns = scalar_or_list<double>(j["nu_s"], "nu_s", get_number);
  if (j.contains("nu_m")) nm = scalar_or_list<double>(j["nu_m"], "nu_m", get_number);
  for (double v : ns)
    if (v < 0.0) throw ConfigError("nu_s", "must be non-negative");
  for (double v : nm)
    if (v < 0.0) throw ConfigError("nu_m", "must be non-negative");
  if (!ns.empty() || !nm.empty()) {
    if (ns.empty()) ns = nm;
    if (nm.empty()) nm = ns;
    if (ns.size() == 1 && nm.size() > 1) ns.assign(nm.size(), ns[0]);
    if (nm.size() == 1 && ns.size() > 1) nm.assign(ns.size(), nm[0]);
    if (ns.size() != nm.size()) throw ConfigError("nu_m", "nu_s and nu_m lists must have equal length");
    for (std::size_t i = 0; i < ns.size(); ++i) c.nus.emplace_back(ns[i], nm[i]);
  }
  if (j.contains("T")) {
    c.T = get_number(j["T"], "T");
    if (!(c.T > 0.0)) throw ConfigError("T", "must be positive");
  }
  if (j.contains("dt")) {
    c.dt = get_number(j["dt"], "dt");
    if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw ConfigError("params", "expected an object");
    reject_unknown(p, {"c_s", "alpha", "mu_s", "mu_b", "mu_sigma", "mu_tau"}, "params.");
    auto set = [&](const char* key, double& dst) {
      if (p.contains(key)) dst = get_number(p[key], std::string("params.") + key);
    };
    set("c_s", c.params.c_s);
    set("alpha", c.params.alpha);
    set("mu_s", c.params.mu_s);
    set("mu_b", c.params.mu_b);
    set("mu_sigma", c.params.mu_sigma);
    set("mu_tau", c.params.mu_tau);
    MethodConfig probe;
    probe.params = c.params;
    try {
      probe.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("params." + e.key(), e.what());
    }
  }
  if (j.contains("newton")) {
    const json& p = j["newton"];
    if (!p.is_object()) throw ConfigError("newton", "expected an object");
    reject_unknown(p, {"tol_rel", "tol_abs", "max_iter", "damping", "reuse_jacobian"}, "newton.");
    if (p.contains("tol_rel")) c.newton.tol_rel = get_number(p["tol_rel"], "newton.tol_rel");
    if (p.contains("tol_abs")) c.newton.tol_abs = get_number(p["tol_abs"], "newton.tol_abs");
    if (p.contains("max_iter")) c.newton.max_iter = get_int(p["max_iter"], "newton.max_iter");
    if (p.contains("damping")) c.newton.damping = get_bool(p["damping"], "newton.damping");
    if (p.contains("reuse_jacobian")) c.newton.reuse_jacobian = get_bool(p["reuse_jacobian"], "newton.reuse_jacobian");
    if (c.newton.max_iter < 1) throw ConfigError("newton.max_iter", "must be at least 1");
  }
  if (j.contains("mesh")) {
    const json& p = j["mesh"];
    if (!p.is_object()) throw ConfigError("mesh", "expected an object");
    reject_unknown(p, {"style"}, "mesh.");
    if (p.contains("style")) {
      if (!p["style"].is_string()) throw ConfigError("mesh.style", "expected a string");
      const std::string s = p["style"].get<std::string>();
      if (s == "structured")
        c.style = MeshStyle::structured;
      else if (s == "unstructured")
        c.style = MeshStyle::unstructured;
      else
        throw ConfigError("mesh.style", "expected 'structured' or 'unstructured'");
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      throw ConfigError("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    c.threads = get_int(j["threads"], "threads");
    if (c.threads < 1) throw ConfigError("threads", "must be at least 1");
  }
  if (j.contains("output")) {
    const json& p = j["output"];
    if (!p.is_object()) throw ConfigError("output", "expected an object");
    reject_unknown(p, {"dir", "csv", "vtk", "contours", "series"}, "output.");
    if (p.contains("dir")) {
      if (!p["dir"].is_string()) throw ConfigError("output.dir", "expected a string");
      c.out_dir = p["dir"].get<std::string>();
    }
    if (p.contains("csv")) c.csv = get_bool(p["csv"], "output.csv");
    if (p.contains("vtk")) c.vtk = get_bool(p["vtk"], "output.vtk");
    if (p.contains("contours")) c.contours = get_bool(p["contours"], "output.contours");
    if (p.contains("series")) c.series = get_bool(p["series"], "output.series");
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace curlmhd
