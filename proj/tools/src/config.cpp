#include "optomech_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kRequired = {
    "kappa1_per_wm", "kappa2_per_wm", "gamma_m_per_wm", "J_per_wm",
    "g_per_wm",      "E_per_wm",      "delta2_per_wm",  "delta_per_wm",
};

const std::vector<std::string> kOptional = {
    "Omega_p_per_wm", "r",     "theta",  "mbar",   "detuning_mode", "Delta1_per_wm",
    "omega_m_hz",     "threshold", "pair", "axes", "figure",        "out",
    "t_max_per_wm",   "stride", "dt_per_wm",
};

double number(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ValidationError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(key, "must be finite");
  return x;
}

std::string text(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ValidationError(key, "expected a string");
  return v.get<std::string>();
}

double positive(const json& doc, const std::string& key) {
  const double x = number(doc, key);
  if (x <= 0.0) throw ValidationError(key, "must be > 0");
  return x;
}

}  // namespace

ValidationError::ValidationError(std::string key_path, const std::string& message,
                                 std::vector<std::string> missing)
    : std::runtime_error(key_path.empty() ? message : key_path + ": " + message),
      key_path_(std::move(key_path)),
      missing_(std::move(missing)) {}

const std::vector<std::string>& required_keys() { return kRequired; }
const std::vector<std::string>& optional_keys() { return kOptional; }

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("", "config must be a JSON object");

  std::set<std::string> known(kRequired.begin(), kRequired.end());
  known.insert(kOptional.begin(), kOptional.end());
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ValidationError(key, "unknown key");
  }

  std::vector<std::string> missing;
  for (const auto& key : kRequired) {
    if (!doc.contains(key)) missing.push_back(key);
  }
  const bool has_omega = doc.contains("Omega_p_per_wm");
  const bool has_r = doc.contains("r");
  if (!has_omega && !has_r) missing.push_back("Omega_p_per_wm|r");
  if (!missing.empty()) {
    std::string list;
    for (const auto& key : missing) list += (list.empty() ? "" : ", ") + key;
    throw ValidationError("", "missing required keys: " + list, missing);
  }
  if (has_omega && has_r) throw ValidationError("r", "give either Omega_p_per_wm or r, not both");

  RunConfig c;
  PhysicalParams& p = c.params;
  p.kappa1 = positive(doc, "kappa1_per_wm");
  p.kappa2 = positive(doc, "kappa2_per_wm");
  p.gamma_m = positive(doc, "gamma_m_per_wm");
  p.J = number(doc, "J_per_wm");
  p.g = number(doc, "g_per_wm");
  p.E = number(doc, "E_per_wm");
  p.delta2 = number(doc, "delta2_per_wm");
  p.delta = number(doc, "delta_per_wm");

  if (has_omega) {
    const double omega_p = number(doc, "Omega_p_per_wm");
    if (omega_p != 0.0 && (p.delta2 == 0.0 || std::abs(omega_p / p.delta2) >= 1.0)) {
      throw ValidationError("Omega_p_per_wm",
                            "|Omega_p/delta2| must be < 1 (arctanh domain of r = artanh(Omega_p/delta2)/2)");
    }
    p.pump = PumpAmplitude{omega_p};
  } else {
    p.pump = SqueezingParameter{number(doc, "r")};
  }

  p.theta = doc.contains("theta") ? number(doc, "theta") : 0.0;
  p.mbar = doc.contains("mbar") ? number(doc, "mbar") : 0.0;
  if (p.mbar < 0.0) throw ValidationError("mbar", "must be >= 0");
  if (doc.contains("detuning_mode")) {
    try {
      p.detuning_mode = detuning_mode_from_string(text(doc, "detuning_mode"));
    } catch (const DomainError& e) {
      throw ValidationError("detuning_mode", e.what());
    }
  }
  if (doc.contains("Delta1_per_wm")) {
    p.Delta1 = number(doc, "Delta1_per_wm");
  } else if (p.detuning_mode == DetuningMode::SelfConsistent) {
    throw ValidationError("Delta1_per_wm", "required when detuning_mode is self-consistent",
                          {"Delta1_per_wm"});
  }

  if (doc.contains("omega_m_hz")) {
    c.omega_m_hz = positive(doc, "omega_m_hz");
    p.omega_m_rad_s = 2.0 * std::numbers::pi * *c.omega_m_hz;
  }
  if (doc.contains("threshold")) {
    c.threshold = number(doc, "threshold");
    if (c.threshold < 0.0) throw ValidationError("threshold", "must be >= 0");
  }
  if (doc.contains("pair")) {
    try {
      c.pair = pair_from_string(text(doc, "pair"));
    } catch (const Error& e) {
      throw ValidationError("pair", e.what());
    }
  }
  if (doc.contains("axes")) {
    const json& axes = doc.at("axes");
    if (!axes.is_array()) throw ValidationError("axes", "expected an array of NAME=MIN:MAX:COUNT[:log]");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const std::string key = "axes[" + std::to_string(i) + "]";
      if (!axes[i].is_string()) throw ValidationError(key, "expected a string");
      try {
        c.axes.push_back(parse_axis(axes[i].get<std::string>()));
      } catch (const Error& e) {
        throw ValidationError(key, e.what());
      }
    }
    SweepSpec spec;
    spec.base = p;
    spec.axes = c.axes;
    spec.pair = c.pair;
    if (!c.axes.empty()) {
      try {
        validate(spec);
      } catch (const Error& e) {
        throw ValidationError("axes", e.what());
      }
    }
  }
  if (doc.contains("figure")) c.figure = text(doc, "figure");
  if (doc.contains("out")) c.out = text(doc, "out");
  if (doc.contains("t_max_per_wm")) c.t_max = positive(doc, "t_max_per_wm");
  if (doc.contains("dt_per_wm")) c.dt = positive(doc, "dt_per_wm");
  if (doc.contains("stride")) {
    const json& v = doc.at("stride");
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ValidationError("stride", "expected an integer >= 1");
    }
    c.stride = v.get<std::size_t>();
  }

  try {
    validate(p);
  } catch (const DomainError& e) {
    throw ValidationError("", e.what());
  }
  return c;
}

RunConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json emit_config(const RunConfig& c) {
  const PhysicalParams& p = c.params;
  json doc = json::object();
  doc["kappa1_per_wm"] = p.kappa1;
  doc["kappa2_per_wm"] = p.kappa2;
  doc["gamma_m_per_wm"] = p.gamma_m;
  doc["J_per_wm"] = p.J;
  doc["g_per_wm"] = p.g;
  doc["E_per_wm"] = p.E;
  doc["delta2_per_wm"] = p.delta2;
  doc["delta_per_wm"] = p.delta;
  if (const auto* amp = std::get_if<PumpAmplitude>(&p.pump)) {
    doc["Omega_p_per_wm"] = amp->omega_p;
  } else {
    doc["r"] = std::get<SqueezingParameter>(p.pump).r;
  }
  doc["theta"] = p.theta;
  doc["mbar"] = p.mbar;
  doc["detuning_mode"] = to_string(p.detuning_mode);
  doc["Delta1_per_wm"] = p.Delta1;
  if (c.omega_m_hz) doc["omega_m_hz"] = *c.omega_m_hz;
  doc["threshold"] = c.threshold;
  doc["pair"] = to_string(c.pair);
  if (!c.axes.empty()) {
    json axes = json::array();
    for (const auto& axis : c.axes) axes.push_back(format_axis(axis));
    doc["axes"] = axes;
  }
  if (c.figure) doc["figure"] = *c.figure;
  if (c.out) doc["out"] = *c.out;
  if (c.t_max) doc["t_max_per_wm"] = *c.t_max;
  if (c.dt) doc["dt_per_wm"] = *c.dt;
  if (c.stride) doc["stride"] = *c.stride;
  return doc;
}

}  // namespace optomech::cli
