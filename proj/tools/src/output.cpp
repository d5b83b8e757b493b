#include "optomech_cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "optomech/errors.hpp"

namespace optomech::cli {

using nlohmann::json;

namespace {

constexpr const char* kModeAxes[] = {"a1", "a2", "b"};

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) os << ',';
    os << fields[k];
  }
  os << '\n';
}

std::string direction_label(const NonlocalityReport& rep) {
  switch (rep.region.region) {
    case Region::C:
      return *rep.region.one_way == Direction::FirstToSecond
                 ? to_string(rep.first) + "_to_" + to_string(rep.second)
                 : to_string(rep.second) + "_to_" + to_string(rep.first);
    case Region::D:
      return "two_way";
    default:
      return "none";
  }
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

std::string steering_column(Mode from, Mode to) {
  return "G_" + to_string(from) + "_to_" + to_string(to);
}

std::vector<std::string> grid_header(const SweepSpec& spec) {
  std::vector<std::string> cols;
  for (const auto& axis : spec.axes) cols.push_back(column_name(axis.param));
  cols.push_back("EN");
  cols.push_back(steering_column(spec.pair.second, spec.pair.first));
  cols.push_back(steering_column(spec.pair.first, spec.pair.second));
  cols.push_back("stable");
  cols.push_back("region");
  if (spec.outputs.variances) {
    for (const char* m : kModeAxes) {
      cols.push_back(std::string("var_x_") + m);
      cols.push_back(std::string("var_y_") + m);
    }
  }
  if (spec.outputs.diffusion) {
    cols.push_back("D33");
    cols.push_back("D44");
  }
  if (spec.outputs.diagnostics) {
    for (const char* c : {"r", "G", "J_s", "Delta2", "rwa_ratio", "max_real_part", "min_symplectic"}) {
      cols.push_back(c);
    }
  }
  return cols;
}

void write_grid_csv(std::ostream& os, const SweepResult& result) {
  const SweepSpec& spec = result.spec;
  write_row(os, grid_header(spec));
  for (const PointRecord& rec : result.records) {
    std::vector<std::string> row;
    for (const double x : rec.coords) row.push_back(csv_number(x));
    const bool measured = rec.stable && rec.report.has_value();
    if (measured) {
      row.push_back(csv_number(rec.report->e_n));
      row.push_back(csv_number(rec.report->g_21));
      row.push_back(csv_number(rec.report->g_12));
    } else {
      row.insert(row.end(), 3, "");
    }
    row.push_back(rec.stable ? "1" : "0");
    row.push_back(measured ? std::string(1, to_char(rec.report->region.region)) : "");
    if (spec.outputs.variances) {
      for (int k = 0; k < 6; ++k) {
        row.push_back(rec.stable && rec.variances ? csv_number((*rec.variances)[k]) : "");
      }
    }
    if (spec.outputs.diffusion) {
      for (int k = 0; k < 2; ++k) {
        row.push_back(rec.diffusion_a2 ? csv_number((*rec.diffusion_a2)[k]) : "");
      }
    }
    if (spec.outputs.diagnostics) {
      if (rec.derived) {
        row.push_back(csv_number(rec.derived->r));
        row.push_back(csv_number(rec.derived->G));
        row.push_back(csv_number(rec.derived->J_s));
        row.push_back(csv_number(rec.derived->Delta2));
      } else {
        row.insert(row.end(), 4, "");
      }
      row.push_back(rec.rwa ? csv_number(rec.rwa->ratio) : "");
      row.push_back(rec.derived ? csv_number(rec.max_real_part) : "");
      row.push_back(rec.physical ? csv_number(rec.physical->min_symplectic_eigenvalue) : "");
    }
    write_row(os, row);
  }
}

void write_regions_csv(std::ostream& os, const SweepResult& result) {
  const SweepSpec& spec = result.spec;
  std::vector<std::string> header;
  for (const auto& axis : spec.axes) header.push_back(column_name(axis.param));
  header.insert(header.end(), {"region", "direction", "EN",
                               steering_column(spec.pair.second, spec.pair.first),
                               steering_column(spec.pair.first, spec.pair.second)});
  write_row(os, header);
  for (const PointRecord& rec : result.records) {
    std::vector<std::string> row;
    for (const double x : rec.coords) row.push_back(csv_number(x));
    if (rec.stable && rec.report) {
      row.push_back(std::string(1, to_char(rec.report->region.region)));
      row.push_back(direction_label(*rec.report));
      row.push_back(csv_number(rec.report->e_n));
      row.push_back(csv_number(rec.report->g_21));
      row.push_back(csv_number(rec.report->g_12));
    } else {
      row.push_back(rec.stable ? "failed" : "unstable");
      row.insert(row.end(), 4, "");
    }
    write_row(os, row);
  }
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace, const ModePair& pair,
                     double threshold) {
  std::vector<std::string> header = {"t", "EN", steering_column(pair.second, pair.first),
                                     steering_column(pair.first, pair.second)};
  for (const Mode m : {pair.first, pair.second}) {
    header.push_back("var_x_" + to_string(m));
    header.push_back("var_y_" + to_string(m));
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) header.push_back("V" + std::to_string(i) + std::to_string(j));
  }
  write_row(os, header);

  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const CovarianceMatrix& v = trace.covariances[k];
    const NonlocalityReport rep = nonlocality(v, pair, threshold);
    std::vector<std::string> row = {csv_number(trace.times[k]), csv_number(rep.e_n),
                                    csv_number(rep.g_21), csv_number(rep.g_12)};
    for (const Mode m : {pair.first, pair.second}) {
      const QuadratureVariances q = quadrature_variances(v, m);
      row.push_back(csv_number(q.var_x));
      row.push_back(csv_number(q.var_y));
    }
    for (int i = 0; i < 6; ++i) {
      for (int j = i; j < 6; ++j) row.push_back(csv_number(v.v(i, j)));
    }
    write_row(os, row);
  }
}

json to_json(const NonlocalityReport& rep) {
  json j;
  j["pair"] = to_string(ModePair{rep.first, rep.second});
  j["EN"] = rep.e_n;
  j["eta_minus"] = rep.eta_minus;
  j[steering_column(rep.second, rep.first)] = rep.g_21;
  j[steering_column(rep.first, rep.second)] = rep.g_12;
  j["region"] = std::string(1, to_char(rep.region.region));
  j["direction"] = direction_label(rep);
  j["threshold"] = rep.threshold;
  return j;
}

json to_json(const DerivedParams& d) {
  json j;
  j["beta"] = d.beta;
  j["r"] = d.r;
  j["Omega_p_per_wm"] = d.omega_p;
  j["N"] = d.n_bath;
  j["M"] = complex_json(d.m_bath);
  j["delta2_s_per_wm"] = d.delta2_s;
  j["J_s_per_wm"] = d.J_s;
  j["Delta2_per_wm"] = d.Delta2;
  j["Delta1p_per_wm"] = d.Delta1p;
  j["a1s"] = complex_json(d.a1s);
  j["bs"] = complex_json(d.bs);
  j["G_per_wm"] = d.G;
  j["eta"] = d.eta ? json(*d.eta) : json(nullptr);
  j["lambda"] = d.lambda ? json(*d.lambda) : json(nullptr);
  return j;
}

json to_json(const oracle::OracleReport& rep) {
  json j;
  j["name"] = rep.name;
  j["cases_run"] = rep.cases_run;
  j["max_abs_error"] = rep.max_abs_error;
  j["max_rel_error"] = rep.max_rel_error;
  j["tolerance"] = rep.tolerance;
  j["pass"] = rep.pass;
  j["seed"] = rep.seed ? json(*rep.seed) : json(nullptr);
  return j;
}

json extrema_json(const SweepResult& result, const std::vector<Extremum>& extrema) {
  const SweepSpec& spec = result.spec;
  json j;
  j["pair"] = to_string(spec.pair);
  json axes = json::array();
  for (const auto& axis : spec.axes) axes.push_back(format_axis(axis));
  j["axes"] = axes;
  j["spec_hash"] = hex64(result.meta.spec_hash);
  j["threshold"] = result.meta.threshold;
  j["grid_points"] = result.records.size();
  j["unstable_points"] = result.meta.unstable_points;
  j["failed_points"] = result.meta.failed_points;

  double rwa_max = 0.0;
  std::size_t rwa_warnings = 0;
  double min_symplectic = std::numeric_limits<double>::infinity();
  for (const auto& rec : result.records) {
    if (rec.rwa) {
      rwa_max = std::max(rwa_max, rec.rwa->ratio);
      if (rec.rwa->warning) ++rwa_warnings;
    }
    if (rec.physical) min_symplectic = std::min(min_symplectic, rec.physical->min_symplectic_eigenvalue);
  }
  j["rwa"] = {{"max_ratio", rwa_max}, {"warning_points", rwa_warnings}};
  j["min_symplectic_eigenvalue"] =
      std::isfinite(min_symplectic) ? json(min_symplectic) : json(nullptr);

  json list = json::array();
  for (const Extremum& e : extrema) {
    json point = json::object();
    for (std::size_t k = 0; k < spec.axes.size() && k < e.point.size(); ++k) {
      point[column_name(spec.axes[k].param)] = e.point[k];
    }
    list.push_back({{"name", e.name}, {"value", e.value}, {"point", point}, {"history", e.history}});
  }
  j["extrema"] = list;
  j["notes"] = result.meta.notes;
  return j;
}

}  // namespace optomech::cli
