#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "optomech/dynamics.hpp"
#include "optomech/figures.hpp"
#include "optomech/oracle.hpp"
#include "optomech/sweep.hpp"

namespace optomech::cli {

/// Scientific notation with 9 significant digits ("%.8e").
std::string csv_number(double x);

/// "G_b_to_a2" style column names for the two steering directions.
std::string steering_column(Mode from, Mode to);

/// Axis columns, EN, G second→first, G first→second, stable, region, then
/// the optional columns selected by spec.outputs. Unstable points leave every
/// measure field empty.
std::vector<std::string> grid_header(const SweepSpec& spec);
void write_grid_csv(std::ostream& os, const SweepResult& result);

/// Axis columns, region, direction (a2_to_b / b_to_a2 for one-way steering,
/// two_way, none), EN and both steerings.
void write_regions_csv(std::ostream& os, const SweepResult& result);

/// Time, EN, both steerings, the pair's quadrature variances and the upper
/// triangle of the full covariance.
void write_trace_csv(std::ostream& os, const EvolutionTrace& trace, const ModePair& pair,
                     double threshold);

nlohmann::json to_json(const NonlocalityReport& report);
nlohmann::json to_json(const DerivedParams& d);
nlohmann::json to_json(const oracle::OracleReport& report);
nlohmann::json extrema_json(const SweepResult& result, const std::vector<Extremum>& extrema);

}  // namespace optomech::cli
