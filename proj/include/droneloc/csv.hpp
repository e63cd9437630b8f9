#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "droneloc/mission.hpp"

namespace droneloc {

/// 9 significant digits, '.' decimal
/// point regardless of locale.
std::string format_number(double v);

void write_row(std::ostream& out, std::span<const std::string> fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Plain comma-separated reader (no quoting). Throws std::runtime_error on
/// rows whose width differs from the header.
CsvTable read_csv(std::istream& in, std::string_view source);

inline constexpr std::string_view kMeasurementColumns =
    "trial,gd_id,waypoint_id,wx,wy,wz,scan_line,s_measured,clamped";
inline constexpr std::string_view kResultColumns = "trial,gd_id,algorithm,status,est_x,est_y,e_l";
inline constexpr std::string_view kWaypointColumns = "waypoint_id,x,y,z,scan_line";
inline constexpr std::string_view kSummaryColumns =
    "axis,value,algorithm,count,attempts,mean,ci_low,ci_high";

void write_measurements(std::ostream& out, std::span<const TrialResult> results);
void write_results(std::ostream& out, std::span<const TrialResult> results);
void write_waypoints(std::ostream& out, std::span<const Waypoint> path);
void write_summary(std::ostream& out, std::string_view axis, std::span<const SweepRow> rows);

}  // namespace droneloc
