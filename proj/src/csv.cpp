#include "droneloc/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace droneloc {

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, ptr);
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

CsvTable read_csv(std::istream& in, std::string_view source) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      out.push_back(s.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw std::runtime_error(std::string(source) + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(table.header.size()) + " fields, found " +
                               std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

void write_measurements(std::ostream& out, std::span<const TrialResult> results) {
  out << kMeasurementColumns << '\n';
  for (const TrialResult& r : results) {
    for (const MeasurementRecord& m : r.measurements) {
      const std::string row[] = {std::to_string(r.trial),
                                 std::to_string(m.gd_id),
                                 std::to_string(m.waypoint.id),
                                 format_number(m.waypoint.position.x),
                                 format_number(m.waypoint.position.y),
                                 format_number(m.waypoint.altitude),
                                 std::to_string(m.waypoint.scan_line),
                                 format_number(m.s_measured),
                                 m.clamped ? "1" : "0"};
      write_row(out, row);
    }
  }
}

void write_results(std::ostream& out, std::span<const TrialResult> results) {
  out << kResultColumns << '\n';
  for (const TrialResult& r : results) {
    for (const EstimateRecord& e : r.estimates) {
      const bool ok = e.outcome.status == EstimateStatus::ok && e.outcome.estimate;
      const std::string row[] = {std::to_string(r.trial),
                                 std::to_string(e.gd_id),
                                 std::string(to_string(e.algorithm)),
                                 std::string(to_string(e.outcome.status)),
                                 ok ? format_number(e.outcome.estimate->x) : "",
                                 ok ? format_number(e.outcome.estimate->y) : "",
                                 e.error ? format_number(*e.error) : ""};
      write_row(out, row);
    }
  }
}

void write_waypoints(std::ostream& out, std::span<const Waypoint> path) {
  out << kWaypointColumns << '\n';
  for (const Waypoint& w : path) {
    const std::string row[] = {std::to_string(w.id), format_number(w.position.x),
                               format_number(w.position.y), format_number(w.altitude),
                               std::to_string(w.scan_line)};
    write_row(out, row);
  }
}

void write_summary(std::ostream& out, std::string_view axis, std::span<const SweepRow> rows) {
  out << kSummaryColumns << '\n';
  for (const SweepRow& r : rows) {
    const std::string row[] = {std::string(axis),
                               format_number(r.value),
                               std::string(to_string(r.algorithm)),
                               std::to_string(r.summary.count),
                               std::to_string(r.attempts),
                               format_number(r.summary.mean),
                               format_number(r.summary.ci_low),
                               format_number(r.summary.ci_high)};
    write_row(out, row);
  }
}

}  // namespace droneloc
