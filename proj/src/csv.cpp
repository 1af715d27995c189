// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iomanip>
#include <sstream>

#include "irs/experiment.hpp"

namespace irs {

namespace {

constexpr const char* kHeader =
    "figure_id,seed,sweep_value,algorithm_label,c_s,c_b,c_e,p_min,iterations,wall_time_ms,error";
constexpr int kFields = 11;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

double number(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::Io, "line " + std::to_string(line) + ": not a number: '" + s + "'");
}

}  // namespace

void emit_csv(const std::vector<TrialRecord>& rows, std::ostream& os) {
  os << kHeader << '\n';
  for (const auto& r : rows) {
    os << r.figure_id << ',' << r.seed << ',' << fmt(r.sweep_value) << ',' << r.algorithm_label << ',' << fmt(r.c_s)
       << ',' << fmt(r.c_b) << ',' << fmt(r.c_e) << ',' << fmt(r.p_min) << ',' << r.iterations << ','
       << fmt(r.wall_time_ms) << ',' << r.error << '\n';
  }
}

void emit_csv(const std::vector<TrialRecord>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  emit_csv(rows, os);
  os.flush();
  if (!os) throw Error(ErrorCode::Io, "write failed: " + path);
}

std::vector<TrialRecord> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader) throw Error(ErrorCode::Io, "missing or unexpected CSV header");
  std::vector<TrialRecord> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (static_cast<int>(f.size()) != kFields)
      throw Error(ErrorCode::Io, "line " + std::to_string(lineno) + ": expected 11 fields");
    TrialRecord r;
    r.figure_id = f[0];
    r.seed = std::stoull(f[1]);
    r.sweep_value = number(f[2], lineno);
    r.algorithm_label = f[3];
    r.c_s = number(f[4], lineno);
    r.c_b = number(f[5], lineno);
    r.c_e = number(f[6], lineno);
    if (!f[7].empty()) r.p_min = number(f[7], lineno);
    r.iterations = static_cast<int>(number(f[8], lineno));
    if (!f[9].empty()) r.wall_time_ms = number(f[9], lineno);
    r.error = f[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace irs
