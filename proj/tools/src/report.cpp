#include "sfa_cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sfa/errors.hpp"
#include "sfa_cli/run.hpp"

namespace sfa::cli {

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    if (s == "nan") return std::nan("");
  }
  throw InputError("expected a number, got " + j.dump());
}

json to_json(const LimitVerdict& v) {
  json trace = json::array();
  for (const auto& p : v.trace) trace.push_back({number(p.x), number(p.value)});
  json j{{"kind", to_string(v.kind)}, {"method", v.method}, {"trace", trace}};
  if (v.kind == LimitKind::ConvergesTo) j["value"] = number(v.value);
  if (v.kind == LimitKind::Diverges) j["sign"] = v.sign;
  return j;
}

json to_json(const CriterionResult& c) {
  return {{"name", c.name},
          {"status", to_string(c.status)},
          {"advisory", c.advisory},
          {"note", c.note},
          {"verdict", to_json(c.verdict)}};
}

json to_json(const EndpointReport& e) {
  json criteria = json::array();
  for (const auto& c : e.criteria) criteria.push_back(to_json(c));
  return {{"side", to_string(e.side)},
          {"endpoint", number(e.endpoint)},
          {"regular", e.regular},
          {"kind", to_string(e.kind)},
          {"x0", number(e.x0)},
          {"natural_conditions", e.natural_conditions},
          {"lc_evidence", to_json(e.lc_evidence)},
          {"criteria", criteria}};
}

json to_json(const SpectrumVerdict& v) {
  json just = json::array();
  for (const auto& j : v.justification) {
    just.push_back({{"side", to_string(j.side)}, {"criterion", j.criterion}, {"outcome", j.outcome}});
  }
  return {{"discrete", to_string(v.discrete)}, {"bd", v.bd}, {"justification", just}};
}

json to_json(const Truncation& t) {
  return {{"left", number(t.effective.left)},
          {"right", number(t.effective.right)},
          {"tail_mass", number(t.tail_mass)},
          {"tail_left", number(t.tail_left)},
          {"tail_right", number(t.tail_right)},
          {"rule", t.rule}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_grid_csv(const std::string& path, const std::vector<Eigenpair>& pairs,
                    std::size_t first, const std::string& prefix, bool flux) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << "# schema_version=" << kSchemaVersion << '\n' << 's';
  for (std::size_t k = first; k < pairs.size(); ++k) out << ',' << prefix << pairs[k].index;
  out << '\n';
  if (pairs.empty()) return;
  const auto grid = pairs.front().g.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << fmt(grid[i]);
    for (std::size_t k = first; k < pairs.size(); ++k) {
      out << ',' << fmt(flux ? pairs[k].flux.values()[i] : pairs[k].g.values()[i]);
    }
    out << '\n';
  }
}

GridCsv read_grid_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  GridCsv csv;
  std::string line;
  bool header = false;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header) {
      header = true;
      width = cells.size();
      csv.columns.resize(width - 1);
      continue;
    }
    if (cells.size() != width) throw InputError(path + ": ragged row");
    try {
      csv.s.push_back(std::stod(cells[0]));
      for (std::size_t c = 1; c < width; ++c) csv.columns[c - 1].push_back(std::stod(cells[c]));
    } catch (const std::exception&) {
      throw InputError(path + ": malformed number in '" + line + "'");
    }
  }
  if (csv.s.size() < 2) throw InputError(path + ": no data rows");
  return csv;
}

}  // namespace sfa::cli
