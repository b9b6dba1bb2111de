#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfa/classification.hpp"
#include "sfa/eigenpair.hpp"
#include "sfa/limits.hpp"
#include "sfa/solver.hpp"

namespace sfa::cli {

using nlohmann::json;

// Finite numbers as JSON numbers, others as "inf", "-inf" or "nan".
json number(double v);
double read_number(const json& j);

json to_json(const LimitVerdict& v);
json to_json(const CriterionResult& c);
json to_json(const EndpointReport& e);
json to_json(const SpectrumVerdict& v);
json to_json(const Truncation& t);

// Pretty-printed with sorted keys and a trailing newline.
void write_json(const std::string& path, const json& j);

// Columns s, <prefix>1 .. <prefix>m taken from pairs[first..]; values at
// full precision.  The first line is a "# schema_version=1" comment.
void write_grid_csv(const std::string& path, const std::vector<Eigenpair>& pairs,
                    std::size_t first, const std::string& prefix, bool flux);

struct GridCsv {
  std::vector<double> s;
  std::vector<std::vector<double>> columns;
};

GridCsv read_grid_csv(const std::string& path);

}  // namespace sfa::cli
