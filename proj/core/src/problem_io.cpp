#include "sfa/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sfa/errors.hpp"

namespace sfa {

namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops '#' comments outside quotes and unquotes values so the INI parser
// sees plain key=value lines.
std::string to_ini(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    bool quoted = false;
    std::string kept;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      if (c == '#' && !quoted) break;
      kept += c;
    }
    kept = trim(kept);
    const auto eq = kept.find('=');
    if (eq != std::string::npos && kept.front() != '[') {
      std::string key = trim(kept.substr(0, eq));
      std::string value = trim(kept.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        value = value.substr(1, value.size() - 2);
      }
      kept = key + "=" + value;
    }
    out << kept << '\n';
  }
  return out.str();
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError(what + ": not a number: '" + text + "'");
  }
  if (trim(text.substr(used)) != "") throw InputError(what + ": not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InputError(what + ": not an integer: '" + text + "'");
  return static_cast<int>(v);
}

std::optional<double> get_double(const pt::ptree& tree, const std::string& key, const std::string& where) {
  auto v = tree.get_optional<std::string>(key);
  if (!v) return std::nullopt;
  return parse_double(*v, where + ": " + key);
}

std::optional<int> get_int(const pt::ptree& tree, const std::string& key, const std::string& where) {
  auto v = tree.get_optional<std::string>(key);
  if (!v) return std::nullopt;
  return parse_int(*v, where + ": " + key);
}

std::string resolve(const std::string& base_dir, const std::string& rel) {
  const fs::path p(rel);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (fs::path(base_dir) / p).string();
}

}  // namespace

Table read_table_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  Table t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InputError(path + ":" + std::to_string(line_no) + ": expected two comma-separated columns");
    }
    const std::string a = trim(line.substr(0, comma));
    const std::string b = trim(line.substr(comma + 1));
    if (t.s.empty() && line_no == 1 && !a.empty() && (std::isalpha(static_cast<unsigned char>(a.front())) != 0)) {
      continue;  // header
    }
    const std::string where = path + ":" + std::to_string(line_no);
    t.s.push_back(parse_double(a, where));
    t.value.push_back(parse_double(b, where));
    if (!std::isfinite(t.s.back()) || !std::isfinite(t.value.back())) {
      throw InputError(where + ": non-finite entry");
    }
    if (t.s.size() > 1 && !(t.s.back() > t.s[t.s.size() - 2])) {
      throw InputError(where + ": s must be strictly increasing");
    }
  }
  if (t.s.size() < 3) throw InputError(path + ": a table needs at least 3 rows");
  return t;
}

CoefficientProblem tabulated_problem(const Table& density, const std::optional<Table>& dynamics,
                                     double k0) {
  for (double v : density.value) {
    if (!(v > 0.0)) throw InputError("tabulated density must be positive");
  }
  const Interval domain(density.s.front(), density.s.back());
  ScalarField p = tabulated_field(density.s, density.value);
  ScalarField k = ScalarField::constant(k0);
  if (dynamics) {
    for (double v : dynamics->value) {
      if (!(v > 0.0)) throw InputError("tabulated dynamics must be positive");
    }
    if (dynamics->s.front() > domain.left || dynamics->s.back() < domain.right) {
      throw InputError("tabulated dynamics must cover the density's range");
    }
    k = tabulated_field(dynamics->s, dynamics->value);
  }
  CoefficientProblem raw(domain, std::move(p), std::move(k), std::nullopt, FamilyParameters{},
                         domain.width() / 8.0);
  return normalize_density(raw);
}

ProblemFile parse_problem_text(const std::string& text, const std::string& base_dir,
                               const std::string& path) {
  pt::ptree tree;
  try {
    std::istringstream in(to_ini(text));
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError(path + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  const auto version = get_int(tree, "schema_version", path);
  if (!version) throw InputError(path + ": missing schema_version");
  if (*version != 1) throw InputError(path + ": unsupported schema_version " + std::to_string(*version));
  const auto section = tree.get_child_optional("problem");
  if (!section) throw InputError(path + ": missing [problem] section");
  const pt::ptree& pr = *section;
  const std::string where = path + " [problem]";
  const auto family = pr.get_optional<std::string>("family");
  if (!family) throw InputError(where + ": missing family");

  FamilyParameters params;
  params.k0 = get_double(pr, "k0", where).value_or(1.0);
  std::optional<CoefficientProblem> problem;
  try {
    if (*family == "uniform_cosine") {
      params.kind = FamilyKind::UniformCosine;
      params.length = get_double(pr, "length", where).value_or(1.0);
    } else if (*family == "gaussian_hermite") {
      params.kind = FamilyKind::GaussianHermite;
    } else if (*family == "power_law") {
      params.kind = FamilyKind::PowerLawCounterexample;
      params.epsilon = get_double(pr, "epsilon", where).value_or(0.5);
      params.k_exponent = get_double(pr, "k_exponent", where).value_or(0.0);
    } else if (*family == "tabulated") {
      const auto dens = pr.get_optional<std::string>("density");
      if (!dens) throw InputError(where + ": tabulated family needs a density CSV");
      std::optional<Table> dyn;
      if (auto k = pr.get_optional<std::string>("dynamics")) dyn = read_table_csv(resolve(base_dir, *k));
      problem = tabulated_problem(read_table_csv(resolve(base_dir, *dens)), dyn, params.k0);
    } else {
      throw InputError(where + ": unknown family '" + *family + "'");
    }
    if (!problem) problem = make_problem(params);
  } catch (const PreconditionError& e) {
    throw InputError(where + ": " + e.what());
  } catch (const ConvergenceError& e) {
    throw InputError(where + ": " + e.what());
  }

  ProblemFile out{path, *family, params, std::move(*problem), std::nullopt, std::nullopt, std::nullopt};
  if (auto solver = tree.get_child_optional("solver")) {
    out.modes = get_int(*solver, "modes", path + " [solver]");
    out.grid = get_int(*solver, "grid", path + " [solver]");
    out.tail_eps = get_double(*solver, "tail_eps", path + " [solver]");
  }
  return out;
}

ProblemFile load_problem_file(const std::string& path) {
  if (!fs::is_regular_file(path)) throw InputError("cannot open " + path);
  const std::string base = fs::path(path).parent_path().string();
  if (fs::path(path).extension() == ".csv") {
    FamilyParameters params;
    return ProblemFile{path,         "tabulated",  params,      tabulated_problem(read_table_csv(path), std::nullopt),
                       std::nullopt, std::nullopt, std::nullopt};
  }
  return parse_problem_text(read_file(path), base, path);
}

}  // namespace sfa
