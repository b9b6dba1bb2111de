#include "sfa_cli/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sfa/analysis.hpp"
#include "sfa/canonical.hpp"
#include "sfa/classification.hpp"
#include "sfa/composition.hpp"
#include "sfa/empirical.hpp"
#include "sfa/errors.hpp"
#include "sfa/problem_io.hpp"
#include "sfa/solver.hpp"
#include "sfa_cli/report.hpp"

#ifndef SFA_VERSION
#define SFA_VERSION "0.0.0"
#endif

namespace sfa::cli {

namespace {

namespace fs = std::filesystem;

struct Knobs {
  int modes = 5;
  int grid = 2048;
  double tail_eps = 1e-12;
};

struct Check {
  std::string name;
  bool pass = false;
  json value;
  std::string detail;
};

FamilyKind family_kind(const std::string& name) {
  if (name == "uniform_cosine") return FamilyKind::UniformCosine;
  if (name == "gaussian_hermite") return FamilyKind::GaussianHermite;
  if (name == "power_law") return FamilyKind::PowerLawCounterexample;
  throw InputError("unknown family '" + name + "' (uniform_cosine, gaussian_hermite, power_law)");
}

std::vector<ProblemFile> load_problems(const RunConfig& cfg) {
  std::vector<ProblemFile> out;
  if (cfg.family) {
    FamilyParameters params;
    params.kind = family_kind(*cfg.family);
    out.push_back(ProblemFile{"", *cfg.family, params, make_problem(params), std::nullopt,
                              std::nullopt, std::nullopt});
  }
  for (const auto& path : cfg.problems) out.push_back(load_problem_file(path));
  if (out.empty()) throw InputError(cfg.subcommand + ": no problem file given");
  return out;
}

Knobs resolve_knobs(const RunConfig& cfg, const ProblemFile& pf) {
  Knobs k;
  k.modes = cfg.modes.value_or(pf.modes.value_or(k.modes));
  k.grid = cfg.grid.value_or(pf.grid.value_or(k.grid));
  k.tail_eps = cfg.tail_eps.value_or(pf.tail_eps.value_or(k.tail_eps));
  if (k.modes < 0 || k.modes > 64) throw InputError("modes must be in [0, 64]");
  if (k.grid < 16 || k.grid > (1 << 22)) throw InputError("grid must be in [16, 4194304]");
  if (!(k.tail_eps > 0.0 && k.tail_eps <= 1e-2)) throw InputError("tail-eps must be in (0, 1e-2]");
  return k;
}

json knobs_json(const Knobs& k) {
  return {{"modes", k.modes}, {"grid", k.grid}, {"tail_eps", number(k.tail_eps)}};
}

json config_json(const RunConfig& cfg) {
  json j{{"subcommand", cfg.subcommand},
         {"problems", cfg.problems},
         {"seed", cfg.seed},
         {"allow_nondiscrete", cfg.allow_nondiscrete}};
  j["family"] = cfg.family ? json(*cfg.family) : json(nullptr);
  j["from"] = cfg.from ? json(*cfg.from) : json(nullptr);
  if (cfg.subcommand == "empirical") {
    j["degree"] = cfg.degree;
    j["steps"] = cfg.steps;
    j["dt"] = number(cfg.dt);
    j["trajectory_csv"] = cfg.trajectory_csv;
  }
  if (cfg.subcommand == "verify") j["delta_tol"] = number(cfg.delta_tol);
  return j;
}

json problem_json(const ProblemFile& pf) {
  const auto& p = pf.parameters;
  json params = json::object();
  params["k0"] = number(p.k0);
  if (p.kind == FamilyKind::UniformCosine) params["length"] = number(p.length);
  if (p.kind == FamilyKind::PowerLawCounterexample) {
    params["epsilon"] = number(p.epsilon);
    params["k_exponent"] = number(p.k_exponent);
  }
  const auto& d = pf.problem.domain();
  return {{"path", pf.path},
          {"family", pf.family},
          {"parameters", params},
          {"domain", {number(d.left), number(d.right)}}};
}

json header(const RunConfig& cfg) {
  return {{"schema_version", kSchemaVersion}, {"config", config_json(cfg)}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Report plus a sidecar carrying the only non-reproducible fields.
void emit(const RunConfig& cfg, const std::string& name, const json& report) {
  const fs::path dir(cfg.out);
  write_json((dir / (name + ".json")).string(), report);
  write_json((dir / (name + ".meta.json")).string(),
             {{"report", name + ".json"}, {"created_utc", utc_now()}, {"version", SFA_VERSION}});
}

json checks_json(const std::vector<Check>& checks, std::vector<std::string>* failed) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"detail", c.detail}});
    if (!c.pass) failed->push_back(c.name);
  }
  return arr;
}

int report_failures(const std::vector<std::string>& failed, std::ostream& err) {
  if (failed.empty()) return kOk;
  err << "failed checks:";
  for (const auto& f : failed) err << ' ' << f;
  err << '\n';
  return kCheckFailed;
}

struct Solved {
  SolveResult result;
  SpectrumVerdict verdict;
};

// Solves after classification; nullopt (with a message) when the verdict is
// not Yes and no override was given.
std::optional<Solved> solve_checked(const RunConfig& cfg, const ProblemFile& pf, const Knobs& k,
                                    std::ostream& err, std::string* refusal) {
  Solved s;
  s.verdict = spectrum_verdict(pf.problem);
  if (s.verdict.discrete != Decision::Yes && !cfg.allow_nondiscrete) {
    *refusal = std::string("spectrum verdict is '") + to_string(s.verdict.discrete) +
               "'; pass --allow-nondiscrete to solve the truncated problem anyway";
    err << (pf.path.empty() ? pf.family : pf.path) << ": " << *refusal << '\n';
    return std::nullopt;
  }
  SolveOptions opt;
  opt.modes = k.modes;
  opt.grid = k.grid;
  opt.tail_eps = k.tail_eps;
  opt.allow_nondiscrete = cfg.allow_nondiscrete;
  opt.known_verdict = s.verdict.discrete;
  s.result = solve_eigenpairs(pf.problem, opt);
  return s;
}

json pairs_json(const SolveResult& r) {
  json arr = json::array();
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const auto& p = r.pairs[i];
    json e{{"index", p.index},
           {"lambda", number(p.lambda)},
           {"normalization", number(p.normalization)},
           {"sign_convention", p.sign_convention}};
    e["lambda_refined"] = i < r.lambda_refined.size() ? number(r.lambda_refined[i]) : json(nullptr);
    e["richardson_error"] = p.richardson_error ? number(*p.richardson_error) : json(nullptr);
    arr.push_back(e);
  }
  return arr;
}

// ---------------------------------------------------------------------------

int run_classify(const RunConfig& cfg, std::ostream&) {
  const auto problems = load_problems(cfg);
  if (problems.size() != 1) throw InputError("classify takes exactly one problem");
  const auto& pf = problems.front();
  const ClassificationReport rep = classify_problem(pf.problem);
  NormalizationResult mass = density_mass(pf.problem);
  json j = header(cfg);
  j["problem"] = problem_json(pf);
  j["endpoints"] = {to_json(rep.left), to_json(rep.right)};
  j["verdict"] = to_json(rep.verdict);
  j["quadrature"] = {{"density_mass", number(mass.mass)},
                     {"error_estimate", number(mass.quadrature.error_estimate)},
                     {"discarded_tail", number(mass.quadrature.discarded_tail)},
                     {"evaluations", mass.quadrature.evaluations},
                     {"panels", mass.quadrature.panels},
                     {"converged", mass.quadrature.converged}};
  emit(cfg, "classify", j);
  return kOk;
}

int run_solve(const RunConfig& cfg, std::ostream& err) {
  const auto problems = load_problems(cfg);
  if (problems.size() != 1) throw InputError("solve takes exactly one problem");
  const auto& pf = problems.front();
  const Knobs k = resolve_knobs(cfg, pf);
  json j = header(cfg);
  j["problem"] = problem_json(pf);
  j["knobs"] = knobs_json(k);
  std::string refusal;
  const auto solved = solve_checked(cfg, pf, k, err, &refusal);
  if (!solved) {
    j["status"] = "refused";
    j["reason"] = refusal;
    emit(cfg, "solve", j);
    return kCheckFailed;
  }
  const SolveResult& r = solved->result;
  j["status"] = "solved";
  j["verdict"] = to_json(solved->verdict);
  j["override_used"] = r.override_used;
  j["truncation"] = to_json(r.truncation);
  j["grid"] = r.grid;
  j["pairs"] = pairs_json(r);
  j["files"] = {{"eigenfunctions", "eigenfunctions.csv"}, {"flux", "flux.csv"}};
  const fs::path dir(cfg.out);
  write_grid_csv((dir / "eigenfunctions.csv").string(), r.pairs, 1, "g", false);
  write_grid_csv((dir / "flux.csv").string(), r.pairs, 1, "F", true);
  emit(cfg, "solve", j);
  return kOk;
}

// Rebuilds eigenpairs 1..m from a previous solve's output directory.
std::vector<Eigenpair> load_pairs(const std::string& dir, const CoefficientProblem& problem) {
  const fs::path base(dir);
  std::ifstream in(base / "solve.json");
  if (!in) throw InputError("cannot open " + (base / "solve.json").string());
  json solve;
  try {
    in >> solve;
  } catch (const json::exception& e) {
    throw InputError("malformed solve.json: " + std::string(e.what()));
  }
  if (solve.value("schema_version", 0) != kSchemaVersion || solve.value("status", "") != "solved") {
    throw InputError("solve.json is not a successful schema_version 1 solve");
  }
  const GridCsv g = read_grid_csv((base / "eigenfunctions.csv").string());
  const GridCsv f = read_grid_csv((base / "flux.csv").string());
  if (g.s != f.s || g.columns.size() != f.columns.size()) {
    throw InputError("eigenfunctions.csv and flux.csv disagree");
  }
  const auto& listed = solve.at("pairs");
  if (listed.size() != g.columns.size() + 1) throw InputError("solve.json and CSV mode counts differ");
  std::vector<double> density;
  for (double s : g.s) {
    if (!problem.domain().contains_closed(s)) throw InputError("solution grid lies outside the problem domain");
    density.push_back(problem.p(s));
  }
  std::vector<Eigenpair> pairs;
  for (std::size_t c = 0; c < g.columns.size(); ++c) {
    Eigenpair p;
    p.index = listed[c + 1].at("index").get<int>();
    p.lambda = read_number(listed[c + 1].at("lambda"));
    p.g = GridFunction(g.s, g.columns[c]);
    p.flux = GridFunction(f.s, f.columns[c]);
    p.density = density;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

template <class F>
void guarded(std::vector<Check>& checks, const std::string& name, F&& body) {
  Check c;
  c.name = name;
  try {
    body(c);
  } catch (const Error& e) {
    c.pass = false;
    c.detail = e.what();
  }
  checks.push_back(std::move(c));
}

int run_verify(const RunConfig& cfg, std::ostream& err) {
  const auto problems = load_problems(cfg);
  if (problems.size() != 1) throw InputError("verify takes exactly one problem");
  const auto& pf = problems.front();
  const CoefficientProblem& problem = pf.problem;
  json j = header(cfg);
  j["problem"] = problem_json(pf);

  const ClassificationReport cls = classify_problem(problem);
  std::vector<Eigenpair> pairs;
  if (cfg.from) {
    pairs = load_pairs(*cfg.from, problem);
    j["source"] = "from";
  } else {
    const Knobs k = resolve_knobs(cfg, pf);
    j["knobs"] = knobs_json(k);
    std::string refusal;
    auto solved = solve_checked(cfg, pf, k, err, &refusal);
    if (!solved) {
      j["status"] = "refused";
      j["reason"] = refusal;
      emit(cfg, "verify", j);
      return kCheckFailed;
    }
    pairs.assign(solved->result.pairs.begin() + 1, solved->result.pairs.end());
    j["source"] = "solve";
  }

  std::vector<Check> checks;
  const std::array<const EndpointReport*, 2> ends{&cls.left, &cls.right};
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const Eigenpair& p = pairs[n];
    const std::string g = "g" + std::to_string(p.index);
    guarded(checks, "zeros." + g, [&](Check& c) {
      const ZeroSet z = find_zeros(p);
      c.value = z.zeros.size();
      c.pass = static_cast<int>(z.zeros.size()) == p.index;
      if (!z.tangential.empty()) c.detail = std::to_string(z.tangential.size()) + " tangential near-zeros";
    });
    guarded(checks, "interlace." + g, [&](Check& c) {
      const OscillationReport o = interlace_check(p);
      c.pass = o.interlace_ok;
      c.value = {{"property1", o.property1}, {"property2", o.property2},
                 {"property3", o.property3}, {"property4", o.property4}};
      for (const auto& v : o.coincidence_violations) c.detail += (c.detail.empty() ? "" : "; ") + v;
    });
    const DeltaReport d = delta_report(problem, p);
    guarded(checks, "delta." + g, [&](Check& c) {
      c.value = {{"delta", number(d.delta_value)}, {"lambda", number(d.lambda)},
                 {"relative_gap", number(d.relative_gap)}};
      c.pass = d.relative_gap < cfg.delta_tol;
      c.detail = d.window_note;
    });
    for (int s = 0; s < 2; ++s) {
      const std::string side = to_string(ends[s]->side);
      guarded(checks, "boundary_flux." + g + "." + side, [&](Check& c) {
        const BoundaryTrace& t = d.boundary_flux[s];
        c.value = to_json(t.verdict);
        c.pass = t.decays_tenfold || t.verdict.converges_to_zero();
      });
      if (ends[s]->regular) continue;
      guarded(checks, "weighted_square." + g + "." + side, [&](Check& c) {
        const BoundaryTrace& t = d.weighted_square[s];
        c.value = to_json(t.verdict);
        c.pass = t.decays_tenfold || t.verdict.converges_to_zero();
      });
    }
    if (n + 1 < pairs.size()) {
      guarded(checks, "sturm_picone." + g + "_g" + std::to_string(pairs[n + 1].index), [&](Check& c) {
        const SturmPiconeResult r = sturm_picone_check(p, pairs[n + 1]);
        c.pass = r.ok;
        if (r.degenerate_input) c.detail = "degenerate input";
      });
    }
    if (p.index == 1) {
      guarded(checks, "monotone.g1", [&](Check& c) { c.pass = first_harmonic_monotonicity(p); });
    }
    if (p.index >= 2 && problem.family().kind == FamilyKind::UniformCosine && pairs.front().index == 1) {
      guarded(checks, "chebyshev." + g, [&](Check& c) {
        const double dev = chebyshev_relation_check(problem, pairs.front(), p);
        c.value = number(dev);
        c.pass = dev < 1e-3;
      });
    }
  }
  guarded(checks, "self_adjoint.neumann", [&](Check& c) {
    const std::pair<EndpointKind, EndpointKind> kinds{cls.left.kind, cls.right.kind};
    c.pass = self_adjointness_check(sfa_neumann_matrices(kinds), kinds);
    c.value = {{"left", to_string(cls.left.kind)}, {"right", to_string(cls.right.kind)}};
  });

  std::vector<std::string> failed;
  j["status"] = "verified";
  j["verdict"] = to_json(cls.verdict);
  j["checks"] = checks_json(checks, &failed);
  j["failed"] = failed;
  emit(cfg, "verify", j);
  return report_failures(failed, err);
}

int run_compose(const RunConfig& cfg, std::ostream& err) {
  const auto problems = load_problems(cfg);
  if (problems.size() < 2) throw InputError("compose needs at least two problems");
  json j = header(cfg);
  json sources = json::array();
  std::vector<std::vector<Eigenpair>> per_source;
  int m = 0;
  for (const auto& pf : problems) {
    const Knobs k = resolve_knobs(cfg, pf);
    m = std::max(m, k.modes);
  }
  if (m < 1) throw InputError("compose needs modes >= 1");
  for (const auto& pf : problems) {
    Knobs k = resolve_knobs(cfg, pf);
    k.modes = m;
    std::string refusal;
    auto solved = solve_checked(cfg, pf, k, err, &refusal);
    json src{{"problem", problem_json(pf)}, {"knobs", knobs_json(k)}};
    if (!solved) {
      src["status"] = "refused";
      src["reason"] = refusal;
      sources.push_back(src);
      j["sources"] = sources;
      j["status"] = "refused";
      emit(cfg, "compose", j);
      return kCheckFailed;
    }
    src["status"] = "solved";
    src["verdict"] = to_json(solved->verdict);
    src["pairs"] = pairs_json(solved->result);
    sources.push_back(src);
    per_source.push_back(std::move(solved->result.pairs));
  }
  const auto composites = enumerate_slowest(per_source, m);
  json comp = json::array();
  for (const auto& c : composites) {
    comp.push_back({{"multi_index", c.multi_index}, {"lambda", number(c.lambda)}, {"degeneracy", c.degeneracy}});
  }
  std::vector<Check> checks;
  if (per_source.size() <= 3) {
    guarded(checks, "composite_orthonormality", [&](Check& c) {
      const double e = composite_orthonormality_error(composites, 64);
      c.value = number(e);
      c.pass = e < 1e-3;
      c.detail = "tensor trapezoid grid, 64 nodes per source";
    });
  }
  std::vector<std::string> failed;
  j["status"] = "composed";
  j["sources"] = sources;
  j["composites"] = comp;
  j["checks"] = checks_json(checks, &failed);
  j["failed"] = failed;
  emit(cfg, "compose", j);
  return report_failures(failed, err);
}

int run_empirical(const RunConfig& cfg, std::ostream& err) {
  const auto problems = load_problems(cfg);
  if (problems.size() != 1) throw InputError("empirical takes exactly one problem");
  const auto& pf = problems.front();
  Knobs k = resolve_knobs(cfg, pf);
  if (cfg.degree < 1 || cfg.degree > 10) throw InputError("degree must be in [1, 10]");
  if (cfg.steps < 2) throw InputError("steps must be >= 2");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InputError("dt must be positive");
  const int m = std::max(1, std::min(k.modes, cfg.degree));
  k.modes = m;

  json j = header(cfg);
  j["problem"] = problem_json(pf);
  j["knobs"] = knobs_json(k);
  const Trajectory traj = sample_trajectory(pf.problem, static_cast<std::size_t>(cfg.steps), cfg.dt, cfg.seed);
  const LinearSfaResult sfa = run_linear_sfa(traj, cfg.degree, m);

  json eig = json::array();
  for (Eigen::Index i = 0; i < sfa.eigenvalues.size(); ++i) eig.push_back(number(sfa.eigenvalues(i)));
  json ratios = json::array();
  for (int i = 0; i + 1 < m; ++i) ratios.push_back(number(sfa.eigenvalues(i) / sfa.eigenvalues(i + 1)));
  j["basis"] = sfa.legendre_basis ? "legendre" : "monomial";
  j["data_range"] = {number(sfa.data_min), number(sfa.data_max)};
  j["eigenvalues"] = eig;
  j["eigenvalue_ratios"] = ratios;

  std::string refusal;
  auto solved = solve_checked(cfg, pf, k, err, &refusal);
  if (solved) {
    const auto& pairs = solved->result.pairs;
    std::vector<Eigenpair> harmonics(pairs.begin() + 1, pairs.end());
    const CorrelationReport cr = compare_to_analytic(sfa.features, harmonics, traj);
    json corr = json::array();
    for (Eigen::Index i = 0; i < cr.abs_corr.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < cr.abs_corr.cols(); ++c) row.push_back(number(cr.abs_corr(i, c)));
      corr.push_back(row);
    }
    json analytic = json::array();
    for (std::size_t i = 1; i + 1 < pairs.size(); ++i) analytic.push_back(number(pairs[i].lambda / pairs[i + 1].lambda));
    j["analytic"] = {{"abs_corr", corr},
                     {"constant_features", cr.constant_features},
                     {"eigenvalue_ratios", analytic},
                     {"verdict", to_string(solved->verdict.discrete)}};
  } else {
    j["analytic"] = {{"skipped", refusal}};
  }

  const Eigen::Index T = sfa.features.rows();
  const Eigen::MatrixXd centered = sfa.features.rowwise() - sfa.features.colwise().mean();
  const Eigen::MatrixXd out_cov = centered.transpose() * centered / static_cast<double>(T);
  std::vector<Check> checks;
  checks.push_back({"sphering.mean", sfa.sphered_mean_max < 1e-10, number(sfa.sphered_mean_max), "max |mean z|"});
  checks.push_back({"sphering.covariance", sfa.sphered_cov_deviation < 1e-8, number(sfa.sphered_cov_deviation),
                    "max |cov z - I|"});
  checks.push_back({"extraction.orthonormality", sfa.orthonormality_deviation < 1e-8,
                    number(sfa.orthonormality_deviation), "max |A^T A - I|"});
  const double dec = (out_cov - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  checks.push_back({"output.decorrelation", dec < 0.02, number(dec), "max |cov y - I|"});
  bool ordered = sfa.eigenvalues.minCoeff() >= 0.0;
  for (Eigen::Index i = 0; i + 1 < sfa.eigenvalues.size(); ++i) ordered = ordered && sfa.eigenvalues(i) <= sfa.eigenvalues(i + 1);
  checks.push_back({"eigenvalues.nonnegative_sorted", ordered, json(nullptr), ""});

  if (cfg.trajectory_csv) {
    const fs::path path = fs::path(cfg.out) / "trajectory.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << "# schema_version=" << kSchemaVersion << "\nt,s";
    for (int i = 1; i <= m; ++i) out << ",y" << i;
    out << '\n';
    char buf[32];
    for (Eigen::Index t = 0; t < T; ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", traj.time(static_cast<std::size_t>(t)));
      out << buf;
      std::snprintf(buf, sizeof buf, ",%.17g", traj.s[static_cast<std::size_t>(t)]);
      out << buf;
      for (int i = 0; i < m; ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", sfa.features(t, i));
        out << buf;
      }
      out << '\n';
    }
    j["files"] = {{"trajectory", "trajectory.csv"}};
  }

  std::vector<std::string> failed;
  j["status"] = "fitted";
  j["checks"] = checks_json(checks, &failed);
  j["failed"] = failed;
  emit(cfg, "empirical", j);
  return report_failures(failed, err);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& err) {
  try {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec || !fs::is_directory(cfg.out)) throw InputError("cannot create output directory " + cfg.out);
    if (cfg.subcommand == "classify") return run_classify(cfg, err);
    if (cfg.subcommand == "solve") return run_solve(cfg, err);
    if (cfg.subcommand == "verify") return run_verify(cfg, err);
    if (cfg.subcommand == "compose") return run_compose(cfg, err);
    if (cfg.subcommand == "empirical") return run_empirical(cfg, err);
    throw InputError("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "failed: " << e.what() << '\n';
    return kCheckFailed;
  }
}

}  // namespace sfa::cli
