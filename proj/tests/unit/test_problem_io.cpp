#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "sfa/errors.hpp"
#include "sfa/problem_io.hpp"

using namespace sfa;

namespace {

const std::string kDir = SFA_PROBLEMS_DIR;

}  // namespace

TEST(ProblemText, ParsesFamilyAndSolverSection) {
  const ProblemFile pf = parse_problem_text(R"(schema_version = 1
# comment
[problem]
family = "uniform_cosine"   # trailing comment
length = 2.0
k0 = 3
[solver]
modes = 7
tail_eps = 1e-9
)",
                                            "");
  EXPECT_EQ(pf.family, "uniform_cosine");
  EXPECT_EQ(pf.parameters.kind, FamilyKind::UniformCosine);
  EXPECT_EQ(pf.problem.domain().right, 2.0);
  EXPECT_DOUBLE_EQ(pf.problem.K(0.5), 3.0);
  EXPECT_EQ(pf.modes, 7);
  EXPECT_FALSE(pf.grid.has_value());
  EXPECT_DOUBLE_EQ(*pf.tail_eps, 1e-9);
}

TEST(ProblemText, PowerLawParameters) {
  const ProblemFile pf =
      parse_problem_text("schema_version=1\n[problem]\nfamily=power_law\nepsilon=0.25\nk_exponent=2\n", "");
  EXPECT_DOUBLE_EQ(pf.parameters.epsilon, 0.25);
  EXPECT_DOUBLE_EQ(pf.problem.K(3.0), 9.0);
}

TEST(ProblemText, Errors) {
  EXPECT_THROW(parse_problem_text("[problem]\nfamily=gaussian_hermite\n", ""), InputError);
  EXPECT_THROW(parse_problem_text("schema_version=2\n[problem]\nfamily=gaussian_hermite\n", ""), InputError);
  EXPECT_THROW(parse_problem_text("schema_version=1\n", ""), InputError);
  EXPECT_THROW(parse_problem_text("schema_version=1\n[problem]\nfamily=bessel\n", ""), InputError);
  EXPECT_THROW(parse_problem_text("schema_version=1\n[problem]\nfamily=uniform_cosine\nlength=abc\n", ""),
               InputError);
  EXPECT_THROW(parse_problem_text("schema_version=1\n[problem]\nfamily=uniform_cosine\nlength=-1\n", ""),
               InputError);
  EXPECT_THROW(load_problem_file(kDir + "/nope.toml"), InputError);
}

TEST(ProblemFiles, ShippedExamplesLoad) {
  EXPECT_EQ(load_problem_file(kDir + "/gaussian.toml").parameters.kind, FamilyKind::GaussianHermite);
  EXPECT_EQ(load_problem_file(kDir + "/uniform.toml").modes, 5);
  EXPECT_EQ(load_problem_file(kDir + "/power_law.toml").parameters.kind, FamilyKind::PowerLawCounterexample);
}

TEST(ProblemFiles, TabulatedDensityIsNormalized) {
  const ProblemFile pf = load_problem_file(kDir + "/tabulated.toml");
  EXPECT_EQ(pf.family, "tabulated");
  EXPECT_EQ(pf.problem.domain().left, -1.0);
  EXPECT_EQ(pf.problem.domain().right, 1.0);
  EXPECT_NEAR(density_mass(pf.problem).mass, 1.0, 1e-8);
  EXPECT_DOUBLE_EQ(pf.problem.K(0.1), 2.0);
  // 0.75 (1.25 - s^2) integrates to 1.375 over [-1, 1].
  EXPECT_NEAR(pf.problem.p(0.0), 0.75 * 1.25 / 1.375, 1e-6);
}

TEST(ProblemFiles, BareCsvIsTabulatedDensity) {
  const ProblemFile pf = load_problem_file(kDir + "/bump_density.csv");
  EXPECT_EQ(pf.family, "tabulated");
  EXPECT_NEAR(density_mass(pf.problem).mass, 1.0, 1e-8);
}

TEST(Tables, RejectsMalformedCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "sfa_io_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return (dir / name).string();
  };
  EXPECT_THROW(read_table_csv(write("dec.csv", "0,1\n1,1\n0.5,1\n")), InputError);
  EXPECT_THROW(read_table_csv(write("short.csv", "0,1\n1,1\n")), InputError);
  EXPECT_THROW(read_table_csv(write("one.csv", "0\n1\n2\n")), InputError);
  EXPECT_THROW(read_table_csv(write("nan.csv", "0,1\n1,x\n2,3\n")), InputError);
  const Table ok = read_table_csv(write("ok.csv", "s,value\n0,1\n1,2\n2,4\n"));
  EXPECT_EQ(ok.s.size(), 3u);
  EXPECT_THROW(tabulated_problem(Table{{0, 1, 2}, {1, 0, 1}}, std::nullopt), InputError);
}
