#include "lslcop/lslcop.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace lslcop;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LSLCOP_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write(const std::string& name, const std::string& text) {
  std::ofstream(name) << text;
  return name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, MeasuresLowerHalf) {
  const auto f = write("l.json", R"({"type":"l","a":0.5})");
  const auto r = run("measures " + f);
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["tau"].get<double>(), 0.0625, 1e-15);
  EXPECT_NEAR(j["rho"].get<double>(), 0.0625, 1e-15);
  EXPECT_TRUE(j["lower_bound_ok"].get<bool>());
}

TEST(Cli, MeasuresWithOracle) {
  const auto f = write("u.json", R"({"type":"u","a":0.5})");
  const auto r = run("measures " + f + " --oracle");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["oracle"]["rho_quadrature"].get<double>(), 0.875, 1e-3);
}

TEST(Cli, StarWithIndependence) {
  const auto a = write("pi.json", R"({"type":"power","p":2})");
  const auto b = write("d.json", R"({"type":"pwl","knots":[[0,0],[0.5,0.35],[1,1]]})");
  const auto r = run("star " + a + " " + b + " --grid 33");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  const auto d = diagonal_from_json(j["product"]);
  EXPECT_TRUE(validate_dlsl(d).is_member);
  EXPECT_LT(sup_distance(d, independence()), 1e-15);
  for (const auto& k : j["product"]["knots"]) EXPECT_NEAR(k[1].get<double>(), k[0].get<double>(), 1e-15);
}

TEST(Cli, StarOutputRoundTrips) {
  const auto a = write("a.json", R"({"type":"l","a":0.3})");
  const auto b = write("b.json", R"({"type":"mix","w":0.4,"left":{"type":"u","a":0.6},"right":{"type":"power","p":1.5}})");
  const auto r = run("star " + a + " " + b + " --out star_out.json");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(slurp("star_out.json"));
  write("product.json", j["product"].dump());
  EXPECT_EQ(run("validate product.json").code, 0);
}

TEST(Cli, SampleIsByteIdentical) {
  const auto f = write("s.json", R"({"type":"u","a":0.5})");
  const auto a = run("sample " + f + " --n 200 --seed 5");
  const auto b = run("sample " + f + " --n 200 --seed 5");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, 4), "u,v\n");
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(run("validate " + write("ok.json", R"({"type":"l","a":0.5})")).code, 0);
  const auto bad = run("validate " + write("bad.json", R"({"type":"pwl","knots":[[0,0],[0.5,0.25],[1,1]]})"));
  EXPECT_EQ(bad.code, 3);
  EXPECT_FALSE(json::parse(bad.out)["is_member"].get<bool>());
  EXPECT_EQ(run("validate " + write("mal.json", R"({"type":"pwl","knots":[[0,0],[0.5,0.25]]})")).code, 2);
  EXPECT_EQ(run("validate " + write("junk.json", "{not json")).code, 2);
  EXPECT_EQ(run("validate missing.json").code, 2);
  EXPECT_EQ(run("star " + std::string("bad.json ok.json")).code, 3);
}

TEST(Cli, IterateExitCodes) {
  const auto f = write("it.json", R"({"type":"l","a":0.5})");
  const auto ok = run("iterate " + f + " --trace trace.csv");
  ASSERT_EQ(ok.code, 0);
  const auto j = json::parse(ok.out);
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_NEAR(j["fitted_a"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(slurp("trace.csv").substr(0, 12), "n,sup_delta\n");
  EXPECT_EQ(run("iterate " + f + " --max-iter 2").code, 4);
}

TEST(Cli, EvalKernelMoRegionSi) {
  const auto f = write("e.json", R"({"type":"l","a":0.5})");
  auto r = run("eval " + f + " --x 0.25 --y 0.75");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(r.out), 0.1875, 1e-16);
  r = run("kernel " + f + " --x 0.25 --grid 5");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 4), "y,K\n");
  r = run("mo --alpha 1 --beta 0.5");
  ASSERT_EQ(r.code, 0);
  const auto d = diagonal_from_json(json::parse(r.out));
  EXPECT_NEAR(d(0.3), std::pow(0.3, 1.5), 1e-15);
  r = run("region --n 5 --families l,u --seed 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 15), "tau,rho,source\n");
  EXPECT_EQ(run("region --n 5 --families nope").code, 2);
  const auto s = write("si.json", to_json(si_counterexample()).dump());
  r = run("si " + s + " --y 0.36 --grid 9");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 4), "x,K\n");
}

TEST(Cli, UnknownFlagIsMalformed) { EXPECT_EQ(run("measures --bogus").code, 2); }
