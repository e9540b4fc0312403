#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mwk/width.hpp"
#include "mwk_cli/app.hpp"
#include "mwk_cli/document.hpp"
#include "mwk_cli/json_text.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = mwk::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmpdir() {
  const char* env = std::getenv("MWK_TEST_TMPDIR");
  fs::path p = fs::path(env ? env : fs::temp_directory_path().string()) / "cli_tmp";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::string write_simplex(const std::string& name, const std::vector<Eigen::VectorXd>& v) {
  mwk::cli::SimplexDocument doc;
  doc.d = static_cast<int>(v.front().size());
  doc.vertices = v;
  const fs::path p = tmpdir() / name;
  mwk::cli::write_document(p.string(), doc);
  return p.string();
}

std::string write_text(const std::string& name, const std::string& text) {
  const fs::path p = tmpdir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::vector<Eigen::VectorXd> regular(int d) {
  std::vector<Eigen::VectorXd> v;
  const auto S = mwk::regular_simplex(d);
  for (const auto& u : S.vertices()) v.push_back(u.coords());
  return v;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, mwk::cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, mwk::cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, mwk::cli::kExitOk);
  const auto path = write_simplex("reg3.json", regular(3));
  EXPECT_EQ(run({"width", path, "--method", "simpson"}).code, mwk::cli::kExitUsage);
  EXPECT_EQ(run({"hessian", "--grid", "1"}).code, mwk::cli::kExitUsage);
}

TEST(Cli, WidthExact3dRegular) {
  const auto path = write_simplex("reg3.json", regular(3));
  const auto r = run({"width", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["method"], "exact3d");
  EXPECT_NEAR(j["value"].get<double>(), mwk::regular_tetrahedron_width(), 1e-12);
}

TEST(Cli, WidthMethodsAndDimension) {
  const auto p4 = write_simplex("reg4.json", regular(4));
  EXPECT_EQ(run({"width", p4, "--method", "exact3d"}).code, mwk::cli::kExitUsage);
  const auto mc = run({"width", p4, "--samples", "20000", "--seed", "3"});
  ASSERT_EQ(mc.code, 0) << mc.err;
  EXPECT_EQ(json::parse(mc.out)["method"], "monte_carlo");
  EXPECT_EQ(mc.out, run({"width", p4, "--samples", "20000", "--seed", "3"}).out);
  const auto mat = run({"width", "--input", p4, "--method", "mat", "--samples", "240000"});
  ASSERT_EQ(mat.code, 0) << mat.err;
  EXPECT_EQ(json::parse(mat.out)["method"], "mat_quadrature");
}

TEST(Cli, InfeasibleInput) {
  std::vector<Eigen::VectorXd> cap = {
      Eigen::Vector3d(1, 0, 0.3).normalized(), Eigen::Vector3d(0, 1, 0.3).normalized(),
      Eigen::Vector3d(-1, -1, 0.3).normalized(), Eigen::Vector3d(0.1, 0.2, 1).normalized()};
  const auto path = write_simplex("cap.json", cap);
  const auto r = run({"width", path, "--method", "exact3d"});
  EXPECT_EQ(r.code, mwk::cli::kExitInfeasible);
  EXPECT_NE(r.err.find("feasibility"), std::string::npos);
  EXPECT_EQ(run({"width", path, "--method", "mc", "--samples", "1000"}).code, 0);
}

TEST(Cli, DocumentErrors) {
  EXPECT_EQ(run({"width", (tmpdir() / "missing.json").string()}).code, mwk::cli::kExitIo);
  EXPECT_EQ(run({"width", write_text("bad.json", "{not json")}).code, mwk::cli::kExitUsage);
  EXPECT_EQ(run({"width", write_text("short.json", R"({"d": 3, "vertices": [[1,0,0]]})")}).code,
            mwk::cli::kExitUsage);

  auto v = regular(3);
  for (auto& x : v) x *= 1.01;
  const auto path = write_simplex("scaled.json", v);
  EXPECT_EQ(run({"width", path}).code, mwk::cli::kExitUsage);
  const auto r = run({"width", path, "--auto-normalize"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), mwk::regular_tetrahedron_width(), 1e-12);
}

TEST(Cli, DegenerateInput) {
  auto v = regular(3);
  v[3] = v[2];
  EXPECT_EQ(run({"width", write_simplex("dup.json", v)}).code, mwk::cli::kExitDegenerate);
}

TEST(Cli, UnwritableOutput) {
  const auto path = write_simplex("reg3.json", regular(3));
  EXPECT_EQ(run({"width", path, "--out", "/nonexistent-dir/x.json"}).code, mwk::cli::kExitIo);
}

TEST(Cli, DecomposeCounts) {
  const auto r3 = run({"decompose", write_simplex("reg3.json", regular(3))});
  ASSERT_EQ(r3.code, 0) << r3.err;
  const auto j3 = json::parse(r3.out);
  EXPECT_EQ(j3["path_simplices"].size(), 24u);
  EXPECT_TRUE(j3["complex_audit"]["passed"].get<bool>());
  EXPECT_TRUE(j3["angle_sums"]["levels_match_expected"].get<bool>());

  const auto r4 = run({"decompose", write_simplex("reg4.json", regular(4))});
  ASSERT_EQ(r4.code, 0) << r4.err;
  const auto j4 = json::parse(r4.out);
  EXPECT_EQ(j4["path_simplices"].size(), 120u);
  EXPECT_FALSE(j4.contains("complex_audit"));
}

TEST(Cli, HessianCsv) {
  const fs::path csv = tmpdir() / "scan.csv";
  const auto r = run({"hessian", "--grid", "8", "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["det_violations"].get<int>(), 0);
  EXPECT_EQ(j["f_AA_violations"].get<int>(), 0);
  EXPECT_EQ(slurp(csv).substr(0, 39), "A,B,f,f_AA,det_hess,reduced_det,fd_gap\n");
}

TEST(Cli, OptimizeOutputsRoundTrip) {
  const fs::path prefix = tmpdir() / "opt";
  const auto r = run({"optimize", "--d", "3", "--out", prefix.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["best_width"].get<double>(), mwk::regular_tetrahedron_width(), 1e-9);
  EXPECT_TRUE(fs::exists(prefix.string() + ".trace.csv"));

  // Reading and rewriting the simplex file reproduces it byte for byte, and
  // the vertices survive bit-exactly.
  const std::string text = slurp(prefix.string() + ".simplex.json");
  const auto doc = mwk::cli::parse_document(text, false);
  EXPECT_EQ(mwk::cli::document_text(doc), text);
  const auto again = mwk::cli::parse_document(mwk::cli::document_text(doc), false);
  ASSERT_EQ(again.vertices.size(), doc.vertices.size());
  for (std::size_t i = 0; i < doc.vertices.size(); ++i) {
    EXPECT_EQ(again.vertices[i], doc.vertices[i]);
  }
  EXPECT_EQ(doc.metadata.count("generator"), 1u);

  const auto w = run({"width", prefix.string() + ".simplex.json"});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_NEAR(json::parse(w.out)["value"].get<double>(), j["best_width"].get<double>(), 1e-12);
}

TEST(Cli, SelftestAndNegativeControl) {
  const auto ok = run({"selftest"});
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
  const auto bad = run({"selftest", "--force-wrong-prefactor"});
  EXPECT_EQ(bad.code, mwk::cli::kExitSelftestFailed);
  EXPECT_NE(bad.err.find("mat_prefactor"), std::string::npos);
}

TEST(JsonText, SeventeenDigits) {
  EXPECT_EQ(mwk::cli::format17(0.1), "0.10000000000000001");
  EXPECT_EQ(mwk::cli::format17(1.0 / 0.0), "inf");
  const json j = {{"x", 1.0 / 3}, {"v", {1, 2}}};
  const std::string s = mwk::cli::dump17(j);
  EXPECT_NE(s.find("0.33333333333333331"), std::string::npos);
  EXPECT_NE(s.find("[1, 2]"), std::string::npos);
  EXPECT_EQ(json::parse(s)["x"].get<double>(), 1.0 / 3);
}
