#include "cbary/cli.hpp"
#include "cbary/json_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cbary;
using cbary::io::json;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Invocation run(std::vector<std::string> args, const std::string& input) {
  args.insert(args.begin(), "cbary");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

double num(const json& v) { return io::parse_number(v, "test"); }

const std::string kThree = R"({"points": [[[0, 0]], [["0.5", "0"]], [["0", "0.5"]]]})";
const std::string kEllipse =
    R"({"variant": "ellipsoid", "center": ["0", "0"], "shape": [["4", "0"], ["0", "9"]]})";

}  // namespace

TEST(Cli, ThreePointExample) {
  const Invocation r = run({"points", "--model", "bergman_m", "--dim", "1"}, kThree);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json d = r.doc();
  EXPECT_EQ(d["model"], "bergman");
  EXPECT_NEAR(num(d["barycenter"][0][0]), 0.156266, 1e-5);
  EXPECT_NEAR(num(d["barycenter"][0][1]), 0.156266, 1e-5);
  EXPECT_TRUE(d["converged"].get<bool>());
  EXPECT_EQ(num(d["config"]["residual_tol"]), SolverConfig{}.residual_tol);
}

TEST(Cli, SingleAndSymmetricPoints) {
  Invocation r = run({"points", "--model", "poincare", "--dim", "3"}, R"({"points": [["0.1", "0.2", "-0.3"]]})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(num(r.doc()["barycenter"][2]), -0.3);
  EXPECT_EQ(num(r.doc()["residual_norm"]), 0.0);
  r = run({"points", "--model", "poincare", "--dim", "2"}, R"({"points": [[0.3, -0.4], [-0.3, 0.4]]})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_LE(std::hypot(num(r.doc()["barycenter"][0]), num(r.doc()["barycenter"][1])), 1e-10);
}

TEST(Cli, WeightsAndCsv) {
  const Invocation r = run({"points", "--model", "poincare", "--dim", "2", "--format", "csv"},
                    R"({"points": [[0.3, 0], [0.6, 0]], "weights": ["1", "1"]})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x0,x1,residual_norm,potential,iterations,converged");
}

TEST(Cli, ValidationErrors) {
  EXPECT_EQ(run({"points", "--dim", "2"}, kThree).code, kExitValidation);  // no model
  EXPECT_EQ(run({"points", "--model", "poincare"}, R"({"points": [[0, 0]]})").code, kExitValidation);  // no dim
  const Invocation mismatch = run({"points", "--model", "poincare"}, R"({"model": "bergman", "dim": 1, "points": []})");
  EXPECT_EQ(mismatch.code, kExitValidation);
  EXPECT_NE(mismatch.err.find("model"), std::string::npos);

  const Invocation malformed = run({"points", "--model", "poincare", "--dim", "2"}, "{\"points\": [[0.1, 0.2],\n");
  EXPECT_EQ(malformed.code, kExitValidation);
  EXPECT_NE(malformed.err.find("line 2"), std::string::npos) << malformed.err;

  const Invocation boundary = run({"points", "--model", "poincare", "--dim", "2"}, R"({"points": [[0.1, 0.2], [1, 0]]})");
  EXPECT_EQ(boundary.code, kExitValidation);
  EXPECT_NE(boundary.err.find("points[1]"), std::string::npos) << boundary.err;

  const Invocation wrong_dim = run({"points", "--model", "poincare", "--dim", "3"}, R"({"points": [[0.1, 0.2]]})");
  EXPECT_EQ(wrong_dim.code, kExitValidation);
  EXPECT_NE(wrong_dim.err.find("points[0]"), std::string::npos) << wrong_dim.err;

  EXPECT_EQ(run({"points", "--model", "poincare", "--dim", "2"}, R"({"points": [["0.1x", 0]]})").code, kExitValidation);
  EXPECT_EQ(run({"points", "--model", "hyperbolic"}, "{}").code, kExitValidation);
  EXPECT_EQ(run({"nosuch"}, "{}").code, kExitValidation);
  EXPECT_EQ(run({}, "{}").code, kExitValidation);
}

TEST(Cli, NonConvergenceExitCode) {
  const Invocation r = run({"points", "--model", "poincare", "--dim", "2", "--max-iters", "0"},
                    R"({"points": [[0.1, 0.2], [0.5, -0.3], [-0.2, 0.6]], "config": {"fallback_max_iters": 1}})");
  EXPECT_EQ(r.code, kExitNoConvergence);
  EXPECT_FALSE(r.doc()["converged"].get<bool>());
  EXPECT_EQ(r.doc()["trace"].size(), 2u);
}

TEST(Cli, RegionBarycenters) {
  const std::string d1 = R"({"model": "poincare", "dim": 2, "region": {"variant": "mobius_image", "inner": )" +
                         kEllipse + R"(, "map": {"center": ["0.5", "0"]}}})";
  Invocation r = run({"region"}, d1);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json d = r.doc();
  const double se = num(d["sampling"]["standard_error"]);
  EXPECT_LE(std::abs(num(d["barycenter"][0]) - 0.5), 3 * se);
  EXPECT_EQ(d["density"], "hyperbolic");
  EXPECT_EQ(d["sampling"]["seed"], 1);
  EXPECT_EQ(d["sampling"]["count"], 1 << 18);

  r = run({"region", "--model", "poincare", "--dim", "2"}, R"({"region": )" + kEllipse + "}");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  d = r.doc();
  EXPECT_LE(std::hypot(num(d["barycenter"][0]), num(d["barycenter"][1])), 3 * num(d["sampling"]["standard_error"]));

  r = run({"region", "--density", "lebesgue", "--samples", "65536", "--seed", "4"}, d1);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(num(r.doc()["barycenter"][0]), 0.39657, 1e-3);
  EXPECT_EQ(r.doc()["sampling"]["seed"], 4);
}

TEST(Cli, SamplingDegeneracyExitCode) {
  const Invocation r = run({"region", "--model", "poincare", "--dim", "2", "--samples", "8"}, R"({"region": )" + kEllipse + "}");
  EXPECT_EQ(r.code, kExitSampling);
  EXPECT_NE(r.err.find("sampling"), std::string::npos);
}

TEST(Cli, Deterministic) {
  const std::string doc = R"({"model": "poincare", "dim": 2, "region": )" + kEllipse + "}";
  const Invocation a = run({"region", "--samples", "20000", "--seed", "5"}, doc);
  const Invocation b = run({"region", "--samples", "20000", "--seed", "5"}, doc);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OutputRoundTrips) {
  Invocation r = run({"points", "--model", "poincare", "--dim", "2"}, R"({"points": [[0.1, 0.2], [0.5, -0.3], [-0.2, 0.6]]})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Invocation again = run({"points"}, r.out);
  ASSERT_EQ(again.code, kExitOk) << again.err;
  EXPECT_EQ(again.doc()["barycenter"], r.doc()["barycenter"]);

  r = run({"region", "--samples", "20000"}, R"({"model": "bergman", "dim": 1, "region": {"variant": "ball", "center": [["0.1", "0.2"]], "radius": "0.3"}})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  again = run({"region", "--samples", "20000"}, r.out);
  ASSERT_EQ(again.code, kExitOk) << again.err;
  EXPECT_EQ(again.doc()["barycenter"], r.doc()["barycenter"]);
  EXPECT_EQ(run({"points"}, r.out).code, kExitOk);
}

TEST(Cli, Invariance) {
  Invocation r = run({"invariance", "--model", "bergman", "--dim", "1"},
              R"({"points": [[[0, 0]], [[0.5, 0]], [[0, 0.5]]], "map": {"center": [[0, 0]]}})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_LE(num(r.doc()["defect"]), 1e-12);

  r = run({"invariance", "--model", "bergman", "--dim", "1"},
          R"({"points": [[[0, 0]], [[0.5, 0]], [[0, 0.5]]], "map": {"center": [[0.3, 0]]}})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_LE(num(r.doc()["defect"]), 1e-8);
  EXPECT_TRUE(r.doc()["pass"].get<bool>());

  r = run({"invariance", "--model", "poincare", "--dim", "2"},
          R"({"region": )" + kEllipse + R"(, "map": {"center": ["0.5", "0"]}})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(num(r.doc()["barycenter"][0]), 0.0, 1e-3);
  EXPECT_NEAR(num(r.doc()["image_barycenter"][0]), 0.5, 1e-3);

  r = run({"invariance", "--model", "poincare", "--dim", "2"},
          R"({"points": [[0, 0]], "map": {"center": [[0.3, 0]]}})");
  EXPECT_EQ(r.code, kExitValidation);
}

TEST(Cli, Distance) {
  for (const char* doc : {R"({"model": "poincare", "dim": 2, "points": [[0, 0], [0.5, 0]]})",
                          R"({"model": "bergman", "dim": 1, "points": [[[0, 0]], [[0, 0.5]]]})"}) {
    const Invocation r = run({"distance"}, doc);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NEAR(num(r.doc()["distance"]), 0.5 * std::log(3.0), 1e-15);
  }
  const Invocation m = run({"distance"}, R"({"model": "poincare", "dim": 3, "points": [[0.1, 0.2, 0], [0.5, 0, -0.2]],
                                      "map": {"center": [0.3, 0.3, 0.3]}})");
  ASSERT_EQ(m.code, kExitOk) << m.err;
  EXPECT_NEAR(num(m.doc()["mapped_distance"]), num(m.doc()["distance"]), 1e-12);
  const Invocation sym1 = run({"distance"}, R"({"model": "poincare", "dim": 2, "points": [[0.1, 0.2], [0.5, -0.3]]})");
  const Invocation sym2 = run({"distance"}, R"({"model": "poincare", "dim": 2, "points": [[0.5, -0.3], [0.1, 0.2]]})");
  EXPECT_NEAR(num(sym1.doc()["distance"]), num(sym2.doc()["distance"]), 1e-15);
  EXPECT_EQ(run({"distance"}, R"({"model": "poincare", "dim": 2, "points": [[0, 0]]})").code, kExitValidation);
}

TEST(Cli, GridSingleAtom) {
  const Invocation r = run({"grid", "--model", "poincare", "--dim", "2", "--bounds", "-0.5,0.5,-0.5,0.5", "--resolution", "3",
                     "--format", "csv"},
                    R"({"points": [[0, 0]]})");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "x,y,potential");
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[4], "0,0,0");
}

TEST(Cli, GridMinimumNearBarycenter) {
  const Invocation r = run({"grid", "--model", "bergman", "--dim", "1", "--resolution", "101", "--format", "csv"}, kThree);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  double best = INFINITY, bx = 0, by = 0;
  int count = 0;
  while (std::getline(lines, line)) {
    double x, y, v;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v), 3);
    ASSERT_TRUE(std::isfinite(v));
    ASSERT_LT(std::hypot(x, y), 1 - 1e-6);
    ++count;
    if (v < best) best = v, bx = x, by = y;
  }
  EXPECT_GT(count, 7000);
  const double cell = 2.0 / 100;
  EXPECT_LE(std::abs(bx - 0.156266), cell);
  EXPECT_LE(std::abs(by - 0.156266), cell);
}

TEST(Cli, GridRejectsUnsupportedDimension) {
  EXPECT_EQ(run({"grid", "--model", "poincare", "--dim", "3"}, R"({"points": [[0, 0, 0]]})").code, kExitValidation);
  EXPECT_EQ(run({"grid", "--model", "bergman", "--dim", "2"}, R"({"points": [[[0, 0], [0, 0]]]})").code,
            kExitValidation);
}

TEST(Cli, HelpListsDefaults) {
  const Invocation r = run({"points", "--help"}, "");
  EXPECT_EQ(r.code, kExitOk);
  for (const char* s : {"--tol", "1e-10", "--max-iters", "500", "--samples", "262144", "damping_backoff=0.5",
                        "fallback_max_iters=2000", "armijo_c=0.0001"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
}

TEST(Cli, InputAndOutputFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "cbary_cli_test";
  std::filesystem::create_directories(dir);
  const auto in = dir / "in.json";
  const auto out = dir / "out.json";
  std::ofstream(in) << kThree;
  const Invocation r = run({"points", "--model", "bergman", "--dim", "1", "--input", in.string(), "--output", out.string()}, "");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  const json d = json::parse(f);
  EXPECT_NEAR(num(d["barycenter"][0][0]), 0.156266, 1e-5);
  EXPECT_EQ(run({"points", "--input", (dir / "missing.json").string()}, "").code, kExitValidation);
  std::filesystem::remove_all(dir);
}
