#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "latops/cli.hpp"

namespace latops {
namespace {

namespace fs = std::filesystem;
using io::Json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "latops");
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(LATOPS_FIXTURE_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("latops_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  std::string write_json(const std::string& name, const Json& j) const { return write(name, j.dump(2)); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST_F(CliTest, UnknownSubcommandIsInputError) { EXPECT_EQ(run({"frobnicate"}).code, 2); }

TEST_F(CliTest, MissingRequiredOptionIsInputError) { EXPECT_EQ(run({"identities"}).code, 2); }

TEST_F(CliTest, IdentitiesPassOnEveryLattice) {
  for (const auto* name : {"linear_lattice.json", "squares_lattice.json", "q_lattice.json"}) {
    const auto r = run({"identities", "--lattice", fixture(name), "--seed", "3", "--count", "3", "--max-degree", "4",
                        "-o", path("id.json")});
    EXPECT_EQ(r.code, 0) << name << r.err;
    EXPECT_TRUE(io::read_file(path("id.json"))["passed"].get<bool>());
  }
}

TEST_F(CliTest, IdentitiesAreDeterministicPerSeed) {
  const std::vector<std::string> base{"identities", "--lattice", fixture("q_lattice.json"), "--count", "4"};
  auto with = [&](const std::string& seed, const std::string& out) {
    auto a = base;
    a.insert(a.end(), {"--seed", seed, "-o", path(out)});
    EXPECT_EQ(run(a).code, 0);
    return slurp(path(out));
  };
  const auto first = with("11", "a.json");
  EXPECT_EQ(first, with("11", "b.json"));
  EXPECT_NE(first, with("12", "c.json"));
}

TEST_F(CliTest, OpsOnBell) {
  const auto r = run({"ops", "--moments", fixture("bell.json"), "--n-max", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["ops"]["P"][2], Json::parse(R"(["1/1","-3/1","1/1"])"));
}

TEST_F(CliTest, OpsBeyondMomentsIsInputError) {
  const auto m = write_json("m.json", Json{{"moments", {"1", "1", "2"}}});
  const auto r = run({"ops", "--moments", m, "--n-max", "5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, SingularHankelIsInputError) {
  const auto m = write_json("m.json", Json{{"moments", {"1", "1", "1", "1", "1"}}});
  EXPECT_EQ(run({"ops", "--moments", m, "--n-max", "2"}).code, 2);
}

TEST_F(CliTest, OpsDefaultsToFullDepth) {
  const auto r = run({"ops", "--moments", fixture("bell.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["ops"]["P"].size(), 20u);
}

TEST_F(CliTest, BadRationalNamesItsLocation) {
  const auto m = write("m.json", R"({"moments": ["1", "1", "2/0"]})");
  const auto r = run({"ops", "--moments", m});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/moments/2"), std::string::npos) << r.err;
}

TEST_F(CliTest, FloatMomentRejected) {
  const auto m = write("m.json", R"({"moments": [1, 0.5]})");
  EXPECT_EQ(run({"ops", "--moments", m, "--n-max", "1"}).code, 2);
}

TEST_F(CliTest, MalformedJsonAndMissingFile) {
  const auto m = write("m.json", "{\"moments\": [");
  EXPECT_EQ(run({"ops", "--moments", m, "--n-max", "1"}).code, 2);
  EXPECT_EQ(run({"ops", "--moments", path("absent.json"), "--n-max", "1"}).code, 2);
}

TEST_F(CliTest, MissingFieldIsInputError) {
  auto j = io::read_file(fixture("christoffel.json"));
  j.erase("b");
  const auto r = run({"coherence", "analyze", write_json("spec.json", j)});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/b"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadLatticeKind) {
  const auto l = write("l.json", R"({"kind": "cubic", "c": ["0", "1", "0"]})");
  EXPECT_EQ(run({"identities", "--lattice", l}).code, 2);
  const auto q = write("q.json", R"({"kind": "q-quadratic", "p": "1", "c": ["0", "1", "0"]})");
  EXPECT_EQ(run({"identities", "--lattice", q}).code, 2);
}

TEST_F(CliTest, SemiclassicalFindsPoissonPearsonPair) {
  const auto r = run({"semiclassical", "--moments", fixture("bell.json"), "--deg-phi", "1", "--deg-psi", "1", "--n-eq",
                      "8", "-o", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::read_file(path("s.json"));
  ASSERT_EQ(j["solutions"].size(), 1u);
  EXPECT_TRUE(j["solutions"][0]["check"]["passed"].get<bool>());
}

TEST_F(CliTest, ModificationFindsChristoffelPair) {
  const auto v = write_json("v.json", io::to_json(Functional(fixtures::christoffel(fixtures::bell_moments(41)))));
  const auto r = run({"modification", "--moments", fixture("bell.json"), "--moments-v", v, "--deg-pi2", "1",
                      "--deg-pi1", "0", "--n-eq", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j["solutions"].size(), 1u);
  EXPECT_EQ(j["solutions"][0]["pi2"], Json::parse(R"(["0/1","1/1"])"));
  EXPECT_EQ(j["solutions"][0]["pi1"], Json::parse(R"(["1/1"])"));
}

TEST_F(CliTest, ChristoffelCoherencePasses) {
  const auto r = run({"coherence", "analyze", fixture("christoffel.json"), "-o", path("r.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "PASS " + path("r.json") + "\n");
  EXPECT_TRUE(io::read_file(path("r.json"))["analysis"]["passed"].get<bool>());
}

// The relation holds and every lemma relation checks out, but the linear
// system for this pair is singular, so the run ends at the determinant.
TEST_F(CliTest, ShiftedPoissonStopsAtSingularSystem) {
  const auto r = run({"coherence", "analyze", "--spec", fixture("shifted_poisson.json"), "-o", path("r.json")});
  EXPECT_EQ(r.code, 1);
  const auto a = io::read_file(path("r.json"))["analysis"];
  EXPECT_EQ(a["failure"], "B-determinant");
  for (const auto& s : a["stages"]) {
    if (s["stage"] != "B-matrix") {
      EXPECT_TRUE(s["passed"].get<bool>()) << s["stage"];
    }
  }
}

TEST_F(CliTest, PerturbedMomentFailsWithResiduals) {
  auto j = io::read_file(fixture("christoffel.json"));
  j["v"]["moments"][3] = "16/1";
  const auto r = run({"coherence", "analyze", write_json("spec.json", j), "-o", path("r.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "FAIL " + path("r.json") + "\n");
  EXPECT_EQ(io::read_file(path("r.json"))["analysis"]["failure"], "coherence");
}

TEST_F(CliTest, PerturbedCoefficientFailsWithResiduals) {
  auto j = io::read_file(fixture("christoffel.json"));
  j["b"][1][2] = "3/1";
  EXPECT_EQ(run({"coherence", "analyze", write_json("spec.json", j), "-o", path("r.json")}).code, 1);
  const auto a = io::read_file(path("r.json"))["analysis"];
  EXPECT_EQ(a["failure"], "coherence");
  EXPECT_FALSE(a["stages"][0]["passed"].get<bool>());
}

TEST_F(CliTest, PiCoherencePassesAndDetectsPerturbation) {
  EXPECT_EQ(run({"pi-coherence", fixture("pi_christoffel.json"), "-o", path("r.json")}).code, 0);
  auto j = io::read_file(fixture("pi_christoffel.json"));
  j["c"][2][1] = "100/1";
  EXPECT_EQ(run({"pi-coherence", write_json("spec.json", j), "-o", path("r.json")}).code, 1);
}

TEST_F(CliTest, CheckedInFixturesMatchGenerator) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
      {"bell.json", {"bell"}},
      {"shifted_bell.json", {"shifted-bell"}},
      {"linear_lattice.json", {"linear-lattice"}},
      {"christoffel.json", {"christoffel", "--n-max", "6"}},
      {"shifted_poisson.json", {"shifted-poisson", "--n-max", "5"}},
      {"pi_christoffel.json", {"pi-christoffel", "--n-max", "4"}},
  };
  for (const auto& [file, args] : cases) {
    std::vector<std::string> a{"fixture"};
    a.insert(a.end(), args.begin(), args.end());
    a.insert(a.end(), {"-o", path(file)});
    ASSERT_EQ(run(a).code, 0) << file;
    EXPECT_EQ(io::read_file(path(file)), io::read_file(fixture(file))) << file;
  }
}

TEST_F(CliTest, UnknownFixture) { EXPECT_EQ(run({"fixture", "nope"}).code, 2); }

}  // namespace
}  // namespace latops
