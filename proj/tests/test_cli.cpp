#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <json.hpp>
#include <string>
#include <sys/wait.h>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = std::string(HULL_LAB_BINARY) + " " + args + " 2>/dev/null";
  Result r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
  int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string ex(const std::string& name) { return std::string(HULL_LAB_EXAMPLES) + "/" + name; }

nlohmann::json run_json(const std::string& args, int expected_code) {
  Result r = run(args + " --format json");
  EXPECT_EQ(r.code, expected_code) << args << "\n" << r.out;
  return nlohmann::json::parse(r.out);
}

}  // namespace

TEST(Cli, NormalizeExample) {
  Result r = run("normalize " + ex("S.pres") + " \"a a b y[0]\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "b y[2]");
}

TEST(Cli, CancelCheck) {
  EXPECT_EQ(run("cancel-check " + ex("S.pres") + " --radius 5 --window -2..2").code, 0);
  auto j = run_json("cancel-check " + ex("abac.pres") + " --radius 3 --window 0..0", 1);
  EXPECT_EQ(j["status"], "fails");
  EXPECT_EQ(j["counterexample"]["x"], "a");
  EXPECT_EQ(j["counterexample"]["w"], "b");
  EXPECT_EQ(j["counterexample"]["w_prime"], "c");
}

TEST(Cli, DividesAndEquiv) {
  auto j = run_json("divides " + ex("S.pres") + " b \"a b x[0]\"", 0);
  EXPECT_EQ(j["cofactor"], "x[0]");
  EXPECT_EQ(run("divides " + ex("S.pres") + " \"x[0]\" \"y[0]\"").code, 1);
  EXPECT_EQ(run("equiv " + ex("S.pres") + " \"a b x[3]\" \"b x[3]\"").code, 0);
  EXPECT_EQ(run("equiv " + ex("S.pres") + " \"a b y[3]\" \"b y[3]\"").code, 1);
}

TEST(Cli, RegularityObstructionInT) {
  auto j = run_json("regularity check " + ex("T.pres") + " --kind cstar --X \"Family(b)\" --h a --h c", 2);
  EXPECT_EQ(j["status"], "unknown");
  EXPECT_NE(j["note"].get<std::string>().find("Fix(a) ∪ Fix(c)"), std::string::npos);
  for (std::string key : {"Y", "k", "radius", "window", "budget"}) EXPECT_TRUE(j["witness"].contains(key)) << key;
}

TEST(Cli, RegularityWitnessSchema) {
  auto j = run_json("regularity check " + ex("S.pres") + " --radius 4 --window -1..1 --X \"Principal(b x[0])\" --h a", 0);
  EXPECT_EQ(j["witness"]["Y"], nlohmann::json::array({"Principal(b x[0])"}));
  EXPECT_EQ(j["witness"]["k"], nlohmann::json::array({1}));
  EXPECT_EQ(j["witness"]["radius"], 4);
  EXPECT_EQ(j["witness"]["window"], "-1..1");
  auto c = run_json("regularity check " + ex("S.pres") + " --radius 4 --window -1..1 --X \"Family(b)\" --h a", 1);
  EXPECT_EQ(c["words"][0], "b y[0]");
  EXPECT_EQ(run("regularity check " + ex("S.pres") + " --kind gp-eq-g --X \"Family(b)\" --g a").code, 3);
}

TEST(Cli, ClosureSchemaAndDeterminism) {
  std::string args = "ideals closure " + ex("S.pres") + " --radius 5 --window -1..1 --format json";
  Result a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j["saturated"].get<bool>());
  ASSERT_FALSE(j["representatives"].empty());
  for (const auto& r : j["representatives"]) {
    EXPECT_TRUE(r.contains("description"));
    EXPECT_TRUE(r.contains("generators"));
    EXPECT_TRUE(r.contains("fingerprint_hash"));
  }
  EXPECT_EQ(j["table"].size(), j["representatives"].size());
  EXPECT_EQ(j["truncation"]["radius"], 5);
  EXPECT_EQ(j["truncation"]["window"], "-1..1");
  EXPECT_EQ(j["presentation"]["hash"].get<std::string>().size(), 16u);
}

TEST(Cli, EveryReportCarriesTruncationAndHash) {
  for (std::string args : {"normalize " + ex("T.pres") + " \"c b x[0]\"", "ideals intersect " + ex("S.pres") + " \"Principal(b)\" \"Principal(a)\"",
                           "spectrum chi " + ex("S.pres") + " \"b x[2]\" --window -1..1",
                           "hausdorff scan " + ex("S.pres") + " --window -1..1"}) {
    Result r = run(args + " --format json");
    ASSERT_EQ(r.code, 0) << args;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.contains("truncation")) << args;
    EXPECT_TRUE(j["presentation"].contains("hash")) << args;
  }
}

TEST(Cli, TextIsDerivedFromJson) {
  std::string args = "ideals containing " + ex("S.pres") + " \"y[3]\" --radius 6 --window -3..3";
  auto j = run_json(args, 0);
  Result t = run(args);
  for (const auto& line : j["summary"]) EXPECT_NE(t.out.find(line.get<std::string>() + "\n"), std::string::npos);
  EXPECT_EQ(j["ideals"], nlohmann::json::array({"S", "Principal(y[3])", "Family(e)"}));
}

TEST(Cli, SpectrumAndHausdorff) {
  auto lim = run_json("spectrum limit " + ex("T.pres") + " --seq \"b x[n]\" --window -1..1", 0);
  auto limy = run_json("spectrum limit " + ex("T.pres") + " --seq \"b y[n]\" --window -1..1", 0);
  EXPECT_EQ(lim["character"], limy["character"]);
  auto hs = run_json("hausdorff scan " + ex("free2.pres") + " --window 0..0", 0);
  EXPECT_TRUE(hs["witnesses"].empty());
  auto omega = run_json("spectrum omega " + ex("S.pres") + " --word \"b x[0]\" --window -1..1", 0);
  EXPECT_EQ(omega["status"], "holds");
}

TEST(Cli, AlignCheck) {
  auto j = run_json("align-check " + ex("S.pres") + " a b --radius 4 --window -2..2", 0);
  EXPECT_EQ(j["pairs"][0]["count"], 10);
  auto f = run_json("align-check " + ex("free2.pres") + " --window 0..0", 0);
  for (const auto& e : f["pairs"]) EXPECT_LE(e["count"].get<int>(), 1);
}

TEST(Cli, Regrep) {
  EXPECT_EQ(run("regrep eval " + ex("T.pres") + " --radius 5 --window -1..1 --expr \"(L[a]-1)*(L[c]-1)*P[Family(b)]\"").code, 0);
  auto s = run_json("regrep eval " + ex("S.pres") + " --radius 5 --window -1..1 --expr \"(L[a]-1)*P[Family(b)]\"", 1);
  EXPECT_GE(s["residual"].get<double>(), 1.0);
  auto r4 = run_json("regrep r4 " + ex("S.pres") + " --X \"Family(b)\" --cover \"Principal(b x[0])\"", 2);
  EXPECT_FALSE(r4["cover_holds"].get<bool>());
  auto l = run_json("regrep lemma16 --m 2 --alpha 0.6", 0);
  EXPECT_NEAR(l["eps"].get<double>(), 0.02178, 1e-5);
  EXPECT_TRUE(l["check"]["holds"].get<bool>());
  auto t = run_json("regrep lemma16 --trace 3", 0);
  EXPECT_NEAR(t["b_trace"].get<double>(), 1.0 / 3, 1e-12);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 3);
  EXPECT_EQ(run("bogus").code, 3);
  EXPECT_EQ(run("normalize /nonexistent.pres a").code, 3);
  EXPECT_EQ(run("normalize " + ex("S.pres") + " \"q[1]\"").code, 3);
  EXPECT_EQ(run("cancel-check " + ex("S.pres") + " --window 3").code, 3);
  EXPECT_EQ(run("regrep lemma16 --m 2 --alpha 0.5").code, 3);
  EXPECT_EQ(run("ideals intersect " + ex("S.pres") + " \"Principal(a\" S").code, 3);
  EXPECT_EQ(run("normalize builtin:S \"a b x[0]\"").code, 0);
  EXPECT_EQ(run("normalize builtin:nope a").code, 3);
}
