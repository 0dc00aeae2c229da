#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cset_transport/io.hpp"

using namespace cst;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "cset-transport");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data_file(const std::string& name) { return std::string(CST_DATA_DIR) + "/" + name + ".json"; }

std::string temp_file(const std::string& name, const std::string& contents) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path.string();
}

}  // namespace

TEST(Cli, HausdorffOfCycles) {
  Outcome r = run({"hausdorff", data_file("C2"), data_file("C4"), "--p", "1", "--class", "md"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\nwitness {\"E\":[0,1],\"V\":[0,1]}\nweights src=0 tgt=2\n");
  Outcome strict = run({"hausdorff", data_file("C2"), data_file("C4"), "--p", "1", "--class", "mm"});
  EXPECT_EQ(strict.code, 0);
  EXPECT_EQ(strict.out.substr(0, 4), "inf\n");
}

TEST(Cli, MarkovFeasibility) {
  Outcome fig6 = run({"markov-feasible", data_file("fig6x"), data_file("fig6y")});
  EXPECT_EQ(fig6.code, 0);
  EXPECT_EQ(fig6.out, "infeasible\n");
  Outcome fig7 = run({"markov-feasible", "builtin:fig7x", "builtin:fig7y"});
  EXPECT_EQ(fig7.code, 0);
  EXPECT_EQ(fig7.out.substr(0, 9), "feasible\n");
  Outcome mp = run({"markov-feasible", "--measure-preserving", "builtin:C2", "builtin:C3"});
  EXPECT_EQ(mp.out, "infeasible\n");
}

TEST(Cli, Wasserstein) {
  Outcome r = run({"wasserstein", data_file("C2"), data_file("C4"), "--p", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 2), "0\n");
  Outcome back = run({"--format", "json", "wasserstein", "builtin:C4", "builtin:C2"});
  Json j = parse_json(back.out);
  EXPECT_EQ(j["schema"], "cset-transport/1");
  EXPECT_EQ(j["command"], "wasserstein");
  EXPECT_EQ(j["distance"], "inf");
  EXPECT_EQ(run({"wasserstein", "builtin:C2", "builtin:C4", "--p", "inf"}).code, 2);
}

TEST(Cli, Gap) {
  Outcome r = run({"gap", "builtin:C2", "builtin:C4", "--class", "md"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "wasserstein 0\nhausdorff 2\n");
}

TEST(Cli, HomAndValidate) {
  EXPECT_EQ(run({"hom", "builtin:fig5x", "builtin:fig5y"}).out, "{\"E\":[0,2],\"V\":[0,1,3]}\n");
  EXPECT_EQ(run({"hom", "builtin:fig7x", "builtin:fig7y"}).out, "none\n");
  EXPECT_EQ(run({"validate", data_file("fig5x")}).out, "ok\n");
  std::string dsl = temp_file("cst_theory.txt", "theory T {\n  ob A\n  hom f: A -> A\n  eq f.f = id(A)\n}\n");
  EXPECT_EQ(run({"validate", dsl}).code, 0);
  std::string bad = temp_file("cst_bad.json", "{\"theory\": \"Graph\", \"sets\": {\"V\": 1, \"E\": 1}, "
                                              "\"maps\": {\"src\": [0], \"tgt\": [4]}}");
  EXPECT_NE(run({"validate", bad}).code, 0);
}

TEST(Cli, TransportCommands) {
  std::string ot = temp_file("cst_ot.json", R"({"mu": [0.7, 0.3], "nu": [0.4, 0.6], "cost": [[0, 1], [1, 0]]})");
  Outcome r = run({"ot", ot});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.3\n");
  Outcome coupled = run({"--format", "json", "ot", ot, "--coupling"});
  Json j = parse_json(coupled.out);
  EXPECT_TRUE(j.contains("coupling"));
  std::string wk = temp_file("cst_wk.json", R"({"m": {"rows": 1, "cols": 2, "p": [[1, 0]]},
    "n": {"rows": 1, "cols": 2, "p": [[0, 1]]}, "mu": [2], "metric": [[0, 3], [3, 0]], "p": 1})");
  EXPECT_EQ(run({"wk", wk}).out, "6\n");
}

TEST(Cli, ExportLp) {
  Outcome r = run({"export-lp", "builtin:fig7x", "builtin:fig7y"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 11), "MINIMIZE 0\n");
  EXPECT_EQ(r.out.substr(r.out.size() - 4), "END\n");
  std::string path = (std::filesystem::temp_directory_path() / "cst_export.lp").string();
  EXPECT_EQ(run({"export-lp", "--problem", "wasserstein", "builtin:C2", "builtin:C3", "-o", path}).code, 0);
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first.substr(0, 8), "MINIMIZE");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"hausdorff", "builtin:C2"}).code, 2);
  EXPECT_EQ(run({"hausdorff", "builtin:C2", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"hausdorff", "builtin:C2", "builtin:C4", "--p", "0.5"}).code, 2);
  EXPECT_EQ(run({"hausdorff", "builtin:C2", "builtin:C4", "--class", "bogus"}).code, 2);
  std::string broken = temp_file("cst_broken.json", "{\"theory\": ");
  Outcome parse = run({"validate", broken});
  EXPECT_EQ(parse.code, 2);
  EXPECT_FALSE(parse.err.empty());
  Outcome guard = run({"--guard", "10", "hausdorff", "builtin:C6", "builtin:C6", "--class", "all"});
  EXPECT_EQ(guard.code, 1);
  EXPECT_NE(guard.err.find("--force"), std::string::npos);
  EXPECT_EQ(run({"hausdorff", "builtin:C2", "builtin:asetx"}).code, 1);
}

TEST(Cli, DeterministicOutput) {
  std::vector<std::vector<std::string>> invocations{
      {"--format", "json", "hausdorff", "builtin:C3", "builtin:C5", "--class", "md"},
      {"--format", "json", "wasserstein", "builtin:C3", "builtin:C5", "--p", "2"},
      {"--format", "json", "markov-feasible", "builtin:fig5x", "builtin:fig5y"},
      {"export-lp", "--problem", "wasserstein", "builtin:C2", "builtin:C4"}};
  for (const auto& args : invocations) {
    Outcome a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    if (args[0] == "--format") {
      Json j = parse_json(a.out);
      EXPECT_EQ(j["schema"], kSchema);
    }
  }
}
