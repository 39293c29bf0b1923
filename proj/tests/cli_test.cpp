#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "modalq/cli.hpp"

using namespace modalq;

namespace {

const std::string kModel = std::string(MODALQ_DATA_DIR) + "/example_model.json";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("modalq_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Map, ExampleTables) {
  auto dir = scratch("map");
  auto r = run({"map", kModel, "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir / "Sta.tsv"), "1\td\n2\ta\n3\tb\n4\tc\n");
  EXPECT_EQ(slurp(dir / "Rel.tsv"), "1\t2\tCOMP\n1\t3\tCOMP\n1\t4\tCOMP\n");
  EXPECT_EQ(slurp(dir / "Con.tsv"), "code\nid\n");
  EXPECT_EQ(slurp(dir / "Obj.tsv"), "1\n2\n3\n4\na\nb\nc\nd\n");
}

TEST(Map, SingleStateModel) {
  auto dir = scratch("single");
  std::ofstream(dir / "m.json") << R"({"objects": ["s"], "concepts": ["id"], "states": [{"id": "s"}],
                                       "relations": {"R": []}})";
  auto r = run({"map", (dir / "m.json").string(), "--stdout"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "# Sta\ns\n# Rel\n# Con\nid\n# Obj\ns\n");
}

TEST(Map, DuplicateIdsRejected) {
  auto dir = scratch("dup");
  std::string text = slurp(kModel);
  text.replace(text.find(R"({"id": "2")"), 10, R"({"id": "1")");
  std::ofstream(dir / "m.json") << text;
  auto r = run({"map", (dir / "m.json").string(), "--out-dir", dir.string()});
  EXPECT_EQ(r.code, cli::kModelError);
  EXPECT_NE(r.err.find("key violation"), std::string::npos) << r.err;
}

TEST(Map, MissingFile) {
  auto r = run({"map", "/nonexistent/model.json", "--stdout"});
  EXPECT_EQ(r.code, cli::kModelError);
}

TEST(Eval, BothEnginesAgree) {
  auto r = run({"eval", kModel, "@code='b'", "--engine", "both"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "3\n");
  auto one = run({"eval", kModel, "@id='3' & @code=?a", "--target", "?a", "--header"});
  EXPECT_EQ(one.out, "1\t2\nb\t3\n");
}

TEST(Eval, LambdaExampleIsEmpty) {
  auto r = run({"eval", kModel, "<lam ?y . <COMP> @code=?y>(@code)", "--engine", "direct"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
}

TEST(Eval, RelativizedConceptVariableIsUntranslatable) {
  auto r = run({"eval", kModel, "exists %a . @%a = 'b'", "--engine", "algebra"});
  EXPECT_EQ(r.code, cli::kUntranslatable);
  EXPECT_NE(r.err.find("UntranslatableTerm"), std::string::npos);
  EXPECT_NE(r.err.find("@%a"), std::string::npos);
  EXPECT_EQ(r.out, "");
  auto d = run({"eval", kModel, "exists %a . @%a = 'b'", "--engine", "direct"});
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out, "3\n");
}

TEST(Eval, ErrorClasses) {
  EXPECT_EQ(run({"eval", kModel, "@code = "}).code, cli::kQueryError);
  EXPECT_EQ(run({"eval", kModel, "code = 'b'"}).code, cli::kQueryError);
  EXPECT_EQ(run({"eval", kModel, "?x = 'b'", "-t", "?y"}).code, cli::kQueryError);
  EXPECT_EQ(run({"eval", kModel, "<PART> @code = 'b'"}).code, cli::kQueryError);
  EXPECT_EQ(run({"eval", kModel, "@code='b'", "--engine", "magic"}).code, cli::kUsage);
  EXPECT_EQ(run({"eval", kModel}).code, cli::kUsage);
  EXPECT_EQ(run({}).code, cli::kUsage);
}

TEST(Translate, PrintsAlgebraAndOptionallyEvaluates) {
  auto r = run({"translate", kModel, "<COMP> @code='b'"});
  EXPECT_EQ(r.out,
            "(project (2) (select (= 4 'COMP') (select (= 1 3) (product (project (1) (select (= 2 'b') Sta)) "
            "Rel))))\n");
  auto e = run({"translate", kModel, "@code='b'", "--eval"});
  EXPECT_EQ(e.out, "(project (1) (select (= 2 'b') Sta))\n3\n");
}

TEST(Fuzz, PassesAndIsDeterministic) {
  auto a = run({"fuzz", "--seed", "42", "--cases", "50"});
  auto b = run({"fuzz", "--seed", "42", "--cases", "50"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("failed: 0"), std::string::npos);
}

TEST(Fuzz, MutationFailsWithReport) {
  auto dir = scratch("fuzz");
  auto r = run({"fuzz", "--cases", "200", "--mutation", "box-without-duality", "--report",
                (dir / "report.json").string()});
  EXPECT_EQ(r.code, cli::kMismatch);
  EXPECT_NE(r.out.find("counterexample"), std::string::npos);
  EXPECT_NE(slurp(dir / "report.json").find("\"witness\""), std::string::npos);
  EXPECT_EQ(run({"fuzz", "--cases", "0"}).code, cli::kUsage);
}

TEST(Help, DocumentsGrammarAndExitCodes) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
  EXPECT_NE(r.out.find("<lam"), std::string::npos);
}
