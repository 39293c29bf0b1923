#include "modalq/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "modalq/errors.hpp"
#include "modalq/harness.hpp"
#include "modalq/kripke.hpp"
#include "modalq/model_io.hpp"
#include "modalq/relalg.hpp"
#include "modalq/schema_map.hpp"
#include "modalq/syntax.hpp"
#include "modalq/translator.hpp"
#include "modalq/tsv.hpp"

namespace modalq::cli {

namespace {

const char* const kFooter = R"(Query grammar (loosest binding first):
  formula := disj [ '->' formula ]            right-associative
  disj    := conj { '|' conj }
  conj    := unary { '&' unary }
  unary   := '!' unary | '<R>' unary | '[R]' unary
           | ('exists' | 'forall') VAR '.' formula
           | '<lam' VAR '.' formula '>(' term ')'
           | '(' formula ')' | term ('=' | '!=') term
  term    := 'obj' | ?x | %a | concept | @concept | @%a
  VAR     := ?x (object variable) | %a (concept variable)

Targets name the answer columns in order, for example --target ?a --target ?x.
Without --target the free variables are used in order of first occurrence.

Exit codes:
  0  success
  1  usage error
  2  query parse or kind error, unknown name in the query
  3  model file unreadable, malformed or violating a model invariant
  4  query has no algebra translation
  5  the direct and algebra answers differ)";

struct QueryArgs {
  std::string model_path;
  std::string query;
  std::vector<std::string> targets;
  bool header = false;
};

syntax::ModalQuery read_query(const QueryArgs& a) {
  if (!a.targets.empty()) return syntax::parse_query(a.query, a.targets);
  syntax::Formula f = syntax::parse_formula(a.query);
  auto fv = syntax::free_vars(f);
  return syntax::make_query(std::move(f), std::move(fv));
}

relalg::Relation algebra_answer(const syntax::ModalQuery& q, const kripke::KripkeModel& m) {
  return relalg::eval(translate::translate_query(q, m), schema::build_database(m).tables);
}

int classify(const std::exception& e) {
  if (dynamic_cast<const kripke::ModelFormatError*>(&e) || dynamic_cast<const ModelInvariantError*>(&e))
    return kModelError;
  if (dynamic_cast<const UntranslatableTerm*>(&e)) return kUntranslatable;
  if (dynamic_cast<const Error*>(&e)) return kQueryError;
  return kUsage;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const SyntaxError*>(&e)) return "SyntaxError";
  if (dynamic_cast<const KindError*>(&e)) return "KindError";
  if (dynamic_cast<const FreeVarMismatch*>(&e)) return "FreeVarMismatch";
  if (dynamic_cast<const ModelInvariantError*>(&e)) return "ModelInvariantError";
  if (dynamic_cast<const kripke::ModelFormatError*>(&e)) return "ModelFormatError";
  if (dynamic_cast<const UnknownConstant*>(&e)) return "UnknownConstant";
  if (dynamic_cast<const UnboundVariable*>(&e)) return "UnboundVariable";
  if (dynamic_cast<const UnknownRelation*>(&e)) return "UnknownRelation";
  if (dynamic_cast<const UnknownVariable*>(&e)) return "UnknownVariable";
  if (dynamic_cast<const UntranslatableTerm*>(&e)) return "UntranslatableTerm";
  if (dynamic_cast<const DegreeError*>(&e)) return "DegreeError";
  return "error";
}

int cmd_map(const std::string& model_path, const std::string& out_dir, bool to_stdout, std::ostream& out) {
  auto db = schema::build_database(kripke::load_model(model_path));
  for (const char* name : {schema::kSta, schema::kRel, schema::kCon, schema::kObj}) {
    const auto& rel = db.tables.get(name);
    if (to_stdout) {
      out << "# " << name << '\n';
      write_tsv(out, rel);
      continue;
    }
    std::filesystem::path path = std::filesystem::path(out_dir) / (std::string(name) + ".tsv");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    write_tsv(file, rel);
  }
  return kOk;
}

int cmd_translate(const QueryArgs& a, bool evaluate, std::ostream& out) {
  auto model = kripke::load_model(a.model_path);
  auto q = read_query(a);
  auto expr = translate::translate_query(q, model);
  out << relalg::render_algebra(expr) << '\n';
  if (evaluate) write_tsv(out, relalg::eval(expr, schema::build_database(model).tables), a.header);
  return kOk;
}

int cmd_eval(const QueryArgs& a, const std::string& engine, std::ostream& out, std::ostream& err) {
  auto model = kripke::load_model(a.model_path);
  auto q = read_query(a);
  if (engine == "direct") {
    write_tsv(out, kripke::answer_direct(model, q), a.header);
    return kOk;
  }
  if (engine == "algebra") {
    write_tsv(out, algebra_answer(q, model), a.header);
    return kOk;
  }
  auto direct = kripke::answer_direct(model, q);
  auto algebra = algebra_answer(q, model);
  if (!(direct == algebra)) {
    err << "correspondence mismatch\n"
        << "direct:\n"
        << to_tsv(direct) << "algebra:\n"
        << to_tsv(algebra);
    return kMismatch;
  }
  write_tsv(out, direct, a.header);
  return kOk;
}

int cmd_fuzz(const harness::GenParams& p, std::size_t cases, translate::Options opts, bool shrink,
             const std::string& report_path, std::ostream& out) {
  auto summary = harness::run_campaign(p, cases, opts, shrink);
  out << harness::render_summary(summary);
  if (!report_path.empty()) {
    std::ofstream file(report_path);
    if (!file) throw std::runtime_error("cannot write " + report_path);
    file << harness::summary_json(summary);
  }
  return summary.failed == 0 ? kOk : kMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Answers first-order modal queries over Kripke models, directly and through relational algebra."};
  app.name("modalq");
  app.footer(kFooter);
  app.require_subcommand(1);

  auto* map_cmd = app.add_subcommand("map", "Write the Sta, Rel, Con and Obj tables of a model as TSV files");
  std::string map_model;
  std::string out_dir = ".";
  bool map_stdout = false;
  map_cmd->add_option("model", map_model, "Model JSON file")->required();
  map_cmd->add_option("--out-dir", out_dir, "Directory for Sta.tsv, Rel.tsv, Con.tsv, Obj.tsv")->capture_default_str();
  map_cmd->add_flag("--stdout", map_stdout, "Print the tables to stdout, each after a '# Name' line");

  QueryArgs qa;
  bool evaluate = false;
  std::string engine = "both";
  auto add_query_args = [&](CLI::App* cmd) {
    cmd->add_option("model", qa.model_path, "Model JSON file")->required();
    cmd->add_option("query", qa.query, "Modal query text")->required();
    cmd->add_option("-t,--target", qa.targets, "Target variable, repeatable (?x or %a)");
    cmd->add_flag("--header", qa.header, "Prefix TSV output with 1-based column indices");
  };
  auto* translate_cmd = app.add_subcommand("translate", "Print the relational algebra translation of a query");
  add_query_args(translate_cmd);
  translate_cmd->add_flag("--eval", evaluate, "Also evaluate it against the model's tables");

  auto* eval_cmd = app.add_subcommand("eval", "Answer a query and print the tuples as TSV");
  add_query_args(eval_cmd);
  eval_cmd->add_option("-e,--engine", engine, "direct, algebra, or both (fails when they differ)")
      ->check(CLI::IsMember({"direct", "algebra", "both"}))
      ->capture_default_str();

  auto* fuzz_cmd = app.add_subcommand("fuzz", "Compare both engines on random models and queries");
  harness::GenParams p;
  std::size_t cases = 1000;
  bool no_shrink = false;
  std::string report_path;
  std::string mutation_name = "none";
  fuzz_cmd->add_option("--seed", p.seed, "Campaign seed")->capture_default_str();
  fuzz_cmd->add_option("--cases", cases, "Number of cases")->capture_default_str()->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-states", p.max_states)->capture_default_str();
  fuzz_cmd->add_option("--max-objects", p.max_objects)->capture_default_str();
  fuzz_cmd->add_option("--max-concepts", p.max_concepts)->capture_default_str();
  fuzz_cmd->add_option("--max-relations", p.max_relations)->capture_default_str();
  fuzz_cmd->add_option("--max-depth", p.max_depth)->capture_default_str();
  fuzz_cmd->add_option("--max-free-vars", p.max_free_vars)->capture_default_str();
  fuzz_cmd->add_option("--max-binders", p.max_binders)->capture_default_str();
  fuzz_cmd->add_flag("--allow-lambda,!--no-allow-lambda", p.allow_lambda, "Generate abstractions (default on)");
  fuzz_cmd->add_flag("--allow-concept-vars,!--no-allow-concept-vars", p.allow_concept_vars,
                     "Generate concept variables (default on)");
  fuzz_cmd->add_flag("--no-shrink", no_shrink, "Report the first counterexample unshrunk");
  fuzz_cmd->add_option("--report", report_path, "Write a JSON report to this file");
  std::vector<std::string> mutation_names;
  for (auto m : translate::all_mutations()) mutation_names.push_back(translate::to_string(m));
  fuzz_cmd->add_option("--mutation", mutation_name, "Deliberately break one translation rule")
      ->check(CLI::IsMember(mutation_names))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*map_cmd) return cmd_map(map_model, out_dir, map_stdout, out);
    if (*translate_cmd) return cmd_translate(qa, evaluate, out);
    if (*eval_cmd) return cmd_eval(qa, engine, out, err);
    translate::Options opts;
    for (auto m : translate::all_mutations()) {
      if (translate::to_string(m) == mutation_name) opts.mutation = m;
    }
    return cmd_fuzz(p, cases, opts, !no_shrink, report_path, out);
  } catch (const std::invalid_argument& e) {
    err << "modalq: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "modalq: " << error_kind(e) << ": " << e.what() << '\n';
    return classify(e);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace modalq::cli
