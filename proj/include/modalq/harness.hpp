#pragma once

// Differential testing of the two query engines: random models and queries,
// direct evaluation versus translation plus algebra evaluation, and
// counterexample shrinking.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "modalq/kripke.hpp"
#include "modalq/relalg.hpp"
#include "modalq/syntax.hpp"
#include "modalq/translator.hpp"

namespace modalq::harness {

struct GenParams {
  std::uint64_t seed = 42;
  int max_states = 6;
  int max_objects = 8;
  int max_concepts = 3;
  int max_relations = 2;
  int max_depth = 4;
  int max_free_vars = 2;
  // Nesting limit for quantifiers and abstractions. Each binder widens every
  // atom below it by one Obj/Con factor.
  int max_binders = 2;
  bool allow_lambda = true;
  bool allow_concept_vars = true;

  // Throws std::invalid_argument.
  void validate() const;
};

using Rng = std::mt19937_64;

// Deterministic per-case seed.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

kripke::KripkeModel gen_model(const GenParams& p);
kripke::KripkeModel gen_model(const GenParams& p, Rng& rng);

// Well-kinded, translatable, depth <= max_depth, targets = free variables.
syntax::ModalQuery gen_query(const GenParams& p, const kripke::KripkeModel& model);
syntax::ModalQuery gen_query(const GenParams& p, const kripke::KripkeModel& model, Rng& rng);
// Formula with `scope` variables available; a building block for targeted
// generators.
syntax::Formula gen_formula(const GenParams& p, const kripke::KripkeModel& model, Rng& rng,
                            const std::vector<syntax::Variable>& scope, int depth);

std::string fingerprint(const kripke::KripkeModel& model);
std::string describe_query(const syntax::ModalQuery& q);

struct CorrespondenceReport {
  std::string model_fingerprint;
  std::string query;
  std::optional<relalg::Relation> direct;
  std::optional<relalg::Relation> algebra;
  bool equal = false;
  // A tuple in exactly one answer, and which engine produced it.
  std::optional<relalg::Tuple> witness;
  std::string witness_side;
  // Set when an engine raised instead of answering.
  std::string error;
  double direct_ms = 0;
  double algebra_ms = 0;
};

CorrespondenceReport check(const kripke::KripkeModel& model, const syntax::ModalQuery& q,
                           translate::Options opts = {});

struct Counterexample {
  kripke::KripkeModel model;
  syntax::ModalQuery query;
  CorrespondenceReport report;
  std::uint64_t case_index = 0;
};

// Greedy: drop states, then edges, then objects, then formula subtrees, keeping
// each step that still fails.
Counterexample shrink(Counterexample cx, translate::Options opts = {});

struct CampaignSummary {
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  // Structural lemma violations found in generated database images.
  std::size_t lemma_violations = 0;
  std::optional<Counterexample> first_counterexample;
  double wall_seconds = 0;
};

// Throws std::invalid_argument for cases == 0 or bad params.
CampaignSummary run_campaign(const GenParams& p, std::size_t cases, translate::Options opts = {},
                             bool shrink_counterexample = true);

// Deterministic text: excludes timings.
std::string render_summary(const CampaignSummary& s);
// JSON document with the summary and the shrunk counterexample, if any.
std::string summary_json(const CampaignSummary& s);

// Cross-checks over generated formulas; each returns the number of
// discrepancies found in `count` samples.

// Box translation versus translation of !<R>!p, compared structurally.
std::size_t box_duality_discrepancies(const GenParams& p, std::size_t count);
// Division-based forall versus the !exists! rewrite, compared on evaluation.
std::size_t forall_rewrite_discrepancies(const GenParams& p, std::size_t count);
// Atomic equalities: term values agree iff the tuple is in the atom's
// translation, over every assignment and state.
std::size_t atomic_equality_discrepancies(const GenParams& p, std::size_t count);

}  // namespace modalq::harness
