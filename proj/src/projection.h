#pragma once

#include "mdp_abstraction.h"

#include <string>
#include <vector>

/*
  Planning-side abstraction: project a task onto a pattern of facts, expand
  the abstract state space, and derive state partitions that tie the
  concrete graph to the abstraction.
*/
namespace projection {

using statespace::ExplicitMdp;
using task_model::PlanningTask;
using task_model::State;

struct Pattern {
    std::vector<int> fact_indices;  // unique, in projection order

    int size() const { return static_cast<int>(fact_indices.size()); }
};

// Validates uniqueness and range.
Pattern make_pattern(const std::vector<int> &indices, int num_facts);

// Comma-separated fact names or indices; commas inside parentheses belong
// to the fact name. Empty spec gives the empty pattern.
Pattern parse_pattern(const std::string &spec, const task_model::FactTable &facts);

// Keeps exactly the pattern bits, in pattern order.
State project_state(const State &s, const Pattern &p);

// Same restriction for signed vectors (effect deltas, unclamped sums).
task_model::SignedVec project_signed(const task_model::SignedVec &v, const Pattern &p);

struct AbstractTask {
    PlanningTask task;  // over the pattern's facts
    Pattern pattern;    // relative to the original fact table
};

/*
  Initial state and goal are intersected with the pattern, as are every
  action's precondition and per-outcome effects. Actions whose outcomes all
  project to empty effects are removed.
*/
AbstractTask project_task(const PlanningTask &t, const Pattern &p);

ExplicitMdp abstract_graph(const AbstractTask &at, const statespace::ExpandOptions &options = {});

/*
  Partition of m's states by projected bit vector. Class ids follow first
  appearance in state order; names are s-bar style defaults.
*/
mdp_abstraction::Partition partition_from_pattern(const ExplicitMdp &m, const Pattern &p);

/*
  Same partition, but class ids equal the state indices of the expanded
  abstract graph, so both sides of an equivalence check use one indexing.
  Requires every abstract state to have a concrete preimage.
*/
mdp_abstraction::Partition partition_aligned(const ExplicitMdp &m, const ExplicitMdp &abstract_m,
                                             const Pattern &p);

/*
  Asserts project(apply(s, a, o)) = clamp(project(s) + project(delta(o)))
  for every reachable applicable (s, a, o) triple, plus `samples` random
  (not necessarily reachable) states when requested.
*/
mdp_abstraction::Verdict check_linearity(const PlanningTask &t, const Pattern &p, int samples = 0,
                                         unsigned seed = 1);

// Representative independence of the induced partition (same check as in
// mdp_abstraction, under its planning-side name).
mdp_abstraction::Verdict check_no_ambiguity(const ExplicitMdp &m, const mdp_abstraction::Partition &p);

}  // namespace projection
