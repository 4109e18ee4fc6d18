#pragma once

#include "projection.h"
#include "solvers.h"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

/*
  Pattern databases: optimal goal distances of the projected task, indexed
  by the packed pattern bits of a state. Classical tasks only.
*/
namespace pdb {

using projection::Pattern;
using solvers::Cost;
using task_model::PlanningTask;
using task_model::State;

struct PatternDatabase {
    Pattern pattern;                      // indices into the originating task
    std::vector<std::string> fact_names;  // pattern facts, projection order
    std::uint64_t fingerprint = 0;        // of the originating task
    bool dense = false;
    std::vector<Cost> dense_table;        // 2^|pattern| entries when dense
    std::map<std::uint64_t, Cost> sparse_table;  // missing index = unreachable
};

// FNV-1a over a canonical dump of the task; ties a stored database to the
// exact task it was built from.
std::uint64_t task_fingerprint(const PlanningTask &t);

// Packed abstract state: bit i holds the fact at pattern position i.
std::uint64_t project_to_index(const State &s, const Pattern &p);

/*
  Projects the task, expands the abstract space and runs backward
  uniform-cost search. Abstract states not generated from the projected
  initial state keep an infinite entry; projections of reachable concrete
  states are always covered. Dense storage up to 24 pattern bits.
*/
PatternDatabase build_pdb(const PlanningTask &t, const Pattern &p);

Cost lookup(const PatternDatabase &db, const State &s);

// h(s) = max over the databases; empty collection gives h = 0.
solvers::Heuristic max_combine(std::vector<PatternDatabase> dbs);

struct AdditiveVerdict {
    bool accepted = true;
    std::string witness_action;  // set when rejected
};

// Patterns may be summed only when no ground action has a nonzero net
// effect on two of them.
AdditiveVerdict check_additive(const PlanningTask &t, const std::vector<Pattern> &patterns);

// Sum of lookups; throws invalid_argument naming the offending action when
// the disjointness gate rejects.
solvers::Heuristic additive_combine(const PlanningTask &t, std::vector<PatternDatabase> dbs);

/*
  Text format: a version line, the task fingerprint in hex, the pattern's
  fact names, then "index: distance" lines in ascending index order for the
  finite entries.
*/
std::string dump_pdb(const PatternDatabase &db);
PatternDatabase parse_pdb(const std::string &text);
void save_pdb(const PatternDatabase &db, const std::string &path);
PatternDatabase load_pdb(const std::string &path);

// Resolves the stored fact names against the task's fact table and checks
// the fingerprint, making a loaded database usable for lookups.
void bind_to_task(PatternDatabase &db, const PlanningTask &t);

}  // namespace pdb
