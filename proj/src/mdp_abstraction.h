#pragma once

#include "statespace.h"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/*
  MDP-side abstraction builders and checkers.

  Given an explicit MDP and a partition of its states into classes, three
  abstraction families are supported:
    - WFA: one weighting distribution per class,
    - ARMDP: one weighting distribution per (class, action),
    - ABPMDP: componentwise [min, max] intervals over class members.
  All probability arithmetic is exact (rationals).
*/
namespace mdp_abstraction {

using rationals::Rational;
using statespace::ExplicitMdp;

class ModelError : public std::runtime_error {
public:
    using runtime_error::runtime_error;
};

// Raised when a weighting function cannot be derived because two members of
// a class disagree on where an action leads in the abstraction.
class AmbiguityError : public std::runtime_error {
public:
    using runtime_error::runtime_error;
};

struct Partition {
    std::vector<int> class_of;              // state id -> class id
    std::vector<std::vector<int>> members;  // class id -> sorted member ids
    std::vector<std::string> class_names;

    int num_classes() const { return static_cast<int>(members.size()); }
};

std::string default_class_name(int i);

// Builds members and default names from a labeling. Class ids must form a
// contiguous range starting at 0.
Partition make_partition(const std::vector<int> &class_of);

// Throws invalid_argument unless p is a partition of m's state set.
void validate_partition(const ExplicitMdp &m, const Partition &p);

struct CSetKey {
    int cls;
    int action;
    int target_cls;
    auto operator<=>(const CSetKey &) const = default;
};

/*
  C-set C^a(sbar, sbar') with sbar != sbar': the members of sbar from which
  action a moves positive probability mass into sbar'. goal_refined holds
  the subset whose mass reaches a goal state of sbar' (kept only when
  nonempty); it drives the unit-reward choice in default_xi.
*/
struct CSetIndex {
    std::map<CSetKey, std::vector<int>> csets;
    std::map<CSetKey, std::vector<int>> goal_refined;
};

CSetIndex compute_csets(const ExplicitMdp &m, const Partition &p);

struct WfaWeights {
    // per class: member state id -> weight; missing members weigh 0
    std::vector<std::map<int, Rational>> omega;
};

struct ArmdpWeights {
    // per (class, action): member state id -> weight
    std::map<std::pair<int, int>, std::map<int, Rational>> xi;
};

// One class whose C-sets cannot be normalized simultaneously: constraints
// lists every C-set of the class, minimal_core an irredundant subfamily
// with empty intersection.
struct WfaConflict {
    int cls;
    std::vector<std::pair<CSetKey, std::vector<int>>> constraints;
    std::vector<std::pair<CSetKey, std::vector<int>>> minimal_core;
};

struct WfaFeasibility {
    bool feasible;
    WfaWeights weights;                // meaningful iff feasible
    std::vector<WfaConflict> conflicts;  // nonempty iff infeasible
};

/*
  Decides whether a per-class distribution omega exists whose mass sums to 1
  on every nonempty C-set of the class. Support of any solution is confined
  to the intersection of the class's C-sets, so the verdict reduces to
  intersection nonemptiness; on success omega is uniform over the
  intersection (uniform over the whole class when it has no C-sets).
*/
WfaFeasibility wfa_feasibility(const CSetIndex &cs, const Partition &p);

// omega uniform over every whole class.
WfaWeights uniform_weights(const Partition &p);

// xi(cls, a) := omega(cls) for every action.
ArmdpWeights xi_from_omega(const WfaWeights &w, int num_actions);

/*
  Per-action weights: uniform over the union of goal-refined C-sets of
  (cls, a) when nonempty, else uniform over the union of its C-sets, else
  uniform over the members where a is applicable. Requires representative
  independence (throws AmbiguityError otherwise), which makes every
  nonempty C-set of (cls, a) equal to the full applicable set and hence
  keeps all normalization sums at 1.
*/
ArmdpWeights default_xi(const ExplicitMdp &m, const Partition &p, const CSetIndex &cs);

enum class Provenance { planning, wfa, armdp, abpmdp, abpmdp_max };

std::string provenance_name(Provenance p);

struct PointRow {
    std::map<int, Rational> prob;  // target class -> positive probability
    Rational reward = 0;
};

struct IntervalRow {
    // target class -> [lo, hi]; entries with hi == 0 are dropped
    std::map<int, std::pair<Rational, Rational>> prob;
    std::pair<Rational, Rational> reward{0, 0};
};

/*
  Abstract MDP over the partition's classes. A row exists for (cls, a) iff a
  is applicable in at least one member of cls. Point rows of armdp, planning
  and abpmdp_max provenance sum to 1; wfa rows may sum to less when omega
  puts weight on members where the action is inapplicable (that mass is
  lost). A class is a goal class iff every member is a goal state.
*/
struct AbstractMdp {
    Provenance provenance = Provenance::planning;
    std::vector<std::string> class_names;
    std::vector<uint8_t> goal;
    std::vector<std::string> action_names;
    std::vector<long long> action_costs;
    Rational gamma = 0;
    bool interval = false;
    std::map<std::pair<int, int>, PointRow> point_rows;
    std::map<std::pair<int, int>, IntervalRow> interval_rows;

    int num_classes() const { return static_cast<int>(class_names.size()); }
    int num_actions() const { return static_cast<int>(action_names.size()); }
};

// True when the row moves no mass out of cls (all positive entries, or all
// positive upper bounds, sit on the diagonal). Empty rows do not count.
bool self_loop_only(int cls, const PointRow &row);
bool self_loop_only(int cls, const IntervalRow &row);

AbstractMdp build_wfa(const ExplicitMdp &m, const Partition &p, const WfaWeights &w);
AbstractMdp build_armdp(const ExplicitMdp &m, const Partition &p, const ArmdpWeights &x);
AbstractMdp build_abpmdp(const ExplicitMdp &m, const Partition &p);

// Upper-bound selection: every interval is replaced by its upper endpoint.
// Throws ModelError when a selected row does not sum to 1 (cannot happen
// without ambiguity).
AbstractMdp select_max(const AbstractMdp &am);

// Views the classes of a planning abstraction's expanded graph as an
// AbstractMdp, so the equivalence checker can compare it with the builders'
// output. States of m are taken as classes 1:1.
AbstractMdp planning_view(const ExplicitMdp &m);

// Point-valued AbstractMdp as an ExplicitMdp for the solvers. Rewards are
// copied, not recomputed; states carry no facts, only names.
ExplicitMdp to_explicit(const AbstractMdp &am);

struct Witness {
    std::string sbar;
    std::string action;
    std::string sbar_prime;
    std::string state1;
    std::string state2;
    std::string detail;
};

struct Verdict {
    bool pass = true;
    std::optional<Witness> witness;

    static Verdict ok() { return {}; }
    static Verdict fail(Witness w) { return {false, std::move(w)}; }
};

/*
  Connection preservation: for all cls != cls', C^a(cls, cls') is nonempty
  exactly when the abstract row moves positive mass from cls to cls' under
  a. Interval rows are checked against the upper endpoint: C nonempty
  implies hi > 0, C empty implies the entry is absent or [0, 0].
*/
Verdict check_connection_preserving(const ExplicitMdp &m, const Partition &p, const AbstractMdp &am);

// Every point-row entry is 0 or 1.
Verdict check_deterministic(const AbstractMdp &am);

/*
  Exact equality of transition rows and rewards between the expanded
  planning abstraction and a built abstract MDP. Actions are matched by
  name; rows whose mass never leaves their class are ignored on both sides,
  since the planning side drops actions with no net projected effect.
*/
Verdict check_equivalence(const ExplicitMdp &planning, const AbstractMdp &am);

/*
  Representative independence: for every (cls, a), all members in which a is
  applicable project to the same distribution over classes. Exact
  comparison; first counterexample pair reported.
*/
Verdict check_representative_independence(const ExplicitMdp &m, const Partition &p);

// Concrete graph with classes rendered as dashed clusters.
std::string to_dot(const ExplicitMdp &m, const Partition &p);

// Abstract MDP with edge labels "action:prob" or "action:[lo,hi]".
std::string to_dot(const AbstractMdp &am);

}  // namespace mdp_abstraction
