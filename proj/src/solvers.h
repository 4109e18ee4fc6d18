#pragma once

#include "mdp_abstraction.h"

#include <functional>
#include <limits>
#include <optional>
#include <vector>

/*
  Solvers over explicit models: shortest goal distances, discounted value
  iteration, interval value iteration over interval abstractions, a
  proper-policy diagnostic, and A* over planning tasks.
*/
namespace solvers {

using rationals::Rational;
using statespace::ExplicitMdp;

using Cost = long long;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

// Optimal goal distance per state under action costs, by uniform-cost
// search from the goal states over reversed edges. Deterministic models
// only; unreachable states get kInfiniteCost.
std::vector<Cost> goal_distances(const ExplicitMdp &m);

struct ViOptions {
    double eps = 1e-9;
    bool absorb_goals = true;              // goal states keep value 0
    std::optional<Rational> gamma;         // overrides the model's gamma
    int max_iterations = 1000000;
};

struct ViResult {
    std::vector<double> values;
    std::vector<int> policy;     // greedy; -1 for absorbed or actionless states
    std::vector<double> residuals;  // sup-norm change per sweep
    int iterations = 0;
    bool converged = false;
};

/*
  Jacobi sweeps until the sup-norm residual drops to eps*(1-gamma)/(2*gamma)
  (plain eps when gamma = 0), which bounds the value error by eps. Greedy
  ties go to the smaller action index.
*/
ViResult value_iteration(const ExplicitMdp &m, const ViOptions &options = {});
ViResult value_iteration(const mdp_abstraction::AbstractMdp &am, const ViOptions &options = {});

struct IviResult {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> residuals;
    int iterations = 0;
    bool converged = false;
};

/*
  Pessimistic and optimistic value iteration over an interval abstraction.
  Each backup assigns row mass inside the intervals by value order (fill
  toward high-value targets for the upper bound, low-value targets for the
  lower bound); both bounds maximize over actions. Throws ModelError when
  some row admits no selection summing to 1.
*/
IviResult interval_value_iteration(const mdp_abstraction::AbstractMdp &am,
                                   const ViOptions &options = {});

struct ProperPolicyReport {
    bool exists = false;
    std::vector<int> dead;  // states unable to reach the goal set with probability 1
};

// Greatest fixed point of "some applicable action keeps all mass inside the
// surviving set and can make progress toward a goal".
ProperPolicyReport proper_policy_exists(const ExplicitMdp &m);

using Heuristic = std::function<Cost(const task_model::State &)>;

struct SearchResult {
    bool solved = false;
    task_model::ActionSequence plan;
    Cost cost = 0;
    long long expanded = 0;   // states popped and expanded (goal pop excluded)
    long long generated = 0;  // distinct states created
};

/*
  A* over the task's state space. Pop order is (f, then h, then state
  discovery index); successors are generated in action declaration order.
  Preferring smaller h on f-ties reaches the goal before sibling f-optimal
  states, keeping expansion counts comparable across heuristics. States
  with infinite heuristic are pruned.
*/
SearchResult astar_search(const task_model::PlanningTask &t, const Heuristic &h);

}  // namespace solvers
