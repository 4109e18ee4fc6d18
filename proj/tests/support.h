#pragma once

#include "mdp_abstraction.h"
#include "projection.h"
#include "solvers.h"
#include "statespace.h"
#include "task_model.h"

#include <random>
#include <string>
#include <utility>
#include <vector>

/*
  Shared fixtures, random model generators, and reference oracles. The
  oracles recompute results by brute force or by independent algorithms so
  the tests never compare the library against itself.
*/
namespace support {

std::string data_path(const std::string &name);
std::string read_file(const std::string &path);

// Bundled logistics task: one package P, trucks A and B, locations L and R.
task_model::PlanningTask logistics();
task_model::PlanningTask logistics_probabilistic();

// The four package facts at(P,L), at(P,R), in(P,A), in(P,B).
projection::Pattern package_pattern(const task_model::PlanningTask &t);

/*
  Compact state naming for the logistics task: three letters giving the
  package position (L, R, A or B) and the locations of trucks A and B.
  "LRR" is the initial state, "RRR" a goal state.
*/
task_model::State sas_state(const task_model::PlanningTask &t, const std::string &label);
int state_index(const statespace::ExplicitMdp &m, const task_model::State &s);

struct RandomTaskOptions {
    int num_facts = 6;
    int num_actions = 8;
    int max_pre = 2;
    int max_effect_facts = 2;
    bool probabilistic = false;
    int max_outcomes = 3;
};

// Valid per task_model::validate; probabilistic tasks get exact rational
// outcome probabilities that sum to 1.
task_model::PlanningTask random_task(std::mt19937 &rng, const RandomTaskOptions &opt = {});

struct RandomGraphOptions {
    int num_classes = 3;
    int max_class_size = 4;
    int num_actions = 3;
    bool deterministic = true;
    int max_targets = 3;       // per probabilistic row
    double row_density = 0.5;
    double goal_density = 0.2;
};

// Explicit MDP with a partition into contiguous classes. States carry no
// facts; rewards are the row's mass into the goal set.
std::pair<statespace::ExplicitMdp, mdp_abstraction::Partition>
random_partitioned_graph(std::mt19937 &rng, const RandomGraphOptions &opt = {});

/*
  Brute-force weighting feasibility: tries every per-class distribution
  whose weights share a denominator of at most the class size, and accepts
  when one normalizes on every C-set of the class. Any feasible class has a
  uniform solution over the C-set intersection, so this denominator bound
  is exhaustive.
*/
bool wfa_feasible_oracle(const statespace::ExplicitMdp &m, const mdp_abstraction::Partition &p);

// Reference value iteration: plain dense sweeps to a tiny tolerance,
// written against the model directly.
std::vector<double> vi_oracle(const statespace::ExplicitMdp &m, bool absorb_goals,
                              int iterations = 200000, double tol = 1e-13);

/*
  Reference goal distances for a classical task: per-state forward uniform
  cost search over task_model::apply, never touching the statespace or
  solvers modules. Unreachable states get solvers::kInfiniteCost.
*/
std::vector<solvers::Cost> distance_oracle(const task_model::PlanningTask &t,
                                           const std::vector<task_model::State> &states);

/*
  Random member of an interval abstraction: every row gets exact rational
  transition probabilities inside its bounds summing to 1 and a reward
  inside its reward interval. Requires a representable abstraction.
*/
statespace::ExplicitMdp random_selection(std::mt19937 &rng, const mdp_abstraction::AbstractMdp &am);

}  // namespace support
