#pragma once

#include "task_model.h"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace statespace {

using rationals::Rational;

class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GraphFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TransitionEntry {
    int target;
    Rational prob;

    bool operator==(const TransitionEntry &) const = default;
};

// One (state, action) row: entries sorted by target, probabilities positive
// and summing to exactly 1. An empty row means the action is inapplicable.
using Row = std::vector<TransitionEntry>;

/*
  Explicit discounted MDP over an indexed state set. State index 0 is the
  initial state. The reward of (s, a) is the probability mass the action
  sends into the goal set, which is what makes solving the MDP answer
  questions about the underlying reachability task.

  Instances built by expand() additionally carry the task's fact table and
  per-state bit vectors, and every state is reachable from state 0; graphs
  read from files keep their file order and may contain unreachable states.
*/
struct ExplicitMdp {
    std::vector<std::string> fact_names;       // may be empty for label-free graphs
    std::vector<task_model::State> states;     // per-state bit vectors over fact_names
    std::vector<std::string> state_names;
    std::vector<bool> goal;
    std::vector<std::string> action_names;
    std::vector<long long> action_costs;
    std::vector<std::vector<Row>> transitions;  // [state][action]
    std::vector<std::vector<Rational>> rewards; // [state][action]
    Rational gamma;

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_actions() const { return static_cast<int>(action_names.size()); }
    bool applicable(int state, int action) const { return !transitions[state][action].empty(); }
};

struct ExpandOptions {
    std::size_t max_states = std::size_t(1) << 20;
    Rational gamma = rationals::make(9, 10);
};

// Breadth-first reachability closure of the task, merging outcomes that hit
// the same successor. Throws CapacityError past max_states and
// std::invalid_argument if validate(t) reports problems or gamma is outside
// [0, 1).
ExplicitMdp expand(const task_model::PlanningTask &t, const ExpandOptions &options = {});

// Graph JSON format (see README): states with id/label/goal, action list,
// one transition object per (state, action), probabilities as exact rational
// strings (plain integers also accepted), gamma as a rational string.
ExplicitMdp load_graph(std::string_view json_text);
ExplicitMdp load_graph_file(const std::string &path);
std::string save_graph(const ExplicitMdp &m);

bool is_deterministic(const ExplicitMdp &m);

// Graphviz rendering; goal states get a double outline.
std::string to_dot(const ExplicitMdp &m);

}  // namespace statespace
