#pragma once

#include "rational.h"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace task_model {

using rationals::Rational;

// Thrown when an operation is invoked outside its contract, e.g. applying
// an action in a state that does not satisfy its precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/*
  Ordered proposition table. The position of a name in the table is the bit
  position in every state vector of the task, so the table fixes the printed
  layout of states once and for all.
*/
class FactTable {
public:
    FactTable() = default;
    explicit FactTable(std::vector<std::string> names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string &name(int i) const { return names_.at(i); }
    const std::vector<std::string> &names() const { return names_; }
    std::optional<int> index_of(std::string_view name) const;

private:
    std::vector<std::string> names_;
    std::map<std::string, int, std::less<>> index_;
};

// Fixed-width binary state vector, one component per fact.
class State {
public:
    State() = default;
    explicit State(int num_facts) : bits_(num_facts, 0) {}

    // Builds from a string of '0'/'1' characters, e.g. "10000101".
    static State from_bits(std::string_view bits);

    int size() const { return static_cast<int>(bits_.size()); }
    bool test(int i) const { return bits_.at(i) != 0; }
    void set(int i, bool value) { bits_.at(i) = value ? 1 : 0; }

    std::string to_string() const;

    bool operator==(const State &) const = default;
    auto operator<=>(const State &) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

struct StateHash {
    std::size_t operator()(const State &s) const;
};

// Signed fact vector: per-fact values used for effect deltas (-1, 0, +1)
// and for unclamped sums of a state and a delta (-1..2).
using SignedVec = std::vector<int>;

// Sorted, duplicate-free fact index set.
using FactSet = std::vector<int>;

FactSet make_fact_set(std::vector<int> indices);
bool fact_set_contains(const FactSet &set, int fact);

struct EffectOutcome {
    FactSet add;
    FactSet del;
    Rational prob;
};

struct GroundAction {
    std::string name;
    FactSet pre;
    std::vector<EffectOutcome> outcomes;
    long long cost = 1;

    bool classical() const { return outcomes.size() == 1; }
};

enum class Flavor { classical, probabilistic };

struct PlanningTask {
    FactTable facts;
    std::vector<GroundAction> actions;
    State init;
    FactSet goal;
    Flavor flavor = Flavor::classical;
};

struct ActionSequence {
    std::vector<std::string> steps;
};

bool applicable(const State &s, const GroundAction &a);

// Delete-then-add semantics: bits in o.del are cleared, then bits in o.add
// are set. Requires applicable(s, a).
State apply(const State &s, const GroundAction &a, const EffectOutcome &o);

// +1 per added fact, -1 per deleted fact, 0 elsewhere.
SignedVec effect_delta(const EffectOutcome &o, int num_facts);

// Componentwise s + delta, unclamped (components range over -1..2).
SignedVec state_plus_delta(const State &s, const SignedVec &delta);

// Componentwise clip to {0,1}. apply() coincides with clamp(s + delta) for
// outcomes whose add and delete sets are disjoint, which validate() enforces.
State clamp(const SignedVec &v);

bool is_goal(const State &s, const PlanningTask &t);

const GroundAction *find_action(const PlanningTask &t, std::string_view name);

struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

// Structural well-formedness: index ranges, outcome probability sums,
// add/delete overlaps, positive costs, flavor consistency.
ValidationReport validate(const PlanningTask &t);

}  // namespace task_model
