#pragma once

#include "task_model.h"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pddl {

using rationals::Rational;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &msg, int line, int column);
    int line;
    int column;
};

class GroundingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PredicateDecl {
    std::string name;
    std::vector<std::string> param_types;
};

// Atom whose arguments are schema variables (domain side) or object names
// (problem side). predicate is the index into Domain::predicates, resolved
// during parsing by name, arity and argument types.
struct Atom {
    int predicate = -1;
    std::vector<std::string> args;
};

struct EffectBranch {
    Rational prob;
    std::vector<Atom> add;
    std::vector<Atom> del;
};

struct LiftedSchema {
    std::string name;
    std::vector<std::string> param_names;  // with leading '?'
    std::vector<std::string> param_types;
    std::vector<Atom> pre;
    std::vector<EffectBranch> branches;    // probabilities sum to 1

    bool classical() const { return branches.size() == 1; }
};

struct Domain {
    std::string name;
    std::vector<std::string> types;                // declaration order; "object" implicit root
    std::map<std::string, std::string> supertype;  // type -> declared parent
    std::vector<PredicateDecl> predicates;
    std::vector<LiftedSchema> schemas;

    bool has_type(std::string_view t) const;
    // Reflexive-transitive subtype test (single inheritance, root "object").
    bool type_is(std::string_view sub, std::string_view super) const;
};

struct ObjectUniverse {
    std::string problem_name;
    std::string domain_name;
    std::vector<std::pair<std::string, std::string>> objects;  // (name, type), declaration order
    std::vector<Atom> init;
    std::vector<Atom> goal;

    std::string type_of(std::string_view object) const;  // throws if unknown
};

Domain parse_domain(std::string_view text);

// Requires the matching domain; resolves init/goal atoms against its
// predicate table and checks the :domain reference.
ObjectUniverse parse_problem(std::string_view text, const Domain &domain);

struct GroundOptions {
    int max_facts = 64;
};

/*
  Typed grounding with a fixed fact order: predicates in declaration order,
  tuples in lexicographic object-name order. Ground actions likewise follow
  schema declaration order and lexicographic binding order. Bindings where
  one branch adds and deletes the same fact are dropped as ill-formed, and
  bindings whose every branch has a zero net effect are pruned.
*/
task_model::PlanningTask ground(const Domain &domain, const ObjectUniverse &universe,
                                const GroundOptions &options = {});

// "Move(R,L,A)" -> {"Move", {"R", "L", "A"}}. Inverse of ground action naming.
std::pair<std::string, std::vector<std::string>> split_ground_name(const std::string &name);

}  // namespace pddl
