#include "pddl_frontend.h"

#include "rational.h"
#include "support.h"
#include "task_model.h"

#include <doctest.h>

#include <string>
#include <vector>

using namespace pddl;
using task_model::PlanningTask;

namespace {

PlanningTask ground_text(const std::string &domain_text, const std::string &problem_text) {
    Domain d = parse_domain(domain_text);
    ObjectUniverse u = parse_problem(problem_text, d);
    return ground(d, u, {});
}

const char *kToyDomain = R"((define (domain toy)
  (:types block)
  (:predicates (clear ?b - block) (down ?b - block))
  (:action drop
    :parameters (?b - block)
    :precondition (and (clear ?b))
    :effect (and (down ?b) (not (clear ?b)))))
)";

}  // namespace

TEST_CASE("bundled logistics grounds to the fixed fact layout") {
    PlanningTask t = support::logistics();
    std::vector<std::string> facts = {"at(P,L)", "at(P,R)", "in(P,A)", "in(P,B)",
                                      "at(A,L)", "at(A,R)", "at(B,L)", "at(B,R)"};
    CHECK(t.facts.names() == facts);
    CHECK(t.init.to_string() == "10000101");
    CHECK(t.goal == task_model::make_fact_set({1}));
    CHECK(t.flavor == task_model::Flavor::classical);

    std::vector<std::string> names;
    for (const auto &a : t.actions)
        names.push_back(a.name);
    std::vector<std::string> expected = {
        "Load(L,P,A)",   "Load(L,P,B)",   "Load(R,P,A)",   "Load(R,P,B)",
        "Unload(L,P,A)", "Unload(L,P,B)", "Unload(R,P,A)", "Unload(R,P,B)",
        "Move(L,R,A)",   "Move(L,R,B)",   "Move(R,L,A)",   "Move(R,L,B)"};
    CHECK(names == expected);
    CHECK(task_model::validate(t).ok());
}

TEST_CASE("move drops the bindings that undo themselves") {
    PlanningTask t = support::logistics();
    CHECK(task_model::find_action(t, "Move(L,L,A)") == nullptr);
    CHECK(task_model::find_action(t, "Move(R,R,B)") == nullptr);
}

TEST_CASE("probabilistic effects ground to exact outcome distributions") {
    PlanningTask t = support::logistics_probabilistic();
    CHECK(t.flavor == task_model::Flavor::probabilistic);
    const auto *load = task_model::find_action(t, "Load(L,P,A)");
    REQUIRE(load != nullptr);
    REQUIRE(load->outcomes.size() == 2);
    CHECK(load->outcomes[0].prob == rationals::make(4, 5));
    CHECK(load->outcomes[1].prob == rationals::make(1, 5));
    CHECK(load->outcomes[1].add.empty());
    CHECK(load->outcomes[1].del.empty());
    const auto *unload = task_model::find_action(t, "Unload(R,P,A)");
    REQUIRE(unload != nullptr);
    CHECK(unload->classical());
}

TEST_CASE("overloaded predicates resolve by argument types") {
    Domain d = parse_domain(support::read_file(support::data_path("logistics-domain.pddl")));
    CHECK(d.predicates.size() == 3);
    PlanningTask t = support::logistics();
    const auto *load = task_model::find_action(t, "Load(L,P,A)");
    REQUIRE(load != nullptr);
    // pre: at(P,L) and at(A,L), two different at-predicates
    CHECK(load->pre == task_model::make_fact_set({0, 4}));
}

TEST_CASE("bare atom preconditions parse") {
    PlanningTask t = support::logistics();
    const auto *move = task_model::find_action(t, "Move(R,L,A)");
    REQUIRE(move != nullptr);
    CHECK(move->pre == task_model::make_fact_set({5}));
    CHECK(move->outcomes[0].add == task_model::make_fact_set({4}));
    CHECK(move->outcomes[0].del == task_model::make_fact_set({5}));
}

TEST_CASE("split_ground_name separates schema and arguments") {
    auto [name, args] = split_ground_name("Load(L,P,A)");
    CHECK(name == "Load");
    CHECK(args == std::vector<std::string>({"L", "P", "A"}));
    auto [bare, none] = split_ground_name("wait");
    CHECK(bare == "wait");
    CHECK(none.empty());
}

TEST_CASE("toy domain grounds per object") {
    PlanningTask t = ground_text(kToyDomain, R"((define (problem two)
      (:domain toy)
      (:objects b1 b2 - block)
      (:init (clear b1) (clear b2))
      (:goal (and (down b1) (down b2)))))");
    CHECK(t.facts.size() == 4);
    CHECK(t.actions.size() == 2);
    CHECK(t.facts.names() == std::vector<std::string>({"clear(b1)", "clear(b2)", "down(b1)", "down(b2)"}));
}

TEST_CASE("parse errors carry positions and reasons") {
    CHECK_THROWS_AS(parse_domain("(define (domain x)"), ParseError);
    CHECK_THROWS_AS(parse_domain("(define (domain x) (:predicates (p ?x - ghost)))"), ParseError);
    // effect probabilities must sum to exactly 1
    CHECK_THROWS_AS(parse_domain(R"((define (domain x)
      (:predicates (p))
      (:action a
        :parameters ()
        :precondition (and)
        :effect (probabilistic 1/3 (and (p))))))"),
                    ParseError);
    try {
        parse_domain("(define (domain x) (:predicates (p)) junk)");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.line >= 1);
        CHECK(std::string(e.what()).find("parse error at") != std::string::npos);
    }
}

TEST_CASE("problem validation catches referential mistakes") {
    Domain d = parse_domain(kToyDomain);
    CHECK_THROWS_AS(parse_problem(R"((define (problem p) (:domain other)
        (:init) (:goal (and))))",
                                  d),
                    ParseError);
    CHECK_THROWS_AS(parse_problem(R"((define (problem p) (:domain toy)
        (:objects b1 - ghost) (:init) (:goal (and))))",
                                  d),
                    ParseError);
    CHECK_THROWS_AS(parse_problem(R"((define (problem p) (:domain toy)
        (:objects b1 b1 - block) (:init) (:goal (and))))",
                                  d),
                    ParseError);
    CHECK_THROWS_AS(parse_problem(R"((define (problem p) (:domain toy)
        (:objects b1 - block) (:init (clear b1 b1)) (:goal (and))))",
                                  d),
                    ParseError);
}

TEST_CASE("ambiguous ground atoms are rejected") {
    const char *overloaded = R"((define (domain amb)
      (:types small big)
      (:predicates (mark ?x - small) (mark ?x - big))
      (:action touch
        :parameters (?x - small)
        :precondition (and (mark ?x))
        :effect (and (not (mark ?x)))))
)";
    Domain d = parse_domain(overloaded);
    // object of type small matches only the small predicate; fine
    PlanningTask t = ground_text(overloaded, R"((define (problem p) (:domain amb)
        (:objects s - small) (:init (mark s)) (:goal (and))))");
    CHECK(t.facts.size() == 1);

    // a ?x - child argument matches both declarations
    CHECK_THROWS_AS(parse_domain(R"((define (domain amb2)
      (:types base - object child - base)
      (:predicates (mark ?x - base) (mark ?x - child))
      (:action touch
        :parameters (?x - child)
        :precondition (and)
        :effect (and (mark ?x)))))"),
                    ParseError);

    const char *overlap = R"((define (domain amb3)
      (:types base - object child - base)
      (:predicates (mark ?x - base) (mark ?x - child))
      (:action touch
        :parameters (?x - base)
        :precondition (and)
        :effect (and (mark ?x))))
)";
    // both declarations generate mark(c) for a child object
    CHECK_THROWS_AS(ground_text(overlap, R"((define (problem p) (:domain amb3)
        (:objects c - child) (:init) (:goal (and))))"),
                    GroundingError);
}

TEST_CASE("supertype cycles are rejected at parse time") {
    // the typed-list rule gives base the parent base here
    CHECK_THROWS_WITH_AS(parse_domain(R"((define (domain selfcycle)
      (:types base child - base)
      (:predicates (mark ?x - base))
      (:action touch
        :parameters (?x - base)
        :precondition (and)
        :effect (and (mark ?x)))))"),
                         doctest::Contains("supertype cycle"), ParseError);
    CHECK_THROWS_AS(parse_domain(R"((define (domain loop)
      (:types a - b b - a)
      (:predicates (mark ?x - a))
      (:action touch
        :parameters (?x - a)
        :precondition (and)
        :effect (and (mark ?x)))))"),
                    ParseError);
}

TEST_CASE("grounding prunes actions whose branches are all empty") {
    const char *noop = R"((define (domain idle)
      (:predicates (p ?x - object))
      (:action nothing
        :parameters (?x - object)
        :precondition (and (p ?x))
        :effect (and)))
)";
    PlanningTask t = ground_text(noop, R"((define (problem p) (:domain idle)
        (:objects o) (:init (p o)) (:goal (and))))");
    CHECK(t.actions.empty());
}

TEST_CASE("fact cap raises a grounding error") {
    Domain d = parse_domain(kToyDomain);
    ObjectUniverse u = parse_problem(R"((define (problem two) (:domain toy)
        (:objects b1 b2 - block) (:init) (:goal (and))))",
                                     d);
    GroundOptions opt;
    opt.max_facts = 3;
    CHECK_THROWS_AS(ground(d, u, opt), GroundingError);
}
