#include "projection.h"

#include "statespace.h"
#include "support.h"
#include "task_model.h"

#include <doctest.h>

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

using namespace projection;
using task_model::PlanningTask;
using task_model::State;

TEST_CASE("make_pattern validates indices") {
    CHECK(make_pattern({2, 0}, 4).fact_indices == std::vector<int>({2, 0}));
    CHECK(make_pattern({}, 4).size() == 0);
    CHECK_THROWS_AS(make_pattern({0, 0}, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_pattern({4}, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_pattern({-1}, 4), std::invalid_argument);
}

TEST_CASE("parse_pattern handles names, indices and parenthesized commas") {
    PlanningTask t = support::logistics();
    Pattern by_name = parse_pattern("at(P,L), at(P,R), in(P,A), in(P,B)", t.facts);
    CHECK(by_name.fact_indices == std::vector<int>({0, 1, 2, 3}));
    Pattern by_index = parse_pattern("0, 1,2,3", t.facts);
    CHECK(by_index.fact_indices == by_name.fact_indices);
    Pattern mixed = parse_pattern("at(A,L),5", t.facts);
    CHECK(mixed.fact_indices == std::vector<int>({4, 5}));
    CHECK(parse_pattern("", t.facts).size() == 0);
    CHECK(parse_pattern("  ", t.facts).size() == 0);
    CHECK_THROWS_AS(parse_pattern("at(P,X)", t.facts), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("99", t.facts), std::invalid_argument);
}

TEST_CASE("project_state keeps pattern bits in pattern order") {
    State s = State::from_bits("10000101");
    PlanningTask t = support::logistics();
    CHECK(project_state(s, support::package_pattern(t)).to_string() == "1000");
    CHECK(project_state(s, make_pattern({5, 0}, 8)).to_string() == "11");
    CHECK(project_state(s, make_pattern({}, 8)).to_string().empty());
}

TEST_CASE("project_task keeps effectful actions only") {
    PlanningTask t = support::logistics();
    AbstractTask at = project_task(t, support::package_pattern(t));
    CHECK(at.task.facts.names() ==
          std::vector<std::string>({"at(P,L)", "at(P,R)", "in(P,A)", "in(P,B)"}));
    CHECK(at.task.init.to_string() == "1000");
    CHECK(at.task.goal == task_model::make_fact_set({1}));
    // the four move actions only touch truck facts and disappear
    CHECK(at.task.actions.size() == 8);
    for (const auto &a : at.task.actions)
        CHECK(a.name.substr(0, 4) != "Move");
    // preconditions are intersected: Load(L,P,A) keeps at(P,L) and loses at(A,L)
    const auto *load = task_model::find_action(at.task, "Load(L,P,A)");
    REQUIRE(load != nullptr);
    CHECK(load->pre == task_model::make_fact_set({0}));
    CHECK(task_model::validate(at.task).ok());
}

TEST_CASE("projection keeps empty probabilistic branches") {
    PlanningTask t = support::logistics_probabilistic();
    Pattern p = support::package_pattern(t);
    AbstractTask at = project_task(t, p);
    const auto *load = task_model::find_action(at.task, "Load(L,P,A)");
    REQUIRE(load != nullptr);
    REQUIRE(load->outcomes.size() == 2);
    CHECK(load->outcomes[1].add.empty());
    CHECK(load->outcomes[1].del.empty());
    CHECK(load->outcomes[1].prob == rationals::make(1, 5));

    // projecting onto a truck fact annihilates the package actions instead
    Pattern trucks = parse_pattern("at(A,L),at(A,R)", t.facts);
    AbstractTask truck_view = project_task(t, trucks);
    CHECK(truck_view.task.actions.size() == 2);
}

TEST_CASE("abstract graph expands in breadth-first order") {
    PlanningTask t = support::logistics();
    statespace::ExplicitMdp am = abstract_graph(project_task(t, support::package_pattern(t)));
    std::vector<std::string> names;
    for (int s = 0; s < am.num_states(); ++s)
        names.push_back(am.state_names[s]);
    CHECK(names == std::vector<std::string>({"1000", "0010", "0001", "0100"}));
    CHECK(am.goal == std::vector<bool>({false, false, false, true}));

    int rows = 0;
    for (int s = 0; s < am.num_states(); ++s)
        for (int a = 0; a < am.num_actions(); ++a)
            if (am.applicable(s, a))
                ++rows;
    CHECK(rows == 8);
}

TEST_CASE("partition_from_pattern groups states by projection") {
    PlanningTask t = support::logistics();
    statespace::ExplicitMdp m = statespace::expand(t);
    Pattern p = support::package_pattern(t);
    mdp_abstraction::Partition part = partition_from_pattern(m, p);
    CHECK(part.num_classes() == 4);
    for (int c = 0; c < part.num_classes(); ++c)
        CHECK(part.members[c].size() == 4);
    for (int s = 0; s < m.num_states(); ++s) {
        int c = part.class_of[s];
        // all members of a class share the projected bits
        CHECK(project_state(m.states[s], p) ==
              project_state(m.states[part.members[c][0]], p));
    }
}

TEST_CASE("partition_aligned reuses abstract state indices") {
    PlanningTask t = support::logistics();
    statespace::ExplicitMdp m = statespace::expand(t);
    Pattern p = support::package_pattern(t);
    statespace::ExplicitMdp am = abstract_graph(project_task(t, p));
    mdp_abstraction::Partition part = partition_aligned(m, am, p);
    CHECK(part.num_classes() == am.num_states());
    for (int s = 0; s < m.num_states(); ++s)
        CHECK(project_state(m.states[s], p).to_string() == am.state_names[part.class_of[s]]);

    // a graph with states the abstraction never reaches cannot align
    statespace::ExplicitMdp truck_view =
        abstract_graph(project_task(t, parse_pattern("at(A,L)", t.facts)));
    CHECK_THROWS_AS(partition_aligned(m, truck_view, p), std::invalid_argument);
}

TEST_CASE("projection commutes with effect application") {
    PlanningTask t = support::logistics();
    CHECK(check_linearity(t, support::package_pattern(t), 64).pass);
    PlanningTask pt = support::logistics_probabilistic();
    CHECK(check_linearity(pt, support::package_pattern(pt), 64).pass);

    std::mt19937 rng(20260819);
    for (int round = 0; round < 30; ++round) {
        support::RandomTaskOptions opt;
        opt.probabilistic = round % 2 == 1;
        PlanningTask rt = support::random_task(rng, opt);
        std::vector<int> picks;
        for (int f = 0; f < rt.facts.size(); ++f)
            if (rng() % 2 == 0)
                picks.push_back(f);
        if (picks.empty())
            picks.push_back(0);
        mdp_abstraction::Verdict v = check_linearity(rt, make_pattern(picks, rt.facts.size()), 32);
        CHECK(v.pass);
        if (!v.pass && v.witness)
            FAIL_CHECK(v.witness->detail);
    }
}

TEST_CASE("logistics classes project actions identically") {
    PlanningTask t = support::logistics();
    statespace::ExplicitMdp m = statespace::expand(t);
    Pattern p = support::package_pattern(t);
    mdp_abstraction::Partition part = partition_from_pattern(m, p);
    CHECK(check_no_ambiguity(m, part).pass);
}
