#include "doctest.h"

#include "fixtures.hpp"
#include "omlearn/generate.hpp"
#include "omlearn/io.hpp"

using namespace omlearn;

TEST_CASE("ba text format round trip") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        BuchiAutomaton b = random_buchi(seed, fixtures::ab(), 4, 2.5, 2);
        BuchiAutomaton back = parse_ba(write_ba(b));
        CHECK(back.num_states() == b.num_states());
        CHECK(back.transition_count() == b.transition_count());
        for (const auto& w : fixtures::lassos_up_to(fixtures::ab(), 3, 3))
            CHECK(ba_lasso_member(back, w) == ba_lasso_member(b, w));
    }
}

TEST_CASE("parsing a hand-written automaton") {
    BuchiAutomaton b = parse_ba("[start]\na,[start]->[loop]\nb,[loop]->[loop]\n[loop]\n");
    CHECK(b.num_states() == 2);
    CHECK(b.initials().size() == 1);
    CHECK(ba_lasso_member(b, OmegaWord("a", "b")));
    CHECK_FALSE(ba_lasso_member(b, OmegaWord("", "a")));
}

TEST_CASE("multiple initial states are folded into a fresh one on output") {
    std::vector<std::vector<NfaEdge>> edges(2);
    edges[0].push_back({'a', 0});
    edges[1].push_back({'b', 1});
    BuchiAutomaton two(fixtures::ab(), 2, {0, 1}, {true, true}, std::move(edges));
    BuchiAutomaton back = parse_ba(write_ba(two));
    for (const auto& w : fixtures::lassos_up_to(fixtures::ab(), 2, 2))
        CHECK(ba_lasso_member(back, w) == ba_lasso_member(two, w));
}

TEST_CASE("parse errors carry context") {
    CHECK_THROWS_AS(parse_ba(""), ParseError);
    CHECK_THROWS_AS(parse_ba("[0]\nab,[0]->[1]\n"), ParseError);       // multi-letter
    CHECK_THROWS_AS(parse_ba("[0]\na,[0]->[1]\n[missing]\n"), ParseError);
    CHECK_THROWS_AS(parse_ba("[0]\na,0->[1]\n"), ParseError);          // unbracketed
    CHECK_THROWS_AS(parse_ba("[0]\n$,[0]->[1]\n"), ParseError);        // reserved letter
    CHECK_THROWS_AS(parse_ba("[0]\n"), ParseError);                    // no alphabet
    CHECK(parse_ba("[0]\n", Alphabet{"ab"}).num_states() == 1);        // explicit alphabet
}

TEST_CASE("dfa load enforces determinism and totality") {
    Dfa d = parse_dfa_ba("[0]\na,[0]->[1]\n[1]\n", Alphabet{"ab"});
    CHECK(d.num_states() == 3);  // sink completion
    CHECK(d.accepts("a"));
    CHECK_FALSE(d.accepts("b"));
    CHECK_THROWS_AS(parse_dfa_ba("[0]\na,[0]->[1]\na,[0]->[0]\n"), ParseError);
}

TEST_CASE("fdfa format round trip") {
    std::vector<Fdfa> families{fixtures::demo_fdfa(), fixtures::ab_tail_fdfa(),
                               random_fdfa(7, fixtures::ab(), 3, 3, AcceptanceKind::syntactic)};
    for (const Fdfa& f : families) {
        Fdfa back = parse_fdfa(write_fdfa(f));
        CHECK(back.kind == f.kind);
        CHECK(back.leading.num_states() == f.leading.num_states());
        for (const Word& u : fixtures::words_up_to(fixtures::ab(), 3))
            for (const Word& v : fixtures::words_up_to(fixtures::ab(), 3))
                CHECK(accepts(back, u, v) == accepts(f, u, v));
    }
}

TEST_CASE("fdfa format rejects malformed input") {
    CHECK_THROWS_AS(parse_fdfa(""), ParseError);
    CHECK_THROWS_AS(parse_fdfa("kind: sometimes\n[leading]\n[0]\na,[0]->[0]\n"), ParseError);
    CHECK_THROWS_AS(parse_fdfa("kind: periodic\n[progress 0]\n[0]\na,[0]->[0]\n"), ParseError);
    // missing progress section
    CHECK_THROWS_AS(parse_fdfa("kind: periodic\n[leading]\n[0]\na,[0]->[0]\nb,[0]->[0]\n"),
                    ParseError);
    // accepting state in the leading block
    CHECK_THROWS_AS(
        parse_fdfa("kind: periodic\n[leading]\n[0]\na,[0]->[0]\n[0]\n[progress 0]\n[0]\na,[0]->[0]\n"),
        ParseError);
}

TEST_CASE("dot export names every state and marks acceptance") {
    std::string dot = to_dot(fixtures::demo_fdfa().progress_of(0));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    std::string ba_dot = to_dot(fixtures::demo_over_ba());
    CHECK(ba_dot.find("eps") != std::string::npos);
    std::string nfa_dot = to_dot(Nfa::from_dfa(fixtures::demo_fdfa().progress_of(0)));
    CHECK(nfa_dot.find("q0") != std::string::npos);
}

TEST_CASE("random generation is reproducible and connected") {
    BuchiAutomaton a = random_buchi(42, fixtures::ab(), 5, 3.0, 2);
    BuchiAutomaton b = random_buchi(42, fixtures::ab(), 5, 3.0, 2);
    CHECK(write_ba(a) == write_ba(b));
    CHECK(a.num_states() == 5);
    // connectivity: every state reachable from the initial one
    std::vector<bool> seen(5, false);
    std::vector<State> stack{a.initials().front()};
    seen[0] = true;
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (const NfaEdge& e : a.edges_from(s))
            if (!seen[static_cast<size_t>(e.dst)]) {
                seen[static_cast<size_t>(e.dst)] = true;
                stack.push_back(e.dst);
            }
    }
    for (bool v : seen) CHECK(v);
    BuchiAutomaton c = random_buchi(43, fixtures::ab(), 5, 3.0, 2);
    CHECK(write_ba(a) != write_ba(c));
}
