#pragma once

// Shared hand-built automata for the test suites. demo_fdfa and the two
// approximation automata below form one worked example that several suites
// exercise from different angles.

#include <string>
#include <vector>

#include "omlearn/buchi.hpp"
#include "omlearn/fdfa.hpp"
#include "omlearn/words.hpp"

namespace fixtures {

using namespace omlearn;

inline Alphabet ab() { return Alphabet{"ab"}; }

// One-state leading automaton; the progress automaton accepts every word
// whose run ends in its second state (reached by any letter from the start
// and kept by 'a', left by 'b').
inline Fdfa demo_fdfa(AcceptanceKind kind = AcceptanceKind::periodic) {
    Alphabet sigma = ab();
    Dfa leading(sigma, 1, 0, {false}, {0, 0});
    // states: 0 = start, 1 = accepting
    Dfa progress(sigma, 2, 0, {false, true}, {1, 1, 1, 0});
    return Fdfa(leading, {progress}, kind);
}

// Progress automaton whose accepted periods are a single 'a' followed by
// any number of 'b'; the family's language cannot be matched exactly by
// any Buchi automaton.
inline Fdfa ab_tail_fdfa() {
    Alphabet sigma = ab();
    Dfa leading(sigma, 1, 0, {false}, {0, 0});
    // states: 0 = start, 1 = saw the single 'a', 2 = dead
    Dfa progress(sigma, 3, 0, {false, true, false}, {1, 2, 2, 1, 2, 2});
    return Fdfa(leading, {progress}, AcceptanceKind::periodic);
}

// Hand-built over-approximation of demo_fdfa, with the epsilon edges of
// the looped-gadget construction left in place.
inline BuchiAutomaton demo_over_ba() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(false);
    State q1 = b.add_state(false);
    State q2 = b.add_state(false);
    State q2acc = b.add_state(true);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q0);
    b.add_transition(q0, 'b', q0);
    b.add_epsilon(q0, q1);
    b.add_transition(q1, 'a', q2);
    b.add_transition(q1, 'b', q2);
    b.add_transition(q2, 'a', q2);
    b.add_transition(q2, 'b', q1);
    b.add_epsilon(q2, q2acc);
    b.add_epsilon(q2acc, q1);
    return b.build();
}

// Hand-built under-approximation of demo_fdfa, likewise with epsilon edges.
inline BuchiAutomaton demo_under_ba() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(false);
    State q1 = b.add_state(false);
    State q2 = b.add_state(false);
    State q3 = b.add_state(false);
    State q4 = b.add_state(false);
    State q2acc = b.add_state(true);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q0);
    b.add_transition(q0, 'b', q0);
    b.add_epsilon(q0, q1);
    b.add_transition(q1, 'a', q2);
    b.add_transition(q1, 'b', q3);
    b.add_transition(q2, 'a', q2);
    b.add_transition(q2, 'b', q4);
    b.add_epsilon(q2, q2acc);
    b.add_transition(q3, 'a', q2);
    b.add_transition(q3, 'b', q1);
    b.add_transition(q4, 'a', q2);
    b.add_transition(q4, 'b', q2);
    b.add_epsilon(q2acc, q1);
    return b.build();
}

// Buchi automaton for: only 'a' forever or only 'b' forever.
inline BuchiAutomaton ba_single_letter_forever() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(false);
    State qa = b.add_state(true);
    State qb = b.add_state(true);
    b.add_initial(q0);
    b.add_transition(q0, 'a', qa);
    b.add_transition(q0, 'b', qb);
    b.add_transition(qa, 'a', qa);
    b.add_transition(qb, 'b', qb);
    return b.build();
}

// Buchi automaton for the single word alternating a, b, a, b, ...
inline BuchiAutomaton ba_alternating() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(true);
    State q1 = b.add_state(false);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q1);
    b.add_transition(q1, 'b', q0);
    return b.build();
}

// Buchi automaton for: eventually only 'b'.
inline BuchiAutomaton ba_eventually_only_b() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(false);
    State q1 = b.add_state(true);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q0);
    b.add_transition(q0, 'b', q0);
    b.add_transition(q0, 'b', q1);
    b.add_transition(q1, 'b', q1);
    return b.build();
}

inline BuchiAutomaton ba_universal() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(true);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q0);
    b.add_transition(q0, 'b', q0);
    return b.build();
}

inline BuchiAutomaton ba_empty_language() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(false);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q0);
    b.add_transition(q0, 'b', q0);
    return b.build();
}

// All words over the alphabet up to the given length, shortest first and
// lexicographic within a length.
inline std::vector<Word> words_up_to(const Alphabet& sigma, int max_len) {
    std::vector<Word> out{Word{}};
    size_t begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        size_t end = out.size();
        for (size_t i = begin; i < end; ++i)
            for (char c : sigma.letters()) out.push_back(out[i] + c);
        begin = end;
    }
    return out;
}

// All lassos (u, v) with the given bounds, ordered by total length.
inline std::vector<OmegaWord> lassos_up_to(const Alphabet& sigma, int max_prefix, int max_period) {
    std::vector<OmegaWord> out;
    for (const Word& u : words_up_to(sigma, max_prefix))
        for (const Word& v : words_up_to(sigma, max_period))
            if (!v.empty()) out.emplace_back(u, v);
    return out;
}

}  // namespace fixtures
