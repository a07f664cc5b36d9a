#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "omlearn/buchi.hpp"
#include "omlearn/fdfa.hpp"

namespace omlearn {

// Seeded random Buchi automaton: every state is reachable (a random
// spanning arborescence from the initial state), further edges are added
// until the requested density of outgoing edges per state is met, and the
// requested number of states is marked accepting. Identical seeds yield
// identical automata.
inline BuchiAutomaton random_buchi(std::uint64_t seed, const Alphabet& sigma, int num_states,
                                   double density, int accepting_count) {
    if (num_states <= 0) throw std::invalid_argument("need at least one state");
    std::mt19937_64 rng(seed);
    auto pick = [&](int bound) { return static_cast<int>(rng() % static_cast<std::uint64_t>(bound)); };
    BuchiBuilder builder(sigma);
    for (int i = 0; i < num_states; ++i) builder.add_state(false);
    builder.add_initial(0);
    for (State s = 1; s < num_states; ++s)
        builder.add_transition(pick(s), sigma.letter(pick(sigma.size())), s);
    long extra = static_cast<long>(density * num_states) - (num_states - 1);
    for (long i = 0; i < extra; ++i)
        builder.add_transition(pick(num_states), sigma.letter(pick(sigma.size())), pick(num_states));
    std::vector<State> order(static_cast<size_t>(num_states));
    for (State s = 0; s < num_states; ++s) order[static_cast<size_t>(s)] = s;
    for (int i = num_states - 1; i > 0; --i) std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(pick(i + 1))]);
    for (int i = 0; i < accepting_count && i < num_states; ++i)
        builder.set_accepting(order[static_cast<size_t>(i)]);
    return builder.build();
}

namespace detail {

inline Dfa random_total_dfa(std::mt19937_64& rng, const Alphabet& sigma, int max_states,
                            bool with_accepting) {
    auto pick = [&](int bound) { return static_cast<int>(rng() % static_cast<std::uint64_t>(bound)); };
    int n = 1 + pick(max_states);
    std::vector<State> delta;
    delta.reserve(static_cast<size_t>(n) * sigma.size());
    for (int s = 0; s < n; ++s)
        for (int li = 0; li < sigma.size(); ++li) delta.push_back(pick(n));
    std::vector<bool> accepting(static_cast<size_t>(n), false);
    if (with_accepting)
        for (int s = 0; s < n; ++s) accepting[static_cast<size_t>(s)] = (rng() & 1) != 0;
    return Dfa(sigma, n, 0, std::move(accepting), std::move(delta));
}

}  // namespace detail

// Seeded random family of DFAs: a random total leading automaton and one
// random total progress automaton per leading state, with every progress
// state accepting with probability one half (possibly none).
inline Fdfa random_fdfa(std::uint64_t seed, const Alphabet& sigma, int max_leading,
                        int max_progress, AcceptanceKind kind = AcceptanceKind::periodic) {
    std::mt19937_64 rng(seed);
    Dfa leading = detail::random_total_dfa(rng, sigma, max_leading, false);
    std::vector<Dfa> progress;
    for (State u = 0; u < leading.num_states(); ++u)
        progress.push_back(detail::random_total_dfa(rng, sigma, max_progress, true));
    return Fdfa(std::move(leading), std::move(progress), kind);
}

}  // namespace omlearn
