#pragma once

#include <utility>
#include <vector>

#include "omlearn/automata.hpp"
#include "omlearn/words.hpp"

namespace omlearn {

namespace detail {

// Deterministic chain automaton for x y* $ y+ with y nonempty. States are
// laid out as the x-chain, the y-loop, and the post-separator y-cycle; the
// last state of a complete y after the separator is the only accepting one.
inline void append_block(const Word& x, const Word& y, std::vector<std::vector<NfaEdge>>& edges,
                         std::vector<bool>& accepting, std::vector<State>& initials) {
    int m = static_cast<int>(x.size());
    int n = static_cast<int>(y.size());
    int base = static_cast<int>(edges.size());
    int count = m + 2 * n + 1;
    edges.resize(static_cast<size_t>(base + count));
    accepting.resize(static_cast<size_t>(base + count), false);
    auto at = [&](int k) { return base + k; };
    for (int k = 1; k <= m; ++k)
        edges[static_cast<size_t>(at(k - 1))].push_back({letter_at(x, k), at(k)});
    for (int k = 1; k <= n - 1; ++k)
        edges[static_cast<size_t>(at(m + k - 1))].push_back({letter_at(y, k), at(m + k)});
    edges[static_cast<size_t>(at(m + n - 1))].push_back({letter_at(y, n), at(m)});
    edges[static_cast<size_t>(at(m))].push_back({kSeparator, at(m + n)});
    for (int k = 1; k <= n; ++k)
        edges[static_cast<size_t>(at(m + n + k - 1))].push_back({letter_at(y, k), at(m + n + k)});
    edges[static_cast<size_t>(at(m + 2 * n))].push_back({letter_at(y, 1), at(m + n + 1)});
    accepting[static_cast<size_t>(at(m + 2 * n))] = true;
    initials.push_back(at(0));
}

}  // namespace detail

// The automaton over alphabet + '$' accepting every decomposition u'$v'
// with u' v'^omega equal to the given word: one x y* $ y+ block per
// rotation of the smallest period, starting from the shortest form.
inline Nfa all_decompositions_nfa(const Alphabet& alphabet, const OmegaWord& w) {
    auto [x, y] = shortest_form(w);
    int rotations = static_cast<int>(y.size());
    std::vector<std::vector<NfaEdge>> edges;
    std::vector<bool> accepting;
    std::vector<State> initials;
    for (int k = 0; k < rotations; ++k) {
        detail::append_block(x, y, edges, accepting, initials);
        std::tie(x, y) = rotate_form(x, y);
    }
    int count = static_cast<int>(edges.size());
    return Nfa(alphabet, count, std::move(initials), std::move(accepting), std::move(edges));
}

}  // namespace omlearn
