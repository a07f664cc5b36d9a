#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "omlearn/automata.hpp"
#include "omlearn/decompositions.hpp"
#include "omlearn/words.hpp"

namespace omlearn {

enum class AcceptanceKind { periodic, syntactic, recurrent };

inline const char* to_string(AcceptanceKind k) {
    switch (k) {
        case AcceptanceKind::periodic: return "periodic";
        case AcceptanceKind::syntactic: return "syntactic";
        case AcceptanceKind::recurrent: return "recurrent";
    }
    return "?";
}

// A family of DFAs: a leading automaton M without accepting states and one
// total progress DFA per leading state. The acceptance check below is the
// same for all three canonical kinds; the kind tag records which congruence
// a learner was targeting.
struct Fdfa {
    Dfa leading;
    std::vector<Dfa> progress;  // indexed by leading state
    AcceptanceKind kind = AcceptanceKind::periodic;

    Fdfa(Dfa m, std::vector<Dfa> prog, AcceptanceKind k)
        : leading(std::move(m)), progress(std::move(prog)), kind(k) {
        if (leading.accepting_count() != 0)
            throw std::invalid_argument("leading automaton must have no accepting states");
        if (static_cast<int>(progress.size()) != leading.num_states())
            throw std::invalid_argument("fdfa needs exactly one progress automaton per leading state");
        for (const Dfa& a : progress)
            if (!(a.alphabet() == leading.alphabet()))
                throw std::invalid_argument("fdfa components must share one alphabet");
    }

    const Alphabet& alphabet() const { return leading.alphabet(); }

    const Dfa& progress_of(State leading_state) const {
        return progress.at(static_cast<size_t>(leading_state));
    }

    int progress_state_total() const {
        int total = 0;
        for (const Dfa& a : progress) total += a.num_states();
        return total;
    }
};

// A decomposition (u, v) is accepted iff the leading automaton loops on v
// at M(u) and the progress automaton anchored there accepts v. Callers
// normally pass a nonempty v; v = epsilon is answered by the raw condition
// (the learners use that internally).
inline bool accepts(const Fdfa& f, const Word& u, const Word& v) {
    State mu = f.leading.run(u);
    if (f.leading.run_from(mu, v) != mu) return false;
    return f.progress_of(mu).accepts(v);
}

namespace detail {

// Shared body of the two decomposition automata: a copy of M reading the
// prefix, a separator edge from each leading state u into the product of
// M re-anchored to loop at u with the (possibly complemented) progress
// automaton of u.
inline Nfa decomposition_automaton(const Fdfa& f, bool accepted_side) {
    const Dfa& m = f.leading;
    int total = m.num_states();
    std::vector<std::vector<NfaEdge>> edges(static_cast<size_t>(total));
    std::vector<bool> accepting(static_cast<size_t>(total), false);
    for (State q = 0; q < m.num_states(); ++q)
        for (char c : m.alphabet().letters())
            edges[static_cast<size_t>(q)].push_back({c, m.step(q, c)});
    for (State u = 0; u < m.num_states(); ++u) {
        Dfa loop = reanchor(m, u, u);
        Dfa side = accepted_side ? f.progress_of(u) : dfa_complement(f.progress_of(u));
        Dfa part = dfa_product(loop, side);
        int base = total;
        total += part.num_states();
        edges.resize(static_cast<size_t>(total));
        accepting.resize(static_cast<size_t>(total), false);
        for (State q = 0; q < part.num_states(); ++q) {
            accepting[static_cast<size_t>(base + q)] = part.is_accepting(q);
            for (char c : part.alphabet().letters())
                edges[static_cast<size_t>(base + q)].push_back({c, base + part.step(q, c)});
        }
        edges[static_cast<size_t>(u)].push_back({kSeparator, base + part.initial()});
    }
    return Nfa(m.alphabet(), total, {m.initial()}, std::move(accepting), std::move(edges));
}

}  // namespace detail

// Accepts exactly the words u$v such that (u, v) is accepted by the family.
inline Nfa accepted_decompositions_nfa(const Fdfa& f) {
    return detail::decomposition_automaton(f, true);
}

// Accepts exactly the words u$v such that the leading automaton loops on v
// at M(u) but (u, v) is not accepted.
inline Nfa rejected_decompositions_nfa(const Fdfa& f) {
    return detail::decomposition_automaton(f, false);
}

// True iff some decomposition of w is accepted by the family: emptiness of
// the product of the all-decompositions automaton with the accepted side.
inline bool up_member(const Fdfa& f, const OmegaWord& w) {
    Nfa decs = all_decompositions_nfa(f.alphabet(), w);
    return nfa_nonempty(product_intersection(decs, accepted_decompositions_nfa(f)));
}

}  // namespace omlearn
