#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "omlearn/buchi.hpp"
#include "omlearn/fdfa.hpp"

namespace omlearn {

enum class Approximation { under, over };

inline const char* to_string(Approximation a) {
    return a == Approximation::under ? "under" : "over";
}

namespace detail {

// Unstripped period product for the pair (u, v): the loop language of the
// leading automaton at u intersected with the progress automaton re-anchored
// to reach v, and, for the under-approximation, additionally to loop at v.
inline Dfa raw_period_product(const Fdfa& f, State u, State v, Approximation kind) {
    const Dfa& m = f.leading;
    const Dfa& a = f.progress_of(u);
    if (u < 0 || u >= m.num_states()) throw std::invalid_argument("leading state out of range");
    if (v < 0 || v >= a.num_states()) throw std::invalid_argument("progress state out of range");
    Dfa loop = reanchor(m, u, u);
    Dfa reach_v = reanchor(a, a.initial(), v);
    Dfa product = dfa_product(loop, reach_v);
    if (kind == Approximation::under) product = dfa_product(product, reanchor(a, v, v));
    return product;
}

}  // namespace detail

// The period DFA for an accepting pair (u, v), with the empty word removed
// from its language: decompositions require nonempty periods, so an
// accepting initial state is unrolled into a fresh non-accepting copy.
inline Dfa build_period_product(const Fdfa& f, State u, State v, Approximation kind) {
    if (!f.progress_of(u).is_accepting(v))
        throw std::invalid_argument("period product requires an accepting progress state");
    Dfa product = detail::raw_period_product(f, u, v, kind);
    if (!product.is_accepting(product.initial())) return product;
    int n = product.num_states();
    std::vector<bool> accepting(static_cast<size_t>(n + 1));
    for (State q = 0; q < n; ++q) accepting[static_cast<size_t>(q)] = product.is_accepting(q);
    accepting[static_cast<size_t>(n)] = false;  // fresh initial
    std::vector<State> delta;
    delta.reserve(static_cast<size_t>(n + 1) * product.alphabet().size());
    for (State q = 0; q < n; ++q)
        for (char c : product.alphabet().letters()) delta.push_back(product.step(q, c));
    for (char c : product.alphabet().letters()) delta.push_back(product.step(product.initial(), c));
    return Dfa(product.alphabet(), n + 1, n, std::move(accepting), std::move(delta));
}

// Buchi automaton under- or over-approximating the decomposition language
// of the family. The leading automaton is copied as the prefix part; for
// every accepting pair (u, v) a looped period gadget over the minimized
// period product is attached by an epsilon edge, and epsilon edges are then
// eliminated, so the result is always epsilon-free.
//
// The gadget for a product P uses one fresh state f that is both the loop
// anchor and the only accepting state: f carries copies of the outgoing
// edges of P's initial state, and P's accepting state closes the loop with
// an epsilon edge back to f. Every pass through the loop therefore reads a
// nonempty word of L(P), which realizes the omega-power of L(P) minus the
// empty word without extra states.
inline BuchiAutomaton fdfa_to_buchi(const Fdfa& f, Approximation kind) {
    const Dfa& m = f.leading;
    BuchiBuilder builder(m.alphabet());
    for (State q = 0; q < m.num_states(); ++q) builder.add_state(false);
    builder.add_initial(m.initial());
    for (State q = 0; q < m.num_states(); ++q)
        for (char c : m.alphabet().letters()) builder.add_transition(q, c, m.step(q, c));
    for (State u = 0; u < m.num_states(); ++u) {
        const Dfa& progress = f.progress_of(u);
        for (State v = 0; v < progress.num_states(); ++v) {
            if (!progress.is_accepting(v)) continue;
            Dfa part = dfa_minimize(detail::raw_period_product(f, u, v, kind));
            std::vector<State> local(static_cast<size_t>(part.num_states()));
            for (State q = 0; q < part.num_states(); ++q) local[static_cast<size_t>(q)] = builder.add_state(false);
            State anchor = builder.add_state(true);
            for (State q = 0; q < part.num_states(); ++q)
                for (char c : part.alphabet().letters())
                    builder.add_transition(local[static_cast<size_t>(q)], c,
                                           local[static_cast<size_t>(part.step(q, c))]);
            for (char c : part.alphabet().letters())
                builder.add_transition(anchor, c, local[static_cast<size_t>(part.step(part.initial(), c))]);
            for (State q = 0; q < part.num_states(); ++q)
                if (part.is_accepting(q)) builder.add_epsilon(local[static_cast<size_t>(q)], anchor);
            builder.add_epsilon(u, anchor);
        }
    }
    return epsilon_removal(builder.build());
}

// Exact construction-size report for the translation, before epsilon
// elimination: the leading copy plus one gadget (product + one fresh state)
// per accepting pair. Both the raw reachable product sizes and the sizes
// after DFA minimization are reported.
struct TranslationSizes {
    struct PairEntry {
        State leading_state;
        State progress_state;
        int raw_product_states;
        int minimized_product_states;
    };
    int leading_states = 0;
    std::vector<PairEntry> pairs;

    int total_raw() const {
        int total = leading_states;
        for (const auto& p : pairs) total += p.raw_product_states + 1;
        return total;
    }
    int total_minimized() const {
        int total = leading_states;
        for (const auto& p : pairs) total += p.minimized_product_states + 1;
        return total;
    }
};

inline TranslationSizes translation_sizes(const Fdfa& f, Approximation kind) {
    TranslationSizes sizes;
    sizes.leading_states = f.leading.num_states();
    for (State u = 0; u < f.leading.num_states(); ++u) {
        const Dfa& progress = f.progress_of(u);
        for (State v = 0; v < progress.num_states(); ++v) {
            if (!progress.is_accepting(v)) continue;
            Dfa raw = detail::raw_period_product(f, u, v, kind);
            Dfa reduced = dfa_minimize(raw);
            sizes.pairs.push_back({u, v, raw.num_states(), reduced.num_states()});
        }
    }
    return sizes;
}

}  // namespace omlearn
