#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "omlearn/buchi.hpp"

namespace omlearn {

// Removes states that cannot contribute to any accepting run: keeps only
// states that are reachable from an initial state and can still reach an
// accepting state lying on a cycle. Language-preserving.
inline BuchiAutomaton ba_trim(const BuchiAutomaton& b) {
    int n = b.num_states();
    std::vector<bool> reach(static_cast<size_t>(n), false);
    std::deque<State> queue;
    for (State s : b.initials())
        if (!reach[static_cast<size_t>(s)]) {
            reach[static_cast<size_t>(s)] = true;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        for (const NfaEdge& e : b.edges_from(s))
            if (!reach[static_cast<size_t>(e.dst)]) {
                reach[static_cast<size_t>(e.dst)] = true;
                queue.push_back(e.dst);
            }
    }
    // Accepting states sitting on a cycle within the reachable part.
    std::vector<bool> live(static_cast<size_t>(n), false);
    std::vector<std::vector<State>> preds(static_cast<size_t>(n));
    for (State s = 0; s < n; ++s) {
        if (!reach[static_cast<size_t>(s)]) continue;
        for (const NfaEdge& e : b.edges_from(s))
            if (reach[static_cast<size_t>(e.dst)]) preds[static_cast<size_t>(e.dst)].push_back(s);
    }
    for (State f = 0; f < n; ++f) {
        if (!reach[static_cast<size_t>(f)] || !b.is_accepting(f)) continue;
        std::vector<bool> seen(static_cast<size_t>(n), false);
        std::deque<State> fwd;
        for (const NfaEdge& e : b.edges_from(f))
            if (reach[static_cast<size_t>(e.dst)] && !seen[static_cast<size_t>(e.dst)]) {
                seen[static_cast<size_t>(e.dst)] = true;
                fwd.push_back(e.dst);
            }
        bool on_cycle = false;
        while (!fwd.empty() && !on_cycle) {
            State s = fwd.front();
            fwd.pop_front();
            if (s == f) on_cycle = true;
            for (const NfaEdge& e : b.edges_from(s))
                if (reach[static_cast<size_t>(e.dst)] && !seen[static_cast<size_t>(e.dst)]) {
                    seen[static_cast<size_t>(e.dst)] = true;
                    fwd.push_back(e.dst);
                }
        }
        if (on_cycle) live[static_cast<size_t>(f)] = true;
    }
    // Backward closure: anything that reaches a live accepting state.
    std::vector<bool> keep(static_cast<size_t>(n), false);
    for (State f = 0; f < n; ++f)
        if (live[static_cast<size_t>(f)]) {
            keep[static_cast<size_t>(f)] = true;
            queue.push_back(f);
        }
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        for (State p : preds[static_cast<size_t>(s)])
            if (!keep[static_cast<size_t>(p)]) {
                keep[static_cast<size_t>(p)] = true;
                queue.push_back(p);
            }
    }
    std::vector<State> id(static_cast<size_t>(n), -1);
    int count = 0;
    for (State s = 0; s < n; ++s)
        if (reach[static_cast<size_t>(s)] && keep[static_cast<size_t>(s)]) id[static_cast<size_t>(s)] = count++;
    std::vector<State> initials;
    for (State s : b.initials())
        if (id[static_cast<size_t>(s)] != -1) initials.push_back(id[static_cast<size_t>(s)]);
    std::vector<bool> accepting(static_cast<size_t>(count), false);
    std::vector<std::vector<NfaEdge>> edges(static_cast<size_t>(count));
    for (State s = 0; s < n; ++s) {
        if (id[static_cast<size_t>(s)] == -1) continue;
        accepting[static_cast<size_t>(id[static_cast<size_t>(s)])] = b.is_accepting(s);
        for (const NfaEdge& e : b.edges_from(s))
            if (id[static_cast<size_t>(e.dst)] != -1)
                edges[static_cast<size_t>(id[static_cast<size_t>(s)])].push_back(
                    {e.label, id[static_cast<size_t>(e.dst)]});
    }
    return BuchiAutomaton(b.alphabet(), count, std::move(initials), std::move(accepting),
                          std::move(edges));
}

namespace detail {

// State of the complement automaton. Before the guess the construction
// tracks the plain reachable set; after it, a level ranking together with
// the breakpoint set of even-ranked states that still owe a decrease.
struct RankState {
    bool ranked = false;
    std::vector<int> f;     // phase 1: 0/1 membership; phase 2: rank or -1
    std::vector<char> owe;  // phase 2 only

    bool operator<(const RankState& o) const {
        if (ranked != o.ranked) return ranked < o.ranked;
        if (f != o.f) return f < o.f;
        return owe < o.owe;
    }
};

// Enumerates rankings of `dom` that are tight with maximal rank exactly
// `max_rank`: accepting states take even ranks, every rank respects its
// cap, and every odd rank 1, 3, ..., max_rank occurs.
template <typename Fn>
inline void enumerate_tight_rankings(const std::vector<State>& dom, const std::vector<int>& caps,
                                     const std::vector<char>& is_acc, int max_rank, Fn&& emit) {
    int odd_count = (max_rank + 1) / 2;
    std::vector<int> ranks(dom.size(), 0);
    // odd_missing bitmask over odd ranks (bit i = rank 2i+1 still unseen)
    auto rec = [&](auto&& self, size_t i, unsigned odd_missing) -> void {
        int remaining = static_cast<int>(dom.size() - i);
        if (std::popcount(odd_missing) > remaining) return;
        if (i == dom.size()) {
            emit(ranks);
            return;
        }
        int cap = std::min(caps[i], max_rank);
        for (int r = 0; r <= cap; ++r) {
            if (is_acc[i] && r % 2 == 1) continue;
            unsigned next = odd_missing;
            if (r % 2 == 1) next &= ~(1u << (r / 2));
            ranks[i] = r;
            self(self, i + 1, next);
        }
    };
    unsigned all_odds = odd_count >= 32 ? ~0u : (1u << odd_count) - 1;
    rec(rec, 0, all_odds);
}

}  // namespace detail

// Complement of an epsilon-free Buchi automaton via the rank-based
// construction restricted to tight level rankings. A plain subset phase
// runs until the automaton guesses, on some transition, a tight ranking of
// the successor set; from then on rankings may only decrease pointwise,
// keep their maximal rank, and stay tight, while the breakpoint set tracks
// even-ranked obligations. Accepting: the empty subset and every ranked
// state with an empty breakpoint set.
inline BuchiAutomaton ba_complement(const BuchiAutomaton& input, int state_cap = 60000) {
    if (!input.epsilon_free())
        throw std::invalid_argument("complementation requires an epsilon-free automaton");
    const BuchiAutomaton b = ba_reduce(ba_trim(input));
    const int n = b.num_states();
    const std::string letters = b.alphabet().letters();

    using detail::RankState;
    std::map<RankState, State> ids;
    std::vector<RankState> order;
    std::deque<State> queue;
    auto intern = [&](RankState k) {
        auto [it, fresh] = ids.emplace(std::move(k), static_cast<State>(order.size()));
        if (fresh) {
            order.push_back(it->first);
            queue.push_back(it->second);
            if (static_cast<int>(order.size()) > state_cap)
                throw std::runtime_error("complement construction exceeded the state cap");
        }
        return it->second;
    };

    RankState start;
    start.ranked = false;
    start.f.assign(static_cast<size_t>(n), 0);
    for (State s : b.initials()) start.f[static_cast<size_t>(s)] = 1;
    std::vector<State> initials{intern(start)};

    std::vector<std::vector<NfaEdge>> edges;
    while (!queue.empty()) {
        State id = queue.front();
        queue.pop_front();
        RankState cur = order[static_cast<size_t>(id)];
        std::vector<NfaEdge> out;
        for (char c : letters) {
            // Successor set and, for ranked states, the pointwise caps.
            std::vector<int> cap(static_cast<size_t>(n), -1);
            for (State s = 0; s < n; ++s) {
                if (cur.f[static_cast<size_t>(s)] < 0 || (!cur.ranked && cur.f[static_cast<size_t>(s)] == 0))
                    continue;
                int value = cur.ranked ? cur.f[static_cast<size_t>(s)] : 2 * n;
                for (const NfaEdge& e : b.edges_from(s)) {
                    if (e.is_epsilon() || e.letter() != c) continue;
                    int& slot = cap[static_cast<size_t>(e.dst)];
                    slot = slot < 0 ? value : std::min(slot, value);
                }
            }
            std::vector<State> dom;
            for (State s = 0; s < n; ++s)
                if (cap[static_cast<size_t>(s)] >= 0) dom.push_back(s);

            if (!cur.ranked) {
                // Stay in the subset phase.
                RankState succ;
                succ.ranked = false;
                succ.f.assign(static_cast<size_t>(n), 0);
                for (State s : dom) succ.f[static_cast<size_t>(s)] = 1;
                out.push_back({c, intern(succ)});
                // Guess a tight ranking of the successor set. Odd ranks can
                // only sit on non-accepting states, which bounds the
                // maximal rank of a tight ranking.
                int non_acc = 0;
                for (State s : dom)
                    if (!b.is_accepting(s)) ++non_acc;
                std::vector<int> caps(dom.size(), 2 * n);
                std::vector<char> is_acc(dom.size());
                for (size_t i = 0; i < dom.size(); ++i) is_acc[i] = b.is_accepting(dom[i]);
                for (int r = 1; r <= 2 * non_acc - 1; r += 2) {
                    detail::enumerate_tight_rankings(dom, caps, is_acc, r, [&](const std::vector<int>& ranks) {
                        RankState succ2;
                        succ2.ranked = true;
                        succ2.f.assign(static_cast<size_t>(n), -1);
                        for (size_t i = 0; i < dom.size(); ++i)
                            succ2.f[static_cast<size_t>(dom[i])] = ranks[i];
                        succ2.owe.assign(static_cast<size_t>(n), 0);
                        out.push_back({c, intern(std::move(succ2))});
                    });
                }
            } else {
                if (dom.empty()) continue;  // every tracked run died: no ranked successor
                int max_rank = 0;
                for (State s = 0; s < n; ++s)
                    max_rank = std::max(max_rank, cur.f[static_cast<size_t>(s)]);
                // Breakpoint propagation target set.
                std::vector<char> owe_next(static_cast<size_t>(n), 0);
                bool owe_empty = true;
                for (State s = 0; s < n; ++s)
                    if (cur.owe[static_cast<size_t>(s)]) owe_empty = false;
                if (!owe_empty) {
                    for (State s = 0; s < n; ++s) {
                        if (!cur.owe[static_cast<size_t>(s)]) continue;
                        for (const NfaEdge& e : b.edges_from(s))
                            if (!e.is_epsilon() && e.letter() == c) owe_next[static_cast<size_t>(e.dst)] = 1;
                    }
                }
                std::vector<int> caps(dom.size());
                std::vector<char> is_acc(dom.size());
                for (size_t i = 0; i < dom.size(); ++i) {
                    caps[i] = cap[static_cast<size_t>(dom[i])];
                    is_acc[i] = b.is_accepting(dom[i]);
                }
                detail::enumerate_tight_rankings(dom, caps, is_acc, max_rank, [&](const std::vector<int>& ranks) {
                    RankState succ;
                    succ.ranked = true;
                    succ.f.assign(static_cast<size_t>(n), -1);
                    succ.owe.assign(static_cast<size_t>(n), 0);
                    for (size_t i = 0; i < dom.size(); ++i)
                        succ.f[static_cast<size_t>(dom[i])] = ranks[i];
                    if (owe_empty) {
                        for (size_t i = 0; i < dom.size(); ++i)
                            if (ranks[i] % 2 == 0) succ.owe[static_cast<size_t>(dom[i])] = 1;
                    } else {
                        for (size_t i = 0; i < dom.size(); ++i)
                            if (owe_next[static_cast<size_t>(dom[i])] && ranks[i] % 2 == 0)
                                succ.owe[static_cast<size_t>(dom[i])] = 1;
                    }
                    out.push_back({c, intern(std::move(succ))});
                });
            }
        }
        if (static_cast<size_t>(id) >= edges.size()) edges.resize(static_cast<size_t>(id) + 1);
        edges[static_cast<size_t>(id)] = std::move(out);
    }
    edges.resize(order.size());
    std::vector<bool> accepting(order.size(), false);
    for (size_t i = 0; i < order.size(); ++i) {
        const RankState& k = order[i];
        if (!k.ranked) {
            accepting[i] = std::all_of(k.f.begin(), k.f.end(), [](int v) { return v == 0; });
        } else {
            accepting[i] = std::all_of(k.owe.begin(), k.owe.end(), [](char v) { return v == 0; });
        }
    }
    return ba_trim(BuchiAutomaton(b.alphabet(), static_cast<int>(order.size()), std::move(initials),
                                  std::move(accepting), std::move(edges)));
}

// Language equivalence of two Buchi automata. A sampled-lasso prefilter
// catches cheap differences first; the full check runs both inclusions via
// intersection with the complement of the other side. Returns nullopt when
// the languages coincide, otherwise a witness of the symmetric difference,
// re-validated by direct lasso membership before being handed out.
inline std::optional<OmegaWord> ba_equivalence(const BuchiAutomaton& b1_in,
                                               const BuchiAutomaton& b2_in) {
    if (!(b1_in.alphabet() == b2_in.alphabet()))
        throw std::invalid_argument("equivalence requires matching alphabets");
    const BuchiAutomaton b1 = b1_in.epsilon_free() ? b1_in : epsilon_removal(b1_in);
    const BuchiAutomaton b2 = b2_in.epsilon_free() ? b2_in : epsilon_removal(b2_in);

    auto verify = [&](const OmegaWord& w) {
        bool m1 = ba_lasso_member(b1, w);
        bool m2 = ba_lasso_member(b2, w);
        if (m1 == m2)
            throw std::logic_error("equivalence produced a witness outside the symmetric difference");
        return w;
    };

    // Prefilter: all short lassos in (length, prefix, period) order.
    const std::string& letters = b1.alphabet().letters();
    std::vector<Word> prefixes{Word{}};
    for (size_t i = 0; i < prefixes.size() && prefixes[i].size() < 3; ++i)
        for (char c : letters) prefixes.push_back(prefixes[i] + c);
    std::sort(prefixes.begin(), prefixes.end(), [](const Word& a, const Word& b) {
        return std::make_pair(a.size(), std::cref(a)) < std::make_pair(b.size(), std::cref(b));
    });
    for (size_t total = 1; total <= 6; ++total) {
        for (const Word& u : prefixes) {
            if (u.size() > 3) continue;
            for (const Word& v : prefixes) {
                if (v.empty() || v.size() > 3 || u.size() + v.size() != total) continue;
                OmegaWord w(u, v);
                if (ba_lasso_member(b1, w) != ba_lasso_member(b2, w)) return verify(w);
            }
        }
    }

    BuchiAutomaton t1 = ba_reduce(ba_trim(b1));
    BuchiAutomaton t2 = ba_reduce(ba_trim(b2));
    if (auto w = ba_emptiness(ba_intersection(t1, ba_complement(t2)))) return verify(*w);
    if (auto w = ba_emptiness(ba_intersection(t2, ba_complement(t1)))) return verify(*w);
    return std::nullopt;
}

}  // namespace omlearn
