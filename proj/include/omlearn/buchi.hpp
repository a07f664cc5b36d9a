#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "omlearn/automata.hpp"
#include "omlearn/words.hpp"

namespace omlearn {

// A nondeterministic Buchi automaton. Epsilon edges are allowed only as an
// internal construction device; epsilon_free() reports whether any remain.
// A run is accepting iff it visits an accepting state infinitely often.
class BuchiAutomaton {
public:
    BuchiAutomaton(Alphabet alphabet, int num_states, std::vector<State> initials,
                   std::vector<bool> accepting, std::vector<std::vector<NfaEdge>> edges)
        : alphabet_(std::move(alphabet)),
          num_states_(num_states),
          initials_(std::move(initials)),
          accepting_(std::move(accepting)),
          edges_(std::move(edges)) {
        if (num_states_ < 0) throw std::invalid_argument("negative state count");
        if (static_cast<int>(accepting_.size()) != num_states_ ||
            static_cast<int>(edges_.size()) != num_states_)
            throw std::invalid_argument("buchi component size mismatch");
        for (State s : initials_)
            if (s < 0 || s >= num_states_) throw std::invalid_argument("buchi initial out of range");
        for (const auto& out : edges_)
            for (const NfaEdge& e : out) {
                if (e.dst < 0 || e.dst >= num_states_)
                    throw std::invalid_argument("buchi edge target out of range");
                if (!e.is_epsilon() && !alphabet_.contains(e.letter()))
                    throw std::invalid_argument("buchi edge letter outside alphabet");
            }
        epsilon_free_ = true;
        for (const auto& out : edges_)
            for (const NfaEdge& e : out)
                if (e.is_epsilon()) epsilon_free_ = false;
    }

    const Alphabet& alphabet() const { return alphabet_; }
    int num_states() const { return num_states_; }
    const std::vector<State>& initials() const { return initials_; }
    bool is_accepting(State s) const { return accepting_.at(static_cast<size_t>(s)); }
    const std::vector<bool>& accepting() const { return accepting_; }
    const std::vector<NfaEdge>& edges_from(State s) const { return edges_.at(static_cast<size_t>(s)); }
    bool epsilon_free() const { return epsilon_free_; }

    int transition_count() const {
        int n = 0;
        for (const auto& out : edges_) n += static_cast<int>(out.size());
        return n;
    }

    // Language-preserving alphabet extension (new letters get no edges).
    BuchiAutomaton with_alphabet(Alphabet wider) const {
        for (char c : alphabet_.letters())
            if (!wider.contains(c))
                throw std::invalid_argument("alphabet extension must contain the original letters");
        return BuchiAutomaton(std::move(wider), num_states_, initials_, accepting_, edges_);
    }

private:
    Alphabet alphabet_;
    int num_states_;
    std::vector<State> initials_;
    std::vector<bool> accepting_;
    std::vector<std::vector<NfaEdge>> edges_;
    bool epsilon_free_;
};

// Convenient incremental construction.
class BuchiBuilder {
public:
    explicit BuchiBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    State add_state(bool accepting = false) {
        accepting_.push_back(accepting);
        edges_.emplace_back();
        return static_cast<State>(accepting_.size()) - 1;
    }

    void add_initial(State s) { initials_.push_back(s); }
    void set_accepting(State s, bool value = true) { accepting_.at(static_cast<size_t>(s)) = value; }
    void add_transition(State src, char letter, State dst) {
        edges_.at(static_cast<size_t>(src)).push_back({letter, dst});
    }
    void add_epsilon(State src, State dst) {
        edges_.at(static_cast<size_t>(src)).push_back({NfaEdge::kEpsilon, dst});
    }

    BuchiAutomaton build() {
        return BuchiAutomaton(alphabet_, static_cast<int>(accepting_.size()), initials_, accepting_,
                              edges_);
    }

private:
    Alphabet alphabet_;
    std::vector<State> initials_;
    std::vector<bool> accepting_;
    std::vector<std::vector<NfaEdge>> edges_;
};

namespace detail {

// (state, crossed-accepting) pairs reachable through epsilon paths. The flag
// counts accepting states strictly after the start of the path, so the start
// state's own acceptance is charged to the edge that entered it.
inline std::vector<std::pair<State, bool>> epsilon_reach(const BuchiAutomaton& b, State from) {
    std::vector<std::array<bool, 2>> seen(static_cast<size_t>(b.num_states()), {false, false});
    std::deque<std::pair<State, bool>> queue;
    std::vector<std::pair<State, bool>> out;
    seen[static_cast<size_t>(from)][0] = true;
    queue.push_back({from, false});
    while (!queue.empty()) {
        auto [s, flag] = queue.front();
        queue.pop_front();
        out.push_back({s, flag});
        for (const NfaEdge& e : b.edges_from(s)) {
            if (!e.is_epsilon()) continue;
            bool nflag = flag || b.is_accepting(e.dst);
            if (!seen[static_cast<size_t>(e.dst)][nflag ? 1 : 0]) {
                seen[static_cast<size_t>(e.dst)][nflag ? 1 : 0] = true;
                queue.push_back({e.dst, nflag});
            }
        }
    }
    return out;
}

}  // namespace detail

// True iff some cycle made of epsilon edges only passes through an
// accepting state. Such inputs are rejected by epsilon_removal.
inline bool has_accepting_epsilon_cycle(const BuchiAutomaton& b) {
    for (State f = 0; f < b.num_states(); ++f) {
        if (!b.is_accepting(f)) continue;
        // DFS over epsilon edges looking for a path back to f.
        std::vector<bool> seen(static_cast<size_t>(b.num_states()), false);
        std::deque<State> queue;
        for (const NfaEdge& e : b.edges_from(f))
            if (e.is_epsilon() && !seen[static_cast<size_t>(e.dst)]) {
                seen[static_cast<size_t>(e.dst)] = true;
                queue.push_back(e.dst);
            }
        while (!queue.empty()) {
            State s = queue.front();
            queue.pop_front();
            if (s == f) return true;
            for (const NfaEdge& e : b.edges_from(s))
                if (e.is_epsilon() && !seen[static_cast<size_t>(e.dst)]) {
                    seen[static_cast<size_t>(e.dst)] = true;
                    queue.push_back(e.dst);
                }
        }
    }
    return false;
}

// Epsilon elimination that preserves the omega-language. Letter edges are
// saturated through epsilon closures; each state is split, on demand, into
// a plain copy and a saw-accepting copy so that accepting states crossed
// inside an epsilon segment still get credited infinitely often.
inline BuchiAutomaton epsilon_removal(const BuchiAutomaton& b) {
    if (b.epsilon_free()) return b;
    if (has_accepting_epsilon_cycle(b))
        throw std::invalid_argument(
            "epsilon removal requires that no pure epsilon cycle passes through an accepting state");

    // key: (original state, saw-accepting flag) -> new id, created lazily.
    std::map<std::pair<State, bool>, State> ids;
    std::vector<std::pair<State, bool>> order;
    std::deque<std::pair<State, bool>> queue;
    auto intern = [&](State s, bool flag) {
        auto [it, fresh] = ids.emplace(std::make_pair(s, flag), static_cast<State>(order.size()));
        if (fresh) {
            order.emplace_back(s, flag);
            queue.emplace_back(s, flag);
        }
        return it->second;
    };

    std::vector<State> initials;
    for (State s : b.initials()) initials.push_back(intern(s, false));

    std::vector<std::vector<NfaEdge>> edges;
    while (!queue.empty()) {
        State s = queue.front().first;  // edges depend on the original state only
        queue.pop_front();
        // For each letter successor: the pre-segment runs from s through
        // epsilon edges, one letter edge fires, the post-segment again runs
        // through epsilon edges. The new flag records whether any accepting
        // state was crossed after leaving s.
        std::map<std::pair<char, std::pair<State, bool>>, bool> targets;
        for (auto [p, pre_flag] : detail::epsilon_reach(b, s)) {
            for (const NfaEdge& e : b.edges_from(p)) {
                if (e.is_epsilon()) continue;
                bool mid_flag = pre_flag || b.is_accepting(e.dst);
                for (auto [t, post_flag] : detail::epsilon_reach(b, e.dst)) {
                    bool crossed = mid_flag || post_flag;
                    targets[{e.letter(), {t, crossed}}] = true;
                }
            }
        }
        std::vector<NfaEdge> out;
        for (const auto& [key, _] : targets) {
            auto [letter, target] = key;
            out.push_back({letter, intern(target.first, target.second)});
        }
        edges.push_back(std::move(out));
    }
    edges.resize(order.size());
    std::vector<bool> accepting(order.size());
    for (size_t i = 0; i < order.size(); ++i) accepting[i] = order[i].second;
    return BuchiAutomaton(b.alphabet(), static_cast<int>(order.size()), std::move(initials),
                          std::move(accepting), std::move(edges));
}

// The single-word automaton accepting exactly u v^omega: a chain for u
// followed by a cycle for v, accepting at the cycle anchor.
inline BuchiAutomaton lasso_automaton(const Alphabet& alphabet, const OmegaWord& w) {
    BuchiBuilder builder(alphabet);
    int prefix_len = static_cast<int>(w.prefix.size());
    int period_len = static_cast<int>(w.period.size());
    std::vector<State> chain;
    for (int i = 0; i < prefix_len + period_len; ++i) chain.push_back(builder.add_state(false));
    builder.add_initial(chain.front());
    builder.set_accepting(chain[static_cast<size_t>(prefix_len)]);
    for (int i = 0; i < prefix_len; ++i)
        builder.add_transition(chain[static_cast<size_t>(i)], w.prefix[static_cast<size_t>(i)],
                               chain[static_cast<size_t>(i + 1)]);
    for (int i = 0; i < period_len; ++i) {
        State src = chain[static_cast<size_t>(prefix_len + i)];
        State dst = i + 1 < period_len ? chain[static_cast<size_t>(prefix_len + i + 1)]
                                       : chain[static_cast<size_t>(prefix_len)];
        builder.add_transition(src, w.period[static_cast<size_t>(i)], dst);
    }
    return builder.build();
}

// Buchi product with the usual accepting-phase tracking. Phase 0 waits for
// an accepting state of the first factor, phase 1 for one of the second;
// phase 2 marks the completed round and behaves like phase 0. A run of the
// product visits phase 2 infinitely often iff both factors accept.
inline BuchiAutomaton ba_intersection(const BuchiAutomaton& a, const BuchiAutomaton& b) {
    if (!(a.alphabet() == b.alphabet()))
        throw std::invalid_argument("buchi product requires matching alphabets");
    if (!a.epsilon_free() || !b.epsilon_free())
        throw std::invalid_argument("buchi product requires epsilon-free inputs");
    using Key = std::tuple<State, State, int>;
    std::map<Key, State> ids;
    std::vector<Key> order;
    std::deque<Key> queue;
    auto intern = [&](Key k) {
        auto [it, fresh] = ids.emplace(k, static_cast<State>(order.size()));
        if (fresh) {
            order.push_back(k);
            queue.push_back(k);
        }
        return it->second;
    };
    std::vector<State> initials;
    for (State ia : a.initials())
        for (State ib : b.initials()) initials.push_back(intern({ia, ib, 0}));
    std::vector<std::vector<NfaEdge>> edges;
    while (!queue.empty()) {
        auto [pa, pb, phase] = queue.front();
        queue.pop_front();
        std::vector<NfaEdge> out;
        for (const NfaEdge& ea : a.edges_from(pa)) {
            for (const NfaEdge& eb : b.edges_from(pb)) {
                if (ea.label != eb.label) continue;
                int base = phase == 2 ? 0 : phase;
                int next = base;
                if (base == 0 && a.is_accepting(ea.dst)) next = 1;
                if (next == 1 && b.is_accepting(eb.dst)) next = 2;
                out.push_back({ea.label, intern({ea.dst, eb.dst, next})});
            }
        }
        edges.push_back(std::move(out));
    }
    edges.resize(order.size());
    std::vector<bool> accepting(order.size());
    for (size_t i = 0; i < order.size(); ++i) accepting[i] = std::get<2>(order[i]) == 2;
    return BuchiAutomaton(a.alphabet(), static_cast<int>(order.size()), std::move(initials),
                          std::move(accepting), std::move(edges));
}

namespace detail {

// Lexicographically least shortest path words via layered BFS.
struct BfsTree {
    std::vector<int> dist;
    std::vector<char> letter;
    std::vector<State> prev;

    Word word_to(State t) const {
        Word out;
        while (prev[static_cast<size_t>(t)] != -1) {
            out.push_back(letter[static_cast<size_t>(t)]);
            t = prev[static_cast<size_t>(t)];
        }
        std::reverse(out.begin(), out.end());
        return out;
    }
};

inline BfsTree buchi_bfs(const BuchiAutomaton& b, const std::vector<State>& sources) {
    BfsTree tree;
    tree.dist.assign(static_cast<size_t>(b.num_states()), -1);
    tree.letter.assign(static_cast<size_t>(b.num_states()), 0);
    tree.prev.assign(static_cast<size_t>(b.num_states()), -1);
    std::string letters = b.alphabet().letters();
    std::vector<State> frontier;
    for (State s : sources)
        if (tree.dist[static_cast<size_t>(s)] == -1) {
            tree.dist[static_cast<size_t>(s)] = 0;
            frontier.push_back(s);
        }
    int depth = 0;
    while (!frontier.empty()) {
        ++depth;
        std::vector<State> next;
        for (State s : frontier) {
            for (char c : letters) {
                for (const NfaEdge& e : b.edges_from(s)) {
                    if (e.is_epsilon() || e.letter() != c) continue;
                    if (tree.dist[static_cast<size_t>(e.dst)] != -1) continue;
                    tree.dist[static_cast<size_t>(e.dst)] = depth;
                    tree.letter[static_cast<size_t>(e.dst)] = c;
                    tree.prev[static_cast<size_t>(e.dst)] = s;
                    next.push_back(e.dst);
                }
            }
        }
        frontier = std::move(next);
    }
    return tree;
}

// Shortest nonempty cycle word at anchor, lexicographically least among the
// shortest, or nullopt if no cycle returns to the anchor.
inline std::optional<Word> shortest_cycle_word(const BuchiAutomaton& b, State anchor) {
    std::string letters = b.alphabet().letters();
    std::vector<bool> visited(static_cast<size_t>(b.num_states()), false);
    std::vector<char> letter(static_cast<size_t>(b.num_states()), 0);
    std::vector<State> prev(static_cast<size_t>(b.num_states()), -1);
    std::vector<State> frontier;
    auto backtrack = [&](char last, State before_last) {
        Word out;
        out.push_back(last);
        State cur = before_last;
        for (;;) {
            out.push_back(letter[static_cast<size_t>(cur)]);
            if (prev[static_cast<size_t>(cur)] == -1) break;
            cur = prev[static_cast<size_t>(cur)];
        }
        std::reverse(out.begin(), out.end());
        return out;
    };
    // Seed with the anchor's direct successors so the cycle is nonempty.
    for (char c : letters)
        for (const NfaEdge& e : b.edges_from(anchor)) {
            if (e.is_epsilon() || e.letter() != c) continue;
            if (e.dst == anchor) return Word(1, c);
            if (!visited[static_cast<size_t>(e.dst)]) {
                visited[static_cast<size_t>(e.dst)] = true;
                letter[static_cast<size_t>(e.dst)] = c;
                frontier.push_back(e.dst);
            }
        }
    while (!frontier.empty()) {
        std::vector<State> next;
        for (State s : frontier) {
            for (char c : letters) {
                for (const NfaEdge& e : b.edges_from(s)) {
                    if (e.is_epsilon() || e.letter() != c) continue;
                    if (e.dst == anchor) return backtrack(c, s);
                    if (visited[static_cast<size_t>(e.dst)]) continue;
                    visited[static_cast<size_t>(e.dst)] = true;
                    letter[static_cast<size_t>(e.dst)] = c;
                    prev[static_cast<size_t>(e.dst)] = s;
                    next.push_back(e.dst);
                }
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

}  // namespace detail

// Quotient by forward bisimulation: states with the same acceptance bit
// and the same letter-to-successor-block sets merge. Language-preserving,
// and collapses the duplicated gadget parts that translation and epsilon
// elimination leave behind.
inline BuchiAutomaton ba_reduce(const BuchiAutomaton& b) {
    int n = b.num_states();
    if (n == 0) return b;
    std::vector<int> block(static_cast<size_t>(n));
    for (State s = 0; s < n; ++s) block[static_cast<size_t>(s)] = b.is_accepting(s) ? 1 : 0;
    for (;;) {
        std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> ids;
        std::vector<int> next(static_cast<size_t>(n));
        for (State s = 0; s < n; ++s) {
            std::vector<std::pair<int, int>> moves;
            for (const NfaEdge& e : b.edges_from(s))
                moves.emplace_back(e.label, block[static_cast<size_t>(e.dst)]);
            std::sort(moves.begin(), moves.end());
            moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
            auto [it, _] =
                ids.emplace(std::make_pair(block[static_cast<size_t>(s)], std::move(moves)),
                            static_cast<int>(ids.size()));
            next[static_cast<size_t>(s)] = it->second;
        }
        if (next == block) break;
        block = std::move(next);
    }
    int blocks = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<bool> accepting(static_cast<size_t>(blocks), false);
    std::vector<std::map<std::pair<int, State>, bool>> seen(static_cast<size_t>(blocks));
    std::vector<std::vector<NfaEdge>> edges(static_cast<size_t>(blocks));
    std::vector<State> initials;
    std::vector<bool> initial_blocks(static_cast<size_t>(blocks), false);
    for (State s : b.initials())
        if (!initial_blocks[static_cast<size_t>(block[static_cast<size_t>(s)])]) {
            initial_blocks[static_cast<size_t>(block[static_cast<size_t>(s)])] = true;
            initials.push_back(block[static_cast<size_t>(s)]);
        }
    for (State s = 0; s < n; ++s) {
        int bs = block[static_cast<size_t>(s)];
        accepting[static_cast<size_t>(bs)] = b.is_accepting(s);
        for (const NfaEdge& e : b.edges_from(s)) {
            std::pair<int, State> key{e.label, block[static_cast<size_t>(e.dst)]};
            if (!seen[static_cast<size_t>(bs)].emplace(key, true).second) continue;
            edges[static_cast<size_t>(bs)].push_back({e.label, block[static_cast<size_t>(e.dst)]});
        }
    }
    std::sort(initials.begin(), initials.end());
    return BuchiAutomaton(b.alphabet(), blocks, std::move(initials), std::move(accepting),
                          std::move(edges));
}

// An accepting lasso (u, v), or nullopt iff the language is empty. The
// search anchors the cycle at an accepting state and returns the lasso
// minimizing (|u| + |v|, u, v), which makes counterexamples reproducible.
inline std::optional<OmegaWord> ba_emptiness(const BuchiAutomaton& input) {
    const BuchiAutomaton b = input.epsilon_free() ? input : epsilon_removal(input);
    detail::BfsTree reach = detail::buchi_bfs(b, b.initials());
    std::optional<OmegaWord> best;
    auto better = [&](const OmegaWord& cand) {
        if (!best) return true;
        size_t cl = cand.prefix.size() + cand.period.size();
        size_t bl = best->prefix.size() + best->period.size();
        return std::tie(cl, cand.prefix, cand.period) < std::tie(bl, best->prefix, best->period);
    };
    for (State f = 0; f < b.num_states(); ++f) {
        if (!b.is_accepting(f) || reach.dist[static_cast<size_t>(f)] == -1) continue;
        auto cycle = detail::shortest_cycle_word(b, f);
        if (!cycle) continue;
        OmegaWord cand(reach.word_to(f), *cycle);
        if (better(cand)) best = cand;
    }
    return best;
}

// uv^omega membership: product of the single-word lasso automaton with the
// automaton under test, then an emptiness check. Inputs with epsilon edges
// are normalized first.
inline bool ba_lasso_member(const BuchiAutomaton& input, const OmegaWord& w) {
    // Letters never used by the automaton cannot be read by any run.
    for (char c : w.prefix)
        if (!input.alphabet().contains(c)) return false;
    for (char c : w.period)
        if (!input.alphabet().contains(c)) return false;
    const BuchiAutomaton b = input.epsilon_free() ? input : epsilon_removal(input);
    BuchiAutomaton lasso = lasso_automaton(b.alphabet(), w);
    return ba_emptiness(ba_intersection(lasso, b)).has_value();
}

}  // namespace omlearn
