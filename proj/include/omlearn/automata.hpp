#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "omlearn/words.hpp"

namespace omlearn {

using State = int;

// A total deterministic finite automaton over an Alphabet. Transitions are
// stored as a dense state-major table. Construction validates totality, so
// every algorithm downstream may index delta without checks.
class Dfa {
public:
    Dfa(Alphabet alphabet, int num_states, State initial,
        std::vector<bool> accepting, std::vector<State> delta)
        : alphabet_(std::move(alphabet)),
          num_states_(num_states),
          initial_(initial),
          accepting_(std::move(accepting)),
          delta_(std::move(delta)) {
        if (num_states_ <= 0) throw std::invalid_argument("dfa needs at least one state");
        if (initial_ < 0 || initial_ >= num_states_)
            throw std::invalid_argument("dfa initial state out of range");
        if (static_cast<int>(accepting_.size()) != num_states_)
            throw std::invalid_argument("dfa accepting vector size mismatch");
        if (static_cast<int>(delta_.size()) != num_states_ * alphabet_.size())
            throw std::invalid_argument("dfa transition table size mismatch");
        for (State s : delta_)
            if (s < 0 || s >= num_states_)
                throw std::invalid_argument("dfa transition target out of range");
    }

    const Alphabet& alphabet() const { return alphabet_; }
    int num_states() const { return num_states_; }
    State initial() const { return initial_; }
    bool is_accepting(State s) const { return accepting_.at(static_cast<size_t>(s)); }
    const std::vector<bool>& accepting() const { return accepting_; }

    State step(State s, char letter) const {
        int li = alphabet_.index_of(letter);
        if (li < 0) throw std::invalid_argument(std::string("letter outside alphabet: ") + letter);
        return delta_[static_cast<size_t>(s) * alphabet_.size() + static_cast<size_t>(li)];
    }

    // delta lifted to words, from an arbitrary state.
    State run_from(State s, const Word& w) const {
        for (char c : w) s = step(s, c);
        return s;
    }

    // A(w): the state reached from the initial state.
    State run(const Word& w) const { return run_from(initial_, w); }

    bool accepts(const Word& w) const { return is_accepting(run(w)); }

    int accepting_count() const {
        return static_cast<int>(std::count(accepting_.begin(), accepting_.end(), true));
    }

private:
    Alphabet alphabet_;
    int num_states_;
    State initial_;
    std::vector<bool> accepting_;
    std::vector<State> delta_;
};

// Incremental construction of a total DFA from a partial description. Any
// transition left unspecified is routed to a fresh rejecting sink, so the
// result is always total.
class DfaBuilder {
public:
    explicit DfaBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    State add_state(bool accepting = false) {
        accepting_.push_back(accepting);
        delta_.resize(accepting_.size() * static_cast<size_t>(alphabet_.size()), -1);
        return static_cast<State>(accepting_.size()) - 1;
    }

    void set_initial(State s) { initial_ = s; }
    void set_accepting(State s, bool value = true) { accepting_.at(static_cast<size_t>(s)) = value; }

    void add_transition(State src, char letter, State dst) {
        int li = alphabet_.index_of(letter);
        if (li < 0) throw std::invalid_argument(std::string("letter outside alphabet: ") + letter);
        State& cell = delta_.at(static_cast<size_t>(src) * alphabet_.size() + static_cast<size_t>(li));
        if (cell != -1 && cell != dst)
            throw std::invalid_argument("conflicting transition makes the automaton nondeterministic");
        cell = dst;
    }

    bool has_transition(State src, char letter) const {
        int li = alphabet_.index_of(letter);
        return li >= 0 && delta_.at(static_cast<size_t>(src) * alphabet_.size() + static_cast<size_t>(li)) != -1;
    }

    Dfa build() {
        if (accepting_.empty()) add_state(false);
        bool needs_sink = std::find(delta_.begin(), delta_.end(), -1) != delta_.end();
        if (needs_sink) {
            State sink = add_state(false);
            for (State& cell : delta_)
                if (cell == -1) cell = sink;
        }
        return Dfa(alphabet_, static_cast<int>(accepting_.size()), initial_, accepting_, delta_);
    }

private:
    Alphabet alphabet_;
    State initial_ = 0;
    std::vector<bool> accepting_;
    std::vector<State> delta_;
};

// Same transition structure with initial state s and accepting set {v}.
inline Dfa reanchor(const Dfa& a, State s, State v) {
    if (s < 0 || s >= a.num_states() || v < 0 || v >= a.num_states())
        throw std::invalid_argument("reanchor state out of range");
    std::vector<bool> accepting(static_cast<size_t>(a.num_states()), false);
    accepting[static_cast<size_t>(v)] = true;
    std::vector<State> delta;
    delta.reserve(static_cast<size_t>(a.num_states()) * a.alphabet().size());
    for (State q = 0; q < a.num_states(); ++q)
        for (char c : a.alphabet().letters()) delta.push_back(a.step(q, c));
    return Dfa(a.alphabet(), a.num_states(), s, std::move(accepting), std::move(delta));
}

// Flip of the accepting set; complements the language because the DFA is total.
inline Dfa dfa_complement(const Dfa& a) {
    std::vector<bool> accepting(static_cast<size_t>(a.num_states()));
    for (State q = 0; q < a.num_states(); ++q) accepting[static_cast<size_t>(q)] = !a.is_accepting(q);
    std::vector<State> delta;
    delta.reserve(static_cast<size_t>(a.num_states()) * a.alphabet().size());
    for (State q = 0; q < a.num_states(); ++q)
        for (char c : a.alphabet().letters()) delta.push_back(a.step(q, c));
    return Dfa(a.alphabet(), a.num_states(), a.initial(), std::move(accepting), std::move(delta));
}

// Reachable pair construction; accepts the intersection of the factor
// languages. Pairs are numbered in BFS discovery order, letters in
// alphabet order, which keeps the result canonical for a given input.
inline Dfa dfa_product(const Dfa& a, const Dfa& b) {
    if (!(a.alphabet() == b.alphabet()))
        throw std::invalid_argument("dfa product requires matching alphabets");
    std::map<std::pair<State, State>, State> ids;
    std::vector<std::pair<State, State>> order;
    std::deque<std::pair<State, State>> queue;
    auto intern = [&](std::pair<State, State> p) {
        auto [it, fresh] = ids.emplace(p, static_cast<State>(order.size()));
        if (fresh) {
            order.push_back(p);
            queue.push_back(p);
        }
        return it->second;
    };
    intern({a.initial(), b.initial()});
    std::vector<State> delta;
    std::vector<bool> accepting;
    while (!queue.empty()) {
        auto [pa, pb] = queue.front();
        queue.pop_front();
        for (char c : a.alphabet().letters()) {
            State target = intern({a.step(pa, c), b.step(pb, c)});
            delta.push_back(target);
        }
    }
    accepting.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i)
        accepting[i] = a.is_accepting(order[i].first) && b.is_accepting(order[i].second);
    return Dfa(a.alphabet(), static_cast<int>(order.size()), 0, std::move(accepting), std::move(delta));
}

namespace detail {

// Renumbers states in BFS order from the initial state and drops anything
// unreachable. The output is canonical for a fixed transition structure.
inline Dfa dfa_canonicalize(const Dfa& a) {
    std::vector<State> id(static_cast<size_t>(a.num_states()), -1);
    std::vector<State> order;
    std::deque<State> queue;
    id[static_cast<size_t>(a.initial())] = 0;
    order.push_back(a.initial());
    queue.push_back(a.initial());
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (char c : a.alphabet().letters()) {
            State t = a.step(q, c);
            if (id[static_cast<size_t>(t)] == -1) {
                id[static_cast<size_t>(t)] = static_cast<State>(order.size());
                order.push_back(t);
                queue.push_back(t);
            }
        }
    }
    std::vector<bool> accepting(order.size());
    std::vector<State> delta;
    delta.reserve(order.size() * static_cast<size_t>(a.alphabet().size()));
    for (State q : order) {
        accepting[static_cast<size_t>(id[static_cast<size_t>(q)])] = a.is_accepting(q);
        for (char c : a.alphabet().letters())
            delta.push_back(id[static_cast<size_t>(a.step(q, c))]);
    }
    return Dfa(a.alphabet(), static_cast<int>(order.size()), 0, std::move(accepting), std::move(delta));
}

}  // namespace detail

// Moore partition refinement followed by canonical renumbering. The result
// is the unique minimal DFA of the language, states numbered in BFS order.
inline Dfa dfa_minimize(const Dfa& input) {
    Dfa a = detail::dfa_canonicalize(input);
    int n = a.num_states();
    std::vector<int> block(static_cast<size_t>(n));
    for (State q = 0; q < n; ++q) block[static_cast<size_t>(q)] = a.is_accepting(q) ? 1 : 0;
    for (;;) {
        // Signature of a state: its block plus the blocks of its successors.
        std::map<std::vector<int>, int> sig_ids;
        std::vector<int> next(static_cast<size_t>(n));
        for (State q = 0; q < n; ++q) {
            std::vector<int> sig{block[static_cast<size_t>(q)]};
            for (char c : a.alphabet().letters()) sig.push_back(block[static_cast<size_t>(a.step(q, c))]);
            auto [it, _] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
            next[static_cast<size_t>(q)] = it->second;
        }
        if (next == block) break;
        block = std::move(next);
    }
    int blocks = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<bool> accepting(static_cast<size_t>(blocks), false);
    std::vector<State> delta(static_cast<size_t>(blocks) * a.alphabet().size(), -1);
    for (State q = 0; q < n; ++q) {
        int b = block[static_cast<size_t>(q)];
        accepting[static_cast<size_t>(b)] = a.is_accepting(q);
        for (int li = 0; li < a.alphabet().size(); ++li)
            delta[static_cast<size_t>(b) * a.alphabet().size() + static_cast<size_t>(li)] =
                block[static_cast<size_t>(a.step(q, a.alphabet().letter(li)))];
    }
    Dfa merged(a.alphabet(), blocks, block[static_cast<size_t>(a.initial())], std::move(accepting),
               std::move(delta));
    return detail::dfa_canonicalize(merged);
}

// Rewrites a decomposition (u, v) as (u v^i, v^j) with the smallest i >= 0,
// then smallest j >= 1, such that the leading automaton loops: M(xy) = M(x).
// Some pair with i, j <= |Q| always exists because M is finite and total.
inline std::pair<Word, Word> normalize_decomposition(const Dfa& m, const OmegaWord& w) {
    int bound = m.num_states();
    Word x = w.prefix;
    for (int i = 0; i <= bound; ++i) {
        State sx = m.run(x);
        Word y;
        for (int j = 1; j <= bound; ++j) {
            y += w.period;
            if (m.run_from(sx, y) == sx) return {x, y};
        }
        x += w.period;
    }
    throw std::logic_error("normalized factorization must exist for a total leading automaton");
}

// Edge label of a nondeterministic automaton: a concrete letter or epsilon.
// Decomposition automata additionally use the separator '$' as a letter.
struct NfaEdge {
    int label;  // -1 encodes epsilon, otherwise the letter
    State dst;

    static constexpr int kEpsilon = -1;
    bool is_epsilon() const { return label == kEpsilon; }
    char letter() const { return static_cast<char>(label); }
};

// A nondeterministic finite automaton with optional epsilon edges and an
// initial-state set. Used both for ordinary languages over the alphabet and
// for decomposition languages over alphabet + '$'.
class Nfa {
public:
    Nfa(Alphabet alphabet, int num_states, std::vector<State> initials,
        std::vector<bool> accepting, std::vector<std::vector<NfaEdge>> edges)
        : alphabet_(std::move(alphabet)),
          num_states_(num_states),
          initials_(std::move(initials)),
          accepting_(std::move(accepting)),
          edges_(std::move(edges)) {
        if (num_states_ < 0) throw std::invalid_argument("negative state count");
        if (static_cast<int>(accepting_.size()) != num_states_ ||
            static_cast<int>(edges_.size()) != num_states_)
            throw std::invalid_argument("nfa component size mismatch");
        for (State s : initials_)
            if (s < 0 || s >= num_states_) throw std::invalid_argument("nfa initial out of range");
        for (const auto& out : edges_)
            for (const NfaEdge& e : out)
                if (e.dst < 0 || e.dst >= num_states_)
                    throw std::invalid_argument("nfa edge target out of range");
    }

    static Nfa from_dfa(const Dfa& a) {
        std::vector<std::vector<NfaEdge>> edges(static_cast<size_t>(a.num_states()));
        for (State q = 0; q < a.num_states(); ++q)
            for (char c : a.alphabet().letters())
                edges[static_cast<size_t>(q)].push_back({c, a.step(q, c)});
        return Nfa(a.alphabet(), a.num_states(), {a.initial()}, a.accepting(), std::move(edges));
    }

    const Alphabet& alphabet() const { return alphabet_; }
    int num_states() const { return num_states_; }
    const std::vector<State>& initials() const { return initials_; }
    bool is_accepting(State s) const { return accepting_.at(static_cast<size_t>(s)); }
    const std::vector<NfaEdge>& edges_from(State s) const { return edges_.at(static_cast<size_t>(s)); }

    // Letters that may appear on edges: the alphabet, with '$' ordered last.
    std::string edge_letters() const {
        std::string out = alphabet_.letters();
        for (const auto& from : edges_)
            for (const NfaEdge& e : from)
                if (!e.is_epsilon() && e.letter() == kSeparator) {
                    out.push_back(kSeparator);
                    return out;
                }
        return out;
    }

    std::vector<State> epsilon_closure(std::vector<State> set) const {
        std::vector<bool> seen(static_cast<size_t>(num_states_), false);
        std::deque<State> queue;
        for (State s : set) {
            if (!seen[static_cast<size_t>(s)]) {
                seen[static_cast<size_t>(s)] = true;
                queue.push_back(s);
            }
        }
        set.clear();
        while (!queue.empty()) {
            State s = queue.front();
            queue.pop_front();
            set.push_back(s);
            for (const NfaEdge& e : edges_[static_cast<size_t>(s)])
                if (e.is_epsilon() && !seen[static_cast<size_t>(e.dst)]) {
                    seen[static_cast<size_t>(e.dst)] = true;
                    queue.push_back(e.dst);
                }
        }
        std::sort(set.begin(), set.end());
        return set;
    }

    std::vector<State> step_set(const std::vector<State>& set, char letter) const {
        std::vector<bool> seen(static_cast<size_t>(num_states_), false);
        std::vector<State> out;
        for (State s : set)
            for (const NfaEdge& e : edges_[static_cast<size_t>(s)])
                if (!e.is_epsilon() && e.letter() == letter && !seen[static_cast<size_t>(e.dst)]) {
                    seen[static_cast<size_t>(e.dst)] = true;
                    out.push_back(e.dst);
                }
        return epsilon_closure(std::move(out));
    }

    bool accepts(const Word& w) const {
        std::vector<State> set = epsilon_closure(initials_);
        for (char c : w) {
            set = step_set(set, c);
            if (set.empty()) return false;
        }
        return std::any_of(set.begin(), set.end(), [&](State s) { return is_accepting(s); });
    }

private:
    Alphabet alphabet_;
    int num_states_;
    std::vector<State> initials_;
    std::vector<bool> accepting_;
    std::vector<std::vector<NfaEdge>> edges_;
};

// Pair construction recognizing the intersection. Letter edges synchronize;
// an epsilon edge on either side moves against a stationary partner.
inline Nfa product_intersection(const Nfa& a, const Nfa& b) {
    if (!(a.alphabet() == b.alphabet()))
        throw std::invalid_argument("nfa product requires matching alphabets");
    std::map<std::pair<State, State>, State> ids;
    std::vector<std::pair<State, State>> order;
    std::deque<std::pair<State, State>> queue;
    auto intern = [&](std::pair<State, State> p) {
        auto [it, fresh] = ids.emplace(p, static_cast<State>(order.size()));
        if (fresh) {
            order.push_back(p);
            queue.push_back(p);
        }
        return it->second;
    };
    std::vector<State> initials;
    for (State ia : a.initials())
        for (State ib : b.initials()) initials.push_back(intern({ia, ib}));
    std::vector<std::vector<NfaEdge>> edges;
    while (!queue.empty()) {
        auto [pa, pb] = queue.front();
        queue.pop_front();
        std::vector<NfaEdge> out;
        for (const NfaEdge& ea : a.edges_from(pa)) {
            if (ea.is_epsilon()) {
                out.push_back({NfaEdge::kEpsilon, intern({ea.dst, pb})});
                continue;
            }
            for (const NfaEdge& eb : b.edges_from(pb))
                if (!eb.is_epsilon() && eb.label == ea.label)
                    out.push_back({ea.label, intern({ea.dst, eb.dst})});
        }
        for (const NfaEdge& eb : b.edges_from(pb))
            if (eb.is_epsilon()) out.push_back({NfaEdge::kEpsilon, intern({pa, eb.dst})});
        edges.push_back(std::move(out));
    }
    edges.resize(order.size());
    std::vector<bool> accepting(order.size());
    for (size_t i = 0; i < order.size(); ++i)
        accepting[i] = a.is_accepting(order[i].first) && b.is_accepting(order[i].second);
    return Nfa(a.alphabet(), static_cast<int>(order.size()), std::move(initials),
               std::move(accepting), std::move(edges));
}

// A minimum-length accepted word, or nullopt when the language is empty.
// Layered BFS expanding letters in alphabet order (separator last) makes
// the result the lexicographically least among the shortest.
inline std::optional<Word> nfa_shortest_accepted(const Nfa& a) {
    std::string letters = a.edge_letters();
    std::vector<bool> visited(static_cast<size_t>(a.num_states()), false);
    struct Parent {
        char letter;
        State prev;
    };
    std::vector<Parent> parent(static_cast<size_t>(a.num_states()), {0, -1});
    auto backtrack = [&](State t) {
        Word out;
        while (parent[static_cast<size_t>(t)].prev != -1) {
            out.push_back(parent[static_cast<size_t>(t)].letter);
            t = parent[static_cast<size_t>(t)].prev;
        }
        std::reverse(out.begin(), out.end());
        return out;
    };
    std::vector<State> frontier;
    for (State s : a.epsilon_closure(a.initials())) {
        visited[static_cast<size_t>(s)] = true;
        frontier.push_back(s);
        if (a.is_accepting(s)) return Word{};
    }
    // Frontier states are kept in lexicographic order of their discovery
    // words; expanding states first and letters second preserves that
    // order layer by layer, so the first accepting hit is the
    // lexicographically least among the shortest accepted words.
    while (!frontier.empty()) {
        std::vector<State> next;
        for (State s : frontier) {
            for (char c : letters) {
                for (const NfaEdge& e : a.edges_from(s)) {
                    if (e.is_epsilon() || e.letter() != c) continue;
                    for (State t : a.epsilon_closure({e.dst})) {
                        if (visited[static_cast<size_t>(t)]) continue;
                        visited[static_cast<size_t>(t)] = true;
                        parent[static_cast<size_t>(t)] = {c, s};
                        if (a.is_accepting(t)) return backtrack(t);
                        next.push_back(t);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

inline bool nfa_nonempty(const Nfa& a) { return nfa_shortest_accepted(a).has_value(); }

}  // namespace omlearn
