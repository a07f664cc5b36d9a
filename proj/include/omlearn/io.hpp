#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omlearn/buchi.hpp"
#include "omlearn/fdfa.hpp"

namespace omlearn {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string line = trim(text.substr(pos, nl - pos));
        if (!line.empty()) lines.push_back(std::move(line));
        pos = nl + 1;
    }
    return lines;
}

// One automaton block in the RABIT-style format: an initial-state line
// "[id]", transition lines "letter,[src]->[dst]", accepting lines "[id]".
struct RawBlock {
    std::string initial;
    struct RawTransition {
        char letter;
        std::string src;
        std::string dst;
    };
    std::vector<RawTransition> transitions;
    std::vector<std::string> accepting;
};

inline std::string parse_bracketed(const std::string& line, const char* context) {
    if (line.size() < 2 || line.front() != '[' || line.back() != ']')
        throw ParseError(std::string("expected a [state] line in ") + context + ": " + line);
    std::string name = line.substr(1, line.size() - 2);
    if (name.empty() || name.find('[') != std::string::npos || name.find(']') != std::string::npos)
        throw ParseError(std::string("malformed state name in ") + context + ": " + line);
    return name;
}

inline RawBlock parse_block(const std::vector<std::string>& lines, const char* context) {
    if (lines.empty()) throw ParseError(std::string("empty automaton block in ") + context);
    RawBlock block;
    block.initial = parse_bracketed(lines.front(), context);
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        size_t arrow = line.find("->");
        if (arrow == std::string::npos) {
            block.accepting.push_back(parse_bracketed(line, context));
            continue;
        }
        size_t comma = line.find(',');
        if (comma == std::string::npos || comma > arrow)
            throw ParseError(std::string("malformed transition in ") + context + ": " + line);
        std::string letter = trim(line.substr(0, comma));
        if (letter.size() != 1)
            throw ParseError(std::string("transition letters must be single characters in ") +
                             context + ": " + line);
        if (letter[0] == kSeparator)
            throw ParseError(std::string("the separator letter is reserved in ") + context);
        block.transitions.push_back({letter[0],
                                     parse_bracketed(trim(line.substr(comma + 1, arrow - comma - 1)), context),
                                     parse_bracketed(trim(line.substr(arrow + 2)), context)});
    }
    return block;
}

inline Alphabet block_alphabet(const RawBlock& block, const std::optional<Alphabet>& requested,
                               const char* context) {
    std::string letters;
    for (const auto& t : block.transitions) letters.push_back(t.letter);
    if (requested) {
        for (char c : letters)
            if (!requested->contains(c))
                throw ParseError(std::string("transition letter outside the requested alphabet in ") +
                                 context);
        return *requested;
    }
    if (letters.empty())
        throw ParseError(std::string("cannot infer an alphabet from a transition-free block in ") +
                         context + "; pass one explicitly");
    return Alphabet(letters);
}

}  // namespace detail

// Parses the textual Buchi automaton format: first line the initial state,
// then transitions, then accepting states. The alphabet is inferred from
// the transition letters unless one is supplied.
inline BuchiAutomaton parse_ba(std::string_view text, std::optional<Alphabet> alphabet = {}) {
    detail::RawBlock block = detail::parse_block(detail::lines_of(text), "automaton");
    Alphabet sigma = detail::block_alphabet(block, alphabet, "automaton");
    std::map<std::string, State> ids;
    auto intern = [&](const std::string& name) {
        return ids.emplace(name, static_cast<State>(ids.size())).first->second;
    };
    State initial = intern(block.initial);
    std::vector<std::vector<NfaEdge>> edges;
    for (const auto& t : block.transitions) {
        State src = intern(t.src);
        State dst = intern(t.dst);
        if (static_cast<size_t>(src) >= edges.size() || static_cast<size_t>(dst) >= edges.size())
            edges.resize(ids.size());
        edges[static_cast<size_t>(src)].push_back({t.letter, dst});
    }
    edges.resize(ids.size());
    std::vector<bool> accepting(ids.size(), false);
    for (const std::string& name : block.accepting) {
        auto it = ids.find(name);
        if (it == ids.end())
            throw ParseError("accepting state never mentioned in a transition: [" + name + "]");
        accepting[static_cast<size_t>(it->second)] = true;
    }
    return BuchiAutomaton(std::move(sigma), static_cast<int>(ids.size()), {initial},
                          std::move(accepting), std::move(edges));
}

// Parses the same format as a DFA: exactly one target per (state, letter)
// pair is allowed and missing transitions are completed with a rejecting
// sink, keeping the automaton total.
inline Dfa parse_dfa_ba(std::string_view text, std::optional<Alphabet> alphabet = {}) {
    detail::RawBlock block = detail::parse_block(detail::lines_of(text), "dfa");
    Alphabet sigma = detail::block_alphabet(block, alphabet, "dfa");
    DfaBuilder builder(sigma);
    std::map<std::string, State> ids;
    auto intern = [&](const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        State s = builder.add_state(false);
        ids.emplace(name, s);
        return s;
    };
    builder.set_initial(intern(block.initial));
    for (const auto& t : block.transitions) {
        State src = intern(t.src);
        State dst = intern(t.dst);
        try {
            builder.add_transition(src, t.letter, dst);
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("dfa block: ") + e.what());
        }
    }
    for (const std::string& name : block.accepting) {
        auto it = ids.find(name);
        if (it == ids.end())
            throw ParseError("accepting state never mentioned in a transition: [" + name + "]");
        builder.set_accepting(it->second);
    }
    return builder.build();
}

namespace detail {

inline void write_block(std::ostringstream& out, const BuchiAutomaton& b) {
    State initial;
    if (b.initials().size() == 1) {
        initial = b.initials().front();
        out << '[' << initial << "]\n";
        for (State s = 0; s < b.num_states(); ++s)
            for (const NfaEdge& e : b.edges_from(s)) {
                if (e.is_epsilon())
                    throw std::invalid_argument("cannot serialize epsilon transitions");
                out << e.letter() << ",[" << s << "]->[" << e.dst << "]\n";
            }
    } else {
        // The format carries a single initial state; a fresh one covering
        // all initials preserves the language.
        initial = b.num_states();
        out << '[' << initial << "]\n";
        for (State s = 0; s < b.num_states(); ++s)
            for (const NfaEdge& e : b.edges_from(s)) {
                if (e.is_epsilon())
                    throw std::invalid_argument("cannot serialize epsilon transitions");
                out << e.letter() << ",[" << s << "]->[" << e.dst << "]\n";
            }
        for (State s : b.initials())
            for (const NfaEdge& e : b.edges_from(s))
                out << e.letter() << ",[" << initial << "]->[" << e.dst << "]\n";
    }
    for (State s = 0; s < b.num_states(); ++s)
        if (b.is_accepting(s)) out << '[' << s << "]\n";
}

}  // namespace detail

inline std::string write_ba(const BuchiAutomaton& b) {
    std::ostringstream out;
    detail::write_block(out, b);
    return out.str();
}

inline std::string write_dfa_ba(const Dfa& a, bool with_accepting = true) {
    std::ostringstream out;
    out << '[' << a.initial() << "]\n";
    for (State s = 0; s < a.num_states(); ++s)
        for (char c : a.alphabet().letters()) out << c << ",[" << s << "]->[" << a.step(s, c) << "]\n";
    if (with_accepting)
        for (State s = 0; s < a.num_states(); ++s)
            if (a.is_accepting(s)) out << '[' << s << "]\n";
    return out.str();
}

// Family format: a kind header, a [leading] section holding a DFA block
// without accepting lines, and one [progress <state>] section per leading
// state.
inline std::string write_fdfa(const Fdfa& f) {
    std::ostringstream out;
    out << "kind: " << to_string(f.kind) << "\n";
    out << "[leading]\n" << write_dfa_ba(f.leading, false);
    for (State u = 0; u < f.leading.num_states(); ++u)
        out << "[progress " << u << "]\n" << write_dfa_ba(f.progress_of(u), true);
    return out.str();
}

inline Fdfa parse_fdfa(std::string_view text) {
    std::vector<std::string> lines = detail::lines_of(text);
    if (lines.empty() || lines.front().rfind("kind:", 0) != 0)
        throw ParseError("fdfa file must start with a kind header");
    std::string kind_name = detail::trim(lines.front().substr(5));
    AcceptanceKind kind;
    if (kind_name == "periodic")
        kind = AcceptanceKind::periodic;
    else if (kind_name == "syntactic")
        kind = AcceptanceKind::syntactic;
    else if (kind_name == "recurrent")
        kind = AcceptanceKind::recurrent;
    else
        throw ParseError("unknown fdfa kind: " + kind_name);

    struct Section {
        std::string header;
        std::vector<std::string> body;
    };
    std::vector<Section> sections;
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line == "[leading]" || line.rfind("[progress", 0) == 0) {
            sections.push_back({line, {}});
            continue;
        }
        if (sections.empty()) throw ParseError("content before the [leading] section");
        sections.back().body.push_back(line);
    }
    if (sections.empty() || sections.front().header != "[leading]")
        throw ParseError("fdfa file must contain a [leading] section first");

    // Alphabet: union of the letters used anywhere in the file.
    std::string letters;
    for (const Section& s : sections) {
        detail::RawBlock block = detail::parse_block(s.body, "fdfa");
        for (const auto& t : block.transitions) letters.push_back(t.letter);
    }
    if (letters.empty()) throw ParseError("fdfa file uses no letters; alphabet cannot be inferred");
    Alphabet sigma{letters};

    detail::RawBlock lead_block = detail::parse_block(sections.front().body, "leading");
    if (!lead_block.accepting.empty())
        throw ParseError("the leading section must not declare accepting states");
    Dfa leading = parse_dfa_ba([&] {
        std::ostringstream joined;
        for (const std::string& l : sections.front().body) joined << l << "\n";
        return joined.str();
    }(), sigma);

    std::map<int, Dfa> progress_by_state;
    for (size_t i = 1; i < sections.size(); ++i) {
        const std::string& header = sections[i].header;
        std::string inner = detail::trim(header.substr(9, header.size() - 10));
        int state = -1;
        try {
            state = std::stoi(inner);
        } catch (...) {
            throw ParseError("malformed progress header: " + header);
        }
        if (state < 0 || state >= leading.num_states())
            throw ParseError("progress section for an unknown leading state: " + header);
        if (progress_by_state.count(state))
            throw ParseError("duplicate progress section: " + header);
        std::ostringstream joined;
        for (const std::string& l : sections[i].body) joined << l << "\n";
        progress_by_state.emplace(state, parse_dfa_ba(joined.str(), sigma));
    }
    if (static_cast<int>(progress_by_state.size()) != leading.num_states())
        throw ParseError("fdfa file needs exactly one progress section per leading state");
    std::vector<Dfa> progress;
    for (State u = 0; u < leading.num_states(); ++u) progress.push_back(progress_by_state.at(u));
    return Fdfa(std::move(leading), std::move(progress), kind);
}

// Graphviz rendering, one overload per automaton type.
inline std::string to_dot(const Dfa& a, const std::string& name = "dfa") {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (State s = 0; s < a.num_states(); ++s)
        out << "  q" << s << " [shape=" << (a.is_accepting(s) ? "doublecircle" : "circle") << "];\n";
    out << "  __start -> q" << a.initial() << ";\n";
    for (State s = 0; s < a.num_states(); ++s)
        for (char c : a.alphabet().letters())
            out << "  q" << s << " -> q" << a.step(s, c) << " [label=\"" << c << "\"];\n";
    out << "}\n";
    return out.str();
}

namespace detail {

template <typename Automaton>
std::string edges_to_dot(const Automaton& a, const std::string& name,
                         const std::vector<State>& initials) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=LR;\n";
    for (size_t i = 0; i < initials.size(); ++i) out << "  __start" << i << " [shape=point];\n";
    for (State s = 0; s < a.num_states(); ++s)
        out << "  q" << s << " [shape=" << (a.is_accepting(s) ? "doublecircle" : "circle") << "];\n";
    for (size_t i = 0; i < initials.size(); ++i)
        out << "  __start" << i << " -> q" << initials[i] << ";\n";
    for (State s = 0; s < a.num_states(); ++s)
        for (const NfaEdge& e : a.edges_from(s)) {
            out << "  q" << s << " -> q" << e.dst << " [label=\"";
            if (e.is_epsilon())
                out << "eps";
            else
                out << e.letter();
            out << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

}  // namespace detail

inline std::string to_dot(const Nfa& a, const std::string& name = "nfa") {
    return detail::edges_to_dot(a, name, a.initials());
}

inline std::string to_dot(const BuchiAutomaton& a, const std::string& name = "buchi") {
    return detail::edges_to_dot(a, name, a.initials());
}

}  // namespace omlearn
