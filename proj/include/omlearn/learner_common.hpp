#pragma once

#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "omlearn/fdfa.hpp"
#include "omlearn/oracle.hpp"

namespace omlearn {

// A leading experiment (x, y) distinguishes prefixes by membership of the
// word u x y y y ...; y is always nonempty.
struct LeadingExperiment {
    Word x;
    Word y;

    bool operator==(const LeadingExperiment&) const = default;
    bool operator<(const LeadingExperiment& o) const {
        return std::tie(x, y) < std::tie(o.x, o.y);
    }
    std::string str() const { return "(" + x + "," + y + ")"; }
};

// Outcome of a tree experiment. Binary classifiers use tags 'T'/'F' with an
// empty state component; the syntactic classifier pairs the leading state
// reached by the tested word with one of 'A'/'B'/'C'.
struct EdgeLabel {
    Word state;
    char tag = 'F';

    bool operator==(const EdgeLabel&) const = default;
    bool operator<(const EdgeLabel& o) const { return std::tie(state, tag) < std::tie(o.state, o.tag); }
    std::string str() const { return state.empty() ? std::string(1, tag) : state + ":" + tag; }
};

inline EdgeLabel binary_label(bool value) { return {Word{}, value ? 'T' : 'F'}; }

// The current leading automaton together with a representative word per
// state; progress classification for the syntactic and recurrent kinds
// depends on it.
struct LeadingContext {
    const Dfa* automaton = nullptr;
    const std::vector<Word>* labels = nullptr;

    const Word& label_of(State s) const { return labels->at(static_cast<size_t>(s)); }
};

inline bool te_leading(FdfaTeacher& teacher, const Word& u, const LeadingExperiment& e) {
    return teacher.member(u + e.x, e.y);
}

inline EdgeLabel te_progress(AcceptanceKind kind, FdfaTeacher& teacher, const LeadingContext& ctx,
                             const Word& anchor, const Word& x, const Word& e) {
    Word xe = x + e;
    bool in_language = teacher.member(anchor, xe);  // false for xe = epsilon
    if (kind == AcceptanceKind::periodic) return binary_label(in_language);
    State anchor_state = ctx.automaton->run(anchor);
    bool loops = ctx.automaton->run_from(anchor_state, xe) == anchor_state;
    if (kind == AcceptanceKind::recurrent) return binary_label(loops && in_language);
    char tag = loops ? (in_language ? 'A' : 'B') : 'C';
    return {ctx.label_of(ctx.automaton->run(anchor + x)), tag};
}

// Accepting states of a progress automaton, determined by membership
// queries over the state representatives. The empty representative never
// enters the accepting set: there is no omega-word with an empty period.
inline std::vector<bool> progress_accepting_set(AcceptanceKind kind, FdfaTeacher& teacher,
                                                const Dfa& leading, const Word& anchor,
                                                const std::vector<Word>& progress_labels) {
    std::vector<bool> accepting(progress_labels.size(), false);
    State anchor_state = leading.run(anchor);
    for (size_t i = 0; i < progress_labels.size(); ++i) {
        const Word& v = progress_labels[i];
        if (v.empty()) continue;
        if (kind != AcceptanceKind::periodic &&
            leading.run_from(anchor_state, v) != anchor_state)
            continue;
        accepting[i] = teacher.member(anchor, v);
    }
    return accepting;
}

// Checks a counterexample against the current conjecture: the leading loop
// constraint must hold and the acceptance of the decomposition must
// disagree with language membership in the advertised direction.
inline bool counterexample_valid(const Fdfa& f, FdfaTeacher& teacher, const Counterexample& ce) {
    State mu = f.leading.run(ce.u);
    if (f.leading.run_from(mu, ce.v) != mu) return false;
    bool accepted = accepts(f, ce.u, ce.v);
    bool in_language = teacher.member(ce.u, ce.v);
    return ce.positive() ? (in_language && !accepted) : (!in_language && accepted);
}

// A refinement request produced by breakpoint analysis: the conjecture state
// labeled `split_label` has to be distinguished from the fresh word
// `new_label` by the discovered experiment.
struct LeadingRefinement {
    LeadingExperiment experiment;
    Word split_label;
    Word new_label;
};

struct ProgressRefinement {
    Word anchor;  // leading state owning the refined progress component
    Word experiment;
    Word split_label;
    Word new_label;
};

// Scans the run of the leading automaton over u for the first position
// where the state reached by the run and the one-letter extension of its
// predecessor are told apart by the remaining experiment. Comparing the
// two future children directly keeps the split well defined even for
// K-ary labels, whose leading-state component depends on the classified
// word itself; the endpoint values differ whenever the dispatch sent the
// counterexample here, so a breakpoint always exists.
inline LeadingRefinement leading_breakpoint(FdfaTeacher& teacher, const LeadingContext& ctx,
                                            const Counterexample& ce) {
    const Word& u = ce.u;
    int n = static_cast<int>(u.size());
    std::vector<Word> run_labels;
    run_labels.reserve(static_cast<size_t>(n) + 1);
    State s = ctx.automaton->initial();
    run_labels.push_back(ctx.label_of(s));
    for (int i = 1; i <= n; ++i) {
        s = ctx.automaton->step(s, letter_at(u, i));
        run_labels.push_back(ctx.label_of(s));
    }
    for (int j = 1; j <= n; ++j) {
        LeadingExperiment e{subword(u, j + 1, n), ce.v};
        Word extension = run_labels[static_cast<size_t>(j - 1)] + letter_at(u, j);
        bool at_state = te_leading(teacher, run_labels[static_cast<size_t>(j)], e);
        bool at_extension = te_leading(teacher, extension, e);
        if (at_state != at_extension) return {e, run_labels[static_cast<size_t>(j)], extension};
    }
    throw std::logic_error("no breakpoint in the leading run of a dispatched counterexample");
}

// The progress-side scan over the run of the anchored progress automaton.
inline ProgressRefinement progress_breakpoint(AcceptanceKind kind, FdfaTeacher& teacher,
                                              const LeadingContext& ctx, const Word& anchor,
                                              const Dfa& progress,
                                              const std::vector<Word>& progress_labels,
                                              const Counterexample& ce) {
    const Word& v = ce.v;
    int n = static_cast<int>(v.size());
    std::vector<Word> run_labels;
    run_labels.reserve(static_cast<size_t>(n) + 1);
    State s = progress.initial();
    run_labels.push_back(progress_labels.at(static_cast<size_t>(s)));
    for (int i = 1; i <= n; ++i) {
        s = progress.step(s, letter_at(v, i));
        run_labels.push_back(progress_labels.at(static_cast<size_t>(s)));
    }
    for (int j = 1; j <= n; ++j) {
        Word e = subword(v, j + 1, n);
        Word extension = run_labels[static_cast<size_t>(j - 1)] + letter_at(v, j);
        EdgeLabel at_state =
            te_progress(kind, teacher, ctx, anchor, run_labels[static_cast<size_t>(j)], e);
        EdgeLabel at_extension = te_progress(kind, teacher, ctx, anchor, extension, e);
        if (!(at_state == at_extension))
            return {anchor, e, run_labels[static_cast<size_t>(j)], extension};
    }
    throw std::logic_error("no breakpoint in the progress run of a dispatched counterexample");
}

// Refinement dispatch. For a negative counterexample the leading tree is
// refined when the anchored word stays in the language; the positive case
// is symmetric with the membership outcome flipped.
inline bool refine_leading_side(FdfaTeacher& teacher, const LeadingContext& ctx,
                                const Counterexample& ce) {
    const Word& anchor = ctx.label_of(ctx.automaton->run(ce.u));
    bool anchored_member = teacher.member(anchor, ce.v);
    return ce.positive() ? !anchored_member : anchored_member;
}

}  // namespace omlearn
