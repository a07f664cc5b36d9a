#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "omlearn/complement.hpp"
#include "omlearn/decompositions.hpp"
#include "omlearn/fdfa.hpp"
#include "omlearn/translate.hpp"

namespace omlearn {

// Raised when the over-approximation teacher cannot extract a valid
// counterexample from a spurious negative witness.
class TeacherAbort : public std::runtime_error {
public:
    explicit TeacherAbort(OmegaWord w)
        : std::runtime_error("teacher could not derive a counterexample from " + w.str()),
          word(std::move(w)) {}

    OmegaWord word;
};

struct BaTeacherStats {
    long membership_queries = 0;
    long membership_queries_unique = 0;
    long equivalence_queries = 0;
    double equivalence_seconds = 0.0;
};

// Answers membership and equivalence queries from a known target automaton.
// Membership answers are cached under the canonical shortest form of the
// queried word, so queries about equal infinite words are deduplicated; the
// counters report both raw and deduplicated totals.
class BaTeacher {
public:
    explicit BaTeacher(BuchiAutomaton target)
        : target_(target.epsilon_free() ? std::move(target) : epsilon_removal(target)) {}

    const BuchiAutomaton& target() const { return target_; }
    const Alphabet& alphabet() const { return target_.alphabet(); }
    const BaTeacherStats& stats() const { return stats_; }

    bool member(const OmegaWord& w) {
        ++stats_.membership_queries;
        std::string key = canonical_key(w);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        ++stats_.membership_queries_unique;
        bool answer = ba_lasso_member(target_, w);
        cache_.emplace(std::move(key), answer);
        return answer;
    }

    // nullopt means the conjecture recognizes the target language.
    std::optional<OmegaWord> equivalence(const BuchiAutomaton& conjecture) {
        ++stats_.equivalence_queries;
        auto start = std::chrono::steady_clock::now();
        auto witness = ba_equivalence(conjecture, target_);
        stats_.equivalence_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return witness;
    }

private:
    BuchiAutomaton target_;
    BaTeacherStats stats_;
    std::map<std::string, bool> cache_;
};

// A counterexample handed to the FDFA learner. A positive one is a
// decomposition of a word of the target language that the conjecture fails
// to accept; a negative one is accepted by the conjecture but lies outside
// the language. Either way the leading automaton loops: M(uv) = M(u).
struct Counterexample {
    enum class Polarity { positive, negative };

    Polarity polarity;
    Word u;
    Word v;

    bool positive() const { return polarity == Polarity::positive; }
    std::string str() const {
        return std::string(positive() ? "+" : "-") + "(" + u + kSeparator + v + ")";
    }
};

struct FdfaTeacherStats {
    long equivalence_queries = 0;
};

// Outcome of an FDFA equivalence query: either the conjectured automaton
// was accepted, or a counterexample for the learner. The size of the
// translated automaton is reported either way for tracing.
struct FdfaEquivalenceOutcome {
    std::optional<BuchiAutomaton> accepted;
    std::optional<Counterexample> counterexample;
    int ba_states = 0;
    int ba_transitions = 0;
};

// Turns the Buchi-level teacher into an FDFA-level one: membership queries
// are forwarded, and equivalence queries translate the family into a Buchi
// automaton (under or over approximation), query the teacher, and convert
// any returned omega-word back into a decomposition the learner can use.
class FdfaTeacher {
public:
    FdfaTeacher(BaTeacher& teacher, Approximation approximation)
        : teacher_(teacher), approximation_(approximation) {}

    BaTeacher& ba_teacher() { return teacher_; }
    Approximation approximation() const { return approximation_; }
    const FdfaTeacherStats& stats() const { return stats_; }

    // Mem(u, v): there is no omega-word with an empty period, so v = epsilon
    // is answered negatively by convention.
    bool member(const Word& u, const Word& v) {
        if (v.empty()) return false;
        return teacher_.member(OmegaWord(u, v));
    }

    FdfaEquivalenceOutcome equivalence(const Fdfa& f) {
        ++stats_.equivalence_queries;
        BuchiAutomaton conjecture = fdfa_to_buchi(f, approximation_);
        FdfaEquivalenceOutcome outcome;
        outcome.ba_states = conjecture.num_states();
        outcome.ba_transitions = conjecture.transition_count();
        auto witness = teacher_.equivalence(conjecture);
        if (!witness) {
            outcome.accepted = std::move(conjecture);
            return outcome;
        }
        outcome.counterexample = analyze(f, *witness);
        return outcome;
    }

    // Counterexample analysis. The witness is first normalized so the
    // leading automaton loops on its period; the derived decomposition is
    // validated against the definition before being returned.
    Counterexample analyze(const Fdfa& f, const OmegaWord& witness) {
        bool in_language = teacher_.member(witness);
        bool in_family = up_member(f, witness);
        Counterexample ce = approximation_ == Approximation::under
                                ? analyze_under(f, witness, in_language, in_family)
                                : analyze_over(f, witness, in_language, in_family);
        if (f.leading.run(ce.u + ce.v) != f.leading.run(ce.u))
            throw std::logic_error("counterexample must keep the leading automaton looping");
        return ce;
    }

    // The decomposition promised for every word of the over-approximation:
    // a prefix u' and period segments v_1 ... v_n, each looping the leading
    // automaton at M(u') and accepted by the progress automaton there.
    std::pair<Word, std::vector<Word>> decompose_over(const Fdfa& f, const OmegaWord& w) {
        Nfa decs = all_decompositions_nfa(f.alphabet(), w);
        struct Best {
            Word text;
            State leading;
            State accepting;
        };
        std::optional<Best> best;
        for (State u = 0; u < f.leading.num_states(); ++u) {
            const Dfa& progress = f.progress_of(u);
            for (State p = 0; p < progress.num_states(); ++p) {
                if (!progress.is_accepting(p)) continue;
                Dfa part = dfa_minimize(detail::raw_period_product(f, u, p, Approximation::over));
                Nfa candidate = pair_language_nfa(f, u, part);
                auto word = nfa_shortest_accepted(product_intersection(decs, candidate));
                if (word && (!best || word->size() < best->text.size())) best = Best{*word, u, p};
            }
        }
        if (!best) throw std::logic_error("word is not accepted by the over-approximation");
        auto cut = best->text.find(kSeparator);
        Word prefix = best->text.substr(0, cut);
        Word period = best->text.substr(cut + 1);
        Dfa part = dfa_minimize(
            detail::raw_period_product(f, best->leading, best->accepting, Approximation::over));
        return {prefix, segment_period(part, period)};
    }

private:
    // L(M anchored at q0 to u) $ (L(part))+ as an automaton for one pair.
    Nfa pair_language_nfa(const Fdfa& f, State u, const Dfa& part) {
        const Dfa& m = f.leading;
        int total = m.num_states() + part.num_states();
        std::vector<std::vector<NfaEdge>> edges(static_cast<size_t>(total));
        std::vector<bool> accepting(static_cast<size_t>(total), false);
        for (State q = 0; q < m.num_states(); ++q)
            for (char c : m.alphabet().letters())
                edges[static_cast<size_t>(q)].push_back({c, m.step(q, c)});
        int base = m.num_states();
        for (State q = 0; q < part.num_states(); ++q) {
            accepting[static_cast<size_t>(base + q)] = part.is_accepting(q);
            for (char c : part.alphabet().letters())
                edges[static_cast<size_t>(base + q)].push_back({c, base + part.step(q, c)});
            if (part.is_accepting(q))
                edges[static_cast<size_t>(base + q)].push_back({NfaEdge::kEpsilon, base + part.initial()});
        }
        edges[static_cast<size_t>(u)].push_back({kSeparator, base + part.initial()});
        return Nfa(m.alphabet(), total, {m.initial()}, std::move(accepting), std::move(edges));
    }

    // Splits a word of (L(part))+ into consecutive pieces of L(part),
    // preferring the shortest next piece at every cut.
    std::vector<Word> segment_period(const Dfa& part, const Word& period) {
        int n = static_cast<int>(period.size());
        std::vector<bool> ok(static_cast<size_t>(n + 1), false);
        ok[static_cast<size_t>(n)] = true;
        for (int i = n - 1; i >= 0; --i) {
            State s = part.initial();
            for (int j = i + 1; j <= n; ++j) {
                s = part.step(s, period[static_cast<size_t>(j - 1)]);
                if (part.is_accepting(s) && ok[static_cast<size_t>(j)]) {
                    ok[static_cast<size_t>(i)] = true;
                    break;
                }
            }
        }
        if (!ok[0]) throw std::logic_error("period does not factor over the pair language");
        std::vector<Word> segments;
        int i = 0;
        while (i < n) {
            State s = part.initial();
            int next = -1;
            for (int j = i + 1; j <= n; ++j) {
                s = part.step(s, period[static_cast<size_t>(j - 1)]);
                if (part.is_accepting(s) && ok[static_cast<size_t>(j)]) {
                    next = j;
                    break;
                }
            }
            if (next == -1) throw std::logic_error("period does not factor over the pair language");
            segments.push_back(period.substr(static_cast<size_t>(i), static_cast<size_t>(next - i)));
            i = next;
        }
        return segments;
    }

    // Positive counterexample from the rejected-decompositions automaton:
    // the shortest u'$v' that decomposes the witness with the leading loop
    // intact but is not accepted by the family.
    Counterexample positive_from_rejected(const Fdfa& f, const OmegaWord& witness) {
        Nfa decs = all_decompositions_nfa(f.alphabet(), witness);
        auto word = nfa_shortest_accepted(product_intersection(decs, rejected_decompositions_nfa(f)));
        if (!word)
            throw std::logic_error("expected a rejected decomposition of a positive witness");
        auto cut = word->find(kSeparator);
        return {Counterexample::Polarity::positive, word->substr(0, cut), word->substr(cut + 1)};
    }

    // Negative counterexample: an accepted decomposition of the witness. The
    // witness decomposition itself is preferred when the family accepts it
    // (after normalization); otherwise the shortest accepted one is taken.
    Counterexample analyze_negative(const Fdfa& f, const OmegaWord& witness) {
        auto [x, y] = normalize_decomposition(f.leading, witness);
        if (accepts(f, x, y)) return {Counterexample::Polarity::negative, x, y};
        Nfa decs = all_decompositions_nfa(f.alphabet(), witness);
        auto word = nfa_shortest_accepted(product_intersection(decs, accepted_decompositions_nfa(f)));
        if (!word)
            throw std::logic_error("expected an accepted decomposition of a negative witness");
        auto cut = word->find(kSeparator);
        return {Counterexample::Polarity::negative, word->substr(0, cut), word->substr(cut + 1)};
    }

    // Spurious positive witness: the family accepts some decomposition
    // (u0, v0) but the under-approximation misses the word, so some power
    // (u0, v0^k) must be rejected by the family; the least such power is a
    // positive counterexample.
    Counterexample analyze_spurious_positive(const Fdfa& f, const OmegaWord& witness) {
        auto [x, y] = normalize_decomposition(f.leading, witness);
        Word base_u = x, base_v = y;
        if (!accepts(f, base_u, base_v)) {
            Nfa decs = all_decompositions_nfa(f.alphabet(), witness);
            auto word =
                nfa_shortest_accepted(product_intersection(decs, accepted_decompositions_nfa(f)));
            if (!word)
                throw std::logic_error("spurious positive witness must have an accepted decomposition");
            auto cut = word->find(kSeparator);
            base_u = word->substr(0, cut);
            base_v = word->substr(cut + 1);
        }
        State mu = f.leading.run(base_u);
        int bound = f.progress_of(mu).num_states() * f.leading.num_states() + 1;
        Word power = base_v;
        for (int k = 1; k <= bound; ++k, power += base_v)
            if (!accepts(f, base_u, power)) return {Counterexample::Polarity::positive, base_u, power};
        throw std::logic_error("every period power is accepted although the under-approximation rejects");
    }

    Counterexample analyze_under(const Fdfa& f, const OmegaWord& witness, bool in_language,
                                 bool in_family) {
        if (in_language && !in_family) return positive_from_rejected(f, witness);
        if (!in_language) return analyze_negative(f, witness);
        return analyze_spurious_positive(f, witness);
    }

    Counterexample analyze_over(const Fdfa& f, const OmegaWord& witness, bool in_language,
                                bool in_family) {
        if (in_language) return positive_from_rejected(f, witness);
        if (in_family) return analyze_negative(f, witness);
        // Spurious negative: factor the witness over the over-approximation
        // and membership-test each segment; abort when all of them are in
        // the language.
        auto [prefix, segments] = decompose_over(f, witness);
        for (const Word& segment : segments)
            if (!teacher_.member(OmegaWord(prefix, segment)))
                return {Counterexample::Polarity::negative, prefix, segment};
        throw TeacherAbort(witness);
    }

    BaTeacher& teacher_;
    Approximation approximation_;
    FdfaTeacherStats stats_;
};

}  // namespace omlearn
