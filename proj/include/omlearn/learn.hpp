#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "omlearn/oracle.hpp"
#include "omlearn/table_learner.hpp"
#include "omlearn/tree_learner.hpp"

namespace omlearn {

enum class LearnerBackend { tree, table };

inline const char* to_string(LearnerBackend b) {
    return b == LearnerBackend::tree ? "tree" : "table";
}

class LearnTimeout : public std::runtime_error {
public:
    LearnTimeout() : std::runtime_error("learning exceeded its deadline") {}
};

struct LearnOptions {
    AcceptanceKind acceptance = AcceptanceKind::periodic;
    Approximation approximation = Approximation::under;
    bool counterexample_reuse = true;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct LearnerStats {
    long membership_queries = 0;
    long membership_queries_unique = 0;
    long equivalence_queries = 0;
    long refinements = 0;
    int ba_states = 0;
    int ba_transitions = 0;
    int leading_states = 0;
    int progress_states_total = 0;
    long space_units = 0;
    double time_equivalence_seconds = 0.0;
    double time_total_seconds = 0.0;
    std::vector<int> ba_size_trace;                      // one entry per equivalence query
    std::vector<std::pair<int, int>> measure_trace;      // (|M|, sum |A^u|) after each refinement
};

struct LearnResult {
    BuchiAutomaton automaton;
    LearnerStats stats;
};

namespace detail {

inline void check_deadline(const LearnOptions& options) {
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
        throw LearnTimeout();
}

}  // namespace detail

// The query loop: conjecture, ask, refine; with counterexample reuse the
// same decomposition keeps refining until the conjecture is no longer
// inconsistent with it, saving equivalence queries.
template <typename Learner>
LearnResult run_learning(Learner& learner, FdfaTeacher& teacher, const LearnOptions& options) {
    auto started = std::chrono::steady_clock::now();
    BaTeacherStats before = teacher.ba_teacher().stats();
    LearnerStats stats;
    auto record_measure = [&] {
        const Fdfa& f = learner.conjecture();
        stats.measure_trace.emplace_back(f.leading.num_states(), f.progress_state_total());
    };
    for (;;) {
        detail::check_deadline(options);
        FdfaEquivalenceOutcome outcome = teacher.equivalence(learner.conjecture());
        stats.ba_size_trace.push_back(outcome.ba_states);
        if (outcome.accepted) {
            const Fdfa& f = learner.conjecture();
            BaTeacherStats after = teacher.ba_teacher().stats();
            stats.membership_queries = after.membership_queries - before.membership_queries;
            stats.membership_queries_unique =
                after.membership_queries_unique - before.membership_queries_unique;
            stats.equivalence_queries = after.equivalence_queries - before.equivalence_queries;
            stats.ba_states = outcome.accepted->num_states();
            stats.ba_transitions = outcome.accepted->transition_count();
            stats.leading_states = f.leading.num_states();
            stats.progress_states_total = f.progress_state_total();
            stats.space_units = learner.space_units();
            stats.time_equivalence_seconds =
                after.equivalence_seconds - before.equivalence_seconds;
            stats.time_total_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            return {std::move(*outcome.accepted), std::move(stats)};
        }
        Counterexample ce = *outcome.counterexample;
        learner.refine(ce);
        ++stats.refinements;
        record_measure();
        while (options.counterexample_reuse) {
            detail::check_deadline(options);
            if (!counterexample_valid(learner.conjecture(), teacher, ce)) break;
            learner.refine(ce);
            ++stats.refinements;
            record_measure();
        }
    }
}

inline LearnResult learn_buchi(BaTeacher& teacher, LearnerBackend backend,
                               const LearnOptions& options) {
    FdfaTeacher fdfa_teacher(teacher, options.approximation);
    if (backend == LearnerBackend::tree) {
        TreeLearner learner(fdfa_teacher, options.acceptance);
        return run_learning(learner, fdfa_teacher, options);
    }
    TableLearner learner(fdfa_teacher, options.acceptance);
    return run_learning(learner, fdfa_teacher, options);
}

}  // namespace omlearn
