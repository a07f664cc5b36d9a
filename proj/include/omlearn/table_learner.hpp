#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "omlearn/learner_common.hpp"

namespace omlearn {

// An observation table in the reduced discipline: core rows keep pairwise
// distinct entry vectors, the boundary holds every one-letter extension,
// and closing promotes any boundary row whose vector is new. Entries are
// recomputed from the experiment function on demand; the teacher-side
// membership cache keeps that cheap.
template <typename Experiment>
class ObservationTable {
public:
    ObservationTable() { core_.push_back(Word{}); }

    const std::vector<Word>& core() const { return core_; }
    const std::vector<Experiment>& columns() const { return columns_; }

    template <typename TeFn>
    std::vector<EdgeLabel> row_value(const Word& w, TeFn&& te) const {
        std::vector<EdgeLabel> value;
        value.reserve(columns_.size());
        for (const Experiment& e : columns_) value.push_back(te(w, e));
        return value;
    }

    // Promotes unmatched boundary rows into the core until every boundary
    // row's vector matches a core row.
    template <typename TeFn>
    void close(const Alphabet& sigma, TeFn&& te) {
        for (size_t i = 0; i < core_.size(); ++i) {
            for (char c : sigma.letters()) {
                Word w = core_[i] + c;
                if (find_core(w, te) == -1) core_.push_back(w);
            }
        }
    }

    // Index of the core row sharing w's vector, -1 if none.
    template <typename TeFn>
    int find_core(const Word& w, TeFn&& te) const {
        std::vector<EdgeLabel> value = row_value(w, te);
        for (size_t i = 0; i < core_.size(); ++i)
            if (row_value(core_[i], te) == value) return static_cast<int>(i);
        return -1;
    }

    template <typename TeFn>
    bool closed(const Alphabet& sigma, TeFn&& te) const {
        for (const Word& s : core_)
            for (char c : sigma.letters())
                if (find_core(s + c, te) == -1) return false;
        return true;
    }

    void add_column(const Experiment& e) {
        for (const Experiment& existing : columns_)
            if (existing == e) return;  // experiments are deduplicated
        columns_.push_back(e);
    }

    // Storage accounting: every core and boundary row stores its label plus
    // one entry per experiment column.
    long cells(const Alphabet& sigma) const {
        long rows = static_cast<long>(core_.size()) * (1 + sigma.size());
        return rows * static_cast<long>(columns_.size() + 1);
    }

private:
    std::vector<Word> core_;
    std::vector<Experiment> columns_;
};

// Observation-table FDFA learner: one leading table plus one progress table
// per leading state, sharing the refinement analysis with the tree learner.
// A discovered experiment lands as a fresh column in the owning table.
class TableLearner {
public:
    TableLearner(FdfaTeacher& teacher, AcceptanceKind kind) : teacher_(teacher), kind_(kind) {}

    AcceptanceKind kind() const { return kind_; }

    const Fdfa& conjecture() {
        if (!cached_) rebuild();
        return *cached_;
    }

    const std::vector<Word>& leading_labels() {
        conjecture();
        return leading_labels_;
    }

    long space_units() {
        conjecture();
        const Alphabet& sigma = teacher_.ba_teacher().alphabet();
        long total = leading_table_.cells(sigma);
        for (auto& [label, table] : progress_tables_) total += table.cells(sigma);
        return total;
    }

    void refine(const Counterexample& ce) {
        const Fdfa& f = conjecture();
        if (!counterexample_valid(f, teacher_, ce))
            throw std::invalid_argument("counterexample rejected: " + ce.str());
        LeadingContext ctx{&f.leading, &leading_labels_};
        if (refine_leading_side(teacher_, ctx, ce)) {
            LeadingRefinement r = leading_breakpoint(teacher_, ctx, ce);
            leading_table_.add_column(r.experiment);
            if (kind_ != AcceptanceKind::periodic) progress_tables_.clear();
        } else {
            const Word& anchor = ctx.label_of(f.leading.run(ce.u));
            State anchor_state = f.leading.run(ce.u);
            ProgressRefinement r =
                progress_breakpoint(kind_, teacher_, ctx, anchor, f.progress_of(anchor_state),
                                    progress_labels_.at(anchor), ce);
            progress_tables_.at(anchor).add_column(r.experiment);
        }
        cached_.reset();
    }

private:
    void rebuild() {
        const Alphabet& sigma = teacher_.ba_teacher().alphabet();
        auto lead_te = [&](const Word& w, const LeadingExperiment& e) {
            return binary_label(te_leading(teacher_, w, e));
        };
        leading_table_.close(sigma, lead_te);
        leading_labels_ = leading_table_.core();
        int n = static_cast<int>(leading_labels_.size());
        std::vector<State> delta(static_cast<size_t>(n) * sigma.size());
        for (int i = 0; i < n; ++i)
            for (int li = 0; li < sigma.size(); ++li) {
                int target = leading_table_.find_core(leading_labels_[static_cast<size_t>(i)] + sigma.letter(li),
                                                      lead_te);
                if (target < 0) throw std::logic_error("leading table must be closed before assembly");
                delta[static_cast<size_t>(i) * sigma.size() + static_cast<size_t>(li)] = target;
            }
        Dfa leading(sigma, n, 0, std::vector<bool>(static_cast<size_t>(n), false), std::move(delta));

        LeadingContext ctx{&leading, &leading_labels_};
        progress_labels_.clear();
        std::vector<Dfa> progress;
        for (const Word& anchor : leading_labels_) {
            ObservationTable<Word>& table = progress_tables_[anchor];
            auto prog_te = [&](const Word& w, const Word& e) {
                return te_progress(kind_, teacher_, ctx, anchor, w, e);
            };
            table.close(sigma, prog_te);
            const std::vector<Word>& labels = table.core();
            int pn = static_cast<int>(labels.size());
            std::vector<State> pdelta(static_cast<size_t>(pn) * sigma.size());
            for (int i = 0; i < pn; ++i)
                for (int li = 0; li < sigma.size(); ++li) {
                    int target = table.find_core(labels[static_cast<size_t>(i)] + sigma.letter(li), prog_te);
                    if (target < 0) throw std::logic_error("progress table must be closed before assembly");
                    pdelta[static_cast<size_t>(i) * sigma.size() + static_cast<size_t>(li)] = target;
                }
            std::vector<bool> accepting =
                progress_accepting_set(kind_, teacher_, leading, anchor, labels);
            progress.emplace_back(sigma, pn, 0, std::move(accepting), std::move(pdelta));
            progress_labels_[anchor] = labels;
        }
        cached_.emplace(std::move(leading), std::move(progress), kind_);
    }

    FdfaTeacher& teacher_;
    AcceptanceKind kind_;
    ObservationTable<LeadingExperiment> leading_table_;
    std::map<Word, ObservationTable<Word>> progress_tables_;
    std::map<Word, std::vector<Word>> progress_labels_;
    std::optional<Fdfa> cached_;
    std::vector<Word> leading_labels_;
};

}  // namespace omlearn
