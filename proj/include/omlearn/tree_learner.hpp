#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "omlearn/learner_common.hpp"

namespace omlearn {

// A discrimination tree: internal nodes carry experiments, terminal nodes
// carry state-representative words. Sifting a word evaluates experiments
// from the root down and follows the child labeled with the outcome; in a
// K-ary tree the child may not exist yet, in which case a fresh terminal is
// created for the sifted word and reported as a new state.
template <typename Experiment>
class ClassificationTree {
public:
    ClassificationTree() { add_terminal(Word{}); }

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int terminal_count() const { return static_cast<int>(labels_.size()); }

    // Terminal labels in creation order; the empty word is always first.
    const std::vector<Word>& labels() const { return labels_; }

    struct SiftOutcome {
        Word label;
        bool created;
    };

    template <typename TeFn>
    SiftOutcome sift(const Word& w, TeFn&& te) {
        int cur = root_;
        while (!nodes_[static_cast<size_t>(cur)].terminal()) {
            EdgeLabel d = te(w, *nodes_[static_cast<size_t>(cur)].experiment);
            auto it = nodes_[static_cast<size_t>(cur)].children.find(d);
            if (it == nodes_[static_cast<size_t>(cur)].children.end()) {
                int fresh = add_terminal(w);
                nodes_[static_cast<size_t>(cur)].children.emplace(d, fresh);
                return {w, true};
            }
            cur = it->second;
        }
        return {nodes_[static_cast<size_t>(cur)].state, false};
    }

    // Replaces the terminal holding `split_label` by an internal node with
    // the given experiment whose children are the old terminal and a fresh
    // terminal labeled `new_label`, placed by their experiment outcomes.
    void split(const Word& split_label, const Experiment& experiment, const EdgeLabel& old_side,
               const EdgeLabel& new_side, const Word& new_label) {
        if (old_side == new_side)
            throw std::logic_error("split requires the experiment to separate the two words");
        if (terminal_of_.count(new_label))
            throw std::logic_error("split would duplicate a terminal label");
        int node = terminal_of_.at(split_label);
        terminal_of_.erase(split_label);
        int old_term = add_node(split_label, true);
        terminal_of_[split_label] = old_term;
        int new_term = add_terminal(new_label);
        nodes_[static_cast<size_t>(node)].state.clear();
        nodes_[static_cast<size_t>(node)].experiment = experiment;
        nodes_[static_cast<size_t>(node)].children = {{old_side, old_term}, {new_side, new_term}};
    }

    // The experiment at which the sift paths of two words diverge, if any.
    template <typename TeFn>
    std::optional<Experiment> separator(const Word& x, const Word& y, TeFn&& te) {
        int cur = root_;
        while (!nodes_[static_cast<size_t>(cur)].terminal()) {
            const Experiment& e = *nodes_[static_cast<size_t>(cur)].experiment;
            EdgeLabel dx = te(x, e);
            EdgeLabel dy = te(y, e);
            if (!(dx == dy)) return e;
            auto it = nodes_[static_cast<size_t>(cur)].children.find(dx);
            if (it == nodes_[static_cast<size_t>(cur)].children.end()) return std::nullopt;
            cur = it->second;
        }
        return std::nullopt;
    }

    // Structural invariant: every terminal's own label sifts back to it.
    template <typename TeFn>
    bool consistent(TeFn&& te) {
        for (const Word& label : labels_) {
            int cur = root_;
            while (!nodes_[static_cast<size_t>(cur)].terminal()) {
                EdgeLabel d = te(label, *nodes_[static_cast<size_t>(cur)].experiment);
                auto it = nodes_[static_cast<size_t>(cur)].children.find(d);
                if (it == nodes_[static_cast<size_t>(cur)].children.end()) return false;
                cur = it->second;
            }
            if (nodes_[static_cast<size_t>(cur)].state != label) return false;
        }
        return true;
    }

private:
    struct Node {
        Word state;
        std::optional<Experiment> experiment;
        std::map<EdgeLabel, int> children;

        bool terminal() const { return !experiment.has_value(); }
    };

    int add_node(Word label, bool) {
        nodes_.push_back(Node{std::move(label), std::nullopt, {}});
        return static_cast<int>(nodes_.size()) - 1;
    }

    int add_terminal(const Word& label) {
        if (terminal_of_.count(label)) throw std::logic_error("duplicate terminal label");
        int id = add_node(label, true);
        terminal_of_[label] = id;
        labels_.push_back(label);
        return id;
    }

    std::vector<Node> nodes_;
    std::vector<Word> labels_;
    std::map<Word, int> terminal_of_;
    int root_ = 0;
};

// Classification-tree FDFA learner. Maintains one leading tree plus one
// progress tree per leading state and rebuilds the conjectured family on
// demand; refinement splits exactly one terminal per counterexample.
class TreeLearner {
public:
    TreeLearner(FdfaTeacher& teacher, AcceptanceKind kind) : teacher_(teacher), kind_(kind) {}

    AcceptanceKind kind() const { return kind_; }

    const Fdfa& conjecture() {
        if (!cached_) rebuild();
        return *cached_;
    }

    const std::vector<Word>& leading_labels() {
        conjecture();
        return leading_labels_;
    }

    const std::vector<Word>& progress_labels(const Word& leading_label) {
        conjecture();
        return progress_labels_.at(leading_label);
    }

    // Nodes across the leading tree and all live progress trees.
    long space_units() {
        conjecture();
        long total = leading_tree_.node_count();
        for (auto& [label, tree] : progress_trees_)
            total += tree.node_count();
        return total;
    }

    int leading_tree_nodes() const { return leading_tree_.node_count(); }

    void refine(const Counterexample& ce) {
        const Fdfa& f = conjecture();
        if (!counterexample_valid(f, teacher_, ce))
            throw std::invalid_argument("counterexample rejected: " + ce.str());
        LeadingContext ctx{&f.leading, &leading_labels_};
        if (refine_leading_side(teacher_, ctx, ce)) {
            LeadingRefinement r = leading_breakpoint(teacher_, ctx, ce);
            EdgeLabel old_side = binary_label(te_leading(teacher_, r.split_label, r.experiment));
            EdgeLabel new_side = binary_label(te_leading(teacher_, r.new_label, r.experiment));
            leading_tree_.split(r.split_label, r.experiment, old_side, new_side, r.new_label);
            // The syntactic and recurrent classifiers depend on the leading
            // automaton, so their progress trees restart from scratch.
            if (kind_ != AcceptanceKind::periodic) progress_trees_.clear();
        } else {
            const Word& anchor = ctx.label_of(f.leading.run(ce.u));
            State anchor_state = f.leading.run(ce.u);
            ProgressRefinement r =
                progress_breakpoint(kind_, teacher_, ctx, anchor, f.progress_of(anchor_state),
                                    progress_labels_.at(anchor), ce);
            auto te = [&](const Word& w, const Word& e) {
                return te_progress(kind_, teacher_, ctx, anchor, w, e);
            };
            EdgeLabel old_side = te(r.split_label, r.experiment);
            EdgeLabel new_side = te(r.new_label, r.experiment);
            progress_trees_.at(anchor).split(r.split_label, r.experiment, old_side, new_side,
                                             r.new_label);
        }
        cached_.reset();
    }

    // Test hook: verifies the structural invariant of every tree against
    // fresh experiment evaluations.
    bool trees_consistent() {
        const Fdfa& f = conjecture();
        LeadingContext ctx{&f.leading, &leading_labels_};
        auto lead_te = [&](const Word& w, const LeadingExperiment& e) {
            return binary_label(te_leading(teacher_, w, e));
        };
        if (!leading_tree_.consistent(lead_te)) return false;
        for (auto& [anchor, tree] : progress_trees_) {
            auto prog_te = [&](const Word& w, const Word& e) {
                return te_progress(kind_, teacher_, ctx, anchor, w, e);
            };
            if (!tree.consistent(prog_te)) return false;
        }
        return true;
    }

    // Test hook: installs a progress tree state, used to reproduce worked
    // examples mid-run.
    ClassificationTree<Word>& progress_tree(const Word& leading_label) {
        return progress_trees_[leading_label];
    }

    // The leading experiment separating two state words, freshly evaluated.
    std::optional<LeadingExperiment> leading_separator(const Word& x, const Word& y) {
        auto te = [&](const Word& w, const LeadingExperiment& e) {
            return binary_label(te_leading(teacher_, w, e));
        };
        return leading_tree_.separator(x, y, te);
    }

private:
    void rebuild() {
        // Leading automaton first: sift every boundary word of every known
        // state; the leading tree is binary, so sifting never creates.
        auto lead_te = [&](const Word& w, const LeadingExperiment& e) {
            return binary_label(te_leading(teacher_, w, e));
        };
        leading_labels_ = leading_tree_.labels();
        const Alphabet& sigma = teacher_.ba_teacher().alphabet();
        std::map<Word, State> index;
        for (size_t i = 0; i < leading_labels_.size(); ++i)
            index[leading_labels_[i]] = static_cast<State>(i);
        int n = static_cast<int>(leading_labels_.size());
        std::vector<State> delta(static_cast<size_t>(n) * sigma.size());
        for (int i = 0; i < n; ++i)
            for (int li = 0; li < sigma.size(); ++li) {
                auto outcome = leading_tree_.sift(leading_labels_[static_cast<size_t>(i)] + sigma.letter(li), lead_te);
                delta[static_cast<size_t>(i) * sigma.size() + static_cast<size_t>(li)] =
                    index.at(outcome.label);
            }
        Dfa leading(sigma, n, index.at(Word{}), std::vector<bool>(static_cast<size_t>(n), false),
                    std::move(delta));

        LeadingContext ctx{&leading, &leading_labels_};
        progress_labels_.clear();
        std::vector<Dfa> progress;
        for (const Word& anchor : leading_labels_) {
            ClassificationTree<Word>& tree = progress_trees_[anchor];  // fresh when absent
            auto prog_te = [&](const Word& w, const Word& e) {
                return te_progress(kind_, teacher_, ctx, anchor, w, e);
            };
            // Sifting may create new terminals (K-ary trees); the loop keeps
            // going until the label list is saturated.
            std::map<Word, State> pindex;
            for (size_t i = 0; i < tree.labels().size(); ++i)
                pindex.emplace(tree.labels()[i], static_cast<State>(i));
            std::vector<std::vector<State>> rows;
            for (size_t i = 0; i < tree.labels().size(); ++i) {
                Word label = tree.labels()[i];
                std::vector<State> row(static_cast<size_t>(sigma.size()));
                for (int li = 0; li < sigma.size(); ++li) {
                    auto outcome = tree.sift(label + sigma.letter(li), prog_te);
                    if (outcome.created)
                        pindex.emplace(outcome.label, static_cast<State>(tree.labels().size()) - 1);
                    row[static_cast<size_t>(li)] = pindex.at(outcome.label);
                }
                rows.push_back(std::move(row));
            }
            int pn = static_cast<int>(rows.size());
            std::vector<State> pdelta;
            pdelta.reserve(static_cast<size_t>(pn) * sigma.size());
            for (const auto& row : rows)
                for (State s : row) pdelta.push_back(s);
            std::vector<bool> accepting =
                progress_accepting_set(kind_, teacher_, leading, anchor, tree.labels());
            progress.emplace_back(sigma, pn, 0, std::move(accepting), std::move(pdelta));
            progress_labels_[anchor] = tree.labels();
        }
        cached_.emplace(std::move(leading), std::move(progress), kind_);
    }

    FdfaTeacher& teacher_;
    AcceptanceKind kind_;
    ClassificationTree<LeadingExperiment> leading_tree_;
    std::map<Word, ClassificationTree<Word>> progress_trees_;
    std::map<Word, std::vector<Word>> progress_labels_;
    std::optional<Fdfa> cached_;
    std::vector<Word> leading_labels_;
};

}  // namespace omlearn
