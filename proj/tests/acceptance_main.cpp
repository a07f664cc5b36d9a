// Acceptance suite: exercises the project's gate checks end to end and
// prints one pass/fail line per criterion. Exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "omlearn/generate.hpp"
#include "omlearn/io.hpp"
#include "omlearn/learn.hpp"

using namespace omlearn;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_cli_path;

void report(int number, const std::string& summary, bool ok, const std::string& detail = "") {
    std::printf("criterion %d: %s - %s%s%s\n", number, ok ? "PASS" : "FAIL", summary.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++g_failures;
}

Alphabet ab() { return Alphabet{"ab"}; }

std::vector<Word> words_up_to(int max_len) {
    std::vector<Word> out{Word{}};
    size_t begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        size_t end = out.size();
        for (size_t i = begin; i < end; ++i)
            for (char c : {'a', 'b'}) out.push_back(out[i] + c);
        begin = end;
    }
    return out;
}

// The worked-example family: a one-state leading automaton and a progress
// automaton accepting words whose run ends in its second state.
Fdfa demo_fdfa() {
    Dfa leading(ab(), 1, 0, {false}, {0, 0});
    Dfa progress(ab(), 2, 0, {false, true}, {1, 1, 1, 0});
    return Fdfa(leading, {progress}, AcceptanceKind::periodic);
}

BuchiAutomaton ba_single_letter_forever() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(false);
    State qa = b.add_state(true);
    State qb = b.add_state(true);
    b.add_initial(q0);
    b.add_transition(q0, 'a', qa);
    b.add_transition(q0, 'b', qb);
    b.add_transition(qa, 'a', qa);
    b.add_transition(qb, 'b', qb);
    return b.build();
}

BuchiAutomaton ba_alternating() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(true);
    State q1 = b.add_state(false);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q1);
    b.add_transition(q1, 'b', q0);
    return b.build();
}

BuchiAutomaton ba_eventually_only_b() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(false);
    State q1 = b.add_state(true);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q0);
    b.add_transition(q0, 'b', q0);
    b.add_transition(q0, 'b', q1);
    b.add_transition(q1, 'b', q1);
    return b.build();
}

BuchiAutomaton ba_universal() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(true);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q0);
    b.add_transition(q0, 'b', q0);
    return b.build();
}

BuchiAutomaton ba_empty_language() {
    BuchiBuilder b(ab());
    State q0 = b.add_state(false);
    b.add_initial(q0);
    b.add_transition(q0, 'a', q0);
    b.add_transition(q0, 'b', q0);
    return b.build();
}

// ---------------------------------------------------------------- 1 -----

void criterion_1() {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    auto expect = [&](bool condition, const char* what) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    };

    Fdfa f = demo_fdfa();
    expect(accepts(f, "ba", "ba"), "family must accept (ba,ba)");
    expect(!accepts(f, "bab", "ab"), "family must reject (bab,ab)");
    expect(up_member(f, OmegaWord("", "b")), "b-forever must be in the family language");

    BuchiAutomaton under = fdfa_to_buchi(f, Approximation::under);
    BuchiAutomaton over = fdfa_to_buchi(f, Approximation::over);
    expect(!ba_lasso_member(under, OmegaWord("", "b")), "under-approximation must reject b-forever");
    expect(ba_lasso_member(over, OmegaWord("", "b")), "over-approximation must accept b-forever");

    BaTeacher teacher(ba_single_letter_forever());
    FdfaTeacher fdfa_teacher(teacher, Approximation::under);
    Counterexample spurious = fdfa_teacher.analyze(f, OmegaWord("b", "b"));
    expect(spurious.positive() && spurious.u == "b" && spurious.v == "bb",
           "spurious positive analysis must yield (b,bb)");
    Counterexample negative = fdfa_teacher.analyze(f, OmegaWord("ba", "ba"));
    expect(!negative.positive() && negative.u == "ba" && negative.v == "ba",
           "negative analysis must yield (ba,ba)");

    // Refinement of the worked conjecture by the counterexample (ab, b).
    BaTeacher teacher2(ba_single_letter_forever());
    FdfaTeacher fdfa_teacher2(teacher2, Approximation::under);
    TreeLearner learner(fdfa_teacher2, AcceptanceKind::periodic);
    learner.progress_tree("").split("", Word{}, {Word{}, 'F'}, {Word{}, 'T'}, "a");
    learner.refine({Counterexample::Polarity::negative, "ab", "b"});
    const Dfa& m = learner.conjecture().leading;
    State s0 = m.initial();
    State s1 = m.step(s0, 'a');
    expect(m.num_states() == 2, "refined leading automaton must have 2 states");
    expect(s1 != s0, "letter a must leave the initial state");
    expect(m.step(s0, 'b') == s0, "letter b must keep the initial state");
    expect(m.step(s1, 'a') == s1 && m.step(s1, 'b') == s1, "second state must absorb");

    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(seconds < 1.0, "worked examples must finish within one second");
    report(1, "worked-example suite", ok, detail);
}

// ---------------------------------------------------------------- 2 -----

void criterion_2() {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    std::vector<std::pair<std::string, BuchiAutomaton>> targets{
        {"one-letter-forever", ba_single_letter_forever()},
        {"alternating", ba_alternating()},
        {"eventually-only-b", ba_eventually_only_b()},
        {"universal", ba_universal()},
        {"empty", ba_empty_language()},
    };
    int aborts = 0;
    for (const auto& [name, target] : targets) {
        for (LearnerBackend backend : {LearnerBackend::tree, LearnerBackend::table}) {
            for (AcceptanceKind kind : {AcceptanceKind::periodic, AcceptanceKind::syntactic,
                                        AcceptanceKind::recurrent}) {
                for (Approximation approx : {Approximation::under, Approximation::over}) {
                    BaTeacher teacher(target);
                    LearnOptions options;
                    options.acceptance = kind;
                    options.approximation = approx;
                    options.deadline =
                        std::chrono::steady_clock::now() + std::chrono::seconds(20);
                    try {
                        LearnResult result = learn_buchi(teacher, backend, options);
                        if (ba_equivalence(result.automaton, target)) {
                            ok = false;
                            detail = name + "/" + to_string(backend) + "/" + to_string(kind) +
                                     "/" + to_string(approx) + " learned a wrong language";
                        }
                    } catch (const TeacherAbort&) {
                        if (approx == Approximation::under) {
                            ok = false;
                            detail = name + " under-approximation must not abort";
                        } else {
                            ++aborts;  // documented over-approximation outcome
                        }
                    } catch (const std::exception& e) {
                        ok = false;
                        detail = name + "/" + to_string(backend) + "/" + to_string(kind) + "/" +
                                 to_string(approx) + " failed: " + e.what();
                    }
                }
            }
        }
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= 30.0) {
        ok = false;
        detail = "end-to-end matrix took " + std::to_string(seconds) + "s";
    }
    std::ostringstream note;
    note << "60 runs, " << aborts << " over-approximation aborts, " << seconds << "s";
    report(2, "end-to-end learning matrix", ok, ok ? note.str() : detail);
}

// ---------------------------------------------------------------- 3 -----

void criterion_3() {
    bool ok = true;
    long violations = 0;
    std::vector<OmegaWord> lassos;
    for (const Word& u : words_up_to(3))
        for (const Word& v : words_up_to(3))
            if (!v.empty()) lassos.emplace_back(u, v);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Fdfa f = random_fdfa(seed, ab(), 3, 3);
        BuchiAutomaton under = fdfa_to_buchi(f, Approximation::under);
        BuchiAutomaton over = fdfa_to_buchi(f, Approximation::over);
        for (const OmegaWord& w : lassos) {
            bool in_under = ba_lasso_member(under, w);
            bool in_family = up_member(f, w);
            bool in_over = ba_lasso_member(over, w);
            if ((in_under && !in_family) || (in_family && !in_over)) ++violations;
        }
    }
    if (violations != 0) ok = false;
    report(3, "sandwich property on 100 random families", ok,
           std::to_string(violations) + " violations over " + std::to_string(100 * lassos.size()) +
               " checks");
}

// ---------------------------------------------------------------- 4 -----

void criterion_4() {
    bool ok = true;
    long mismatches = 0;
    long bound_breaks = 0;
    const int max_len = 10;
    for (const Word& u : words_up_to(3)) {
        for (const Word& v : words_up_to(3)) {
            if (v.empty()) continue;
            OmegaWord w(u, v);
            Nfa d = all_decompositions_nfa(ab(), w);
            if (d.num_states() >
                static_cast<int>(v.size()) * (static_cast<int>(u.size()) + 2 * static_cast<int>(v.size()) + 2))
                ++bound_breaks;
            // the expected decomposition set, from independent enumeration
            std::set<Word> expected;
            for (const Word& u2 : words_up_to(max_len - 2))
                for (const Word& v2 : words_up_to(max_len - 1)) {
                    if (v2.empty()) continue;
                    if (static_cast<int>(u2.size() + v2.size()) + 1 > max_len) continue;
                    if (omega_equal(OmegaWord(u2, v2), w)) expected.insert(u2 + kSeparator + v2);
                }
            // walk every word over alphabet + separator up to the length
            // bound, running the automaton incrementally
            struct Frame {
                Word word;
                std::vector<State> states;
            };
            std::vector<Frame> stack{{Word{}, d.epsilon_closure(d.initials())}};
            std::string letters = std::string("ab") + kSeparator;
            while (!stack.empty()) {
                Frame frame = std::move(stack.back());
                stack.pop_back();
                bool accepted = false;
                for (State s : frame.states)
                    if (d.is_accepting(s)) accepted = true;
                if (accepted != (expected.count(frame.word) > 0)) ++mismatches;
                if (static_cast<int>(frame.word.size()) < max_len)
                    for (char c : letters) {
                        std::vector<State> next = d.step_set(frame.states, c);
                        if (next.empty() && !expected.count(frame.word + c)) continue;
                        stack.push_back({frame.word + c, std::move(next)});
                    }
            }
        }
    }
    if (mismatches != 0 || bound_breaks != 0) ok = false;
    report(4, "decomposition-automaton oracle equivalence", ok,
           std::to_string(mismatches) + " language mismatches, " + std::to_string(bound_breaks) +
               " size-bound violations");
}

// ---------------------------------------------------------------- 5/6 ---

struct CorpusOutcome {
    bool solved = false;
    LearnerStats stats;
};

CorpusOutcome run_one(const BuchiAutomaton& target, LearnerBackend backend, AcceptanceKind kind,
                      bool reuse) {
    CorpusOutcome outcome;
    BaTeacher teacher(target);
    LearnOptions options;
    options.acceptance = kind;
    options.counterexample_reuse = reuse;
    options.deadline = std::chrono::steady_clock::now() + std::chrono::seconds(10);
    try {
        LearnResult result = learn_buchi(teacher, backend, options);
        outcome.solved = true;
        outcome.stats = std::move(result.stats);
    } catch (const std::exception&) {
        outcome.solved = false;
    }
    return outcome;
}

void criteria_5_and_6() {
    std::vector<BuchiAutomaton> corpus;
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        corpus.push_back(random_buchi(300 + seed, ab(), 3, 2.0, 1));

    bool ok5 = true;
    std::string detail5;
    long accounting_runs = 0;
    long solved_off = 0, solved_on = 0, attempted = 0;

    // the fixed end-to-end matrix with reuse off: exact query accounting
    std::vector<BuchiAutomaton> fixed{ba_single_letter_forever(), ba_alternating(),
                                      ba_eventually_only_b(), ba_universal(), ba_empty_language()};
    auto check_run = [&](const LearnerStats& stats) {
        ++accounting_runs;
        if (stats.equivalence_queries != stats.refinements + 1) {
            ok5 = false;
            detail5 = "equivalence queries must equal refinements plus one";
        }
        std::pair<int, int> previous{1, 1};
        for (const auto& measure : stats.measure_trace) {
            if (!(measure > previous)) {
                ok5 = false;
                detail5 = "refinement measure must strictly increase";
            }
            previous = measure;
        }
    };
    for (const BuchiAutomaton& target : fixed)
        for (LearnerBackend backend : {LearnerBackend::tree, LearnerBackend::table})
            for (AcceptanceKind kind : {AcceptanceKind::periodic, AcceptanceKind::syntactic,
                                        AcceptanceKind::recurrent}) {
                CorpusOutcome outcome = run_one(target, backend, kind, false);
                if (!outcome.solved) {
                    ok5 = false;
                    detail5 = "fixed-target run failed with reuse off";
                    continue;
                }
                check_run(outcome.stats);
            }

    // the random corpus: accounting plus the reuse comparison
    std::vector<std::vector<CorpusOutcome>> off_outcomes;
    for (const BuchiAutomaton& target : corpus) {
        std::vector<CorpusOutcome> per_kind;
        for (AcceptanceKind kind :
             {AcceptanceKind::periodic, AcceptanceKind::syntactic, AcceptanceKind::recurrent}) {
            ++attempted;
            CorpusOutcome off = run_one(target, LearnerBackend::tree, kind, false);
            if (off.solved) {
                ++solved_off;
                check_run(off.stats);
            }
            CorpusOutcome on = run_one(target, LearnerBackend::tree, kind, true);
            if (on.solved) ++solved_on;
            if (off.solved && on.solved &&
                on.stats.equivalence_queries > off.stats.equivalence_queries) {
                ok5 = false;
                detail5 = "reuse must not increase equivalence queries";
            }
            per_kind.push_back(std::move(off));
        }
        off_outcomes.push_back(std::move(per_kind));
    }
    if (solved_on < solved_off) {
        ok5 = false;
        detail5 = "reuse must not lower the solved count";
    }
    if (solved_off * 100 < attempted * 85) {
        ok5 = false;
        detail5 = "too few corpus runs completed (" + std::to_string(solved_off) + "/" +
                  std::to_string(attempted) + ")";
    }
    std::ostringstream note5;
    note5 << accounting_runs << " accounted runs, corpus solved " << solved_off << "/" << attempted
          << " off, " << solved_on << " on";
    report(5, "progress measure and query accounting", ok5, ok5 ? note5.str() : detail5);

    // criterion 6: table storage dominates tree storage per corpus run
    bool ok6 = true;
    std::string detail6;
    long comparisons = 0;
    for (size_t t = 0; t < corpus.size(); ++t) {
        std::vector<AcceptanceKind> kinds{AcceptanceKind::periodic, AcceptanceKind::syntactic,
                                          AcceptanceKind::recurrent};
        for (size_t k = 0; k < kinds.size(); ++k) {
            const CorpusOutcome& tree_outcome = off_outcomes[t][k];
            if (!tree_outcome.solved) continue;
            CorpusOutcome table_outcome = run_one(corpus[t], LearnerBackend::table, kinds[k], false);
            if (!table_outcome.solved) continue;
            ++comparisons;
            if (table_outcome.stats.space_units < tree_outcome.stats.space_units) {
                ok6 = false;
                detail6 = "table storage fell below tree storage on a corpus run";
            }
        }
    }
    if (comparisons == 0) {
        ok6 = false;
        detail6 = "no comparable corpus runs";
    }
    report(6, "table-versus-tree storage", ok6,
           ok6 ? std::to_string(comparisons) + " comparisons" : detail6);
}

// ---------------------------------------------------------------- 7 -----

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void criterion_7() {
    bool ok = true;
    std::string detail;
    if (g_cli_path.empty()) {
        report(7, "bench report schema and reproducibility", false, "cli path not supplied");
        return;
    }
    fs::path dir = fs::temp_directory_path() / "omlearn-acceptance";
    fs::create_directories(dir);
    fs::path r1 = dir / "report1.txt";
    fs::path r2 = dir / "report2.txt";
    fs::path timed = dir / "report_timed.txt";
    auto bench = [&](const fs::path& out, bool omit_times) {
        std::ostringstream cmd;
        cmd << g_cli_path << " bench --random 6 --seed 5 --states 3 --density 2.0 --timeout 8"
            << (omit_times ? " --omit-times" : "") << " --jobs 2 --out " << out;
        return std::system(cmd.str().c_str());
    };
    if (bench(r1, true) != 0 || bench(r2, true) != 0 || bench(timed, false) != 0) {
        ok = false;
        detail = "bench invocation failed";
    } else {
        std::string first = slurp(r1);
        if (first != slurp(r2)) {
            ok = false;
            detail = "same seed must produce byte-identical reports";
        }
        for (const char* key :
             {"#Unsolved", "#Aborts", "#St.", "#Tr.", "#MQ", "#EQ", "tree-periodic-under",
              "table-recurrent-over"}) {
            if (first.find(key) == std::string::npos) {
                ok = false;
                detail = std::string("report is missing the metric ") + key;
            }
        }
        std::string with_times = slurp(timed);
        if (with_times.find("Time_eq(s)") == std::string::npos ||
            with_times.find("Time_total(s)") == std::string::npos) {
            ok = false;
            detail = "timed report must carry the time metrics";
        }
    }
    // convert and member round through the command line on the worked family
    fs::path family = dir / "demo.fdfa";
    {
        std::ofstream out(family);
        out << write_fdfa(demo_fdfa());
    }
    auto run_capture = [&](const std::string& args, const fs::path& capture) {
        std::ostringstream cmd;
        cmd << g_cli_path << ' ' << args << " > " << capture;
        return std::system(cmd.str().c_str());
    };
    fs::path under_ba = dir / "under.ba";
    fs::path over_ba = dir / "over.ba";
    fs::path answer = dir / "answer.txt";
    if (std::system((g_cli_path + " convert --in " + family.string() + " --approx under --out " +
                     under_ba.string())
                        .c_str()) != 0 ||
        std::system((g_cli_path + " convert --in " + family.string() + " --approx over --out " +
                     over_ba.string())
                        .c_str()) != 0) {
        ok = false;
        detail = "convert invocation failed";
    } else {
        if (run_capture("member --target " + under_ba.string() + " '$b'", answer) != 0 ||
            slurp(answer).find("false") != 0) {
            ok = false;
            detail = "under-approximation member check must print false for $b";
        }
        if (run_capture("member --target " + over_ba.string() + " '$b'", answer) != 0 ||
            slurp(answer).find("true") != 0) {
            ok = false;
            detail = "over-approximation member check must print true for $b";
        }
    }
    report(7, "bench report schema and reproducibility", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];
    auto start = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criteria_5_and_6();
    criterion_7();
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("acceptance: %s (%d failing criteria, %.1fs)\n", g_failures == 0 ? "PASS" : "FAIL",
                g_failures, seconds);
    return g_failures == 0 ? 0 : 1;
}
