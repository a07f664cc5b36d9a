// Command-line driver: learn Buchi automata from a target automaton file,
// convert families to automata, answer membership and equivalence queries,
// and run benchmark matrices over automaton corpora.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "omlearn/generate.hpp"
#include "omlearn/io.hpp"
#include "omlearn/learn.hpp"

namespace {

using namespace omlearn;

constexpr int kExitSuccess = 0;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitTeacherAbort = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

AcceptanceKind parse_acceptance(const std::string& name) {
    if (name == "periodic") return AcceptanceKind::periodic;
    if (name == "syntactic") return AcceptanceKind::syntactic;
    if (name == "recurrent") return AcceptanceKind::recurrent;
    throw CLI::ValidationError("acceptance must be periodic, syntactic or recurrent");
}

Approximation parse_approximation(const std::string& name) {
    if (name == "under") return Approximation::under;
    if (name == "over") return Approximation::over;
    throw CLI::ValidationError("approx must be under or over");
}

LearnerBackend parse_backend(const std::string& name) {
    if (name == "tree") return LearnerBackend::tree;
    if (name == "table") return LearnerBackend::table;
    throw CLI::ValidationError("learner must be tree or table");
}

BuchiAutomaton load_target(const std::string& path, const std::string& alphabet_letters) {
    std::optional<Alphabet> alphabet;
    if (!alphabet_letters.empty()) alphabet = Alphabet(alphabet_letters);
    return parse_ba(read_file(path), alphabet);
}

std::string stats_text(const LearnerStats& stats, const std::string& status) {
    std::ostringstream out;
    out << "status = " << status << "\n";
    out << "states = " << stats.ba_states << "\n";
    out << "transitions = " << stats.ba_transitions << "\n";
    out << "mq = " << stats.membership_queries << "\n";
    out << "mq_unique = " << stats.membership_queries_unique << "\n";
    out << "eq = " << stats.equivalence_queries << "\n";
    out << "refinements = " << stats.refinements << "\n";
    out << "leading_states = " << stats.leading_states << "\n";
    out << "progress_states = " << stats.progress_states_total << "\n";
    out << "space_units = " << stats.space_units << "\n";
    out << "time_eq_s = " << stats.time_equivalence_seconds << "\n";
    out << "time_total_s = " << stats.time_total_seconds << "\n";
    out << "ba_size_trace =";
    for (int v : stats.ba_size_trace) out << ' ' << v;
    out << "\n";
    return out.str();
}

nlohmann::json stats_json(const LearnerStats& stats, const std::string& status) {
    nlohmann::json j;
    j["status"] = status;
    j["states"] = stats.ba_states;
    j["transitions"] = stats.ba_transitions;
    j["mq"] = stats.membership_queries;
    j["mq_unique"] = stats.membership_queries_unique;
    j["eq"] = stats.equivalence_queries;
    j["refinements"] = stats.refinements;
    j["leading_states"] = stats.leading_states;
    j["progress_states"] = stats.progress_states_total;
    j["space_units"] = stats.space_units;
    j["time_eq_s"] = stats.time_equivalence_seconds;
    j["time_total_s"] = stats.time_total_seconds;
    j["ba_size_trace"] = stats.ba_size_trace;
    return j;
}

struct BenchConfig {
    LearnerBackend backend;
    AcceptanceKind acceptance;
    Approximation approximation;

    std::string name() const {
        std::string out = to_string(backend);
        out += '-';
        out += to_string(acceptance);
        out += '-';
        out += to_string(approximation);
        return out;
    }
};

struct BenchCell {
    int solved = 0;
    int timeouts = 0;
    int aborts = 0;
    long states = 0;
    long transitions = 0;
    long mq = 0;
    long eq = 0;
    double time_eq = 0.0;
    double time_total = 0.0;
};

struct BenchTask {
    size_t target_index;
    size_t config_index;
};

int run_learn(const std::string& target_path, const std::string& alphabet, const std::string& learner,
              const std::string& acceptance, const std::string& approx, double timeout_s,
              bool no_reuse, const std::string& out_path, const std::string& stats_path,
              const std::string& dot_path) {
    BuchiAutomaton target = load_target(target_path, alphabet);
    BaTeacher teacher(std::move(target));
    LearnOptions options;
    options.acceptance = parse_acceptance(acceptance);
    options.approximation = parse_approximation(approx);
    options.counterexample_reuse = !no_reuse;
    if (timeout_s <= 0) throw CLI::ValidationError("timeout must be positive");
    options.deadline = std::chrono::steady_clock::now() +
                       std::chrono::milliseconds(static_cast<long>(timeout_s * 1000));
    LearnResult result = learn_buchi(teacher, parse_backend(learner), options);
    std::string ba_text = write_ba(result.automaton);
    if (out_path.empty())
        std::cout << ba_text;
    else
        write_file(out_path, ba_text);
    if (!stats_path.empty()) {
        write_file(stats_path, stats_text(result.stats, "ok"));
        write_file(stats_path + ".json", stats_json(result.stats, "ok").dump(2) + "\n");
    } else {
        std::cerr << stats_text(result.stats, "ok");
    }
    if (!dot_path.empty()) write_file(dot_path, to_dot(result.automaton, "learned"));
    return kExitSuccess;
}

int run_convert(const std::string& in_path, const std::string& approx, const std::string& out_path) {
    Fdfa f = parse_fdfa(read_file(in_path));
    BuchiAutomaton b = fdfa_to_buchi(f, parse_approximation(approx));
    std::string text = write_ba(b);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return kExitSuccess;
}

int run_member(const std::string& target_path, const std::string& alphabet, const std::string& word) {
    BuchiAutomaton target = load_target(target_path, alphabet);
    OmegaWord w = parse_omega_word(word);
    std::cout << (ba_lasso_member(target, w) ? "true" : "false") << "\n";
    return kExitSuccess;
}

int run_equiv(const std::string& left_path, const std::string& right_path,
              const std::string& alphabet) {
    std::string text_left = read_file(left_path);
    std::string text_right = read_file(right_path);
    std::optional<Alphabet> requested;
    if (!alphabet.empty()) requested = Alphabet(alphabet);
    BuchiAutomaton left = parse_ba(text_left, requested);
    BuchiAutomaton right = parse_ba(text_right, requested);
    if (!(left.alphabet() == right.alphabet())) {
        Alphabet joint(left.alphabet().letters() + right.alphabet().letters());
        left = left.with_alphabet(joint);
        right = right.with_alphabet(joint);
    }
    auto witness = ba_equivalence(left, right);
    if (witness)
        std::cout << witness->str() << "\n";
    else
        std::cout << "equal\n";
    return kExitSuccess;
}

int run_bench(const std::string& corpus_dir, int random_count, std::uint64_t seed, int states,
              double density, int accepting, double timeout_s, const std::string& out_path,
              bool omit_times, int jobs) {
    std::vector<std::pair<std::string, BuchiAutomaton>> targets;
    if (!corpus_dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
            if (entry.path().extension() == ".ba") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& path : files)
            targets.emplace_back(path.filename().string(), parse_ba(read_file(path.string())));
    } else {
        Alphabet sigma{"ab"};
        for (int i = 0; i < random_count; ++i) {
            std::ostringstream name;
            name << "random-" << seed << "-" << i;
            targets.emplace_back(name.str(),
                                 random_buchi(seed + static_cast<std::uint64_t>(i), sigma, states,
                                              density, accepting));
        }
    }

    std::vector<BenchConfig> configs;
    for (LearnerBackend backend : {LearnerBackend::tree, LearnerBackend::table})
        for (AcceptanceKind kind :
             {AcceptanceKind::periodic, AcceptanceKind::syntactic, AcceptanceKind::recurrent})
            for (Approximation approx : {Approximation::under, Approximation::over})
                configs.push_back({backend, kind, approx});

    struct Outcome {
        int status = 0;  // 0 solved, 1 timeout, 2 abort
        LearnerStats stats;
    };
    std::vector<Outcome> outcomes(targets.size() * configs.size());
    std::vector<BenchTask> tasks;
    for (size_t t = 0; t < targets.size(); ++t)
        for (size_t c = 0; c < configs.size(); ++c) tasks.push_back({t, c});

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t index = next.fetch_add(1);
            if (index >= tasks.size()) return;
            const BenchTask& task = tasks[index];
            const BenchConfig& config = configs[task.config_index];
            Outcome& outcome = outcomes[task.target_index * configs.size() + task.config_index];
            BaTeacher teacher(targets[task.target_index].second);
            LearnOptions options;
            options.acceptance = config.acceptance;
            options.approximation = config.approximation;
            options.deadline = std::chrono::steady_clock::now() +
                               std::chrono::milliseconds(static_cast<long>(timeout_s * 1000));
            try {
                LearnResult result = learn_buchi(teacher, config.backend, options);
                outcome.status = 0;
                outcome.stats = std::move(result.stats);
            } catch (const LearnTimeout&) {
                outcome.status = 1;
            } catch (const TeacherAbort&) {
                outcome.status = 2;
            } catch (const std::exception&) {
                outcome.status = 1;
            }
        }
    };
    int thread_count = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (thread_count < 1) thread_count = 1;
    std::vector<std::thread> pool;
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<BenchCell> cells(configs.size());
    for (size_t t = 0; t < targets.size(); ++t)
        for (size_t c = 0; c < configs.size(); ++c) {
            const Outcome& outcome = outcomes[t * configs.size() + c];
            BenchCell& cell = cells[c];
            if (outcome.status == 1) {
                ++cell.timeouts;
            } else if (outcome.status == 2) {
                ++cell.aborts;
            } else {
                ++cell.solved;
                cell.states += outcome.stats.ba_states;
                cell.transitions += outcome.stats.ba_transitions;
                cell.mq += outcome.stats.membership_queries;
                cell.eq += outcome.stats.equivalence_queries;
                cell.time_eq += outcome.stats.time_equivalence_seconds;
                cell.time_total += outcome.stats.time_total_seconds;
            }
        }

    std::ostringstream report;
    report << "targets = " << targets.size() << "\n";
    auto row = [&](const std::string& label, auto value_of) {
        report << label;
        for (size_t c = 0; c < configs.size(); ++c) report << '\t' << value_of(cells[c]);
        report << "\n";
    };
    report << "metric";
    for (const BenchConfig& config : configs) report << '\t' << config.name();
    report << "\n";
    row("#Unsolved", [](const BenchCell& c) { return c.timeouts + c.aborts; });
    row("#Aborts", [](const BenchCell& c) { return c.aborts; });
    row("#Solved", [](const BenchCell& c) { return c.solved; });
    row("#St.", [](const BenchCell& c) { return c.states; });
    row("#Tr.", [](const BenchCell& c) { return c.transitions; });
    row("#MQ", [](const BenchCell& c) { return c.mq; });
    row("#EQ", [](const BenchCell& c) { return c.eq; });
    if (!omit_times) {
        row("Time_eq(s)", [](const BenchCell& c) { return c.time_eq; });
        row("Time_total(s)", [](const BenchCell& c) { return c.time_total; });
    }
    if (out_path.empty())
        std::cout << report.str();
    else
        write_file(out_path, report.str());
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Buchi automaton learning via families of DFAs"};
    app.require_subcommand(1);

    auto* learn = app.add_subcommand("learn", "learn a Buchi automaton from a target automaton");
    std::string target_path, alphabet, learner = "tree", acceptance = "periodic", approx = "under";
    std::string out_path, stats_path, dot_path;
    double timeout_s = 600.0;
    bool no_reuse = false;
    learn->add_option("--target", target_path, "target automaton file")->required();
    learn->add_option("--alphabet", alphabet, "alphabet letters, e.g. ab");
    learn->add_option("--learner", learner, "tree|table");
    learn->add_option("--acceptance", acceptance, "periodic|syntactic|recurrent");
    learn->add_option("--approx", approx, "under|over");
    learn->add_option("--timeout", timeout_s, "timeout in seconds");
    learn->add_flag("--no-ce-reuse", no_reuse, "disable counterexample reuse");
    learn->add_option("--out", out_path, "write the learned automaton here");
    learn->add_option("--stats", stats_path, "write statistics here (plus a .json twin)");
    learn->add_option("--dot", dot_path, "write a DOT rendering of the learned automaton");

    auto* convert = app.add_subcommand("convert", "translate a family of DFAs into an automaton");
    std::string convert_in, convert_approx = "under", convert_out;
    convert->add_option("--in", convert_in, "family file")->required();
    convert->add_option("--approx", convert_approx, "under|over");
    convert->add_option("--out", convert_out, "output automaton file");

    auto* member = app.add_subcommand("member", "test an ultimately periodic word");
    std::string member_target, member_word, member_alphabet;
    member->add_option("--target", member_target, "automaton file")->required();
    member->add_option("word", member_word, "word as u$v")->required();
    member->add_option("--alphabet", member_alphabet, "alphabet letters");

    auto* equiv = app.add_subcommand("equiv", "compare two automata");
    std::string equiv_left, equiv_right, equiv_alphabet;
    equiv->add_option("left", equiv_left, "first automaton file")->required();
    equiv->add_option("right", equiv_right, "second automaton file")->required();
    equiv->add_option("--alphabet", equiv_alphabet, "alphabet letters");

    auto* bench = app.add_subcommand("bench", "run the learner matrix over a corpus");
    std::string bench_corpus, bench_out;
    int bench_random = 0, bench_states = 4, bench_accepting = 1, bench_jobs = 0;
    std::uint64_t bench_seed = 1;
    double bench_density = 2.5, bench_timeout = 10.0;
    bool bench_omit_times = false;
    bench->add_option("--corpus", bench_corpus, "directory of .ba files");
    bench->add_option("--random", bench_random, "generate this many random targets instead");
    bench->add_option("--seed", bench_seed, "seed for random targets");
    bench->add_option("--states", bench_states, "states per random target");
    bench->add_option("--density", bench_density, "outgoing edges per state in random targets");
    bench->add_option("--accepting", bench_accepting, "accepting states per random target");
    bench->add_option("--timeout", bench_timeout, "per-run timeout in seconds");
    bench->add_option("--out", bench_out, "write the report here");
    bench->add_flag("--omit-times", bench_omit_times, "leave wall-clock rows out of the report");
    bench->add_option("--jobs", bench_jobs, "worker threads (default: hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*learn)
            return run_learn(target_path, alphabet, learner, acceptance, approx, timeout_s, no_reuse,
                             out_path, stats_path, dot_path);
        if (*convert) return run_convert(convert_in, convert_approx, convert_out);
        if (*member) return run_member(member_target, member_alphabet, member_word);
        if (*equiv) return run_equiv(equiv_left, equiv_right, equiv_alphabet);
        if (*bench) {
            if (bench_corpus.empty() && bench_random <= 0)
                throw CLI::ValidationError("bench needs --corpus or --random");
            return run_bench(bench_corpus, bench_random, bench_seed, bench_states, bench_density,
                             bench_accepting, bench_timeout, bench_out, bench_omit_times,
                             bench_jobs);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitParse;
    } catch (const LearnTimeout& e) {
        std::cerr << e.what() << "\n";
        return kExitTimeout;
    } catch (const TeacherAbort& e) {
        std::cerr << "teacher abort: " << e.what() << "\n";
        return kExitTeacherAbort;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
