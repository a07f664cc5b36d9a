#include "doctest.h"

#include <numeric>

#include "fixtures.hpp"
#include "omlearn/automata.hpp"
#include "omlearn/words.hpp"

using namespace omlearn;

namespace {

// Independent check: compare a generous finite unrolling of both words.
bool unrollings_agree(const OmegaWord& a, const OmegaWord& b) {
    size_t bound = a.prefix.size() + b.prefix.size() + a.period.size() * b.period.size() + 8;
    return a.unroll(bound) == b.unroll(bound);
}

// Two-state leading automaton: 'a' moves to the second state, which then
// absorbs everything; 'b' keeps the first state.
Dfa two_state_leading() {
    return Dfa(fixtures::ab(), 2, 0, {false, false}, {1, 0, 1, 1});
}

}  // namespace

TEST_CASE("alphabet validation") {
    CHECK_THROWS_AS(Alphabet{""}, std::invalid_argument);
    CHECK_THROWS_AS(Alphabet{"a$"}, std::invalid_argument);
    Alphabet sigma{"ba"};
    CHECK(sigma.letters() == "ab");  // ordered
    CHECK(sigma.index_of('b') == 1);
    CHECK(sigma.index_of('c') == -1);
}

TEST_CASE("omega word construction and rendering") {
    CHECK_THROWS_AS(OmegaWord("a", ""), std::invalid_argument);
    CHECK(OmegaWord("aba", "ba").str() == "aba$ba");
    CHECK(OmegaWord("", "b").str() == "$b");
    CHECK(parse_omega_word("aba$ba").prefix == "aba");
    CHECK(parse_omega_word("$b").period == "b");
    CHECK_THROWS_AS(parse_omega_word("ab"), std::invalid_argument);
    CHECK_THROWS_AS(parse_omega_word("ab$"), std::invalid_argument);
    CHECK_THROWS_AS(parse_omega_word("a$b$c"), std::invalid_argument);
}

TEST_CASE("omega_equal on known pairs") {
    CHECK(omega_equal(OmegaWord("aba", "ba"), OmegaWord("ab", "ab")));
    CHECK(omega_equal(OmegaWord("", "a"), OmegaWord("", "aa")));
    CHECK_FALSE(omega_equal(OmegaWord("", "ab"), OmegaWord("", "ba")));
}

TEST_CASE("omega_equal agrees with long unrollings") {
    auto lassos = fixtures::lassos_up_to(fixtures::ab(), 3, 3);
    for (const auto& a : lassos)
        for (const auto& b : lassos)
            CHECK(omega_equal(a, b) == unrollings_agree(a, b));
}

TEST_CASE("smallest_period on known words") {
    CHECK(smallest_period(OmegaWord("ab", "ab")) == "ab");
    CHECK(smallest_period(OmegaWord("aba", "ba")) == "ba");
    CHECK(smallest_period(OmegaWord("", "aaa")) == "a");
    CHECK(smallest_period(OmegaWord("", "abab")) == "ab");
    CHECK(smallest_period(OmegaWord("", "aab")) == "aab");
}

TEST_CASE("smallest_period is idempotent") {
    for (const auto& w : fixtures::lassos_up_to(fixtures::ab(), 0, 6)) {
        Word r = smallest_period(w);
        CHECK(smallest_period(OmegaWord("", r)) == r);
    }
}

TEST_CASE("shortest_form on known words") {
    auto sf = [](const char* u, const char* v) {
        auto [x, y] = shortest_form(OmegaWord(u, v));
        return x + kSeparator + y;
    };
    CHECK(sf("abab", "abab") == "$ab");
    CHECK(sf("aba", "ba") == "a$ba");
    CHECK(sf("", "a") == "$a");
}

TEST_CASE("shortest_form preserves the infinite word") {
    for (const auto& w : fixtures::lassos_up_to(fixtures::ab(), 6, 6)) {
        auto [x, y] = shortest_form(w);
        CHECK(omega_equal(w, OmegaWord(x, y)));
    }
}

TEST_CASE("rotate_form on known forms") {
    auto rot = [](const char* x, const char* y) {
        auto [nx, ny] = rotate_form(x, y);
        return nx + std::string(1, kSeparator) + ny;
    };
    CHECK(rot("", "ab") == "a$ba");
    CHECK(rot("", "a") == "$a");
    CHECK(rot("a", "ba") == "$ab");
}

TEST_CASE("rotations cycle back after one full period") {
    for (const auto& w : fixtures::lassos_up_to(fixtures::ab(), 3, 4)) {
        auto start = shortest_form(w);
        auto form = start;
        int n = static_cast<int>(smallest_period(w).size());
        for (int i = 0; i < n; ++i) form = rotate_form(form.first, form.second);
        CHECK(form == start);
        // every rotation still denotes the same word
        form = start;
        for (int i = 0; i < n; ++i) {
            form = rotate_form(form.first, form.second);
            CHECK(omega_equal(w, OmegaWord(form.first, form.second)));
        }
    }
}

TEST_CASE("normalize_decomposition examples") {
    SUBCASE("single-state leading automaton keeps the input") {
        Dfa m(fixtures::ab(), 1, 0, {false}, {0, 0});
        auto [x, y] = normalize_decomposition(m, OmegaWord("ba", "ba"));
        CHECK(x == "ba");
        CHECK(y == "ba");
    }
    SUBCASE("two-state leading automaton") {
        Dfa m = two_state_leading();
        auto [x, y] = normalize_decomposition(m, OmegaWord("", "ab"));
        CHECK(x == "ab");
        CHECK(y == "ab");
        auto [x2, y2] = normalize_decomposition(m, OmegaWord("a", "ba"));
        CHECK(x2 == "a");
        CHECK(y2 == "ba");
    }
}

TEST_CASE("normalize_decomposition loops and preserves the word") {
    Dfa m = two_state_leading();
    for (const auto& w : fixtures::lassos_up_to(fixtures::ab(), 3, 3)) {
        auto [x, y] = normalize_decomposition(m, w);
        CHECK(m.run(x + y) == m.run(x));
        CHECK(omega_equal(w, OmegaWord(x, y)));
    }
}

TEST_CASE("one-based subword helpers") {
    Word w = "abc";
    CHECK(subword(w, 1, 3) == "abc");
    CHECK(subword(w, 2, 3) == "bc");
    CHECK(subword(w, 3, 2).empty());
    CHECK(letter_at(w, 1) == 'a');
    CHECK_THROWS_AS(letter_at(w, 0), std::out_of_range);
    CHECK_THROWS_AS((void)subword(w, 0, 2), std::out_of_range);
}
