#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace omlearn {

// A finite word is a plain string of single-character letters.
using Word = std::string;

// Separator used in the textual "u$v" rendering of ultimately periodic
// words and as the marker letter of decomposition automata. It is never
// a member of an Alphabet.
inline constexpr char kSeparator = '$';

// An ordered, duplicate-free set of single-character letters.
class Alphabet {
public:
    explicit Alphabet(std::string_view letters) : letters_(letters) {
        std::sort(letters_.begin(), letters_.end());
        letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
        if (letters_.empty())
            throw std::invalid_argument("alphabet must contain at least one letter");
        if (letters_.find(kSeparator) != std::string::npos)
            throw std::invalid_argument("alphabet must not contain the separator letter");
    }

    int size() const { return static_cast<int>(letters_.size()); }
    const std::string& letters() const { return letters_; }
    char letter(int index) const { return letters_.at(static_cast<size_t>(index)); }

    bool contains(char c) const { return letters_.find(c) != std::string::npos; }

    // Dense index of a letter, -1 if absent.
    int index_of(char c) const {
        auto pos = letters_.find(c);
        return pos == std::string::npos ? -1 : static_cast<int>(pos);
    }

    bool contains_word(const Word& w) const {
        return std::all_of(w.begin(), w.end(), [&](char c) { return contains(c); });
    }

    bool operator==(const Alphabet&) const = default;

private:
    std::string letters_;
};

// 1-based subword w[j..k], empty when j > k. All breakpoint arithmetic in
// the learners uses this accessor so that index computations stay aligned
// with the usual 1-based notation for runs.
inline Word subword(const Word& w, int j, int k) {
    if (j > k) return Word{};
    if (j < 1 || k > static_cast<int>(w.size()))
        throw std::out_of_range("subword index out of range");
    return w.substr(static_cast<size_t>(j - 1), static_cast<size_t>(k - j + 1));
}

// 1-based single letter w[i].
inline char letter_at(const Word& w, int i) {
    if (i < 1 || i > static_cast<int>(w.size()))
        throw std::out_of_range("letter index out of range");
    return w[static_cast<size_t>(i - 1)];
}

// An ultimately periodic word u v v v ... carried as the decomposition
// (u, v) with v nonempty. Equality of the infinite words is omega_equal;
// field-wise equality of two decompositions is deliberately not exposed
// as operator==.
struct OmegaWord {
    Word prefix;
    Word period;

    OmegaWord(Word u, Word v) : prefix(std::move(u)), period(std::move(v)) {
        if (period.empty())
            throw std::invalid_argument("omega word requires a nonempty period");
    }

    // 0-based letter of the unrolled infinite word.
    char at(size_t i) const {
        if (i < prefix.size()) return prefix[i];
        return period[(i - prefix.size()) % period.size()];
    }

    // First n letters of the unrolling.
    Word unroll(size_t n) const {
        Word out;
        out.reserve(n);
        for (size_t i = 0; i < n; ++i) out.push_back(at(i));
        return out;
    }

    std::string str() const { return prefix + kSeparator + period; }
};

// Letterwise equality of the two infinite unrollings. Comparing the first
// |u| + |u'| + lcm(|v|, |v'|) letters is sound and complete for
// ultimately periodic words.
inline bool omega_equal(const OmegaWord& a, const OmegaWord& b) {
    size_t bound = a.prefix.size() + b.prefix.size() +
                   std::lcm(a.period.size(), b.period.size());
    for (size_t i = 0; i < bound; ++i)
        if (a.at(i) != b.at(i)) return false;
    return true;
}

// The shortest r with r a prefix of w.period and r^omega = period^omega.
// Scans candidate lengths from 1 upward; the first k that tiles the
// period exactly is the answer.
inline Word smallest_period(const OmegaWord& w) {
    const Word& v = w.period;
    int n = static_cast<int>(v.size());
    for (int k = 1; k <= n; ++k) {
        if (n % k != 0) continue;
        bool tiles = true;
        for (int i = k; i < n && tiles; ++i)
            if (v[static_cast<size_t>(i)] != v[static_cast<size_t>(i % k)]) tiles = false;
        if (tiles) return v.substr(0, static_cast<size_t>(k));
    }
    return v;  // unreachable: k == n always tiles
}

// Rewrites (u, v) as (x, y) where y is the smallest period and x is the
// shortest prefix of u with u = x y^i. Strips trailing copies of y off u.
inline std::pair<Word, Word> shortest_form(const OmegaWord& w) {
    Word y = smallest_period(w);
    Word x = w.prefix;
    while (x.size() >= y.size() && x.compare(x.size() - y.size(), y.size(), y) == 0)
        x.erase(x.size() - y.size());
    return {x, y};
}

// One-step rotation of a shortest form: moves the first period letter onto
// the prefix, rotates the period, and re-strips so the result is again a
// shortest form. Applying it |y| times cycles back to the start.
inline std::pair<Word, Word> rotate_form(const Word& x, const Word& y) {
    if (y.empty()) throw std::invalid_argument("rotate_form requires a nonempty period");
    Word u = x + y.front();
    Word rotated = y.substr(1) + y.front();
    return shortest_form(OmegaWord(std::move(u), std::move(rotated)));
}

// Canonical "x$y" rendering of the shortest form; used as a cache key for
// membership answers so that equal infinite words share one entry.
inline std::string canonical_key(const OmegaWord& w) {
    auto [x, y] = shortest_form(w);
    return x + kSeparator + y;
}

// Parses "u$v" (empty prefix renders as "$v").
inline OmegaWord parse_omega_word(std::string_view text) {
    auto pos = text.find(kSeparator);
    if (pos == std::string_view::npos)
        throw std::invalid_argument("omega word must contain a separator: " + std::string(text));
    Word u{text.substr(0, pos)};
    Word v{text.substr(pos + 1)};
    if (v.empty() || v.find(kSeparator) != std::string::npos)
        throw std::invalid_argument("malformed omega word: " + std::string(text));
    return OmegaWord(std::move(u), std::move(v));
}

}  // namespace omlearn
