#include <doctest.h>

#include "jsw/regex.hpp"

using namespace jsw;
namespace r = jsw::re;

namespace {

// reference matcher: backtracking over the pattern tree, for cross-checks
bool ref_match(r::PatternPtr p, const std::vector<int>& w, size_t lo, size_t hi);

bool ref_match(r::PatternPtr p, const std::vector<int>& w, size_t lo, size_t hi) {
    switch (p->op) {
        case r::Pattern::Op::Empty: return false;
        case r::Pattern::Op::Epsilon: return lo == hi;
        case r::Pattern::Op::Chars:
            return hi == lo + 1 && p->chars.test(static_cast<size_t>(w[lo]));
        case r::Pattern::Op::Concat: {
            for (size_t mid = lo; mid <= hi; ++mid)
                if (ref_match(p->kids[0], w, lo, mid) && ref_match(p->kids[1], w, mid, hi))
                    return true;
            return false;
        }
        case r::Pattern::Op::Union: {
            for (auto* k : p->kids)
                if (ref_match(k, w, lo, hi)) return true;
            return false;
        }
        case r::Pattern::Op::Inter: {
            for (auto* k : p->kids)
                if (!ref_match(k, w, lo, hi)) return false;
            return true;
        }
        case r::Pattern::Op::Complement: return !ref_match(p->kids[0], w, lo, hi);
        case r::Pattern::Op::Star: {
            if (lo == hi) return true;
            for (size_t mid = lo + 1; mid <= hi; ++mid)
                if (ref_match(p->kids[0], w, lo, mid) && ref_match(p, w, mid, hi)) return true;
            return false;
        }
    }
    return false;
}

struct Rng {
    uint64_t state;
    uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    size_t below(size_t n) { return next() % n; }
};

r::PatternPtr random_pattern(Rng& rng, int depth) {
    if (depth == 0 || rng.below(4) == 0) {
        switch (rng.below(4)) {
            case 0: return r::epsilon();
            case 1: {
                r::SymSet s;
                s.set(static_cast<size_t>(r::symbol_of_codepoint('a' + rng.below(3))));
                return r::chars(s);
            }
            case 2: {
                r::SymSet s;
                s.set(static_cast<size_t>(r::symbol_of_codepoint('a')));
                s.set(static_cast<size_t>(r::symbol_of_codepoint('b')));
                return r::chars(s);
            }
            default: return r::any_char();
        }
    }
    switch (rng.below(6)) {
        case 0: return r::concat(random_pattern(rng, depth - 1), random_pattern(rng, depth - 1));
        case 1: return r::alt({random_pattern(rng, depth - 1), random_pattern(rng, depth - 1)});
        case 2: return r::inter({random_pattern(rng, depth - 1), random_pattern(rng, depth - 1)});
        case 3: return r::complement(random_pattern(rng, depth - 1));
        default: return r::star(random_pattern(rng, depth - 1));
    }
}

std::vector<int> random_word(Rng& rng, size_t max_len) {
    std::vector<int> w;
    size_t len = rng.below(max_len + 1);
    for (size_t i = 0; i < len; ++i)
        w.push_back(r::symbol_of_codepoint('a' + rng.below(3)));
    return w;
}

std::string word_text(const std::vector<int>& w) {
    std::string s;
    for (int sym : w) s += r::symbol_text(sym);
    return s;
}

} // namespace

TEST_CASE("single-word literal compiles to the 3-state minimal DFA") {
    auto d = r::compile(r::literal("a"));
    CHECK(d->delta.size() == 3); // start, accept, dead
    CHECK(r::matches(*d, "a"));
    CHECK(!r::matches(*d, ""));
    CHECK(!r::matches(*d, "aa"));
}

TEST_CASE("complement of the empty language is universal") {
    auto d = r::compile(r::complement(r::empty()));
    CHECK(d->delta.size() == 1);
    CHECK(d->accepting[0]);
    CHECK(!r::is_empty(*d));
    CHECK(r::matches(*d, "anything"));
}

TEST_CASE("intersection of prefix and suffix constraints") {
    r::PatternPtr p = r::inter({r::parse_search_pattern("^a.*"), r::parse_search_pattern("^.*b$")});
    auto d = r::compile(p);
    CHECK(r::matches(*d, "ab"));
    CHECK(r::matches(*d, "axxb"));
    CHECK(!r::matches(*d, "a"));
    CHECK(!r::matches(*d, "xb"));
    auto words = r::example_words(*d, 1);
    REQUIRE(words.size() == 1);
    CHECK(words[0] == "ab");
}

TEST_CASE("emptiness") {
    CHECK(r::language_empty(r::inter({r::parse_search_pattern("^a"), r::parse_search_pattern("^b")})));
    CHECK(!r::language_empty(r::universal()));
    Rng rng{2024};
    for (int i = 0; i < 200; ++i) {
        r::PatternPtr p = random_pattern(rng, 3);
        CHECK(r::language_empty(r::inter({p, r::complement(p)})));
    }
}

TEST_CASE("trivial intersection classification") {
    CHECK(r::trivial_intersection(r::parse_search_pattern("^a"), r::parse_search_pattern("^a")) ==
          r::TrivialIntersection::Equivalent);
    CHECK(r::trivial_intersection(r::parse_search_pattern("^ad"),
                                  r::parse_search_pattern("^[^a]d")) ==
          r::TrivialIntersection::Disjoint);
    CHECK(r::trivial_intersection(r::parse_search_pattern("^a"), r::parse_search_pattern("^.b")) ==
          r::TrivialIntersection::Overlapping);
}

TEST_CASE("example words are shortest-first and accepted") {
    auto d = r::compile(r::literal("a"));
    auto words = r::example_words(*d, 3);
    REQUIRE(words.size() == 1); // finite language
    CHECK(words[0] == "a");

    auto all = r::compile(r::universal());
    auto first3 = r::example_words(*all, 3);
    REQUIRE(first3.size() == 3);
    CHECK(first3[0] == "");
    CHECK(first3[1].size() == 1);
    CHECK(first3[2].size() == 1);
    for (const auto& w : first3) CHECK(r::matches(*all, w));

    Rng rng{555};
    for (int i = 0; i < 50; ++i) {
        r::PatternPtr p = random_pattern(rng, 3);
        auto dfa = r::compile(p);
        auto ws = r::example_words(*dfa, 4);
        size_t prev = 0;
        for (const auto& w : ws) {
            CHECK(r::matches(*dfa, w));
            CHECK(w.size() >= prev);
            prev = w.size();
        }
    }
}

TEST_CASE("subset checks") {
    CHECK(r::is_subset(r::parse_search_pattern("^ab$"), r::parse_search_pattern("^a.*")));
    CHECK(!r::is_subset(r::parse_search_pattern("^.*"), r::parse_search_pattern("^a.*")));
    Rng rng{31337};
    for (int i = 0; i < 100; ++i) {
        r::PatternPtr p = random_pattern(rng, 3);
        CHECK(r::is_subset(p, p));
    }
}

TEST_CASE("dfa semantics agree with the reference matcher") {
    Rng rng{909090};
    for (int i = 0; i < 150; ++i) {
        r::PatternPtr p = random_pattern(rng, 3);
        auto d = r::compile(p);
        for (int j = 0; j < 25; ++j) {
            std::vector<int> w = random_word(rng, 5);
            bool expected = ref_match(p, w, 0, w.size());
            CHECK(r::matches(*d, word_text(w)) == expected);
            // complement and intersection laws
            CHECK(r::matches(*r::compile(r::complement(p)), word_text(w)) == !expected);
        }
    }
}

TEST_CASE("minimized DFAs are canonical for language-equal patterns") {
    // (a|b)* == (b|a)* == (a*b*)*
    r::SymSet a, b, ab;
    a.set(static_cast<size_t>(r::symbol_of_codepoint('a')));
    b.set(static_cast<size_t>(r::symbol_of_codepoint('b')));
    ab = a | b;
    auto d1 = r::compile(r::star(r::chars(ab)));
    auto d2 = r::compile(r::star(r::alt({r::chars(b), r::chars(a)})));
    auto d3 = r::compile(r::star(r::concat(r::star(r::chars(a)), r::star(r::chars(b)))));
    CHECK(*d1 == *d2);
    CHECK(*d1 == *d3);
    CHECK(r::language_equal(r::parse_search_pattern("^(a|b)$"),
                            r::parse_search_pattern("^[ab]$")));
}

TEST_CASE("ecma parser: anchors and search semantics") {
    auto starts_a = r::compile(r::parse_search_pattern("^a"));
    CHECK(r::matches(*starts_a, "a"));
    CHECK(r::matches(*starts_a, "ax"));
    CHECK(!r::matches(*starts_a, "xa"));

    auto contains_a = r::compile(r::parse_search_pattern("a"));
    CHECK(r::matches(*contains_a, "xax"));
    CHECK(!r::matches(*contains_a, "xxx"));

    auto exact = r::compile(r::parse_search_pattern("^ab$"));
    CHECK(r::matches(*exact, "ab"));
    CHECK(!r::matches(*exact, "abc"));

    auto either = r::compile(r::parse_search_pattern("^a$|^b$"));
    CHECK(r::matches(*either, "a"));
    CHECK(r::matches(*either, "b"));
    CHECK(!r::matches(*either, "c"));
}

TEST_CASE("ecma parser: classes, quantifiers, escapes") {
    auto digits = r::compile(r::parse_search_pattern("^\\d{2,3}$"));
    CHECK(r::matches(*digits, "12"));
    CHECK(r::matches(*digits, "123"));
    CHECK(!r::matches(*digits, "1"));
    CHECK(!r::matches(*digits, "1234"));
    CHECK(!r::matches(*digits, "ab"));

    auto cls = r::compile(r::parse_search_pattern("^[a-c]+$"));
    CHECK(r::matches(*cls, "abcabc"));
    CHECK(!r::matches(*cls, "abd"));

    auto neg = r::compile(r::parse_search_pattern("^[^a]$"));
    CHECK(r::matches(*neg, "b"));
    CHECK(!r::matches(*neg, "a"));
    CHECK(r::matches(*neg, "\t")); // non-printables land in the reserved class

    auto esc = r::compile(r::parse_search_pattern("^a\\.b$"));
    CHECK(r::matches(*esc, "a.b"));
    CHECK(!r::matches(*esc, "axb"));

    auto grp = r::compile(r::parse_search_pattern("^(ab)+$"));
    CHECK(r::matches(*grp, "abab"));
    CHECK(!r::matches(*grp, "aba"));

    auto opt = r::compile(r::parse_search_pattern("^colou?r$"));
    CHECK(r::matches(*opt, "color"));
    CHECK(r::matches(*opt, "colour"));
}

TEST_CASE("ecma parser: unsupported constructs are errors") {
    CHECK_THROWS_AS(r::parse_search_pattern("(?=a)b"), r::PatternError);
    CHECK_THROWS_AS(r::parse_search_pattern("a\\bb"), r::PatternError);
    CHECK_THROWS_AS(r::parse_search_pattern("(^a|b)"), r::PatternError);
    CHECK_THROWS_AS(r::parse_search_pattern("a("), r::PatternError);
    CHECK_THROWS_AS(r::parse_search_pattern("[a"), r::PatternError);
}

TEST_CASE("name literals are exact") {
    auto d = r::compile(r::name_literal("foo"));
    CHECK(r::matches(*d, "foo"));
    CHECK(!r::matches(*d, "foox"));
    CHECK(!r::matches(*d, "xfoo"));
    auto weird = r::compile(r::name_literal("a.b*c"));
    CHECK(r::matches(*weird, "a.b*c"));
    CHECK(!r::matches(*weird, "axb*c"));
}
