#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jsw::re {

// Engine alphabet: the 95 printable ASCII characters 0x20..0x7E as symbols
// 0..94, plus one reserved class OTHER (symbol 95) covering every remaining
// code point. OTHER's canonical concrete character in generated words is
// '\n' (0x0A), so the generator's output alphabet is 0x20..0x7E plus 0x0A.
constexpr int kNumSymbols = 96;
constexpr int kOtherSymbol = 95;

using SymSet = std::bitset<kNumSymbols>;

int symbol_of_codepoint(uint32_t cp);
// Canonical representative character(s) of a symbol, as UTF-8.
std::string symbol_text(int sym);
// Decodes a UTF-8 string into alphabet symbols (one per code point).
std::vector<int> symbols_of_string(std::string_view utf8);
// Fixed enumeration order used by all word generation: a-z, A-Z, 0-9, the
// remaining printable characters in code order, OTHER last.
const std::array<int, kNumSymbols>& symbol_order();

class PatternError : public std::runtime_error {
public:
    explicit PatternError(const std::string& msg) : std::runtime_error(msg) {}
};

// Hash-consed regular expression node over the engine alphabet, closed under
// complement and intersection. Nodes are interned and immutable; equal
// pointers mean structurally equal patterns.
struct Pattern {
    enum class Op : uint8_t { Empty, Epsilon, Chars, Concat, Union, Inter, Complement, Star };
    Op op;
    SymSet chars;                      // Op::Chars
    std::vector<const Pattern*> kids;  // operands
    uint32_t id = 0;
    bool nullable = false;
};

using PatternPtr = const Pattern*;

PatternPtr empty();
PatternPtr epsilon();
PatternPtr chars(const SymSet& set);
PatternPtr any_char();   // every symbol, OTHER included
PatternPtr universal();  // Sigma*
PatternPtr concat(PatternPtr a, PatternPtr b);
PatternPtr concat(const std::vector<PatternPtr>& parts);
PatternPtr alt(std::vector<PatternPtr> parts);
PatternPtr inter(std::vector<PatternPtr> parts);
PatternPtr complement(PatternPtr p);
PatternPtr star(PatternPtr p);
PatternPtr plus(PatternPtr p);
PatternPtr optional(PatternPtr p);
// p{lo,hi}; hi = SIZE_MAX means unbounded.
PatternPtr repeat(PatternPtr p, size_t lo, size_t hi);
// The exact one-string language {utf8}.
PatternPtr literal(std::string_view utf8);

// Parses the ECMA-262 subset used by JSON Schema (literals, classes, '.',
// anchors, *, +, ?, {m,n}, alternation, grouping) with search semantics:
// unanchored sides of each top-level branch are padded with Sigma*.
// Backreferences, lookaround and nested anchors raise PatternError.
PatternPtr parse_search_pattern(std::string_view ecma);
// The anchored name pattern ^k$ for a literal member name.
PatternPtr name_literal(std::string_view name);

// Minimized complete DFA in canonical numbering: state 0 is the start state
// and states appear in BFS order over the fixed symbol order, so two DFAs
// accept the same language iff they compare equal.
struct Dfa {
    std::vector<std::array<uint32_t, kNumSymbols>> delta;
    std::vector<bool> accepting;

    bool operator==(const Dfa& o) const = default;
};

using DfaPtr = std::shared_ptr<const Dfa>;

// Compiles (and memoizes) the minimal DFA of a pattern.
DfaPtr compile(PatternPtr p);

bool is_empty(const Dfa& d);
bool matches(const Dfa& d, std::string_view utf8);
// Up to k distinct accepted words, shortest first, deterministic; fewer than
// k only when the language is smaller than k.
std::vector<std::string> example_words(const Dfa& d, size_t k);

bool language_empty(PatternPtr p);
bool language_equal(PatternPtr a, PatternPtr b);
// L(a) subseteq L(b), decided as emptiness of a & ~b.
bool is_subset(PatternPtr a, PatternPtr b);

enum class TrivialIntersection { Disjoint, Equivalent, Overlapping };
TrivialIntersection trivial_intersection(PatternPtr a, PatternPtr b);

// Best-effort readable rendering for traces and dumps.
std::string display(PatternPtr p);

} // namespace jsw::re
