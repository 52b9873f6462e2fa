#include "jsw/regex.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <mutex>
#include <unordered_map>

namespace jsw::re {

int symbol_of_codepoint(uint32_t cp) {
    if (cp >= 0x20 && cp <= 0x7E) return static_cast<int>(cp - 0x20);
    return kOtherSymbol;
}

std::string symbol_text(int sym) {
    if (sym == kOtherSymbol) return "\n";
    return std::string(1, static_cast<char>(sym + 0x20));
}

std::vector<int> symbols_of_string(std::string_view utf8) {
    std::vector<int> out;
    size_t i = 0;
    while (i < utf8.size()) {
        unsigned char c = static_cast<unsigned char>(utf8[i]);
        uint32_t cp = 0;
        size_t len = 1;
        if (c < 0x80) {
            cp = c;
        } else if ((c >> 5) == 0x6 && i + 1 < utf8.size()) {
            cp = (c & 0x1Fu) << 6 | (utf8[i + 1] & 0x3Fu);
            len = 2;
        } else if ((c >> 4) == 0xE && i + 2 < utf8.size()) {
            cp = (c & 0x0Fu) << 12 | (utf8[i + 1] & 0x3Fu) << 6 | (utf8[i + 2] & 0x3Fu);
            len = 3;
        } else if ((c >> 3) == 0x1E && i + 3 < utf8.size()) {
            cp = (c & 0x07u) << 18 | (utf8[i + 1] & 0x3Fu) << 12 | (utf8[i + 2] & 0x3Fu) << 6 |
                 (utf8[i + 3] & 0x3Fu);
            len = 4;
        } else {
            cp = 0xFFFD; // stray byte, lands in OTHER
        }
        out.push_back(symbol_of_codepoint(cp));
        i += len;
    }
    return out;
}

const std::array<int, kNumSymbols>& symbol_order() {
    static const std::array<int, kNumSymbols> order = [] {
        std::array<int, kNumSymbols> o{};
        size_t n = 0;
        auto push_range = [&](char lo, char hi) {
            for (char c = lo; c <= hi; ++c) o[n++] = symbol_of_codepoint(static_cast<uint32_t>(c));
        };
        push_range('a', 'z');
        push_range('A', 'Z');
        push_range('0', '9');
        std::array<bool, kNumSymbols> seen{};
        for (size_t i = 0; i < n; ++i) seen[static_cast<size_t>(o[i])] = true;
        for (int s = 0; s < kNumSymbols - 1; ++s)
            if (!seen[static_cast<size_t>(s)]) o[n++] = s;
        o[n++] = kOtherSymbol;
        assert(n == kNumSymbols);
        return o;
    }();
    return order;
}

// ---- interning ----

namespace {

struct NodeKey {
    Pattern::Op op;
    SymSet chars;
    std::vector<const Pattern*> kids;

    bool operator==(const NodeKey& o) const {
        return op == o.op && chars == o.chars && kids == o.kids;
    }
};

struct NodeKeyHash {
    size_t operator()(const NodeKey& k) const {
        size_t h = static_cast<size_t>(k.op) * 0x9e3779b97f4a7c15ull;
        h ^= std::hash<SymSet>()(k.chars);
        for (const Pattern* p : k.kids) h = h * 1000003u ^ p->id;
        return h;
    }
};

struct InternTable {
    std::mutex mu;
    std::unordered_map<NodeKey, std::unique_ptr<Pattern>, NodeKeyHash> nodes;
    uint32_t next_id = 1;
    std::unordered_map<uint64_t, PatternPtr> deriv_memo;
    std::unordered_map<PatternPtr, DfaPtr> dfa_memo;
};

InternTable& table() {
    static InternTable t;
    return t;
}

bool compute_nullable(Pattern::Op op, const std::vector<const Pattern*>& kids) {
    switch (op) {
        case Pattern::Op::Empty: return false;
        case Pattern::Op::Epsilon: return true;
        case Pattern::Op::Chars: return false;
        case Pattern::Op::Concat: return kids[0]->nullable && kids[1]->nullable;
        case Pattern::Op::Union: {
            for (auto* k : kids)
                if (k->nullable) return true;
            return false;
        }
        case Pattern::Op::Inter: {
            for (auto* k : kids)
                if (!k->nullable) return false;
            return true;
        }
        case Pattern::Op::Complement: return !kids[0]->nullable;
        case Pattern::Op::Star: return true;
    }
    return false;
}

PatternPtr intern(Pattern::Op op, SymSet chars, std::vector<const Pattern*> kids) {
    InternTable& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    NodeKey key{op, chars, kids};
    auto it = t.nodes.find(key);
    if (it != t.nodes.end()) return it->second.get();
    auto node = std::make_unique<Pattern>();
    node->op = op;
    node->chars = chars;
    node->kids = std::move(kids);
    node->id = t.next_id++;
    node->nullable = compute_nullable(op, node->kids);
    PatternPtr p = node.get();
    t.nodes.emplace(std::move(key), std::move(node));
    return p;
}

} // namespace

PatternPtr empty() {
    static PatternPtr p = intern(Pattern::Op::Empty, {}, {});
    return p;
}

PatternPtr epsilon() {
    static PatternPtr p = intern(Pattern::Op::Epsilon, {}, {});
    return p;
}

PatternPtr chars(const SymSet& set) {
    if (set.none()) return empty();
    return intern(Pattern::Op::Chars, set, {});
}

PatternPtr any_char() {
    static PatternPtr p = [] {
        SymSet s;
        s.set();
        return chars(s);
    }();
    return p;
}

PatternPtr universal() {
    static PatternPtr p = star(any_char());
    return p;
}

PatternPtr concat(PatternPtr a, PatternPtr b) {
    if (a == empty() || b == empty()) return empty();
    if (a == epsilon()) return b;
    if (b == epsilon()) return a;
    // keep concatenations right-nested so interning recognizes equal forms
    if (a->op == Pattern::Op::Concat) return concat(a->kids[0], concat(a->kids[1], b));
    return intern(Pattern::Op::Concat, {}, {a, b});
}

PatternPtr concat(const std::vector<PatternPtr>& parts) {
    PatternPtr r = epsilon();
    for (size_t i = parts.size(); i-- > 0;) r = concat(parts[i], r);
    return r;
}

PatternPtr alt(std::vector<PatternPtr> parts) {
    std::vector<PatternPtr> flat;
    for (PatternPtr p : parts) {
        if (p->op == Pattern::Op::Union) {
            flat.insert(flat.end(), p->kids.begin(), p->kids.end());
        } else if (p != empty()) {
            flat.push_back(p);
        }
    }
    std::sort(flat.begin(), flat.end(), [](PatternPtr x, PatternPtr y) { return x->id < y->id; });
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    for (PatternPtr p : flat)
        if (p == universal()) return universal();
    if (flat.empty()) return empty();
    if (flat.size() == 1) return flat[0];
    // merge simple character classes
    SymSet merged;
    std::vector<PatternPtr> rest;
    int class_count = 0;
    for (PatternPtr p : flat) {
        if (p->op == Pattern::Op::Chars) {
            merged |= p->chars;
            ++class_count;
        } else {
            rest.push_back(p);
        }
    }
    if (class_count >= 2) {
        rest.push_back(chars(merged));
        std::sort(rest.begin(), rest.end(),
                  [](PatternPtr x, PatternPtr y) { return x->id < y->id; });
        if (rest.size() == 1) return rest[0];
        return intern(Pattern::Op::Union, {}, std::move(rest));
    }
    return intern(Pattern::Op::Union, {}, std::move(flat));
}

PatternPtr inter(std::vector<PatternPtr> parts) {
    std::vector<PatternPtr> flat;
    for (PatternPtr p : parts) {
        if (p->op == Pattern::Op::Inter) {
            flat.insert(flat.end(), p->kids.begin(), p->kids.end());
        } else if (p != universal()) {
            flat.push_back(p);
        }
    }
    std::sort(flat.begin(), flat.end(), [](PatternPtr x, PatternPtr y) { return x->id < y->id; });
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    for (PatternPtr p : flat)
        if (p == empty()) return empty();
    if (flat.empty()) return universal();
    if (flat.size() == 1) return flat[0];
    return intern(Pattern::Op::Inter, {}, std::move(flat));
}

PatternPtr complement(PatternPtr p) {
    if (p->op == Pattern::Op::Complement) return p->kids[0];
    if (p == empty()) return universal();
    if (p == universal()) return empty();
    return intern(Pattern::Op::Complement, {}, {p});
}

PatternPtr star(PatternPtr p) {
    if (p->op == Pattern::Op::Star) return p;
    if (p == epsilon() || p == empty()) return epsilon();
    return intern(Pattern::Op::Star, {}, {p});
}

PatternPtr plus(PatternPtr p) { return concat(p, star(p)); }

PatternPtr optional(PatternPtr p) { return alt({epsilon(), p}); }

PatternPtr repeat(PatternPtr p, size_t lo, size_t hi) {
    constexpr size_t kRepeatCap = 1000;
    if (lo > kRepeatCap || (hi != SIZE_MAX && (hi > kRepeatCap || hi < lo)))
        throw PatternError("repetition bounds out of range");
    std::vector<PatternPtr> parts(lo, p);
    if (hi == SIZE_MAX) {
        parts.push_back(star(p));
    } else {
        for (size_t i = lo; i < hi; ++i) parts.push_back(optional(p));
    }
    return concat(parts);
}

PatternPtr literal(std::string_view utf8) {
    std::vector<PatternPtr> parts;
    for (int sym : symbols_of_string(utf8)) {
        SymSet s;
        s.set(static_cast<size_t>(sym));
        parts.push_back(chars(s));
    }
    return concat(parts);
}

PatternPtr name_literal(std::string_view name) { return literal(name); }

// ---- derivatives and DFA construction ----

namespace {

PatternPtr derivative(PatternPtr p, int sym);

PatternPtr derivative_uncached(PatternPtr p, int sym) {
    switch (p->op) {
        case Pattern::Op::Empty:
        case Pattern::Op::Epsilon:
            return empty();
        case Pattern::Op::Chars:
            return p->chars.test(static_cast<size_t>(sym)) ? epsilon() : empty();
        case Pattern::Op::Concat: {
            PatternPtr head = concat(derivative(p->kids[0], sym), p->kids[1]);
            if (p->kids[0]->nullable) return alt({head, derivative(p->kids[1], sym)});
            return head;
        }
        case Pattern::Op::Union: {
            std::vector<PatternPtr> ks;
            ks.reserve(p->kids.size());
            for (auto* k : p->kids) ks.push_back(derivative(k, sym));
            return alt(std::move(ks));
        }
        case Pattern::Op::Inter: {
            std::vector<PatternPtr> ks;
            ks.reserve(p->kids.size());
            for (auto* k : p->kids) ks.push_back(derivative(k, sym));
            return inter(std::move(ks));
        }
        case Pattern::Op::Complement:
            return complement(derivative(p->kids[0], sym));
        case Pattern::Op::Star:
            return concat(derivative(p->kids[0], sym), p);
    }
    return empty();
}

PatternPtr derivative(PatternPtr p, int sym) {
    InternTable& t = table();
    uint64_t key = static_cast<uint64_t>(p->id) * kNumSymbols + static_cast<uint64_t>(sym);
    {
        std::lock_guard<std::mutex> lock(t.mu);
        auto it = t.deriv_memo.find(key);
        if (it != t.deriv_memo.end()) return it->second;
    }
    PatternPtr d = derivative_uncached(p, sym);
    {
        std::lock_guard<std::mutex> lock(t.mu);
        t.deriv_memo.emplace(key, d);
    }
    return d;
}

struct RawDfa {
    std::vector<std::array<uint32_t, kNumSymbols>> delta;
    std::vector<bool> accepting;
    uint32_t start = 0;
};

RawDfa explore(PatternPtr root) {
    RawDfa d;
    std::unordered_map<PatternPtr, uint32_t> ids;
    std::deque<PatternPtr> work;
    auto state_of = [&](PatternPtr p) {
        auto it = ids.find(p);
        if (it != ids.end()) return it->second;
        uint32_t s = static_cast<uint32_t>(ids.size());
        ids.emplace(p, s);
        d.delta.emplace_back();
        d.accepting.push_back(p->nullable);
        work.push_back(p);
        return s;
    };
    d.start = state_of(root);
    while (!work.empty()) {
        PatternPtr p = work.front();
        work.pop_front();
        uint32_t s = ids[p];
        for (int sym = 0; sym < kNumSymbols; ++sym) {
            d.delta[s][static_cast<size_t>(sym)] = state_of(derivative(p, sym));
        }
    }
    return d;
}

// Hopcroft partition refinement on a complete DFA.
std::vector<uint32_t> minimize_blocks(const RawDfa& d, uint32_t& block_count) {
    size_t n = d.delta.size();
    // inverse transitions
    std::vector<std::vector<std::vector<uint32_t>>> inv(
        kNumSymbols, std::vector<std::vector<uint32_t>>(n));
    for (size_t s = 0; s < n; ++s)
        for (int c = 0; c < kNumSymbols; ++c)
            inv[static_cast<size_t>(c)][d.delta[s][static_cast<size_t>(c)]].push_back(
                static_cast<uint32_t>(s));

    std::vector<std::vector<uint32_t>> blocks;
    std::vector<uint32_t> block_of(n, 0);
    std::vector<uint32_t> acc, rej;
    for (size_t s = 0; s < n; ++s)
        (d.accepting[s] ? acc : rej).push_back(static_cast<uint32_t>(s));
    if (!rej.empty()) blocks.push_back(std::move(rej));
    if (!acc.empty()) blocks.push_back(std::move(acc));
    for (size_t b = 0; b < blocks.size(); ++b)
        for (uint32_t s : blocks[b]) block_of[s] = static_cast<uint32_t>(b);

    std::deque<std::pair<uint32_t, int>> work;
    std::vector<std::array<bool, kNumSymbols>> in_work;
    in_work.resize(blocks.size());
    uint32_t seed = blocks.size() == 2 && blocks[1].size() < blocks[0].size() ? 1u : 0u;
    if (blocks.size() == 2) {
        for (int c = 0; c < kNumSymbols; ++c) {
            work.emplace_back(seed, c);
            in_work[seed][static_cast<size_t>(c)] = true;
        }
    }

    std::vector<uint32_t> mark_count;
    std::vector<std::vector<uint32_t>> marked_in;
    while (!work.empty()) {
        auto [a, c] = work.front();
        work.pop_front();
        in_work[a][static_cast<size_t>(c)] = false;

        // X = predecessors of block a under symbol c, grouped per block
        mark_count.assign(blocks.size(), 0);
        marked_in.assign(blocks.size(), {});
        for (uint32_t t : blocks[a]) {
            for (uint32_t s : inv[static_cast<size_t>(c)][t]) {
                uint32_t b = block_of[s];
                ++mark_count[b];
                marked_in[b].push_back(s);
            }
        }
        size_t existing = blocks.size();
        for (size_t y = 0; y < existing; ++y) {
            if (mark_count[y] == 0 || mark_count[y] == blocks[y].size()) continue;
            // split block y
            std::vector<uint32_t> stay, moved = marked_in[y];
            std::sort(moved.begin(), moved.end());
            std::vector<bool> is_moved(n, false);
            for (uint32_t s : moved) is_moved[s] = true;
            for (uint32_t s : blocks[y])
                if (!is_moved[s]) stay.push_back(s);
            uint32_t j = static_cast<uint32_t>(blocks.size());
            blocks[y] = std::move(stay);
            blocks.push_back(std::move(moved));
            in_work.push_back(std::array<bool, kNumSymbols>{});
            for (uint32_t s : blocks[j]) block_of[s] = j;
            for (int c2 = 0; c2 < kNumSymbols; ++c2) {
                if (in_work[y][static_cast<size_t>(c2)]) {
                    work.emplace_back(j, c2);
                    in_work[j][static_cast<size_t>(c2)] = true;
                } else {
                    uint32_t smaller = blocks[y].size() <= blocks[j].size()
                                           ? static_cast<uint32_t>(y)
                                           : j;
                    work.emplace_back(smaller, c2);
                    in_work[smaller][static_cast<size_t>(c2)] = true;
                }
            }
        }
    }
    block_count = static_cast<uint32_t>(blocks.size());
    return block_of;
}

DfaPtr canonicalize(const RawDfa& raw) {
    uint32_t nblocks = 1;
    std::vector<uint32_t> block_of = minimize_blocks(raw, nblocks);

    // BFS renumbering from the start block in symbol-index order
    std::vector<uint32_t> renum(nblocks, UINT32_MAX);
    std::vector<uint32_t> rep; // representative raw state per new state
    std::deque<uint32_t> q;
    auto visit = [&](uint32_t raw_state) {
        uint32_t b = block_of[raw_state];
        if (renum[b] != UINT32_MAX) return;
        renum[b] = static_cast<uint32_t>(rep.size());
        rep.push_back(raw_state);
        q.push_back(raw_state);
    };
    visit(raw.start);
    while (!q.empty()) {
        uint32_t s = q.front();
        q.pop_front();
        for (int c = 0; c < kNumSymbols; ++c) visit(raw.delta[s][static_cast<size_t>(c)]);
    }

    auto out = std::make_shared<Dfa>();
    out->delta.resize(rep.size());
    out->accepting.resize(rep.size());
    for (size_t i = 0; i < rep.size(); ++i) {
        uint32_t s = rep[i];
        out->accepting[i] = raw.accepting[s];
        for (int c = 0; c < kNumSymbols; ++c)
            out->delta[i][static_cast<size_t>(c)] = renum[block_of[raw.delta[s][static_cast<size_t>(c)]]];
    }
    return out;
}

} // namespace

DfaPtr compile(PatternPtr p) {
    InternTable& t = table();
    {
        std::lock_guard<std::mutex> lock(t.mu);
        auto it = t.dfa_memo.find(p);
        if (it != t.dfa_memo.end()) return it->second;
    }
    DfaPtr d = canonicalize(explore(p));
    {
        std::lock_guard<std::mutex> lock(t.mu);
        t.dfa_memo.emplace(p, d);
    }
    return d;
}

bool is_empty(const Dfa& d) {
    for (bool a : d.accepting)
        if (a) return false;
    return true; // every state is reachable in a canonical DFA
}

bool matches(const Dfa& d, std::string_view utf8) {
    uint32_t s = 0;
    for (int sym : symbols_of_string(utf8)) s = d.delta[s][static_cast<size_t>(sym)];
    return d.accepting[s];
}

std::vector<std::string> example_words(const Dfa& d, size_t k) {
    std::vector<std::string> out;
    if (k == 0) return out;
    size_t n = d.delta.size();
    // can[l][s]: an accepting state is reachable from s in exactly l steps
    std::vector<std::vector<bool>> can;
    can.emplace_back(n);
    for (size_t s = 0; s < n; ++s) can[0][s] = d.accepting[s];
    auto extend = [&] {
        const auto& prev = can.back();
        std::vector<bool> nxt(n, false);
        for (size_t s = 0; s < n; ++s) {
            for (int c = 0; c < kNumSymbols; ++c) {
                if (prev[d.delta[s][static_cast<size_t>(c)]]) {
                    nxt[s] = true;
                    break;
                }
            }
        }
        can.push_back(std::move(nxt));
    };
    // Enumerate words of each feasible length in the fixed symbol order,
    // pruning transitions that cannot finish within the remaining budget.
    std::string word;
    std::function<bool(uint32_t, size_t)> dfs = [&](uint32_t s, size_t rem) -> bool {
        if (rem == 0) {
            if (d.accepting[s]) {
                out.push_back(word);
                return out.size() >= k;
            }
            return false;
        }
        for (int sym : symbol_order()) {
            uint32_t t = d.delta[s][static_cast<size_t>(sym)];
            if (!can[rem - 1][t]) continue;
            std::string piece = symbol_text(sym);
            word += piece;
            if (dfs(t, rem - 1)) return true;
            word.resize(word.size() - piece.size());
        }
        return false;
    };
    size_t empty_run = 0;
    for (size_t len = 0; out.size() < k; ++len) {
        while (can.size() <= len) extend();
        if (can[len][0]) {
            empty_run = 0;
            word.clear();
            if (dfs(0, len)) break;
        } else if (++empty_run > n && len > n) {
            break; // achievable lengths have gaps of at most n states
        }
    }
    return out;
}

bool language_empty(PatternPtr p) { return is_empty(*compile(p)); }

bool language_equal(PatternPtr a, PatternPtr b) {
    if (a == b) return true;
    return *compile(a) == *compile(b);
}

bool is_subset(PatternPtr a, PatternPtr b) { return language_empty(inter({a, complement(b)})); }

TrivialIntersection trivial_intersection(PatternPtr a, PatternPtr b) {
    if (language_equal(a, b)) return TrivialIntersection::Equivalent;
    if (language_empty(inter({a, b}))) return TrivialIntersection::Disjoint;
    return TrivialIntersection::Overlapping;
}

// ---- parser ----

namespace {

SymSet class_digits() {
    SymSet s;
    for (char c = '0'; c <= '9'; ++c) s.set(static_cast<size_t>(symbol_of_codepoint(static_cast<uint32_t>(c))));
    return s;
}

SymSet class_word() {
    SymSet s = class_digits();
    for (char c = 'a'; c <= 'z'; ++c) s.set(static_cast<size_t>(symbol_of_codepoint(static_cast<uint32_t>(c))));
    for (char c = 'A'; c <= 'Z'; ++c) s.set(static_cast<size_t>(symbol_of_codepoint(static_cast<uint32_t>(c))));
    s.set(static_cast<size_t>(symbol_of_codepoint('_')));
    return s;
}

SymSet class_space() {
    SymSet s;
    s.set(static_cast<size_t>(symbol_of_codepoint(' ')));
    s.set(kOtherSymbol); // tab, newline and all other non-printables share OTHER
    return s;
}

SymSet full_set() {
    SymSet s;
    s.set();
    return s;
}

struct EcmaParser {
    std::vector<uint32_t> cps;
    size_t pos = 0;
    int depth = 0;

    explicit EcmaParser(std::string_view src) {
        size_t i = 0;
        while (i < src.size()) {
            unsigned char c = static_cast<unsigned char>(src[i]);
            uint32_t cp;
            size_t len = 1;
            if (c < 0x80) {
                cp = c;
            } else if ((c >> 5) == 0x6 && i + 1 < src.size()) {
                cp = (c & 0x1Fu) << 6 | (src[i + 1] & 0x3Fu);
                len = 2;
            } else if ((c >> 4) == 0xE && i + 2 < src.size()) {
                cp = (c & 0x0Fu) << 12 | (src[i + 1] & 0x3Fu) << 6 | (src[i + 2] & 0x3Fu);
                len = 3;
            } else if ((c >> 3) == 0x1E && i + 3 < src.size()) {
                cp = (c & 0x07u) << 18 | (src[i + 1] & 0x3Fu) << 12 | (src[i + 2] & 0x3Fu) << 6 |
                     (src[i + 3] & 0x3Fu);
                len = 4;
            } else {
                cp = 0xFFFD;
            }
            cps.push_back(cp);
            i += len;
        }
    }

    bool eof() const { return pos >= cps.size(); }
    uint32_t peek() const { return cps[pos]; }
    uint32_t next() { return cps[pos++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw PatternError(msg + " at offset " + std::to_string(pos));
    }

    PatternPtr parse() {
        std::vector<PatternPtr> branches;
        branches.push_back(parse_top_branch());
        while (!eof() && peek() == '|') {
            next();
            branches.push_back(parse_top_branch());
        }
        if (!eof()) fail("unexpected ')'");
        return alt(std::move(branches));
    }

    PatternPtr parse_top_branch() {
        bool anch_start = false, anch_end = false;
        if (!eof() && peek() == '^') {
            anch_start = true;
            next();
        }
        PatternPtr core = parse_sequence(/*top_level=*/true, anch_end);
        std::vector<PatternPtr> parts;
        if (!anch_start) parts.push_back(universal());
        parts.push_back(core);
        if (!anch_end) parts.push_back(universal());
        return concat(parts);
    }

    PatternPtr parse_sequence(bool top_level, bool& anch_end) {
        std::vector<PatternPtr> parts;
        while (!eof() && peek() != '|' && peek() != ')') {
            if (peek() == '$') {
                if (!top_level) fail("anchors inside groups are not supported");
                next();
                if (!eof() && peek() != '|') fail("'$' must end a branch");
                anch_end = true;
                return concat(parts);
            }
            if (peek() == '^') fail("'^' only allowed at the start of a branch");
            parts.push_back(parse_piece());
        }
        return concat(parts);
    }

    PatternPtr parse_piece() {
        PatternPtr atom = parse_atom();
        while (!eof()) {
            uint32_t c = peek();
            if (c == '*') {
                next();
                atom = star(atom);
            } else if (c == '+') {
                next();
                atom = plus(atom);
            } else if (c == '?') {
                next();
                atom = optional(atom);
            } else if (c == '{') {
                size_t save = pos;
                size_t lo = 0, hi = 0;
                bool ok = try_quantifier(lo, hi);
                if (!ok) {
                    pos = save;
                    break;
                }
                atom = repeat(atom, lo, hi);
            } else {
                break;
            }
        }
        return atom;
    }

    bool try_quantifier(size_t& lo, size_t& hi) {
        // at '{'; returns false (position untouched by caller) if this is not
        // a well-formed {m}, {m,} or {m,n}
        size_t p = pos + 1;
        auto read_num = [&](size_t& out) {
            size_t start = p;
            size_t v = 0;
            while (p < cps.size() && cps[p] >= '0' && cps[p] <= '9') {
                v = v * 10 + (cps[p] - '0');
                if (v > 100000) return false;
                ++p;
            }
            if (p == start) return false;
            out = v;
            return true;
        };
        if (!read_num(lo)) return false;
        hi = lo;
        if (p < cps.size() && cps[p] == ',') {
            ++p;
            if (p < cps.size() && cps[p] == '}') {
                hi = SIZE_MAX;
            } else if (!read_num(hi)) {
                return false;
            }
        }
        if (p >= cps.size() || cps[p] != '}') return false;
        pos = p + 1;
        return true;
    }

    PatternPtr parse_atom() {
        uint32_t c = next();
        switch (c) {
            case '.': return any_char();
            case '(': {
                if (!eof() && peek() == '?') {
                    next();
                    if (eof()) fail("truncated group");
                    uint32_t kind = next();
                    if (kind != ':')
                        fail("lookaround and named groups are not supported");
                }
                ++depth;
                std::vector<PatternPtr> branches;
                bool dummy = false;
                branches.push_back(parse_sequence(false, dummy));
                while (!eof() && peek() == '|') {
                    next();
                    branches.push_back(parse_sequence(false, dummy));
                }
                if (eof() || next() != ')') fail("unbalanced group");
                --depth;
                return alt(std::move(branches));
            }
            case '[': return chars(parse_class());
            case '\\': return chars(parse_escape(false));
            case '*':
            case '+':
            case '?':
                fail("quantifier with nothing to repeat");
            case ')': fail("unbalanced ')'");
            default: {
                SymSet s;
                s.set(static_cast<size_t>(symbol_of_codepoint(c)));
                return chars(s);
            }
        }
    }

    SymSet parse_class() {
        bool negate = false;
        if (!eof() && peek() == '^') {
            negate = true;
            next();
        }
        SymSet s;
        while (true) {
            if (eof()) fail("unterminated character class");
            uint32_t c = peek();
            if (c == ']') {
                next();
                break;
            }
            SymSet item;
            uint32_t lo_cp = 0;
            bool single = false;
            if (c == '\\') {
                next();
                item = parse_escape(true);
                if (item.count() == 1) {
                    single = true;
                    for (int i = 0; i < kNumSymbols; ++i)
                        if (item.test(static_cast<size_t>(i))) lo_cp = (i == kOtherSymbol) ? 0u : static_cast<uint32_t>(i) + 0x20;
                }
            } else {
                next();
                lo_cp = c;
                single = true;
                item.set(static_cast<size_t>(symbol_of_codepoint(c)));
            }
            if (single && !eof() && peek() == '-' && pos + 1 < cps.size() && cps[pos + 1] != ']') {
                next(); // '-'
                uint32_t hi_cp;
                if (peek() == '\\') {
                    next();
                    SymSet e = parse_escape(true);
                    if (e.count() != 1) fail("invalid range endpoint");
                    hi_cp = 0;
                    for (int i = 0; i < kNumSymbols; ++i)
                        if (e.test(static_cast<size_t>(i))) hi_cp = (i == kOtherSymbol) ? 0u : static_cast<uint32_t>(i) + 0x20;
                } else {
                    hi_cp = next();
                }
                if (hi_cp < lo_cp) fail("invalid range in character class");
                item.reset();
                for (uint32_t cp = lo_cp; cp <= hi_cp && cp <= 0x10FFFF; ++cp) {
                    item.set(static_cast<size_t>(symbol_of_codepoint(cp)));
                    if (cp > 0x7E) { // everything further collapses into OTHER
                        item.set(kOtherSymbol);
                        break;
                    }
                }
            }
            s |= item;
        }
        if (negate) s = full_set() & ~s;
        return s;
    }

    SymSet parse_escape(bool in_class) {
        if (eof()) fail("truncated escape");
        uint32_t c = next();
        SymSet s;
        auto single = [&](uint32_t cp) {
            SymSet r;
            r.set(static_cast<size_t>(symbol_of_codepoint(cp)));
            return r;
        };
        switch (c) {
            case 'd': return class_digits();
            case 'D': return full_set() & ~class_digits();
            case 'w': return class_word();
            case 'W': return full_set() & ~class_word();
            case 's': return class_space();
            case 'S': return full_set() & ~class_space();
            case 't': return single(0x09);
            case 'n': return single(0x0A);
            case 'r': return single(0x0D);
            case 'f': return single(0x0C);
            case 'v': return single(0x0B);
            case '0': return single(0);
            case 'b':
                if (in_class) return single(0x08);
                fail("word boundary \\b is not supported");
            case 'B': fail("\\B is not supported");
            case 'x': {
                uint32_t v = 0;
                for (int i = 0; i < 2; ++i) {
                    if (eof()) fail("truncated \\x escape");
                    v = v * 16 + hex_digit(next());
                }
                return single(v);
            }
            case 'u': {
                uint32_t v = 0;
                for (int i = 0; i < 4; ++i) {
                    if (eof()) fail("truncated \\u escape");
                    v = v * 16 + hex_digit(next());
                }
                return single(v);
            }
            case 'c': fail("control escapes are not supported");
            default: return single(c); // escaped punctuation or identity escape
        }
    }

    uint32_t hex_digit(uint32_t c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        fail("invalid hex digit");
    }
};

} // namespace

PatternPtr parse_search_pattern(std::string_view ecma) {
    EcmaParser p(ecma);
    return p.parse();
}

// ---- display ----

namespace {

void display_into(PatternPtr p, std::string& out);

void display_class(const SymSet& s, std::string& out) {
    if (s.all()) {
        out += ".";
        return;
    }
    size_t count = s.count();
    bool neg = count > kNumSymbols / 2;
    SymSet shown = neg ? SymSet(~s) : s;
    if (!neg && count == 1 && !shown.test(kOtherSymbol)) {
        for (int i = 0; i < kNumSymbols - 1; ++i)
            if (shown.test(static_cast<size_t>(i))) {
                char c = static_cast<char>(i + 0x20);
                if (std::string_view("[](){}.*+?^$|\\-").find(c) != std::string_view::npos)
                    out.push_back('\\');
                out.push_back(c);
            }
        return;
    }
    out.push_back('[');
    if (neg) out.push_back('^');
    for (int i = 0; i < kNumSymbols - 1; ++i) {
        if (!shown.test(static_cast<size_t>(i))) continue;
        int j = i;
        while (j + 1 < kNumSymbols - 1 && shown.test(static_cast<size_t>(j + 1))) ++j;
        auto emit = [&](int sym) {
            char c = static_cast<char>(sym + 0x20);
            if (std::string_view("[]^-\\").find(c) != std::string_view::npos) out.push_back('\\');
            out.push_back(c);
        };
        emit(i);
        if (j > i + 1) out.push_back('-');
        if (j > i) emit(j);
        i = j;
    }
    if (shown.test(kOtherSymbol)) out += "\\W?"; // the reserved non-printable class
    out.push_back(']');
}

void display_into(PatternPtr p, std::string& out) {
    switch (p->op) {
        case Pattern::Op::Empty: out += "(?!)"; break;
        case Pattern::Op::Epsilon: out += "()"; break;
        case Pattern::Op::Chars: display_class(p->chars, out); break;
        case Pattern::Op::Concat:
            display_into(p->kids[0], out);
            display_into(p->kids[1], out);
            break;
        case Pattern::Op::Union: {
            out.push_back('(');
            for (size_t i = 0; i < p->kids.size(); ++i) {
                if (i) out.push_back('|');
                display_into(p->kids[i], out);
            }
            out.push_back(')');
            break;
        }
        case Pattern::Op::Inter: {
            out.push_back('(');
            for (size_t i = 0; i < p->kids.size(); ++i) {
                if (i) out += "&&";
                display_into(p->kids[i], out);
            }
            out.push_back(')');
            break;
        }
        case Pattern::Op::Complement:
            out += "~(";
            display_into(p->kids[0], out);
            out.push_back(')');
            break;
        case Pattern::Op::Star:
            if (p == universal()) {
                out += ".*";
            } else {
                out.push_back('(');
                display_into(p->kids[0], out);
                out += ")*";
            }
            break;
    }
}

} // namespace

std::string display(PatternPtr p) {
    std::string out;
    display_into(p, out);
    return out;
}

} // namespace jsw::re
