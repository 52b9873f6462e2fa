#include "jsw/witness.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace jsw {

namespace {

std::vector<SchemaPtr> body_disjuncts(const SchemaPtr& body) {
    switch (body->kind) {
        case Schema::Kind::Or: return body->list;
        case Schema::Kind::False_: return {};
        case Schema::Kind::True_: {
            std::vector<SchemaPtr> six;
            for (JsonKind k : {JsonKind::Null, JsonKind::Bool, JsonKind::Num, JsonKind::Str,
                               JsonKind::Obj, JsonKind::Arr})
                six.push_back(s_group({}, k));
            return six;
        }
        case Schema::Kind::Group: return {body};
        default:
            throw std::logic_error("variable body is not in DNF: " + canon_string(body));
    }
}

VarState state_of(const SchemaPtr& ref, const StateMap& st) {
    if (ref->kind == Schema::Kind::True_) return VarState::populated(JsonValue::null());
    if (ref->kind == Schema::Kind::False_) return VarState::empty();
    assert(ref->kind == Schema::Kind::Ref);
    auto it = st.find(ref->var);
    if (it == st.end()) throw std::logic_error("state of unreachable variable " + ref->var);
    return it->second;
}

// ---- numeric feasibility ----

struct NumSystem {
    NumBound lo = NumBound::neg_inf();
    NumBound hi = NumBound::pos_inf();
    bool lo_open = false, hi_open = false;
    std::vector<Rational> muls, notmuls;

    void tighten_lo(const NumBound& b, bool open) {
        if (b.kind == NumBound::Kind::NegInf) return;
        if (lo.kind == NumBound::Kind::NegInf || b.kind == NumBound::Kind::PosInf ||
            (lo.is_finite() && b.is_finite() && b.value > lo.value)) {
            lo = b;
            lo_open = open;
        } else if (lo.is_finite() && b.is_finite() && b.value == lo.value) {
            lo_open = lo_open || open;
        }
    }
    void tighten_hi(const NumBound& b, bool open) {
        if (b.kind == NumBound::Kind::PosInf) return;
        if (hi.kind == NumBound::Kind::PosInf || b.kind == NumBound::Kind::NegInf ||
            (hi.is_finite() && b.is_finite() && b.value < hi.value)) {
            hi = b;
            hi_open = open;
        } else if (hi.is_finite() && b.is_finite() && b.value == hi.value) {
            hi_open = hi_open || open;
        }
    }

    bool interval_empty() const {
        if (lo.kind == NumBound::Kind::PosInf || hi.kind == NumBound::Kind::NegInf) return true;
        if (!lo.is_finite() || !hi.is_finite()) return false;
        if (lo.value > hi.value) return true;
        if (lo.value == hi.value) return lo_open || hi_open;
        return false;
    }

    bool admits(const Rational& x) const {
        if (lo.is_finite()) {
            if (lo_open ? x <= lo.value : x < lo.value) return false;
        } else if (lo.kind == NumBound::Kind::PosInf) {
            return false;
        }
        if (hi.is_finite()) {
            if (hi_open ? x >= hi.value : x > hi.value) return false;
        } else if (hi.kind == NumBound::Kind::NegInf) {
            return false;
        }
        for (const auto& m : muls)
            if (!x.is_multiple_of(m)) return false;
        for (const auto& nm : notmuls)
            if (x.is_multiple_of(nm)) return false;
        return true;
    }
};

VarState gen_num_group(const std::vector<SchemaPtr>& assertions, const PipelineOptions& opts) {
    NumSystem sys;
    for (const auto& a : assertions) {
        switch (a->kind) {
            case Schema::Kind::Betw:
                sys.tighten_lo(a->num_lo, false);
                sys.tighten_hi(a->num_hi, false);
                break;
            case Schema::Kind::XBetw:
                sys.tighten_lo(a->num_lo, true);
                sys.tighten_hi(a->num_hi, true);
                break;
            case Schema::Kind::MulOf: sys.muls.push_back(a->mul); break;
            case Schema::Kind::NotMulOf: sys.notmuls.push_back(a->mul); break;
            default: throw std::logic_error("unexpected assertion in a number group");
        }
    }
    if (sys.interval_empty()) return VarState::empty();

    if (!sys.muls.empty()) {
        Rational step = sys.muls[0];
        for (size_t i = 1; i < sys.muls.size(); ++i) step = Rational::lcm(step, sys.muls[i]);
        for (const auto& nm : sys.notmuls) {
            // every multiple of step is then a multiple of nm: no candidate
            if (step.is_multiple_of(nm)) return VarState::empty();
        }
        auto candidate = [&](const BigInt& k) { return Rational(k, BigInt(1)) * step; };
        bool lo_bounded = sys.lo.is_finite();
        bool hi_bounded = sys.hi.is_finite();
        BigInt kmin, kmax;
        if (lo_bounded) {
            kmin = (sys.lo.value / step).ceil();
            if (sys.lo_open && candidate(kmin) == sys.lo.value) kmin = kmin + BigInt(1);
        }
        if (hi_bounded) {
            kmax = (sys.hi.value / step).floor();
            if (sys.hi_open && candidate(kmax) == sys.hi.value) kmax = kmax - BigInt(1);
        }
        size_t scanned = 0;
        if (lo_bounded && hi_bounded) {
            for (BigInt k = kmin; k <= kmax; k = k + BigInt(1)) {
                if (++scanned > opts.max_numeric_scan)
                    throw BudgetExceededError("numeric lattice scan");
                Rational x = candidate(k);
                if (sys.admits(x)) return VarState::populated(JsonValue::number(x));
            }
            return VarState::empty();
        }
        // one or two unbounded sides: scan outward; a survivor exists within
        // the lcm of the forbidden residue periods
        long long dir = lo_bounded ? 1 : -1;
        for (size_t i = 0; i < opts.max_numeric_scan; ++i) {
            BigInt k;
            if (!lo_bounded && !hi_bounded) {
                // 0, 1, -1, 2, -2, ...
                long long step = static_cast<long long>((i + 1) / 2);
                k = BigInt(i % 2 == 1 ? step : -step);
            } else {
                k = (lo_bounded ? kmin : kmax) + BigInt(dir * static_cast<long long>(i));
            }
            Rational x = candidate(k);
            if (sys.admits(x)) return VarState::populated(JsonValue::number(x));
        }
        throw BudgetExceededError("numeric lattice scan");
    }

    // no multipleOf: prefer integers, then refine on a decimal grid
    auto integer_anchor = [&]() -> BigInt {
        if (sys.lo.is_finite()) {
            BigInt c = sys.lo.value.ceil();
            if (sys.lo_open && Rational(c, BigInt(1)) == sys.lo.value) c = c + BigInt(1);
            return c;
        }
        if (sys.hi.is_finite()) {
            BigInt c = sys.hi.value.floor();
            if (sys.hi_open && Rational(c, BigInt(1)) == sys.hi.value) c = c - BigInt(1);
            return c;
        }
        return BigInt(0);
    };
    BigInt anchor = integer_anchor();
    long long dir = sys.lo.is_finite() ? 1 : (sys.hi.is_finite() ? -1 : 1);
    for (long long i = 0; i < 200; ++i) {
        Rational x(anchor + BigInt(dir * i), BigInt(1));
        if (dir > 0 && sys.hi.is_finite() && x > sys.hi.value) break;
        if (dir < 0 && sys.lo.is_finite() && x < sys.lo.value) break;
        if (sys.admits(x)) return VarState::populated(JsonValue::number(x));
    }
    if (sys.notmuls.empty() && sys.lo.is_finite() && sys.hi.is_finite()) {
        // a narrow interval without integers: its midpoint is exact
        Rational mid = (sys.lo.value + sys.hi.value) / Rational(2);
        if (sys.admits(mid)) return VarState::populated(JsonValue::number(mid));
        if (sys.lo.value == sys.hi.value) return VarState::empty();
    }
    if (sys.lo.is_finite() && sys.hi.is_finite() && sys.lo.value == sys.hi.value) {
        return sys.admits(sys.lo.value) ? VarState::populated(JsonValue::number(sys.lo.value))
                                        : VarState::empty();
    }
    // decimal grid m / 10^e; for a large enough scale some point dodges all
    // notMulOf lattices while staying inside the interval
    unsigned base_scale = 1;
    auto scale_of = [&](const Rational& r) { return r.is_decimal() ? r.decimal_scale() : 0u; };
    if (sys.lo.is_finite()) base_scale = std::max(base_scale, scale_of(sys.lo.value) + 1);
    if (sys.hi.is_finite()) base_scale = std::max(base_scale, scale_of(sys.hi.value) + 1);
    for (unsigned e = base_scale; e < base_scale + 40; ++e) {
        Rational unit(BigInt(1), BigInt::pow10(e));
        BigInt m0;
        if (sys.lo.is_finite()) {
            m0 = (sys.lo.value / unit).ceil();
        } else if (sys.hi.is_finite()) {
            m0 = (sys.hi.value / unit).floor() - BigInt(2000);
        } else {
            m0 = BigInt(1);
        }
        for (int i = 0; i < 2000; ++i) {
            Rational x = Rational(m0 + BigInt(i), BigInt(1)) * unit;
            if (sys.admits(x)) return VarState::populated(JsonValue::number(x));
        }
    }
    throw BudgetExceededError("numeric grid scan");
}

} // namespace

VarState gen_base_group(const SchemaPtr& group, const PipelineOptions& opts) {
    assert(group->kind == Schema::Kind::Group && group->has_group_type);
    switch (group->type) {
        case JsonKind::Null: return VarState::populated(JsonValue::null());
        case JsonKind::Bool: {
            bool need_true = false, need_false = false;
            for (const auto& a : group->list) {
                assert(a->kind == Schema::Kind::IsBoolValue);
                (a->bvalue ? need_true : need_false) = true;
            }
            if (need_true && need_false) return VarState::empty();
            if (need_false) return VarState::populated(JsonValue::boolean(false));
            return VarState::populated(JsonValue::boolean(true));
        }
        case JsonKind::Str: {
            std::vector<re::PatternPtr> parts;
            for (const auto& a : group->list) {
                if (a->kind == Schema::Kind::PatternAssert)
                    parts.push_back(a->pattern.ptr);
                else if (a->kind == Schema::Kind::NotPattern)
                    parts.push_back(re::complement(a->pattern.ptr));
                else
                    throw std::logic_error("unexpected assertion in a string group");
            }
            auto dfa = re::compile(re::inter(std::move(parts)));
            auto words = re::example_words(*dfa, 1);
            if (words.empty()) return VarState::empty();
            return VarState::populated(JsonValue::string(words[0]));
        }
        case JsonKind::Num: return gen_num_group(group->list, opts);
        default:
            throw std::logic_error("gen_base_group on a non-base group");
    }
}

// ---- object groups ----

std::vector<std::vector<std::pair<PatternExpr, SchemaPtr>>> enumerate_choice_sets(
    const std::vector<std::vector<std::pair<PatternExpr, SchemaPtr>>>& requiring,
    const PipelineOptions& opts) {
    using Pair = std::pair<PatternExpr, SchemaPtr>;
    struct Candidate {
        std::vector<std::string> key; // sorted element keys
        std::vector<Pair> elems;
    };
    auto elem_key = [](const Pair& p) {
        return std::to_string(p.first.ptr->id) + "/" + canon_string(p.second);
    };

    if (requiring.empty()) return {{}};
    for (const auto& alts : requiring) {
        if (alts.empty()) return {};
    }
    std::vector<Candidate> sets;
    std::set<std::vector<std::string>> seen;
    std::vector<size_t> idx(requiring.size(), 0);
    size_t raw = 0;
    while (true) {
        if (++raw > opts.max_tuples * 64)
            throw BudgetExceededError("object choice tuples");
        std::map<std::string, Pair> chosen;
        for (size_t q = 0; q < requiring.size(); ++q) {
            const Pair& p = requiring[q][idx[q]];
            chosen.emplace(elem_key(p), p);
        }
        Candidate c;
        for (auto& [k, p] : chosen) {
            c.key.push_back(k);
            c.elems.push_back(p);
        }
        if (seen.insert(c.key).second) {
            sets.push_back(std::move(c));
            if (sets.size() > opts.max_tuples)
                throw BudgetExceededError("object choice tuples");
        }
        // advance the index vector
        size_t q = 0;
        while (q < requiring.size()) {
            if (++idx[q] < requiring[q].size()) break;
            idx[q] = 0;
            ++q;
        }
        if (q == requiring.size()) break;
    }

    // keep minimal sets only, smallest first
    std::sort(sets.begin(), sets.end(), [](const Candidate& a, const Candidate& b) {
        if (a.key.size() != b.key.size()) return a.key.size() < b.key.size();
        return a.key < b.key;
    });
    std::vector<Candidate> kept;
    for (const auto& c : sets) {
        bool dominated = false;
        for (const auto& k : kept) {
            if (std::includes(c.key.begin(), c.key.end(), k.key.begin(), k.key.end())) {
                dominated = true;
                break;
            }
        }
        if (!dominated) kept.push_back(c);
    }
    std::vector<std::vector<Pair>> out;
    out.reserve(kept.size());
    for (auto& c : kept) out.push_back(std::move(c.elems));
    return out;
}

VarState gen_object_group(const PreparedObjectGroup& g, const StateMap& snapshot,
                          const SchemaPtr& group_node, const Environment& env,
                          const PipelineOptions& opts) {
    bool has_open = false;
    auto choice_sets = enumerate_choice_sets(g.requiring, opts);

    for (const auto& set : choice_sets) {
        if (!g.pro_hi.ge(set.size())) continue; // more members than allowed
        bool feasible = true;
        bool pending = false;
        // values per element
        std::vector<JsonValue> values;
        for (const auto& [pat, schema] : set) {
            VarState st = state_of(schema, snapshot);
            if (st.kind == VarState::Kind::Empty) {
                feasible = false;
                break;
            }
            if (st.is_open()) {
                pending = true;
                break;
            }
            values.push_back(st.witness);
        }
        if (pending) {
            has_open = true;
            continue;
        }
        if (!feasible) continue;

        // distinct names: elements sharing one pattern draw successive words
        std::map<const re::Pattern*, size_t> need;
        for (const auto& [pat, schema] : set) need[pat.ptr]++;
        std::map<const re::Pattern*, std::vector<std::string>> words;
        for (auto& [ptr, count] : need) {
            auto ws = re::example_words(*re::compile(ptr), count);
            if (ws.size() < count) {
                feasible = false;
                break;
            }
            words[ptr] = std::move(ws);
        }
        if (!feasible) continue;

        std::set<std::string> used;
        JsonValue::Object members;
        {
            std::map<const re::Pattern*, size_t> next;
            for (size_t i = 0; i < set.size(); ++i) {
                const auto& pat = set[i].first;
                std::string name = words[pat.ptr][next[pat.ptr]++];
                used.insert(name);
                members.emplace_back(std::move(name), values[i]);
            }
        }

        // pad up to the pro lower bound from the constraining partition
        bool padding_open = false;
        if (members.size() < g.pro_lo) {
            size_t needed = g.pro_lo - members.size();
            for (const auto& [pat, schema] : g.constraining) {
                if (needed == 0) break;
                JsonValue value;
                if (schema->kind == Schema::Kind::True_) {
                    value = JsonValue::null();
                } else if (schema->kind == Schema::Kind::False_) {
                    continue;
                } else {
                    VarState st = state_of(schema, snapshot);
                    if (st.is_open()) {
                        padding_open = true;
                        continue;
                    }
                    if (st.kind == VarState::Kind::Empty) continue;
                    value = st.witness;
                }
                auto ws = re::example_words(*re::compile(pat.ptr), needed + used.size());
                for (const auto& w : ws) {
                    if (needed == 0) break;
                    if (used.count(w)) continue;
                    used.insert(w);
                    members.emplace_back(w, value);
                    --needed;
                }
            }
            if (needed > 0) {
                if (padding_open) has_open = true;
                continue;
            }
        }

        std::sort(members.begin(), members.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        JsonValue obj = JsonValue::object(std::move(members));
        if (validate(obj, group_node, env)) return VarState::populated(std::move(obj));
        // construction always satisfies the prepared group; a failure would
        // signal an inconsistency, so fall through to the next choice
    }
    return has_open ? VarState::open() : VarState::empty();
}

// ---- array groups ----

namespace {

// enumerate combinations of `choose` positions out of [0, total)
bool next_combination(std::vector<size_t>& comb, size_t total) {
    size_t k = comb.size();
    for (size_t i = k; i-- > 0;) {
        if (comb[i] < total - (k - i)) {
            ++comb[i];
            for (size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

VarState gen_array_group(const PreparedArrayGroup& g, const StateMap& snapshot,
                         const SchemaPtr& group_node, const Environment& env,
                         const ConjResolver& resolver, const PipelineOptions& opts) {
    if (g.has_uniqueness)
        throw UnsupportedUniquenessError("array group reachable from the root");

    // structural maximum length
    bool unbounded = g.size_hi.inf;
    uint64_t max_len = g.size_hi.inf ? UINT64_MAX : g.size_hi.n;
    if (g.tail->kind == Schema::Kind::False_) {
        max_len = std::min<uint64_t>(max_len, g.prefix.size());
        unbounded = false;
    }
    for (size_t i = 0; i < g.prefix.size(); ++i) {
        if (g.prefix[i]->kind == Schema::Kind::False_) {
            max_len = std::min<uint64_t>(max_len, i);
            unbounded = false;
        }
    }
    uint64_t sum_contains = 0;
    for (const auto& c : g.contains) sum_contains += c.lo;
    uint64_t budget = opts.max_array_length
                          ? opts.max_array_length
                          : std::max<uint64_t>(g.size_lo, sum_contains) + g.prefix.size() + 2;
    bool truncated = unbounded || max_len > budget;
    uint64_t top = std::min<uint64_t>(max_len, budget);

    bool has_open = false;
    bool post_validation_failed = false;
    size_t tuples = 0;
    size_t n = g.contains.size();
    bool any_finite = false;
    for (const auto& c : g.contains)
        if (!c.hi.inf) any_finite = true;

    for (uint64_t len = g.size_lo; len <= top; ++len) {
        // per-contains occurrence counts: finite upper bounds enumerate
        // [lo, min(hi, len)], unbounded ones place exactly lo (extras are
        // free to appear)
        std::vector<uint64_t> kmin(n), kmax(n), counts(n);
        bool impossible = false;
        for (size_t i = 0; i < n; ++i) {
            kmin[i] = g.contains[i].lo;
            kmax[i] = g.contains[i].hi.inf ? kmin[i]
                                           : std::min<uint64_t>(g.contains[i].hi.n, len);
            if (kmin[i] > len || kmin[i] > kmax[i]) {
                impossible = true;
                break;
            }
            counts[i] = kmin[i];
        }
        if (impossible) continue;

        bool more_counts = true;
        while (more_counts) {
            // position choices for the current count vector
            std::vector<std::vector<size_t>> combs(n);
            for (size_t i = 0; i < n; ++i) {
                combs[i].resize(counts[i]);
                for (size_t j = 0; j < combs[i].size(); ++j) combs[i][j] = j;
            }
            while (true) {
                if (++tuples > opts.max_tuples) throw BudgetExceededError("array assignments");
                std::vector<uint64_t> mask(len, 0);
                for (size_t i = 0; i < combs.size(); ++i)
                    for (size_t pos : combs[i]) mask[pos] |= 1ull << i;

                bool feasible = true;
                JsonValue::Array items;
                for (uint64_t pos = 0; pos < len && feasible; ++pos) {
                    SchemaPtr cell;
                    if (mask[pos] == 0 && !any_finite) {
                        cell = g.base_at(pos);
                    } else {
                        cell = resolver.resolve(
                            array_cell_factors(g, mask[pos], g.base_at(pos), env));
                        if (!cell)
                            throw std::logic_error(
                                "missing precomputed conjunction for array cell");
                    }
                    if (cell->kind == Schema::Kind::False_) {
                        feasible = false;
                    } else if (cell->kind == Schema::Kind::True_) {
                        items.push_back(JsonValue::null());
                    } else {
                        VarState st = state_of(cell, snapshot);
                        if (st.is_open()) {
                            has_open = true;
                            feasible = false;
                        } else if (st.kind == VarState::Kind::Empty) {
                            feasible = false;
                        } else {
                            items.push_back(st.witness);
                        }
                    }
                }
                if (feasible) {
                    JsonValue arr = JsonValue::array(std::move(items));
                    if (validate(arr, group_node, env))
                        return VarState::populated(std::move(arr));
                    post_validation_failed = true;
                }
                // advance the position assignment
                size_t i = 0;
                while (i < combs.size() && !next_combination(combs[i], len)) {
                    for (size_t j = 0; j < combs[i].size(); ++j) combs[i][j] = j;
                    ++i;
                }
                if (i == combs.size()) break;
                if (combs.empty()) break;
            }
            // advance the count vector
            size_t i = 0;
            while (i < n && counts[i] == kmax[i]) {
                counts[i] = kmin[i];
                ++i;
            }
            if (i == n) {
                more_counts = false;
            } else {
                ++counts[i];
            }
            if (n == 0) more_counts = false;
        }
    }

    if (has_open) return VarState::open();
    if (truncated && post_validation_failed)
        throw BudgetExceededError("array length budget with near-miss candidates");
    return VarState::empty();
}

// ---- fixpoint driver ----

VarState eval_variable(const std::string& name, const StateMap& snapshot, const Environment& env,
                       const ConjResolver& resolver, const PipelineOptions& opts) {
    bool any_open = false;
    for (const auto& group : body_disjuncts(env.body(name))) {
        if (group->kind == Schema::Kind::Group && group->has_group_type) {
            VarState result;
            switch (group->type) {
                case JsonKind::Obj: {
                    PreparedObjectGroup view = object_view(group);
                    result = gen_object_group(view, snapshot, group, env, opts);
                    break;
                }
                case JsonKind::Arr: {
                    PreparedArrayGroup view = array_view(group);
                    result = gen_array_group(view, snapshot, group, env, resolver, opts);
                    break;
                }
                default:
                    result = gen_base_group(group, opts);
            }
            if (result.is_populated()) return result;
            if (result.is_open()) any_open = true;
        } else {
            throw std::logic_error("non-group disjunct in variable " + name);
        }
    }
    return any_open ? VarState::open() : VarState::empty();
}

namespace {

void reachable_from(const Environment& env, const std::string& root,
                    std::set<std::string>& out) {
    std::deque<std::string> work{root};
    while (!work.empty()) {
        std::string name = work.front();
        work.pop_front();
        if (!out.insert(name).second) continue;
        std::function<void(const SchemaPtr&)> walk = [&](const SchemaPtr& s) {
            switch (s->kind) {
                case Schema::Kind::Ref: work.push_back(s->var); break;
                case Schema::Kind::And:
                case Schema::Kind::Or:
                case Schema::Kind::Group:
                    for (const auto& p : s->list) walk(p);
                    break;
                case Schema::Kind::Not:
                case Schema::Kind::Prop:
                case Schema::Kind::PattReq:
                case Schema::Kind::Items:
                case Schema::Kind::Contains:
                    walk(s->arg);
                    break;
                case Schema::Kind::Ite:
                    for (const auto& p : s->list) walk(p);
                    walk(s->arg);
                    break;
                case Schema::Kind::OrPattReq:
                    for (const auto& [p, v] : s->alts) walk(v);
                    break;
                default: break;
            }
        };
        walk(env.body(name));
    }
}

bool group_has_uniqueness(const SchemaPtr& body) {
    for (const auto& g : body_disjuncts(body)) {
        if (g->kind != Schema::Kind::Group) continue;
        for (const auto& a : g->list)
            if (a->kind == Schema::Kind::UniqueItems || a->kind == Schema::Kind::RepeatedItems)
                return true;
    }
    return false;
}

} // namespace

FixpointOutcome run_fixpoint(const Environment& env, const PipelineOptions& opts) {
    ConjResolver resolver(env);
    std::set<std::string> reachable;
    reachable_from(env, env.active(), reachable);
    // array generation pulls in precomputed conjunction cells that the plain
    // reference walk cannot see
    for (bool grew = true; grew;) {
        grew = false;
        std::set<std::string> snapshot = reachable;
        for (const auto& name : snapshot) {
            for (const auto& g : body_disjuncts(env.body(name))) {
                if (g->kind != Schema::Kind::Group || !g->has_group_type ||
                    g->type != JsonKind::Arr || !g->prepared)
                    continue;
                PreparedArrayGroup view = array_view(g);
                std::vector<SchemaPtr> slots = view.prefix;
                slots.push_back(view.tail);
                for (uint64_t mask = 0; mask < (1ull << view.contains.size()); ++mask) {
                    for (const auto& slot : slots) {
                        if (slot->kind == Schema::Kind::False_) continue;
                        SchemaPtr cell = resolver.resolve(array_cell_factors(view, mask, slot, env));
                        if (cell && cell->kind == Schema::Kind::Ref &&
                            !reachable.count(cell->var)) {
                            reachable_from(env, cell->var, reachable);
                            grew = true;
                        }
                    }
                }
            }
        }
    }
    for (const auto& name : reachable) {
        if (group_has_uniqueness(env.body(name)))
            throw UnsupportedUniquenessError("variable " + name);
    }
    FixpointOutcome out;
    for (const auto& name : reachable) out.states.emplace(name, VarState::open());

    for (size_t pass = 1; pass <= reachable.size() + 1; ++pass) {
        out.passes = pass;
        StateMap snapshot = out.states;
        bool changed = false;
        for (const auto& name : env.order()) {
            if (!reachable.count(name) || !out.states[name].is_open()) continue;
            VarState ns = eval_variable(name, snapshot, env, resolver, opts);
            if (!ns.is_open()) {
                out.states[name] = std::move(ns);
                changed = true;
            }
        }
        const VarState& root = out.states[env.active()];
        if (root.is_populated()) {
            out.satisfiable = true;
            out.witness = root.witness;
            return out;
        }
        if (root.kind == VarState::Kind::Empty || !changed) {
            out.satisfiable = false;
            return out;
        }
    }
    throw std::logic_error("fixpoint did not converge within the variable count");
}

// ---- top-level deciders ----

WitnessResult generate_witness(const Environment& env, const PipelineOptions& opts) {
    Environment prepared = normalize_for_generation(env, opts);
    FixpointOutcome fx = run_fixpoint(prepared, opts);
    WitnessResult r;
    r.satisfiable = fx.satisfiable;
    if (fx.satisfiable) {
        r.witness = fx.witness;
        if (!validate(r.witness, env))
            throw std::logic_error("generated witness fails the source schema");
    }
    return r;
}

bool check_satisfiable(const Environment& env, const PipelineOptions& opts) {
    return generate_witness(env, opts).satisfiable;
}

namespace {

SchemaPtr rename_refs(const SchemaPtr& s, const std::unordered_map<std::string, std::string>& map) {
    switch (s->kind) {
        case Schema::Kind::Ref: {
            auto it = map.find(s->var);
            return it == map.end() ? s : s_ref(it->second);
        }
        case Schema::Kind::And:
        case Schema::Kind::Or:
        case Schema::Kind::Group: {
            std::vector<SchemaPtr> out;
            out.reserve(s->list.size());
            for (const auto& p : s->list) out.push_back(rename_refs(p, map));
            if (s->kind == Schema::Kind::And) return s_and(std::move(out));
            if (s->kind == Schema::Kind::Or) return s_or(std::move(out));
            return s_group(std::move(out),
                           s->has_group_type ? std::optional<JsonKind>(s->type) : std::nullopt,
                           s->prepared);
        }
        case Schema::Kind::Not: return s_not(rename_refs(s->arg, map));
        case Schema::Kind::Prop: return s_prop(s->pattern, rename_refs(s->arg, map));
        case Schema::Kind::PattReq: return s_pattreq(s->pattern, rename_refs(s->arg, map));
        case Schema::Kind::Items: return s_items(s->lo, s->hi, rename_refs(s->arg, map));
        case Schema::Kind::Contains: return s_contains(s->lo, s->hi, rename_refs(s->arg, map));
        case Schema::Kind::Ite: {
            std::vector<SchemaPtr> prefix;
            prefix.reserve(s->list.size());
            for (const auto& p : s->list) prefix.push_back(rename_refs(p, map));
            return s_ite(std::move(prefix), rename_refs(s->arg, map));
        }
        case Schema::Kind::OrPattReq: {
            std::vector<std::pair<PatternExpr, SchemaPtr>> alts;
            for (const auto& [p, v] : s->alts) alts.emplace_back(p, rename_refs(v, map));
            return s_orpattreq(std::move(alts));
        }
        default: return s;
    }
}

void import_renamed(const Environment& src, const std::string& prefix, Environment& dst,
                    std::unordered_map<std::string, std::string>& map) {
    for (const auto& name : src.order()) map[name] = prefix + name;
    for (const auto& name : src.order())
        dst.define(map[name], rename_refs(src.body(name), map));
    for (const auto& name : src.order()) {
        if (src.has_complement(name) && !dst.has_complement(map[name]))
            dst.set_complement(map[name], map[src.complement_of(name)]);
    }
}

} // namespace

Environment conjoin_with_negation(const Environment& a, const Environment& b) {
    Environment merged;
    std::unordered_map<std::string, std::string> amap, bmap;
    import_renamed(a, "a:", merged, amap);
    import_renamed(b, "b:", merged, bmap);
    merged.define("root:", s_and({s_ref(amap.at(a.active())),
                                  s_not(s_ref(bmap.at(b.active())))}));
    merged.set_active("root:");
    return merged;
}

InclusionResult check_inclusion(const Environment& a, const Environment& b,
                                const PipelineOptions& opts) {
    Environment query = conjoin_with_negation(a, b);
    WitnessResult w = generate_witness(query, opts);
    InclusionResult r;
    if (!w.satisfiable) {
        r.included = true;
        return r;
    }
    r.included = false;
    r.counterexample = w.witness;
    if (!validate(r.counterexample, a) || validate(r.counterexample, b))
        throw std::logic_error("inclusion counterexample fails its defining property");
    return r;
}

EquivalenceResult check_equivalence(const Environment& a, const Environment& b,
                                    const PipelineOptions& opts) {
    EquivalenceResult r;
    InclusionResult ab = check_inclusion(a, b, opts);
    if (!ab.included) {
        r.equivalent = false;
        r.direction = 1;
        r.counterexample = ab.counterexample;
        return r;
    }
    InclusionResult ba = check_inclusion(b, a, opts);
    if (!ba.included) {
        r.equivalent = false;
        r.direction = 2;
        r.counterexample = ba.counterexample;
        return r;
    }
    r.equivalent = true;
    return r;
}

} // namespace jsw
