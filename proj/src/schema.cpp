#include "jsw/schema.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace jsw {

namespace {

std::shared_ptr<Schema> make(Schema::Kind k) {
    auto s = std::make_shared<Schema>();
    s->kind = k;
    return s;
}

} // namespace

SchemaPtr s_true() {
    static SchemaPtr s = make(Schema::Kind::True_);
    return s;
}

SchemaPtr s_false() {
    static SchemaPtr s = make(Schema::Kind::False_);
    return s;
}

SchemaPtr s_bool_value(bool b) {
    auto s = make(Schema::Kind::IsBoolValue);
    s->bvalue = b;
    return s;
}

SchemaPtr s_pattern(PatternExpr p) {
    auto s = make(Schema::Kind::PatternAssert);
    s->pattern = std::move(p);
    return s;
}

SchemaPtr s_pattern(const std::string& ecma) { return s_pattern(search_pattern(ecma)); }

SchemaPtr s_not_pattern(PatternExpr p) {
    auto s = make(Schema::Kind::NotPattern);
    s->pattern = std::move(p);
    return s;
}

SchemaPtr s_betw(NumBound lo, NumBound hi) {
    auto s = make(Schema::Kind::Betw);
    s->num_lo = std::move(lo);
    s->num_hi = std::move(hi);
    return s;
}

SchemaPtr s_xbetw(NumBound lo, NumBound hi) {
    auto s = make(Schema::Kind::XBetw);
    s->num_lo = std::move(lo);
    s->num_hi = std::move(hi);
    return s;
}

SchemaPtr s_mulof(Rational n) {
    if (n.sign() <= 0) throw std::invalid_argument("mulOf expects a positive number");
    auto s = make(Schema::Kind::MulOf);
    s->mul = std::move(n);
    return s;
}

SchemaPtr s_not_mulof(Rational n) {
    if (n.sign() <= 0) throw std::invalid_argument("notMulOf expects a positive number");
    auto s = make(Schema::Kind::NotMulOf);
    s->mul = std::move(n);
    return s;
}

SchemaPtr s_pro(uint64_t lo, Count hi) {
    auto s = make(Schema::Kind::Pro);
    s->lo = lo;
    s->hi = hi;
    return s;
}

SchemaPtr s_prop(PatternExpr r, SchemaPtr body) {
    auto s = make(Schema::Kind::Prop);
    s->pattern = std::move(r);
    s->arg = std::move(body);
    return s;
}

SchemaPtr s_pattreq(PatternExpr r, SchemaPtr body) {
    auto s = make(Schema::Kind::PattReq);
    s->pattern = std::move(r);
    s->arg = std::move(body);
    return s;
}

SchemaPtr s_orpattreq(std::vector<std::pair<PatternExpr, SchemaPtr>> alts) {
    auto s = make(Schema::Kind::OrPattReq);
    s->alts = std::move(alts);
    return s;
}

SchemaPtr s_items(uint64_t lo, Count hi, SchemaPtr body) {
    assert(lo >= 1);
    auto s = make(Schema::Kind::Items);
    s->lo = lo;
    s->hi = hi;
    s->arg = std::move(body);
    return s;
}

SchemaPtr s_ite(std::vector<SchemaPtr> prefix, SchemaPtr tail) {
    auto s = make(Schema::Kind::Ite);
    s->list = std::move(prefix);
    s->arg = std::move(tail);
    return s;
}

SchemaPtr s_contains(uint64_t lo, Count hi, SchemaPtr body) {
    auto s = make(Schema::Kind::Contains);
    s->lo = lo;
    s->hi = hi;
    s->arg = std::move(body);
    return s;
}

SchemaPtr s_unique_items() {
    static SchemaPtr s = make(Schema::Kind::UniqueItems);
    return s;
}

SchemaPtr s_repeated_items() {
    static SchemaPtr s = make(Schema::Kind::RepeatedItems);
    return s;
}

SchemaPtr s_type(JsonKind t) {
    auto s = make(Schema::Kind::TypeAssert);
    s->type = t;
    return s;
}

SchemaPtr s_and(std::vector<SchemaPtr> list) {
    if (list.empty()) return s_true();
    if (list.size() == 1) return list[0];
    auto s = make(Schema::Kind::And);
    s->list = std::move(list);
    return s;
}

SchemaPtr s_or(std::vector<SchemaPtr> list) {
    if (list.empty()) return s_false();
    if (list.size() == 1) return list[0];
    auto s = make(Schema::Kind::Or);
    s->list = std::move(list);
    return s;
}

SchemaPtr s_group(std::vector<SchemaPtr> list, std::optional<JsonKind> type, bool prepared) {
    auto s = make(Schema::Kind::Group);
    s->list = std::move(list);
    if (type) {
        s->has_group_type = true;
        s->type = *type;
    }
    s->prepared = prepared;
    return s;
}

SchemaPtr s_not(SchemaPtr inner) {
    auto s = make(Schema::Kind::Not);
    s->arg = std::move(inner);
    return s;
}

SchemaPtr s_ref(std::string var) {
    auto s = make(Schema::Kind::Ref);
    s->var = std::move(var);
    return s;
}

namespace {

std::string escape_ecma_literal(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (std::string_view("[](){}.*+?^$|\\-/").find(c) != std::string_view::npos)
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

} // namespace

PatternExpr key_pattern(const std::string& name) {
    return PatternExpr{re::name_literal(name), "^" + escape_ecma_literal(name) + "$"};
}

PatternExpr search_pattern(const std::string& ecma) {
    return PatternExpr{re::parse_search_pattern(ecma), ecma};
}

// ---- structural equality / hashing ----

bool schema_equal(const SchemaPtr& a, const SchemaPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Schema::Kind::True_:
        case Schema::Kind::False_:
        case Schema::Kind::UniqueItems:
        case Schema::Kind::RepeatedItems:
            return true;
        case Schema::Kind::IsBoolValue: return a->bvalue == b->bvalue;
        case Schema::Kind::PatternAssert:
        case Schema::Kind::NotPattern:
            return a->pattern.ptr == b->pattern.ptr;
        case Schema::Kind::Betw:
        case Schema::Kind::XBetw:
            return a->num_lo == b->num_lo && a->num_hi == b->num_hi;
        case Schema::Kind::MulOf:
        case Schema::Kind::NotMulOf:
            return a->mul == b->mul;
        case Schema::Kind::Pro: return a->lo == b->lo && a->hi == b->hi;
        case Schema::Kind::Prop:
        case Schema::Kind::PattReq:
            return a->pattern.ptr == b->pattern.ptr && schema_equal(a->arg, b->arg);
        case Schema::Kind::OrPattReq: {
            if (a->alts.size() != b->alts.size()) return false;
            for (size_t i = 0; i < a->alts.size(); ++i) {
                if (a->alts[i].first.ptr != b->alts[i].first.ptr ||
                    !schema_equal(a->alts[i].second, b->alts[i].second))
                    return false;
            }
            return true;
        }
        case Schema::Kind::Items:
        case Schema::Kind::Contains:
            return a->lo == b->lo && a->hi == b->hi && schema_equal(a->arg, b->arg);
        case Schema::Kind::Ite: {
            if (a->list.size() != b->list.size() || !schema_equal(a->arg, b->arg)) return false;
            for (size_t i = 0; i < a->list.size(); ++i)
                if (!schema_equal(a->list[i], b->list[i])) return false;
            return true;
        }
        case Schema::Kind::TypeAssert: return a->type == b->type;
        case Schema::Kind::And:
        case Schema::Kind::Or:
        case Schema::Kind::Group: {
            if (a->kind == Schema::Kind::Group &&
                (a->has_group_type != b->has_group_type ||
                 (a->has_group_type && a->type != b->type) || a->prepared != b->prepared))
                return false;
            if (a->list.size() != b->list.size()) return false;
            for (size_t i = 0; i < a->list.size(); ++i)
                if (!schema_equal(a->list[i], b->list[i])) return false;
            return true;
        }
        case Schema::Kind::Not: return schema_equal(a->arg, b->arg);
        case Schema::Kind::Ref: return a->var == b->var;
    }
    return false;
}

size_t schema_hash(const SchemaPtr& s) {
    if (!s) return 0;
    size_t h = static_cast<size_t>(s->kind) * 0x9e3779b97f4a7c15ull;
    auto mix = [&h](size_t v) { h = (h ^ v) * 1099511628211ull; };
    switch (s->kind) {
        case Schema::Kind::IsBoolValue: mix(s->bvalue); break;
        case Schema::Kind::PatternAssert:
        case Schema::Kind::NotPattern: mix(s->pattern.ptr->id); break;
        case Schema::Kind::Betw:
        case Schema::Kind::XBetw:
            mix(static_cast<size_t>(s->num_lo.kind));
            if (s->num_lo.is_finite()) mix(s->num_lo.value.hash());
            mix(static_cast<size_t>(s->num_hi.kind));
            if (s->num_hi.is_finite()) mix(s->num_hi.value.hash());
            break;
        case Schema::Kind::MulOf:
        case Schema::Kind::NotMulOf: mix(s->mul.hash()); break;
        case Schema::Kind::Pro:
            mix(s->lo);
            mix(s->hi.inf ? SIZE_MAX : s->hi.n);
            break;
        case Schema::Kind::Prop:
        case Schema::Kind::PattReq:
            mix(s->pattern.ptr->id);
            mix(schema_hash(s->arg));
            break;
        case Schema::Kind::OrPattReq:
            for (const auto& [p, v] : s->alts) {
                mix(p.ptr->id);
                mix(schema_hash(v));
            }
            break;
        case Schema::Kind::Items:
        case Schema::Kind::Contains:
            mix(s->lo);
            mix(s->hi.inf ? SIZE_MAX : s->hi.n);
            mix(schema_hash(s->arg));
            break;
        case Schema::Kind::Ite:
            for (const auto& p : s->list) mix(schema_hash(p));
            mix(schema_hash(s->arg));
            break;
        case Schema::Kind::TypeAssert: mix(static_cast<size_t>(s->type)); break;
        case Schema::Kind::And:
        case Schema::Kind::Or:
        case Schema::Kind::Group:
            if (s->kind == Schema::Kind::Group) {
                mix(s->has_group_type ? 1 + static_cast<size_t>(s->type) : 0);
                mix(s->prepared);
            }
            for (const auto& p : s->list) mix(schema_hash(p));
            break;
        case Schema::Kind::Not: mix(schema_hash(s->arg)); break;
        case Schema::Kind::Ref: mix(std::hash<std::string>()(s->var)); break;
        default: break;
    }
    return h;
}

std::optional<JsonKind> assertion_kind(const Schema& s) {
    switch (s.kind) {
        case Schema::Kind::IsBoolValue: return JsonKind::Bool;
        case Schema::Kind::PatternAssert:
        case Schema::Kind::NotPattern: return JsonKind::Str;
        case Schema::Kind::Betw:
        case Schema::Kind::XBetw:
        case Schema::Kind::MulOf:
        case Schema::Kind::NotMulOf: return JsonKind::Num;
        case Schema::Kind::Pro:
        case Schema::Kind::Prop:
        case Schema::Kind::PattReq:
        case Schema::Kind::OrPattReq: return JsonKind::Obj;
        case Schema::Kind::Items:
        case Schema::Kind::Ite:
        case Schema::Kind::Contains:
        case Schema::Kind::UniqueItems:
        case Schema::Kind::RepeatedItems: return JsonKind::Arr;
        case Schema::Kind::TypeAssert: return s.type;
        default: return std::nullopt;
    }
}

// ---- derived operators ----

SchemaPtr encode_type(JsonKind t) {
    switch (t) {
        case JsonKind::Str:
            return s_not(s_and({s_pattern(search_pattern("^$")), s_pattern(search_pattern("."))}));
        case JsonKind::Num:
            return s_not(s_and({s_betw(NumBound::finite(Rational(0)), NumBound::finite(Rational(0))),
                                s_betw(NumBound::finite(Rational(1)), NumBound::finite(Rational(1)))}));
        case JsonKind::Bool:
            return s_not(s_and({s_bool_value(true), s_bool_value(false)}));
        case JsonKind::Obj:
            return s_not(s_and({s_pro(0, Count::of(0)), s_pro(1, Count::of(1))}));
        case JsonKind::Arr:
            return s_not(s_and({s_items(1, Count::of(1), s_false()),
                                s_contains(1, Count::infinite(), s_true())}));
        case JsonKind::Null: {
            std::vector<SchemaPtr> parts;
            for (JsonKind other : {JsonKind::Str, JsonKind::Num, JsonKind::Bool, JsonKind::Obj,
                                   JsonKind::Arr})
                parts.push_back(s_not(encode_type(other)));
            return s_and(std::move(parts));
        }
    }
    return s_true();
}

SchemaPtr expand_ite(const std::vector<SchemaPtr>& prefix, const SchemaPtr& tail) {
    std::vector<SchemaPtr> parts;
    for (size_t i = 0; i < prefix.size(); ++i) {
        uint64_t pos = i + 1;
        parts.push_back(s_items(pos, Count::of(pos), prefix[i]));
    }
    parts.push_back(s_items(prefix.size() + 1, Count::infinite(), tail));
    return s_and(std::move(parts));
}

SchemaPtr req(const std::string& key) {
    return s_or({s_not(s_type(JsonKind::Obj)), s_not(s_prop(key_pattern(key), s_false()))});
}

// ---- bound normalization ----

namespace {

SchemaPtr type_complement(JsonKind t) {
    std::vector<SchemaPtr> others;
    for (JsonKind k : {JsonKind::Null, JsonKind::Bool, JsonKind::Num, JsonKind::Str, JsonKind::Obj,
                       JsonKind::Arr}) {
        if (k != t) others.push_back(s_type(k));
    }
    return s_or(std::move(others));
}

bool bounds_empty_closed(const NumBound& lo, const NumBound& hi) {
    if (lo.kind == NumBound::Kind::PosInf || hi.kind == NumBound::Kind::NegInf) return true;
    if (lo.is_finite() && hi.is_finite()) return lo.value > hi.value;
    return false;
}

bool bounds_empty_open(const NumBound& lo, const NumBound& hi) {
    if (lo.kind == NumBound::Kind::PosInf || hi.kind == NumBound::Kind::NegInf) return true;
    if (lo.is_finite() && hi.is_finite()) return lo.value >= hi.value;
    return false;
}

} // namespace

SchemaPtr bound_normalize(const SchemaPtr& s) {
    switch (s->kind) {
        case Schema::Kind::Pro:
            if (s->lo == 0 && s->hi.inf) return s_true();
            if (!s->hi.inf && s->lo > s->hi.n) return type_complement(JsonKind::Obj);
            return s;
        case Schema::Kind::Betw:
            if (s->num_lo.kind == NumBound::Kind::NegInf && s->num_hi.kind == NumBound::Kind::PosInf)
                return s_true();
            if (bounds_empty_closed(s->num_lo, s->num_hi)) return type_complement(JsonKind::Num);
            return s;
        case Schema::Kind::XBetw:
            if (s->num_lo.kind == NumBound::Kind::NegInf && s->num_hi.kind == NumBound::Kind::PosInf)
                return s_true();
            if (bounds_empty_open(s->num_lo, s->num_hi)) return type_complement(JsonKind::Num);
            return s;
        case Schema::Kind::Contains: {
            SchemaPtr body = bound_normalize(s->arg);
            if (s->lo == 0 && s->hi.inf) return s_true();
            if (!s->hi.inf && s->lo > s->hi.n) return type_complement(JsonKind::Arr);
            if (body->kind == Schema::Kind::False_) {
                // nothing can satisfy f, so the count is always 0
                return s->lo == 0 ? s_true() : type_complement(JsonKind::Arr);
            }
            if (body == s->arg) return s;
            return s_contains(s->lo, s->hi, body);
        }
        case Schema::Kind::Items: {
            SchemaPtr body = bound_normalize(s->arg);
            if (!s->hi.inf && s->lo > s->hi.n) return s_true(); // empty position range
            if (body->kind == Schema::Kind::True_) return s_true();
            if (body == s->arg) return s;
            return s_items(s->lo, s->hi, body);
        }
        case Schema::Kind::Ite: {
            std::vector<SchemaPtr> prefix;
            bool all_true = true;
            for (const auto& p : s->list) {
                prefix.push_back(bound_normalize(p));
                all_true = all_true && prefix.back()->kind == Schema::Kind::True_;
            }
            SchemaPtr tail = bound_normalize(s->arg);
            if (all_true && tail->kind == Schema::Kind::True_) return s_true();
            return s_ite(std::move(prefix), std::move(tail));
        }
        case Schema::Kind::Prop: {
            SchemaPtr body = bound_normalize(s->arg);
            if (body->kind == Schema::Kind::True_) return s_true();
            if (body == s->arg) return s;
            return s_prop(s->pattern, body);
        }
        case Schema::Kind::PattReq: {
            SchemaPtr body = bound_normalize(s->arg);
            if (body == s->arg) return s;
            return s_pattreq(s->pattern, body);
        }
        case Schema::Kind::OrPattReq: {
            std::vector<std::pair<PatternExpr, SchemaPtr>> alts;
            for (const auto& [p, v] : s->alts) alts.emplace_back(p, bound_normalize(v));
            return s_orpattreq(std::move(alts));
        }
        case Schema::Kind::And: {
            std::vector<SchemaPtr> parts;
            for (const auto& p : s->list) {
                SchemaPtr q = bound_normalize(p);
                if (q->kind == Schema::Kind::False_) return s_false();
                if (q->kind != Schema::Kind::True_) parts.push_back(std::move(q));
            }
            return s_and(std::move(parts));
        }
        case Schema::Kind::Or: {
            std::vector<SchemaPtr> parts;
            for (const auto& p : s->list) {
                SchemaPtr q = bound_normalize(p);
                if (q->kind == Schema::Kind::True_) return s_true();
                if (q->kind != Schema::Kind::False_) parts.push_back(std::move(q));
            }
            return s_or(std::move(parts));
        }
        case Schema::Kind::Group: {
            std::vector<SchemaPtr> parts;
            for (const auto& p : s->list) {
                SchemaPtr q = bound_normalize(p);
                if (q->kind == Schema::Kind::False_) return s_false();
                if (q->kind != Schema::Kind::True_) parts.push_back(std::move(q));
            }
            return s_group(std::move(parts),
                           s->has_group_type ? std::optional<JsonKind>(s->type) : std::nullopt,
                           s->prepared);
        }
        case Schema::Kind::Not: {
            SchemaPtr body = bound_normalize(s->arg);
            if (body->kind == Schema::Kind::True_) return s_false();
            if (body->kind == Schema::Kind::False_) return s_true();
            if (body == s->arg) return s;
            return s_not(body);
        }
        default:
            return s;
    }
}

// ---- environment ----

void Environment::define(const std::string& name, SchemaPtr body) {
    if (defs_.count(name)) throw std::invalid_argument("redefined variable: " + name);
    order_.push_back(name);
    defs_[name] = std::move(body);
}

void Environment::set_body(const std::string& name, SchemaPtr body) {
    auto it = defs_.find(name);
    if (it == defs_.end()) throw UnknownVariableError(name);
    it->second = std::move(body);
}

const SchemaPtr& Environment::body(const std::string& name) const {
    auto it = defs_.find(name);
    if (it == defs_.end()) throw UnknownVariableError(name);
    return it->second;
}

const std::string& Environment::complement_of(const std::string& name) const {
    auto it = complement_.find(name);
    if (it == complement_.end()) throw UnknownVariableError("complement of " + name);
    return it->second;
}

void Environment::set_complement(const std::string& a, const std::string& b) {
    complement_[a] = b;
    complement_[b] = a;
}

void Environment::set_conj_factors(const std::string& name, std::vector<std::string> factors) {
    conj_factors_[name] = std::move(factors);
}

const std::vector<std::string>* Environment::conj_factors_of(const std::string& name) const {
    auto it = conj_factors_.find(name);
    return it == conj_factors_.end() ? nullptr : &it->second;
}

std::string Environment::fresh_name(const std::string& stem) const {
    if (!defs_.count(stem)) return stem;
    for (int i = 1;; ++i) {
        std::string candidate = stem + "_" + std::to_string(i);
        if (!defs_.count(candidate)) return candidate;
    }
}

namespace {

// Collects variables referenced in s; `unguarded` restricts the walk to
// boolean operators (the "directly depends" relation).
void collect_refs(const SchemaPtr& s, bool unguarded_only, std::vector<std::string>& out) {
    switch (s->kind) {
        case Schema::Kind::Ref: out.push_back(s->var); return;
        case Schema::Kind::And:
        case Schema::Kind::Or:
        case Schema::Kind::Group:
            for (const auto& p : s->list) collect_refs(p, unguarded_only, out);
            return;
        case Schema::Kind::Not: collect_refs(s->arg, unguarded_only, out); return;
        case Schema::Kind::Prop:
        case Schema::Kind::PattReq:
        case Schema::Kind::Items:
        case Schema::Kind::Contains:
            if (!unguarded_only) collect_refs(s->arg, unguarded_only, out);
            return;
        case Schema::Kind::Ite:
            if (!unguarded_only) {
                for (const auto& p : s->list) collect_refs(p, unguarded_only, out);
                collect_refs(s->arg, unguarded_only, out);
            }
            return;
        case Schema::Kind::OrPattReq:
            if (!unguarded_only) {
                for (const auto& [p, v] : s->alts) collect_refs(v, unguarded_only, out);
            }
            return;
        default: return;
    }
}

} // namespace

void Environment::check_well_formed() const {
    if (!defs_.count(active_)) throw UnknownVariableError("active " + active_);
    // every Ref resolvable
    for (const auto& name : order_) {
        std::vector<std::string> refs;
        collect_refs(body(name), false, refs);
        for (const auto& r : refs)
            if (!defs_.count(r)) throw UnknownVariableError(r + " (referenced from " + name + ")");
    }
    // the unguarded "directly depends" relation must be acyclic
    enum class Mark { White, Grey, Black };
    std::unordered_map<std::string, Mark> mark;
    std::vector<std::pair<std::string, bool>> stack; // (var, expanded)
    for (const auto& root : order_) {
        if (mark[root] != Mark::White) continue;
        stack.push_back({root, false});
        while (!stack.empty()) {
            auto [name, expanded] = stack.back();
            stack.pop_back();
            if (expanded) {
                mark[name] = Mark::Black;
                continue;
            }
            if (mark[name] == Mark::Black) continue;
            if (mark[name] == Mark::Grey) continue;
            mark[name] = Mark::Grey;
            stack.push_back({name, true});
            std::vector<std::string> deps;
            collect_refs(body(name), true, deps);
            for (const auto& d : deps) {
                if (mark[d] == Mark::Grey) throw UnguardedCycleError(d);
                if (mark[d] == Mark::White) stack.push_back({d, false});
            }
        }
    }
}

// ---- validation ----

namespace {

struct ValidationContext {
    const Environment& env;
    // memoized (definition body, value address) verdicts
    std::unordered_map<const Schema*, std::unordered_map<const JsonValue*, bool>> memo;
};

bool check(const JsonValue& v, const SchemaPtr& s, ValidationContext& ctx);

bool check_number(const JsonValue& v, const SchemaPtr& s) {
    const Rational& q = v.as_number();
    switch (s->kind) {
        case Schema::Kind::Betw: {
            if (s->num_lo.is_finite() && q < s->num_lo.value) return false;
            if (s->num_lo.kind == NumBound::Kind::PosInf) return false;
            if (s->num_hi.is_finite() && q > s->num_hi.value) return false;
            if (s->num_hi.kind == NumBound::Kind::NegInf) return false;
            return true;
        }
        case Schema::Kind::XBetw: {
            if (s->num_lo.is_finite() && q <= s->num_lo.value) return false;
            if (s->num_lo.kind == NumBound::Kind::PosInf) return false;
            if (s->num_hi.is_finite() && q >= s->num_hi.value) return false;
            if (s->num_hi.kind == NumBound::Kind::NegInf) return false;
            return true;
        }
        case Schema::Kind::MulOf: return q.is_multiple_of(s->mul);
        case Schema::Kind::NotMulOf: return !q.is_multiple_of(s->mul);
        default: assert(false); return false;
    }
}

bool check(const JsonValue& v, const SchemaPtr& s, ValidationContext& ctx) {
    switch (s->kind) {
        case Schema::Kind::True_: return true;
        case Schema::Kind::False_: return false;
        case Schema::Kind::IsBoolValue:
            return v.kind() != JsonKind::Bool || v.as_bool() == s->bvalue;
        case Schema::Kind::PatternAssert:
            return v.kind() != JsonKind::Str || re::matches(*re::compile(s->pattern.ptr), v.as_string());
        case Schema::Kind::NotPattern:
            return v.kind() != JsonKind::Str || !re::matches(*re::compile(s->pattern.ptr), v.as_string());
        case Schema::Kind::Betw:
        case Schema::Kind::XBetw:
        case Schema::Kind::MulOf:
        case Schema::Kind::NotMulOf:
            return v.kind() != JsonKind::Num || check_number(v, s);
        case Schema::Kind::Pro: {
            if (v.kind() != JsonKind::Obj) return true;
            uint64_t n = v.as_object().size();
            return n >= s->lo && s->hi.ge(n);
        }
        case Schema::Kind::Prop: {
            if (v.kind() != JsonKind::Obj) return true;
            auto dfa = re::compile(s->pattern.ptr);
            for (const auto& [name, value] : v.as_object()) {
                if (re::matches(*dfa, name) && !check(value, s->arg, ctx)) return false;
            }
            return true;
        }
        case Schema::Kind::PattReq: {
            if (v.kind() != JsonKind::Obj) return true;
            auto dfa = re::compile(s->pattern.ptr);
            for (const auto& [name, value] : v.as_object()) {
                if (re::matches(*dfa, name) && check(value, s->arg, ctx)) return true;
            }
            return false;
        }
        case Schema::Kind::OrPattReq: {
            if (v.kind() != JsonKind::Obj) return true;
            for (const auto& [pat, body] : s->alts) {
                auto dfa = re::compile(pat.ptr);
                for (const auto& [name, value] : v.as_object()) {
                    if (re::matches(*dfa, name) && check(value, body, ctx)) return true;
                }
            }
            return false;
        }
        case Schema::Kind::Items: {
            if (v.kind() != JsonKind::Arr) return true;
            const auto& items = v.as_array();
            for (uint64_t p = s->lo; p <= items.size() && s->hi.ge(p); ++p) {
                if (!check(items[p - 1], s->arg, ctx)) return false;
            }
            return true;
        }
        case Schema::Kind::Ite: {
            if (v.kind() != JsonKind::Arr) return true;
            const auto& items = v.as_array();
            for (size_t p = 0; p < items.size(); ++p) {
                const SchemaPtr& expected = p < s->list.size() ? s->list[p] : s->arg;
                if (!check(items[p], expected, ctx)) return false;
            }
            return true;
        }
        case Schema::Kind::Contains: {
            if (v.kind() != JsonKind::Arr) return true;
            uint64_t count = 0;
            for (const auto& item : v.as_array())
                if (check(item, s->arg, ctx)) ++count;
            return count >= s->lo && s->hi.ge(count);
        }
        case Schema::Kind::UniqueItems: {
            if (v.kind() != JsonKind::Arr) return true;
            const auto& items = v.as_array();
            for (size_t i = 0; i < items.size(); ++i)
                for (size_t j = i + 1; j < items.size(); ++j)
                    if (json_equal(items[i], items[j])) return false;
            return true;
        }
        case Schema::Kind::RepeatedItems: {
            if (v.kind() != JsonKind::Arr) return true;
            const auto& items = v.as_array();
            for (size_t i = 0; i < items.size(); ++i)
                for (size_t j = i + 1; j < items.size(); ++j)
                    if (json_equal(items[i], items[j])) return true;
            return false;
        }
        case Schema::Kind::TypeAssert: return v.kind() == s->type;
        case Schema::Kind::And:
        case Schema::Kind::Group: {
            // a typed group carries its type(T) assertion implicitly
            if (s->kind == Schema::Kind::Group && s->has_group_type && v.kind() != s->type)
                return false;
            for (const auto& p : s->list)
                if (!check(v, p, ctx)) return false;
            return true;
        }
        case Schema::Kind::Or: {
            for (const auto& p : s->list)
                if (check(v, p, ctx)) return true;
            return false;
        }
        case Schema::Kind::Not: return !check(v, s->arg, ctx);
        case Schema::Kind::Ref: {
            const SchemaPtr& body = ctx.env.body(s->var);
            auto& per_def = ctx.memo[body.get()];
            auto it = per_def.find(&v);
            if (it != per_def.end()) return it->second;
            bool result = check(v, body, ctx);
            per_def.emplace(&v, result);
            return result;
        }
    }
    return false;
}

} // namespace

bool validate(const JsonValue& v, const SchemaPtr& s, const Environment& env) {
    ValidationContext ctx{env, {}};
    return check(v, s, ctx);
}

bool validate(const JsonValue& v, const Environment& env) {
    return validate(v, env.body(env.active()), env);
}

} // namespace jsw
