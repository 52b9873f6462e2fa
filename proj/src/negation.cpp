#include "jsw/negation.hpp"

#include <cassert>

namespace jsw {

void not_complete(Environment& env) {
    std::vector<std::string> names = env.order();
    for (const auto& name : names) {
        if (env.has_complement(name)) continue;
        std::string comp = env.fresh_name("not_" + name);
        env.define(comp, s_not(env.body(name)));
        env.set_complement(name, comp);
    }
}

SchemaPtr negate_items(const std::vector<SchemaPtr>& prefix, const SchemaPtr& tail,
                       const Environment& env) {
    size_t n = prefix.size();
    std::vector<SchemaPtr> disjuncts;

    // N_i: position i exists and violates its prefix schema
    for (size_t i = 0; i < n; ++i) {
        std::vector<SchemaPtr> head(i, s_true());
        head.push_back(negate(prefix[i], env));
        disjuncts.push_back(s_and({s_contains(static_cast<uint64_t>(i) + 1, Count::infinite(), s_true()),
                                   s_ite(std::move(head), s_true())}));
    }

    // N_{n+1}: a tail element violates the tail schema
    if (n == 0) {
        disjuncts.push_back(s_contains(1, Count::infinite(), negate(tail, env)));
    } else if (tail->kind == Schema::Kind::False_) {
        disjuncts.push_back(s_contains(static_cast<uint64_t>(n) + 1, Count::infinite(), s_true()));
    } else if (tail->kind == Schema::Kind::True_) {
        // the tail condition cannot be violated
    } else {
        SchemaPtr not_tail = negate(tail, env);
        SchemaPtr pos_tail = eliminate_not_in(tail, env);
        for (uint64_t bm = 0; bm < (1ull << n); ++bm) {
            std::vector<SchemaPtr> head;
            uint64_t ones = 0;
            for (size_t i = 0; i < n; ++i) {
                bool bit = (bm >> i) & 1;
                head.push_back(bit ? not_tail : pos_tail);
                ones += bit;
            }
            disjuncts.push_back(s_and({s_ite(std::move(head), s_true()),
                                       s_contains(ones + 1, Count::infinite(), not_tail)}));
        }
    }

    return s_and({s_type(JsonKind::Arr), s_or(std::move(disjuncts))});
}

namespace {

SchemaPtr items_as_ite(const SchemaPtr& s) {
    assert(s->kind == Schema::Kind::Items);
    std::vector<SchemaPtr> prefix(s->lo - 1, s_true());
    if (s->hi.inf) return s_ite(std::move(prefix), s->arg);
    for (uint64_t p = s->lo; p <= s->hi.n; ++p) prefix.push_back(s->arg);
    return s_ite(std::move(prefix), s_true());
}

} // namespace

SchemaPtr negate(const SchemaPtr& s, const Environment& env) {
    switch (s->kind) {
        case Schema::Kind::True_: return s_false();
        case Schema::Kind::False_: return s_true();
        case Schema::Kind::IsBoolValue:
            return s_and({s_type(JsonKind::Bool), s_bool_value(!s->bvalue)});
        case Schema::Kind::PatternAssert:
            return s_and({s_type(JsonKind::Str), s_not_pattern(s->pattern)});
        case Schema::Kind::NotPattern:
            return s_and({s_type(JsonKind::Str), s_pattern(s->pattern)});
        case Schema::Kind::Betw: {
            std::vector<SchemaPtr> out;
            if (s->num_lo.kind != NumBound::Kind::NegInf)
                out.push_back(s_xbetw(NumBound::neg_inf(), s->num_lo));
            if (s->num_hi.kind != NumBound::Kind::PosInf)
                out.push_back(s_xbetw(s->num_hi, NumBound::pos_inf()));
            return bound_normalize(s_and({s_type(JsonKind::Num), s_or(std::move(out))}));
        }
        case Schema::Kind::XBetw: {
            std::vector<SchemaPtr> out;
            if (s->num_lo.kind != NumBound::Kind::NegInf)
                out.push_back(s_betw(NumBound::neg_inf(), s->num_lo));
            if (s->num_hi.kind != NumBound::Kind::PosInf)
                out.push_back(s_betw(s->num_hi, NumBound::pos_inf()));
            return bound_normalize(s_and({s_type(JsonKind::Num), s_or(std::move(out))}));
        }
        case Schema::Kind::MulOf:
            return s_and({s_type(JsonKind::Num), s_not_mulof(s->mul)});
        case Schema::Kind::NotMulOf:
            return s_and({s_type(JsonKind::Num), s_mulof(s->mul)});
        case Schema::Kind::Pro: {
            std::vector<SchemaPtr> out;
            if (s->lo > 0) out.push_back(s_pro(0, Count::of(s->lo - 1)));
            if (!s->hi.inf) out.push_back(s_pro(s->hi.n + 1, Count::infinite()));
            return s_and({s_type(JsonKind::Obj), s_or(std::move(out))});
        }
        case Schema::Kind::Prop:
            return s_and({s_type(JsonKind::Obj), s_pattreq(s->pattern, negate(s->arg, env))});
        case Schema::Kind::PattReq:
            return s_and({s_type(JsonKind::Obj), s_prop(s->pattern, negate(s->arg, env))});
        case Schema::Kind::OrPattReq: {
            std::vector<SchemaPtr> parts{s_type(JsonKind::Obj)};
            for (const auto& [pat, body] : s->alts)
                parts.push_back(s_prop(pat, negate(body, env)));
            return s_and(std::move(parts));
        }
        case Schema::Kind::Items: {
            SchemaPtr ite = items_as_ite(s);
            return negate_items(ite->list, ite->arg, env);
        }
        case Schema::Kind::Ite: return negate_items(s->list, s->arg, env);
        case Schema::Kind::Contains: {
            SchemaPtr body = eliminate_not_in(s->arg, env);
            std::vector<SchemaPtr> out;
            if (s->lo > 0) out.push_back(s_contains(0, Count::of(s->lo - 1), body));
            if (!s->hi.inf) out.push_back(s_contains(s->hi.n + 1, Count::infinite(), body));
            return s_and({s_type(JsonKind::Arr), s_or(std::move(out))});
        }
        case Schema::Kind::UniqueItems:
            return s_and({s_type(JsonKind::Arr), s_repeated_items()});
        case Schema::Kind::RepeatedItems:
            return s_and({s_type(JsonKind::Arr), s_unique_items()});
        case Schema::Kind::TypeAssert: {
            std::vector<SchemaPtr> others;
            for (JsonKind k : {JsonKind::Null, JsonKind::Bool, JsonKind::Num, JsonKind::Str,
                               JsonKind::Obj, JsonKind::Arr}) {
                if (k != s->type) others.push_back(s_type(k));
            }
            return s_or(std::move(others));
        }
        case Schema::Kind::And:
        case Schema::Kind::Group: {
            std::vector<SchemaPtr> out;
            out.reserve(s->list.size());
            for (const auto& p : s->list) out.push_back(negate(p, env));
            return s_or(std::move(out));
        }
        case Schema::Kind::Or: {
            std::vector<SchemaPtr> out;
            out.reserve(s->list.size());
            for (const auto& p : s->list) out.push_back(negate(p, env));
            return s_and(std::move(out));
        }
        case Schema::Kind::Not: return eliminate_not_in(s->arg, env);
        case Schema::Kind::Ref: return s_ref(env.complement_of(s->var));
    }
    return s_false();
}

SchemaPtr eliminate_not_in(const SchemaPtr& s, const Environment& env) {
    switch (s->kind) {
        case Schema::Kind::Not: return negate(s->arg, env);
        case Schema::Kind::And:
        case Schema::Kind::Or:
        case Schema::Kind::Group: {
            std::vector<SchemaPtr> out;
            out.reserve(s->list.size());
            for (const auto& p : s->list) out.push_back(eliminate_not_in(p, env));
            if (s->kind == Schema::Kind::And) return s_and(std::move(out));
            if (s->kind == Schema::Kind::Or) return s_or(std::move(out));
            return s_group(std::move(out),
                           s->has_group_type ? std::optional<JsonKind>(s->type) : std::nullopt,
                           s->prepared);
        }
        case Schema::Kind::Prop: return s_prop(s->pattern, eliminate_not_in(s->arg, env));
        case Schema::Kind::PattReq: return s_pattreq(s->pattern, eliminate_not_in(s->arg, env));
        case Schema::Kind::OrPattReq: {
            std::vector<std::pair<PatternExpr, SchemaPtr>> alts;
            for (const auto& [p, v] : s->alts) alts.emplace_back(p, eliminate_not_in(v, env));
            return s_orpattreq(std::move(alts));
        }
        case Schema::Kind::Items:
            return s_items(s->lo, s->hi, eliminate_not_in(s->arg, env));
        case Schema::Kind::Contains:
            return s_contains(s->lo, s->hi, eliminate_not_in(s->arg, env));
        case Schema::Kind::Ite: {
            std::vector<SchemaPtr> prefix;
            prefix.reserve(s->list.size());
            for (const auto& p : s->list) prefix.push_back(eliminate_not_in(p, env));
            return s_ite(std::move(prefix), eliminate_not_in(s->arg, env));
        }
        default: return s;
    }
}

Environment eliminate_not(const Environment& env) {
    Environment out = env;
    not_complete(out);
    for (const auto& name : out.order()) {
        out.set_body(name, bound_normalize(eliminate_not_in(out.body(name), out)));
    }
    return out;
}

bool negation_free(const SchemaPtr& s) {
    switch (s->kind) {
        case Schema::Kind::Not: return false;
        case Schema::Kind::And:
        case Schema::Kind::Or:
        case Schema::Kind::Group: {
            for (const auto& p : s->list)
                if (!negation_free(p)) return false;
            return true;
        }
        case Schema::Kind::Prop:
        case Schema::Kind::PattReq:
        case Schema::Kind::Items:
        case Schema::Kind::Contains:
            return negation_free(s->arg);
        case Schema::Kind::Ite: {
            for (const auto& p : s->list)
                if (!negation_free(p)) return false;
            return negation_free(s->arg);
        }
        case Schema::Kind::OrPattReq: {
            for (const auto& [p, v] : s->alts)
                if (!negation_free(v)) return false;
            return true;
        }
        default: return true;
    }
}

bool negation_free(const Environment& env) {
    for (const auto& name : env.order())
        if (!negation_free(env.body(name))) return false;
    return true;
}

} // namespace jsw
