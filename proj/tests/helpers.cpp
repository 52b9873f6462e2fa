#include "helpers.hpp"

namespace jsw::testing {

std::vector<JsonValue> universe_atoms() {
    return {JsonValue::null(),
            JsonValue::boolean(true),
            JsonValue::boolean(false),
            JsonValue::number(0),
            JsonValue::number(1),
            JsonValue::number(3),
            JsonValue::string(""),
            JsonValue::string("a"),
            JsonValue::string("ab")};
}

namespace {

std::vector<JsonValue> build_universe() {
    std::vector<JsonValue> atoms = universe_atoms();
    std::vector<JsonValue> out = atoms;

    // arrays over atoms, length 1..2 exhaustively, length 3 sampled
    for (const auto& a : atoms) out.push_back(JsonValue::array({a}));
    for (const auto& a : atoms)
        for (const auto& b : atoms) out.push_back(JsonValue::array({a, b}));
    out.push_back(JsonValue::array({}));
    size_t n = atoms.size();
    for (size_t i = 0; i < n * n * n; i += 3) {
        out.push_back(
            JsonValue::array({atoms[i / (n * n)], atoms[(i / n) % n], atoms[i % n]}));
    }

    // objects over names {a, b, c}
    const char* names[] = {"a", "b", "c"};
    out.push_back(JsonValue::object({}));
    for (const char* name : names)
        for (const auto& v : atoms) out.push_back(JsonValue::object({{name, v}}));
    for (const auto& va : atoms)
        for (const auto& vb : atoms)
            out.push_back(JsonValue::object({{"a", va}, {"b", vb}}));
    for (size_t i = 0; i < n * n * n; i += 3) {
        out.push_back(JsonValue::object({{"a", atoms[i / (n * n)]},
                                         {"b", atoms[(i / n) % n]},
                                         {"c", atoms[i % n]}}));
    }

    // one more nesting level, sampled representatives
    std::vector<JsonValue> mids;
    mids.push_back(JsonValue::array({}));
    mids.push_back(JsonValue::array({JsonValue::number(1)}));
    mids.push_back(JsonValue::array({JsonValue::number(0), JsonValue::number(3)}));
    mids.push_back(JsonValue::object({}));
    mids.push_back(JsonValue::object({{"a", JsonValue::number(1)}}));
    mids.push_back(JsonValue::object({{"a", JsonValue::string("a")}, {"b", JsonValue::null()}}));
    mids.push_back(JsonValue::string("a"));
    mids.push_back(JsonValue::number(3));
    mids.push_back(JsonValue::null());
    for (const auto& x : mids) {
        for (const auto& y : mids) {
            out.push_back(JsonValue::array({x, y}));
            out.push_back(JsonValue::object({{"a", x}, {"b", y}}));
        }
        out.push_back(JsonValue::object({{"a", x}}));
        out.push_back(JsonValue::array({x}));
    }

    // a few depth-3 values
    out.push_back(JsonValue::array({JsonValue::array({JsonValue::array({JsonValue::number(1)})})}));
    out.push_back(JsonValue::object(
        {{"a", JsonValue::object({{"a", JsonValue::object({{"a", JsonValue::number(1)}})}})}}));
    out.push_back(JsonValue::array(
        {JsonValue::object({{"a", JsonValue::array({JsonValue::number(1)})}})}));
    out.push_back(JsonValue::object({{"b", JsonValue::array({JsonValue::string("ab")})}}));
    return out;
}

PatternExpr random_pattern_expr(Rng& rng) {
    static const char* pool[] = {"^a$", "^b$",  "^a",        "b$",     "^ab$",
                                 "^.$", "^a*$", "^[ab]{0,2}$", "^.{1,2}$", "a"};
    return search_pattern(pool[rng.below(sizeof(pool) / sizeof(pool[0]))]);
}

NumBound random_bound(Rng& rng, bool low) {
    switch (rng.below(5)) {
        case 0: return low ? NumBound::neg_inf() : NumBound::pos_inf();
        case 1: return NumBound::finite(Rational(0));
        case 2: return NumBound::finite(Rational(1));
        case 3: return NumBound::finite(Rational(3));
        default: return NumBound::finite(Rational(BigInt(3), BigInt(2)));
    }
}

Count random_count(Rng& rng) {
    if (rng.below(3) == 0) return Count::infinite();
    return Count::of(rng.below(4));
}

SchemaPtr random_ref_or_leaf(Rng& rng, const std::vector<std::string>& vars) {
    if (!vars.empty() && rng.below(3) == 0) return s_ref(vars[rng.below(vars.size())]);
    switch (rng.below(4)) {
        case 0: return s_true();
        case 1: return s_false();
        case 2: return s_type(static_cast<JsonKind>(rng.below(6)));
        default: return s_pattern(random_pattern_expr(rng));
    }
}

} // namespace

const std::vector<JsonValue>& bounded_universe() {
    static const std::vector<JsonValue> u = build_universe();
    return u;
}

SchemaPtr random_schema(Rng& rng, int depth, const std::vector<std::string>& guarded_vars,
                        const std::vector<std::string>& unguarded_vars) {
    if (depth <= 0) {
        switch (rng.below(10)) {
            case 0: return s_true();
            case 1: return s_false();
            case 2: return s_bool_value(rng.flip());
            case 3: return s_pattern(random_pattern_expr(rng));
            case 4: {
                NumBound lo = random_bound(rng, true), hi = random_bound(rng, false);
                return rng.flip() ? s_betw(lo, hi) : s_xbetw(lo, hi);
            }
            case 5: {
                static const Rational muls[] = {Rational(1), Rational(2), Rational(3),
                                                Rational(BigInt(1), BigInt(2))};
                const Rational& m = muls[rng.below(4)];
                return rng.flip() ? s_mulof(m) : s_not_mulof(m);
            }
            case 6: return s_pro(rng.below(3), random_count(rng));
            case 7: return s_type(static_cast<JsonKind>(rng.below(6)));
            case 8:
                if (!unguarded_vars.empty())
                    return s_ref(unguarded_vars[rng.below(unguarded_vars.size())]);
                return s_type(static_cast<JsonKind>(rng.below(6)));
            default: return rng.flip() ? s_unique_items() : s_repeated_items();
        }
    }
    auto arg = [&]() -> SchemaPtr {
        if (!guarded_vars.empty() && rng.below(3) == 0)
            return s_ref(guarded_vars[rng.below(guarded_vars.size())]);
        return random_schema(rng, depth - 1, guarded_vars, guarded_vars);
    };
    switch (rng.below(10)) {
        case 0: return s_prop(random_pattern_expr(rng), arg());
        case 1: return s_pattreq(random_pattern_expr(rng), arg());
        case 2: {
            uint64_t lo = 1 + rng.below(3);
            Count hi = rng.flip() ? Count::infinite() : Count::of(lo + rng.below(3));
            return s_items(lo, hi, arg());
        }
        case 3: {
            std::vector<SchemaPtr> prefix;
            for (size_t i = rng.below(3); i > 0; --i) prefix.push_back(arg());
            return s_ite(std::move(prefix), arg());
        }
        case 4: {
            uint64_t lo = rng.below(3);
            Count hi = rng.flip() ? Count::infinite() : Count::of(lo + rng.below(3));
            return s_contains(lo, hi, arg());
        }
        case 5:
        case 6: {
            std::vector<SchemaPtr> parts;
            size_t n = 2 + rng.below(2);
            for (size_t i = 0; i < n; ++i)
                parts.push_back(random_schema(rng, depth - 1, guarded_vars, unguarded_vars));
            return rng.flip() ? s_and(std::move(parts)) : s_or(std::move(parts));
        }
        case 7: return s_not(random_schema(rng, depth - 1, guarded_vars, unguarded_vars));
        case 8: return random_ref_or_leaf(rng, unguarded_vars);
        default: return random_schema(rng, 0, guarded_vars, unguarded_vars);
    }
}

Environment random_env(Rng& rng, int depth, size_t extra_vars) {
    Environment env;
    std::vector<std::string> names{"x0"};
    for (size_t i = 1; i <= extra_vars; ++i) names.push_back("x" + std::to_string(i));
    // declare everything first so guarded references can be mutual
    for (const auto& n : names) env.define(n, s_true());
    for (size_t i = 0; i < names.size(); ++i) {
        // unguarded references may only point at later variables (acyclic)
        std::vector<std::string> unguarded(names.begin() + static_cast<long>(i) + 1, names.end());
        env.set_body(names[i], random_schema(rng, depth, names, unguarded));
    }
    env.set_active("x0");
    env.check_well_formed();
    return env;
}

} // namespace jsw::testing
