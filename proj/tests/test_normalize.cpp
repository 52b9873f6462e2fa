#include <doctest.h>

#include <functional>

#include "helpers.hpp"
#include "jsw/json_io.hpp"
#include "jsw/normalize.hpp"
#include "jsw/prepare.hpp"

using namespace jsw;
using jsw::testing::bounded_universe;
using jsw::testing::Rng;

namespace {

bool is_dnf_of_groups(const SchemaPtr& body) {
    std::vector<SchemaPtr> groups;
    if (body->kind == Schema::Kind::Or)
        groups = body->list;
    else if (body->kind == Schema::Kind::Group)
        groups = {body};
    else
        return false;
    for (const auto& g : groups)
        if (g->kind != Schema::Kind::Group || !g->has_group_type) return false;
    return true;
}

bool args_are_refs(const SchemaPtr& s) {
    auto ok = [](const SchemaPtr& a) {
        return a->kind == Schema::Kind::Ref || a->kind == Schema::Kind::True_ ||
               a->kind == Schema::Kind::False_;
    };
    switch (s->kind) {
        case Schema::Kind::Prop:
        case Schema::Kind::PattReq:
        case Schema::Kind::Items:
        case Schema::Kind::Contains:
            return ok(s->arg);
        case Schema::Kind::Ite: {
            for (const auto& p : s->list)
                if (!ok(p)) return false;
            return ok(s->arg);
        }
        case Schema::Kind::OrPattReq: {
            for (const auto& [p, v] : s->alts)
                if (!ok(v)) return false;
            return true;
        }
        case Schema::Kind::And:
        case Schema::Kind::Or:
        case Schema::Kind::Group: {
            for (const auto& p : s->list)
                if (!args_are_refs(p)) return false;
            return true;
        }
        case Schema::Kind::Not: return args_are_refs(s->arg);
        default: return true;
    }
}

} // namespace

TEST_CASE("and_merge: interval intersection") {
    auto merged = and_merge({s_type(JsonKind::Num),
                             s_betw(NumBound::finite(Rational(0)), NumBound::finite(Rational(10))),
                             s_betw(NumBound::finite(Rational(5)), NumBound::finite(Rational(20)))});
    REQUIRE(merged.has_value());
    REQUIRE(merged->size() == 2);
    CHECK((*merged)[1]->kind == Schema::Kind::Betw);
    CHECK((*merged)[1]->num_lo == NumBound::finite(Rational(5)));
    CHECK((*merged)[1]->num_hi == NumBound::finite(Rational(10)));
}

TEST_CASE("and_merge: foreign-kind assertions are dropped") {
    auto merged = and_merge({s_type(JsonKind::Num), s_pro(0, Count::of(4))});
    REQUIRE(merged.has_value());
    REQUIRE(merged->size() == 1);
    CHECK((*merged)[0]->kind == Schema::Kind::TypeAssert);
}

TEST_CASE("and_merge: clashing types collapse to f") {
    CHECK(!and_merge({s_type(JsonKind::Num), s_type(JsonKind::Str)}).has_value());
    CHECK(!and_merge({s_type(JsonKind::Arr), s_unique_items(), s_repeated_items()}).has_value());
}

TEST_CASE("and_merge: ite prefixes merge pointwise with tail padding") {
    SchemaPtr x = s_ref("x"), y = s_ref("y"), z = s_ref("z"), w = s_ref("w");
    auto merged = and_merge({s_type(JsonKind::Arr), s_ite({x}, s_true()), s_ite({y, z}, w)});
    REQUIRE(merged.has_value());
    REQUIRE(merged->size() == 2);
    const SchemaPtr& ite = (*merged)[1];
    REQUIRE(ite->kind == Schema::Kind::Ite);
    REQUIRE(ite->list.size() == 2);
    // position 1: x and y; position 2: t and z = z; tail: t and w = w
    REQUIRE(ite->list[0]->kind == Schema::Kind::And);
    CHECK(ite->list[0]->list[0]->var == "x");
    CHECK(ite->list[0]->list[1]->var == "y");
    CHECK(ite->list[1]->var == "z");
    CHECK(ite->arg->var == "w");
}

TEST_CASE("and_merge: prop merging") {
    SchemaPtr a = s_prop(key_pattern("a"), s_ref("x"));
    SchemaPtr b = s_prop(key_pattern("a"), s_ref("y"));
    auto merged = and_merge({s_type(JsonKind::Obj), a, b});
    REQUIRE(merged.has_value());
    REQUIRE(merged->size() == 2);
    CHECK((*merged)[1]->kind == Schema::Kind::Prop);
    CHECK((*merged)[1]->arg->kind == Schema::Kind::And);

    // same schema: pattern union
    SchemaPtr c = s_prop(key_pattern("b"), s_ref("x"));
    auto merged2 = and_merge({s_type(JsonKind::Obj), a, c});
    REQUIRE(merged2.has_value());
    REQUIRE(merged2->size() == 2);
    CHECK(re::language_equal((*merged2)[1]->pattern.ptr,
                             re::alt({key_pattern("a").ptr, key_pattern("b").ptr})));
}

TEST_CASE("and_merge: pattReq subsumption") {
    SchemaPtr strong = s_pattreq(key_pattern("ab"), s_ref("x"));
    SchemaPtr weak = s_pattreq(search_pattern("^a"), s_true());
    auto merged = and_merge({s_type(JsonKind::Obj), strong, weak});
    REQUIRE(merged.has_value());
    REQUIRE(merged->size() == 2);
    CHECK(schema_equal((*merged)[1], strong));
}

TEST_CASE("canonicalize: the grouping walkthrough") {
    // (mulOf(3) and pattern) or {Num, mulOf(2), ref x and pattern(a*)}
    SchemaPtr lenish = s_pattern(search_pattern("^.{0,5}$"));
    SchemaPtr input = s_or({s_and({s_mulof(Rational(3)), lenish}),
                            s_group({s_type(JsonKind::Num), s_mulof(Rational(2)),
                                     s_and({s_ref("x"), s_pattern(search_pattern("a*"))})})});
    SchemaPtr canon = canonicalize(input);
    REQUIRE(canon->kind == Schema::Kind::Or);
    // six groups from the type-less conjunct plus one group-with-ref conjunct
    CHECK(canon->list.size() == 7);
    size_t with_ref = 0, plain_groups = 0;
    for (const auto& d : canon->list) {
        if (d->kind == Schema::Kind::Group) {
            ++plain_groups;
        } else {
            REQUIRE(d->kind == Schema::Kind::And);
            ++with_ref;
        }
    }
    CHECK(plain_groups == 6);
    CHECK(with_ref == 1);

    // semantics preserved
    Environment env;
    env.define("x", s_betw(NumBound::finite(Rational(0)), NumBound::pos_inf()));
    env.define("root", input);
    env.set_active("root");
    for (size_t j = 0; j < bounded_universe().size(); j += 3) {
        const JsonValue& v = bounded_universe()[j];
        CHECK(validate(v, input, env) == validate(v, canon, env));
    }
}

TEST_CASE("canonicalize: typed group input is unchanged") {
    SchemaPtr g = s_group({s_mulof(Rational(2))}, JsonKind::Num);
    CHECK(schema_equal(canonicalize(g), g));
}

TEST_CASE("canonicalize preserves semantics on random schemas") {
    Rng rng(77);
    size_t pairs = 0;
    for (int i = 0; i < 60; ++i) {
        Environment env = jsw::testing::random_env(rng, 3, 1);
        Environment elim = eliminate_not(env);
        for (const auto& name : elim.order()) {
            SchemaPtr c = canonicalize(bound_normalize(elim.body(name)));
            for (size_t j = 0; j < bounded_universe().size(); j += 37) {
                const JsonValue& v = bounded_universe()[j];
                CHECK(validate(v, c, elim) == validate(v, elim.body(name), elim));
                ++pairs;
            }
        }
    }
    CHECK(pairs >= 200);
}

TEST_CASE("separate moves inline arguments into fresh shared variables") {
    Environment env;
    env.define("x", s_true());
    env.define("y", s_true());
    env.define("root",
               s_group({s_type(JsonKind::Arr),
                        s_ite({s_and({s_ref("x"), s_ref("y")})}, s_true())}));
    env.set_active("root");
    env = eliminate_not(env);
    PipelineOptions opts;
    VarFactory factory(env, opts);
    separate(env, factory);
    const SchemaPtr& body = env.body("root");
    REQUIRE(body->kind == Schema::Kind::Group);
    SchemaPtr ite;
    for (const auto& node : body->list)
        if (node->kind == Schema::Kind::Ite) ite = node;
    REQUIRE(ite);
    REQUIRE(ite->list[0]->kind == Schema::Kind::Ref);
    std::string itx = ite->list[0]->var;
    CHECK(schema_equal(env.body(itx), s_and({s_ref("x"), s_ref("y")})));
    CHECK(env.has_complement(itx));

    // an argument that is already a variable stays put
    Environment env2;
    env2.define("x", s_true());
    env2.define("root", s_ite({s_ref("x")}, s_true()));
    env2.set_active("root");
    env2 = eliminate_not(env2);
    VarFactory f2(env2, opts);
    separate(env2, f2);
    CHECK(schema_equal(env2.body("root"), s_ite({s_ref("x")}, s_true())));

    // re-running separation is the identity
    size_t vars = env.order().size();
    separate(env, factory);
    CHECK(env.order().size() == vars);
    CHECK(schema_equal(env.body("root"), body));

    // identical bodies share one variable
    Environment env3;
    env3.define("x", s_true());
    env3.define("y", s_true());
    env3.define("root", s_and({s_ite({s_and({s_ref("x"), s_ref("y")})}, s_true()),
                               s_contains(1, Count::infinite(),
                                          s_and({s_ref("x"), s_ref("y")}))}));
    env3.set_active("root");
    env3 = eliminate_not(env3);
    VarFactory f3(env3, opts);
    separate(env3, f3);
    const SchemaPtr& b3 = env3.body("root");
    CHECK(b3->list[0]->list[0]->var == b3->list[1]->arg->var);
}

TEST_CASE("expand substitutes unguarded variables") {
    Environment env;
    env.define("y", s_type(JsonKind::Num));
    env.define("x", s_and({s_ref("y"), s_pro(0, Count::of(2))}));
    env.define("itx", s_and({s_ref("x"), s_ref("y")}));
    env.set_active("itx");
    expand(env);
    // longest chain itx -> x -> y resolves fully
    std::function<bool(const SchemaPtr&)> no_unguarded_refs = [&](const SchemaPtr& s) {
        switch (s->kind) {
            case Schema::Kind::Ref: return false;
            case Schema::Kind::And:
            case Schema::Kind::Or:
            case Schema::Kind::Group: {
                for (const auto& p : s->list)
                    if (!no_unguarded_refs(p)) return false;
                return true;
            }
            default: return true;
        }
    };
    for (const auto& name : env.order()) CHECK(no_unguarded_refs(env.body(name)));

    // environments without unguarded refs are unchanged
    Environment env2;
    env2.define("x", s_prop(key_pattern("a"), s_ref("x")));
    env2.set_active("x");
    SchemaPtr before = env2.body("x");
    expand(env2);
    CHECK(schema_equal(env2.body("x"), before));
}

TEST_CASE("the full pipeline establishes the normal-form invariants") {
    Rng rng(13579);
    PipelineOptions opts;
    for (int i = 0; i < 40; ++i) {
        Environment env = jsw::testing::random_env(rng, 3, 1);
        Environment normal;
        try {
            normal = normalize_for_generation(env, opts);
        } catch (const BudgetExceededError&) {
            continue; // a fair outcome for adversarial random inputs
        }
        for (const auto& name : normal.order()) {
            const SchemaPtr& body = normal.body(name);
            CHECK(negation_free(body));
            bool dnf = body->kind == Schema::Kind::True_ || body->kind == Schema::Kind::False_ ||
                       is_dnf_of_groups(body);
            CHECK(dnf);
            CHECK(args_are_refs(body));
        }
        // semantics of the active variable are preserved
        for (size_t j = 0; j < bounded_universe().size(); j += 23) {
            const JsonValue& v = bounded_universe()[j];
            CHECK(validate(v, normal) == validate(v, env));
        }
    }
}

TEST_CASE("the variable-normalization walkthrough") {
    // x = ({Arr, ite(x and y; t)} and y) or {Bool}
    // y = {Arr, ite({Num} or not x; t)}
    Environment env;
    env.define("x", s_or({s_and({s_group({s_type(JsonKind::Arr),
                                          s_ite({s_and({s_ref("x"), s_ref("y")})}, s_true())}),
                                 s_ref("y")}),
                          s_group({s_type(JsonKind::Bool)})}));
    env.define("y", s_group({s_type(JsonKind::Arr),
                             s_ite({s_or({s_group({s_type(JsonKind::Num)}), s_not(s_ref("x"))})},
                                   s_true())}));
    env.set_active("x");
    env.check_well_formed();

    PipelineOptions opts;
    Environment normal = normalize_for_generation(env, opts);
    for (const auto& name : normal.order()) {
        CHECK(args_are_refs(normal.body(name)));
    }
    for (size_t j = 0; j < bounded_universe().size(); j += 5) {
        const JsonValue& v = bounded_universe()[j];
        CHECK(validate(v, normal) == validate(v, env));
    }
    // bodies are disjunctions of typed groups
    for (const auto& name : normal.order()) {
        const SchemaPtr& body = normal.body(name);
        bool dnf = body->kind == Schema::Kind::True_ || body->kind == Schema::Kind::False_ ||
                   is_dnf_of_groups(body);
        CHECK(dnf);
    }
}

TEST_CASE("to_dnf merges conjuncts and deduplicates groups") {
    Environment env;
    env.define("root", s_and({s_or({s_group({s_type(JsonKind::Num), s_mulof(Rational(2))}),
                                    s_group({s_type(JsonKind::Bool)})}),
                              s_or({s_group({s_type(JsonKind::Num), s_mulof(Rational(3))}),
                                    s_group({s_type(JsonKind::Bool)})})}));
    env.set_active("root");
    PipelineOptions opts;
    to_dnf(env, opts);
    const SchemaPtr& body = env.body("root");
    REQUIRE(is_dnf_of_groups(body));
    // {Num, mulOf 2, mulOf 3} or {Bool}; the cross Num/Bool terms vanish
    REQUIRE(body->kind == Schema::Kind::Or);
    CHECK(body->list.size() == 2);
}

TEST_CASE("and_merge is confluent under operand reordering") {
    // applying the rules to reversed operand lists yields language-equal
    // results, checked by validator sampling
    Rng rng(86420);
    for (int i = 0; i < 80; ++i) {
        JsonKind kind = static_cast<JsonKind>(rng.below(6));
        std::vector<SchemaPtr> assertions{s_type(kind)};
        for (size_t k = 2 + rng.below(3); k > 0; --k) {
            SchemaPtr a = jsw::testing::random_schema(rng, 1, {}, {});
            if (assertion_kind(*a)) assertions.push_back(a);
        }
        auto forward = and_merge(assertions);
        std::vector<SchemaPtr> reversed(assertions.rbegin(), assertions.rend());
        auto backward = and_merge(reversed);
        REQUIRE(forward.has_value() == backward.has_value());
        if (!forward) continue; // both collapsed to f
        Environment env;
        env.define("x0", s_true());
        env.set_active("x0");
        for (size_t j = 0; j < bounded_universe().size(); j += 13) {
            const JsonValue& v = bounded_universe()[j];
            CHECK(validate(v, s_and(*forward), env) == validate(v, s_and(*backward), env));
        }
    }
}
