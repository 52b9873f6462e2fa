#include <doctest.h>

#include "helpers.hpp"
#include "jsw/json_io.hpp"
#include "jsw/negation.hpp"

using namespace jsw;
using jsw::testing::bounded_universe;
using jsw::testing::Rng;

TEST_CASE("not-completion adds a complement for every variable") {
    Environment env;
    env.define("x", s_prop(key_pattern("a"), s_not(s_ref("x"))));
    env.set_active("x");
    Environment completed = env;
    not_complete(completed);
    CHECK(completed.order().size() == 2);
    CHECK(completed.active() == "x");
    CHECK(completed.complement_of("x") == "not_x");
    CHECK(completed.complement_of(completed.complement_of("x")) == "x");
    // idempotent on already-completed environments
    Environment again = completed;
    not_complete(again);
    CHECK(again.order().size() == 2);

    jsw::testing::Rng rng(808);
    for (int i = 0; i < 20; ++i) {
        Environment e = jsw::testing::random_env(rng, 2, 2);
        size_t n = e.order().size();
        not_complete(e);
        CHECK(e.order().size() == 2 * n);
        for (const auto& name : e.order())
            CHECK(e.complement_of(e.complement_of(name)) == name);
    }
}

TEST_CASE("negate: structural rows") {
    Environment env;
    env.define("x", s_true());
    env.set_active("x");
    not_complete(env);

    SUBCASE("betw") {
        SchemaPtr n = negate(
            s_betw(NumBound::finite(Rational(0)), NumBound::finite(Rational(5))), env);
        // type(Num) and (xBetw(-inf,0) or xBetw(5,inf))
        REQUIRE(n->kind == Schema::Kind::And);
        CHECK(n->list[0]->kind == Schema::Kind::TypeAssert);
        CHECK(n->list[0]->type == JsonKind::Num);
        REQUIRE(n->list[1]->kind == Schema::Kind::Or);
        CHECK(n->list[1]->list[0]->kind == Schema::Kind::XBetw);
        CHECK(n->list[1]->list[1]->kind == Schema::Kind::XBetw);
        CHECK(n->list[1]->list[0]->num_hi == NumBound::finite(Rational(0)));
        CHECK(n->list[1]->list[1]->num_lo == NumBound::finite(Rational(5)));
    }
    SUBCASE("edge bounds drop their disjunct") {
        SchemaPtr n = negate(s_betw(NumBound::neg_inf(), NumBound::finite(Rational(5))), env);
        REQUIRE(n->kind == Schema::Kind::And);
        CHECK(n->list[1]->kind == Schema::Kind::XBetw); // single disjunct collapses
    }
    SUBCASE("ref") {
        SchemaPtr n = negate(s_ref("x"), env);
        REQUIRE(n->kind == Schema::Kind::Ref);
        CHECK(n->var == "not_x");
    }
    SUBCASE("prop of a complement variable") {
        SchemaPtr n = negate(s_prop(key_pattern("a"), s_ref("not_x")), env);
        // type(Obj) and pattReq(^a$ : ref x)
        REQUIRE(n->kind == Schema::Kind::And);
        CHECK(n->list[0]->type == JsonKind::Obj);
        REQUIRE(n->list[1]->kind == Schema::Kind::PattReq);
        CHECK(n->list[1]->arg->kind == Schema::Kind::Ref);
        CHECK(n->list[1]->arg->var == "x");
    }
    SUBCASE("double negation") {
        SchemaPtr n = negate(s_not(s_mulof(Rational(2))), env);
        CHECK(n->kind == Schema::Kind::MulOf);
    }
}

TEST_CASE("negation duality over the bounded universe") {
    Rng rng(20240501);
    size_t checked = 0;
    for (int i = 0; i < 500; ++i) {
        SchemaPtr s = jsw::testing::random_schema(rng, 3, {}, {});
        Environment env;
        env.define("x0", s);
        env.set_active("x0");
        not_complete(env);
        SchemaPtr neg = negate(s, env);
        CHECK(negation_free(neg));
        for (size_t j = 0; j < bounded_universe().size(); j += 17) {
            const JsonValue& v = bounded_universe()[j];
            CHECK(validate(v, neg, env) == !validate(v, s, env));
            ++checked;
        }
    }
    CHECK(checked > 10000);
}

TEST_CASE("items negation formulas") {
    Environment env;
    env.define("d", s_true());
    env.set_active("d");
    not_complete(env);

    SUBCASE("empty prefix") {
        // not(ite(;S)) = type(Arr) and #_1^inf not(S)
        SchemaPtr s = s_type(JsonKind::Num);
        SchemaPtr n = negate_items({}, s, env);
        REQUIRE(n->kind == Schema::Kind::And);
        CHECK(n->list[0]->type == JsonKind::Arr);
        REQUIRE(n->list[1]->kind == Schema::Kind::Contains);
        CHECK(n->list[1]->lo == 1);
        CHECK(n->list[1]->hi.inf);
    }
    SUBCASE("trivial tail drops the last disjunct") {
        SchemaPtr n = negate_items({s_type(JsonKind::Num)}, s_true(), env);
        // type(Arr) and (ite(not Num; t) and #_1^inf t)
        REQUIRE(n->kind == Schema::Kind::And);
        REQUIRE(n->list[1]->kind == Schema::Kind::And); // single N_1, Or collapsed
    }
    SUBCASE("false tail counts the length") {
        SchemaPtr n = negate_items({s_type(JsonKind::Num)}, s_false(), env);
        REQUIRE(n->kind == Schema::Kind::And);
        REQUIRE(n->list[1]->kind == Schema::Kind::Or);
        const auto& last = n->list[1]->list.back();
        REQUIRE(last->kind == Schema::Kind::Contains);
        CHECK(last->lo == 2);
        CHECK(last->arg->kind == Schema::Kind::True_);
    }
    SUBCASE("general case has n + 2^n disjuncts") {
        for (size_t n_prefix : {1u, 2u, 3u}) {
            std::vector<SchemaPtr> prefix(n_prefix, s_type(JsonKind::Num));
            SchemaPtr tail = s_type(JsonKind::Str);
            SchemaPtr n = negate_items(prefix, tail, env);
            REQUIRE(n->kind == Schema::Kind::And);
            REQUIRE(n->list[1]->kind == Schema::Kind::Or);
            CHECK(n->list[1]->list.size() == n_prefix + (1ull << n_prefix));
        }
    }
    SUBCASE("single prefix with nontrivial tail uses two bitmaps") {
        SchemaPtr s1 = s_type(JsonKind::Num);
        SchemaPtr tail = s_type(JsonKind::Str);
        SchemaPtr n = negate_items({s1}, tail, env);
        REQUIRE(n->list[1]->kind == Schema::Kind::Or);
        CHECK(n->list[1]->list.size() == 3); // N_1 plus two bitmap disjuncts
    }
}

TEST_CASE("items negation agrees with direct semantics on short arrays") {
    // arrays of length <= 4 over a 3-value universe
    std::vector<JsonValue> three = {JsonValue::null(), JsonValue::number(0),
                                    JsonValue::string("a")};
    std::vector<JsonValue> arrays;
    arrays.push_back(JsonValue::array({}));
    std::vector<std::vector<JsonValue>> layer{{}};
    for (int len = 1; len <= 4; ++len) {
        std::vector<std::vector<JsonValue>> next;
        for (const auto& items : layer) {
            for (const auto& v : three) {
                auto extended = items;
                extended.push_back(v);
                arrays.push_back(JsonValue::array(extended));
                next.push_back(std::move(extended));
            }
        }
        layer = std::move(next);
    }
    REQUIRE(arrays.size() == 1 + 3 + 9 + 27 + 81);

    Rng rng(606060);
    for (int i = 0; i < 120; ++i) {
        Environment env;
        env.define("x0", jsw::testing::random_schema(rng, 1, {}, {}));
        env.set_active("x0");
        not_complete(env);
        std::vector<SchemaPtr> prefix;
        for (size_t k = rng.below(4); k > 0; --k)
            prefix.push_back(jsw::testing::random_schema(rng, 1, {"x0"}, {"x0"}));
        SchemaPtr tail = jsw::testing::random_schema(rng, 1, {"x0"}, {"x0"});
        SchemaPtr ite = s_ite(prefix, tail);
        SchemaPtr inverted = negate_items(prefix, tail, env);
        for (const auto& arr : arrays) {
            CHECK(validate(arr, inverted, env) == !validate(arr, ite, env));
        }
    }
}

TEST_CASE("eliminate_not removes every Not and preserves the active semantics") {
    Rng rng(112233);
    for (int i = 0; i < 120; ++i) {
        Environment env = jsw::testing::random_env(rng, 3, 1);
        Environment elim = eliminate_not(env);
        CHECK(negation_free(elim));
        CHECK(elim.active() == env.active());
        for (size_t j = 0; j < bounded_universe().size(); j += 19) {
            const JsonValue& v = bounded_universe()[j];
            CHECK(validate(v, elim) == validate(v, env));
        }
        // complement variables denote the complement language
        for (const auto& name : env.order()) {
            const std::string& comp = elim.complement_of(name);
            for (size_t j = 0; j < bounded_universe().size(); j += 53) {
                const JsonValue& v = bounded_universe()[j];
                CHECK(validate(v, s_ref(comp), elim) == !validate(v, s_ref(name), elim));
            }
        }
    }
    // an already negation-free environment is unchanged modulo completion
    Environment plain;
    plain.define("x", s_type(JsonKind::Num));
    plain.set_active("x");
    Environment done = eliminate_not(plain);
    CHECK(schema_equal(done.body("x"), plain.body("x")));
    CHECK(done.order().size() == 2);
}
