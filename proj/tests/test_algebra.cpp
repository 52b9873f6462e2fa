#include <doctest.h>

#include "helpers.hpp"
#include "jsw/json_io.hpp"
#include "jsw/ir.hpp"
#include "jsw/negation.hpp"

using namespace jsw;
using jsw::testing::bounded_universe;
using jsw::testing::Rng;

namespace {

Environment env_of(const SchemaPtr& body) {
    Environment env;
    env.define("x0", body);
    env.set_active("x0");
    return env;
}

bool holds(const JsonValue& v, const SchemaPtr& s) {
    Environment env = env_of(s);
    return validate(v, s, env);
}

} // namespace

TEST_CASE("typed assertions are implicative") {
    // every typed assertion accepts all values of other kinds
    std::vector<SchemaPtr> assertions = {
        s_bool_value(true),
        s_pattern(search_pattern("^a$")),
        s_not_pattern(search_pattern("^a$")),
        s_betw(NumBound::finite(Rational(5)), NumBound::finite(Rational(5))),
        s_xbetw(NumBound::finite(Rational(0)), NumBound::finite(Rational(1))),
        s_mulof(Rational(7)),
        s_not_mulof(Rational(1)),
        s_pro(2, Count::of(2)),
        s_prop(key_pattern("zz"), s_false()),
        s_pattreq(key_pattern("zz"), s_true()),
        s_items(1, Count::of(1), s_false()),
        s_ite({s_false()}, s_false()),
        s_contains(5, Count::infinite(), s_true()),
        s_unique_items(),
        s_repeated_items(),
    };
    for (const auto& a : assertions) {
        auto kind = assertion_kind(*a);
        REQUIRE(kind.has_value());
        for (const auto& v : bounded_universe()) {
            if (v.kind() != *kind) CHECK(holds(v, a));
        }
    }
}

TEST_CASE("items positions are implicative on short arrays") {
    // "foo" and the empty array satisfy both ite(f;t) and ite(;f)
    SchemaPtr a = s_ite({s_false()}, s_true());
    SchemaPtr b = s_ite({}, s_false());
    CHECK(holds(JsonValue::string("foo"), a));
    CHECK(holds(JsonValue::string("foo"), b));
    CHECK(holds(JsonValue::array({}), a));
    CHECK(holds(JsonValue::array({}), b));
    CHECK(!holds(JsonValue::array({JsonValue::null()}), a));
    CHECK(!holds(JsonValue::array({JsonValue::null()}), b));
    // v = "foo" against 1-inf : f
    CHECK(holds(JsonValue::string("foo"), s_items(1, Count::infinite(), s_false())));
}

TEST_CASE("uniqueItems holds on the empty array") {
    CHECK(holds(JsonValue::array({}), s_unique_items()));
    CHECK(!holds(JsonValue::array({}), s_repeated_items()));
    JsonValue dup = JsonValue::array({JsonValue::number(1), JsonValue::number(1)});
    CHECK(!holds(dup, s_unique_items()));
    CHECK(holds(dup, s_repeated_items()));
    // 1 and 1.0 are equal instances
    JsonValue mixed = parse_json("[1, 1.0]");
    CHECK(!holds(mixed, s_unique_items()));
}

TEST_CASE("pattReq requires a matching member") {
    SchemaPtr s = s_pattreq(key_pattern("a"), s_type(JsonKind::Num));
    CHECK(holds(parse_json(R"({"a":1})"), s));
    CHECK(!holds(parse_json("{}"), s));
    CHECK(!holds(parse_json(R"({"a":"x"})"), s));
    CHECK(holds(parse_json("5"), s)); // implicative
    // brute force: objects with one member over the universe atoms
    for (const auto& v : jsw::testing::universe_atoms()) {
        JsonValue obj = JsonValue::object({{"a", v}});
        CHECK(holds(obj, s) == (v.kind() == JsonKind::Num));
    }
}

TEST_CASE("recursive validation of the not-eliminated example") {
    // x = a : not(ref x); after elimination the three-line system
    Environment env;
    env.define("x", s_prop(key_pattern("a"), s_not(s_ref("x"))));
    env.set_active("x");
    env.check_well_formed();
    Environment elim = eliminate_not(env);
    CHECK(negation_free(elim));

    CHECK(validate(parse_json("1"), elim));
    CHECK(validate(parse_json(R"({"a":{"a":1}})"), elim));
    CHECK(validate(parse_json(R"({"a":{"a":{"a":{"a":1}}}})"), elim));
    CHECK(!validate(parse_json(R"({"a":1})"), elim));
    // and the same verdicts on the original (validator handles Not directly)
    CHECK(validate(parse_json("1"), env));
    CHECK(!validate(parse_json(R"({"a":1})"), env));
}

TEST_CASE("bound normalization") {
    CHECK(bound_normalize(s_pro(0, Count::infinite()))->kind == Schema::Kind::True_);
    SchemaPtr bad = bound_normalize(s_pro(3, Count::of(2)));
    // type complement of Obj: five-type disjunction
    REQUIRE(bad->kind == Schema::Kind::Or);
    CHECK(bad->list.size() == 5);
    for (const auto& v : bounded_universe())
        CHECK(holds(v, bad) == (v.kind() != JsonKind::Obj));
    CHECK(bound_normalize(s_contains(0, Count::infinite(), s_ref("x")))->kind ==
          Schema::Kind::True_);
    CHECK(bound_normalize(s_betw(NumBound::neg_inf(), NumBound::pos_inf()))->kind ==
          Schema::Kind::True_);
    // normalization preserves semantics on random schemas
    Rng rng(4242);
    for (int i = 0; i < 120; ++i) {
        SchemaPtr s = jsw::testing::random_schema(rng, 3, {}, {});
        SchemaPtr n = bound_normalize(s);
        Environment env = env_of(s);
        for (size_t j = 0; j < bounded_universe().size(); j += 7) {
            const JsonValue& v = bounded_universe()[j];
            CHECK(validate(v, s, env) == validate(v, n, env));
        }
    }
}

TEST_CASE("encode_type marks exactly one kind per value") {
    for (const auto& v : bounded_universe()) {
        int matches = 0;
        for (JsonKind k : {JsonKind::Null, JsonKind::Bool, JsonKind::Num, JsonKind::Str,
                           JsonKind::Obj, JsonKind::Arr}) {
            SchemaPtr enc = encode_type(k);
            bool got = holds(v, enc);
            if (got) ++matches;
            CHECK(got == (v.kind() == k));
            CHECK(holds(v, s_type(k)) == got);
        }
        CHECK(matches == 1);
    }
}

TEST_CASE("ite sugar agrees with its expansion") {
    CHECK(s_ite({}, s_true())->list.empty());
    CHECK(expand_ite({}, s_true())->kind == Schema::Kind::Items);
    Rng rng(999);
    for (int i = 0; i < 200; ++i) {
        std::vector<SchemaPtr> prefix;
        for (size_t k = rng.below(3); k > 0; --k)
            prefix.push_back(jsw::testing::random_schema(rng, 1, {}, {}));
        SchemaPtr tail = jsw::testing::random_schema(rng, 1, {}, {});
        SchemaPtr sugar = s_ite(prefix, tail);
        SchemaPtr expanded = expand_ite(prefix, tail);
        Environment env = env_of(sugar);
        for (size_t j = 0; j < bounded_universe().size(); j += 11) {
            const JsonValue& v = bounded_universe()[j];
            CHECK(validate(v, sugar, env) == validate(v, expanded, env));
        }
    }
    // ite([x], f) rejects arrays of length >= 2
    SchemaPtr one = s_ite({s_type(JsonKind::Num)}, s_false());
    CHECK(holds(JsonValue::array({JsonValue::number(1)}), one));
    CHECK(!holds(JsonValue::array({JsonValue::number(1), JsonValue::number(2)}), one));
    CHECK(holds(JsonValue::array({}), one));
}

TEST_CASE("req encodes required members") {
    SchemaPtr r = req("a");
    CHECK(holds(parse_json(R"({"a":null})"), r));
    CHECK(!holds(parse_json("{}"), r));
    CHECK(holds(parse_json("5"), r)); // satisfied by non-objects
}

TEST_CASE("validator boolean laws") {
    Rng rng(1717);
    for (int i = 0; i < 100; ++i) {
        SchemaPtr a = jsw::testing::random_schema(rng, 2, {}, {});
        SchemaPtr b = jsw::testing::random_schema(rng, 2, {}, {});
        Environment env = env_of(a);
        for (size_t j = 0; j < bounded_universe().size(); j += 13) {
            const JsonValue& v = bounded_universe()[j];
            // De Morgan at the validator level
            CHECK(validate(v, s_not(s_and({a, b})), env) ==
                  validate(v, s_or({s_not(a), s_not(b)}), env));
        }
    }
}

TEST_CASE("guardedness is enforced") {
    Environment env;
    env.define("x", s_and({s_ref("y"), s_true()}));
    env.define("y", s_not(s_ref("x")));
    env.set_active("x");
    CHECK_THROWS_AS(env.check_well_formed(), UnguardedCycleError);

    Environment ok;
    ok.define("x", s_prop(key_pattern("a"), s_ref("x")));
    ok.set_active("x");
    CHECK_NOTHROW(ok.check_well_formed());

    Environment missing;
    missing.define("x", s_ref("nope"));
    missing.set_active("x");
    CHECK_THROWS_AS(missing.check_well_formed(), UnknownVariableError);
}

TEST_CASE("IR dumps reload to language-identical environments") {
    Rng rng(31415);
    for (int i = 0; i < 60; ++i) {
        Environment env = jsw::testing::random_env(rng, 3, 1);
        Environment back = env_from_ir(env_to_ir(env));
        CHECK(back.active() == env.active());
        CHECK(back.order().size() == env.order().size());
        for (size_t j = 0; j < bounded_universe().size(); j += 41) {
            const JsonValue& v = bounded_universe()[j];
            CHECK(validate(v, back) == validate(v, env));
        }
    }
    // the dump syntax round-trips through text too
    Environment env = jsw::testing::random_env(rng, 2, 1);
    JsonValue ir = env_to_ir(env);
    Environment again = env_from_ir(parse_json(serialize_json(ir)));
    for (size_t j = 0; j < bounded_universe().size(); j += 61) {
        const JsonValue& v = bounded_universe()[j];
        CHECK(validate(v, again) == validate(v, env));
    }
}
