#include "jsw/ir.hpp"

#include <stdexcept>

namespace jsw {

namespace {

JsonValue jstr(const std::string& s) { return JsonValue::string(s); }

JsonValue obj(std::initializer_list<std::pair<std::string, JsonValue>> members) {
    return JsonValue::object(JsonValue::Object(members.begin(), members.end()));
}

JsonValue bound_to_ir(const NumBound& b) {
    switch (b.kind) {
        case NumBound::Kind::NegInf: return jstr("-inf");
        case NumBound::Kind::PosInf: return jstr("inf");
        case NumBound::Kind::Finite: return jstr(b.value.to_string());
    }
    return jstr("?");
}

Rational rational_from_text(const std::string& t) {
    size_t slash = t.find('/');
    if (slash == std::string::npos) return Rational::from_decimal_string(t);
    return Rational(BigInt::from_decimal(t[0] == '-' ? t.substr(1, slash - 1) : t.substr(0, slash)),
                    BigInt::from_decimal(t.substr(slash + 1))) *
           (t[0] == '-' ? Rational(-1) : Rational(1));
}

NumBound bound_from_ir(const JsonValue& v) {
    const std::string& t = v.as_string();
    if (t == "-inf") return NumBound::neg_inf();
    if (t == "inf") return NumBound::pos_inf();
    return NumBound::finite(rational_from_text(t));
}

JsonValue count_to_ir(const Count& c) {
    return c.inf ? jstr("inf") : JsonValue::number(static_cast<long long>(c.n));
}

Count count_from_ir(const JsonValue& v) {
    if (v.kind() == JsonKind::Str) return Count::infinite();
    return Count::of(static_cast<uint64_t>(v.as_number().num().to_i64()));
}

uint64_t nat_from_ir(const JsonValue& v) {
    return static_cast<uint64_t>(v.as_number().num().to_i64());
}

const JsonValue& field(const JsonValue& v, const std::string& name) {
    const JsonValue* f = v.find(name);
    if (!f) throw std::invalid_argument("IR: missing field " + name);
    return *f;
}

} // namespace

JsonValue pattern_to_ir(const PatternExpr& p) {
    if (!p.source.empty())
        return obj({{"source", jstr(p.source)}});
    const re::Pattern* n = p.ptr;
    switch (n->op) {
        case re::Pattern::Op::Empty: return obj({{"op", jstr("empty")}});
        case re::Pattern::Op::Epsilon: return obj({{"op", jstr("epsilon")}});
        case re::Pattern::Op::Chars: {
            std::string set;
            bool other = false;
            for (int i = 0; i < re::kNumSymbols; ++i) {
                if (!n->chars.test(static_cast<size_t>(i))) continue;
                if (i == re::kOtherSymbol)
                    other = true;
                else
                    set.push_back(static_cast<char>(i + 0x20));
            }
            return obj({{"op", jstr("chars")}, {"set", jstr(set)},
                        {"other", JsonValue::boolean(other)}});
        }
        default: {
            const char* name = nullptr;
            switch (n->op) {
                case re::Pattern::Op::Concat: name = "concat"; break;
                case re::Pattern::Op::Union: name = "union"; break;
                case re::Pattern::Op::Inter: name = "inter"; break;
                case re::Pattern::Op::Complement: name = "complement"; break;
                case re::Pattern::Op::Star: name = "star"; break;
                default: name = "?"; break;
            }
            JsonValue::Array args;
            for (const re::Pattern* kid : n->kids)
                args.push_back(pattern_to_ir(PatternExpr{kid, ""}));
            return obj({{"op", jstr(name)},
                        {"args", JsonValue::array(std::move(args))},
                        {"display", jstr(re::display(n))}});
        }
    }
}

PatternExpr pattern_from_ir(const JsonValue& v) {
    if (const JsonValue* src = v.find("source"))
        return search_pattern(src->as_string());
    const std::string& op = field(v, "op").as_string();
    if (op == "empty") return PatternExpr{re::empty(), ""};
    if (op == "epsilon") return PatternExpr{re::epsilon(), ""};
    if (op == "chars") {
        re::SymSet set;
        for (unsigned char c : field(v, "set").as_string())
            set.set(static_cast<size_t>(re::symbol_of_codepoint(c)));
        if (field(v, "other").as_bool()) set.set(re::kOtherSymbol);
        return PatternExpr{re::chars(set), ""};
    }
    std::vector<re::PatternPtr> args;
    for (const auto& a : field(v, "args").as_array()) args.push_back(pattern_from_ir(a).ptr);
    if (op == "concat") return PatternExpr{re::concat(args), ""};
    if (op == "union") return PatternExpr{re::alt(args), ""};
    if (op == "inter") return PatternExpr{re::inter(args), ""};
    if (op == "complement") return PatternExpr{re::complement(args.at(0)), ""};
    if (op == "star") return PatternExpr{re::star(args.at(0)), ""};
    throw std::invalid_argument("IR: unknown pattern op " + op);
}

JsonValue schema_to_ir(const SchemaPtr& s) {
    switch (s->kind) {
        case Schema::Kind::True_: return obj({{"k", jstr("t")}});
        case Schema::Kind::False_: return obj({{"k", jstr("f")}});
        case Schema::Kind::IsBoolValue:
            return obj({{"k", jstr("isBoolValue")}, {"b", JsonValue::boolean(s->bvalue)}});
        case Schema::Kind::PatternAssert:
            return obj({{"k", jstr("pattern")}, {"r", pattern_to_ir(s->pattern)}});
        case Schema::Kind::NotPattern:
            return obj({{"k", jstr("notPattern")}, {"r", pattern_to_ir(s->pattern)}});
        case Schema::Kind::Betw:
            return obj({{"k", jstr("betw")}, {"min", bound_to_ir(s->num_lo)},
                        {"max", bound_to_ir(s->num_hi)}});
        case Schema::Kind::XBetw:
            return obj({{"k", jstr("xBetw")}, {"min", bound_to_ir(s->num_lo)},
                        {"max", bound_to_ir(s->num_hi)}});
        case Schema::Kind::MulOf:
            return obj({{"k", jstr("mulOf")}, {"n", jstr(s->mul.to_string())}});
        case Schema::Kind::NotMulOf:
            return obj({{"k", jstr("notMulOf")}, {"n", jstr(s->mul.to_string())}});
        case Schema::Kind::Pro:
            return obj({{"k", jstr("pro")}, {"min", JsonValue::number(static_cast<long long>(s->lo))},
                        {"max", count_to_ir(s->hi)}});
        case Schema::Kind::Prop:
            return obj({{"k", jstr("prop")}, {"r", pattern_to_ir(s->pattern)},
                        {"s", schema_to_ir(s->arg)}});
        case Schema::Kind::PattReq:
            return obj({{"k", jstr("pattReq")}, {"r", pattern_to_ir(s->pattern)},
                        {"s", schema_to_ir(s->arg)}});
        case Schema::Kind::OrPattReq: {
            JsonValue::Array alts;
            for (const auto& [p, v] : s->alts)
                alts.push_back(obj({{"r", pattern_to_ir(p)}, {"s", schema_to_ir(v)}}));
            return obj({{"k", jstr("orPattReq")}, {"alts", JsonValue::array(std::move(alts))}});
        }
        case Schema::Kind::Items:
            return obj({{"k", jstr("items")}, {"min", JsonValue::number(static_cast<long long>(s->lo))},
                        {"max", count_to_ir(s->hi)}, {"s", schema_to_ir(s->arg)}});
        case Schema::Kind::Ite: {
            JsonValue::Array prefix;
            for (const auto& p : s->list) prefix.push_back(schema_to_ir(p));
            return obj({{"k", jstr("ite")}, {"prefix", JsonValue::array(std::move(prefix))},
                        {"tail", schema_to_ir(s->arg)}});
        }
        case Schema::Kind::Contains:
            return obj({{"k", jstr("contains")},
                        {"min", JsonValue::number(static_cast<long long>(s->lo))},
                        {"max", count_to_ir(s->hi)}, {"s", schema_to_ir(s->arg)}});
        case Schema::Kind::UniqueItems: return obj({{"k", jstr("uniqueItems")}});
        case Schema::Kind::RepeatedItems: return obj({{"k", jstr("repeatedItems")}});
        case Schema::Kind::TypeAssert:
            return obj({{"k", jstr("type")}, {"t", jstr(kind_name(s->type))}});
        case Schema::Kind::And:
        case Schema::Kind::Or:
        case Schema::Kind::Group: {
            JsonValue::Array args;
            for (const auto& p : s->list) args.push_back(schema_to_ir(p));
            if (s->kind == Schema::Kind::And)
                return obj({{"k", jstr("and")}, {"args", JsonValue::array(std::move(args))}});
            if (s->kind == Schema::Kind::Or)
                return obj({{"k", jstr("or")}, {"args", JsonValue::array(std::move(args))}});
            JsonValue::Object members{{"k", jstr("group")}};
            if (s->has_group_type) members.emplace_back("type", jstr(kind_name(s->type)));
            if (s->prepared) members.emplace_back("prepared", JsonValue::boolean(true));
            members.emplace_back("args", JsonValue::array(std::move(args)));
            return JsonValue::object(std::move(members));
        }
        case Schema::Kind::Not: return obj({{"k", jstr("not")}, {"s", schema_to_ir(s->arg)}});
        case Schema::Kind::Ref: return obj({{"k", jstr("ref")}, {"x", jstr(s->var)}});
    }
    throw std::logic_error("schema_to_ir: unhandled kind");
}

namespace {

JsonKind kind_from_name(const std::string& n) {
    if (n == "null") return JsonKind::Null;
    if (n == "boolean") return JsonKind::Bool;
    if (n == "number") return JsonKind::Num;
    if (n == "string") return JsonKind::Str;
    if (n == "object") return JsonKind::Obj;
    if (n == "array") return JsonKind::Arr;
    throw std::invalid_argument("IR: unknown type name " + n);
}

} // namespace

SchemaPtr schema_from_ir(const JsonValue& v) {
    const std::string& k = field(v, "k").as_string();
    if (k == "t") return s_true();
    if (k == "f") return s_false();
    if (k == "isBoolValue") return s_bool_value(field(v, "b").as_bool());
    if (k == "pattern") return s_pattern(pattern_from_ir(field(v, "r")));
    if (k == "notPattern") return s_not_pattern(pattern_from_ir(field(v, "r")));
    if (k == "betw") return s_betw(bound_from_ir(field(v, "min")), bound_from_ir(field(v, "max")));
    if (k == "xBetw") return s_xbetw(bound_from_ir(field(v, "min")), bound_from_ir(field(v, "max")));
    if (k == "mulOf") return s_mulof(rational_from_text(field(v, "n").as_string()));
    if (k == "notMulOf") return s_not_mulof(rational_from_text(field(v, "n").as_string()));
    if (k == "pro") return s_pro(nat_from_ir(field(v, "min")), count_from_ir(field(v, "max")));
    if (k == "prop") return s_prop(pattern_from_ir(field(v, "r")), schema_from_ir(field(v, "s")));
    if (k == "pattReq")
        return s_pattreq(pattern_from_ir(field(v, "r")), schema_from_ir(field(v, "s")));
    if (k == "orPattReq") {
        std::vector<std::pair<PatternExpr, SchemaPtr>> alts;
        for (const auto& a : field(v, "alts").as_array())
            alts.emplace_back(pattern_from_ir(field(a, "r")), schema_from_ir(field(a, "s")));
        return s_orpattreq(std::move(alts));
    }
    if (k == "items")
        return s_items(nat_from_ir(field(v, "min")), count_from_ir(field(v, "max")),
                       schema_from_ir(field(v, "s")));
    if (k == "ite") {
        std::vector<SchemaPtr> prefix;
        for (const auto& p : field(v, "prefix").as_array()) prefix.push_back(schema_from_ir(p));
        return s_ite(std::move(prefix), schema_from_ir(field(v, "tail")));
    }
    if (k == "contains")
        return s_contains(nat_from_ir(field(v, "min")), count_from_ir(field(v, "max")),
                          schema_from_ir(field(v, "s")));
    if (k == "uniqueItems") return s_unique_items();
    if (k == "repeatedItems") return s_repeated_items();
    if (k == "type") return s_type(kind_from_name(field(v, "t").as_string()));
    if (k == "and" || k == "or" || k == "group") {
        std::vector<SchemaPtr> args;
        for (const auto& a : field(v, "args").as_array()) args.push_back(schema_from_ir(a));
        if (k == "and") return s_and(std::move(args));
        if (k == "or") return s_or(std::move(args));
        std::optional<JsonKind> type;
        if (const JsonValue* t = v.find("type")) type = kind_from_name(t->as_string());
        bool prepared = v.find("prepared") && v.find("prepared")->as_bool();
        return s_group(std::move(args), type, prepared);
    }
    if (k == "not") return s_not(schema_from_ir(field(v, "s")));
    if (k == "ref") return s_ref(field(v, "x").as_string());
    throw std::invalid_argument("IR: unknown schema kind " + k);
}

JsonValue env_to_ir(const Environment& env) {
    JsonValue::Array defs;
    for (const auto& name : env.order())
        defs.push_back(obj({{"name", jstr(name)}, {"body", schema_to_ir(env.body(name))}}));
    JsonValue::Object complements;
    for (const auto& name : env.order()) {
        if (env.has_complement(name)) complements.emplace_back(name, jstr(env.complement_of(name)));
    }
    return obj({{"active", jstr(env.active())},
                {"defs", JsonValue::array(std::move(defs))},
                {"complements", JsonValue::object(std::move(complements))}});
}

Environment env_from_ir(const JsonValue& v) {
    Environment env;
    for (const auto& d : field(v, "defs").as_array())
        env.define(field(d, "name").as_string(), schema_from_ir(field(d, "body")));
    env.set_active(field(v, "active").as_string());
    if (const JsonValue* comps = v.find("complements")) {
        for (const auto& [a, b] : comps->as_object())
            if (!env.has_complement(a)) env.set_complement(a, b.as_string());
    }
    return env;
}

// ---- extension-vocabulary export ----

namespace {

void pattern_or_expression(const PatternExpr& p, const std::string& plain_key,
                           JsonValue::Object& o) {
    if (!p.source.empty()) {
        o.emplace_back(plain_key, jstr(p.source));
    } else {
        o.emplace_back("x-patternExpression", pattern_to_ir(p));
    }
}

JsonValue export_schema(const SchemaPtr& s);

JsonValue export_pair_list(const std::vector<std::pair<PatternExpr, SchemaPtr>>& alts) {
    JsonValue::Array out;
    for (const auto& [p, v] : alts) {
        JsonValue::Object e;
        pattern_or_expression(p, "pattern", e);
        e.emplace_back("schema", export_schema(v));
        out.push_back(JsonValue::object(std::move(e)));
    }
    return JsonValue::array(std::move(out));
}

JsonValue export_schema(const SchemaPtr& s) {
    JsonValue::Object o;
    switch (s->kind) {
        case Schema::Kind::True_: return JsonValue::boolean(true);
        case Schema::Kind::False_: return JsonValue::boolean(false);
        case Schema::Kind::IsBoolValue:
            o.emplace_back("x-isBoolValue", JsonValue::boolean(s->bvalue));
            break;
        case Schema::Kind::PatternAssert: pattern_or_expression(s->pattern, "pattern", o); break;
        case Schema::Kind::NotPattern: pattern_or_expression(s->pattern, "x-notPattern", o); break;
        case Schema::Kind::Betw:
            if (s->num_lo.is_finite())
                o.emplace_back("minimum", JsonValue::number(s->num_lo.value));
            if (s->num_hi.is_finite())
                o.emplace_back("maximum", JsonValue::number(s->num_hi.value));
            break;
        case Schema::Kind::XBetw:
            if (s->num_lo.is_finite())
                o.emplace_back("exclusiveMinimum", JsonValue::number(s->num_lo.value));
            if (s->num_hi.is_finite())
                o.emplace_back("exclusiveMaximum", JsonValue::number(s->num_hi.value));
            break;
        case Schema::Kind::MulOf: o.emplace_back("multipleOf", JsonValue::number(s->mul)); break;
        case Schema::Kind::NotMulOf:
            o.emplace_back("x-notMultipleOf", JsonValue::number(s->mul));
            break;
        case Schema::Kind::Pro:
            if (s->lo > 0)
                o.emplace_back("minProperties", JsonValue::number(static_cast<long long>(s->lo)));
            if (!s->hi.inf)
                o.emplace_back("maxProperties", JsonValue::number(static_cast<long long>(s->hi.n)));
            break;
        case Schema::Kind::Prop: {
            JsonValue::Object entry;
            pattern_or_expression(s->pattern, "pattern", entry);
            entry.emplace_back("schema", export_schema(s->arg));
            o.emplace_back("x-patternConstraint",
                           JsonValue::array({JsonValue::object(std::move(entry))}));
            break;
        }
        case Schema::Kind::PattReq:
            o.emplace_back("x-patternRequired", export_pair_list({{s->pattern, s->arg}}));
            break;
        case Schema::Kind::OrPattReq:
            o.emplace_back("x-orPatternRequired", export_pair_list(s->alts));
            break;
        case Schema::Kind::Items: {
            JsonValue::Array prefix;
            for (uint64_t p = 1; p < s->lo; ++p) prefix.push_back(JsonValue::boolean(true));
            if (s->hi.inf) {
                o.emplace_back("items", JsonValue::array(std::move(prefix)));
                o.emplace_back("additionalItems", export_schema(s->arg));
            } else {
                for (uint64_t p = s->lo; p <= s->hi.n; ++p) prefix.push_back(export_schema(s->arg));
                o.emplace_back("items", JsonValue::array(std::move(prefix)));
                o.emplace_back("additionalItems", JsonValue::boolean(true));
            }
            break;
        }
        case Schema::Kind::Ite: {
            JsonValue::Array prefix;
            for (const auto& p : s->list) prefix.push_back(export_schema(p));
            o.emplace_back("items", JsonValue::array(std::move(prefix)));
            o.emplace_back("additionalItems", export_schema(s->arg));
            break;
        }
        case Schema::Kind::Contains:
            if (s->arg->kind == Schema::Kind::True_) {
                if (s->lo > 0)
                    o.emplace_back("minItems", JsonValue::number(static_cast<long long>(s->lo)));
                if (!s->hi.inf)
                    o.emplace_back("maxItems", JsonValue::number(static_cast<long long>(s->hi.n)));
            } else {
                o.emplace_back("contains", export_schema(s->arg));
                if (s->lo != 1)
                    o.emplace_back("minContains", JsonValue::number(static_cast<long long>(s->lo)));
                if (!s->hi.inf)
                    o.emplace_back("maxContains", JsonValue::number(static_cast<long long>(s->hi.n)));
            }
            break;
        case Schema::Kind::UniqueItems: o.emplace_back("uniqueItems", JsonValue::boolean(true)); break;
        case Schema::Kind::RepeatedItems:
            o.emplace_back("x-repeatedItems", JsonValue::boolean(true));
            break;
        case Schema::Kind::TypeAssert: {
            const char* name = kind_name(s->type);
            o.emplace_back("type", jstr(name));
            break;
        }
        case Schema::Kind::And:
        case Schema::Kind::Group: {
            JsonValue::Array all;
            if (s->kind == Schema::Kind::Group && s->has_group_type)
                all.push_back(JsonValue::object({{"type", jstr(kind_name(s->type))}}));
            for (const auto& p : s->list) all.push_back(export_schema(p));
            o.emplace_back("allOf", JsonValue::array(std::move(all)));
            break;
        }
        case Schema::Kind::Or: {
            JsonValue::Array any;
            for (const auto& p : s->list) any.push_back(export_schema(p));
            o.emplace_back("anyOf", JsonValue::array(std::move(any)));
            break;
        }
        case Schema::Kind::Not:
            o.emplace_back("not", export_schema(s->arg));
            break;
        case Schema::Kind::Ref: {
            o.emplace_back("$ref", jstr("#/definitions/" + s->var));
            break;
        }
    }
    return JsonValue::object(std::move(o));
}

} // namespace

JsonValue export_extended_schema(const Environment& env) {
    JsonValue::Object defs;
    for (const auto& name : env.order()) defs.emplace_back(name, export_schema(env.body(name)));
    return JsonValue::object(
        {{"$ref", jstr("#/definitions/" + env.active())},
         {"definitions", JsonValue::object(std::move(defs))}});
}

} // namespace jsw
