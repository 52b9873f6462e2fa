#include "jsw/frontend.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace jsw {

// ---- reference normalization ----

namespace {

std::string percent_decode(const std::string& s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size() && isxdigit(s[i + 1]) && isxdigit(s[i + 2])) {
            auto hex = [](char c) {
                if (c >= '0' && c <= '9') return c - '0';
                if (c >= 'a' && c <= 'f') return c - 'a' + 10;
                return c - 'A' + 10;
            };
            out.push_back(static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2])));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::string escape_pointer_token(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out.push_back(c);
    }
    return out;
}

std::vector<std::string> pointer_tokens(const std::string& pointer) {
    std::vector<std::string> tokens;
    if (pointer.empty()) return tokens;
    if (pointer[0] != '/') throw UnresolvableRefError(pointer);
    std::string token;
    for (size_t i = 1; i <= pointer.size(); ++i) {
        if (i == pointer.size() || pointer[i] == '/') {
            std::string t;
            for (size_t j = 0; j < token.size(); ++j) {
                if (token[j] == '~' && j + 1 < token.size()) {
                    t.push_back(token[j + 1] == '0' ? '~' : '/');
                    ++j;
                } else {
                    t.push_back(token[j]);
                }
            }
            tokens.push_back(std::move(t));
            token.clear();
        } else {
            token.push_back(pointer[i]);
        }
    }
    return tokens;
}

const JsonValue* resolve_pointer(const JsonValue& doc, const std::string& pointer) {
    const JsonValue* cur = &doc;
    for (const auto& token : pointer_tokens(pointer)) {
        if (cur->kind() == JsonKind::Obj) {
            cur = cur->find(token);
            if (!cur) return nullptr;
        } else if (cur->kind() == JsonKind::Arr) {
            size_t idx = 0;
            if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
                return nullptr;
            idx = std::stoul(token);
            if (idx >= cur->as_array().size()) return nullptr;
            cur = &cur->as_array()[idx];
        } else {
            return nullptr;
        }
    }
    return cur;
}

struct RefNormalizer {
    const std::vector<RawSchemaDoc>& docs;
    size_t root_index;
    // (doc index, pointer) -> definitions name
    std::map<std::pair<size_t, std::string>, std::string> named;
    std::set<std::string> used_names;
    std::vector<std::pair<std::string, JsonValue>> new_defs;
    std::deque<std::tuple<size_t, std::string, std::string>> work; // doc, pointer, name

    size_t doc_by_uri(const std::string& uri) const {
        for (size_t i = 0; i < docs.size(); ++i)
            if (docs[i].source_uri == uri) return i;
        throw UnresolvableRefError(uri);
    }

    std::string fresh_name(const std::string& hint) {
        std::string stem = hint.empty() ? "def" : hint;
        std::string name = stem;
        for (int i = 1; used_names.count(name); ++i) name = stem + "_" + std::to_string(i);
        used_names.insert(name);
        return name;
    }

    std::string name_for(size_t doc, const std::string& pointer) {
        auto key = std::make_pair(doc, pointer);
        auto it = named.find(key);
        if (it != named.end()) return it->second;
        if (!resolve_pointer(docs[doc].root, pointer)) throw UnresolvableRefError(pointer);
        std::string hint = pointer.substr(pointer.find_last_of('/') + 1);
        std::string name = fresh_name(hint);
        named.emplace(key, name);
        work.emplace_back(doc, pointer, name);
        return name;
    }

    // Rewrites a $ref string appearing inside document `doc`.
    std::string rewrite_ref(size_t doc, const std::string& ref) {
        std::string uri, fragment;
        size_t hash = ref.find('#');
        if (hash == std::string::npos) {
            uri = ref;
        } else {
            uri = ref.substr(0, hash);
            fragment = percent_decode(ref.substr(hash + 1));
        }
        size_t target_doc = uri.empty() ? doc : doc_by_uri(uri);
        if (!fragment.empty() && fragment[0] != '/')
            throw UnresolvableRefError(ref + " (by-name references are not supported)");
        if (target_doc == root_index) {
            if (fragment.empty()) return "#";
            auto tokens = pointer_tokens(fragment);
            if (tokens.size() == 2 && tokens[0] == "definitions") {
                const JsonValue* defs = docs[root_index].root.find("definitions");
                if (defs && defs->kind() == JsonKind::Obj && defs->find(tokens[1])) {
                    claim_root_definition(tokens[1]);
                    return "#/definitions/" + tokens[1];
                }
            }
            return "#/definitions/" + name_for(target_doc, fragment);
        }
        return "#/definitions/" + name_for(target_doc, fragment);
    }

    void claim_root_definition(const std::string& name) {
        std::string pointer = "/definitions/" + escape_pointer_token(name);
        auto key = std::make_pair(root_index, pointer);
        if (named.count(key)) return;
        named.emplace(key, name);
        used_names.insert(name);
        work.emplace_back(root_index, pointer, name);
    }

    JsonValue rewrite(size_t doc, const JsonValue& v) {
        switch (v.kind()) {
            case JsonKind::Obj: {
                const JsonValue* ref = v.find("$ref");
                if (ref && ref->kind() == JsonKind::Str) {
                    // draft-06: $ref overrides its siblings
                    return JsonValue::object({{"$ref", JsonValue::string(rewrite_ref(doc, ref->as_string()))}});
                }
                JsonValue::Object members;
                for (const auto& [name, value] : v.as_object())
                    members.emplace_back(name, rewrite(doc, value));
                return JsonValue::object(std::move(members));
            }
            case JsonKind::Arr: {
                JsonValue::Array items;
                for (const auto& e : v.as_array()) items.push_back(rewrite(doc, e));
                return JsonValue::array(std::move(items));
            }
            default: return v;
        }
    }

    RawSchemaDoc run() {
        const JsonValue& root = docs[root_index].root;
        if (root.kind() == JsonKind::Bool) return {root, docs[root_index].source_uri};
        if (root.kind() != JsonKind::Obj)
            throw UnresolvableRefError("schema document must be an object or boolean");

        // existing root definitions keep their names
        const JsonValue* defs = root.find("definitions");
        if (defs && defs->kind() == JsonKind::Obj) {
            for (const auto& [name, value] : defs->as_object()) used_names.insert(name);
            for (const auto& [name, value] : defs->as_object()) claim_root_definition(name);
        }

        JsonValue::Object stripped;
        for (const auto& [name, value] : root.as_object()) {
            if (name == "definitions") continue;
            stripped.emplace_back(name, value);
        }
        JsonValue rewritten = rewrite(root_index, JsonValue::object(std::move(stripped)));
        JsonValue::Object top = rewritten.as_object();

        std::vector<std::pair<std::string, JsonValue>> defs_out;
        std::set<std::string> emitted;
        while (!work.empty()) {
            auto [doc, pointer, name] = work.front();
            work.pop_front();
            if (!emitted.insert(name).second) continue;
            const JsonValue* target = resolve_pointer(docs[doc].root, pointer);
            if (!target) throw UnresolvableRefError(pointer);
            defs_out.emplace_back(name, rewrite(doc, *target));
        }
        std::sort(defs_out.begin(), defs_out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (!defs_out.empty()) {
            JsonValue::Object defs_obj;
            for (auto& [name, value] : defs_out) defs_obj.emplace_back(name, std::move(value));
            top.emplace_back("definitions", JsonValue::object(std::move(defs_obj)));
        }
        return {JsonValue::object(std::move(top)), docs[root_index].source_uri};
    }
};

} // namespace

RawSchemaDoc normalize_refs(const std::vector<RawSchemaDoc>& docs, const std::string& root_uri) {
    if (docs.empty()) throw std::invalid_argument("no schema documents supplied");
    size_t root_index = 0;
    if (!root_uri.empty()) {
        for (size_t i = 0; i < docs.size(); ++i)
            if (docs[i].source_uri == root_uri) root_index = i;
    }
    RefNormalizer n{docs, root_index, {}, {}, {}, {}};
    return n.run();
}

// ---- translation ----

namespace {

struct Translator {
    std::string root_name;
    std::vector<std::string> warnings;

    [[noreturn]] void unsupported(const std::string& keyword) {
        throw UnsupportedKeywordError(keyword);
    }

    SchemaPtr tr(const JsonValue& j) {
        if (j.kind() == JsonKind::Bool) return j.as_bool() ? s_true() : s_false();
        if (j.kind() != JsonKind::Obj)
            throw UnsupportedKeywordError("schema must be an object or boolean");
        const JsonValue* ref = j.find("$ref");
        if (ref) {
            const std::string& r = ref->as_string();
            if (r == "#") return s_ref(root_name);
            const std::string prefix = "#/definitions/";
            if (r.rfind(prefix, 0) == 0) return s_ref(r.substr(prefix.size()));
            throw UnresolvableRefError(r + " (document is not ref-normalized)");
        }

        std::vector<SchemaPtr> parts;
        for (const auto& [key, value] : j.as_object()) translate_keyword(j, key, value, parts);
        return s_and(std::move(parts));
    }

    SchemaPtr const_schema(const JsonValue& v) {
        switch (v.kind()) {
            case JsonKind::Null: return s_type(JsonKind::Null);
            case JsonKind::Bool:
                return s_and({s_type(JsonKind::Bool), s_bool_value(v.as_bool())});
            case JsonKind::Num: {
                NumBound b = NumBound::finite(v.as_number());
                return s_and({s_type(JsonKind::Num), s_betw(b, b)});
            }
            case JsonKind::Str:
                return s_and({s_type(JsonKind::Str), s_pattern(key_pattern(v.as_string()))});
            case JsonKind::Arr: {
                const auto& items = v.as_array();
                std::vector<SchemaPtr> consts;
                consts.reserve(items.size());
                for (const auto& e : items) consts.push_back(const_schema(e));
                uint64_t n = items.size();
                return s_and({s_type(JsonKind::Arr), s_contains(n, Count::of(n), s_true()),
                              s_ite(std::move(consts), s_true())});
            }
            case JsonKind::Obj: {
                const auto& members = v.as_object();
                std::vector<SchemaPtr> parts{s_type(JsonKind::Obj)};
                uint64_t n = members.size();
                parts.push_back(s_pro(n, Count::of(n)));
                std::vector<std::string> keys;
                for (const auto& [name, value] : members) {
                    parts.push_back(s_prop(key_pattern(name), const_schema(value)));
                    keys.push_back(name);
                }
                parts.push_back(required_schema(keys));
                return s_and(std::move(parts));
            }
        }
        return s_true();
    }

    SchemaPtr required_schema(const std::vector<std::string>& keys) {
        if (keys.empty()) return s_true();
        std::vector<SchemaPtr> nots;
        nots.reserve(keys.size());
        for (const auto& k : keys) nots.push_back(s_not(s_prop(key_pattern(k), s_false())));
        return s_or({s_not(s_type(JsonKind::Obj)), s_and(std::move(nots))});
    }

    SchemaPtr type_of_name(const std::string& name) {
        if (name == "null") return s_type(JsonKind::Null);
        if (name == "boolean") return s_type(JsonKind::Bool);
        if (name == "number") return s_type(JsonKind::Num);
        if (name == "integer") return s_and({s_type(JsonKind::Num), s_mulof(Rational(1))});
        if (name == "string") return s_type(JsonKind::Str);
        if (name == "object") return s_type(JsonKind::Obj);
        if (name == "array") return s_type(JsonKind::Arr);
        throw UnsupportedKeywordError("type: " + name);
    }

    static PatternExpr length_pattern(uint64_t lo, Count hi) {
        re::PatternPtr p = re::repeat(re::any_char(), lo, hi.inf ? SIZE_MAX : hi.n);
        std::string src = "^.{" + std::to_string(lo) + "," + (hi.inf ? "" : std::to_string(hi.n)) + "}$";
        return PatternExpr{p, src};
    }

    void translate_keyword(const JsonValue& schema, const std::string& key, const JsonValue& value,
                           std::vector<SchemaPtr>& parts) {
        if (key == "type") {
            if (value.kind() == JsonKind::Str) {
                parts.push_back(type_of_name(value.as_string()));
            } else if (value.kind() == JsonKind::Arr) {
                std::vector<SchemaPtr> alts;
                for (const auto& t : value.as_array()) alts.push_back(type_of_name(t.as_string()));
                parts.push_back(s_or(std::move(alts)));
            } else {
                unsupported("type (expects a string or array)");
            }
        } else if (key == "const") {
            parts.push_back(const_schema(value));
        } else if (key == "enum") {
            std::vector<SchemaPtr> alts;
            for (const auto& v : value.as_array()) alts.push_back(const_schema(v));
            parts.push_back(s_or(std::move(alts)));
        } else if (key == "minimum") {
            parts.push_back(s_betw(NumBound::finite(value.as_number()), NumBound::pos_inf()));
        } else if (key == "maximum") {
            parts.push_back(s_betw(NumBound::neg_inf(), NumBound::finite(value.as_number())));
        } else if (key == "exclusiveMinimum") {
            parts.push_back(s_xbetw(NumBound::finite(value.as_number()), NumBound::pos_inf()));
        } else if (key == "exclusiveMaximum") {
            parts.push_back(s_xbetw(NumBound::neg_inf(), NumBound::finite(value.as_number())));
        } else if (key == "multipleOf") {
            parts.push_back(s_mulof(value.as_number()));
        } else if (key == "minLength") {
            uint64_t m = count_value(value, key);
            if (m > 0) parts.push_back(s_pattern(length_pattern(m, Count::infinite())));
        } else if (key == "maxLength") {
            parts.push_back(s_pattern(length_pattern(0, Count::of(count_value(value, key)))));
        } else if (key == "pattern") {
            parts.push_back(s_pattern(search_pattern(value.as_string())));
        } else if (key == "items") {
            const JsonValue* add = schema.find("additionalItems");
            if (value.kind() == JsonKind::Arr) {
                std::vector<SchemaPtr> prefix;
                for (const auto& e : value.as_array()) prefix.push_back(tr(e));
                SchemaPtr tail = add ? tr(*add) : s_true();
                SchemaPtr node = s_ite(std::move(prefix), std::move(tail));
                if (!(node->list.empty() && node->arg->kind == Schema::Kind::True_))
                    parts.push_back(std::move(node));
            } else {
                SchemaPtr body = tr(value);
                if (body->kind != Schema::Kind::True_) parts.push_back(s_ite({}, std::move(body)));
            }
        } else if (key == "additionalItems") {
            const JsonValue* items = schema.find("items");
            if (!items || items->kind() != JsonKind::Arr)
                warnings.push_back("additionalItems ignored (items is not an array)");
        } else if (key == "minItems") {
            uint64_t m = count_value(value, key);
            if (m > 0) parts.push_back(s_contains(m, Count::infinite(), s_true()));
        } else if (key == "maxItems") {
            parts.push_back(s_contains(0, Count::of(count_value(value, key)), s_true()));
        } else if (key == "uniqueItems") {
            if (value.kind() == JsonKind::Bool && value.as_bool())
                parts.push_back(s_unique_items());
        } else if (key == "contains") {
            uint64_t lo = 1;
            Count hi = Count::infinite();
            if (const JsonValue* mc = schema.find("minContains")) lo = count_value(*mc, "minContains");
            if (const JsonValue* xc = schema.find("maxContains"))
                hi = Count::of(count_value(*xc, "maxContains"));
            parts.push_back(s_contains(lo, hi, tr(value)));
        } else if (key == "minContains" || key == "maxContains") {
            if (!schema.find("contains")) warnings.push_back(key + " ignored (no contains)");
        } else if (key == "minProperties") {
            uint64_t m = count_value(value, key);
            if (m > 0) parts.push_back(s_pro(m, Count::infinite()));
        } else if (key == "maxProperties") {
            parts.push_back(s_pro(0, Count::of(count_value(value, key))));
        } else if (key == "required") {
            std::vector<std::string> keys;
            for (const auto& k : value.as_array()) keys.push_back(k.as_string());
            SchemaPtr node = required_schema(keys);
            if (node->kind != Schema::Kind::True_) parts.push_back(std::move(node));
        } else if (key == "properties" || key == "patternProperties" ||
                   key == "additionalProperties") {
            if (key != first_property_keyword(schema)) return; // handled together once
            translate_properties(schema, parts);
        } else if (key == "allOf") {
            std::vector<SchemaPtr> all;
            for (const auto& v : value.as_array()) all.push_back(tr(v));
            parts.push_back(s_and(std::move(all)));
        } else if (key == "anyOf") {
            std::vector<SchemaPtr> any;
            for (const auto& v : value.as_array()) any.push_back(tr(v));
            parts.push_back(s_or(std::move(any)));
        } else if (key == "oneOf") {
            std::vector<SchemaPtr> subs;
            for (const auto& v : value.as_array()) subs.push_back(tr(v));
            std::vector<SchemaPtr> alts;
            for (size_t i = 0; i < subs.size(); ++i) {
                std::vector<SchemaPtr> conj{subs[i]};
                for (size_t j = 0; j < subs.size(); ++j)
                    if (j != i) conj.push_back(s_not(subs[j]));
                alts.push_back(s_and(std::move(conj)));
            }
            parts.push_back(s_or(std::move(alts)));
        } else if (key == "not") {
            parts.push_back(s_not(tr(value)));
        } else if (key == "if") {
            SchemaPtr cond = tr(value);
            const JsonValue* then_v = schema.find("then");
            const JsonValue* else_v = schema.find("else");
            SchemaPtr then_s = then_v ? tr(*then_v) : s_true();
            SchemaPtr else_s = else_v ? tr(*else_v) : s_true();
            parts.push_back(
                s_or({s_and({cond, then_s}), s_and({s_not(cond), else_s})}));
        } else if (key == "then" || key == "else") {
            if (!schema.find("if")) warnings.push_back(key + " ignored (no if)");
        } else if (key == "definitions") {
            // a pure container; entries become variables at the root
        } else if (key == "dependencies" || key == "propertyNames" || key == "$dynamicRef" ||
                   key == "$dynamicAnchor" || key == "unevaluatedProperties" ||
                   key == "unevaluatedItems" || key == "$anchor" || key == "$recursiveRef") {
            unsupported(key);
        } else {
            warnings.push_back("ignored keyword: " + key);
        }
    }

    static std::string first_property_keyword(const JsonValue& schema) {
        for (const auto& [name, value] : schema.as_object()) {
            if (name == "properties" || name == "patternProperties" ||
                name == "additionalProperties")
                return name;
        }
        return "";
    }

    void translate_properties(const JsonValue& schema, std::vector<SchemaPtr>& parts) {
        std::vector<re::PatternPtr> covered;
        if (const JsonValue* props = schema.find("properties")) {
            for (const auto& [name, sub] : props->as_object()) {
                PatternExpr pat = key_pattern(name);
                covered.push_back(pat.ptr);
                SchemaPtr body = tr(sub);
                if (body->kind != Schema::Kind::True_) parts.push_back(s_prop(pat, body));
            }
        }
        if (const JsonValue* pprops = schema.find("patternProperties")) {
            for (const auto& [src, sub] : pprops->as_object()) {
                PatternExpr pat = search_pattern(src);
                covered.push_back(pat.ptr);
                SchemaPtr body = tr(sub);
                if (body->kind != Schema::Kind::True_) parts.push_back(s_prop(pat, body));
            }
        }
        if (const JsonValue* add = schema.find("additionalProperties")) {
            SchemaPtr body = tr(*add);
            if (body->kind != Schema::Kind::True_) {
                re::PatternPtr rest = re::complement(re::alt(covered));
                parts.push_back(s_prop(PatternExpr{rest, ""}, body));
            }
        }
    }

    uint64_t count_value(const JsonValue& v, const std::string& key) {
        if (v.kind() != JsonKind::Num || !v.as_number().is_integer() ||
            v.as_number().sign() < 0 || !v.as_number().num().fits_i64())
            throw UnsupportedKeywordError(key + " expects a non-negative integer");
        return static_cast<uint64_t>(v.as_number().num().to_i64());
    }
};

} // namespace

TranslateResult translate(const RawSchemaDoc& doc) {
    TranslateResult out;
    Translator t;

    std::vector<std::pair<std::string, JsonValue>> defs;
    if (doc.root.kind() == JsonKind::Obj) {
        if (const JsonValue* d = doc.root.find("definitions")) {
            if (d->kind() == JsonKind::Obj)
                for (const auto& [name, value] : d->as_object()) defs.emplace_back(name, value);
        }
    }
    std::set<std::string> taken;
    for (const auto& [name, value] : defs) taken.insert(name);
    t.root_name = "xroot";
    for (int i = 1; taken.count(t.root_name); ++i) t.root_name = "xroot_" + std::to_string(i);

    // bodies may reference any definition, so declare names first
    out.env.define(t.root_name, s_true());
    for (const auto& [name, value] : defs) out.env.define(name, s_true());
    out.env.set_active(t.root_name);

    out.env.set_body(t.root_name, t.tr(doc.root));
    for (const auto& [name, value] : defs) out.env.set_body(name, t.tr(value));
    out.env.check_well_formed();
    out.warnings = std::move(t.warnings);
    return out;
}

TranslateResult load_schema(const JsonValue& schema, const std::string& uri) {
    RawSchemaDoc doc{schema, uri};
    return translate(normalize_refs({doc}));
}

} // namespace jsw
