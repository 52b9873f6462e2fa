#include "jsw/json_value.hpp"

#include <cstdio>
#include <stdexcept>
#include <unordered_set>

namespace jsw {

const char* kind_name(JsonKind k) {
    switch (k) {
        case JsonKind::Null: return "null";
        case JsonKind::Bool: return "boolean";
        case JsonKind::Num: return "number";
        case JsonKind::Str: return "string";
        case JsonKind::Obj: return "object";
        case JsonKind::Arr: return "array";
    }
    return "?";
}

JsonValue JsonValue::boolean(bool b) {
    JsonValue v;
    v.kind_ = JsonKind::Bool;
    v.b_ = b;
    return v;
}

JsonValue JsonValue::number(Rational q) {
    JsonValue v;
    v.kind_ = JsonKind::Num;
    v.num_ = std::move(q);
    return v;
}

JsonValue JsonValue::string(std::string s) {
    JsonValue v;
    v.kind_ = JsonKind::Str;
    v.str_ = std::make_shared<const std::string>(std::move(s));
    return v;
}

JsonValue JsonValue::array(Array items) {
    JsonValue v;
    v.kind_ = JsonKind::Arr;
    v.arr_ = std::make_shared<const Array>(std::move(items));
    return v;
}

JsonValue JsonValue::object(Object members) {
    std::unordered_set<std::string> names;
    for (const auto& [name, value] : members) {
        if (!names.insert(name).second)
            throw std::invalid_argument("duplicate object member: " + name);
    }
    JsonValue v;
    v.kind_ = JsonKind::Obj;
    v.obj_ = std::make_shared<const Object>(std::move(members));
    return v;
}

const JsonValue* JsonValue::find(const std::string& name) const {
    if (kind_ != JsonKind::Obj) return nullptr;
    for (const auto& m : *obj_) {
        if (m.first == name) return &m.second;
    }
    return nullptr;
}

bool json_equal(const JsonValue& a, const JsonValue& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
        case JsonKind::Null: return true;
        case JsonKind::Bool: return a.b_ == b.b_;
        case JsonKind::Num: return a.num_ == b.num_;
        case JsonKind::Str: return *a.str_ == *b.str_;
        case JsonKind::Arr: {
            const auto& x = *a.arr_;
            const auto& y = *b.arr_;
            if (x.size() != y.size()) return false;
            for (size_t i = 0; i < x.size(); ++i)
                if (!json_equal(x[i], y[i])) return false;
            return true;
        }
        case JsonKind::Obj: {
            const auto& x = *a.obj_;
            const auto& y = *b.obj_;
            if (x.size() != y.size()) return false;
            // member sets compare unordered; names are unique per object
            for (const auto& m : x) {
                const JsonValue* other = b.find(m.first);
                if (!other || !json_equal(m.second, *other)) return false;
            }
            return true;
        }
    }
    return false;
}

size_t JsonValue::hash() const {
    size_t h = static_cast<size_t>(kind_) * 0x9e3779b9u;
    switch (kind_) {
        case JsonKind::Null: break;
        case JsonKind::Bool: h ^= b_ ? 0x5bd1e995u : 0u; break;
        case JsonKind::Num: h ^= num_.hash(); break;
        case JsonKind::Str: h ^= std::hash<std::string>()(*str_); break;
        case JsonKind::Arr:
            for (const auto& e : *arr_) h = h * 1000003u ^ e.hash();
            break;
        case JsonKind::Obj: {
            // order-independent combine so hash respects json_equal
            size_t acc = 0;
            for (const auto& m : *obj_)
                acc += std::hash<std::string>()(m.first) * 31u + m.second.hash();
            h ^= acc;
            break;
        }
    }
    return h;
}

namespace {

void escape_into(const std::string& s, std::string& out) {
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out.push_back('"');
}

void serialize_into(const JsonValue& v, std::string& out) {
    switch (v.kind()) {
        case JsonKind::Null: out += "null"; break;
        case JsonKind::Bool: out += v.as_bool() ? "true" : "false"; break;
        case JsonKind::Num: out += v.as_number().to_decimal_string(); break;
        case JsonKind::Str: escape_into(v.as_string(), out); break;
        case JsonKind::Arr: {
            out.push_back('[');
            bool first = true;
            for (const auto& e : v.as_array()) {
                if (!first) out.push_back(',');
                first = false;
                serialize_into(e, out);
            }
            out.push_back(']');
            break;
        }
        case JsonKind::Obj: {
            out.push_back('{');
            bool first = true;
            for (const auto& m : v.as_object()) {
                if (!first) out.push_back(',');
                first = false;
                escape_into(m.first, out);
                out.push_back(':');
                serialize_into(m.second, out);
            }
            out.push_back('}');
            break;
        }
    }
}

} // namespace

std::string serialize_json(const JsonValue& v) {
    std::string out;
    serialize_into(v, out);
    return out;
}

} // namespace jsw
