#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "jsw/bigint.hpp"

namespace jsw {

enum class JsonKind { Null, Bool, Num, Str, Obj, Arr };

const char* kind_name(JsonKind k);

// Immutable JSON instance value. Numbers are exact rationals; object member
// order is preserved in storage but ignored by equality.
class JsonValue {
public:
    using Member = std::pair<std::string, JsonValue>;
    using Array = std::vector<JsonValue>;
    using Object = std::vector<Member>;

    JsonValue() : kind_(JsonKind::Null) {}
    static JsonValue null() { return JsonValue(); }
    static JsonValue boolean(bool b);
    static JsonValue number(Rational q);
    static JsonValue number(long long v) { return number(Rational(v)); }
    static JsonValue string(std::string s);
    static JsonValue array(Array items);
    // Member names must be pairwise distinct; throws std::invalid_argument.
    static JsonValue object(Object members);

    JsonKind kind() const { return kind_; }
    bool is_null() const { return kind_ == JsonKind::Null; }

    bool as_bool() const { return b_; }
    const Rational& as_number() const { return num_; }
    const std::string& as_string() const { return *str_; }
    const Array& as_array() const { return *arr_; }
    const Object& as_object() const { return *obj_; }

    const JsonValue* find(const std::string& name) const; // objects only

    friend bool json_equal(const JsonValue& a, const JsonValue& b);
    size_t hash() const;

private:
    JsonKind kind_;
    bool b_ = false;
    Rational num_;
    std::shared_ptr<const std::string> str_;
    std::shared_ptr<const Array> arr_;
    std::shared_ptr<const Object> obj_;
};

bool json_equal(const JsonValue& a, const JsonValue& b);

// Deterministic serialization; parse_json(serialize_json(v)) is json_equal
// to v. Member order is preserved.
std::string serialize_json(const JsonValue& v);

} // namespace jsw
