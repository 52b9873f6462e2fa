#include "jsw/json_io.hpp"

#include <unordered_set>
#include <vector>

#include <json.hpp>

namespace jsw {

namespace {

// SAX consumer that rebuilds values with exact rational numbers. nlohmann
// passes the raw token text for every number it would store as a double, so
// no precision is lost on the way through.
struct ExactBuilder {
    using json = nlohmann::json;

    struct Frame {
        bool is_object;
        JsonValue::Array arr;
        JsonValue::Object obj;
        std::unordered_set<std::string> names;
        std::string pending_key;
        bool key_pending = false;
    };

    std::vector<Frame> stack;
    JsonValue result;
    bool done = false;
    size_t approx_pos = 0;

    void emit(JsonValue v) {
        if (stack.empty()) {
            result = std::move(v);
            done = true;
            return;
        }
        Frame& f = stack.back();
        if (f.is_object) {
            f.obj.emplace_back(std::move(f.pending_key), std::move(v));
            f.key_pending = false;
        } else {
            f.arr.push_back(std::move(v));
        }
    }

    bool null() { emit(JsonValue::null()); return true; }
    bool boolean(bool val) { emit(JsonValue::boolean(val)); return true; }
    bool number_integer(json::number_integer_t val) {
        emit(JsonValue::number(Rational(static_cast<long long>(val))));
        return true;
    }
    bool number_unsigned(json::number_unsigned_t val) {
        if (val <= static_cast<json::number_unsigned_t>(std::numeric_limits<long long>::max())) {
            emit(JsonValue::number(Rational(static_cast<long long>(val))));
        } else {
            emit(JsonValue::number(Rational(BigInt::from_decimal(std::to_string(val)), BigInt(1))));
        }
        return true;
    }
    bool number_float(json::number_float_t, const std::string& raw) {
        emit(JsonValue::number(Rational::from_decimal_string(raw)));
        return true;
    }
    bool string(std::string& val) { emit(JsonValue::string(val)); return true; }
    bool binary(json::binary_t&) { return false; }
    bool start_object(std::size_t) {
        stack.push_back(Frame{true, {}, {}, {}, {}, false});
        return true;
    }
    bool key(std::string& val) {
        Frame& f = stack.back();
        if (!f.names.insert(val).second) throw DuplicateKeyError(val, approx_pos);
        f.pending_key = val;
        f.key_pending = true;
        return true;
    }
    bool end_object() {
        Frame f = std::move(stack.back());
        stack.pop_back();
        emit(JsonValue::object(std::move(f.obj)));
        return true;
    }
    bool start_array(std::size_t) {
        stack.push_back(Frame{false, {}, {}, {}, {}, false});
        return true;
    }
    bool end_array() {
        Frame f = std::move(stack.back());
        stack.pop_back();
        emit(JsonValue::array(std::move(f.arr)));
        return true;
    }
    bool parse_error(std::size_t position, const std::string&,
                     const nlohmann::detail::exception& ex) {
        throw JsonParseError(ex.what(), position);
    }
};

} // namespace

JsonValue parse_json(std::string_view text) {
    ExactBuilder builder;
    nlohmann::json::sax_parse(text, &builder);
    if (!builder.done) throw JsonParseError("empty or truncated document", text.size());
    return builder.result;
}

} // namespace jsw
