#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "jsw/json_value.hpp"

namespace jsw {

class JsonParseError : public std::runtime_error {
public:
    JsonParseError(std::string msg, size_t position)
        : std::runtime_error(std::move(msg)), position_(position) {}
    size_t position() const { return position_; }

private:
    size_t position_;
};

class DuplicateKeyError : public JsonParseError {
public:
    DuplicateKeyError(std::string key, size_t position)
        : JsonParseError("duplicate object key: \"" + key + "\"", position),
          key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// RFC 8259 parser; numbers become exact decimal rationals, duplicate object
// keys are rejected.
JsonValue parse_json(std::string_view text);

} // namespace jsw
