#pragma once

#include "jsw/json_value.hpp"
#include "jsw/schema.hpp"

namespace jsw {

// JSON encoding of patterns, schemas and environments (one tag per variant),
// used by the normalize/negate subcommands and test fixtures. Loading an IR
// dump reproduces a language-identical environment.
JsonValue pattern_to_ir(const PatternExpr& p);
PatternExpr pattern_from_ir(const JsonValue& v);

JsonValue schema_to_ir(const SchemaPtr& s);
SchemaPtr schema_from_ir(const JsonValue& v);

JsonValue env_to_ir(const Environment& env);
Environment env_from_ir(const JsonValue& v);

// Re-export of a not-eliminated environment as a JSON Schema document that
// uses only positive keywords plus the engine's extension vocabulary
// (x-notMultipleOf, x-repeatedItems, x-patternRequired, x-orPatternRequired,
// x-notPattern, x-isBoolValue, x-pattern for synthesized patterns).
JsonValue export_extended_schema(const Environment& env);

} // namespace jsw
