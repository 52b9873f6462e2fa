#pragma once

#include "jsw/errors.hpp"
#include "jsw/json_io.hpp"
#include "jsw/schema.hpp"

namespace jsw {

struct RawSchemaDoc {
    JsonValue root; // an object schema or boolean schema
    std::string source_uri;
};

// Merges the documents and rewrites every $ref into "#" or
// "#/definitions/<name>", copying referenced subschemas into top-level
// definitions under fresh names. docs[0] is the root unless root_uri names
// another one. Idempotent.
RawSchemaDoc normalize_refs(const std::vector<RawSchemaDoc>& docs,
                            const std::string& root_uri = "");

struct TranslateResult {
    Environment env;
    std::vector<std::string> warnings;
};

// Keyword-by-keyword translation into the core algebra. Expects a
// ref-normalized document.
TranslateResult translate(const RawSchemaDoc& doc);

// Convenience: normalize_refs + translate for one document.
TranslateResult load_schema(const JsonValue& schema, const std::string& uri = "");

} // namespace jsw
