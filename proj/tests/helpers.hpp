#pragma once

// Shared test utilities: a deterministic bounded JSON universe, a schema
// generator covering every operator kind, and a tiny xorshift RNG. The
// universe is the independent oracle domain used by duality/preservation
// properties: engine answers are checked against brute-force evaluation over
// these values.

#include <string>
#include <vector>

#include "jsw/schema.hpp"

namespace jsw::testing {

struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed ? seed : 1) {}
    uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    size_t below(size_t n) { return n ? next() % n : 0; }
    bool flip() { return next() % 2 == 0; }
};

// Atoms: null, true, false, 0, 1, 3, "", "a", "ab".
std::vector<JsonValue> universe_atoms();

// Bounded universe (depth <= 3, width <= 3, deterministically sampled to
// roughly a thousand values).
const std::vector<JsonValue>& bounded_universe();

// Random guarded environment whose every definition uses only the given
// variable names in guarded positions (all operator kinds, depth <= depth).
Environment random_env(Rng& rng, int depth, size_t extra_vars = 1);

// Random schema tree over an optional set of referencable variables.
SchemaPtr random_schema(Rng& rng, int depth, const std::vector<std::string>& guarded_vars,
                        const std::vector<std::string>& unguarded_vars);

} // namespace jsw::testing
