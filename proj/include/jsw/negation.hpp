#pragma once

#include "jsw/schema.hpp"

namespace jsw {

// Adds a complement variable not_x = not(body(x)) for every variable that
// lacks one; afterwards complement_of is a total involution. The active
// variable is unchanged.
void not_complete(Environment& env);

// Pushes negation through s, producing a Not-free schema equivalent to
// not(s). Requires env to be not-completed (Ref arguments resolve through
// complement_of).
SchemaPtr negate(const SchemaPtr& s, const Environment& env);

// Removes every Not inside s without changing its meaning.
SchemaPtr eliminate_not_in(const SchemaPtr& s, const Environment& env);

// The items inversion: not(ite(prefix; tail)) as
// type(Arr) and (N_1 or ... or N_n or N_{n+1}).
SchemaPtr negate_items(const std::vector<SchemaPtr>& prefix, const SchemaPtr& tail,
                       const Environment& env);

// Not-completion followed by not-rewriting of every definition; the result
// contains no Not node and preserves the semantics of the active variable.
Environment eliminate_not(const Environment& env);

// True iff no Not node occurs anywhere in the environment.
bool negation_free(const Environment& env);
bool negation_free(const SchemaPtr& s);

} // namespace jsw
