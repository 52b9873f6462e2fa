#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "jsw/errors.hpp"
#include "jsw/negation.hpp"
#include "jsw/schema.hpp"

namespace jsw {

struct PipelineOptions {
    size_t max_vars = 20000;         // hash-consed variable budget
    size_t max_disjuncts = 8192;     // DNF width per variable
    size_t max_partition_bits = 12;  // constraining/requirement pattern atoms per group
    size_t max_signature = 10;       // alternative schemas sharing one atom
    size_t max_contains = 6;         // contains constraints per array group
    size_t max_tuples = 1024;        // object choice tuples per group per pass
    size_t max_array_length = 0;     // 0 = derive from the group (spec default)
    size_t max_numeric_scan = 100000;
};

// Creates (and memoizes by canonical body) the variables that separation and
// preparation introduce, together with their complements.
class VarFactory {
public:
    VarFactory(Environment& env, const PipelineOptions& opts);

    // A variable whose body is (equivalent by canonical form to) `body`.
    // True/False/Ref pass through unchanged.
    SchemaPtr ref_for(const SchemaPtr& body);

    // Conjunction of refs (each Ref/True/False); flattens factor sets,
    // detects complementary pairs, and memoizes the resulting variable.
    SchemaPtr conj_ref(const std::vector<SchemaPtr>& factors);

    // Factor set of a variable created by conj_ref (singleton otherwise).
    std::vector<std::string> factors_of(const std::string& var) const;

    const std::vector<std::string>& dirty() { return dirty_; }
    void clear_dirty() { dirty_.clear(); }

private:
    std::string define_pair(const SchemaPtr& body, const std::string& stem);

    Environment& env_;
    const PipelineOptions& opts_;
    std::unordered_map<std::string, std::string> by_canon_;
    std::unordered_map<std::string, std::vector<std::string>> factor_sets_;
    std::vector<std::string> dirty_; // names whose bodies still need normalization
};

// Canonical text of a schema: And/Or operands sorted, used as the
// hash-consing key for variable bodies.
std::string canon_string(const SchemaPtr& s);

// ---- single phases (spec operations) ----

// And-merging over the assertions of one conjunction that contains at least
// one type assertion; nullopt signals collapse to f.
std::optional<std::vector<SchemaPtr>> and_merge(std::vector<SchemaPtr> assertions);

// Steps 1-4: flatten conjunctions, split typed groups from boolean parts,
// merge typed groups, expand type-less groups into the six-kind disjunction.
SchemaPtr canonicalize(const SchemaPtr& s);

// Moves non-variable arguments of typed operators into fresh variables.
void separate(Environment& env, VarFactory& factory);

// Substitutes unguarded variable occurrences by their definitions.
void expand(Environment& env);

// Rewrites every body into a disjunction of typed groups (with and-merging
// on every generated conjunct).
void to_dnf(Environment& env, const PipelineOptions& opts);

// Whole pipeline after not-elimination: canonicalize/separate/expand/DNF and
// object/array preparation, iterated until the variable set and all bodies
// stabilize.
struct PipelineTrace {
    std::vector<std::pair<std::string, Environment>> snapshots;
};

Environment normalize_for_generation(const Environment& env, const PipelineOptions& opts,
                                     PipelineTrace* trace = nullptr);

} // namespace jsw
