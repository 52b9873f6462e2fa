#pragma once

#include <functional>

#include "jsw/normalize.hpp"

namespace jsw {

// Object group in explicit-interaction form: a disjoint, name-covering
// constraining partition plus split requirements.
struct PreparedObjectGroup {
    uint64_t pro_lo = 0;
    Count pro_hi = Count::infinite();
    std::vector<std::pair<PatternExpr, SchemaPtr>> constraining; // disjoint, covers all names
    std::vector<std::vector<std::pair<PatternExpr, SchemaPtr>>> requiring; // one orPattReq each
};

struct PreparedArrayGroup {
    std::vector<SchemaPtr> prefix; // merged ite prefix, each Ref/True/False
    SchemaPtr tail;                // Ref/True/False
    struct ContainsReq {
        uint64_t lo;
        Count hi;
        SchemaPtr schema;
    };
    std::vector<ContainsReq> contains;
    uint64_t size_lo = 0;
    Count size_hi = Count::infinite();
    bool has_uniqueness = false;

    SchemaPtr base_at(size_t pos) const { return pos < prefix.size() ? prefix[pos] : tail; }
};

// Read-only lookup of conjunction variables created during preparation:
// resolves a factor set to the existing variable (or True/False/single ref).
class ConjResolver {
public:
    explicit ConjResolver(const Environment& env);
    // nullptr when the conjunction variable does not exist.
    SchemaPtr resolve(const std::vector<SchemaPtr>& factors) const;
    std::vector<std::string> factors_of(const std::string& var) const;

private:
    const Environment& env_;
    std::unordered_map<std::string, std::string> by_canon_;
    std::unordered_map<std::string, std::vector<std::string>> factor_sets_;
};

// Rewrites g (a normalized Obj/Arr group) into prepared form; returns the
// view and the replacement node (s_false when the group collapses). May
// create conjunction/complement variables through the factory.
std::pair<PreparedObjectGroup, SchemaPtr> prepare_object_group(const SchemaPtr& g,
                                                               Environment& env,
                                                               VarFactory& factory,
                                                               const PipelineOptions& opts);

std::pair<PreparedArrayGroup, SchemaPtr> prepare_array_group(const SchemaPtr& g, Environment& env,
                                                             VarFactory& factory,
                                                             const PipelineOptions& opts);

// Re-extracts the prepared views from an already-prepared group node.
PreparedObjectGroup object_view(const SchemaPtr& g);
PreparedArrayGroup array_view(const SchemaPtr& g);

// Factor list for one array slot: the assigned contains schemas, the
// complements of unassigned finite-bound contains (so counts are exact by
// construction), and the slot base itself.
std::vector<SchemaPtr> array_cell_factors(const PreparedArrayGroup& g, uint64_t mask,
                                          const SchemaPtr& base, const Environment& env);

// Rewrites every unprepared object/array group of every definition.
void prepare_environment(Environment& env, VarFactory& factory, const PipelineOptions& opts);

// Mechanical checks of the four object-preparation invariants; throws
// std::logic_error naming the first violated invariant.
void check_object_invariants(
    const PreparedObjectGroup& g, const Environment& env,
    const std::function<std::vector<std::string>(const std::string&)>& factors_of);

} // namespace jsw
