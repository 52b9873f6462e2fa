#pragma once

#include "jsw/prepare.hpp"

namespace jsw {

// Per-variable fixpoint state. States only grow: Open < Empty, Open < Populated.
struct VarState {
    enum class Kind { Open, Empty, Populated };
    Kind kind = Kind::Open;
    JsonValue witness;

    static VarState open() { return {}; }
    static VarState empty() { return {Kind::Empty, {}}; }
    static VarState populated(JsonValue w) { return {Kind::Populated, std::move(w)}; }
    bool is_open() const { return kind == Kind::Open; }
    bool is_populated() const { return kind == Kind::Populated; }
};

using StateMap = std::unordered_map<std::string, VarState>;

struct FixpointOutcome {
    bool satisfiable = false;
    JsonValue witness;
    StateMap states;
    size_t passes = 0;
};

// Pass-based fixpoint over a fully prepared environment (bodies are
// disjunctions of typed groups; no uniqueItems/repeatedItems reachable).
FixpointOutcome run_fixpoint(const Environment& env, const PipelineOptions& opts);

// One variable against the previous pass's states.
VarState eval_variable(const std::string& name, const StateMap& snapshot, const Environment& env,
                       const ConjResolver& resolver, const PipelineOptions& opts);

// Group generators (state-independent for base kinds).
VarState gen_base_group(const SchemaPtr& group, const PipelineOptions& opts);
VarState gen_object_group(const PreparedObjectGroup& g, const StateMap& snapshot,
                          const SchemaPtr& group_node, const Environment& env,
                          const PipelineOptions& opts);
VarState gen_array_group(const PreparedArrayGroup& g, const StateMap& snapshot,
                         const SchemaPtr& group_node, const Environment& env,
                         const ConjResolver& resolver, const PipelineOptions& opts);

// The deduplicated, minimal ways of satisfying all orPattReqs at once (the
// paper's "exactly 5 ways" enumeration), deterministically ordered.
std::vector<std::vector<std::pair<PatternExpr, SchemaPtr>>> enumerate_choice_sets(
    const std::vector<std::vector<std::pair<PatternExpr, SchemaPtr>>>& requiring,
    const PipelineOptions& opts);

// ---- top-level deciders ----

struct WitnessResult {
    bool satisfiable = false;
    JsonValue witness;
};

// Full pipeline (not-elimination, normalization, preparation) + fixpoint.
WitnessResult generate_witness(const Environment& env, const PipelineOptions& opts = {});
bool check_satisfiable(const Environment& env, const PipelineOptions& opts = {});

struct InclusionResult {
    bool included = false;
    JsonValue counterexample; // validates A, violates B
};
InclusionResult check_inclusion(const Environment& a, const Environment& b,
                                const PipelineOptions& opts = {});

struct EquivalenceResult {
    bool equivalent = false;
    int direction = 0; // 0: none; 1: counterexample in A minus B; 2: in B minus A
    JsonValue counterexample;
};
EquivalenceResult check_equivalence(const Environment& a, const Environment& b,
                                    const PipelineOptions& opts = {});

// A conjunction environment A and not(B), used by inclusion.
Environment conjoin_with_negation(const Environment& a, const Environment& b);

} // namespace jsw
