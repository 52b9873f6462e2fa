#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "jsw/bigint.hpp"
#include "jsw/json_value.hpp"
#include "jsw/regex.hpp"

namespace jsw {

struct Schema;
using SchemaPtr = std::shared_ptr<const Schema>;

// Extended natural used for upper bounds (j may be infinite).
struct Count {
    bool inf = false;
    uint64_t n = 0;

    static Count of(uint64_t v) { return Count{false, v}; }
    static Count infinite() { return Count{true, 0}; }
    bool operator==(const Count& o) const = default;
    bool ge(uint64_t v) const { return inf || n >= v; }
};

// Interval endpoint for betw/xBetw: a rational or one of the infinities.
struct NumBound {
    enum class Kind : uint8_t { NegInf, Finite, PosInf };
    Kind kind = Kind::Finite;
    Rational value;

    static NumBound neg_inf() { return NumBound{Kind::NegInf, {}}; }
    static NumBound pos_inf() { return NumBound{Kind::PosInf, {}}; }
    static NumBound finite(Rational v) { return NumBound{Kind::Finite, std::move(v)}; }
    bool is_finite() const { return kind == Kind::Finite; }
    friend bool operator==(const NumBound& a, const NumBound& b) {
        return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
    }
};

// A pattern with an optional human-readable source (kept for dumps; the
// interned pointer is the identity that matters).
struct PatternExpr {
    re::PatternPtr ptr = nullptr;
    std::string source;

    std::string text() const { return source.empty() ? re::display(ptr) : source; }
};

// One node of the core algebra (both variants: explicit negation plus the
// negated-operator vocabulary), the conjunction-group notation, and the
// orPattReq operator used from preparation onwards.
struct Schema {
    enum class Kind : uint8_t {
        True_,
        False_,
        IsBoolValue,
        PatternAssert,
        NotPattern,
        Betw,
        XBetw,
        MulOf,
        NotMulOf,
        Pro,
        Prop,
        PattReq,
        OrPattReq,
        Items,    // i-j : S, positions are 1-based
        Ite,      // ite(S1..Sn; S)
        Contains, // #_i^j S
        UniqueItems,
        RepeatedItems,
        TypeAssert,
        And,
        Or,
        Group,
        Not,
        Ref
    };

    Kind kind;
    bool bvalue = false;                                      // IsBoolValue
    PatternExpr pattern;                                      // pattern-carrying nodes
    NumBound num_lo, num_hi;                                  // Betw/XBetw
    Rational mul;                                             // MulOf/NotMulOf
    uint64_t lo = 0;                                          // Pro/Items/Contains
    Count hi;                                                 // Pro/Items/Contains
    SchemaPtr arg;                                            // Prop/PattReq/Items/Contains/Not/Ite tail
    std::vector<SchemaPtr> list;                              // And/Or/Group/Ite prefix
    std::vector<std::pair<PatternExpr, SchemaPtr>> alts;      // OrPattReq
    JsonKind type = JsonKind::Null;                           // TypeAssert / typed Group
    bool has_group_type = false;
    bool prepared = false;                                    // Group went through preparation
    std::string var;                                          // Ref
};

// ---- constructors ----
SchemaPtr s_true();
SchemaPtr s_false();
SchemaPtr s_bool_value(bool b);
SchemaPtr s_pattern(PatternExpr p);
SchemaPtr s_pattern(const std::string& ecma); // parses with search semantics
SchemaPtr s_not_pattern(PatternExpr p);
SchemaPtr s_betw(NumBound lo, NumBound hi);
SchemaPtr s_xbetw(NumBound lo, NumBound hi);
SchemaPtr s_mulof(Rational n);
SchemaPtr s_not_mulof(Rational n);
SchemaPtr s_pro(uint64_t lo, Count hi);
SchemaPtr s_prop(PatternExpr r, SchemaPtr s);
SchemaPtr s_pattreq(PatternExpr r, SchemaPtr s);
SchemaPtr s_orpattreq(std::vector<std::pair<PatternExpr, SchemaPtr>> alts);
SchemaPtr s_items(uint64_t lo, Count hi, SchemaPtr s);
SchemaPtr s_ite(std::vector<SchemaPtr> prefix, SchemaPtr tail);
SchemaPtr s_contains(uint64_t lo, Count hi, SchemaPtr s);
SchemaPtr s_unique_items();
SchemaPtr s_repeated_items();
SchemaPtr s_type(JsonKind t);
SchemaPtr s_and(std::vector<SchemaPtr> list); // {} -> t, singleton collapses
SchemaPtr s_or(std::vector<SchemaPtr> list);  // {} -> f, singleton collapses
SchemaPtr s_group(std::vector<SchemaPtr> list, std::optional<JsonKind> type = std::nullopt,
                  bool prepared = false);
SchemaPtr s_not(SchemaPtr s);
SchemaPtr s_ref(std::string var);

// Anchored member-name pattern ^k$ for a literal key.
PatternExpr key_pattern(const std::string& name);
// Pattern wrapped for JSON Schema search semantics.
PatternExpr search_pattern(const std::string& ecma);

bool schema_equal(const SchemaPtr& a, const SchemaPtr& b);
size_t schema_hash(const SchemaPtr& s);

// The not-free encoding is implicative on other kinds: which kind an
// assertion constrains (nullopt for type-independent nodes).
std::optional<JsonKind> assertion_kind(const Schema& s);

// ---- derived operators ----

// type(T) expressed in the core algebra with explicit negation.
SchemaPtr encode_type(JsonKind t);
// The n-ary ite expanded to its 1-1:S1, ..., n+1-inf:S form.
SchemaPtr expand_ite(const std::vector<SchemaPtr>& prefix, const SchemaPtr& tail);
// req(k) = type(Obj) => not(^k$ : f)
SchemaPtr req(const std::string& key);

// Rewrites trivial or unsatisfiable bounds (pro_0^inf = t, pro_n^m with
// n > m = the type complement, same for betw/xBetw/#), recursively.
SchemaPtr bound_normalize(const SchemaPtr& s);

// ---- environment ----

class UnknownVariableError : public std::runtime_error {
public:
    explicit UnknownVariableError(const std::string& name)
        : std::runtime_error("unknown variable: " + name) {}
};

class UnguardedCycleError : public std::runtime_error {
public:
    explicit UnguardedCycleError(const std::string& detail)
        : std::runtime_error("unguarded recursive definition: " + detail) {}
};

// An ordered set of mutually recursive definitions with one active root.
class Environment {
public:
    void define(const std::string& name, SchemaPtr body);
    void set_body(const std::string& name, SchemaPtr body);
    bool has(const std::string& name) const { return defs_.count(name) != 0; }
    const SchemaPtr& body(const std::string& name) const;

    const std::vector<std::string>& order() const { return order_; }
    const std::string& active() const { return active_; }
    void set_active(std::string name) { active_ = std::move(name); }

    bool has_complement(const std::string& name) const { return complement_.count(name) != 0; }
    const std::string& complement_of(const std::string& name) const;
    void set_complement(const std::string& a, const std::string& b);

    // conjunction variables remember their factor sets so witness generation
    // can find them after their bodies have been rewritten
    void set_conj_factors(const std::string& name, std::vector<std::string> factors);
    const std::vector<std::string>* conj_factors_of(const std::string& name) const;

    // Throws UnknownVariableError/UnguardedCycleError when violated.
    void check_well_formed() const;

    std::string fresh_name(const std::string& stem) const;

private:
    std::vector<std::string> order_;
    std::unordered_map<std::string, SchemaPtr> defs_;
    std::unordered_map<std::string, std::string> complement_;
    std::unordered_map<std::string, std::vector<std::string>> conj_factors_;
    std::string active_;
};

// ---- validation ----

// Decides v in [[env.active]] per the algebra semantics. Pure; terminates on
// guarded environments.
bool validate(const JsonValue& v, const Environment& env);
bool validate(const JsonValue& v, const SchemaPtr& s, const Environment& env);

} // namespace jsw
