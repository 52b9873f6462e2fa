#include "jsw/normalize.hpp"

#include "jsw/prepare.hpp"

#include <algorithm>
#include <cassert>

namespace jsw {

// ---- canonical body text ----

namespace {

void canon_into(const SchemaPtr& s, std::string& out);

std::string bound_text(const NumBound& b) {
    switch (b.kind) {
        case NumBound::Kind::NegInf: return "-inf";
        case NumBound::Kind::PosInf: return "inf";
        case NumBound::Kind::Finite: return b.value.to_string();
    }
    return "?";
}

std::string count_text(const Count& c) { return c.inf ? "inf" : std::to_string(c.n); }

void canon_list_sorted(const std::vector<SchemaPtr>& list, std::string& out) {
    std::vector<std::string> parts;
    parts.reserve(list.size());
    for (const auto& p : list) {
        std::string t;
        canon_into(p, t);
        parts.push_back(std::move(t));
    }
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts) {
        out += p;
        out.push_back(',');
    }
}

void canon_into(const SchemaPtr& s, std::string& out) {
    switch (s->kind) {
        case Schema::Kind::True_: out += "t"; return;
        case Schema::Kind::False_: out += "f"; return;
        case Schema::Kind::IsBoolValue: out += s->bvalue ? "b1" : "b0"; return;
        case Schema::Kind::PatternAssert:
            out += "p" + std::to_string(s->pattern.ptr->id);
            return;
        case Schema::Kind::NotPattern:
            out += "np" + std::to_string(s->pattern.ptr->id);
            return;
        case Schema::Kind::Betw:
            out += "w[" + bound_text(s->num_lo) + ";" + bound_text(s->num_hi) + "]";
            return;
        case Schema::Kind::XBetw:
            out += "x[" + bound_text(s->num_lo) + ";" + bound_text(s->num_hi) + "]";
            return;
        case Schema::Kind::MulOf: out += "m" + s->mul.to_string(); return;
        case Schema::Kind::NotMulOf: out += "nm" + s->mul.to_string(); return;
        case Schema::Kind::Pro:
            out += "o[" + std::to_string(s->lo) + ";" + count_text(s->hi) + "]";
            return;
        case Schema::Kind::Prop:
            out += "k(" + std::to_string(s->pattern.ptr->id) + ":";
            canon_into(s->arg, out);
            out += ")";
            return;
        case Schema::Kind::PattReq:
            out += "q(" + std::to_string(s->pattern.ptr->id) + ":";
            canon_into(s->arg, out);
            out += ")";
            return;
        case Schema::Kind::OrPattReq: {
            std::vector<std::string> parts;
            for (const auto& [p, v] : s->alts) {
                std::string t = std::to_string(p.ptr->id) + ":";
                canon_into(v, t);
                parts.push_back(std::move(t));
            }
            std::sort(parts.begin(), parts.end());
            out += "Q(";
            for (const auto& p : parts) {
                out += p;
                out.push_back(',');
            }
            out += ")";
            return;
        }
        case Schema::Kind::Items:
            out += "i[" + std::to_string(s->lo) + ";" + count_text(s->hi) + "](";
            canon_into(s->arg, out);
            out += ")";
            return;
        case Schema::Kind::Ite: {
            out += "I(";
            for (const auto& p : s->list) {
                canon_into(p, out);
                out.push_back(',');
            }
            out += ";";
            canon_into(s->arg, out);
            out += ")";
            return;
        }
        case Schema::Kind::Contains:
            out += "#[" + std::to_string(s->lo) + ";" + count_text(s->hi) + "](";
            canon_into(s->arg, out);
            out += ")";
            return;
        case Schema::Kind::UniqueItems: out += "u"; return;
        case Schema::Kind::RepeatedItems: out += "ru"; return;
        case Schema::Kind::TypeAssert:
            out += "T" + std::to_string(static_cast<int>(s->type));
            return;
        case Schema::Kind::And:
            out += "A(";
            canon_list_sorted(s->list, out);
            out += ")";
            return;
        case Schema::Kind::Or:
            out += "O(";
            canon_list_sorted(s->list, out);
            out += ")";
            return;
        case Schema::Kind::Group:
            out += "G";
            if (s->has_group_type) out += std::to_string(static_cast<int>(s->type));
            if (s->prepared) out += "!";
            out += "(";
            canon_list_sorted(s->list, out);
            out += ")";
            return;
        case Schema::Kind::Not:
            out += "N(";
            canon_into(s->arg, out);
            out += ")";
            return;
        case Schema::Kind::Ref: out += "R" + s->var + ";"; return;
    }
}

} // namespace

std::string canon_string(const SchemaPtr& s) {
    std::string out;
    canon_into(s, out);
    return out;
}

// ---- variable factory ----

VarFactory::VarFactory(Environment& env, const PipelineOptions& opts) : env_(env), opts_(opts) {
    for (const auto& name : env.order()) {
        const SchemaPtr& body = env.body(name);
        by_canon_.emplace(canon_string(body), name);
        if (const auto* registered = env.conj_factors_of(name)) {
            factor_sets_.emplace(name, *registered);
            continue;
        }
        if (body->kind == Schema::Kind::And) {
            bool all_refs = true;
            std::vector<std::string> factors;
            for (const auto& p : body->list) {
                if (p->kind != Schema::Kind::Ref) {
                    all_refs = false;
                    break;
                }
                factors.push_back(p->var);
            }
            if (all_refs) {
                std::sort(factors.begin(), factors.end());
                // persist: bodies get rewritten later, but the factor set
                // stays the variable's identity for cell lookups
                env_.set_conj_factors(name, factors);
                factor_sets_.emplace(name, std::move(factors));
            }
        }
    }
}

std::string VarFactory::define_pair(const SchemaPtr& body, const std::string& stem) {
    if (env_.order().size() + 2 > opts_.max_vars)
        throw BudgetExceededError("variable budget (" + std::to_string(opts_.max_vars) + ")");
    std::string name = env_.fresh_name(stem);
    env_.define(name, body);
    by_canon_[canon_string(body)] = name;
    dirty_.push_back(name);

    SchemaPtr neg = bound_normalize(eliminate_not_in(s_not(body), env_));
    std::string nkey = canon_string(neg);
    auto it = by_canon_.find(nkey);
    if (it != by_canon_.end() && !env_.has_complement(it->second)) {
        env_.set_complement(name, it->second);
    } else {
        std::string comp = env_.fresh_name("not_" + name);
        env_.define(comp, neg);
        by_canon_.emplace(nkey, comp);
        env_.set_complement(name, comp);
        dirty_.push_back(comp);
    }
    return name;
}

SchemaPtr VarFactory::ref_for(const SchemaPtr& body) {
    if (body->kind == Schema::Kind::Ref || body->kind == Schema::Kind::True_ ||
        body->kind == Schema::Kind::False_)
        return body;
    std::string key = canon_string(body);
    auto it = by_canon_.find(key);
    if (it != by_canon_.end()) return s_ref(it->second);
    return s_ref(define_pair(body, "v" + std::to_string(by_canon_.size())));
}

std::vector<std::string> VarFactory::factors_of(const std::string& var) const {
    auto it = factor_sets_.find(var);
    if (it != factor_sets_.end()) return it->second;
    return {var};
}

SchemaPtr VarFactory::conj_ref(const std::vector<SchemaPtr>& factors) {
    std::vector<std::string> names;
    std::vector<SchemaPtr> flat;
    std::function<void(const SchemaPtr&)> flatten = [&](const SchemaPtr& f) {
        if (f->kind == Schema::Kind::And) {
            for (const auto& p : f->list) flatten(p);
        } else {
            flat.push_back(f);
        }
    };
    for (const auto& f : factors) flatten(f);
    for (const auto& f : flat) {
        if (f->kind == Schema::Kind::True_) continue;
        if (f->kind == Schema::Kind::False_) return s_false();
        if (f->kind != Schema::Kind::Ref) {
            // a non-variable factor: fall back to a plain shared variable
            // for the whole conjunction
            return ref_for(s_and(std::move(flat)));
        }
        for (const auto& n : factors_of(f->var)) names.push_back(n);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    for (const auto& n : names) {
        if (env_.has_complement(n) &&
            std::binary_search(names.begin(), names.end(), env_.complement_of(n)) &&
            env_.complement_of(n) != n)
            return s_false();
    }
    if (names.empty()) return s_true();
    if (names.size() == 1) return s_ref(names[0]);
    std::vector<SchemaPtr> refs;
    refs.reserve(names.size());
    for (const auto& n : names) refs.push_back(s_ref(n));
    SchemaPtr body = s_and(std::move(refs));
    std::string key = canon_string(body);
    auto it = by_canon_.find(key);
    if (it != by_canon_.end()) return s_ref(it->second);
    std::string name = define_pair(body, "c" + std::to_string(by_canon_.size()));
    factor_sets_[name] = names;
    env_.set_conj_factors(name, names);
    return s_ref(name);
}

// ---- and-merging ----

namespace {

bool bound_le(const NumBound& a, const NumBound& b) { // a <= b
    if (a.kind == NumBound::Kind::NegInf || b.kind == NumBound::Kind::PosInf) return true;
    if (a.kind == NumBound::Kind::PosInf || b.kind == NumBound::Kind::NegInf) return false;
    return a.value <= b.value;
}

NumBound bound_max(const NumBound& a, const NumBound& b) { return bound_le(a, b) ? b : a; }
NumBound bound_min(const NumBound& a, const NumBound& b) { return bound_le(a, b) ? a : b; }

SchemaPtr conj2(const SchemaPtr& a, const SchemaPtr& b) {
    if (schema_equal(a, b)) return a;
    if (a->kind == Schema::Kind::True_) return b;
    if (b->kind == Schema::Kind::True_) return a;
    if (a->kind == Schema::Kind::False_ || b->kind == Schema::Kind::False_) return s_false();
    return s_and({a, b});
}

SchemaPtr merge_ite(const SchemaPtr& a, const SchemaPtr& b) {
    const SchemaPtr& shorter = a->list.size() <= b->list.size() ? a : b;
    const SchemaPtr& longer = a->list.size() <= b->list.size() ? b : a;
    std::vector<SchemaPtr> prefix;
    for (size_t i = 0; i < longer->list.size(); ++i) {
        SchemaPtr from_short = i < shorter->list.size() ? shorter->list[i] : shorter->arg;
        prefix.push_back(conj2(from_short, longer->list[i]));
    }
    return s_ite(std::move(prefix), conj2(shorter->arg, longer->arg));
}

// True when pattReq(ra:sa) implies pattReq(rb:sb) by the easy relation.
bool pattreq_subsumes(const SchemaPtr& a, const SchemaPtr& b) {
    bool schema_le = schema_equal(a->arg, b->arg) || b->arg->kind == Schema::Kind::True_ ||
                     a->arg->kind == Schema::Kind::False_;
    if (!schema_le) return false;
    return re::is_subset(a->pattern.ptr, b->pattern.ptr);
}

// Tries one merging rule on the pair; returns true when the list changed.
bool merge_pair(std::vector<SchemaPtr>& list, size_t i, size_t j, bool& conflict) {
    const SchemaPtr& a = list[i];
    const SchemaPtr& b = list[j];
    if (a->kind == Schema::Kind::Betw && b->kind == Schema::Kind::Betw) {
        NumBound lo = bound_max(a->num_lo, b->num_lo);
        NumBound hi = bound_min(a->num_hi, b->num_hi);
        if (lo.is_finite() && hi.is_finite() && lo.value > hi.value) {
            conflict = true;
            return true;
        }
        list[i] = s_betw(lo, hi);
        list.erase(list.begin() + static_cast<long>(j));
        return true;
    }
    if (a->kind == Schema::Kind::XBetw && b->kind == Schema::Kind::XBetw) {
        NumBound lo = bound_max(a->num_lo, b->num_lo);
        NumBound hi = bound_min(a->num_hi, b->num_hi);
        if (lo.is_finite() && hi.is_finite() && lo.value >= hi.value) {
            conflict = true;
            return true;
        }
        list[i] = s_xbetw(lo, hi);
        list.erase(list.begin() + static_cast<long>(j));
        return true;
    }
    if (a->kind == Schema::Kind::Prop && b->kind == Schema::Kind::Prop) {
        if (a->pattern.ptr == b->pattern.ptr || re::language_equal(a->pattern.ptr, b->pattern.ptr)) {
            list[i] = s_prop(a->pattern, conj2(a->arg, b->arg));
            list.erase(list.begin() + static_cast<long>(j));
            return true;
        }
        if (schema_equal(a->arg, b->arg)) {
            PatternExpr joined{re::alt({a->pattern.ptr, b->pattern.ptr}),
                               a->pattern.text() + "|" + b->pattern.text()};
            list[i] = s_prop(std::move(joined), a->arg);
            list.erase(list.begin() + static_cast<long>(j));
            return true;
        }
        return false;
    }
    if (a->kind == Schema::Kind::PattReq && b->kind == Schema::Kind::PattReq) {
        if (pattreq_subsumes(a, b)) {
            list.erase(list.begin() + static_cast<long>(j));
            return true;
        }
        if (pattreq_subsumes(b, a)) {
            list[i] = b;
            list.erase(list.begin() + static_cast<long>(j));
            return true;
        }
        return false;
    }
    if (a->kind == Schema::Kind::Ite && b->kind == Schema::Kind::Ite) {
        list[i] = merge_ite(a, b);
        list.erase(list.begin() + static_cast<long>(j));
        return true;
    }
    if ((a->kind == Schema::Kind::UniqueItems && b->kind == Schema::Kind::RepeatedItems) ||
        (a->kind == Schema::Kind::RepeatedItems && b->kind == Schema::Kind::UniqueItems)) {
        conflict = true;
        return true;
    }
    return false;
}

} // namespace

std::optional<std::vector<SchemaPtr>> and_merge(std::vector<SchemaPtr> assertions) {
    // idempotence: drop duplicates, keeping first occurrences
    {
        std::unordered_set<std::string> seen;
        std::vector<SchemaPtr> unique;
        for (auto& a : assertions) {
            if (seen.insert(canon_string(a)).second) unique.push_back(std::move(a));
        }
        assertions = std::move(unique);
    }
    // only one type survives; distinct types clash
    std::optional<JsonKind> type;
    std::vector<SchemaPtr> rest;
    for (const auto& a : assertions) {
        if (a->kind == Schema::Kind::TypeAssert) {
            if (type && *type != a->type) return std::nullopt;
            type = a->type;
        } else {
            rest.push_back(a);
        }
    }
    if (type) {
        // ITEs of a different kind are trivially satisfied
        std::vector<SchemaPtr> kept;
        for (const auto& a : rest) {
            auto k = assertion_kind(*a);
            if (!k || *k == *type) kept.push_back(a);
        }
        rest = std::move(kept);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < rest.size() && !changed; ++i) {
            for (size_t j = i + 1; j < rest.size() && !changed; ++j) {
                bool conflict = false;
                if (merge_pair(rest, i, j, conflict)) {
                    if (conflict) return std::nullopt;
                    changed = true;
                }
            }
        }
    }
    std::vector<SchemaPtr> out;
    if (type) out.push_back(s_type(*type));
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

// ---- canonicalization ----

namespace {

// Flattens a conjunction tree into assertion leaves; returns false when the
// conjunction is trivially f.
bool flatten_conjunction(const SchemaPtr& s, std::vector<SchemaPtr>& leaves);

SchemaPtr canonicalize_or(const SchemaPtr& s);

bool flatten_child(const SchemaPtr& child, std::vector<SchemaPtr>& leaves) {
    switch (child->kind) {
        case Schema::Kind::True_: return true;
        case Schema::Kind::False_: return false;
        case Schema::Kind::And:
            return flatten_conjunction(child, leaves);
        case Schema::Kind::Group:
            if (child->prepared) {
                leaves.push_back(child);
                return true;
            }
            if (child->has_group_type) leaves.push_back(s_type(child->type));
            return flatten_conjunction(child, leaves);
        case Schema::Kind::Or: {
            SchemaPtr c = canonicalize_or(child);
            if (c->kind == Schema::Kind::False_) return false;
            if (c->kind != Schema::Kind::True_) leaves.push_back(c);
            return true;
        }
        default:
            leaves.push_back(child);
            return true;
    }
}

bool flatten_conjunction(const SchemaPtr& s, std::vector<SchemaPtr>& leaves) {
    for (const auto& child : s->list) {
        if (!flatten_child(child, leaves)) return false;
    }
    return true;
}

SchemaPtr build_groups(std::vector<SchemaPtr> leaves) {
    std::vector<SchemaPtr> typed, boolean_parts;
    bool has_type = false;
    for (auto& leaf : leaves) {
        if (leaf->kind == Schema::Kind::Group && leaf->prepared) {
            // frozen prepared group joins the typed side as a unit only when
            // it is alone; otherwise it must be unfrozen and re-merged
            typed.push_back(std::move(leaf));
            has_type = true;
            continue;
        }
        if (assertion_kind(*leaf)) {
            if (leaf->kind == Schema::Kind::TypeAssert) has_type = true;
            typed.push_back(std::move(leaf));
        } else {
            boolean_parts.push_back(std::move(leaf));
        }
    }

    SchemaPtr group_part;
    if (typed.empty()) {
        group_part = s_true();
    } else if (typed.size() == 1 && typed[0]->kind == Schema::Kind::Group && typed[0]->prepared) {
        group_part = typed[0];
    } else {
        // unfreeze any prepared groups drawn into a wider conjunction
        std::vector<SchemaPtr> flat_typed;
        for (const auto& a : typed) {
            if (a->kind == Schema::Kind::Group) {
                if (a->has_group_type) flat_typed.push_back(s_type(a->type));
                for (const auto& inner : a->list) flat_typed.push_back(inner);
            } else {
                flat_typed.push_back(a);
            }
        }
        if (has_type) {
            auto merged = and_merge(std::move(flat_typed));
            if (!merged) return s_false();
            JsonKind kind = JsonKind::Null;
            std::vector<SchemaPtr> assertions;
            for (const auto& a : *merged) {
                if (a->kind == Schema::Kind::TypeAssert)
                    kind = a->type;
                else
                    assertions.push_back(a);
            }
            group_part = s_group(std::move(assertions), kind);
        } else {
            // no type assertion: the disjunction of the six typed groups
            std::vector<SchemaPtr> six;
            for (JsonKind k : {JsonKind::Null, JsonKind::Bool, JsonKind::Num, JsonKind::Str,
                               JsonKind::Obj, JsonKind::Arr}) {
                std::vector<SchemaPtr> subset;
                for (const auto& a : flat_typed) {
                    if (assertion_kind(*a) == k) subset.push_back(a);
                }
                auto merged = and_merge(std::move(subset));
                if (merged) six.push_back(s_group(std::move(*merged), k));
            }
            group_part = s_or(std::move(six));
        }
    }

    std::vector<SchemaPtr> parts;
    if (group_part->kind == Schema::Kind::False_) return s_false();
    if (group_part->kind != Schema::Kind::True_) parts.push_back(group_part);
    parts.insert(parts.end(), boolean_parts.begin(), boolean_parts.end());
    return s_and(std::move(parts));
}

SchemaPtr canonicalize_or(const SchemaPtr& s) {
    std::vector<SchemaPtr> disjuncts;
    for (const auto& child : s->list) {
        SchemaPtr c = canonicalize(child);
        if (c->kind == Schema::Kind::True_) return s_true();
        if (c->kind == Schema::Kind::False_) continue;
        if (c->kind == Schema::Kind::Or) {
            disjuncts.insert(disjuncts.end(), c->list.begin(), c->list.end());
        } else {
            disjuncts.push_back(c);
        }
    }
    return s_or(std::move(disjuncts));
}

} // namespace

SchemaPtr canonicalize(const SchemaPtr& s) {
    switch (s->kind) {
        case Schema::Kind::Or: return canonicalize_or(s);
        case Schema::Kind::Not:
            throw std::logic_error("canonicalize expects a negation-free schema");
        case Schema::Kind::Group:
            if (s->prepared) return s;
            [[fallthrough]];
        case Schema::Kind::And: {
            std::vector<SchemaPtr> leaves;
            if (s->kind == Schema::Kind::Group && s->has_group_type) leaves.push_back(s_type(s->type));
            if (!flatten_conjunction(s, leaves)) return s_false();
            return build_groups(std::move(leaves));
        }
        case Schema::Kind::True_:
        case Schema::Kind::False_:
        case Schema::Kind::Ref:
            return s;
        default: {
            // a bare assertion is a one-element group
            std::vector<SchemaPtr> leaves{s};
            return build_groups(std::move(leaves));
        }
    }
}

// ---- separation ----

namespace {

SchemaPtr separate_schema(const SchemaPtr& s, VarFactory& factory);

SchemaPtr separate_arg(const SchemaPtr& arg, VarFactory& factory) {
    SchemaPtr inner = separate_schema(arg, factory);
    return factory.ref_for(inner);
}

SchemaPtr separate_schema(const SchemaPtr& s, VarFactory& factory) {
    switch (s->kind) {
        case Schema::Kind::And: {
            std::vector<SchemaPtr> out;
            out.reserve(s->list.size());
            for (const auto& p : s->list) out.push_back(separate_schema(p, factory));
            return s_and(std::move(out));
        }
        case Schema::Kind::Or: {
            std::vector<SchemaPtr> out;
            out.reserve(s->list.size());
            for (const auto& p : s->list) out.push_back(separate_schema(p, factory));
            return s_or(std::move(out));
        }
        case Schema::Kind::Group: {
            std::vector<SchemaPtr> out;
            out.reserve(s->list.size());
            for (const auto& p : s->list) out.push_back(separate_schema(p, factory));
            return s_group(std::move(out),
                           s->has_group_type ? std::optional<JsonKind>(s->type) : std::nullopt,
                           s->prepared);
        }
        case Schema::Kind::Prop: {
            SchemaPtr arg = separate_arg(s->arg, factory);
            return arg == s->arg ? s : s_prop(s->pattern, arg);
        }
        case Schema::Kind::PattReq: {
            SchemaPtr arg = separate_arg(s->arg, factory);
            return arg == s->arg ? s : s_pattreq(s->pattern, arg);
        }
        case Schema::Kind::OrPattReq: {
            std::vector<std::pair<PatternExpr, SchemaPtr>> alts;
            alts.reserve(s->alts.size());
            for (const auto& [p, v] : s->alts) alts.emplace_back(p, separate_arg(v, factory));
            return s_orpattreq(std::move(alts));
        }
        case Schema::Kind::Items: {
            SchemaPtr arg = separate_arg(s->arg, factory);
            return arg == s->arg ? s : s_items(s->lo, s->hi, arg);
        }
        case Schema::Kind::Contains: {
            SchemaPtr arg = separate_arg(s->arg, factory);
            return arg == s->arg ? s : s_contains(s->lo, s->hi, arg);
        }
        case Schema::Kind::Ite: {
            std::vector<SchemaPtr> prefix;
            prefix.reserve(s->list.size());
            for (const auto& p : s->list) prefix.push_back(separate_arg(p, factory));
            return s_ite(std::move(prefix), separate_arg(s->arg, factory));
        }
        case Schema::Kind::Not:
            throw std::logic_error("separate expects a negation-free schema");
        default:
            return s;
    }
}

} // namespace

void separate(Environment& env, VarFactory& factory) {
    std::vector<std::string> names = env.order();
    for (const auto& name : names) {
        SchemaPtr nb = separate_schema(env.body(name), factory);
        if (nb != env.body(name)) env.set_body(name, nb);
    }
}

// ---- expansion ----

namespace {

struct Expander {
    Environment& env;
    std::unordered_map<std::string, SchemaPtr> done;
    std::unordered_set<std::string> in_progress;

    SchemaPtr expand_schema(const SchemaPtr& s) {
        switch (s->kind) {
            case Schema::Kind::Ref: return expand_var(s->var);
            case Schema::Kind::And: {
                std::vector<SchemaPtr> out;
                out.reserve(s->list.size());
                for (const auto& p : s->list) out.push_back(expand_schema(p));
                return s_and(std::move(out));
            }
            case Schema::Kind::Or: {
                std::vector<SchemaPtr> out;
                out.reserve(s->list.size());
                for (const auto& p : s->list) out.push_back(expand_schema(p));
                return s_or(std::move(out));
            }
            case Schema::Kind::Group: {
                if (s->prepared) return s;
                std::vector<SchemaPtr> out;
                out.reserve(s->list.size());
                for (const auto& p : s->list) out.push_back(expand_schema(p));
                return s_group(std::move(out),
                               s->has_group_type ? std::optional<JsonKind>(s->type) : std::nullopt,
                               false);
            }
            default: return s; // typed operators guard their arguments
        }
    }

    SchemaPtr expand_var(const std::string& name) {
        auto it = done.find(name);
        if (it != done.end()) return it->second;
        if (!in_progress.insert(name).second) throw UnguardedCycleError(name);
        SchemaPtr result = expand_schema(env.body(name));
        in_progress.erase(name);
        done.emplace(name, result);
        return result;
    }
};

} // namespace

void expand(Environment& env) {
    Expander ex{env, {}, {}};
    for (const auto& name : env.order()) env.set_body(name, ex.expand_var(name));
}

// ---- DNF ----

namespace {

// Merges two conjunct atoms, each a typed Group or True; nullopt = f.
std::optional<SchemaPtr> merge_two_groups(const SchemaPtr& a, const SchemaPtr& b) {
    if (a->kind == Schema::Kind::True_) return b;
    if (b->kind == Schema::Kind::True_) return a;
    JsonKind kind;
    if (a->type != b->type) return std::nullopt;
    kind = a->type;
    if (a->prepared && b->list.empty()) return a;
    if (b->prepared && a->list.empty()) return b;
    std::vector<SchemaPtr> assertions{s_type(kind)};
    assertions.insert(assertions.end(), a->list.begin(), a->list.end());
    assertions.insert(assertions.end(), b->list.begin(), b->list.end());
    auto merged = and_merge(std::move(assertions));
    if (!merged) return std::nullopt;
    std::vector<SchemaPtr> rest;
    for (const auto& x : *merged)
        if (x->kind != Schema::Kind::TypeAssert) rest.push_back(x);
    return s_group(std::move(rest), kind);
}

// Disjunction of merged conjuncts, each True_ or a typed Group, with
// and-merging applied to every conjunction the distribution generates.
std::vector<SchemaPtr> dnf_of(const SchemaPtr& s, const PipelineOptions& opts) {
    switch (s->kind) {
        case Schema::Kind::True_: return {s_true()};
        case Schema::Kind::False_: return {};
        case Schema::Kind::Group:
            if (!s->has_group_type) return dnf_of(canonicalize(s), opts);
            return {s};
        case Schema::Kind::Or: {
            std::vector<SchemaPtr> out;
            std::unordered_set<std::string> seen;
            for (const auto& p : s->list) {
                for (const auto& g : dnf_of(p, opts)) {
                    if (seen.insert(canon_string(g)).second) out.push_back(g);
                }
                if (out.size() > opts.max_disjuncts) throw BudgetExceededError("DNF width");
            }
            return out;
        }
        case Schema::Kind::And: {
            std::vector<SchemaPtr> acc{s_true()};
            for (const auto& p : s->list) {
                std::vector<SchemaPtr> sub = dnf_of(p, opts);
                std::vector<SchemaPtr> next;
                std::unordered_set<std::string> seen;
                auto push = [&](const SchemaPtr& g) {
                    if (seen.insert(canon_string(g)).second) next.push_back(g);
                };
                for (const auto& left : acc) {
                    for (const auto& right : sub) {
                        auto merged = merge_two_groups(left, right);
                        if (!merged) continue;
                        SchemaPtr g = bound_normalize(*merged);
                        if (g->kind == Schema::Kind::False_) continue;
                        if (g->kind != Schema::Kind::True_ && g->kind != Schema::Kind::Group) {
                            // bound rules may rewrite a group into a type
                            // disjunction; fold it back into groups
                            for (const auto& g2 : dnf_of(canonicalize(g), opts)) push(g2);
                        } else {
                            push(g);
                        }
                        if (next.size() > opts.max_disjuncts)
                            throw BudgetExceededError("DNF width");
                    }
                }
                acc = std::move(next);
            }
            return acc;
        }
        case Schema::Kind::Ref:
            throw std::logic_error("unexpanded variable reached DNF: " + s->var);
        default: {
            // a stray typed assertion: canonicalize wraps it in groups
            SchemaPtr c = canonicalize(s);
            if (c->kind == Schema::Kind::And || schema_equal(c, s))
                throw std::logic_error("non-group atom reached DNF: " + canon_string(s));
            return dnf_of(c, opts);
        }
    }
}

std::vector<SchemaPtr> six_bare_groups() {
    std::vector<SchemaPtr> out;
    for (JsonKind k : {JsonKind::Null, JsonKind::Bool, JsonKind::Num, JsonKind::Str, JsonKind::Obj,
                       JsonKind::Arr})
        out.push_back(s_group({}, k));
    return out;
}

} // namespace

void to_dnf(Environment& env, const PipelineOptions& opts) {
    for (const auto& name : env.order()) {
        std::vector<SchemaPtr> conjuncts = dnf_of(env.body(name), opts);
        std::vector<SchemaPtr> groups;
        std::unordered_set<std::string> seen;
        bool is_true = false;
        for (const auto& g : conjuncts) {
            if (g->kind == Schema::Kind::True_) {
                is_true = true;
                break;
            }
            if (seen.insert(canon_string(g)).second) groups.push_back(g);
        }
        if (is_true) groups = six_bare_groups();
        env.set_body(name, s_or(std::move(groups)));
    }
}

// ---- full pipeline ----

Environment normalize_for_generation(const Environment& env, const PipelineOptions& opts,
                                     PipelineTrace* trace) {
    Environment cur = eliminate_not(env);
    cur.check_well_formed();
    if (trace) trace->snapshots.emplace_back("not-eliminated", cur);

    VarFactory factory(cur, opts);
    for (size_t round = 0;; ++round) {
        if (round > 200) throw BudgetExceededError("normalization rounds");
        bool changed = false;

        // canonicalize + separate until no new variables appear
        for (size_t inner = 0;; ++inner) {
            if (inner > 200) throw BudgetExceededError("separation rounds");
            bool inner_changed = false;
            for (const auto& name : std::vector<std::string>(cur.order())) {
                SchemaPtr nb = canonicalize(bound_normalize(cur.body(name)));
                if (!schema_equal(nb, cur.body(name))) {
                    cur.set_body(name, nb);
                    inner_changed = true;
                }
            }
            size_t before = cur.order().size();
            separate(cur, factory);
            factory.clear_dirty();
            if (cur.order().size() != before) inner_changed = true;
            if (!inner_changed) break;
            changed = true;
        }
        if (trace) trace->snapshots.emplace_back("canonicalized+separated", cur);

        Environment pre_expand = cur;
        expand(cur);
        to_dnf(cur, opts);
        for (const auto& name : cur.order()) {
            if (!schema_equal(cur.body(name), pre_expand.body(name))) {
                changed = true;
                break;
            }
        }
        if (trace) trace->snapshots.emplace_back("dnf", cur);

        size_t before_prep = cur.order().size();
        Environment pre_prep = cur;
        prepare_environment(cur, factory, opts);
        factory.clear_dirty();
        if (cur.order().size() != before_prep) changed = true;
        if (!changed) {
            for (const auto& name : cur.order()) {
                if (!schema_equal(cur.body(name), pre_prep.body(name))) {
                    changed = true;
                    break;
                }
            }
        }
        if (trace) trace->snapshots.emplace_back("prepared", cur);

        if (!changed) break;
    }
    return cur;
}

} // namespace jsw
