#include "jsw/prepare.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace jsw {

namespace {

SchemaPtr complement_ref(const SchemaPtr& s, const Environment& env) {
    if (s->kind == Schema::Kind::True_) return s_false();
    if (s->kind == Schema::Kind::False_) return s_true();
    assert(s->kind == Schema::Kind::Ref);
    return s_ref(env.complement_of(s->var));
}

PatternExpr atom_pattern(const std::vector<re::PatternPtr>& base, uint64_t mask) {
    std::vector<re::PatternPtr> parts;
    for (size_t i = 0; i < base.size(); ++i) {
        if ((mask >> i) & 1)
            parts.push_back(base[i]);
        else
            parts.push_back(re::complement(base[i]));
    }
    re::PatternPtr p = re::inter(std::move(parts));
    return PatternExpr{p, ""};
}

} // namespace

// ---- object preparation ----

std::pair<PreparedObjectGroup, SchemaPtr> prepare_object_group(const SchemaPtr& g,
                                                               Environment& env,
                                                               VarFactory& factory,
                                                               const PipelineOptions& opts) {
    assert(g->kind == Schema::Kind::Group && g->has_group_type && g->type == JsonKind::Obj);

    uint64_t pro_lo = 0;
    Count pro_hi = Count::infinite();
    std::vector<std::pair<re::PatternPtr, SchemaPtr>> props; // pattern -> value constraint
    std::vector<std::vector<std::pair<PatternExpr, SchemaPtr>>> reqs;

    for (const auto& a : g->list) {
        switch (a->kind) {
            case Schema::Kind::Pro:
                pro_lo = std::max(pro_lo, a->lo);
                if (!a->hi.inf && (pro_hi.inf || a->hi.n < pro_hi.n)) pro_hi = a->hi;
                break;
            case Schema::Kind::Prop: {
                bool merged = false;
                for (auto& [p, v] : props) {
                    if (p == a->pattern.ptr) {
                        v = schema_equal(v, a->arg) ? v : factory.conj_ref({v, a->arg});
                        merged = true;
                        break;
                    }
                }
                if (!merged) props.emplace_back(a->pattern.ptr, a->arg);
                break;
            }
            case Schema::Kind::PattReq:
                reqs.push_back({{a->pattern, a->arg}});
                break;
            case Schema::Kind::OrPattReq:
                reqs.push_back(a->alts);
                break;
            case Schema::Kind::TypeAssert:
                break; // the group type restated explicitly
            default:
                throw std::logic_error("unexpected assertion in an object group");
        }
    }
    if (!pro_hi.inf && pro_lo > pro_hi.n) return {{}, s_false()};

    // the boolean algebra generated by constraining and requirement patterns
    std::vector<re::PatternPtr> base;
    auto base_index = [&base](re::PatternPtr p) {
        for (size_t i = 0; i < base.size(); ++i)
            if (base[i] == p) return i;
        base.push_back(p);
        return base.size() - 1;
    };
    std::vector<size_t> prop_bit(props.size());
    for (size_t i = 0; i < props.size(); ++i) prop_bit[i] = base_index(props[i].first);
    std::vector<std::vector<size_t>> req_bits(reqs.size());
    for (size_t q = 0; q < reqs.size(); ++q)
        for (const auto& [pat, schema] : reqs[q]) req_bits[q].push_back(base_index(pat.ptr));
    if (base.size() > opts.max_partition_bits)
        throw BudgetExceededError("object-group pattern partition (" + std::to_string(base.size()) +
                                  " patterns)");

    struct Atom {
        uint64_t mask;
        PatternExpr pattern;
    };
    std::vector<Atom> atoms;
    for (uint64_t mask = 0; mask < (1ull << base.size()); ++mask) {
        // cheap pre-check before building the full complemented intersection
        std::vector<re::PatternPtr> included;
        for (size_t i = 0; i < base.size(); ++i)
            if ((mask >> i) & 1) included.push_back(base[i]);
        if (re::language_empty(re::inter(std::move(included)))) continue;
        PatternExpr pat = atom_pattern(base, mask);
        if (re::language_empty(pat.ptr)) continue;
        atoms.push_back({mask, std::move(pat)});
    }

    PreparedObjectGroup view;
    view.pro_lo = pro_lo;
    view.pro_hi = pro_hi;

    // constraining partition: atoms over the prop patterns only
    std::map<uint64_t, std::vector<size_t>> catoms; // prop mask -> atom indices
    for (size_t ai = 0; ai < atoms.size(); ++ai) {
        uint64_t cmask = 0;
        for (size_t i = 0; i < props.size(); ++i)
            if ((atoms[ai].mask >> prop_bit[i]) & 1) cmask |= 1ull << i;
        catoms[cmask].push_back(ai);
    }
    std::map<uint64_t, SchemaPtr> cschema;
    for (const auto& [cmask, members] : catoms) {
        std::vector<SchemaPtr> factors;
        for (size_t i = 0; i < props.size(); ++i)
            if ((cmask >> i) & 1) factors.push_back(props[i].second);
        cschema[cmask] = factory.conj_ref(factors);
        std::vector<re::PatternPtr> prop_parts;
        for (size_t i = 0; i < props.size(); ++i)
            prop_parts.push_back(((cmask >> i) & 1) ? props[i].first
                                                    : re::complement(props[i].first));
        re::PatternPtr cpat = props.empty() ? re::universal() : re::inter(std::move(prop_parts));
        if (re::language_empty(cpat)) continue;
        view.constraining.emplace_back(PatternExpr{cpat, ""}, cschema[cmask]);
    }

    // requirement splitting along atoms and the other requirements' schemas
    for (size_t q = 0; q < reqs.size(); ++q) {
        std::vector<std::pair<PatternExpr, SchemaPtr>> alts;
        for (const auto& atom : atoms) {
            // schemas each requirement offers on this atom
            std::vector<std::vector<SchemaPtr>> offered(reqs.size());
            for (size_t q2 = 0; q2 < reqs.size(); ++q2) {
                for (size_t l = 0; l < reqs[q2].size(); ++l) {
                    if ((atom.mask >> req_bits[q2][l]) & 1) {
                        bool dup = false;
                        for (const auto& y : offered[q2])
                            if (schema_equal(y, reqs[q2][l].second)) dup = true;
                        if (!dup) offered[q2].push_back(reqs[q2][l].second);
                    }
                }
            }
            if (offered[q].empty()) continue;
            // the distinct schemas live on this atom, canonically ordered
            std::vector<SchemaPtr> all;
            for (const auto& ys : offered)
                for (const auto& y : ys) {
                    bool dup = false;
                    for (const auto& z : all)
                        if (schema_equal(z, y)) dup = true;
                    if (!dup) all.push_back(y);
                }
            std::sort(all.begin(), all.end(), [](const SchemaPtr& a, const SchemaPtr& b) {
                return canon_string(a) < canon_string(b);
            });
            if (all.size() > opts.max_signature)
                throw BudgetExceededError("requirement signature width");
            auto offered_by_q = [&](const SchemaPtr& y) {
                for (const auto& z : offered[q])
                    if (schema_equal(z, y)) return true;
                return false;
            };
            std::vector<SchemaPtr> cfactors;
            for (size_t i = 0; i < props.size(); ++i)
                if ((atom.mask >> prop_bit[i]) & 1) cfactors.push_back(props[i].second);
            for (uint64_t sigma = 1; sigma < (1ull << all.size()); ++sigma) {
                bool hits_q = false;
                for (size_t i = 0; i < all.size(); ++i)
                    if (((sigma >> i) & 1) && offered_by_q(all[i])) hits_q = true;
                if (!hits_q) continue;
                std::vector<SchemaPtr> factors = cfactors;
                bool dead = false;
                for (size_t i = 0; i < all.size(); ++i) {
                    if ((sigma >> i) & 1) {
                        factors.push_back(all[i]);
                    } else {
                        SchemaPtr c = complement_ref(all[i], env);
                        if (c->kind == Schema::Kind::False_) {
                            dead = true;
                            break;
                        }
                        if (c->kind != Schema::Kind::True_) factors.push_back(c);
                    }
                }
                if (dead) continue;
                SchemaPtr schema = factory.conj_ref(factors);
                if (schema->kind == Schema::Kind::False_) continue;
                alts.emplace_back(atom.pattern, schema);
            }
        }
        if (alts.empty()) return {{}, s_false()};
        view.requiring.push_back(std::move(alts));
    }

    // rebuild the group node
    std::vector<SchemaPtr> list;
    if (view.pro_lo != 0 || !view.pro_hi.inf) list.push_back(s_pro(view.pro_lo, view.pro_hi));
    for (const auto& [pat, schema] : view.constraining) list.push_back(s_prop(pat, schema));
    for (const auto& alts : view.requiring) list.push_back(s_orpattreq(alts));
    return {std::move(view), s_group(std::move(list), JsonKind::Obj, true)};
}

PreparedObjectGroup object_view(const SchemaPtr& g) {
    assert(g->kind == Schema::Kind::Group && g->has_group_type && g->type == JsonKind::Obj &&
           g->prepared);
    PreparedObjectGroup view;
    bool any_prop = false;
    for (const auto& a : g->list) {
        switch (a->kind) {
            case Schema::Kind::Pro:
                view.pro_lo = a->lo;
                view.pro_hi = a->hi;
                break;
            case Schema::Kind::Prop:
                view.constraining.emplace_back(a->pattern, a->arg);
                any_prop = true;
                break;
            case Schema::Kind::OrPattReq: view.requiring.push_back(a->alts); break;
            case Schema::Kind::PattReq: view.requiring.push_back({{a->pattern, a->arg}}); break;
            default: break;
        }
    }
    if (!any_prop)
        view.constraining.emplace_back(PatternExpr{re::universal(), ".*"}, s_true());
    return view;
}

// ---- array preparation ----

namespace {

SchemaPtr normalize_entry(const SchemaPtr& e, VarFactory& factory) {
    if (e->kind == Schema::Kind::And) {
        std::vector<SchemaPtr> factors(e->list.begin(), e->list.end());
        return factory.conj_ref(factors);
    }
    return factory.ref_for(e);
}

SchemaPtr ite_of_items(const SchemaPtr& s) {
    std::vector<SchemaPtr> prefix(s->lo - 1, s_true());
    if (s->hi.inf) return s_ite(std::move(prefix), s->arg);
    for (uint64_t p = s->lo; p <= s->hi.n; ++p) prefix.push_back(s->arg);
    return s_ite(std::move(prefix), s_true());
}

SchemaPtr merge_two_ites(const SchemaPtr& a, const SchemaPtr& b) {
    const SchemaPtr& shorter = a->list.size() <= b->list.size() ? a : b;
    const SchemaPtr& longer = a->list.size() <= b->list.size() ? b : a;
    auto conj2 = [](const SchemaPtr& x, const SchemaPtr& y) -> SchemaPtr {
        if (schema_equal(x, y)) return x;
        if (x->kind == Schema::Kind::True_) return y;
        if (y->kind == Schema::Kind::True_) return x;
        if (x->kind == Schema::Kind::False_ || y->kind == Schema::Kind::False_) return s_false();
        return s_and({x, y});
    };
    std::vector<SchemaPtr> prefix;
    for (size_t i = 0; i < longer->list.size(); ++i) {
        SchemaPtr from_short = i < shorter->list.size() ? shorter->list[i] : shorter->arg;
        prefix.push_back(conj2(from_short, longer->list[i]));
    }
    return s_ite(std::move(prefix), conj2(shorter->arg, longer->arg));
}

} // namespace

std::pair<PreparedArrayGroup, SchemaPtr> prepare_array_group(const SchemaPtr& g, Environment& env,
                                                             VarFactory& factory,
                                                             const PipelineOptions& opts) {
    (void)env;
    assert(g->kind == Schema::Kind::Group && g->has_group_type && g->type == JsonKind::Arr);

    PreparedArrayGroup view;
    view.tail = s_true();
    SchemaPtr ite;
    std::vector<SchemaPtr> uniqueness_nodes;

    for (const auto& a : g->list) {
        SchemaPtr node = a->kind == Schema::Kind::Items ? ite_of_items(a) : a;
        switch (node->kind) {
            case Schema::Kind::Ite:
                ite = ite ? merge_two_ites(ite, node) : node;
                break;
            case Schema::Kind::Contains: {
                if (node->arg->kind == Schema::Kind::True_) {
                    view.size_lo = std::max(view.size_lo, node->lo);
                    if (!node->hi.inf && (view.size_hi.inf || node->hi.n < view.size_hi.n))
                        view.size_hi = node->hi;
                } else if (node->arg->kind == Schema::Kind::False_) {
                    if (node->lo > 0) return {{}, s_false()};
                } else {
                    bool merged = false;
                    for (auto& c : view.contains) {
                        if (schema_equal(c.schema, node->arg)) {
                            c.lo = std::max(c.lo, node->lo);
                            if (!node->hi.inf && (c.hi.inf || node->hi.n < c.hi.n)) c.hi = node->hi;
                            merged = true;
                            break;
                        }
                    }
                    if (!merged)
                        view.contains.push_back({node->lo, node->hi, node->arg});
                }
                break;
            }
            case Schema::Kind::UniqueItems:
            case Schema::Kind::RepeatedItems:
                view.has_uniqueness = true;
                uniqueness_nodes.push_back(node);
                break;
            case Schema::Kind::TypeAssert:
                break; // the group type restated explicitly
            default:
                throw std::logic_error("unexpected assertion in an array group");
        }
    }
    if (!view.size_hi.inf && view.size_lo > view.size_hi.n) return {{}, s_false()};
    for (const auto& c : view.contains) {
        if (!c.hi.inf && c.lo > c.hi.n) return {{}, s_false()};
    }
    if (view.contains.size() > opts.max_contains)
        throw BudgetExceededError("contains constraints per array group");

    if (ite) {
        for (const auto& e : ite->list) view.prefix.push_back(normalize_entry(e, factory));
        view.tail = normalize_entry(ite->arg, factory);
    }

    // pre-create every conjunction witness generation may place in a slot
    std::vector<SchemaPtr> slots = view.prefix;
    slots.push_back(view.tail);
    bool any_finite = false;
    for (const auto& c : view.contains)
        if (!c.hi.inf) any_finite = true;
    uint64_t first_mask = any_finite ? 0 : 1;
    for (uint64_t mask = first_mask; mask < (1ull << view.contains.size()); ++mask) {
        for (const auto& slot : slots) {
            if (slot->kind == Schema::Kind::False_) continue;
            factory.conj_ref(array_cell_factors(view, mask, slot, env));
        }
    }

    std::vector<SchemaPtr> list;
    if (!view.prefix.empty() || view.tail->kind != Schema::Kind::True_)
        list.push_back(s_ite(view.prefix, view.tail));
    if (view.size_lo != 0 || !view.size_hi.inf)
        list.push_back(s_contains(view.size_lo, view.size_hi, s_true()));
    for (const auto& c : view.contains) list.push_back(s_contains(c.lo, c.hi, c.schema));
    for (const auto& u : uniqueness_nodes) list.push_back(u);
    return {std::move(view), s_group(std::move(list), JsonKind::Arr, true)};
}

PreparedArrayGroup array_view(const SchemaPtr& g) {
    assert(g->kind == Schema::Kind::Group && g->has_group_type && g->type == JsonKind::Arr &&
           g->prepared);
    PreparedArrayGroup view;
    view.tail = s_true();
    for (const auto& a : g->list) {
        switch (a->kind) {
            case Schema::Kind::Ite:
                view.prefix = a->list;
                view.tail = a->arg;
                break;
            case Schema::Kind::Contains:
                if (a->arg->kind == Schema::Kind::True_) {
                    view.size_lo = a->lo;
                    view.size_hi = a->hi;
                } else {
                    view.contains.push_back({a->lo, a->hi, a->arg});
                }
                break;
            case Schema::Kind::UniqueItems:
            case Schema::Kind::RepeatedItems:
                view.has_uniqueness = true;
                break;
            default: break;
        }
    }
    return view;
}

std::vector<SchemaPtr> array_cell_factors(const PreparedArrayGroup& g, uint64_t mask,
                                          const SchemaPtr& base, const Environment& env) {
    std::vector<SchemaPtr> factors;
    for (size_t i = 0; i < g.contains.size(); ++i) {
        if ((mask >> i) & 1) {
            factors.push_back(g.contains[i].schema);
        } else if (!g.contains[i].hi.inf) {
            factors.push_back(complement_ref(g.contains[i].schema, env));
        }
    }
    factors.push_back(base);
    return factors;
}

// ---- whole-environment preparation ----

void prepare_environment(Environment& env, VarFactory& factory, const PipelineOptions& opts) {
    for (const auto& name : std::vector<std::string>(env.order())) {
        const SchemaPtr& body = env.body(name);
        std::vector<SchemaPtr> groups;
        if (body->kind == Schema::Kind::Or)
            groups = body->list;
        else
            groups = {body};
        bool changed = false;
        std::vector<SchemaPtr> out;
        for (const auto& gptr : groups) {
            if (gptr->kind != Schema::Kind::Group || !gptr->has_group_type || gptr->prepared) {
                out.push_back(gptr);
                continue;
            }
            if (gptr->type == JsonKind::Obj) {
                auto [view, node] = prepare_object_group(gptr, env, factory, opts);
                changed = true;
                if (node->kind != Schema::Kind::False_) out.push_back(node);
            } else if (gptr->type == JsonKind::Arr) {
                auto [view, node] = prepare_array_group(gptr, env, factory, opts);
                changed = true;
                if (node->kind != Schema::Kind::False_) out.push_back(node);
            } else {
                out.push_back(gptr);
            }
        }
        if (changed) env.set_body(name, s_or(std::move(out)));
    }
}

// ---- the conjunction-variable index used at generation time ----

namespace {

std::string factor_key(const std::vector<std::string>& names) {
    std::string key;
    for (const auto& n : names) {
        key += n;
        key.push_back('\x1f');
    }
    return key;
}

} // namespace

ConjResolver::ConjResolver(const Environment& env) : env_(env) {
    for (const auto& name : env.order()) {
        std::vector<std::string> factors;
        if (const auto* registered = env.conj_factors_of(name)) {
            factors = *registered;
        } else {
            const SchemaPtr& body = env.body(name);
            if (body->kind == Schema::Kind::And) {
                bool all_refs = true;
                for (const auto& p : body->list) {
                    if (p->kind != Schema::Kind::Ref) {
                        all_refs = false;
                        break;
                    }
                    factors.push_back(p->var);
                }
                if (!all_refs) factors.clear();
            }
        }
        if (!factors.empty()) {
            std::sort(factors.begin(), factors.end());
            by_canon_.emplace(factor_key(factors), name);
            factor_sets_.emplace(name, std::move(factors));
        }
    }
}

std::vector<std::string> ConjResolver::factors_of(const std::string& var) const {
    auto it = factor_sets_.find(var);
    if (it != factor_sets_.end()) return it->second;
    return {var};
}

SchemaPtr ConjResolver::resolve(const std::vector<SchemaPtr>& factors) const {
    std::vector<std::string> names;
    for (const auto& f : factors) {
        if (f->kind == Schema::Kind::True_) continue;
        if (f->kind == Schema::Kind::False_) return s_false();
        assert(f->kind == Schema::Kind::Ref);
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
    auto it = by_canon_.find(factor_key(names));
    if (it == by_canon_.end()) return nullptr;
    return s_ref(it->second);
}

// ---- invariant checks ----

void check_object_invariants(
    const PreparedObjectGroup& g, const Environment& env,
    const std::function<std::vector<std::string>(const std::string&)>& factors_of) {
    auto factor_set = [&](const SchemaPtr& s) -> std::vector<std::string> {
        if (s->kind == Schema::Kind::True_) return {};
        if (s->kind == Schema::Kind::Ref) return factors_of(s->var);
        return {"<nonvar>"};
    };
    auto contains_all = [](const std::vector<std::string>& big,
                           const std::vector<std::string>& small) {
        for (const auto& x : small)
            if (std::find(big.begin(), big.end(), x) == big.end()) return false;
        return true;
    };

    // 1. constraint partition: pairwise disjoint, covering
    std::vector<re::PatternPtr> pats;
    for (const auto& [p, x] : g.constraining) pats.push_back(p.ptr);
    for (size_t i = 0; i < pats.size(); ++i)
        for (size_t j = i + 1; j < pats.size(); ++j)
            if (!re::language_empty(re::inter({pats[i], pats[j]})))
                throw std::logic_error("constraint partition: patterns overlap");
    if (!re::language_empty(re::complement(re::alt(pats))))
        throw std::logic_error("constraint partition: names not covered");

    // 2. constraint internalization
    for (const auto& alts : g.requiring) {
        for (const auto& [r, y] : alts) {
            for (const auto& [p, x] : g.constraining) {
                if (re::language_empty(re::inter({r.ptr, p.ptr}))) continue;
                if (x->kind == Schema::Kind::True_) continue;
                if (x->kind == Schema::Kind::False_) {
                    if (y->kind != Schema::Kind::False_)
                        throw std::logic_error("constraint internalization: impossible region");
                    continue;
                }
                if (y->kind == Schema::Kind::False_) continue;
                if (!contains_all(factor_set(y), factor_set(x)))
                    throw std::logic_error("constraint internalization: missing factor");
            }
        }
    }

    // 3 + 4. internal and external splitting
    auto split_or_equal = [&](const std::pair<PatternExpr, SchemaPtr>& a,
                              const std::pair<PatternExpr, SchemaPtr>& b, bool allow_equal) {
        auto tri = re::trivial_intersection(a.first.ptr, b.first.ptr);
        if (tri == re::TrivialIntersection::Overlapping)
            throw std::logic_error("splitting: non-trivial pattern intersection");
        if (tri == re::TrivialIntersection::Disjoint) return;
        // language-equal patterns: identical pairs or schema-disjoint
        if (schema_equal(a.second, b.second)) {
            if (allow_equal) return;
            throw std::logic_error("splitting: duplicate pair inside one orPattReq");
        }
        auto fa = factor_set(a.second);
        auto fb = factor_set(b.second);
        for (const auto& n : fa) {
            if (env.has_complement(n) &&
                std::find(fb.begin(), fb.end(), env.complement_of(n)) != fb.end())
                return; // complement factors make them disjoint by construction
        }
        throw std::logic_error("splitting: same-pattern pairs lack complementary factors");
    };
    for (size_t q = 0; q < g.requiring.size(); ++q) {
        for (size_t i = 0; i < g.requiring[q].size(); ++i)
            for (size_t j = i + 1; j < g.requiring[q].size(); ++j)
                split_or_equal(g.requiring[q][i], g.requiring[q][j], false);
        for (size_t q2 = q + 1; q2 < g.requiring.size(); ++q2)
            for (const auto& a : g.requiring[q])
                for (const auto& b : g.requiring[q2]) split_or_equal(a, b, true);
    }
}

} // namespace jsw
