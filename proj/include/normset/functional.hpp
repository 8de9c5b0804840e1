#pragma once

#include "normset/config.hpp"
#include "normset/rational.hpp"
#include "normset/schreier.hpp"
#include "normset/vector.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace normset {

// ---------------------------------------------------------------------------
// Tree-structured elements of the norming sets.
//
// W        : the full grammar (type 0, alpha/beta-averages, type I_a, I_b,
//            type II with sigma-coherent weights, convex, restriction).
// W_T      : Tsirelson norming set — type 0, (1/2)-sums of S_1-admissible
//            families, restriction, convex combinations.
// W_T'     : W_T without convex combinations.
// W_mod    : the norming set of the equivalent norm — (1/2)-sums of up to 2d
//            parts with d <= min supp of the first part.
// In W_T / W_T' / W_mod the (1/2)-sum node is represented by kind::type_ii
// with the respective admissibility rule and no weight bookkeeping.
// ---------------------------------------------------------------------------

enum class TermKind {
    type0,
    alpha_average,
    beta_average,
    type_i_alpha,
    type_i_beta,
    type_ii,
    convex,
    restricted,
};

enum class Grammar { W, W_T, W_T_prime, W_mod };

inline std::string grammar_name(Grammar g) {
    switch (g) {
        case Grammar::W: return "W";
        case Grammar::W_T: return "W_T";
        case Grammar::W_T_prime: return "W_T'";
        case Grammar::W_mod: return "W_mod";
    }
    return "?";
}

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermKind kind;
    int sign = +1;               // type0 / restricted
    Nat index;                   // type0
    Nat size;                    // averages: s(f)
    Nat weight;                  // type I: w(f)
    std::vector<Rat> coeffs;     // convex
    IndexInterval interval;      // restricted
    std::vector<TermPtr> children;

    // support hull [min,max]; exact for the successive families the grammar
    // admits (beta-average children may overlap, there it is conservative)
    std::optional<Nat> min_supp, max_supp;

    bool has_support() const { return min_supp.has_value(); }
};

namespace term {

inline void hull_from_children(Term& t) {
    for (auto& c : t.children) {
        if (!c->has_support()) continue;
        if (!t.min_supp || *c->min_supp < *t.min_supp) t.min_supp = c->min_supp;
        if (!t.max_supp || *c->max_supp > *t.max_supp) t.max_supp = c->max_supp;
    }
}

inline TermPtr type0(Nat index, int sign = +1) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::type0;
    t->sign = sign;
    t->index = std::move(index);
    t->min_supp = t->max_supp = t->index;
    return t;
}

inline TermPtr alpha_average(Nat size, std::vector<TermPtr> children) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::alpha_average;
    t->size = std::move(size);
    t->children = std::move(children);
    hull_from_children(*t);
    return t;
}

inline TermPtr beta_average(Nat size, std::vector<TermPtr> children) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::beta_average;
    t->size = std::move(size);
    t->children = std::move(children);
    hull_from_children(*t);
    return t;
}

inline TermPtr type_i(TermKind which, Nat weight, std::vector<TermPtr> children) {
    auto t = std::make_shared<Term>();
    t->kind = which;
    t->weight = std::move(weight);
    t->children = std::move(children);
    hull_from_children(*t);
    return t;
}
inline TermPtr type_i_alpha(Nat weight, std::vector<TermPtr> children) {
    return type_i(TermKind::type_i_alpha, std::move(weight), std::move(children));
}
inline TermPtr type_i_beta(Nat weight, std::vector<TermPtr> children) {
    return type_i(TermKind::type_i_beta, std::move(weight), std::move(children));
}

inline TermPtr type_ii(std::vector<TermPtr> children) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::type_ii;
    t->children = std::move(children);
    hull_from_children(*t);
    return t;
}

inline TermPtr convex(std::vector<Rat> coeffs, std::vector<TermPtr> children) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::convex;
    t->coeffs = std::move(coeffs);
    t->children = std::move(children);
    hull_from_children(*t);
    return t;
}

inline TermPtr restricted(IndexInterval I, TermPtr child, int sign = +1) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::restricted;
    t->sign = sign;
    t->interval = I;
    t->children = {std::move(child)};
    hull_from_children(*t);
    if (t->min_supp) {
        if (I.is_empty) {
            t->min_supp.reset();
            t->max_supp.reset();
        } else {
            if (*t->min_supp < I.lo) t->min_supp = I.lo;
            if (I.hi && *t->max_supp > *I.hi) t->max_supp = *I.hi;
            if (*t->min_supp > *t->max_supp) {
                t->min_supp.reset();
                t->max_supp.reset();
            }
        }
    }
    return t;
}

}  // namespace term

// Exact value of the functional on v.
inline Rat evaluate(const TermPtr& t, const RationalVector& v) {
    if (!t) throw MalformedInput("evaluate: null term");
    switch (t->kind) {
        case TermKind::type0:
            return Rat(t->sign) * v.at(t->index);
        case TermKind::alpha_average:
        case TermKind::beta_average: {
            Rat s(0);
            for (auto& c : t->children) s += evaluate(c, v);
            return s / Rat(t->size);
        }
        case TermKind::type_i_alpha:
        case TermKind::type_i_beta: {
            Rat s(0);
            for (auto& c : t->children) s += evaluate(c, v);
            return s * inv_pow2(t->weight);
        }
        case TermKind::type_ii: {
            Rat s(0);
            for (auto& c : t->children) s += evaluate(c, v);
            return s / 2;
        }
        case TermKind::convex: {
            Rat s(0);
            for (std::size_t i = 0; i < t->children.size(); ++i)
                s += t->coeffs[i] * evaluate(t->children[i], v);
            return s;
        }
        case TermKind::restricted:
            return Rat(t->sign) * evaluate(t->children[0], v.restrict(t->interval));
    }
    throw std::logic_error("evaluate: bad kind");
}

// The functional as an element of c_00 (exact coefficient vector).
inline RationalVector coefficient_vector(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::type0:
            return RationalVector::unit(t->index, Rat(t->sign));
        case TermKind::alpha_average:
        case TermKind::beta_average: {
            RationalVector s;
            for (auto& c : t->children) s = s + coefficient_vector(c);
            return s.scaled(Rat(1) / Rat(t->size));
        }
        case TermKind::type_i_alpha:
        case TermKind::type_i_beta: {
            RationalVector s;
            for (auto& c : t->children) s = s + coefficient_vector(c);
            return s.scaled(inv_pow2(t->weight));
        }
        case TermKind::type_ii: {
            RationalVector s;
            for (auto& c : t->children) s = s + coefficient_vector(c);
            return s.scaled(Rat(1, 2));
        }
        case TermKind::convex: {
            RationalVector s;
            for (std::size_t i = 0; i < t->children.size(); ++i)
                s = s + coefficient_vector(t->children[i]).scaled(t->coeffs[i]);
            return s;
        }
        case TermKind::restricted:
            return coefficient_vector(t->children[0]).restrict(t->interval).scaled(Rat(t->sign));
    }
    throw std::logic_error("coefficient_vector: bad kind");
}

// ---------------------------------------------------------------------------
// Canonical serialization (also the sigma-history encoding).
// ---------------------------------------------------------------------------

inline nlohmann::json term_to_json(const TermPtr& t) {
    nlohmann::json j;
    switch (t->kind) {
        case TermKind::type0:
            j["k"] = "e";
            j["i"] = nat_to_string(t->index);
            if (t->sign < 0) j["neg"] = true;
            return j;
        case TermKind::alpha_average:
            j["k"] = "av_a";
            j["s"] = nat_to_string(t->size);
            break;
        case TermKind::beta_average:
            j["k"] = "av_b";
            j["s"] = nat_to_string(t->size);
            break;
        case TermKind::type_i_alpha:
            j["k"] = "Ia";
            j["w"] = nat_to_string(t->weight);
            break;
        case TermKind::type_i_beta:
            j["k"] = "Ib";
            j["w"] = nat_to_string(t->weight);
            break;
        case TermKind::type_ii:
            j["k"] = "II";
            break;
        case TermKind::convex: {
            j["k"] = "cx";
            nlohmann::json cs = nlohmann::json::array();
            for (auto& c : t->coeffs) cs.push_back(rat_to_string(c));
            j["a"] = std::move(cs);
            break;
        }
        case TermKind::restricted:
            j["k"] = "I|";
            if (t->interval.is_empty) {
                j["empty"] = true;
            } else {
                j["lo"] = nat_to_string(t->interval.lo);
                if (t->interval.hi) j["hi"] = nat_to_string(*t->interval.hi);
            }
            if (t->sign < 0) j["neg"] = true;
            break;
    }
    nlohmann::json kids = nlohmann::json::array();
    for (auto& c : t->children) kids.push_back(term_to_json(c));
    j["c"] = std::move(kids);
    return j;
}

inline TermPtr term_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("k")) throw MalformedInput("term json: missing kind");
    std::string k = j.at("k").get<std::string>();
    std::vector<TermPtr> kids;
    if (j.contains("c"))
        for (auto& cj : j.at("c")) kids.push_back(term_from_json(cj));
    int sign = j.value("neg", false) ? -1 : +1;
    if (k == "e") return term::type0(parse_nat(j.at("i").get<std::string>()), sign);
    if (k == "av_a") return term::alpha_average(parse_nat(j.at("s").get<std::string>()), std::move(kids));
    if (k == "av_b") return term::beta_average(parse_nat(j.at("s").get<std::string>()), std::move(kids));
    if (k == "Ia") return term::type_i_alpha(parse_nat(j.at("w").get<std::string>()), std::move(kids));
    if (k == "Ib") return term::type_i_beta(parse_nat(j.at("w").get<std::string>()), std::move(kids));
    if (k == "II") return term::type_ii(std::move(kids));
    if (k == "cx") {
        std::vector<Rat> coeffs;
        for (auto& a : j.at("a")) coeffs.push_back(parse_rat(a.get<std::string>()));
        return term::convex(std::move(coeffs), std::move(kids));
    }
    if (k == "I|") {
        if (kids.size() != 1) throw MalformedInput("restriction: one child expected");
        IndexInterval I;
        if (j.value("empty", false)) {
            I = IndexInterval::empty();
        } else {
            I.lo = parse_nat(j.at("lo").get<std::string>());
            if (j.contains("hi")) I.hi = parse_nat(j.at("hi").get<std::string>());
        }
        return term::restricted(I, kids[0], sign);
    }
    throw MalformedInput("term json: unknown kind " + k);
}

// nlohmann::json orders keys, so dump() is canonical.
inline std::string canonical_term_string(const TermPtr& t) { return term_to_json(t).dump(); }

inline std::string canonical_history_string(const std::vector<std::pair<TermPtr, Nat>>& history) {
    nlohmann::json j = nlohmann::json::array();
    for (auto& [f, n] : history) {
        nlohmann::json p;
        p["f"] = term_to_json(f);
        p["n"] = nat_to_string(n);
        j.push_back(std::move(p));
    }
    return j.dump();
}

// Interface to the coding function for validation; realized by CodingRegistry.
struct SigmaOracle {
    virtual ~SigmaOracle() = default;
    virtual std::optional<Nat> lookup_history(const std::string& canonical_history) const = 0;
};

// ---------------------------------------------------------------------------
// weight set of a type II functional (paper item 4):
// w^(g) = { w(f_j) : ran f_j meets the restriction interval }
// ---------------------------------------------------------------------------

// Unwraps sign/restriction wrappers; returns the underlying node and the
// accumulated interval (nullopt -> unrestricted).
inline std::pair<TermPtr, std::optional<IndexInterval>> unwrap_restrictions(TermPtr t) {
    std::optional<IndexInterval> acc;
    while (t->kind == TermKind::restricted) {
        if (!acc) {
            acc = t->interval;
        } else {
            // intersect intervals
            if (acc->is_empty || t->interval.is_empty) {
                acc = IndexInterval::empty();
            } else {
                Nat lo = nat_max(acc->lo, t->interval.lo);
                std::optional<Nat> hi;
                if (acc->hi && t->interval.hi) hi = nat_min(*acc->hi, *t->interval.hi);
                else if (acc->hi) hi = acc->hi;
                else hi = t->interval.hi;
                if (hi && lo > *hi) acc = IndexInterval::empty();
                else {
                    IndexInterval r;
                    r.lo = lo;
                    r.hi = hi;
                    acc = r;
                }
            }
        }
        t = t->children[0];
    }
    return {t, acc};
}

inline bool range_meets(const TermPtr& t, const std::optional<IndexInterval>& I) {
    if (!t->has_support()) return false;
    if (!I) return true;
    if (I->is_empty) return false;
    if (I->hi && *t->min_supp > *I->hi) return false;
    return *t->max_supp >= I->lo;
}

inline std::set<Nat> weight_set(const TermPtr& t) {
    auto [core, I] = unwrap_restrictions(t);
    if (core->kind != TermKind::type_ii) throw MalformedInput("weight_set: not a type II functional");
    std::set<Nat> ws;
    for (auto& f : core->children)
        if (range_meets(f, I)) ws.insert(f->weight);
    return ws;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct Violation {
    std::string path;
    std::string clause;
};

namespace detail {

struct Validator {
    Grammar grammar;
    const SpaceConfig& cfg;
    const SigmaOracle* sigma;
    std::vector<Violation> out;

    void fail(const std::string& path, const std::string& clause) { out.push_back({path, clause}); }

    static bool successive(const std::vector<TermPtr>& kids) {
        for (std::size_t i = 0; i + 1 < kids.size(); ++i) {
            if (!kids[i]->has_support() || !kids[i + 1]->has_support()) return false;
            if (!(*kids[i]->max_supp < *kids[i + 1]->min_supp)) return false;
        }
        return true;
    }

    bool admissible(const std::vector<TermPtr>& kids, const Nat& level) {
        std::vector<Nat> mins;
        for (auto& k : kids) {
            if (!k->has_support()) return false;
            mins.push_back(*k->min_supp);
        }
        return is_member(mins, level).has_value();
    }

    void check(const TermPtr& t, const std::string& path, bool at_root) {
        if (!t) { fail(path, "null"); return; }
        const bool tsirelson_like =
            grammar == Grammar::W_T || grammar == Grammar::W_T_prime || grammar == Grammar::W_mod;
        switch (t->kind) {
            case TermKind::type0:
                if (t->index < 1) fail(path, "type 0 index must be >= 1");
                if (t->sign != 1 && t->sign != -1) fail(path, "sign");
                return;

            case TermKind::restricted:
                if (t->children.size() != 1) { fail(path, "restriction arity"); return; }
                if (t->sign != 1 && t->sign != -1) fail(path, "sign");
                check(t->children[0], path + ".0", false);
                return;

            case TermKind::convex: {
                if (grammar == Grammar::W_T_prime) { fail(path, "convex not in W_T'"); return; }
                if (cfg.strict_convex_root_only && !at_root)
                    fail(path, "strict mode: convex only at the root");
                if (t->children.empty() || t->children.size() != t->coeffs.size()) {
                    fail(path, "convex arity");
                    return;
                }
                Rat s(0);
                for (auto& c : t->coeffs) {
                    if (c < 0) fail(path, "convex coefficient < 0");
                    s += c;
                }
                if (s > 1) fail(path, "convex coefficients sum > 1");
                for (std::size_t i = 0; i < t->children.size(); ++i)
                    check(t->children[i], path + "." + std::to_string(i), false);
                return;
            }

            case TermKind::type_ii: {
                if (t->children.empty()) { fail(path, "type II needs children"); return; }
                if (!successive(t->children)) fail(path, "type II children must be successive");
                if (grammar == Grammar::W_mod) {
                    // up to 2d parts with d <= min supp of the first part
                    Nat m(static_cast<unsigned long>(t->children.size()));
                    Nat d = (m + 1) / 2;
                    if (!t->children[0]->has_support() || d > *t->children[0]->min_supp)
                        fail(path, "2d-part admissibility (d <= min E_1)");
                } else if (!admissible(t->children, Nat(1))) {
                    fail(path, "type II children must be S_1-admissible");
                }
                if (grammar == Grammar::W) {
                    std::vector<std::pair<TermPtr, Nat>> history;
                    for (std::size_t j = 0; j < t->children.size(); ++j) {
                        const TermPtr& f = t->children[j];
                        if (f->kind != TermKind::type_i_alpha) {
                            fail(path + "." + std::to_string(j), "type II child must be type I_a");
                            continue;
                        }
                        if (j == 0) {
                            if (!cfg.in_L1(f->weight))
                                fail(path + ".0", "w(f_1) must lie in L_1");
                        } else {
                            const TermPtr& prev = t->children[j - 1];
                            if (prev->has_support() &&
                                !cfg.sigma_weight_ok(f->weight, prev->weight, *prev->max_supp))
                                fail(path + "." + std::to_string(j), "sigma growth condition");
                            if (sigma) {
                                auto assigned = sigma->lookup_history(canonical_history_string(history));
                                if (!assigned || *assigned != f->weight)
                                    fail(path + "." + std::to_string(j),
                                         "weight is not the sigma value of the history");
                            } else {
                                fail(path + "." + std::to_string(j),
                                     "sigma coherence unverifiable without a registry");
                            }
                        }
                        history.emplace_back(f, f->weight);
                    }
                }
                for (std::size_t i = 0; i < t->children.size(); ++i)
                    check(t->children[i], path + "." + std::to_string(i), false);
                return;
            }

            case TermKind::alpha_average:
            case TermKind::beta_average:
            case TermKind::type_i_alpha:
            case TermKind::type_i_beta: {
                if (tsirelson_like) { fail(path, "kind not in " + grammar_name(grammar)); return; }
                if (t->children.empty()) { fail(path, "needs children"); return; }
                if (t->kind == TermKind::alpha_average) {
                    if (Nat(static_cast<unsigned long>(t->children.size())) > t->size)
                        fail(path, "average has more children than its size");
                    if (!successive(t->children)) fail(path, "alpha-average children must be successive");
                } else if (t->kind == TermKind::beta_average) {
                    if (Nat(static_cast<unsigned long>(t->children.size())) > t->size)
                        fail(path, "average has more children than its size");
                    if (cfg.strict_beta_successive && !successive(t->children))
                        fail(path, "strict mode: beta-average children must be successive");
                    std::vector<std::set<Nat>> wsets;
                    for (std::size_t j = 0; j < t->children.size(); ++j) {
                        auto [core, I] = unwrap_restrictions(t->children[j]);
                        if (core->kind != TermKind::type_ii) {
                            fail(path + "." + std::to_string(j),
                                 "beta-average child must be a (restricted) type II functional");
                            continue;
                        }
                        wsets.push_back(weight_set(t->children[j]));
                    }
                    for (std::size_t a = 0; a < wsets.size(); ++a)
                        for (std::size_t b = a + 1; b < wsets.size(); ++b)
                            for (auto& x : wsets[a])
                                if (wsets[b].count(x))
                                    fail(path, "beta-average children must have disjoint weight sets");
                } else {
                    // type I_a / I_b
                    if (t->weight < 1) fail(path, "type I weight must be >= 1");
                    TermKind want = (t->kind == TermKind::type_i_alpha) ? TermKind::alpha_average
                                                                        : TermKind::beta_average;
                    for (std::size_t j = 0; j < t->children.size(); ++j)
                        if (t->children[j]->kind != want)
                            fail(path + "." + std::to_string(j),
                                 t->kind == TermKind::type_i_alpha
                                     ? "type I_a children must be alpha-averages"
                                     : "type I_b children must be beta-averages");
                    if (!successive(t->children)) fail(path, "type I children must be successive");
                    if (!admissible(t->children, t->weight))
                        fail(path, "type I children must be S_n-admissible for n = weight");
                    for (std::size_t j = 1; j < t->children.size(); ++j) {
                        const TermPtr& a = t->children[j - 1];
                        const TermPtr& b = t->children[j];
                        if (!a->has_support() || !b->has_support()) continue;
                        if (!cfg.vfg_step_ok(a->size, *a->max_supp, b->size))
                            fail(path + "." + std::to_string(j), "very fast growing");
                    }
                }
                for (std::size_t i = 0; i < t->children.size(); ++i)
                    check(t->children[i], path + "." + std::to_string(i), false);
                return;
            }
        }
    }
};

}  // namespace detail

inline std::vector<Violation> validate(const TermPtr& t, Grammar grammar, const SpaceConfig& cfg,
                                       const SigmaOracle* sigma = nullptr) {
    detail::Validator v{grammar, cfg, sigma, {}};
    v.check(t, "f", true);
    return v.out;
}

inline bool validates(const TermPtr& t, Grammar grammar, const SpaceConfig& cfg,
                      const SigmaOracle* sigma = nullptr) {
    return validate(t, grammar, cfg, sigma).empty();
}

}  // namespace normset
