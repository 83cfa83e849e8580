#pragma once

// Core data model: predicates, individuals, DL-Lite axioms, conjunctive
// queries, signatures, and abduction problem instances, plus the structural
// validation and canonicalization helpers shared by the whole engine.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qx {

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidTBox : Error { using Error::Error; };
struct UnsafeQuery : Error { using Error::Error; };
struct ArityMismatch : Error { using Error::Error; };
struct NotAnExplanation : Error { using Error::Error; };
struct NotAbducible : Error { using Error::Error; };
struct FunctionalityConflict : Error { using Error::Error; };
struct RestrictedSignature : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct BudgetTooLarge : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct InconsistentOntology : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Individuals

// Anonymous individuals carry the reserved "_:" prefix, which the parsers
// reject in ordinary input; chase nulls use "_#" and exist only inside the
// test oracles.
inline constexpr const char* anon_prefix = "_:";
inline constexpr const char* null_prefix = "_#";

inline bool is_anonymous(const std::string& name) {
  return name.rfind(anon_prefix, 0) == 0;
}

inline bool is_chase_null(const std::string& name) {
  return name.rfind(null_prefix, 0) == 0;
}

// Lowest unused name in the canonical sequence _:a1, _:a2, ...
inline std::string fresh_anonymous(const std::set<std::string>& context) {
  for (int i = 1;; ++i) {
    std::string cand = std::string(anon_prefix) + "a" + std::to_string(i);
    if (!context.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// Predicates, roles, basic concepts

struct Pred {
  std::string name;
  bool role = false;  // concepts have arity 1, roles arity 2

  int arity() const { return role ? 2 : 1; }
  auto operator<=>(const Pred&) const = default;
};

inline Pred concept_pred(std::string name) { return Pred{std::move(name), false}; }
inline Pred role_pred(std::string name) { return Pred{std::move(name), true}; }

struct RoleExpr {
  std::string name;
  bool inverted = false;

  RoleExpr inverse() const { return RoleExpr{name, !inverted}; }
  auto operator<=>(const RoleExpr&) const = default;
};

struct BasicConcept {
  bool existential = false;  // false: atomic concept, true: EXISTS role
  std::string name;
  bool inverted = false;  // only meaningful when existential

  static BasicConcept atomic(std::string n) { return {false, std::move(n), false}; }
  static BasicConcept exists(RoleExpr r) { return {true, std::move(r.name), r.inverted}; }
  RoleExpr role() const { return RoleExpr{name, inverted}; }
  auto operator<=>(const BasicConcept&) const = default;
};

// ---------------------------------------------------------------------------
// TBox

struct ConceptIncl {
  BasicConcept lhs, rhs;
  auto operator<=>(const ConceptIncl&) const = default;
};
struct ConceptDisj {
  BasicConcept lhs, rhs;
  auto operator<=>(const ConceptDisj&) const = default;
};
struct RoleIncl {
  RoleExpr lhs, rhs;
  auto operator<=>(const RoleIncl&) const = default;
};
struct RoleDisj {
  RoleExpr lhs, rhs;
  auto operator<=>(const RoleDisj&) const = default;
};
struct Funct {
  RoleExpr role;
  auto operator<=>(const Funct&) const = default;
};

using Axiom = std::variant<ConceptIncl, ConceptDisj, RoleIncl, RoleDisj, Funct>;

struct TBox {
  std::set<Axiom> axioms;
  auto operator<=>(const TBox&) const = default;
};

// Functional and inverse-functional roles may not be specialized: no role
// inclusion may have such a role (in either orientation) on its right side.
struct ValidationReport {
  bool ok = true;
  std::vector<std::pair<Axiom, Axiom>> offending;  // (funct axiom, role inclusion)
};

inline ValidationReport validate_dllite(const TBox& t) {
  ValidationReport rep;
  for (const Axiom& fa : t.axioms) {
    const Funct* f = std::get_if<Funct>(&fa);
    if (!f) continue;
    for (const Axiom& ia : t.axioms) {
      const RoleIncl* ri = std::get_if<RoleIncl>(&ia);
      if (!ri) continue;
      if (ri->rhs.name == f->role.name) {
        rep.ok = false;
        rep.offending.emplace_back(fa, ia);
      }
    }
  }
  return rep;
}

inline void require_valid(const TBox& t) {
  if (!validate_dllite(t).ok) throw InvalidTBox("TBox specializes a functional role");
}

// ---------------------------------------------------------------------------
// ABox

struct Assertion {
  Pred pred;
  std::vector<std::string> args;
  auto operator<=>(const Assertion&) const = default;
};

inline Assertion assert1(std::string c, std::string ind) {
  return Assertion{concept_pred(std::move(c)), {std::move(ind)}};
}
inline Assertion assert2(std::string r, std::string a, std::string b) {
  return Assertion{role_pred(std::move(r)), {std::move(a), std::move(b)}};
}

using ABox = std::set<Assertion>;

// ---------------------------------------------------------------------------
// Signatures

using Signature = std::set<Pred>;

inline bool in_signature(const Signature& sigma, const Pred& p) {
  return sigma.count(p) > 0;
}

inline bool is_sigma_abox(const ABox& a, const Signature& sigma) {
  for (const Assertion& as : a)
    if (!in_signature(sigma, as.pred)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Queries

struct Term {
  bool var = false;
  std::string name;

  static Term variable(std::string n) { return {true, std::move(n)}; }
  static Term individual(std::string n) { return {false, std::move(n)}; }
  auto operator<=>(const Term&) const = default;
};

struct Atom {
  Pred pred;
  std::vector<Term> args;
  auto operator<=>(const Atom&) const = default;
};

inline Atom atom1(std::string c, Term t) {
  return Atom{concept_pred(std::move(c)), {std::move(t)}};
}
inline Atom atom2(std::string r, Term t1, Term t2) {
  return Atom{role_pred(std::move(r)), {std::move(t1), std::move(t2)}};
}

struct CQ {
  std::vector<std::string> head;  // answer variables, possibly empty (Boolean)
  std::set<Atom> body;
  auto operator<=>(const CQ&) const = default;
};

struct UCQ {
  std::vector<CQ> disjuncts;
  auto operator<=>(const UCQ&) const = default;
};

inline bool is_safe(const CQ& q) {
  for (const std::string& v : q.head) {
    bool found = false;
    for (const Atom& at : q.body)
      for (const Term& t : at.args)
        if (t.var && t.name == v) found = true;
    if (!found) return false;
  }
  return true;
}

inline void require_safe(const UCQ& q) {
  if (q.disjuncts.empty()) throw UnsafeQuery("query has no disjuncts");
  for (const CQ& cq : q.disjuncts) {
    if (!is_safe(cq)) throw UnsafeQuery("answer variable missing from query body");
    if (cq.head != q.disjuncts.front().head)
      throw UnsafeQuery("disjuncts disagree on the answer tuple");
  }
}

inline bool is_instance_query(const UCQ& q) {
  if (q.disjuncts.size() != 1) return false;
  const CQ& cq = q.disjuncts.front();
  return cq.head.size() == 1 && cq.body.size() == 1 &&
         !cq.body.begin()->pred.role && cq.body.begin()->args[0].var;
}

inline size_t max_atoms(const UCQ& q) {
  size_t m = 0;
  for (const CQ& cq : q.disjuncts) m = std::max(m, cq.body.size());
  return m;
}

inline size_t max_terms(const UCQ& q) {
  size_t m = 0;
  for (const CQ& cq : q.disjuncts) {
    std::set<Term> terms;
    for (const Atom& at : cq.body) terms.insert(at.args.begin(), at.args.end());
    m = std::max(m, terms.size());
  }
  return m;
}

inline std::set<std::string> quantified_vars(const CQ& cq) {
  std::set<std::string> vs;
  for (const Atom& at : cq.body)
    for (const Term& t : at.args)
      if (t.var) vs.insert(t.name);
  for (const std::string& h : cq.head) vs.erase(h);
  return vs;
}

// ---------------------------------------------------------------------------
// Occurring symbols

inline void collect_preds(const TBox& t, Signature& out) {
  for (const Axiom& ax : t.axioms) {
    auto add_c = [&](const BasicConcept& b) {
      if (b.existential)
        out.insert(role_pred(b.name));
      else
        out.insert(concept_pred(b.name));
    };
    if (auto* ci = std::get_if<ConceptIncl>(&ax)) { add_c(ci->lhs); add_c(ci->rhs); }
    else if (auto* cd = std::get_if<ConceptDisj>(&ax)) { add_c(cd->lhs); add_c(cd->rhs); }
    else if (auto* ri = std::get_if<RoleIncl>(&ax)) {
      out.insert(role_pred(ri->lhs.name));
      out.insert(role_pred(ri->rhs.name));
    } else if (auto* rd = std::get_if<RoleDisj>(&ax)) {
      out.insert(role_pred(rd->lhs.name));
      out.insert(role_pred(rd->rhs.name));
    } else if (auto* f = std::get_if<Funct>(&ax)) {
      out.insert(role_pred(f->role.name));
    }
  }
}

inline void collect_preds(const ABox& a, Signature& out) {
  for (const Assertion& as : a) out.insert(as.pred);
}

inline void collect_preds(const UCQ& q, Signature& out) {
  for (const CQ& cq : q.disjuncts)
    for (const Atom& at : cq.body) out.insert(at.pred);
}

inline Signature sigma_of(const TBox& t, const ABox& a, const UCQ& q) {
  Signature s;
  collect_preds(t, s);
  collect_preds(a, s);
  collect_preds(q, s);
  return s;
}

inline std::set<std::string> individuals_of(const ABox& a) {
  std::set<std::string> inds;
  for (const Assertion& as : a) inds.insert(as.args.begin(), as.args.end());
  return inds;
}

inline std::set<std::string> individuals_of(const UCQ& q) {
  std::set<std::string> inds;
  for (const CQ& cq : q.disjuncts)
    for (const Atom& at : cq.body)
      for (const Term& t : at.args)
        if (!t.var) inds.insert(t.name);
  return inds;
}

// ---------------------------------------------------------------------------
// Query Abduction Problems

struct QAP {
  TBox tbox;
  ABox abox;
  UCQ query;
  std::vector<std::string> tuple;
  Signature sigma;
  auto operator<=>(const QAP&) const = default;
};

inline std::set<std::string> individuals_of(const QAP& p) {
  std::set<std::string> inds = individuals_of(p.abox);
  auto qi = individuals_of(p.query);
  inds.insert(qi.begin(), qi.end());
  inds.insert(p.tuple.begin(), p.tuple.end());
  return inds;
}

inline void validate_qap(const QAP& p) {
  require_valid(p.tbox);
  require_safe(p.query);
  if (p.tuple.size() != p.query.disjuncts.front().head.size())
    throw ArityMismatch("tuple length differs from query arity");
  if (p.sigma.empty()) throw PreconditionViolated("signature must be nonempty");
  for (const std::string& c : individuals_of(p))
    if (is_anonymous(c))
      throw PreconditionViolated("anonymous individual in problem instance: " + c);
}

inline bool is_unrestricted(const QAP& p) {
  Signature s = sigma_of(p.tbox, p.abox, p.query);
  return std::includes(p.sigma.begin(), p.sigma.end(), s.begin(), s.end());
}

enum class Order { none, subset, card };

// ---------------------------------------------------------------------------
// Canonical forms
//
// CQs are identified up to renaming of quantified variables, ABoxes up to
// renaming of anonymous individuals. Both canonicalizations minimize the
// renamed value over all bijective renamings when the number of names is
// small, and fall back to an iterated first-occurrence relabeling otherwise.

namespace detail {

inline constexpr size_t exact_canon_limit = 7;

inline std::vector<std::string> fresh_names(size_t k, const std::string& stem,
                                            const std::set<std::string>& avoid) {
  std::vector<std::string> out;
  for (int i = 1; out.size() < k; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!avoid.count(cand)) out.push_back(cand);
  }
  return out;
}

template <typename Value, typename Rename>
Value minimize_over_renamings(const Value& v, std::vector<std::string> names,
                              const std::vector<std::string>& fresh, Rename rename) {
  std::optional<Value> best;
  std::vector<size_t> perm(names.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    std::map<std::string, std::string> m;
    for (size_t i = 0; i < names.size(); ++i) m[names[i]] = fresh[perm[i]];
    Value r = rename(v, m);
    if (!best || r < *best) best = std::move(r);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best ? *best : v;
}

inline CQ rename_cq(const CQ& cq, const std::map<std::string, std::string>& m) {
  CQ out;
  out.head = cq.head;
  for (Atom at : cq.body) {
    for (Term& t : at.args)
      if (t.var) {
        auto it = m.find(t.name);
        if (it != m.end()) t.name = it->second;
      }
    out.body.insert(std::move(at));
  }
  return out;
}

inline ABox rename_abox(const ABox& a, const std::map<std::string, std::string>& m) {
  ABox out;
  for (Assertion as : a) {
    for (std::string& arg : as.args) {
      auto it = m.find(arg);
      if (it != m.end()) arg = it->second;
    }
    out.insert(std::move(as));
  }
  return out;
}

// First-occurrence relabeling iterated to a fixpoint; used past the exact
// limit where enumerating every bijection is too expensive.
inline CQ heuristic_canonical_cq(const CQ& cq, const std::set<std::string>& qvars) {
  CQ cur = cq;
  for (size_t round = 0; round < qvars.size() + 2; ++round) {
    std::map<std::string, std::string> m;
    int next = 1;
    for (const Atom& at : cur.body)
      for (const Term& t : at.args) {
        bool is_head = std::find(cur.head.begin(), cur.head.end(), t.name) != cur.head.end();
        if (t.var && !is_head && !m.count(t.name)) {
          std::string cand;
          do {
            cand = "w" + std::to_string(next++);
          } while (std::find(cur.head.begin(), cur.head.end(), cand) != cur.head.end());
          m[t.name] = cand;
        }
      }
    CQ renamed = rename_cq(cur, m);
    if (renamed == cur) break;
    cur = renamed;
  }
  return cur;
}

}  // namespace detail

inline CQ canonical_cq(const CQ& cq) {
  std::set<std::string> qvars = quantified_vars(cq);
  if (qvars.empty()) return cq;
  if (qvars.size() > detail::exact_canon_limit)
    return detail::heuristic_canonical_cq(cq, qvars);
  std::vector<std::string> names(qvars.begin(), qvars.end());
  std::set<std::string> avoid(cq.head.begin(), cq.head.end());
  auto fresh = detail::fresh_names(names.size(), "w", avoid);
  return detail::minimize_over_renamings(cq, names, fresh, detail::rename_cq);
}

inline ABox canonical_abox(const ABox& a) {
  std::set<std::string> anons;
  for (const Assertion& as : a)
    for (const std::string& arg : as.args)
      if (is_anonymous(arg)) anons.insert(arg);
  if (anons.empty()) return a;
  std::vector<std::string> names(anons.begin(), anons.end());
  if (names.size() > detail::exact_canon_limit) {
    // first-occurrence relabeling, single pass
    std::map<std::string, std::string> m;
    int next = 1;
    for (const Assertion& as : a)
      for (const std::string& arg : as.args)
        if (is_anonymous(arg) && !m.count(arg))
          m[arg] = std::string(anon_prefix) + "a" + std::to_string(next++);
    return detail::rename_abox(a, m);
  }
  auto fresh = detail::fresh_names(names.size(), std::string(anon_prefix) + "a", {});
  return detail::minimize_over_renamings(a, names, fresh, detail::rename_abox);
}

// True when some injective renaming of sub's anonymous individuals into
// sup's maps sub to a subset of sup. Used for minimality checks modulo
// anonymous naming.
inline bool embeds_as_subset(const ABox& sub, const ABox& sup) {
  std::set<std::string> sub_anons, sup_anons;
  for (const Assertion& as : sub)
    for (const std::string& arg : as.args)
      if (is_anonymous(arg)) sub_anons.insert(arg);
  for (const Assertion& as : sup)
    for (const std::string& arg : as.args)
      if (is_anonymous(arg)) sup_anons.insert(arg);
  std::vector<std::string> from(sub_anons.begin(), sub_anons.end());
  std::vector<std::string> to(sup_anons.begin(), sup_anons.end());
  if (from.size() > to.size()) return false;
  if (from.empty())
    return std::includes(sup.begin(), sup.end(), sub.begin(), sub.end());
  // enumerate injective maps from 'from' into 'to'
  std::vector<bool> used(to.size(), false);
  struct Rec {
    const std::vector<std::string>& from;
    const std::vector<std::string>& to;
    const ABox& sub;
    const ABox& sup;
    std::vector<bool>& used;
    std::map<std::string, std::string> m;
    bool go(size_t i) {
      if (i == from.size()) {
        ABox renamed = detail::rename_abox(sub, m);
        return std::includes(sup.begin(), sup.end(), renamed.begin(), renamed.end());
      }
      for (size_t j = 0; j < to.size(); ++j) {
        if (used[j]) continue;
        used[j] = true;
        m[from[i]] = to[j];
        if (go(i + 1)) { used[j] = false; return true; }
        used[j] = false;
        m.erase(from[i]);
      }
      return false;
    }
  } rec{from, to, sub, sup, used, {}};
  return rec.go(0);
}

}  // namespace qx
