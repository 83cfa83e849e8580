#pragma once

// Perfect reformulation of a UCQ against a DL-Lite TBox: compiles the
// positive inclusions into the query so that evaluation over the bare ABox
// yields the certain answers.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qx/model.hpp"

namespace qx {

struct Reformulation {
  std::vector<CQ> disjuncts;  // canonical forms, sorted
  UCQ source_query;
  TBox source_tbox;
};

namespace detail {

// A variable is unbound ("don't care") when it occurs exactly once in the
// body and is not an answer variable.
inline std::set<std::string> dontcare_vars(const CQ& cq) {
  std::map<std::string, int> occ;
  for (const Atom& at : cq.body)
    for (const Term& t : at.args)
      if (t.var) occ[t.name]++;
  std::set<std::string> dc;
  for (const auto& [v, n] : occ) {
    if (n != 1) continue;
    if (std::find(cq.head.begin(), cq.head.end(), v) != cq.head.end()) continue;
    dc.insert(v);
  }
  return dc;
}

inline std::string fresh_var(const CQ& cq, int& counter) {
  std::set<std::string> used;
  for (const Atom& at : cq.body)
    for (const Term& t : at.args)
      if (t.var) used.insert(t.name);
  used.insert(cq.head.begin(), cq.head.end());
  std::string cand;
  do {
    cand = "_v" + std::to_string(++counter);
  } while (used.count(cand));
  return cand;
}

inline Atom concept_lhs_atom(const BasicConcept& lhs, const Term& t, const CQ& cq, int& counter) {
  if (!lhs.existential) return atom1(lhs.name, t);
  Term fresh = Term::variable(fresh_var(cq, counter));
  if (lhs.inverted) return atom2(lhs.name, fresh, t);
  return atom2(lhs.name, t, fresh);
}

}  // namespace detail

// One rewriting step of a single atom by a single positive inclusion, in the
// context of the CQ that owns the atom (needed to tell bound from unbound
// variables). Returns the rewritten atom, or nothing when inapplicable.
inline std::optional<Atom> atom_rewrite_step(const CQ& cq, const Atom& atom, const Axiom& ax) {
  std::set<std::string> dc = detail::dontcare_vars(cq);
  auto unbound = [&](const Term& t) { return t.var && dc.count(t.name); };
  int counter = 0;

  if (const ConceptIncl* ci = std::get_if<ConceptIncl>(&ax)) {
    if (!atom.pred.role) {
      if (!ci->rhs.existential && ci->rhs.name == atom.pred.name)
        return detail::concept_lhs_atom(ci->lhs, atom.args[0], cq, counter);
      return std::nullopt;
    }
    if (!ci->rhs.existential || ci->rhs.name != atom.pred.name) return std::nullopt;
    if (!ci->rhs.inverted && unbound(atom.args[1]))
      return detail::concept_lhs_atom(ci->lhs, atom.args[0], cq, counter);
    if (ci->rhs.inverted && unbound(atom.args[0]))
      return detail::concept_lhs_atom(ci->lhs, atom.args[1], cq, counter);
    return std::nullopt;
  }

  if (const RoleIncl* ri = std::get_if<RoleIncl>(&ax)) {
    if (!atom.pred.role || ri->rhs.name != atom.pred.name) return std::nullopt;
    // read the atom as a fact of the right-hand role, then emit the
    // left-hand role with matching orientation
    Term a = atom.args[0], b = atom.args[1];
    if (ri->rhs.inverted) std::swap(a, b);
    if (ri->lhs.inverted) return atom2(ri->lhs.name, b, a);
    return atom2(ri->lhs.name, a, b);
  }

  return std::nullopt;
}

// Unify two body atoms over the same predicate, dropping the duplicate.
// Only quantified variables may be renamed; where possible an unbound
// variable is mapped onto its partner, never the other way around.
inline std::optional<CQ> reduce_step(const CQ& cq, const Atom& a1, const Atom& a2) {
  if (a1 == a2 || a1.pred != a2.pred) return std::nullopt;
  if (!cq.body.count(a1) || !cq.body.count(a2)) return std::nullopt;
  std::set<std::string> dc = detail::dontcare_vars(cq);
  auto is_head = [&](const std::string& v) {
    return std::find(cq.head.begin(), cq.head.end(), v) != cq.head.end();
  };

  std::map<std::string, Term> sub;
  auto resolve = [&](Term t) {
    while (t.var && sub.count(t.name)) t = sub.at(t.name);
    return t;
  };
  for (size_t i = 0; i < a1.args.size(); ++i) {
    Term t1 = resolve(a1.args[i]);
    Term t2 = resolve(a2.args[i]);
    if (t1 == t2) continue;
    bool v1 = t1.var && !is_head(t1.name);
    bool v2 = t2.var && !is_head(t2.name);
    if (v1 && dc.count(t1.name)) sub[t1.name] = t2;
    else if (v2 && dc.count(t2.name)) sub[t2.name] = t1;
    else if (v1) sub[t1.name] = t2;
    else if (v2) sub[t2.name] = t1;
    else return std::nullopt;  // both rigid
  }
  if (sub.empty()) return std::nullopt;

  CQ out;
  out.head = cq.head;
  for (Atom at : cq.body) {
    for (Term& t : at.args) t = resolve(t);
    out.body.insert(std::move(at));
  }
  return out;
}

inline Reformulation perfect_reformulation(const UCQ& query, const TBox& tbox) {
  require_valid(tbox);
  require_safe(query);

  std::set<CQ> seen;
  std::vector<CQ> frontier;
  for (const CQ& cq : query.disjuncts) {
    CQ c = canonical_cq(cq);
    if (seen.insert(c).second) frontier.push_back(c);
  }

  std::vector<Axiom> positive;
  for (const Axiom& ax : tbox.axioms)
    if (std::holds_alternative<ConceptIncl>(ax) || std::holds_alternative<RoleIncl>(ax))
      positive.push_back(ax);

  while (!frontier.empty()) {
    CQ cq = frontier.back();
    frontier.pop_back();

    for (const Atom& at : cq.body)
      for (const Axiom& ax : positive)
        if (auto r = atom_rewrite_step(cq, at, ax)) {
          CQ next = cq;
          next.body.erase(at);
          next.body.insert(*r);
          CQ c = canonical_cq(next);
          if (seen.insert(c).second) frontier.push_back(c);
        }

    for (const Atom& a1 : cq.body)
      for (const Atom& a2 : cq.body)
        if (a1 < a2)
          if (auto r = reduce_step(cq, a1, a2)) {
            CQ c = canonical_cq(*r);
            if (seen.insert(c).second) frontier.push_back(c);
          }
  }

  Reformulation out;
  out.disjuncts.assign(seen.begin(), seen.end());
  out.source_query = query;
  out.source_tbox = tbox;
  return out;
}

}  // namespace qx
