#pragma once

// Consistency checking for DL-Lite ontologies, with and without the unique
// name assumption. Entailment of a single assertion lives in evaluator.hpp
// because it runs a rewritten query.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qx/model.hpp"

namespace qx {

// Disjointness axioms propagated backwards through the positive inclusions,
// plus the functionality axioms. The positive closures are kept around since
// the membership computation needs them anyway.
struct NegativeClosure {
  std::set<std::pair<BasicConcept, BasicConcept>> concept_disj;  // symmetric
  std::set<std::pair<RoleExpr, RoleExpr>> role_disj;             // symmetric
  std::set<RoleExpr> functionals;
  std::set<std::pair<BasicConcept, BasicConcept>> concept_subs;  // reflexive-transitive
  std::set<std::pair<RoleExpr, RoleExpr>> role_subs;             // reflexive-transitive
  std::set<BasicConcept> unsat;  // concepts no element may satisfy
};

namespace detail {

template <typename T>
void transitive_reflexive_close(std::set<std::pair<T, T>>& rel, const std::set<T>& universe) {
  for (const T& x : universe) rel.insert({x, x});
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<T, T>> add;
    for (const auto& [a, b] : rel)
      for (const auto& [c, d] : rel)
        if (b == c && !rel.count({a, d})) add.push_back({a, d});
    for (auto& p : add) changed |= rel.insert(std::move(p)).second;
  }
}

}  // namespace detail

inline NegativeClosure negative_closure(const TBox& t) {
  require_valid(t);
  NegativeClosure nc;

  std::set<RoleExpr> roles;
  std::set<BasicConcept> concepts;
  for (const Axiom& ax : t.axioms) {
    auto note_c = [&](const BasicConcept& b) {
      concepts.insert(b);
      if (b.existential) {
        roles.insert(b.role());
        roles.insert(b.role().inverse());
      }
    };
    auto note_r = [&](const RoleExpr& r) {
      roles.insert(r);
      roles.insert(r.inverse());
    };
    if (auto* ci = std::get_if<ConceptIncl>(&ax)) { note_c(ci->lhs); note_c(ci->rhs); }
    else if (auto* cd = std::get_if<ConceptDisj>(&ax)) { note_c(cd->lhs); note_c(cd->rhs); }
    else if (auto* ri = std::get_if<RoleIncl>(&ax)) { note_r(ri->lhs); note_r(ri->rhs); }
    else if (auto* rd = std::get_if<RoleDisj>(&ax)) { note_r(rd->lhs); note_r(rd->rhs); }
    else if (auto* f = std::get_if<Funct>(&ax)) { note_r(f->role); nc.functionals.insert(f->role); }
  }
  for (const RoleExpr& r : roles) {
    concepts.insert(BasicConcept::exists(r));
    concepts.insert(BasicConcept::exists(r.inverse()));
  }

  for (const Axiom& ax : t.axioms)
    if (auto* ri = std::get_if<RoleIncl>(&ax)) {
      nc.role_subs.insert({ri->lhs, ri->rhs});
      nc.role_subs.insert({ri->lhs.inverse(), ri->rhs.inverse()});
    }
  detail::transitive_reflexive_close(nc.role_subs, roles);

  for (const Axiom& ax : t.axioms)
    if (auto* ci = std::get_if<ConceptIncl>(&ax)) nc.concept_subs.insert({ci->lhs, ci->rhs});
  // a role inclusion also constrains the domains and ranges
  for (const auto& [r1, r2] : nc.role_subs)
    nc.concept_subs.insert({BasicConcept::exists(r1), BasicConcept::exists(r2)});
  detail::transitive_reflexive_close(nc.concept_subs, concepts);

  // B1 subsumed by X, B2 subsumed by Y, X disjoint Y  =>  B1 disjoint B2
  for (const Axiom& ax : t.axioms) {
    if (auto* cd = std::get_if<ConceptDisj>(&ax)) {
      for (const auto& [b1, x] : nc.concept_subs)
        for (const auto& [b2, y] : nc.concept_subs)
          if ((x == cd->lhs && y == cd->rhs) || (x == cd->rhs && y == cd->lhs)) {
            nc.concept_disj.insert({b1, b2});
            nc.concept_disj.insert({b2, b1});
          }
    } else if (auto* rd = std::get_if<RoleDisj>(&ax)) {
      for (const auto& [r1, x] : nc.role_subs)
        for (const auto& [r2, y] : nc.role_subs) {
          bool hit = (x == rd->lhs && y == rd->rhs) || (x == rd->rhs && y == rd->lhs) ||
                     (x == rd->lhs.inverse() && y == rd->rhs.inverse()) ||
                     (x == rd->rhs.inverse() && y == rd->lhs.inverse());
          if (hit) {
            nc.role_disj.insert({r1, r2});
            nc.role_disj.insert({r2, r1});
          }
        }
    }
  }

  // Unsatisfiable concepts. A clash need not surface on a named individual:
  // membership in an existential forces an anonymous witness, and that
  // witness (or one of its own descendants) may be contradictory on its own.
  auto role_clashes = [&](const RoleExpr& r) {
    for (const auto& [r1, r2] : nc.role_disj)
      if (nc.role_subs.count({r, r1}) && nc.role_subs.count({r, r2})) return true;
    return false;
  };
  for (const BasicConcept& b : concepts) {
    for (const auto& [b1, b2] : nc.concept_disj)
      if (nc.concept_subs.count({b, b1}) && nc.concept_subs.count({b, b2}))
        nc.unsat.insert(b);
    for (const auto& [x, y] : nc.concept_subs)
      if (x == b && y.existential && role_clashes(y.role())) nc.unsat.insert(b);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const BasicConcept& b : concepts) {
      if (nc.unsat.count(b)) continue;
      for (const auto& [x, y] : nc.concept_subs)
        if (x == b && y.existential &&
            nc.unsat.count(BasicConcept::exists(y.role().inverse()))) {
          changed = nc.unsat.insert(b).second;
          break;
        }
    }
  }
  return nc;
}

namespace detail {

// Role facts closed under the role inclusions. Keyed by role expression in
// both orientations.
inline std::map<RoleExpr, std::set<std::pair<std::string, std::string>>> derived_role_facts(
    const NegativeClosure& nc, const ABox& a) {
  std::map<RoleExpr, std::set<std::pair<std::string, std::string>>> facts;
  auto add = [&](const RoleExpr& r, const std::string& x, const std::string& y) {
    facts[r].insert({x, y});
    facts[r.inverse()].insert({y, x});
  };
  for (const Assertion& as : a) {
    if (!as.pred.role) continue;
    RoleExpr base{as.pred.name, false};
    add(base, as.args[0], as.args[1]);
    for (const auto& [r1, r2] : nc.role_subs) {
      if (r1 == base) add(r2, as.args[0], as.args[1]);
      if (r1 == base.inverse()) add(r2, as.args[1], as.args[0]);
    }
  }
  return facts;
}

// Basic-concept memberships of each individual, closed upward under the
// positive inclusions.
inline std::map<std::string, std::set<BasicConcept>> derived_memberships(
    const NegativeClosure& nc, const ABox& a,
    const std::map<RoleExpr, std::set<std::pair<std::string, std::string>>>& facts) {
  std::map<std::string, std::set<BasicConcept>> mem;
  for (const Assertion& as : a)
    if (!as.pred.role) mem[as.args[0]].insert(BasicConcept::atomic(as.pred.name));
  for (const auto& [r, pairs] : facts)
    for (const auto& [x, y] : pairs) mem[x].insert(BasicConcept::exists(r));
  for (auto& [ind, bs] : mem) {
    std::set<BasicConcept> closed = bs;
    for (const BasicConcept& b : bs)
      for (const auto& [b1, b2] : nc.concept_subs)
        if (b1 == b) closed.insert(b2);
    bs = std::move(closed);
  }
  return mem;
}

inline bool clash_free(const NegativeClosure& nc, const ABox& a) {
  auto facts = derived_role_facts(nc, a);
  auto mem = derived_memberships(nc, a, facts);
  for (const auto& [ind, bs] : mem) {
    for (const BasicConcept& b : bs)
      if (nc.unsat.count(b)) return false;
    for (const auto& [b1, b2] : nc.concept_disj)
      if (bs.count(b1) && bs.count(b2)) return false;
  }
  for (const auto& [r1, r2] : nc.role_disj) {
    auto it1 = facts.find(r1);
    auto it2 = facts.find(r2);
    if (it1 == facts.end() || it2 == facts.end()) continue;
    for (const auto& p : it1->second)
      if (it2->second.count(p)) return false;
  }
  // functional roles cannot be specialized, so only asserted facts matter;
  // the derived fact set for them coincides with the asserted one
  for (const RoleExpr& f : nc.functionals) {
    auto it = facts.find(f);
    if (it == facts.end()) continue;
    std::map<std::string, std::string> succ;
    for (const auto& [x, y] : it->second) {
      auto [pos, fresh] = succ.emplace(x, y);
      if (!fresh && pos->second != y) return false;
    }
  }
  return true;
}

}  // namespace detail

inline bool is_consistent_una(const TBox& t, const ABox& a) {
  NegativeClosure nc = negative_closure(t);
  return detail::clash_free(nc, a);
}

inline bool is_consistent_una(const NegativeClosure& nc, const ABox& a) {
  return detail::clash_free(nc, a);
}

// Without the UNA, a functionality fork R(a,b), R(a,c) forces b and c to
// denote the same object. Merge to a fixpoint with a union-find, then check
// the quotient under the UNA.
inline bool is_consistent_nouna(const TBox& t, const ABox& a) {
  NegativeClosure nc = negative_closure(t);
  std::map<std::string, std::string> parent;
  for (const std::string& ind : individuals_of(a)) parent[ind] = ind;
  auto find = [&](std::string x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  auto unite = [&](const std::string& x, const std::string& y) {
    std::string rx = find(x), ry = find(y);
    if (rx == ry) return false;
    // deterministic representative: lexicographically least
    if (ry < rx) std::swap(rx, ry);
    parent[ry] = rx;
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const RoleExpr& f : nc.functionals) {
      std::map<std::string, std::string> succ;
      for (const Assertion& as : a) {
        if (!as.pred.role || as.pred.name != f.name) continue;
        std::string x = find(f.inverted ? as.args[1] : as.args[0]);
        std::string y = find(f.inverted ? as.args[0] : as.args[1]);
        auto [pos, fresh] = succ.emplace(x, y);
        if (!fresh && pos->second != y) {
          changed |= unite(pos->second, y);
          succ[x] = find(y);
        }
      }
    }
  }

  ABox quotient;
  for (Assertion as : a) {
    for (std::string& arg : as.args) arg = find(arg);
    quotient.insert(std::move(as));
  }
  return detail::clash_free(nc, quotient);
}

}  // namespace qx
