#pragma once

// Problem transformers between the four decision problems (existence,
// recognition, relevance, necessity) and query non-emptiness. Pure
// QAP-to-QAP rewritings; the verdict-level wrapper is_query_nonempty is
// defined with the abduction engine.

#include <set>
#include <string>
#include <vector>

#include "qx/evaluator.hpp"
#include "qx/model.hpp"
#include "qx/reasoner.hpp"

namespace qx {

// Reserved prefix for mechanically fresh symbols; rejected by the parsers.
inline constexpr const char* fresh_prefix = "__qx_";

namespace detail {

inline std::string fresh_symbol(const std::string& stem, const std::set<std::string>& used) {
  for (int i = 1;; ++i) {
    std::string cand = std::string(fresh_prefix) + stem + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

inline std::set<std::string> pred_names(const QAP& p) {
  std::set<std::string> names;
  for (const Pred& pr : sigma_of(p.tbox, p.abox, p.query)) names.insert(pr.name);
  for (const Pred& pr : p.sigma) names.insert(pr.name);
  return names;
}

}  // namespace detail

// p has no explanation  <=>  the fresh assertion is necessary for the result.
inline std::pair<QAP, Assertion> nonexist_to_nec(const QAP& p) {
  std::string phi = detail::fresh_symbol("p", detail::pred_names(p));
  std::string d = detail::fresh_symbol("c", individuals_of(p));
  QAP out = p;
  out.sigma.insert(concept_pred(phi));
  return {out, assert1(phi, d)};
}

// Whether the disjointness construction of nec_to_nonexist is sound for
// this assertion. It guards alpha with a fresh predicate disjoint from
// alpha's; that guard also clashes with solutions that merely ENTAIL alpha
// without containing it, so the contract breaks whenever an entailed copy of
// alpha can arise some other way: derivable from the ABox already, or
// insertable through another abducible predicate below alpha's, or through
// alpha's own inverse.
inline bool nec_reduction_applies(const QAP& p, const Assertion& alpha) {
  if (entails_assertion(p.tbox, p.abox, alpha)) return false;
  NegativeClosure nc = negative_closure(p.tbox);
  if (alpha.pred.role) {
    RoleExpr r{alpha.pred.name, false};
    if (nc.role_subs.count({r.inverse(), r})) return false;
    for (const Pred& s : p.sigma) {
      if (!s.role || s.name == alpha.pred.name) continue;
      RoleExpr sr{s.name, false};
      if (nc.role_subs.count({sr, r}) || nc.role_subs.count({sr.inverse(), r}))
        return false;
    }
  } else {
    BasicConcept c = BasicConcept::atomic(alpha.pred.name);
    for (const Pred& s : p.sigma) {
      if (s.role) {
        RoleExpr sr{s.name, false};
        if (nc.concept_subs.count({BasicConcept::exists(sr), c}) ||
            nc.concept_subs.count({BasicConcept::exists(sr.inverse()), c}))
          return false;
      } else if (s.name != alpha.pred.name &&
                 nc.concept_subs.count({BasicConcept::atomic(s.name), c})) {
        return false;
      }
    }
  }
  return true;
}

// alpha necessary for p  <=>  the result has no explanation, provided
// nec_reduction_applies holds. Refused when alpha's role is functional or
// inverse functional: the subrole axiom the construction needs would
// specialize it.
inline QAP nec_to_nonexist(const QAP& p, const Assertion& alpha) {
  if (!in_signature(p.sigma, alpha.pred))
    throw NotAbducible("assertion predicate is not abducible: " + alpha.pred.name);
  if (alpha.pred.role) {
    for (const Axiom& ax : p.tbox.axioms)
      if (auto* f = std::get_if<Funct>(&ax))
        if (f->role.name == alpha.pred.name)
          throw FunctionalityConflict("cannot specialize functional role " + alpha.pred.name);
  }
  std::set<std::string> used = detail::pred_names(p);
  std::string phi_sub = detail::fresh_symbol("p", used);
  used.insert(phi_sub);
  std::string phi_bar = detail::fresh_symbol("p", used);

  QAP out = p;
  if (alpha.pred.role) {
    RoleExpr phi{alpha.pred.name, false};
    out.tbox.axioms.insert(RoleIncl{RoleExpr{phi_sub, false}, phi});
    out.tbox.axioms.insert(RoleDisj{RoleExpr{phi_bar, false}, phi});
    out.sigma.erase(alpha.pred);
    out.sigma.insert(role_pred(phi_sub));
    out.abox.insert(assert2(phi_bar, alpha.args[0], alpha.args[1]));
  } else {
    BasicConcept phi = BasicConcept::atomic(alpha.pred.name);
    out.tbox.axioms.insert(ConceptIncl{BasicConcept::atomic(phi_sub), phi});
    out.tbox.axioms.insert(ConceptDisj{BasicConcept::atomic(phi_bar), phi});
    out.sigma.erase(alpha.pred);
    out.sigma.insert(concept_pred(phi_sub));
    out.abox.insert(assert1(phi_bar, alpha.args[0]));
  }
  return out;
}

// alpha relevant for p  <=>  the result has an explanation.
inline QAP rel_to_exist(const QAP& p, const Assertion& alpha) {
  if (!in_signature(p.sigma, alpha.pred))
    throw NotAbducible("assertion predicate is not abducible: " + alpha.pred.name);
  QAP out = p;
  out.abox.insert(alpha);
  return out;
}

// p has an explanation  <=>  the returned assertion is relevant for p.
// Picks the least abducible predicate and fresh arguments.
inline std::pair<QAP, Assertion> exist_to_rel(const QAP& p) {
  // The least abducible predicate that is satisfiable with the TBox. An
  // unsatisfiable predicate (one whose every assertion clashes with T alone)
  // can never occur in an explanation, so it cannot witness solvability.
  std::set<std::string> used = individuals_of(p);
  auto make_alpha = [&](const Pred& phi) {
    Assertion alpha;
    alpha.pred = phi;
    std::set<std::string> taken = used;
    for (int i = 0; i < phi.arity(); ++i) {
      std::string d = detail::fresh_symbol("c", taken);
      taken.insert(d);
      alpha.args.push_back(d);
    }
    return alpha;
  };
  for (const Pred& phi : p.sigma) {
    Assertion alpha = make_alpha(phi);
    if (is_consistent_una(p.tbox, ABox{alpha})) return {p, alpha};
  }
  // Every abducible predicate is unsatisfiable: no assertion is relevant.
  // Return the first candidate anyway; callers comparing against existence
  // must treat this degenerate case separately (only the empty ABox can
  // explain anything here).
  return {p, make_alpha(*p.sigma.begin())};
}

// Query non-emptiness for a signature, phrased as explanation existence
// over the empty ABox. Boolean queries are taken as they are; an instance
// query asks about a fresh individual; a general n-ary query is closed off
// with a fresh concept constraining every answer variable.
inline QAP nonemptiness_to_exist(const TBox& tbox, const UCQ& query, const Signature& sigma) {
  require_valid(tbox);
  require_safe(query);
  size_t arity = query.disjuncts.front().head.size();
  if (arity == 0) return QAP{tbox, {}, query, {}, sigma};

  std::set<std::string> used_inds = individuals_of(query);
  if (is_instance_query(query)) {
    std::string a = detail::fresh_symbol("c", used_inds);
    return QAP{tbox, {}, query, {a}, sigma};
  }

  std::set<std::string> used_preds;
  Signature all = sigma_of(tbox, {}, query);
  for (const Pred& pr : all) used_preds.insert(pr.name);
  for (const Pred& pr : sigma) used_preds.insert(pr.name);
  std::string n = detail::fresh_symbol("p", used_preds);

  UCQ closed;
  for (CQ cq : query.disjuncts) {
    for (const std::string& v : cq.head) cq.body.insert(atom1(n, Term::variable(v)));
    cq.head.clear();
    closed.disjuncts.push_back(std::move(cq));
  }
  Signature sigma2 = sigma;
  sigma2.insert(concept_pred(n));
  return QAP{tbox, {}, closed, {}, sigma2};
}

// Defined alongside the abduction engine.
inline bool is_query_nonempty(const TBox& tbox, const UCQ& query, const Signature& sigma);

}  // namespace qx
