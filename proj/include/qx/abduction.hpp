#pragma once

// The explanation engine. Explanations are found by instantiating CQs from
// the perfect reformulation of the query: whenever an explanation exists, a
// minimal one arises as the non-asserted part of such an instantiation, so a
// cost-bounded match search over "facts found in the ABox or added to the
// explanation" covers every decision problem.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qx/evaluator.hpp"
#include "qx/model.hpp"
#include "qx/reasoner.hpp"
#include "qx/reductions.hpp"
#include "qx/rewriter.hpp"

namespace qx {

struct InstantiationMap {
  std::map<std::string, std::string> bindings;  // variable -> individual
  auto operator<=>(const InstantiationMap&) const = default;
};

struct Provenance {
  size_t disjunct_index = 0;
  InstantiationMap xi;
};

struct Explanation {
  ABox assertions;
  std::optional<Provenance> provenance;
};

// ---------------------------------------------------------------------------
// Instantiations (tuple-directed groundings of one CQ)

namespace detail {

inline std::vector<std::string> qvars_in_order(const CQ& cq) {
  std::set<std::string> qv = quantified_vars(cq);
  std::vector<std::string> order;
  for (const Atom& at : cq.body)
    for (const Term& t : at.args)
      if (t.var && qv.count(t.name) &&
          std::find(order.begin(), order.end(), t.name) == order.end())
        order.push_back(t.name);
  return order;
}

inline ABox ground_body(const CQ& cq, const std::map<std::string, std::string>& bind) {
  ABox out;
  for (const Atom& at : cq.body) {
    Assertion as;
    as.pred = at.pred;
    for (const Term& t : at.args) as.args.push_back(t.var ? bind.at(t.name) : t.name);
    out.insert(std::move(as));
  }
  return out;
}

}  // namespace detail

// Every grounding of cq that sends the answer variables to the tuple and the
// quantified variables into the pool or to fresh anonymous individuals, one
// representative per renaming of the anonymous ones.
inline std::vector<std::pair<InstantiationMap, ABox>> instantiations(
    const CQ& cq, const std::vector<std::string>& tuple, const std::set<std::string>& pool) {
  if (tuple.size() != cq.head.size())
    throw ArityMismatch("tuple length differs from query arity");

  std::vector<std::string> qvars = detail::qvars_in_order(cq);
  std::set<std::string> context = pool;
  for (const std::string& c : tuple) context.insert(c);
  for (const Atom& at : cq.body)
    for (const Term& t : at.args)
      if (!t.var) context.insert(t.name);
  std::vector<std::string> values(pool.begin(), pool.end());
  for (size_t i = 0; i < qvars.size(); ++i) {
    std::string a = fresh_anonymous(context);
    context.insert(a);
    values.push_back(a);
  }

  std::map<std::string, std::string> base;
  for (size_t i = 0; i < tuple.size(); ++i) base[cq.head[i]] = tuple[i];

  std::vector<std::pair<InstantiationMap, ABox>> out;
  std::set<InstantiationMap> seen;
  std::vector<size_t> odo(qvars.size(), 0);
  while (true) {
    std::map<std::string, std::string> bind = base;
    for (size_t i = 0; i < qvars.size(); ++i) bind[qvars[i]] = values[odo[i]];

    // canonical representative: anonymous targets renamed by first use
    std::map<std::string, std::string> ren;
    for (const std::string& v : qvars) {
      const std::string& val = bind[v];
      if (is_anonymous(val) && !ren.count(val)) {
        std::set<std::string> ctx = pool;
        for (const auto& [o, r] : ren) ctx.insert(r);
        ren[val] = fresh_anonymous(ctx);
      }
    }
    for (auto& [v, val] : bind)
      if (ren.count(val)) val = ren.at(val);

    InstantiationMap xi{bind};
    if (seen.insert(xi).second) out.emplace_back(xi, detail::ground_body(cq, bind));

    size_t i = 0;
    for (; i < odo.size(); ++i) {
      if (++odo[i] < values.size()) break;
      odo[i] = 0;
    }
    if (i == odo.size()) break;
  }
  return out;
}

// Quantified variables to pairwise distinct fresh anonymous individuals.
inline ABox direct_instantiation(const CQ& cq, const std::vector<std::string>& tuple,
                                 const std::set<std::string>& context_individuals) {
  if (tuple.size() != cq.head.size())
    throw ArityMismatch("tuple length differs from query arity");
  std::map<std::string, std::string> bind;
  for (size_t i = 0; i < tuple.size(); ++i) bind[cq.head[i]] = tuple[i];
  std::set<std::string> context = context_individuals;
  for (const std::string& c : tuple) context.insert(c);
  for (const Atom& at : cq.body)
    for (const Term& t : at.args)
      if (!t.var) context.insert(t.name);
  for (const std::string& v : detail::qvars_in_order(cq)) {
    std::string a = fresh_anonymous(context);
    context.insert(a);
    bind[v] = a;
  }
  return detail::ground_body(cq, bind);
}

// ---------------------------------------------------------------------------
// Candidate search
//
// A candidate is the non-asserted part E of an instantiated reformulation
// disjunct. The search matches atoms against the ABox where possible and
// otherwise inserts ground abducible assertions, up to a size budget, with
// fresh anonymous individuals introduced in canonical order.

namespace detail {

struct Candidate {
  ABox e;
  size_t disjunct_index = 0;
  InstantiationMap xi;
};

struct CoreSearch {
  const QAP& p;
  const FiniteInterpretation& db;
  size_t bound;
  std::vector<std::string> pool;   // named individuals of the problem
  std::vector<std::string> anons;  // canonical fresh anonymous individuals
  std::vector<Candidate>& sink;
  size_t disjunct_index = 0;

  std::map<std::string, std::string> binding;
  std::vector<Assertion> inserted;
  size_t anons_used = 0;

  std::optional<std::string> value(const Term& t) const {
    if (!t.var) return t.name;
    auto it = binding.find(t.name);
    return it == binding.end() ? std::nullopt : std::make_optional(it->second);
  }

  bool in_inserted(const Assertion& as) const {
    return std::find(inserted.begin(), inserted.end(), as) != inserted.end();
  }

  // choices for one atom: ABox matches, matches against already inserted
  // assertions, and fresh insertions
  struct Choice {
    std::map<std::string, std::string> ext;
    std::optional<Assertion> insert;  // set when the atom is added to E
  };

  std::vector<Choice> choices(const Atom& at) const {
    std::vector<Choice> out;
    auto try_fact = [&](const std::vector<std::string>& fact_args, bool from_abox) {
      std::map<std::string, std::string> ext;
      for (size_t i = 0; i < at.args.size(); ++i) {
        auto v = value(at.args[i]);
        if (v) {
          if (*v != fact_args[i]) return;
        } else {
          auto it = ext.find(at.args[i].name);
          if (it != ext.end()) {
            if (it->second != fact_args[i]) return;
          } else {
            ext[at.args[i].name] = fact_args[i];
          }
        }
      }
      (void)from_abox;
      out.push_back(Choice{std::move(ext), std::nullopt});
    };
    if (!at.pred.role) {
      for (const std::string& e : concept_ext(db, at.pred.name)) try_fact({e}, true);
    } else {
      for (const auto& [x, y] : role_ext(db, at.pred.name)) try_fact({x, y}, true);
    }
    for (const Assertion& as : inserted)
      if (as.pred == at.pred) try_fact(as.args, false);

    if (inserted.size() < bound && in_signature(p.sigma, at.pred)) {
      // enumerate assignments of the unbound variables; unused anonymous
      // individuals are interchangeable, so only the next one is offered
      std::vector<std::string> unbound;
      for (const Term& t : at.args)
        if (t.var && !binding.count(t.name) &&
            std::find(unbound.begin(), unbound.end(), t.name) == unbound.end())
          unbound.push_back(t.name);
      std::vector<std::map<std::string, std::string>> exts{{}};
      for (const std::string& v : unbound) {
        std::vector<std::map<std::string, std::string>> next;
        for (const auto& ext : exts) {
          size_t new_in_ext = 0;
          for (const auto& [ev, eval] : ext)
            if (is_anonymous(eval)) {
              size_t idx = 0;
              while (anons[idx] != eval) ++idx;
              if (idx + 1 > anons_used) new_in_ext = std::max(new_in_ext, idx + 1 - anons_used);
            }
          size_t avail = std::min(anons.size(), anons_used + new_in_ext + 1);
          for (const std::string& c : pool) {
            auto e2 = ext;
            e2[v] = c;
            next.push_back(std::move(e2));
          }
          for (size_t i = 0; i < avail; ++i) {
            auto e2 = ext;
            e2[v] = anons[i];
            next.push_back(std::move(e2));
          }
        }
        exts = std::move(next);
      }
      for (const auto& ext : exts) {
        Assertion as;
        as.pred = at.pred;
        bool ok = true;
        for (const Term& t : at.args) {
          auto v = value(t);
          std::string val = v ? *v : ext.at(t.name);
          as.args.push_back(val);
        }
        // already satisfied by the ABox or by E: covered by the match cases
        bool in_abox = !at.pred.role
                           ? concept_ext(db, at.pred.name).count(as.args[0]) > 0
                           : role_ext(db, at.pred.name).count({as.args[0], as.args[1]}) > 0;
        if (in_abox || in_inserted(as)) ok = false;
        if (ok) out.push_back(Choice{ext, std::move(as)});
      }
    }
    return out;
  }

  void run(std::vector<Atom> remaining) {
    if (remaining.empty()) {
      Candidate c;
      c.e = ABox(inserted.begin(), inserted.end());
      c.disjunct_index = disjunct_index;
      c.xi = InstantiationMap{binding};
      sink.push_back(std::move(c));
      return;
    }
    size_t best = 0, best_count = SIZE_MAX;
    std::vector<std::vector<Choice>> all(remaining.size());
    for (size_t i = 0; i < remaining.size(); ++i) {
      all[i] = choices(remaining[i]);
      if (all[i].size() < best_count) {
        best_count = all[i].size();
        best = i;
      }
      if (best_count == 0) return;
    }
    Atom chosen = remaining[best];
    std::vector<Choice> opts = std::move(all[best]);
    remaining.erase(remaining.begin() + best);
    for (const Choice& ch : opts) {
      size_t saved_anons = anons_used;
      for (const auto& [v, e] : ch.ext) {
        binding[v] = e;
        if (is_anonymous(e)) {
          size_t idx = 0;
          while (anons[idx] != e) ++idx;
          anons_used = std::max(anons_used, idx + 1);
        }
      }
      if (ch.insert) inserted.push_back(*ch.insert);
      run(remaining);
      if (ch.insert) inserted.pop_back();
      for (const auto& [v, e] : ch.ext) binding.erase(v);
      anons_used = saved_anons;
    }
  }
};

inline std::vector<Candidate> search_candidates(const QAP& p, const Reformulation& ref,
                                                size_t bound) {
  FiniteInterpretation db = db_of(p.abox);
  std::set<std::string> pool_set = individuals_of(p);
  std::vector<std::string> pool(pool_set.begin(), pool_set.end());

  std::vector<Candidate> out;
  for (size_t d = 0; d < ref.disjuncts.size(); ++d) {
    const CQ& cq = ref.disjuncts[d];
    size_t k = quantified_vars(cq).size();
    std::set<std::string> ctx = pool_set;
    std::vector<std::string> anons;
    for (size_t i = 0; i < k; ++i) {
      std::string a = fresh_anonymous(ctx);
      ctx.insert(a);
      anons.push_back(a);
    }
    CoreSearch cs{p, db, bound, pool, anons, out, d, {}, {}, 0};
    for (size_t i = 0; i < p.tuple.size(); ++i) cs.binding[cq.head[i]] = p.tuple[i];
    std::vector<Atom> atoms(cq.body.begin(), cq.body.end());
    cs.run(atoms);
  }
  return out;
}

// Candidates that keep the ontology consistent, canonically named and
// deduplicated. Certainty of the tuple holds by construction: the
// instantiated disjunct matches the extended ABox.
inline std::set<ABox> passing_cores(const QAP& p, const Reformulation& ref, size_t bound) {
  std::set<ABox> seen, passing;
  NegativeClosure nc = negative_closure(p.tbox);
  for (const Candidate& c : search_candidates(p, ref, bound)) {
    ABox canon = canonical_abox(c.e);
    if (!seen.insert(canon).second) continue;
    ABox ae = p.abox;
    ae.insert(canon.begin(), canon.end());
    if (is_consistent_una(nc, ae)) passing.insert(canon);
  }
  return passing;
}

// Smallest explanation size, found by iterative deepening. Empty when the
// problem has no explanation at all.
inline std::optional<size_t> min_explanation_size(const QAP& p, const Reformulation& ref) {
  for (size_t b = 0; b <= max_atoms(p.query); ++b) {
    std::set<ABox> pass = passing_cores(p, ref, b);
    if (!pass.empty()) {
      size_t m = SIZE_MAX;
      for (const ABox& e : pass) m = std::min(m, e.size());
      return m;
    }
  }
  return std::nullopt;
}

// Full Def-3.1-style check on an arbitrary ABox (not limited to candidates).
inline bool explanation_checks(const QAP& p, const Reformulation& ref, const ABox& e) {
  if (!is_sigma_abox(e, p.sigma)) return false;
  ABox ae = p.abox;
  ae.insert(e.begin(), e.end());
  if (!is_consistent_una(p.tbox, ae)) return false;
  return evaluate(ref, db_of(ae)).count(p.tuple) > 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Decision problems

inline std::optional<Explanation> exists_explanation(const QAP& p) {
  validate_qap(p);
  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  NegativeClosure nc = negative_closure(p.tbox);
  for (size_t b = 0; b <= max_atoms(p.query); ++b) {
    std::vector<detail::Candidate> cands = detail::search_candidates(p, ref, b);
    const detail::Candidate* best = nullptr;
    ABox best_canon;
    for (const detail::Candidate& c : cands) {
      ABox canon = canonical_abox(c.e);
      if (best && (canon.size() > best_canon.size() ||
                   (canon.size() == best_canon.size() && !(canon < best_canon))))
        continue;
      ABox ae = p.abox;
      ae.insert(canon.begin(), canon.end());
      if (!is_consistent_una(nc, ae)) continue;
      best = &c;
      best_canon = std::move(canon);
    }
    if (best)
      return Explanation{best_canon, Provenance{best->disjunct_index, best->xi}};
  }
  return std::nullopt;
}

inline bool recognize(const QAP& p, const ABox& e, Order order);

inline bool has_subexpl(const QAP& p, const ABox& e) {
  validate_qap(p);
  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  if (!detail::explanation_checks(p, ref, e))
    throw NotAnExplanation("the given ABox is not an explanation");
  std::vector<Assertion> items(e.begin(), e.end());
  if (items.size() > 25) throw BudgetTooLarge("too many subsets to enumerate");
  for (uint64_t mask = 0; mask + 1 < (uint64_t(1) << items.size()); ++mask) {
    ABox sub;
    for (size_t i = 0; i < items.size(); ++i)
      if (mask & (uint64_t(1) << i)) sub.insert(items[i]);
    if (detail::explanation_checks(p, ref, sub)) return true;
  }
  return false;
}

inline bool no_smaller(const QAP& p, size_t n) {
  validate_qap(p);
  if (n == 0) return true;
  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  std::optional<size_t> m = detail::min_explanation_size(p, ref);
  return !(m && *m < n);
}

inline bool recognize(const QAP& p, const ABox& e, Order order) {
  validate_qap(p);
  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  if (!detail::explanation_checks(p, ref, e)) return false;
  if (order == Order::none) return true;
  if (order == Order::card) return no_smaller(p, e.size());
  return !has_subexpl(p, e);
}

// Explanation of size exactly n avoiding alpha / containing alpha. The
// search space follows the canonical-candidate bounds, so sizes above
// max_atoms of the query are out of reach by construction.
inline bool size_out(const QAP& p, const Assertion& alpha, size_t n) {
  validate_qap(p);
  if (n > max_atoms(p.query)) return false;
  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  for (const ABox& e : detail::passing_cores(p, ref, n))
    if (e.size() == n && !e.count(alpha)) return true;
  return false;
}

inline bool size_in(const QAP& p, const Assertion& alpha, size_t n) {
  validate_qap(p);
  if (!in_signature(p.sigma, alpha.pred)) return false;
  if (n > max_atoms(p.query) + 1) return false;
  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  size_t bound = std::min(n, max_atoms(p.query));
  for (const ABox& e : detail::passing_cores(p, ref, bound)) {
    if (e.size() == n && e.count(alpha)) return true;
    if (e.size() + 1 == n && !e.count(alpha)) {
      ABox ae = p.abox;
      ae.insert(e.begin(), e.end());
      ae.insert(alpha);
      if (is_consistent_una(p.tbox, ae)) return true;
    }
  }
  return false;
}

inline bool is_relevant(const QAP& p, const Assertion& alpha, Order order) {
  validate_qap(p);
  if (alpha.pred.arity() != int(alpha.args.size()))
    throw ArityMismatch("assertion arity mismatch");
  if (!in_signature(p.sigma, alpha.pred)) return false;

  if (order == Order::none) {
    QAP q = rel_to_exist(p, alpha);
    return exists_explanation(q).has_value();
  }

  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  if (order == Order::card) {
    std::optional<size_t> m = detail::min_explanation_size(p, ref);
    if (!m) return false;
    for (const ABox& e : detail::passing_cores(p, ref, *m))
      if (e.size() == *m && e.count(alpha)) return true;
    return false;
  }

  // subset order: alpha must sit in some explanation with no smaller
  // explanation embedded in it
  std::set<ABox> passing = detail::passing_cores(p, ref, max_atoms(p.query));
  for (const ABox& e : passing) {
    if (!e.count(alpha)) continue;
    bool minimal = true;
    for (const ABox& e2 : passing)
      if (e2.size() < e.size() && embeds_as_subset(e2, e)) minimal = false;
    if (minimal) return true;
  }
  return false;
}

inline bool is_necessary(const QAP& p, const Assertion& alpha, Order order) {
  validate_qap(p);
  if (alpha.pred.arity() != int(alpha.args.size()))
    throw ArityMismatch("assertion arity mismatch");

  Reformulation ref = perfect_reformulation(p.query, p.tbox);

  if (order == Order::card) {
    std::optional<size_t> m = detail::min_explanation_size(p, ref);
    if (!m) return true;  // vacuous
    for (const ABox& e : detail::passing_cores(p, ref, *m))
      if (e.size() == *m && !e.count(alpha)) return false;
    return true;
  }

  // none and subset orders coincide
  if (!in_signature(p.sigma, alpha.pred)) {
    // alpha can occur in no explanation; necessity is the absence of any
    return !exists_explanation(p).has_value();
  }
  if (nec_reduction_applies(p, alpha)) {
    try {
      QAP q = nec_to_nonexist(p, alpha);
      return !exists_explanation(q).has_value();
    } catch (const FunctionalityConflict&) {
      // fall through to the direct search
    }
  }
  // direct search: an explanation avoiding alpha always shrinks to a
  // candidate avoiding alpha
  for (const ABox& e : detail::passing_cores(p, ref, max_atoms(p.query)))
    if (!e.count(alpha)) return false;
  return true;
}

// The Turing-style reduction to explanation existence, for unrestricted
// signatures: first look for an explanation forced to avoid alpha via a
// fresh disjoint predicate, then for one that entails alpha indirectly.
inline bool isNEC(const QAP& p, const Assertion& alpha) {
  validate_qap(p);
  if (!is_unrestricted(p) || !in_signature(p.sigma, alpha.pred))
    throw RestrictedSignature("isNEC requires an unrestricted signature");

  std::set<std::string> used = detail::pred_names(p);
  std::string bar = detail::fresh_symbol("p", used);

  QAP blocked = p;
  if (alpha.pred.role) {
    blocked.tbox.axioms.insert(RoleDisj{RoleExpr{bar, false}, RoleExpr{alpha.pred.name, false}});
    blocked.abox.insert(assert2(bar, alpha.args[0], alpha.args[1]));
  } else {
    blocked.tbox.axioms.insert(
        ConceptDisj{BasicConcept::atomic(bar), BasicConcept::atomic(alpha.pred.name)});
    blocked.abox.insert(assert1(bar, alpha.args[0]));
  }
  if (exists_explanation(blocked)) return false;

  std::set<std::string> inds = individuals_of(p);
  for (const std::string& d : alpha.args) inds.insert(d);
  std::string u = detail::fresh_symbol("u", inds);
  std::vector<std::string> universe(inds.begin(), inds.end());
  universe.push_back(u);

  std::vector<ABox> singletons;
  singletons.push_back({});
  for (const Pred& pr : p.sigma) {
    if (!pr.role) {
      for (const std::string& c : universe) {
        Assertion as = assert1(pr.name, c);
        if (!(as == alpha)) singletons.push_back({as});
      }
    } else {
      for (const std::string& c : universe)
        for (const std::string& d : universe) {
          Assertion as = assert2(pr.name, c, d);
          if (!(as == alpha)) singletons.push_back({as});
        }
    }
  }

  for (const ABox& estar : singletons) {
    ABox ae = p.abox;
    ae.insert(estar.begin(), estar.end());
    if (!entails_assertion(p.tbox, ae, alpha)) continue;
    QAP sub = p;
    sub.abox = ae;
    if (exists_explanation(sub)) return false;
  }
  return true;
}

inline std::vector<Explanation> enumerate_minimal(const QAP& p, Order order) {
  validate_qap(p);
  if (order == Order::none)
    throw PreconditionViolated("enumeration requires a minimality order");
  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  std::set<ABox> passing = detail::passing_cores(p, ref, max_atoms(p.query));

  std::vector<ABox> minimal;
  for (const ABox& e : passing) {
    bool keep = true;
    for (const ABox& e2 : passing)
      if (e2.size() < e.size() && embeds_as_subset(e2, e)) keep = false;
    if (keep) minimal.push_back(e);
  }
  if (order == Order::card) {
    size_t m = SIZE_MAX;
    for (const ABox& e : minimal) m = std::min(m, e.size());
    std::vector<ABox> least;
    for (const ABox& e : minimal)
      if (e.size() == m) least.push_back(e);
    minimal = std::move(least);
  }
  std::sort(minimal.begin(), minimal.end(), [](const ABox& a, const ABox& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<Explanation> out;
  for (ABox& e : minimal) out.push_back(Explanation{std::move(e), std::nullopt});
  return out;
}

// Query non-emptiness, declared with the problem transformers.
inline bool is_query_nonempty(const TBox& tbox, const UCQ& query, const Signature& sigma) {
  return exists_explanation(nonemptiness_to_exist(tbox, query, sigma)).has_value();
}

}  // namespace qx
