#pragma once

// Independent oracles used to validate the engine: brute-force explanation
// search, a depth-bounded chase, a bounded-model consistency search, small
// exhaustive graph solvers, hardness-gadget instance generators, and a
// seeded random problem generator. Nothing here calls the abduction engine.

#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qx/evaluator.hpp"
#include "qx/model.hpp"
#include "qx/reasoner.hpp"
#include "qx/rewriter.hpp"

namespace qx {

// ---------------------------------------------------------------------------
// Graph oracles (exhaustive; inputs capped at 8 vertices)

struct DirectedGraph {
  size_t vertex_count = 0;
  std::set<std::pair<size_t, size_t>> edges;  // ordered pairs into [0..n)
};

namespace detail {

inline void require_small(const DirectedGraph& g) {
  if (g.vertex_count > 8) throw TooLarge("graph oracle limited to 8 vertices");
  for (const auto& [a, b] : g.edges)
    if (a >= g.vertex_count || b >= g.vertex_count)
      throw PreconditionViolated("edge references a missing vertex");
}

}  // namespace detail

// Smallest vertex cover, reading edges as undirected.
inline size_t min_vertex_cover(const DirectedGraph& g) {
  detail::require_small(g);
  size_t best = g.vertex_count;
  for (uint32_t mask = 0; mask < (1u << g.vertex_count); ++mask) {
    bool covers = true;
    for (const auto& [a, b] : g.edges)
      if (!(mask & (1u << a)) && !(mask & (1u << b))) {
        covers = false;
        break;
      }
    if (covers) best = std::min<size_t>(best, __builtin_popcount(mask));
  }
  return best;
}

// Edge-preserving total map from g into h.
inline bool has_homomorphism(const DirectedGraph& g, const DirectedGraph& h) {
  detail::require_small(g);
  detail::require_small(h);
  if (g.vertex_count == 0) return true;
  if (h.vertex_count == 0) return false;
  std::vector<size_t> img(g.vertex_count, 0);
  while (true) {
    bool ok = true;
    for (const auto& [a, b] : g.edges)
      if (!h.edges.count({img[a], img[b]})) {
        ok = false;
        break;
      }
    if (ok) return true;
    size_t i = 0;
    for (; i < img.size(); ++i) {
      if (++img[i] < h.vertex_count) break;
      img[i] = 0;
    }
    if (i == img.size()) return false;
  }
}

inline bool has_hamiltonian_path(const DirectedGraph& g) {
  detail::require_small(g);
  if (g.vertex_count <= 1) return true;
  std::vector<size_t> perm(g.vertex_count);
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    bool ok = true;
    for (size_t i = 0; ok && i + 1 < perm.size(); ++i)
      if (!g.edges.count({perm[i], perm[i + 1]})) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Connectivity under the undirected reading.
inline bool is_connected(const DirectedGraph& g) {
  if (g.vertex_count == 0) return true;
  std::vector<bool> seen(g.vertex_count, false);
  std::vector<size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    size_t v = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : g.edges) {
      if (a == v && !seen[b]) { seen[b] = true; stack.push_back(b); }
      if (b == v && !seen[a]) { seen[a] = true; stack.push_back(a); }
    }
  }
  for (bool s : seen)
    if (!s) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Brute-force explanation search

namespace detail {

inline size_t candidate_ceiling() {
  if (const char* env = std::getenv("QX_CANDIDATE_CEILING")) {
    long long v = std::atoll(env);
    if (v > 0) return size_t(v);
  }
  return 10'000'000;
}

}  // namespace detail

// Every explanation up to the given size, over the abducible predicates that
// occur in the TBox or query, the problem's individuals, and a budget of
// anonymous individuals. Checked with the reasoner and evaluator only;
// results deduplicated up to anonymous renaming.
inline std::set<ABox> brute_force_explanations(const QAP& p, size_t sizeBound,
                                               size_t anonBudget) {
  validate_qap(p);
  Signature preds;
  for (const Pred& pr : sigma_of(p.tbox, {}, p.query))
    if (in_signature(p.sigma, pr)) preds.insert(pr);

  std::set<std::string> named = individuals_of(p);
  std::vector<std::string> inds(named.begin(), named.end());
  std::map<std::string, size_t> anon_index;
  {
    std::set<std::string> ctx = named;
    for (size_t i = 0; i < anonBudget; ++i) {
      std::string a = fresh_anonymous(ctx);
      ctx.insert(a);
      anon_index[a] = i + 1;
      inds.push_back(a);
    }
  }

  std::vector<Assertion> universe;
  for (const Pred& pr : preds) {
    if (!pr.role) {
      for (const std::string& c : inds) universe.push_back(assert1(pr.name, c));
    } else {
      for (const std::string& c : inds)
        for (const std::string& d : inds) universe.push_back(assert2(pr.name, c, d));
    }
  }

  size_t ceiling = detail::candidate_ceiling();
  {
    long double total = 0, binom = 1;
    for (size_t k = 0; k <= std::min(sizeBound, universe.size()); ++k) {
      if (k > 0) binom = binom * (universe.size() - k + 1) / k;
      total += binom;
      if (total > (long double)ceiling)
        throw BudgetTooLarge("brute-force candidate count above the ceiling");
    }
  }

  Reformulation ref = perfect_reformulation(p.query, p.tbox);
  NegativeClosure nc = negative_closure(p.tbox);
  std::set<ABox> out;
  std::vector<const Assertion*> picked;

  // anonymous indices of each universe assertion, for renaming-class pruning
  std::vector<std::vector<size_t>> anon_of(universe.size());
  for (size_t i = 0; i < universe.size(); ++i)
    for (const std::string& arg : universe[i].args)
      if (auto it = anon_index.find(arg); it != anon_index.end())
        anon_of[i].push_back(it->second);

  // the interpretation is maintained incrementally: base facts stay, picked
  // assertions are overlaid and removed on backtrack
  FiniteInterpretation db = db_of(p.abox);
  auto overlay = [&](const Assertion& as, bool add) -> bool {
    if (as.pred.role) {
      auto& ext = db.roles[as.pred.name];
      if (add) return ext.insert({as.args[0], as.args[1]}).second;
      ext.erase({as.args[0], as.args[1]});
    } else {
      auto& ext = db.concepts[as.pred.name];
      if (add) return ext.insert(as.args[0]).second;
      ext.erase(as.args[0]);
    }
    return true;
  };

  auto consider = [&](const std::set<size_t>& used_anons, bool matched) {
    // only one labelling per anonymous-renaming class: the anonymous
    // individuals used must be an initial segment of the budget
    if (!used_anons.empty() && *used_anons.rbegin() != used_anons.size()) return false;
    if (!matched && evaluate(ref, db).count(p.tuple) == 0) return false;
    ABox e;
    for (const Assertion* as : picked) e.insert(*as);
    ABox ae = p.abox;
    ae.insert(e.begin(), e.end());
    if (!is_consistent_una(nc, ae)) return true;  // matched, but clashes
    out.insert(canonical_abox(e));
    return true;
  };

  auto rec = [&](auto&& self, size_t start, std::set<size_t> used_anons,
                 bool matched) -> void {
    matched = consider(used_anons, matched);
    if (picked.size() == sizeBound) return;
    for (size_t i = start; i < universe.size(); ++i) {
      std::set<size_t> next_anons = used_anons;
      next_anons.insert(anon_of[i].begin(), anon_of[i].end());
      // remaining picks cannot plug the label gaps: prune the branch
      size_t gaps = next_anons.empty() ? 0 : *next_anons.rbegin() - next_anons.size();
      if (gaps > 2 * (sizeBound - picked.size() - 1)) continue;
      std::vector<bool> added;
      added.push_back(overlay(universe[i], true));
      picked.push_back(&universe[i]);
      self(self, i + 1, std::move(next_anons), matched);
      picked.pop_back();
      if (added[0]) overlay(universe[i], false);
    }
  };
  rec(rec, 0, {}, false);
  return out;
}

inline std::set<ABox> brute_force_explanations(const QAP& p) {
  size_t m = max_atoms(p.query);
  return brute_force_explanations(p, m, 2 * m);
}

// ---------------------------------------------------------------------------
// Depth-bounded chase

// Forward completion of the ABox with labelled nulls witnessing existential
// heads, with every null at distance <= depth from the named individuals.
// Query answers over the result restricted to non-null tuples
// under-approximate the certain answers and are exact for small queries.
inline FiniteInterpretation bounded_chase(const TBox& tbox, const ABox& abox, size_t depth) {
  if (!is_consistent_una(tbox, abox))
    throw InconsistentOntology("chase requires a consistent ontology");
  NegativeClosure nc = negative_closure(tbox);

  std::map<std::string, size_t> dist;
  for (const std::string& ind : individuals_of(abox)) dist[ind] = 0;

  std::set<Assertion> facts(abox.begin(), abox.end());
  size_t next_null = 0;

  auto role_pairs = [&](const RoleExpr& r) {
    std::set<std::pair<std::string, std::string>> out;
    for (const Assertion& as : facts)
      if (as.pred.role && as.pred.name == r.name)
        out.insert(r.inverted ? std::make_pair(as.args[1], as.args[0])
                              : std::make_pair(as.args[0], as.args[1]));
    return out;
  };

  bool changed = true;
  while (changed) {
    changed = false;

    // close role facts under role inclusions
    for (const auto& [r1, r2] : nc.role_subs) {
      if (r1 == r2) continue;
      for (const auto& [x, y] : role_pairs(r1)) {
        Assertion as = r2.inverted ? assert2(r2.name, y, x) : assert2(r2.name, x, y);
        changed |= facts.insert(as).second;
      }
    }

    // memberships closed under concept inclusions; atomic ones materialize
    // as facts, existential ones as fresh null successors
    std::map<std::string, std::set<BasicConcept>> mem;
    for (const Assertion& as : facts)
      if (!as.pred.role) mem[as.args[0]].insert(BasicConcept::atomic(as.pred.name));
    std::set<RoleExpr> seen_roles;
    for (const auto& [r, _] : nc.role_subs) seen_roles.insert(r);
    for (const RoleExpr& r : seen_roles)
      for (const auto& [x, y] : role_pairs(r)) {
        mem[x].insert(BasicConcept::exists(r));
        (void)y;
      }
    for (auto& [elem, bs] : mem) {
      std::set<BasicConcept> closed = bs;
      for (const BasicConcept& b : bs)
        for (const auto& [b1, b2] : nc.concept_subs)
          if (b1 == b) closed.insert(b2);
      for (const BasicConcept& b : closed) {
        if (!b.existential) {
          changed |= facts.insert(assert1(b.name, elem)).second;
          continue;
        }
        RoleExpr r = b.role();
        bool has_succ = false;
        for (const auto& [x, y] : role_pairs(r))
          if (x == elem) { has_succ = true; (void)y; break; }
        if (has_succ || dist[elem] >= depth) continue;
        std::string null = std::string(null_prefix) + std::to_string(++next_null);
        dist[null] = dist[elem] + 1;
        facts.insert(r.inverted ? assert2(r.name, null, elem) : assert2(r.name, elem, null));
        changed = true;
      }
    }
  }

  FiniteInterpretation db = db_of(ABox(facts.begin(), facts.end()));
  for (const auto& [elem, d] : dist) db.domain.insert(elem);
  return db;
}

// Certain-answer oracle built on the chase: evaluate the raw query over the
// chased interpretation and keep only tuples free of labelled nulls.
inline AnswerSet chase_certain_answers(const UCQ& q, const TBox& t, const ABox& a,
                                       size_t depth) {
  FiniteInterpretation db = bounded_chase(t, a, depth);
  AnswerSet out;
  for (const std::vector<std::string>& tup : evaluate(q, db)) {
    bool named = true;
    for (const std::string& e : tup)
      if (is_chase_null(e)) named = false;
    if (named) out.insert(tup);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounded-model consistency (propositional grounding + DPLL)

namespace detail {

inline bool dpll(std::vector<std::vector<int>> clauses, std::map<int, bool>& assign) {
  // unit propagation
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (auto it = clauses.begin(); it != clauses.end();) {
      std::vector<int>& cl = *it;
      bool satisfied = false;
      size_t open = 0;
      int unit = 0;
      for (int lit : cl) {
        auto a = assign.find(std::abs(lit));
        if (a == assign.end()) {
          ++open;
          unit = lit;
        } else if (a->second == (lit > 0)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) {
        it = clauses.erase(it);
        continue;
      }
      if (open == 0) return false;
      if (open == 1) {
        assign[std::abs(unit)] = unit > 0;
        progressed = true;
        it = clauses.erase(it);
        continue;
      }
      ++it;
    }
  }
  if (clauses.empty()) return true;
  int var = 0;
  for (int lit : clauses.front()) {
    if (!assign.count(std::abs(lit))) { var = std::abs(lit); break; }
  }
  for (bool val : {true, false}) {
    std::map<int, bool> trial = assign;
    trial[var] = val;
    if (dpll(clauses, trial)) {
      assign = trial;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Exhaustive search for a model over a domain of at most maxDomain elements;
// individuals denote fixed distinct elements. Model existence is monotone in
// the domain size, so only the largest domain is searched.
inline bool bounded_model_consistency(const TBox& tbox, const ABox& abox, size_t maxDomain) {
  require_valid(tbox);
  std::set<std::string> named = individuals_of(abox);
  if (maxDomain < named.size())
    throw PreconditionViolated("domain bound below the number of individuals");
  size_t n = std::max<size_t>(maxDomain, 1);

  std::vector<std::string> dom(named.begin(), named.end());
  std::map<std::string, size_t> elem;
  for (size_t i = 0; i < dom.size(); ++i) elem[dom[i]] = i;
  while (dom.size() < n) dom.push_back("*" + std::to_string(dom.size()));

  std::set<std::string> concepts, roles;
  Signature all = sigma_of(tbox, abox, UCQ{});
  for (const Pred& pr : all) (pr.role ? roles : concepts).insert(pr.name);

  // variable numbering: concepts then role pairs
  std::map<std::string, int> cbase;
  std::map<std::string, int> rbase;
  int next = 1;
  for (const std::string& c : concepts) { cbase[c] = next; next += int(n); }
  for (const std::string& r : roles) { rbase[r] = next; next += int(n * n); }
  auto cvar = [&](const std::string& c, size_t d) { return cbase.at(c) + int(d); };
  auto rvar = [&](const RoleExpr& r, size_t d, size_t e) {
    if (r.inverted) std::swap(d, e);
    return rbase.at(r.name) + int(d * n + e);
  };

  // literal lists for "element d belongs to basic concept b"
  auto members = [&](const BasicConcept& b, size_t d) {
    std::vector<int> lits;
    if (!b.existential) {
      lits.push_back(cvar(b.name, d));
    } else {
      for (size_t e = 0; e < n; ++e) lits.push_back(rvar(b.role(), d, e));
    }
    return lits;
  };

  std::vector<std::vector<int>> clauses;
  for (const Assertion& as : abox) {
    if (as.pred.role)
      clauses.push_back({rvar(RoleExpr{as.pred.name, false}, elem.at(as.args[0]),
                              elem.at(as.args[1]))});
    else
      clauses.push_back({cvar(as.pred.name, elem.at(as.args[0]))});
  }
  for (const Axiom& ax : tbox.axioms) {
    if (auto* ci = std::get_if<ConceptIncl>(&ax)) {
      for (size_t d = 0; d < n; ++d)
        for (int ant : members(ci->lhs, d)) {
          std::vector<int> cl{-ant};
          for (int con : members(ci->rhs, d)) cl.push_back(con);
          clauses.push_back(std::move(cl));
        }
    } else if (auto* cd = std::get_if<ConceptDisj>(&ax)) {
      for (size_t d = 0; d < n; ++d)
        for (int a1 : members(cd->lhs, d))
          for (int a2 : members(cd->rhs, d))
            if (a1 != a2) clauses.push_back({-a1, -a2});
            else clauses.push_back({-a1});
    } else if (auto* ri = std::get_if<RoleIncl>(&ax)) {
      for (size_t d = 0; d < n; ++d)
        for (size_t e = 0; e < n; ++e)
          clauses.push_back({-rvar(ri->lhs, d, e), rvar(ri->rhs, d, e)});
    } else if (auto* rd = std::get_if<RoleDisj>(&ax)) {
      for (size_t d = 0; d < n; ++d)
        for (size_t e = 0; e < n; ++e) {
          int a1 = rvar(rd->lhs, d, e), a2 = rvar(rd->rhs, d, e);
          if (a1 != a2) clauses.push_back({-a1, -a2});
          else clauses.push_back({-a1});
        }
    } else if (auto* f = std::get_if<Funct>(&ax)) {
      for (size_t d = 0; d < n; ++d)
        for (size_t e1 = 0; e1 < n; ++e1)
          for (size_t e2 = e1 + 1; e2 < n; ++e2)
            clauses.push_back({-rvar(f->role, d, e1), -rvar(f->role, d, e2)});
    }
  }

  std::map<int, bool> assign;
  return detail::dpll(std::move(clauses), assign);
}

// ---------------------------------------------------------------------------
// Hardness-gadget instance generators

// Homomorphism gadget: the returned problem is solvable, and the returned
// candidate is an explanation, exactly when g maps homomorphically into h.
inline std::pair<QAP, ABox> gadget_homomorphism(const DirectedGraph& g,
                                                const DirectedGraph& h) {
  detail::require_small(g);
  detail::require_small(h);
  ABox a;
  for (const auto& [x, y] : h.edges)
    a.insert(assert2("e", "N" + std::to_string(x + 1), "N" + std::to_string(y + 1)));

  CQ cq;
  for (const auto& [x, y] : g.edges)
    cq.body.insert(atom2("e", Term::variable("x" + std::to_string(x + 1)),
                         Term::variable("x" + std::to_string(y + 1))));
  cq.body.insert(atom1("B", Term::individual("Hub")));

  QAP p{TBox{}, a, UCQ{{cq}}, {}, {concept_pred("B")}};
  ABox candidate{assert1("B", "Hub")};
  return {p, candidate};
}

// Parity-of-minimum-vertex-cover gadget. The returned assertion M(Odd) is
// necessary (and relevant) under the cardinality order exactly when the
// smallest vertex cover of g has odd size. Requires a connected graph with
// at least two vertices.
inline std::pair<QAP, Assertion> gadget_odd_min_vertex_cover(const DirectedGraph& g) {
  detail::require_small(g);
  if (g.vertex_count < 2 || !is_connected(g))
    throw PreconditionViolated("gadget needs a connected graph with at least 2 vertices");
  size_t m = g.vertex_count;
  auto cname = [](size_t i, size_t j) {
    return "C" + std::to_string(i) + "_" + std::to_string(j);
  };
  auto par = [](size_t k) { return k % 2 == 1 ? std::string("Odd") : std::string("Even"); };

  ABox a;
  for (size_t j = 0; j <= m; ++j) {
    for (size_t i = j; i <= m; ++i) a.insert(assert1("L", cname(i, j)));
    for (size_t i1 = 1; i1 <= m; ++i1)
      for (size_t i2 = 1; i2 <= m; ++i2) {
        if (i1 <= j || i2 <= j) a.insert(assert2("Edge", cname(i1, j), cname(i2, j)));
        if (i1 != i2) a.insert(assert2("neq", cname(i1, j), cname(i2, j)));
      }
  }
  for (size_t j = 0; j <= m; ++j)
    for (size_t i = 0; i <= m; ++i) a.insert(assert2("P", cname(i, j), par(j)));

  CQ cq;
  auto xv = [](size_t i) { return Term::variable("x" + std::to_string(i)); };
  for (const auto& [v1, v2] : g.edges) cq.body.insert(atom2("Edge", xv(v1 + 1), xv(v2 + 1)));
  for (size_t i1 = 1; i1 <= m; ++i1)
    for (size_t i2 = 1; i2 <= m; ++i2)
      if (i1 != i2) cq.body.insert(atom2("neq", xv(i1), xv(i2)));
  for (size_t i = 1; i <= m; ++i) cq.body.insert(atom1("L", xv(i)));
  cq.body.insert(atom2("P", xv(1), Term::variable("y")));
  cq.body.insert(atom1("M", Term::variable("y")));

  QAP p{TBox{}, a, UCQ{{cq}}, {}, {concept_pred("M"), concept_pred("L")}};
  return {p, assert1("M", "Odd")};
}

// The size-k candidate explanation used in the vertex-cover gadget analysis.
inline ABox gadget_vc_up(size_t k) {
  ABox e;
  for (size_t i = 1; i <= k; ++i)
    e.insert(assert1("L", "C" + std::to_string(i) + "_" + std::to_string(k)));
  e.insert(assert1("M", k % 2 == 1 ? "Odd" : "Even"));
  return e;
}

// Hamiltonian-path pair gadget. The returned candidate is a minimal
// explanation, under either order, exactly when g has a Hamiltonian path
// and h does not. Roles: e encodes g, f encodes h, d marks distinctness.
inline std::pair<QAP, ABox> gadget_hp_nohp(const DirectedGraph& g, const DirectedGraph& h) {
  detail::require_small(g);
  detail::require_small(h);
  size_t n = g.vertex_count, m = h.vertex_count;
  if (n == 0 || m == 0) throw PreconditionViolated("gadget needs nonempty graphs");
  auto V = [](size_t i) { return "V" + std::to_string(i + 1); };
  auto W = [](size_t i) { return "W" + std::to_string(i + 1); };
  auto O = [](size_t i) { return "O" + std::to_string(i + 1); };

  ABox a;
  for (const auto& [x, y] : g.edges) a.insert(assert2("e", V(x), V(y)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) a.insert(assert2("d", V(i), V(j)));
  for (const auto& [x, y] : h.edges) a.insert(assert2("f", W(x), W(y)));
  for (size_t i = 0; i < m; ++i) {
    a.insert(assert1("A", W(i)));
    for (size_t j = 0; j < m; ++j)
      if (i != j) {
        a.insert(assert2("d", W(i), W(j)));
        a.insert(assert2("f", O(i), O(j)));
        a.insert(assert2("d", O(i), O(j)));
      }
  }

  CQ cq;
  auto xv = [](size_t i) { return Term::variable("x" + std::to_string(i + 1)); };
  auto yv = [](size_t i) { return Term::variable("y" + std::to_string(i + 1)); };
  for (size_t i = 0; i + 1 < n; ++i) cq.body.insert(atom2("e", xv(i), xv(i + 1)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) cq.body.insert(atom2("d", xv(i), xv(j)));
  for (size_t i = 0; i + 1 < m; ++i) cq.body.insert(atom2("f", yv(i), yv(i + 1)));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j)
      if (i != j) cq.body.insert(atom2("d", yv(i), yv(j)));
    cq.body.insert(atom1("A", yv(i)));
  }

  UCQ q{{cq}};
  QAP p{TBox{}, a, q, {}, sigma_of(TBox{}, a, q)};
  ABox candidate;
  for (size_t i = 0; i < m; ++i) candidate.insert(assert1("A", O(i)));
  return {p, candidate};
}

// ---------------------------------------------------------------------------
// Seeded random problem generation

struct FuzzProfile {
  size_t max_axioms = 4;
  size_t max_assertions = 6;
  size_t max_query_atoms = 3;
  size_t max_disjuncts = 2;
  size_t num_concepts = 2;
  size_t num_roles = 2;
  size_t num_individuals = 3;
  bool unrestricted_sigma = false;
  bool force_instance_query = false;
};

namespace detail {

inline BasicConcept random_basic(std::mt19937_64& rng, const std::vector<std::string>& cs,
                                 const std::vector<std::string>& rs) {
  std::uniform_int_distribution<int> kind(0, rs.empty() ? 0 : 2);
  switch (kind(rng)) {
    case 1:
      return BasicConcept::exists({rs[rng() % rs.size()], false});
    case 2:
      return BasicConcept::exists({rs[rng() % rs.size()], true});
    default:
      return BasicConcept::atomic(cs[rng() % cs.size()]);
  }
}

}  // namespace detail

// Deterministic per seed; always yields a valid TBox, a consistent ontology
// (by rejection), a safe query, and a nonempty signature.
inline QAP random_qap(uint64_t seed, const FuzzProfile& profile = {}) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> cs, rs, is;
  static const char* cnames[] = {"A", "B", "C", "D", "E0", "F0"};
  static const char* rnames[] = {"R", "S", "T0", "U0"};
  for (size_t i = 0; i < profile.num_concepts && i < 6; ++i) cs.push_back(cnames[i]);
  for (size_t i = 0; i < profile.num_roles && i < 4; ++i) rs.push_back(rnames[i]);
  for (size_t i = 0; i < profile.num_individuals; ++i) is.push_back("I" + std::to_string(i + 1));

  for (int attempt = 0;; ++attempt) {
    TBox t;
    size_t n_axioms = rng() % (profile.max_axioms + 1);
    std::set<std::string> role_incl_rhs, functional;
    for (size_t i = 0; i < n_axioms; ++i) {
      switch (rng() % 5) {
        case 0:
          t.axioms.insert(
              ConceptIncl{detail::random_basic(rng, cs, rs), detail::random_basic(rng, cs, rs)});
          break;
        case 1:
          t.axioms.insert(
              ConceptDisj{detail::random_basic(rng, cs, rs), detail::random_basic(rng, cs, rs)});
          break;
        case 2: {
          if (rs.empty()) break;
          RoleExpr lhs{rs[rng() % rs.size()], rng() % 2 == 0};
          RoleExpr rhs{rs[rng() % rs.size()], rng() % 2 == 0};
          if (functional.count(rhs.name)) break;
          t.axioms.insert(RoleIncl{lhs, rhs});
          role_incl_rhs.insert(rhs.name);
          break;
        }
        case 3: {
          if (rs.empty()) break;
          RoleExpr lhs{rs[rng() % rs.size()], rng() % 2 == 0};
          RoleExpr rhs{rs[rng() % rs.size()], rng() % 2 == 0};
          t.axioms.insert(RoleDisj{lhs, rhs});
          break;
        }
        case 4: {
          if (rs.empty()) break;
          RoleExpr r{rs[rng() % rs.size()], rng() % 2 == 0};
          if (role_incl_rhs.count(r.name)) break;
          t.axioms.insert(Funct{r});
          functional.insert(r.name);
          break;
        }
      }
    }
    if (!validate_dllite(t).ok) continue;

    ABox a;
    size_t n_assert = rng() % (profile.max_assertions + 1);
    for (size_t i = 0; i < n_assert; ++i) {
      bool role = !rs.empty() && rng() % 2 == 0;
      if (role)
        a.insert(assert2(rs[rng() % rs.size()], is[rng() % is.size()], is[rng() % is.size()]));
      else
        a.insert(assert1(cs[rng() % cs.size()], is[rng() % is.size()]));
    }
    if (!is_consistent_una(t, a)) continue;

    UCQ q;
    size_t arity;
    if (profile.force_instance_query) {
      arity = 1;
      CQ cq;
      cq.head = {"x"};
      cq.body.insert(atom1(cs[rng() % cs.size()], Term::variable("x")));
      q.disjuncts.push_back(cq);
    } else {
      arity = rng() % 2;  // Boolean or unary
      size_t n_disj = 1 + rng() % profile.max_disjuncts;
      std::vector<std::string> head;
      if (arity == 1) head = {"x"};
      std::vector<std::string> vars = {"x", "y", "z", "w"};
      for (size_t d = 0; d < n_disj; ++d) {
        CQ cq;
        cq.head = head;
        size_t n_atoms = 1 + rng() % profile.max_query_atoms;
        for (size_t i = 0; i < n_atoms; ++i) {
          auto term = [&]() {
            if (rng() % 5 == 0) return Term::individual(is[rng() % is.size()]);
            return Term::variable(vars[rng() % vars.size()]);
          };
          bool role = !rs.empty() && rng() % 2 == 0;
          if (role)
            cq.body.insert(atom2(rs[rng() % rs.size()], term(), term()));
          else
            cq.body.insert(atom1(cs[rng() % cs.size()], term()));
        }
        if (arity == 1) {
          // guarantee safety: make some argument the answer variable
          Atom at = *cq.body.begin();
          cq.body.erase(cq.body.begin());
          at.args[rng() % at.args.size()] = Term::variable("x");
          cq.body.insert(at);
        }
        q.disjuncts.push_back(cq);
      }
    }
    if (!is_safe(q.disjuncts.front())) continue;

    std::vector<std::string> tuple;
    for (size_t i = 0; i < arity; ++i) tuple.push_back(is[rng() % is.size()]);

    Signature all = sigma_of(t, a, q);
    Signature sigma;
    if (profile.unrestricted_sigma) {
      sigma = all;
    } else {
      std::vector<Pred> preds(all.begin(), all.end());
      for (const Pred& pr : preds)
        if (rng() % 2 == 0) sigma.insert(pr);
      if (sigma.empty()) sigma.insert(preds[rng() % preds.size()]);
    }

    QAP p{t, a, q, tuple, sigma};
    try {
      validate_qap(p);
    } catch (const Error&) {
      continue;
    }
    return p;
  }
}

}  // namespace qx
