// Acceptance suite: one verdict line per criterion, nonzero exit when any
// criterion fails. Each criterion is independent; timings are wall-clock.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qx/abduction.hpp"
#include "qx/reductions.hpp"
#include "qx/testkit.hpp"

using namespace qx;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int n, const char* what) : n_(n), what_(what) {
    start_ = std::chrono::steady_clock::now();
  }
  void fail(const std::string& why) {
    ok_ = false;
    if (note_.empty()) note_ = why;
  }
  void note(const std::string& extra) { trailer_ = extra; }
  ~Criterion() {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start_)
                      .count();
    std::printf("%s  criterion %d: %s (%.1fs)%s%s\n", ok_ ? "PASS" : "FAIL", n_,
                what_, secs, note_.empty() ? "" : ("\n      first mismatch: " + note_).c_str(),
                trailer_.empty() ? "" : ("\n      note: " + trailer_).c_str());
    if (!ok_) ++failures;
  }
  bool ok() const { return ok_; }

 private:
  int n_;
  const char* what_;
  bool ok_ = true;
  std::string note_, trailer_;
  std::chrono::steady_clock::time_point start_;
};

std::set<ABox> canonical_set(const std::vector<Explanation>& es) {
  std::set<ABox> out;
  for (const Explanation& e : es) out.insert(canonical_abox(e.assertions));
  return out;
}

std::set<ABox> canonicalize(const std::set<ABox>& es) {
  std::set<ABox> out;
  for (const ABox& e : es) out.insert(canonical_abox(e));
  return out;
}

// Oracle-side minimal sets from the full brute-force explanation set.
struct OracleSets {
  std::set<ABox> all;      // canonical
  std::set<ABox> subset_min;
  std::set<ABox> card_min;
};

OracleSets oracle_sets(const std::set<ABox>& brute) {
  OracleSets o;
  o.all = canonicalize(brute);
  size_t best = SIZE_MAX;
  for (const ABox& e : brute) best = std::min(best, e.size());
  for (const ABox& e : brute) {
    bool minimal = true;
    for (const ABox& other : brute)
      if (other.size() < e.size() && embeds_as_subset(other, e)) minimal = false;
    if (minimal) o.subset_min.insert(canonical_abox(e));
    if (e.size() == best) o.card_min.insert(canonical_abox(e));
  }
  return o;
}

// Named test assertions over the instance's abducible predicates. Arguments
// come from individuals the instance already mentions, so the brute-force
// candidate space covers the probe.
std::vector<Assertion> probe_assertions(const QAP& p) {
  std::set<std::string> ind_set = individuals_of(p);
  std::vector<std::string> inds(ind_set.begin(), ind_set.end());
  std::vector<Assertion> out;
  for (const Pred& pr : p.sigma) {
    if (pr.role && inds.size() >= 2)
      out.push_back(assert2(pr.name, inds[0], inds[1]));
    else if (!pr.role && !inds.empty())
      out.push_back(assert1(pr.name, inds[0]));
    if (out.size() == 2) break;
  }
  return out;
}

bool contains_assertion(const std::set<ABox>& es, const Assertion& a) {
  for (const ABox& e : es)
    if (e.count(a)) return true;
  return false;
}

bool all_contain(const std::set<ABox>& es, const Assertion& a) {
  for (const ABox& e : es)
    if (!e.count(a)) return false;
  return true;
}

// --- digraph enumeration (self-loop free), deduplicated up to isomorphism ---

std::vector<std::pair<size_t, size_t>> edge_slots(size_t n) {
  std::vector<std::pair<size_t, size_t>> slots;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) slots.push_back({i, j});
  return slots;
}

uint64_t iso_canonical(const DirectedGraph& g) {
  std::vector<size_t> perm(g.vertex_count);
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  auto slots = edge_slots(g.vertex_count);
  uint64_t best = UINT64_MAX;
  do {
    uint64_t mask = 0;
    for (size_t k = 0; k < slots.size(); ++k)
      if (g.edges.count({perm[slots[k].first], perm[slots[k].second]}))
        mask |= uint64_t(1) << k;
    best = std::min(best, mask);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<DirectedGraph> all_digraphs_up_to_iso(size_t max_vertices) {
  std::vector<DirectedGraph> out;
  for (size_t n = 1; n <= max_vertices; ++n) {
    auto slots = edge_slots(n);
    std::set<uint64_t> seen;
    for (uint64_t mask = 0; mask < (uint64_t(1) << slots.size()); ++mask) {
      DirectedGraph g{n, {}};
      for (size_t k = 0; k < slots.size(); ++k)
        if (mask & (uint64_t(1) << k)) g.edges.insert(slots[k]);
      if (seen.insert(iso_canonical(g)).second) out.push_back(g);
    }
  }
  return out;
}

DirectedGraph random_connected_digraph(std::mt19937_64& rng, size_t n) {
  while (true) {
    DirectedGraph g{n, {}};
    for (auto [i, j] : edge_slots(n))
      if (rng() % 3 == 0) g.edges.insert({i, j});
    if (is_connected(g)) return g;
  }
}

void criterion1() {
  Criterion c(1, "university golden suite");
  QAP p = fixtures::university_qap();
  auto cert = certain_answers(p.query, p.tbox, p.abox);
  if (!cert || cert->count({"Carlo"}) || !cert->count({"Marco"}))
    c.fail("certain answers of the running example");
  if (!recognize(p, fixtures::expl_big(), Order::none)) c.fail("recognize big/none");
  if (recognize(p, fixtures::expl_big(), Order::subset)) c.fail("recognize big/subset");
  if (!recognize(p, fixtures::expl_pair(), Order::subset)) c.fail("recognize pair/subset");
  bool found = false;
  for (const Explanation& e : enumerate_minimal(p, Order::card))
    if (e.assertions == fixtures::expl_single()) found = true;
  if (!found) c.fail("enumerate card misses the one-assertion solution");
}

std::vector<std::pair<QAP, Assertion>> unrestricted_probes;

void criterion2() {
  {
    Criterion c(2, "engine vs brute-force oracle on 500 fuzzed instances");
    for (uint64_t seed = 1; seed <= 500 && c.ok(); ++seed) {
      qx::FuzzProfile prof;
      prof.unrestricted_sigma = (seed % 2 == 0);
      QAP p = random_qap(seed, prof);
      std::set<ABox> brute = brute_force_explanations(p);
      std::string tag = "seed " + std::to_string(seed);

      // EXIST under every order.
      bool solvable = !brute.empty();
      if (exists_explanation(p).has_value() != solvable) c.fail(tag + " EXIST");
      if (!enumerate_minimal(p, Order::subset).empty() != solvable)
        c.fail(tag + " subset-EXIST");
      if (!enumerate_minimal(p, Order::card).empty() != solvable)
        c.fail(tag + " card-EXIST");

      size_t best = SIZE_MAX;
      for (const ABox& e : brute) best = std::min(best, e.size());
      size_t checked = 0;
      for (const ABox& e : brute) {
        if (++checked > 4) break;
        if (!recognize(p, e, Order::none)) c.fail(tag + " REC none");
      }

      // The minimality oracles are quadratic in the explanation set; skip
      // them on the rare seeds where brute force found a huge one.
      if (brute.size() > 1500) continue;
      OracleSets o = oracle_sets(brute);

      // REC: every oracle explanation must be recognized with the right
      // minimality verdicts.
      checked = 0;
      for (const ABox& e : brute) {
        if (++checked > 4) break;
        bool subset_min = o.subset_min.count(canonical_abox(e)) > 0;
        if (recognize(p, e, Order::subset) != subset_min) c.fail(tag + " REC subset");
        bool card_min = (e.size() == best);
        if (recognize(p, e, Order::card) != card_min) c.fail(tag + " REC card");
      }

      // REL and NEC on named probe assertions.
      for (const Assertion& alpha : probe_assertions(p)) {
        // alpha occurs in some explanation iff the alpha-augmented problem
        // still has one (that one plus alpha contains it)
        bool rel_none = contains_assertion(brute, alpha);
        if (!rel_none) {
          QAP augmented = p;
          augmented.abox.insert(alpha);
          rel_none = !brute_force_explanations(augmented).empty();
        }
        if (is_relevant(p, alpha, Order::none) != rel_none) c.fail(tag + " REL none");
        if (is_relevant(p, alpha, Order::subset) !=
            contains_assertion(o.subset_min, alpha))
          c.fail(tag + " REL subset");
        if (is_relevant(p, alpha, Order::card) !=
            contains_assertion(o.card_min, alpha))
          c.fail(tag + " REL card");

        bool nec_none = all_contain(o.subset_min, alpha);  // vacuous when empty
        if (is_necessary(p, alpha, Order::none) != nec_none) c.fail(tag + " NEC none");
        if (is_necessary(p, alpha, Order::subset) != nec_none)
          c.fail(tag + " NEC subset");
        if (is_necessary(p, alpha, Order::card) != all_contain(o.card_min, alpha))
          c.fail(tag + " NEC card");

        if (is_unrestricted(p)) unrestricted_probes.push_back({p, alpha});
      }
    }
  }
}

void criterion9() {
  Criterion c(9, "isNEC parity with direct necessity on unrestricted instances");
  for (const auto& [p, alpha] : unrestricted_probes) {
    if (isNEC(p, alpha) != is_necessary(p, alpha, Order::none)) {
      c.fail("predicate " + alpha.pred.name);
      break;
    }
  }
  if (unrestricted_probes.empty()) c.fail("no unrestricted instances generated");
}

void criterion3() {
  Criterion c(3, "metamorphic reduction identities on 200 fuzzed instances");
  for (uint64_t seed = 1; seed <= 200 && c.ok(); ++seed) {
    qx::FuzzProfile prof;
    prof.unrestricted_sigma = (seed % 2 == 0);
    QAP p = random_qap(seed * 31 + 7, prof);
    std::string tag = "seed " + std::to_string(seed);
    bool solvable = exists_explanation(p).has_value();

    auto [pn, an] = nonexist_to_nec(p);
    if (is_necessary(pn, an, Order::none) != !solvable) c.fail(tag + " identity (a)");

    for (const Assertion& alpha : probe_assertions(p)) {
      if (nec_reduction_applies(p, alpha)) {
        try {
          QAP prime = nec_to_nonexist(p, alpha);
          if (!exists_explanation(prime).has_value() !=
              is_necessary(p, alpha, Order::none))
            c.fail(tag + " identity (b)");
        } catch (const FunctionalityConflict&) {
          // the only admissible refusal
        }
      }
      if (is_relevant(p, alpha, Order::none) !=
          exists_explanation(rel_to_exist(p, alpha)).has_value())
        c.fail(tag + " identity (c)");
    }

    auto [pr, ar] = exist_to_rel(p);
    if (is_consistent_una(p.tbox, ABox{ar})) {
      if (is_relevant(pr, ar, Order::none) != solvable) c.fail(tag + " identity (d)");
    } else if (is_relevant(pr, ar, Order::none)) {
      c.fail(tag + " identity (d), unsatisfiable signature");
    }
  }
}

void criterion4() {
  Criterion c(4, "instance queries: minimal explanations of size <= 1, orders agree");
  for (uint64_t seed = 1; seed <= 200 && c.ok(); ++seed) {
    qx::FuzzProfile prof;
    prof.force_instance_query = true;
    prof.unrestricted_sigma = (seed % 2 == 0);
    QAP p = random_qap(seed * 17 + 3, prof);
    auto subset = enumerate_minimal(p, Order::subset);
    auto card = enumerate_minimal(p, Order::card);
    for (const Explanation& e : subset)
      if (e.assertions.size() > 1) c.fail("seed " + std::to_string(seed) + " size");
    if (canonical_set(subset) != canonical_set(card))
      c.fail("seed " + std::to_string(seed) + " order mismatch");
  }
}

void criterion5() {
  Criterion c(5, "reformulation structural bounds on fuzzed instances");
  for (uint64_t seed = 1; seed <= 200 && c.ok(); ++seed) {
    qx::FuzzProfile prof;
    prof.force_instance_query = (seed % 3 == 0);
    QAP p = random_qap(seed * 13 + 1, prof);
    auto ref = perfect_reformulation(p.query, p.tbox);
    Signature allowed = sigma_of(p.tbox, ABox{}, p.query);
    std::string tag = "seed " + std::to_string(seed);
    bool instance = is_instance_query(p.query);
    for (const CQ& d : ref.disjuncts) {
      if (d.body.size() > max_atoms(p.query)) c.fail(tag + " atom bound");
      if (max_terms(UCQ{{d}}) > 2 * max_atoms(p.query)) c.fail(tag + " term bound");
      for (const Atom& at : d.body)
        if (!allowed.count(at.pred)) c.fail(tag + " predicate bound");
      if (instance && d.body.size() != 1) c.fail(tag + " single-atom bound");
    }
    bool identity_included = false;
    for (const CQ& d : ref.disjuncts)
      if (canonical_cq(d) == canonical_cq(p.query.disjuncts.front()))
        identity_included = true;
    if (!identity_included) c.fail(tag + " identity disjunct");
  }
}

void criterion6() {
  Criterion c(6, "rewriter vs bounded-chase cross-validation");
  for (uint64_t seed = 1; seed <= 200 && c.ok(); ++seed) {
    QAP p = random_qap(seed * 11 + 5, qx::FuzzProfile{});
    if (!is_consistent_una(p.tbox, p.abox)) continue;
    AnswerSet via_rewriter = evaluate(perfect_reformulation(p.query, p.tbox),
                                      db_of(p.abox));
    AnswerSet via_chase =
        chase_certain_answers(p.query, p.tbox, p.abox, max_terms(p.query));
    if (via_rewriter != via_chase) c.fail("seed " + std::to_string(seed));
  }
}

void criterion7() {
  Criterion c(7, "hardness-gadget suites");

  // (i) homomorphism gadget: exhaustive up to isomorphism for <= 3 vertices,
  // seeded random sample of 4-vertex pairs.
  auto small = all_digraphs_up_to_iso(3);
  std::vector<std::pair<DirectedGraph, DirectedGraph>> hom_pairs;
  for (const auto& g : small)
    for (const auto& h : small) hom_pairs.push_back({g, h});
  std::mt19937_64 rng(20240824);
  auto slots4 = edge_slots(4);
  for (int k = 0; k < 400; ++k) {
    DirectedGraph g{4, {}}, h{4, {}};
    for (auto [i, j] : slots4) {
      if (rng() % 3 == 0) g.edges.insert({i, j});
      if (rng() % 3 == 0) h.edges.insert({i, j});
    }
    hom_pairs.push_back({g, h});
  }
  for (const auto& [g, h] : hom_pairs) {
    bool expected = has_homomorphism(g, h);
    auto [p, e] = gadget_homomorphism(g, h);
    if (exists_explanation(p).has_value() != expected) {
      c.fail("hom gadget solvability");
      break;
    }
    QAP wide = p;
    wide.sigma = sigma_of(p.tbox, p.abox, p.query);
    if (!wide.sigma.count(concept_pred("B")))
      wide.sigma.insert(concept_pred("B"));
    if (recognize(wide, e, Order::none) != expected) {
      c.fail("hom gadget recognition");
      break;
    }
  }

  // (ii) vertex-cover parity gadget: exhaustive connected digraphs on 2-3
  // vertices, seeded sample of connected 4-vertex digraphs.
  std::vector<DirectedGraph> vc_graphs;
  for (const auto& g : all_digraphs_up_to_iso(3))
    if (g.vertex_count >= 2 && is_connected(g)) vc_graphs.push_back(g);
  for (int k = 0; k < 25; ++k) vc_graphs.push_back(random_connected_digraph(rng, 4));
  for (const DirectedGraph& g : vc_graphs) {
    bool expected = min_vertex_cover(g) % 2 == 1;
    auto [p, alpha] = gadget_odd_min_vertex_cover(g);
    if (is_necessary(p, alpha, Order::card) != expected) {
      c.fail("vertex-cover gadget necessity");
      break;
    }
    if (is_relevant(p, alpha, Order::card) != expected) {
      c.fail("vertex-cover gadget relevance");
      break;
    }
  }

  // (iii) Hamilton-path pair gadget over all pairs up to isomorphism with
  // <= 3 vertices each. The subset verdict matches the graph oracle. The
  // cardinality verdict is checked against the same expectation and FAILS on
  // positive instances: inserting successor-role edges along the second
  // graph's vertices always yields a strictly smaller explanation than the
  // candidate, so the candidate is never size-minimal there. The construction
  // is implemented as displayed in its source; the discrepancy is inherent.
  bool card_half_failed = false;
  for (const auto& g : small) {
    for (const auto& h : small) {
      bool expected = has_hamiltonian_path(g) && !has_hamiltonian_path(h);
      auto [p, e] = gadget_hp_nohp(g, h);
      if (recognize(p, e, Order::subset) != expected) {
        c.fail("hp gadget subset half");
        break;
      }
      if (recognize(p, e, Order::card) != expected) {
        card_half_failed = true;
        c.fail("hp gadget card half (expected on positive instances)");
      }
    }
  }
  if (card_half_failed)
    c.note(
        "the card half of (iii) is unattainable as specified; the subset half "
        "and all other gadget checks pass");
}

void criterion8() {
  Criterion c(8, "consistency checks vs bounded-model search");

  // Curated template family: every TBox that is a <= 2 subset of a fixed
  // axiom universe over concepts A, B and role R, paired with every ABox of
  // <= 3 assertions over individuals c, d.
  auto A = BasicConcept::atomic("A");
  auto B = BasicConcept::atomic("B");
  auto eR = BasicConcept::exists(RoleExpr{"R", false});
  auto eRi = BasicConcept::exists(RoleExpr{"R", true});
  std::vector<Axiom> universe{
      ConceptIncl{A, B},    ConceptIncl{B, A},    ConceptIncl{A, eR},
      ConceptIncl{eR, A},   ConceptIncl{A, eRi},  ConceptIncl{eRi, B},
      ConceptDisj{A, B},    ConceptDisj{A, A},    ConceptDisj{eR, A},
      ConceptDisj{eR, eRi}, Funct{RoleExpr{"R", false}},
      Funct{RoleExpr{"R", true}}, RoleIncl{RoleExpr{"R", false}, RoleExpr{"R", true}},
      RoleDisj{RoleExpr{"R", false}, RoleExpr{"R", true}},
  };
  std::vector<TBox> tboxes;
  tboxes.push_back(TBox{});
  for (size_t i = 0; i < universe.size(); ++i) {
    TBox t1;
    t1.axioms.insert(universe[i]);
    if (validate_dllite(t1).ok) tboxes.push_back(t1);
    for (size_t j = i + 1; j < universe.size(); ++j) {
      TBox t2 = t1;
      t2.axioms.insert(universe[j]);
      if (validate_dllite(t2).ok) tboxes.push_back(t2);
    }
  }
  std::vector<Assertion> facts{assert1("A", "c"), assert1("A", "d"),
                               assert1("B", "c"), assert1("B", "d"),
                               assert2("R", "c", "c"), assert2("R", "c", "d"),
                               assert2("R", "d", "c"), assert2("R", "d", "d")};
  std::vector<ABox> aboxes;
  for (size_t i = 0; i < facts.size(); ++i)
    for (size_t j = i; j < facts.size(); ++j)
      for (size_t k = j; k < facts.size(); ++k)
        aboxes.push_back(ABox{facts[i], facts[j], facts[k]});

  for (const TBox& t : tboxes) {
    bool has_funct = false;
    for (const Axiom& ax : t.axioms)
      if (std::holds_alternative<Funct>(ax)) has_funct = true;
    for (const ABox& a : aboxes) {
      size_t dom = individuals_of(a).size() + t.axioms.size();
      if (is_consistent_una(t, a) != bounded_model_consistency(t, a, dom)) {
        c.fail("template family disagreement");
        return;
      }
      if (!has_funct && is_consistent_una(t, a) != is_consistent_nouna(t, a)) {
        c.fail("spurious UNA/non-UNA divergence");
        return;
      }
    }
  }

  for (uint64_t seed = 1; seed <= 500 && c.ok(); ++seed) {
    qx::FuzzProfile prof;
    prof.num_individuals = 3;
    QAP p = random_qap(seed * 7 + 2, prof);
    ABox a = p.abox;
    // consistent by construction; stress the inconsistent side too
    a.insert(assert1("A", "I1"));
    a.insert(assert1("B", "I1"));
    size_t dom = individuals_of(a).size() + p.tbox.axioms.size();
    if (is_consistent_una(p.tbox, a) != bounded_model_consistency(p.tbox, a, dom))
      c.fail("fuzzed disagreement, seed " + std::to_string(seed));
    bool has_funct = false;
    for (const Axiom& ax : p.tbox.axioms)
      if (std::holds_alternative<Funct>(ax)) has_funct = true;
    if (!has_funct && is_consistent_una(p.tbox, a) != is_consistent_nouna(p.tbox, a))
      c.fail("fuzzed UNA/non-UNA divergence, seed " + std::to_string(seed));
  }
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
