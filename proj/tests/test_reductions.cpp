#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "qx/abduction.hpp"
#include "qx/reductions.hpp"
#include "qx/testkit.hpp"

using namespace qx;

TEST_CASE("nonexist_to_nec") {
  QAP p = fixtures::university_qap();

  auto [p1, alpha1] = nonexist_to_nec(p);
  CHECK(p1.sigma.count(alpha1.pred));
  CHECK_FALSE(is_necessary(p1, alpha1, Order::none));  // P_u has explanations

  QAP inconsistent = p;
  inconsistent.tbox.axioms.insert(
      ConceptDisj{BasicConcept::atomic("DPhil"), BasicConcept::atomic("DPhil")});
  auto [p2, alpha2] = nonexist_to_nec(inconsistent);
  CHECK(is_necessary(p2, alpha2, Order::none));

  QAP certain = p;
  certain.tuple = {"Marco"};
  auto [p3, alpha3] = nonexist_to_nec(certain);
  CHECK_FALSE(is_necessary(p3, alpha3, Order::none));
}

TEST_CASE("nec_to_nonexist") {
  QAP p = fixtures::university_qap();
  Assertion beppe = assert2("enroll", "Beppe", "IDB");

  QAP prime = nec_to_nonexist(p, beppe);
  // Not necessary: the transformed problem still has a solution.
  CHECK(exists_explanation(prime).has_value());
  CHECK(exists_explanation(prime).has_value() !=
        is_necessary(p, beppe, Order::none));

  CHECK_THROWS_AS(nec_to_nonexist(p, assert1("DPhil", "Luca")), NotAbducible);

  QAP functional = p;
  functional.tbox.axioms.insert(Funct{RoleExpr{"enroll", false}});
  CHECK_THROWS_AS(nec_to_nonexist(functional, beppe), FunctionalityConflict);
}

TEST_CASE("nec_reduction_applies") {
  QAP p = fixtures::university_qap();
  CHECK(nec_reduction_applies(p, assert2("enroll", "Beppe", "IDB")));
  // already asserted, hence entailed: the guard assertion would clash
  CHECK_FALSE(nec_reduction_applies(p, assert2("enroll", "Anna", "KR")));

  // another abducible predicate below alpha's can insert an entailed copy,
  // so the construction would also exclude solutions that avoid alpha
  TBox t;
  t.axioms.insert(RoleIncl{RoleExpr{"S", false}, RoleExpr{"R", false}});
  CQ cq;
  cq.body.insert(atom2("R", Term::individual("C1"), Term::individual("C2")));
  QAP sub{t, {}, UCQ{{cq}}, {}, Signature{role_pred("R"), role_pred("S")}};
  Assertion alpha = assert2("R", "C1", "C2");
  CHECK_FALSE(nec_reduction_applies(sub, alpha));
  // {S(C1,C2)} is a solution avoiding alpha, so alpha is not necessary
  CHECK_FALSE(is_necessary(sub, alpha, Order::none));
  CHECK(is_relevant(sub, alpha, Order::none));
}

TEST_CASE("rel_to_exist") {
  QAP p = fixtures::university_qap();
  Assertion beppe = assert2("enroll", "Beppe", "IDB");
  QAP prime = rel_to_exist(p, beppe);
  CHECK(prime.abox.count(beppe));
  CHECK(exists_explanation(prime).has_value());

  QAP inconsistent = p;
  inconsistent.tbox.axioms.insert(
      ConceptDisj{BasicConcept::atomic("DPhil"), BasicConcept::atomic("DPhil")});
  CHECK_FALSE(exists_explanation(rel_to_exist(inconsistent, beppe)).has_value());

  CHECK_THROWS_AS(rel_to_exist(p, assert1("DPhil", "Luca")), NotAbducible);
}

TEST_CASE("exist_to_rel") {
  QAP p = fixtures::university_qap();
  auto [p1, a1] = exist_to_rel(p);
  CHECK(is_relevant(p1, a1, Order::none) == exists_explanation(p).has_value());

  QAP inconsistent = p;
  inconsistent.tbox.axioms.insert(
      ConceptDisj{BasicConcept::atomic("DPhil"), BasicConcept::atomic("DPhil")});
  auto [p2, a2] = exist_to_rel(inconsistent);
  CHECK_FALSE(is_relevant(p2, a2, Order::none));

  QAP certain = p;
  certain.tuple = {"Marco"};
  auto [p3, a3] = exist_to_rel(certain);
  CHECK(is_relevant(p3, a3, Order::none));
}

TEST_CASE("nonemptiness_to_exist and is_query_nonempty") {
  TBox t = fixtures::university_tbox();
  CQ course;
  course.head = {"x"};
  course.body.insert(atom1("Course", Term::variable("x")));
  UCQ q{{course}};

  CHECK(is_query_nonempty(t, q, Signature{role_pred("enroll")}));
  CHECK_FALSE(is_query_nonempty(t, q, Signature{concept_pred("Lecturer")}));

  CQ dphil;
  dphil.body.insert(atom1("DPhil", Term::variable("z")));
  CHECK(is_query_nonempty(TBox{}, UCQ{{dphil}}, Signature{concept_pred("DPhil")}));

  // n-ary case routes through the fresh closing concept.
  CHECK(is_query_nonempty(t, fixtures::university_query(),
                          Signature{role_pred("enroll"), role_pred("teach"),
                                    concept_pred("DPhil")}));
  CHECK_FALSE(is_query_nonempty(t, fixtures::university_query(),
                                Signature{role_pred("enroll"), role_pred("teach")}));
}

TEST_CASE("metamorphic identities on fuzzed instances") {
  qx::FuzzProfile prof;
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    QAP p = random_qap(seed, prof);
    bool solvable = exists_explanation(p).has_value();

    auto [pn, an] = nonexist_to_nec(p);
    CHECK(is_necessary(pn, an, Order::none) == !solvable);

    auto [pr, ar] = exist_to_rel(p);
    if (is_consistent_una(p.tbox, ABox{ar})) {
      CHECK(is_relevant(pr, ar, Order::none) == solvable);
    } else {
      // every abducible predicate clashes with the TBox alone: no assertion
      // can be relevant, whatever the existence verdict
      CHECK_FALSE(is_relevant(pr, ar, Order::none));
    }

    Assertion alpha = p.sigma.begin()->role ? assert2(p.sigma.begin()->name, "I1", "I2")
                                            : assert1(p.sigma.begin()->name, "I1");
    CHECK(is_relevant(p, alpha, Order::none) ==
          exists_explanation(rel_to_exist(p, alpha)).has_value());

    if (nec_reduction_applies(p, alpha)) {
      try {
        QAP prime = nec_to_nonexist(p, alpha);
        CHECK(!exists_explanation(prime).has_value() ==
              is_necessary(p, alpha, Order::none));
      } catch (const FunctionalityConflict&) {
        // only admissible failure mode
      }
    }
  }
}
