#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "qx/model.hpp"

using namespace qx;

TEST_CASE("validate_dllite") {
  CHECK(validate_dllite(fixtures::university_tbox()).ok);
  CHECK(validate_dllite(TBox{}).ok);

  TBox bad;
  bad.axioms.insert(Funct{RoleExpr{"P", false}});
  bad.axioms.insert(RoleIncl{RoleExpr{"R", false}, RoleExpr{"P", false}});
  auto report = validate_dllite(bad);
  CHECK_FALSE(report.ok);
  REQUIRE(report.offending.size() == 1);
  CHECK(std::holds_alternative<Funct>(report.offending[0].first));
  CHECK(std::holds_alternative<RoleIncl>(report.offending[0].second));
  CHECK_THROWS_AS(require_valid(bad), InvalidTBox);
}

TEST_CASE("sigma_of") {
  Signature s = sigma_of(fixtures::university_tbox(), fixtures::university_abox(),
                         fixtures::university_query());
  Signature expected{role_pred("enroll"), role_pred("teach"),
                     concept_pred("Student"), concept_pred("Course"),
                     concept_pred("Lecturer"), concept_pred("DPhil")};
  CHECK(s == expected);

  CQ dphil;
  dphil.head = {"x"};
  dphil.body.insert(atom1("DPhil", Term::variable("x")));
  CHECK(sigma_of(TBox{}, ABox{}, UCQ{{dphil}}) == Signature{concept_pred("DPhil")});

  CQ b;
  b.head = {"x"};
  b.body.insert(atom1("B", Term::variable("x")));
  CHECK(sigma_of(TBox{}, ABox{assert1("A", "c")}, UCQ{{b}}) ==
        Signature{concept_pred("A"), concept_pred("B")});
}

TEST_CASE("sigma_of monotone under input growth") {
  TBox t = fixtures::university_tbox();
  ABox a = fixtures::university_abox();
  UCQ q = fixtures::university_query();
  Signature base = sigma_of(t, a, q);
  a.insert(assert1("Extra", "Anna"));
  Signature grown = sigma_of(t, a, q);
  CHECK(std::includes(grown.begin(), grown.end(), base.begin(), base.end()));
}

TEST_CASE("is_unrestricted") {
  QAP p = fixtures::university_qap();
  CHECK_FALSE(is_unrestricted(p));

  QAP full = p;
  full.sigma = sigma_of(p.tbox, p.abox, p.query);
  CHECK(is_unrestricted(full));

  full.sigma.insert(concept_pred("FreshConcept"));
  CHECK(is_unrestricted(full));
}

TEST_CASE("is_sigma_abox") {
  Signature sig{role_pred("enroll"), role_pred("teach")};
  CHECK(is_sigma_abox(fixtures::expl_single(), sig));
  CHECK_FALSE(is_sigma_abox(ABox{assert1("DPhil", "Luca")}, sig));
  CHECK(is_sigma_abox(ABox{}, sig));
}

TEST_CASE("max_atoms and max_terms") {
  UCQ qu = fixtures::university_query();
  CHECK(max_atoms(qu) == 3);
  CHECK(max_terms(qu) == 3);

  CQ single;
  single.head = {"x"};
  single.body.insert(atom1("A", Term::variable("x")));
  CHECK(max_atoms(UCQ{{single}}) == 1);
  CHECK(max_terms(UCQ{{single}}) == 1);

  CQ two;
  two.head = {"x"};
  two.body.insert(atom2("R", Term::variable("x"), Term::variable("y")));
  two.body.insert(atom1("A", Term::variable("x")));
  CQ three;
  three.head = {"x"};
  three.body.insert(atom2("R", Term::variable("x"), Term::variable("y")));
  three.body.insert(atom2("S", Term::variable("y"), Term::variable("z")));
  three.body.insert(atom1("A", Term::variable("z")));
  CHECK(max_atoms(UCQ{{two, three}}) == 3);
}

TEST_CASE("fresh_anonymous") {
  CHECK(fresh_anonymous({"Anna", "KR"}) == "_:a1");
  CHECK(fresh_anonymous({"_:a1"}) == "_:a2");
  CHECK(fresh_anonymous({}) == "_:a1");
}

TEST_CASE("QAP validation") {
  QAP p = fixtures::university_qap();
  CHECK_NOTHROW(validate_qap(p));

  QAP wrong_arity = p;
  wrong_arity.tuple = {"Carlo", "Marco"};
  CHECK_THROWS_AS(validate_qap(wrong_arity), ArityMismatch);

  QAP anon = p;
  anon.abox.insert(assert1("DPhil", "_:a1"));
  CHECK_THROWS(validate_qap(anon));

  QAP empty_sigma = p;
  empty_sigma.sigma.clear();
  CHECK_THROWS(validate_qap(empty_sigma));
}

TEST_CASE("safety and instance queries") {
  CQ unsafe;
  unsafe.head = {"x"};
  unsafe.body.insert(atom1("A", Term::variable("y")));
  CHECK_FALSE(is_safe(unsafe));
  CHECK_THROWS_AS(require_safe(UCQ{{unsafe}}), UnsafeQuery);

  CQ inst;
  inst.head = {"x"};
  inst.body.insert(atom1("A", Term::variable("x")));
  CHECK(is_instance_query(UCQ{{inst}}));
  CHECK_FALSE(is_instance_query(fixtures::university_query()));
}

TEST_CASE("canonical_abox identifies anonymous renamings") {
  ABox e1{assert2("teach", "Carlo", "_:a1"), assert2("enroll", "Beppe", "_:a1")};
  ABox e2{assert2("teach", "Carlo", "_:a7"), assert2("enroll", "Beppe", "_:a7")};
  CHECK(canonical_abox(e1) == canonical_abox(e2));

  ABox different{assert2("teach", "Carlo", "_:a1"), assert2("enroll", "Beppe", "_:a2")};
  CHECK(canonical_abox(e1) != canonical_abox(different));
}

TEST_CASE("embeds_as_subset respects anonymous identification") {
  ABox sub{assert2("enroll", "Beppe", "_:a3")};
  ABox sup{assert2("teach", "Carlo", "_:a1"), assert2("enroll", "Beppe", "_:a1")};
  CHECK(embeds_as_subset(sub, sup));
  ABox named{assert2("enroll", "Beppe", "IDB")};
  CHECK_FALSE(embeds_as_subset(named, sup));
}
