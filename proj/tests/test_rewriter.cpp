#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "qx/rewriter.hpp"
#include "qx/evaluator.hpp"
#include "qx/testkit.hpp"

using namespace qx;

namespace {

BasicConcept atomic(const char* n) { return BasicConcept::atomic(n); }
BasicConcept exists(const char* r, bool inv = false) {
  return BasicConcept::exists(RoleExpr{r, inv});
}

UCQ concept_query(const char* name) {
  CQ cq;
  cq.head = {"x"};
  cq.body.insert(atom1(name, Term::variable("x")));
  return UCQ{{cq}};
}

bool contains_canonical(const Reformulation& r, const CQ& cq) {
  CQ c = canonical_cq(cq);
  for (const CQ& d : r.disjuncts)
    if (canonical_cq(d) == c) return true;
  return false;
}

}  // namespace

TEST_CASE("perfect_reformulation of Course(x) over the university TBox") {
  auto ref = perfect_reformulation(concept_query("Course"), fixtures::university_tbox());
  REQUIRE(ref.disjuncts.size() == 3);

  CQ teach;
  teach.head = {"x"};
  teach.body.insert(atom2("teach", Term::variable("y"), Term::variable("x")));
  CQ enroll;
  enroll.head = {"x"};
  enroll.body.insert(atom2("enroll", Term::variable("y"), Term::variable("x")));
  CHECK(contains_canonical(ref, concept_query("Course").disjuncts.front()));
  CHECK(contains_canonical(ref, teach));
  CHECK(contains_canonical(ref, enroll));
}

TEST_CASE("perfect_reformulation over the empty TBox is the identity") {
  UCQ q = fixtures::university_query();
  auto ref = perfect_reformulation(q, TBox{});
  REQUIRE(ref.disjuncts.size() == 1);
  CHECK(canonical_cq(ref.disjuncts.front()) == canonical_cq(q.disjuncts.front()));
}

TEST_CASE("perfect_reformulation of Student(x) over the university TBox") {
  auto ref = perfect_reformulation(concept_query("Student"), fixtures::university_tbox());
  CQ dphil;
  dphil.head = {"x"};
  dphil.body.insert(atom1("DPhil", Term::variable("x")));
  CQ enroll;
  enroll.head = {"x"};
  enroll.body.insert(atom2("enroll", Term::variable("x"), Term::variable("y")));
  CHECK(contains_canonical(ref, concept_query("Student").disjuncts.front()));
  CHECK(contains_canonical(ref, dphil));
  CHECK(contains_canonical(ref, enroll));
}

TEST_CASE("structural bounds on the university query reformulation") {
  UCQ q = fixtures::university_query();
  auto ref = perfect_reformulation(q, fixtures::university_tbox());
  for (const CQ& d : ref.disjuncts) {
    CHECK(d.body.size() <= max_atoms(q));
    CHECK(max_terms(UCQ{{d}}) <= 2 * max_atoms(q));
  }
}

TEST_CASE("atom_rewrite_step applicability") {
  CQ cq;
  cq.head = {"x"};
  Atom course = atom1("Course", Term::variable("x"));
  cq.body.insert(course);

  SECTION("existential right side introduces a fresh role atom") {
    auto out = atom_rewrite_step(cq, course, ConceptIncl{exists("teach", true), atomic("Course")});
    REQUIRE(out.has_value());
    CHECK(out->pred == role_pred("teach"));
    REQUIRE(out->args.size() == 2);
    CHECK(out->args[1] == Term::variable("x"));
    CHECK(out->args[0].variable);
  }

  SECTION("atomic right side renames the predicate") {
    CQ sq;
    sq.head = {"x"};
    Atom student = atom1("Student", Term::variable("x"));
    sq.body.insert(student);
    auto out = atom_rewrite_step(sq, student, ConceptIncl{atomic("DPhil"), atomic("Student")});
    REQUIRE(out.has_value());
    CHECK(*out == atom1("DPhil", Term::variable("x")));
  }

  SECTION("concept axiom cannot rewrite a role atom with bound second argument") {
    CQ rq;
    rq.head = {"x", "y"};
    Atom teach = atom2("teach", Term::variable("x"), Term::variable("y"));
    rq.body.insert(teach);
    CHECK_FALSE(atom_rewrite_step(rq, teach, ConceptIncl{atomic("DPhil"), atomic("Student")}));
  }
}

TEST_CASE("reduce_step") {
  SECTION("unifies a don't-care duplicate") {
    CQ cq;
    cq.head = {"x"};
    Atom a1 = atom2("teach", Term::variable("x"), Term::variable("y"));
    Atom a2 = atom2("teach", Term::variable("x"), Term::variable("w"));
    cq.body.insert(a1);
    cq.body.insert(a2);
    cq.body.insert(atom1("Course", Term::variable("y")));  // keeps y bound
    auto out = reduce_step(cq, a1, a2);
    REQUIRE(out.has_value());
    CHECK(out->body.count(atom2("teach", Term::variable("x"), Term::variable("y"))) +
              out->body.count(atom2("teach", Term::variable("x"), Term::variable("w"))) ==
          1);
    CHECK(out->body.size() == 2);
  }

  SECTION("different predicates never reduce") {
    CQ cq;
    cq.head = {"x"};
    Atom a1 = atom2("teach", Term::variable("x"), Term::variable("y"));
    Atom a2 = atom2("enroll", Term::variable("x"), Term::variable("y"));
    cq.body.insert(a1);
    cq.body.insert(a2);
    CHECK_FALSE(reduce_step(cq, a1, a2));
  }
}

TEST_CASE("reformulation agrees with the chase oracle on fuzzed instances") {
  qx::FuzzProfile prof;
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    QAP p = random_qap(seed, prof);
    if (!is_consistent_una(p.tbox, p.abox)) continue;
    auto ref = perfect_reformulation(p.query, p.tbox);
    AnswerSet via_rewriter = evaluate(ref, db_of(p.abox));
    AnswerSet via_chase =
        chase_certain_answers(p.query, p.tbox, p.abox, max_terms(p.query));
    CHECK(via_rewriter == via_chase);
  }
}

TEST_CASE("reformulating the reformulation is semantically idempotent") {
  UCQ q = fixtures::university_query();
  TBox t = fixtures::university_tbox();
  auto ref = perfect_reformulation(q, t);
  UCQ as_ucq{ref.disjuncts};
  auto ref2 = perfect_reformulation(as_ucq, t);
  FiniteInterpretation db = db_of(fixtures::university_abox());
  CHECK(evaluate(ref, db) == evaluate(ref2, db));
}

TEST_CASE("instance queries reformulate to single-atom disjuncts") {
  auto ref = perfect_reformulation(concept_query("Student"), fixtures::university_tbox());
  for (const CQ& d : ref.disjuncts) CHECK(d.body.size() == 1);
}
