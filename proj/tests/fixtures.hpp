// Shared fixtures: the university ontology used across the suites.
#pragma once

#include "qx/model.hpp"

namespace fixtures {

using namespace qx;

inline TBox university_tbox() {
  TBox t;
  auto ex = [](const char* r, bool inv) {
    return BasicConcept::exists(RoleExpr{r, inv});
  };
  t.axioms.insert(ConceptIncl{ex("enroll", false), BasicConcept::atomic("Student")});
  t.axioms.insert(ConceptIncl{ex("teach", false), BasicConcept::atomic("Lecturer")});
  t.axioms.insert(ConceptIncl{ex("enroll", true), BasicConcept::atomic("Course")});
  t.axioms.insert(ConceptIncl{ex("teach", true), BasicConcept::atomic("Course")});
  t.axioms.insert(ConceptIncl{BasicConcept::atomic("DPhil"), BasicConcept::atomic("Student")});
  t.axioms.insert(ConceptIncl{BasicConcept::atomic("Course"), ex("teach", true)});
  return t;
}

inline ABox university_abox() {
  return ABox{
      assert1("DPhil", "Anna"),     assert1("DPhil", "Beppe"),
      assert2("enroll", "Anna", "KR"),  assert2("teach", "Marco", "KR"),
      assert2("enroll", "Luca", "IDB"), assert2("teach", "Carlo", "IDB"),
  };
}

// q(x) <- teach(x,y), enroll(z,y), DPhil(z)
inline UCQ university_query() {
  CQ cq;
  cq.head = {"x"};
  cq.body.insert(atom2("teach", Term::variable("x"), Term::variable("y")));
  cq.body.insert(atom2("enroll", Term::variable("z"), Term::variable("y")));
  cq.body.insert(atom1("DPhil", Term::variable("z")));
  return UCQ{{cq}};
}

inline QAP university_qap() {
  return QAP{university_tbox(), university_abox(), university_query(),
             {"Carlo"},
             {role_pred("enroll"), role_pred("teach")}};
}

// The three candidate explanations discussed throughout: E over an anonymous
// course, its two-element subset, and the one-assertion solution.
inline ABox expl_big() {
  return ABox{assert2("teach", "Carlo", "_:a1"), assert2("enroll", "Beppe", "_:a1"),
              assert2("enroll", "Luca", "_:a1")};
}

inline ABox expl_pair() {
  return ABox{assert2("teach", "Carlo", "_:a1"), assert2("enroll", "Beppe", "_:a1")};
}

inline ABox expl_single() { return ABox{assert2("enroll", "Beppe", "IDB")}; }

}  // namespace fixtures
