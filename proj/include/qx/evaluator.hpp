#pragma once

// UCQ evaluation over an ABox viewed as a finite first-order interpretation,
// and certain answers obtained by evaluating the perfect reformulation.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qx/model.hpp"
#include "qx/reasoner.hpp"
#include "qx/rewriter.hpp"

namespace qx {

struct FiniteInterpretation {
  std::set<std::string> domain;
  std::map<std::string, std::set<std::string>> concepts;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> roles;
};

struct Match {
  std::map<std::string, std::string> binding;  // variable -> domain element
};

using AnswerSet = std::set<std::vector<std::string>>;

inline FiniteInterpretation db_of(const ABox& a) {
  FiniteInterpretation db;
  for (const Assertion& as : a) {
    db.domain.insert(as.args.begin(), as.args.end());
    if (as.pred.role)
      db.roles[as.pred.name].insert({as.args[0], as.args[1]});
    else
      db.concepts[as.pred.name].insert(as.args[0]);
  }
  return db;
}

namespace detail {

inline const std::set<std::string>& concept_ext(const FiniteInterpretation& db,
                                                const std::string& name) {
  static const std::set<std::string> empty;
  auto it = db.concepts.find(name);
  return it == db.concepts.end() ? empty : it->second;
}

inline const std::set<std::pair<std::string, std::string>>& role_ext(
    const FiniteInterpretation& db, const std::string& name) {
  static const std::set<std::pair<std::string, std::string>> empty;
  auto it = db.roles.find(name);
  return it == db.roles.end() ? empty : it->second;
}

struct Evaluator {
  const FiniteInterpretation& db;
  std::map<std::string, std::string> binding;

  std::optional<std::string> value(const Term& t) const {
    if (!t.var) return t.name;
    auto it = binding.find(t.name);
    if (it == binding.end()) return std::nullopt;
    return it->second;
  }

  // candidate extensions of one atom under the current binding
  std::vector<std::map<std::string, std::string>> extensions(const Atom& at) const {
    std::vector<std::map<std::string, std::string>> out;
    if (!at.pred.role) {
      auto v = value(at.args[0]);
      const auto& ext = concept_ext(db, at.pred.name);
      if (v) {
        if (ext.count(*v)) out.push_back({});
      } else {
        for (const std::string& e : ext) out.push_back({{at.args[0].name, e}});
      }
      return out;
    }
    auto v1 = value(at.args[0]);
    auto v2 = value(at.args[1]);
    for (const auto& [x, y] : role_ext(db, at.pred.name)) {
      if (v1 && *v1 != x) continue;
      if (v2 && *v2 != y) continue;
      std::map<std::string, std::string> ext;
      if (!v1) ext[at.args[0].name] = x;
      if (!v2) {
        // same unbound variable in both positions must take one value
        if (!v1 && at.args[1].var && at.args[0].var && at.args[0].name == at.args[1].name) {
          if (x != y) continue;
        } else {
          ext[at.args[1].name] = y;
        }
      }
      out.push_back(std::move(ext));
    }
    return out;
  }

  template <typename Emit>
  bool search(std::vector<Atom> remaining, const Emit& emit) {
    if (remaining.empty()) return emit(binding);
    // most constrained atom first
    size_t best = 0, best_count = SIZE_MAX;
    std::vector<std::vector<std::map<std::string, std::string>>> exts(remaining.size());
    for (size_t i = 0; i < remaining.size(); ++i) {
      exts[i] = extensions(remaining[i]);
      if (exts[i].size() < best_count) {
        best_count = exts[i].size();
        best = i;
      }
      if (best_count == 0) return false;
    }
    Atom chosen = remaining[best];
    remaining.erase(remaining.begin() + best);
    for (const auto& ext : exts[best]) {
      for (const auto& [v, e] : ext) binding[v] = e;
      if (search(remaining, emit)) return true;
      for (const auto& [v, e] : ext) binding.erase(v);
    }
    return false;
  }
};

}  // namespace detail

// All matches of a CQ, as bindings of its variables.
inline std::vector<Match> matches_of(const CQ& cq, const FiniteInterpretation& db) {
  std::vector<Match> out;
  detail::Evaluator ev{db, {}};
  std::vector<Atom> atoms(cq.body.begin(), cq.body.end());
  ev.search(atoms, [&](const std::map<std::string, std::string>& b) {
    out.push_back(Match{b});
    return false;  // keep enumerating
  });
  return out;
}

inline AnswerSet evaluate_cq(const CQ& cq, const FiniteInterpretation& db) {
  AnswerSet out;
  detail::Evaluator ev{db, {}};
  std::vector<Atom> atoms(cq.body.begin(), cq.body.end());
  ev.search(atoms, [&](const std::map<std::string, std::string>& b) {
    std::vector<std::string> tuple;
    for (const std::string& v : cq.head) tuple.push_back(b.at(v));
    out.insert(std::move(tuple));
    return false;
  });
  return out;
}

inline AnswerSet evaluate(const UCQ& q, const FiniteInterpretation& db) {
  AnswerSet out;
  for (const CQ& cq : q.disjuncts) {
    AnswerSet part = evaluate_cq(cq, db);
    out.insert(part.begin(), part.end());
  }
  return out;
}

inline AnswerSet evaluate(const Reformulation& r, const FiniteInterpretation& db) {
  AnswerSet out;
  for (const CQ& cq : r.disjuncts) {
    AnswerSet part = evaluate_cq(cq, db);
    out.insert(part.begin(), part.end());
  }
  return out;
}

// Certain answers; the empty optional marks an inconsistent ontology, whose
// certain answer set would vacuously be every tuple.
inline std::optional<AnswerSet> certain_answers(const UCQ& q, const TBox& t, const ABox& a) {
  if (!is_consistent_una(t, a)) return std::nullopt;
  return evaluate(perfect_reformulation(q, t), db_of(a));
}

inline bool is_certain(const UCQ& q, const TBox& t, const ABox& a,
                       const std::vector<std::string>& tuple) {
  if (tuple.size() != q.disjuncts.front().head.size())
    throw ArityMismatch("tuple length differs from query arity");
  auto cert = certain_answers(q, t, a);
  if (!cert) return true;  // vacuous over no models
  return cert->count(tuple) > 0;
}

// Entailment of a single ABox assertion, via the atomic query built from it.
// An inconsistent ontology entails everything.
inline bool entails_assertion(const TBox& t, const ABox& a, const Assertion& alpha) {
  require_valid(t);
  if (!is_consistent_una(t, a)) return true;
  CQ cq;
  std::vector<std::string> tuple = alpha.args;
  if (alpha.pred.role) {
    cq.head = {"x", "y"};
    cq.body.insert(atom2(alpha.pred.name, Term::variable("x"), Term::variable("y")));
  } else {
    cq.head = {"x"};
    cq.body.insert(atom1(alpha.pred.name, Term::variable("x")));
  }
  UCQ q{{cq}};
  return is_certain(q, t, a, tuple);
}

}  // namespace qx
