#pragma once

// Text formats: TBox, ABox, query, and explanation files, plus the small
// fragments used on the command line (assertions, tuples). Parsers throw
// ParseError with a line number; printers emit text the parsers accept,
// producing structurally equal values.

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "qx/model.hpp"
#include "qx/reductions.hpp"

namespace qx {

namespace detail {

inline bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha((unsigned char)s[0])) return false;
  for (char c : s)
    if (!std::isalnum((unsigned char)c) && c != '_') return false;
  return true;
}

inline std::string strip(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string check_name(const std::string& s, size_t lineno, bool allow_anonymous) {
  if (allow_anonymous && is_anonymous(s)) {
    std::string rest = s.substr(2);
    if (!rest.empty() && valid_identifier(rest)) return s;
    throw ParseError("line " + std::to_string(lineno) + ": bad anonymous individual '" + s + "'");
  }
  if (!valid_identifier(s))
    throw ParseError("line " + std::to_string(lineno) + ": bad identifier '" + s + "'");
  if (s.rfind(fresh_prefix, 0) == 0)
    throw ParseError("line " + std::to_string(lineno) + ": reserved identifier '" + s + "'");
  return s;
}

// "name(arg)" or "name(arg1,arg2)"
struct ParsedAtom {
  std::string name;
  std::vector<std::string> args;
};

inline ParsedAtom split_atom(const std::string& text, size_t lineno) {
  size_t open = text.find('(');
  size_t close = text.rfind(')');
  if (open == std::string::npos || close != text.size() - 1 || close < open)
    throw ParseError("line " + std::to_string(lineno) + ": expected name(args) in '" + text + "'");
  ParsedAtom out;
  out.name = strip(text.substr(0, open));
  std::string inner = text.substr(open + 1, close - open - 1);
  if (strip(inner).empty()) return out;
  std::stringstream ss(inner);
  std::string piece;
  while (std::getline(ss, piece, ',')) out.args.push_back(strip(piece));
  if (out.args.size() > 2)
    throw ParseError("line " + std::to_string(lineno) + ": too many arguments in '" + text + "'");
  return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::stringstream ss(s);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline bool inverse_marked(const std::string& tok) {
  return tok.size() > 1 && tok.back() == '-';
}

inline RoleExpr parse_role(const std::string& tok, size_t lineno) {
  if (inverse_marked(tok)) return RoleExpr{check_name(tok.substr(0, tok.size() - 1), lineno, false), true};
  return RoleExpr{check_name(tok, lineno, false), false};
}

}  // namespace detail

// TBox text: one axiom per line, "#" starts a comment. Lines are
//   "C1 ISA C2" | "C1 DISJ C2" | "R1 ISA R2" | "R1 DISJ R2" | "FUNCT R"
// with basic concepts written "A", "EXISTS R", "EXISTS R-" and roles "R",
// "R-". An ISA or DISJ between two bare identifiers reads as a concept
// axiom unless either name is used as a role elsewhere in the file
// (EXISTS, FUNCT, or an inverse marker).
inline TBox parse_tbox(const std::string& text) {
  std::set<std::string> role_names;
  struct Line {
    size_t no;
    std::vector<std::string> toks;
  };
  std::vector<Line> lines;
  {
    std::stringstream ss(text);
    std::string raw;
    size_t no = 0;
    while (std::getline(ss, raw)) {
      ++no;
      std::string s = detail::strip(raw);
      if (s.empty()) continue;
      lines.push_back({no, detail::split_ws(s)});
    }
  }
  // first pass: collect role evidence
  for (const Line& ln : lines) {
    const auto& t = ln.toks;
    for (size_t i = 0; i < t.size(); ++i) {
      if (t[i] == "EXISTS" && i + 1 < t.size())
        role_names.insert(detail::parse_role(t[i + 1], ln.no).name);
      else if (t[i] == "FUNCT" && i + 1 < t.size())
        role_names.insert(detail::parse_role(t[i + 1], ln.no).name);
      else if (detail::inverse_marked(t[i]))
        role_names.insert(t[i].substr(0, t[i].size() - 1));
    }
  }
  // evidence propagates across bare inclusions: in "R ISA S" either side
  // being a known role makes the line a role axiom, so both names are roles
  for (bool changed = true; changed;) {
    changed = false;
    for (const Line& ln : lines) {
      const auto& t = ln.toks;
      if (t.size() != 3 || (t[1] != "ISA" && t[1] != "DISJ")) continue;
      auto base = [](const std::string& tok) {
        return detail::inverse_marked(tok) ? tok.substr(0, tok.size() - 1) : tok;
      };
      std::string l = base(t[0]), r = base(t[2]);
      if (role_names.count(l) || role_names.count(r)) {
        if (role_names.insert(l).second) changed = true;
        if (role_names.insert(r).second) changed = true;
      }
    }
  }

  // a side of an axiom: either a basic concept or a role expression
  struct Side {
    bool role;
    BasicConcept bc;
    RoleExpr re;
  };
  auto parse_side = [&](const std::vector<std::string>& t, size_t& i, size_t lineno) -> Side {
    if (t[i] == "EXISTS") {
      if (i + 1 >= t.size()) throw ParseError("line " + std::to_string(lineno) + ": EXISTS needs a role");
      RoleExpr r = detail::parse_role(t[i + 1], lineno);
      i += 2;
      return {false, BasicConcept::exists(r), {}};
    }
    std::string tok = t[i++];
    if (detail::inverse_marked(tok)) return {true, {}, detail::parse_role(tok, lineno)};
    std::string name = detail::check_name(tok, lineno, false);
    if (role_names.count(name)) return {true, {}, RoleExpr{name, false}};
    return {false, BasicConcept::atomic(name), {}};
  };

  TBox out;
  for (const Line& ln : lines) {
    const auto& t = ln.toks;
    if (t[0] == "FUNCT") {
      if (t.size() != 2) throw ParseError("line " + std::to_string(ln.no) + ": FUNCT takes one role");
      out.axioms.insert(Funct{detail::parse_role(t[1], ln.no)});
      continue;
    }
    size_t i = 0;
    Side lhs = parse_side(t, i, ln.no);
    if (i >= t.size() || (t[i] != "ISA" && t[i] != "DISJ"))
      throw ParseError("line " + std::to_string(ln.no) + ": expected ISA or DISJ");
    std::string op = t[i++];
    Side rhs = parse_side(t, i, ln.no);
    if (i != t.size()) throw ParseError("line " + std::to_string(ln.no) + ": trailing tokens");
    if (lhs.role != rhs.role)
      throw ParseError("line " + std::to_string(ln.no) + ": cannot mix a role with a concept");
    if (lhs.role) {
      if (op == "ISA") out.axioms.insert(RoleIncl{lhs.re, rhs.re});
      else out.axioms.insert(RoleDisj{lhs.re, rhs.re});
    } else {
      if (op == "ISA") out.axioms.insert(ConceptIncl{lhs.bc, rhs.bc});
      else out.axioms.insert(ConceptDisj{lhs.bc, rhs.bc});
    }
  }
  return out;
}

inline std::string print_role(const RoleExpr& r) { return r.inverted ? r.name + "-" : r.name; }

inline std::string print_basic(const BasicConcept& b) {
  if (!b.existential) return b.name;
  return "EXISTS " + print_role(b.role());
}

inline std::string print_tbox(const TBox& t) {
  std::string out;
  for (const Axiom& ax : t.axioms) {
    if (auto* ci = std::get_if<ConceptIncl>(&ax))
      out += print_basic(ci->lhs) + " ISA " + print_basic(ci->rhs);
    else if (auto* cd = std::get_if<ConceptDisj>(&ax))
      out += print_basic(cd->lhs) + " DISJ " + print_basic(cd->rhs);
    else if (auto* ri = std::get_if<RoleIncl>(&ax))
      out += print_role(ri->lhs) + " ISA " + print_role(ri->rhs);
    else if (auto* rd = std::get_if<RoleDisj>(&ax))
      out += print_role(rd->lhs) + " DISJ " + print_role(rd->rhs);
    else if (auto* f = std::get_if<Funct>(&ax))
      out += "FUNCT " + print_role(f->role);
    out += "\n";
  }
  return out;
}

// ABox text: one assertion per line, "A(c)" or "P(c,d)". Anonymous
// individuals ("_:" prefix) are accepted only when allow_anonymous is set
// (explanation files).
inline ABox parse_abox(const std::string& text, bool allow_anonymous = false) {
  ABox out;
  std::stringstream ss(text);
  std::string raw;
  size_t no = 0;
  while (std::getline(ss, raw)) {
    ++no;
    std::string s = detail::strip(raw);
    if (s.empty()) continue;
    detail::ParsedAtom at = detail::split_atom(s, no);
    detail::check_name(at.name, no, false);
    if (at.args.empty()) throw ParseError("line " + std::to_string(no) + ": assertion needs arguments");
    for (std::string& arg : at.args) arg = detail::check_name(arg, no, allow_anonymous);
    if (at.args.size() == 1) out.insert(assert1(at.name, at.args[0]));
    else out.insert(assert2(at.name, at.args[0], at.args[1]));
  }
  return out;
}

inline std::string print_abox(const ABox& a) {
  std::string out;
  for (const Assertion& as : a) {
    out += as.pred.name + "(" + as.args[0];
    if (as.args.size() == 2) out += "," + as.args[1];
    out += ")\n";
  }
  return out;
}

// Query text: one CQ per line, "q(x,z) <- teach(x,y), enroll(z,y)"; multiple
// lines with the same head form a UCQ; "q()" heads a Boolean query.
// Lowercase-initial terms are variables, uppercase-initial ones individuals.
inline UCQ parse_query(const std::string& text) {
  UCQ out;
  std::string head_name;
  std::vector<std::string> head_vars;
  std::stringstream ss(text);
  std::string raw;
  size_t no = 0;
  while (std::getline(ss, raw)) {
    ++no;
    std::string s = detail::strip(raw);
    if (s.empty()) continue;
    size_t arrow = s.find("<-");
    if (arrow == std::string::npos)
      throw ParseError("line " + std::to_string(no) + ": expected 'head <- body'");
    detail::ParsedAtom head = detail::split_atom(detail::strip(s.substr(0, arrow)), no);
    detail::check_name(head.name, no, false);
    for (const std::string& v : head.args) {
      detail::check_name(v, no, false);
      if (!std::islower((unsigned char)v[0]))
        throw ParseError("line " + std::to_string(no) + ": head term '" + v + "' is not a variable");
    }
    if (out.disjuncts.empty()) {
      head_name = head.name;
      head_vars = head.args;
    } else if (head.name != head_name || head.args != head_vars) {
      throw ParseError("line " + std::to_string(no) + ": disjuncts must share one head");
    }

    CQ cq;
    cq.head = head.args;
    std::string body = detail::strip(s.substr(arrow + 2));
    if (body.empty()) throw ParseError("line " + std::to_string(no) + ": empty body");
    // split on commas outside parentheses
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : body) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    for (const std::string& part : parts) {
      detail::ParsedAtom at = detail::split_atom(detail::strip(part), no);
      detail::check_name(at.name, no, false);
      if (at.args.empty())
        throw ParseError("line " + std::to_string(no) + ": atom needs arguments");
      std::vector<Term> terms;
      for (const std::string& arg : at.args) {
        detail::check_name(arg, no, false);
        terms.push_back(std::islower((unsigned char)arg[0]) ? Term::variable(arg)
                                                            : Term::individual(arg));
      }
      if (terms.size() == 1) cq.body.insert(atom1(at.name, terms[0]));
      else cq.body.insert(atom2(at.name, terms[0], terms[1]));
    }
    out.disjuncts.push_back(std::move(cq));
  }
  if (out.disjuncts.empty()) throw ParseError("empty query file");
  require_safe(out);
  return out;
}

inline std::string print_cq(const CQ& cq) {
  std::string out = "q(";
  for (size_t i = 0; i < cq.head.size(); ++i) out += (i ? "," : "") + cq.head[i];
  out += ") <- ";
  bool first = true;
  for (const Atom& at : cq.body) {
    if (!first) out += ", ";
    first = false;
    out += at.pred.name + "(";
    for (size_t i = 0; i < at.args.size(); ++i) out += (i ? "," : "") + at.args[i].name;
    out += ")";
  }
  return out;
}

inline std::string print_query(const UCQ& q) {
  std::string out;
  for (const CQ& cq : q.disjuncts) out += print_cq(cq) + "\n";
  return out;
}

// A single assertion as written on the command line, "A(c)" or "P(c,d)".
inline Assertion parse_assertion(const std::string& text, bool allow_anonymous = false) {
  detail::ParsedAtom at = detail::split_atom(detail::strip(text), 1);
  detail::check_name(at.name, 1, false);
  if (at.args.empty()) throw ParseError("assertion needs arguments");
  for (std::string& arg : at.args) arg = detail::check_name(arg, 1, allow_anonymous);
  if (at.args.size() == 1) return assert1(at.name, at.args[0]);
  return assert2(at.name, at.args[0], at.args[1]);
}

inline std::string print_assertion(const Assertion& as) {
  std::string out = as.pred.name + "(" + as.args[0];
  if (as.args.size() == 2) out += "," + as.args[1];
  return out + ")";
}

// Comma-separated individual tuple, e.g. "Carlo" or "Carlo,KR"; empty for
// Boolean queries.
inline std::vector<std::string> parse_tuple(const std::string& text) {
  std::vector<std::string> out;
  if (detail::strip(text).empty()) return out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) out.push_back(detail::check_name(detail::strip(piece), 1, false));
  return out;
}

// Comma-separated predicate names resolved against the predicates of the
// problem; unknown names are an error.
inline Signature parse_sigma(const std::string& text, const Signature& known) {
  Signature out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    std::string name = detail::strip(piece);
    if (name.empty()) continue;
    bool found = false;
    for (const Pred& pr : known)
      if (pr.name == name) {
        out.insert(pr);
        found = true;
      }
    if (!found) throw ParseError("unknown predicate in signature: " + name);
  }
  return out;
}

}  // namespace qx
