// Command-line front end: consistency checking, query rewriting, certain
// answers, explanation reasoning (existence, recognition, relevance,
// necessity, enumeration), query non-emptiness, hardness-gadget instance
// generation, and a fuzzing harness that cross-checks the engine against
// the brute-force oracle.
//
// Exit codes: 0 success / "yes", 1 a "no" decision verdict, 2 input errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qx/abduction.hpp"
#include "qx/io.hpp"
#include "qx/model.hpp"
#include "qx/testkit.hpp"

using nlohmann::json;
using namespace qx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Order parse_order(const std::string& s) {
  if (s == "none") return Order::none;
  if (s == "subset") return Order::subset;
  if (s == "card") return Order::card;
  throw ParseError("unknown order: " + s);
}

json assertion_json(const Assertion& as) {
  return json{{"predicate", as.pred.name}, {"role", as.pred.role}, {"args", as.args}};
}

json abox_json(const ABox& a) {
  json out = json::array();
  for (const Assertion& as : a) out.push_back(assertion_json(as));
  return out;
}

void emit(bool json_mode, const json& j, const std::string& text) {
  if (json_mode)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

struct ProblemFlags {
  std::string tbox, abox, query, tuple, sigma;

  void attach(CLI::App* cmd, bool with_abox = true) {
    cmd->add_option("--tbox", tbox, "TBox file")->required();
    if (with_abox) cmd->add_option("--abox", abox, "ABox file")->required();
    cmd->add_option("--query", query, "query file")->required();
    cmd->add_option("--tuple", tuple, "comma-separated answer tuple");
    cmd->add_option("--sigma", sigma, "comma-separated abducible predicates")->required();
  }

  QAP load() const {
    QAP p;
    p.tbox = parse_tbox(slurp(tbox));
    if (!abox.empty()) p.abox = parse_abox(slurp(abox));
    p.query = parse_query(slurp(query));
    p.tuple = parse_tuple(tuple);
    p.sigma = parse_sigma(sigma, sigma_of(p.tbox, p.abox, p.query));
    validate_qap(p);
    return p;
  }
};

DirectedGraph parse_graph(size_t vertices, const std::string& edges) {
  DirectedGraph g;
  g.vertex_count = vertices;
  std::stringstream ss(edges);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    size_t dash = piece.find('-');
    if (dash == std::string::npos) throw ParseError("bad edge (want a-b): " + piece);
    size_t a = std::stoul(piece.substr(0, dash));
    size_t b = std::stoul(piece.substr(dash + 1));
    if (a >= vertices || b >= vertices) throw ParseError("edge endpoint out of range: " + piece);
    g.edges.insert({a, b});
  }
  return g;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

void write_gadget(const std::string& dir, const QAP& p, const ABox* candidate,
                  const Assertion* alpha) {
  std::filesystem::path d(dir);
  std::filesystem::create_directories(d);
  write_file(d / "tbox.txt", print_tbox(p.tbox));
  write_file(d / "abox.txt", print_abox(p.abox));
  write_file(d / "query.txt", print_query(p.query));
  std::string sigma;
  for (const Pred& pr : p.sigma) sigma += (sigma.empty() ? "" : ",") + pr.name;
  write_file(d / "sigma.txt", sigma + "\n");
  if (candidate) write_file(d / "explanation.txt", print_abox(*candidate));
  if (alpha) write_file(d / "assertion.txt", print_assertion(*alpha) + "\n");
}

std::string tuple_text(const std::vector<std::string>& t) {
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
  return s;
}

// one-line rendering of an explanation
std::string abox_line(const ABox& a) {
  std::string s;
  for (const Assertion& as : a) s += (s.empty() ? "" : ", ") + print_assertion(as);
  return s.empty() ? "(empty)" : s;
}

int run_fuzz(size_t seeds, const FuzzProfile& base, bool json_mode) {
  size_t checked = 0, disagreements = 0;
  json details = json::array();
  for (size_t seed = 1; seed <= seeds; ++seed) {
    FuzzProfile prof = base;
    prof.unrestricted_sigma = seed % 2 == 0;
    QAP p = random_qap(seed, prof);
    std::set<ABox> bf;
    try {
      bf = brute_force_explanations(p);
    } catch (const BudgetTooLarge&) {
      continue;
    }
    bool engine_exists = exists_explanation(p).has_value();
    bool oracle_exists = !bf.empty();
    ++checked;
    if (engine_exists != oracle_exists) {
      ++disagreements;
      details.push_back({{"seed", seed}, {"problem", "exist"}});
    }
  }
  json j{{"command", "fuzz"},
         {"seeds", seeds},
         {"checked", checked},
         {"disagreements", disagreements},
         {"details", details}};
  std::string text = "seeds: " + std::to_string(seeds) + "\nchecked: " + std::to_string(checked) +
                     "\ndisagreements: " + std::to_string(disagreements) + "\n";
  emit(json_mode, j, text);
  return disagreements == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explanations for negative query answers over lightweight ontologies"};
  app.require_subcommand(1);
  bool json_mode = false;
  app.add_flag("--json", json_mode, "machine-readable output");

  // check
  std::string c_tbox, c_abox;
  bool no_una = false;
  CLI::App* check = app.add_subcommand("check", "ontology consistency");
  check->add_option("--tbox", c_tbox)->required();
  check->add_option("--abox", c_abox)->required();
  check->add_flag("--no-una", no_una, "drop the unique name assumption");

  // rewrite
  std::string r_tbox, r_query;
  CLI::App* rewrite = app.add_subcommand("rewrite", "perfect reformulation");
  rewrite->add_option("--tbox", r_tbox)->required();
  rewrite->add_option("--query", r_query)->required();

  // cert
  std::string ce_tbox, ce_abox, ce_query, ce_tuple;
  CLI::App* cert = app.add_subcommand("cert", "certain answers");
  cert->add_option("--tbox", ce_tbox)->required();
  cert->add_option("--abox", ce_abox)->required();
  cert->add_option("--query", ce_query)->required();
  CLI::Option* ce_tuple_opt = cert->add_option("--tuple", ce_tuple);

  // abduction commands
  ProblemFlags exist_f, rec_f, rel_f, nec_f, enum_f;
  std::string rec_expl, rel_assert, nec_assert;
  std::string exist_order = "none", rec_order = "none", rel_order = "none", nec_order = "none",
              enum_order;
  CLI::App* exist = app.add_subcommand("exist", "does an explanation exist");
  exist_f.attach(exist);
  exist->add_option("--order", exist_order, "none|subset|card");
  CLI::App* rec = app.add_subcommand("rec", "recognize an explanation");
  rec_f.attach(rec);
  rec->add_option("--order", rec_order, "none|subset|card");
  rec->add_option("--explanation", rec_expl, "candidate explanation file")->required();
  CLI::App* rel = app.add_subcommand("rel", "assertion in some (minimal) explanation");
  rel_f.attach(rel);
  rel->add_option("--order", rel_order, "none|subset|card");
  rel->add_option("--assertion", rel_assert, "assertion, e.g. enroll(Beppe,IDB)")->required();
  CLI::App* nec = app.add_subcommand("nec", "assertion in every (minimal) explanation");
  nec_f.attach(nec);
  nec->add_option("--order", nec_order, "none|subset|card");
  nec->add_option("--assertion", nec_assert, "assertion, e.g. enroll(Beppe,IDB)")->required();
  CLI::App* enumerate = app.add_subcommand("enumerate", "all minimal explanations");
  enum_f.attach(enumerate);
  enumerate->add_option("--order", enum_order, "subset|card")->required();

  // nonempty
  std::string ne_tbox, ne_query, ne_sigma;
  CLI::App* nonempty = app.add_subcommand("nonempty", "query non-emptiness");
  nonempty->add_option("--tbox", ne_tbox)->required();
  nonempty->add_option("--query", ne_query)->required();
  nonempty->add_option("--sigma", ne_sigma)->required();

  // gadget
  CLI::App* gadget = app.add_subcommand("gadget", "emit hardness-gadget instances");
  gadget->require_subcommand(1);
  size_t g_v1 = 0, g_v2 = 0;
  std::string g_e1, g_e2, g_out;
  CLI::App* ghom = gadget->add_subcommand("hom", "graph homomorphism gadget");
  ghom->add_option("--vertices", g_v1, "vertex count of the source graph")->required();
  ghom->add_option("--edges", g_e1, "edges a-b,c-d of the source graph");
  ghom->add_option("--vertices2", g_v2, "vertex count of the target graph")->required();
  ghom->add_option("--edges2", g_e2, "edges of the target graph");
  ghom->add_option("--out", g_out, "output directory")->required();
  CLI::App* gvc = gadget->add_subcommand("vc", "odd minimum vertex cover gadget");
  gvc->add_option("--vertices", g_v1)->required();
  gvc->add_option("--edges", g_e1);
  gvc->add_option("--out", g_out)->required();
  CLI::App* ghp = gadget->add_subcommand("hp", "Hamiltonian path pair gadget");
  ghp->add_option("--vertices", g_v1)->required();
  ghp->add_option("--edges", g_e1);
  ghp->add_option("--vertices2", g_v2)->required();
  ghp->add_option("--edges2", g_e2);
  ghp->add_option("--out", g_out)->required();

  // fuzz
  size_t f_seeds = 100;
  std::string f_profile;
  CLI::App* fuzz = app.add_subcommand("fuzz", "engine vs brute-force oracle");
  fuzz->add_option("--seeds", f_seeds, "number of seeds");
  fuzz->add_option("--profile", f_profile, "JSON profile file");

  try {
    app.parse(argc, argv);

    if (*check) {
      TBox t = parse_tbox(slurp(c_tbox));
      ABox a = parse_abox(slurp(c_abox));
      require_valid(t);
      bool ok = no_una ? is_consistent_nouna(t, a) : is_consistent_una(t, a);
      emit(json_mode, json{{"command", "check"}, {"una", !no_una}, {"consistent", ok}},
           ok ? "consistent\n" : "inconsistent\n");
      return ok ? 0 : 1;
    }

    if (*rewrite) {
      TBox t = parse_tbox(slurp(r_tbox));
      UCQ q = parse_query(slurp(r_query));
      Reformulation ref = perfect_reformulation(q, t);
      json disj = json::array();
      std::string text;
      for (const CQ& cq : ref.disjuncts) {
        disj.push_back(print_cq(cq));
        text += print_cq(cq) + "\n";
      }
      emit(json_mode, json{{"command", "rewrite"}, {"disjuncts", disj}}, text);
      return 0;
    }

    if (*cert) {
      TBox t = parse_tbox(slurp(ce_tbox));
      ABox a = parse_abox(slurp(ce_abox));
      UCQ q = parse_query(slurp(ce_query));
      if (ce_tuple_opt->count() > 0 || q.disjuncts.front().head.empty()) {
        std::vector<std::string> tuple = parse_tuple(ce_tuple);
        bool yes = is_certain(q, t, a, tuple);
        emit(json_mode,
             json{{"command", "cert"}, {"tuple", tuple}, {"certain", yes}},
             yes ? "certain\n" : "not certain\n");
        return yes ? 0 : 1;
      }
      auto answers = certain_answers(q, t, a);
      if (!answers) {
        emit(json_mode, json{{"command", "cert"}, {"consistent", false}}, "inconsistent\n");
        return 0;
      }
      json ja = json::array();
      std::string text;
      for (const auto& tup : *answers) {
        ja.push_back(tup);
        text += tuple_text(tup) + "\n";
      }
      emit(json_mode, json{{"command", "cert"}, {"answers", ja}}, text);
      return 0;
    }

    if (*exist) {
      QAP p = exist_f.load();
      parse_order(exist_order);  // accepted for symmetry; existence is order-independent
      auto e = exists_explanation(p);
      json j{{"command", "exist"}, {"verdict", e.has_value()}};
      std::string text = e ? "yes\n" : "no\n";
      if (e) {
        j["witness"] = abox_json(e->assertions);
        text += abox_line(e->assertions) + "\n";
      }
      emit(json_mode, j, text);
      return e ? 0 : 1;
    }

    if (*rec) {
      QAP p = rec_f.load();
      ABox e = parse_abox(slurp(rec_expl), true);
      bool yes = recognize(p, e, parse_order(rec_order));
      emit(json_mode, json{{"command", "rec"}, {"order", rec_order}, {"verdict", yes}},
           yes ? "yes\n" : "no\n");
      return yes ? 0 : 1;
    }

    if (*rel) {
      QAP p = rel_f.load();
      Assertion alpha = parse_assertion(rel_assert, true);
      Order order = parse_order(rel_order);
      bool yes = is_relevant(p, alpha, order);
      json j{{"command", "rel"}, {"order", rel_order}, {"verdict", yes}};
      std::string text = yes ? "yes\n" : "no\n";
      if (yes) {
        // witness: a suitable explanation containing the assertion
        std::optional<ABox> witness;
        if (order == Order::none) {
          if (auto w = exists_explanation(rel_to_exist(p, alpha))) {
            ABox full = w->assertions;
            full.insert(alpha);
            witness = full;
          }
        } else {
          for (const Explanation& ex : enumerate_minimal(p, order))
            if (ex.assertions.count(alpha)) {
              witness = ex.assertions;
              break;
            }
        }
        if (witness) {
          j["witness"] = abox_json(*witness);
          text += abox_line(*witness) + "\n";
        }
      }
      emit(json_mode, j, text);
      return yes ? 0 : 1;
    }

    if (*nec) {
      QAP p = nec_f.load();
      Assertion alpha = parse_assertion(nec_assert, true);
      bool yes = is_necessary(p, alpha, parse_order(nec_order));
      emit(json_mode, json{{"command", "nec"}, {"order", nec_order}, {"verdict", yes}},
           yes ? "yes\n" : "no\n");
      return yes ? 0 : 1;
    }

    if (*enumerate) {
      QAP p = enum_f.load();
      Order order = parse_order(enum_order);
      if (order == Order::none) throw ParseError("enumerate needs --order subset or card");
      std::vector<Explanation> all = enumerate_minimal(p, order);
      json ja = json::array();
      std::string text;
      for (const Explanation& ex : all) {
        ja.push_back(abox_json(ex.assertions));
        text += abox_line(ex.assertions) + "\n";
      }
      emit(json_mode, json{{"command", "enumerate"}, {"order", enum_order}, {"explanations", ja}},
           text);
      return 0;
    }

    if (*nonempty) {
      TBox t = parse_tbox(slurp(ne_tbox));
      UCQ q = parse_query(slurp(ne_query));
      Signature sigma = parse_sigma(ne_sigma, sigma_of(t, {}, q));
      bool yes = is_query_nonempty(t, q, sigma);
      emit(json_mode, json{{"command", "nonempty"}, {"verdict", yes}}, yes ? "yes\n" : "no\n");
      return yes ? 0 : 1;
    }

    if (*gadget) {
      if (*ghom) {
        auto [p, e] = gadget_homomorphism(parse_graph(g_v1, g_e1), parse_graph(g_v2, g_e2));
        write_gadget(g_out, p, &e, nullptr);
      } else if (*gvc) {
        auto [p, alpha] = gadget_odd_min_vertex_cover(parse_graph(g_v1, g_e1));
        write_gadget(g_out, p, nullptr, &alpha);
      } else if (*ghp) {
        auto [p, e] = gadget_hp_nohp(parse_graph(g_v1, g_e1), parse_graph(g_v2, g_e2));
        write_gadget(g_out, p, &e, nullptr);
      }
      emit(json_mode, json{{"command", "gadget"}, {"out", g_out}}, "written: " + g_out + "\n");
      return 0;
    }

    if (*fuzz) {
      FuzzProfile prof;
      if (!f_profile.empty()) {
        json j = json::parse(slurp(f_profile));
        prof.max_axioms = j.value("max_axioms", prof.max_axioms);
        prof.max_assertions = j.value("max_assertions", prof.max_assertions);
        prof.max_query_atoms = j.value("max_query_atoms", prof.max_query_atoms);
        prof.max_disjuncts = j.value("max_disjuncts", prof.max_disjuncts);
        prof.num_concepts = j.value("num_concepts", prof.num_concepts);
        prof.num_roles = j.value("num_roles", prof.num_roles);
        prof.num_individuals = j.value("num_individuals", prof.num_individuals);
        prof.force_instance_query = j.value("force_instance_query", prof.force_instance_query);
      }
      return run_fuzz(f_seeds, prof, json_mode);
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
