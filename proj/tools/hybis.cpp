// Command-line front end: parsing, model checking, the two translations,
// bisimulation families, oracle queries, and fixture emission.
//
// Exit codes: 0 success / "true" verdicts, 1 "false" verdicts, 2 usage or
// input errors, 3 refused by a resource guard.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hybis/bisim.hpp"
#include "hybis/fixtures.hpp"
#include "hybis/model.hpp"
#include "hybis/oracle.hpp"
#include "hybis/semantics.hpp"
#include "hybis/syntax.hpp"
#include "hybis/translate.hpp"

namespace {

using hybis::DomainError;
using hybis::FeatureSet;
using hybis::HybridFormula;
using hybis::KripkeModel;
using hybis::ModelError;
using hybis::PointedModel;
using hybis::Signature;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Signature load_signature(const std::string& path) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError("signature file " + path + " is not valid JSON: " +
                     e.what());
  }
  if (!doc.is_object())
    throw ModelError("signature file needs {\"props\": [...], \"noms\": [...]}");
  Signature sig;
  if (doc.contains("props"))
    for (const auto& p : doc["props"]) sig.props.push_back(p.get<std::string>());
  if (doc.contains("noms"))
    for (const auto& s : doc["noms"]) sig.noms.push_back(s.get<std::string>());
  sig.validate();
  return sig;
}

// Working signature for formula-only commands: bare identifiers in atom
// position are propositions, 'names are nominals; identifiers right after a
// binder keyword are world variables and contribute nothing.
Signature infer_signature(const std::string& text) {
  Signature sig;
  auto add = [](std::vector<std::string>& names, const std::string& n) {
    for (const std::string& seen : names)
      if (seen == n) return;
    names.push_back(n);
  };
  size_t i = 0;
  auto read_ident = [&]() {
    size_t start = i;
    while (i < text.size() &&
           (std::islower(static_cast<unsigned char>(text[i])) ||
            std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      ++i;
    return text.substr(start, i - start);
  };
  bool after_binder = false;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\'') {
      ++i;
      add(sig.noms, read_ident());
      after_binder = false;
    } else if (c == '?') {
      ++i;
      read_ident();
      after_binder = false;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      const std::string ident = read_ident();
      if (ident == "down" || ident == "exists") {
        after_binder = true;
      } else if (after_binder || ident == "false" || ident == "true") {
        after_binder = false;
      } else {
        add(sig.props, ident);
      }
    } else {
      ++i;
    }
  }
  sig.validate();
  return sig;
}

Signature formula_signature(const std::string& text,
                            const std::string& sig_path) {
  return sig_path.empty() ? infer_signature(text) : load_signature(sig_path);
}

KripkeModel load_model_file(const std::string& path,
                            const std::string& sig_path) {
  std::optional<Signature> sig;
  if (!sig_path.empty()) sig = load_signature(sig_path);
  return hybis::load_model(read_file(path), sig);
}

hybis::WvarAssignment parse_assignments(const KripkeModel& m,
                                        const std::vector<std::string>& raw) {
  hybis::WvarAssignment env;
  for (const std::string& item : raw) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw DomainError("--assign expects name=world, got \"" + item + "\"");
    env.emplace_back(item.substr(0, eq), m.require_world(item.substr(eq + 1)));
  }
  return env;
}

void print_verdict(bool verdict, bool as_json) {
  if (as_json) {
    ordered_json doc;
    doc["verdict"] = verdict;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << (verdict ? "true" : "false") << "\n";
  }
}

ordered_json violations_json(const hybis::VerifyReport& rep) {
  ordered_json doc;
  doc["ok"] = rep.ok;
  doc["violations"] = ordered_json::array();
  for (const hybis::Violation& v : rep.violations) {
    ordered_json item;
    item["cond"] = to_string(v.cond);
    item["k"] = v.k;
    item["level"] = v.level;
    item["left"] = v.pair.left;
    item["right"] = v.pair.right;
    item["detail"] = v.detail;
    doc["violations"].push_back(std::move(item));
  }
  return doc;
}

std::string pair_names(const hybis::NamedPair& p) {
  std::string out = "(<";
  for (size_t i = 0; i + 1 < p.left.size(); ++i)
    out += (i ? "," : "") + p.left[i];
  out += ">, " + (p.left.empty() ? std::string("?") : p.left.back()) + "; <";
  for (size_t i = 0; i + 1 < p.right.size(); ++i)
    out += (i ? "," : "") + p.right[i];
  out += ">, " + (p.right.empty() ? std::string("?") : p.right.back()) + ")";
  return out;
}

int report_outcome(const hybis::VerifyReport& rep, bool as_json) {
  if (as_json) {
    std::cout << violations_json(rep).dump(2) << "\n";
    return rep.ok ? 0 : 1;
  }
  if (rep.ok) {
    std::cout << "ok\n";
    return 0;
  }
  for (const hybis::Violation& v : rep.violations) {
    std::cout << to_string(v.cond) << " k=" << v.k;
    if (v.level >= 0) std::cout << " level=" << v.level;
    std::cout << " " << pair_names(v.pair) << ": " << v.detail << "\n";
  }
  return 1;
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ModelError("cannot write " + out_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid modal logic toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  int rc = 0;

  // ---- parse -------------------------------------------------------------
  std::string parse_formula, parse_sig;
  bool parse_fol_flag = false;
  {
    CLI::App* sub = app.add_subcommand("parse", "parse and reprint a formula");
    sub->add_option("formula", parse_formula)->required();
    sub->add_flag("--fol", parse_fol_flag, "treat the input as first-order");
    sub->add_option("--sig", parse_sig, "signature file");
    sub->callback([&] {
      if (parse_fol_flag) {
        const hybis::FolFormula f = hybis::parse_fol(parse_formula);
        if (as_json) {
          ordered_json doc;
          doc["formula"] = to_string(f);
          std::cout << doc.dump(2) << "\n";
        } else {
          std::cout << to_string(f) << "\n";
        }
        return;
      }
      const Signature sig = formula_signature(parse_formula, parse_sig);
      const HybridFormula f = hybis::parse_hybrid(parse_formula, sig);
      if (as_json) {
        ordered_json doc;
        doc["formula"] = to_string(f);
        doc["degree"] = f.degree();
        doc["size"] = f.size();
        doc["features"] = hybis::features(f).to_string();
        std::cout << doc.dump(2) << "\n";
      } else {
        std::cout << to_string(f) << "\n";
      }
    });
  }

  // ---- check -------------------------------------------------------------
  std::string check_model, check_world, check_formula, check_sig;
  std::vector<std::string> check_assign;
  {
    CLI::App* sub =
        app.add_subcommand("check", "evaluate a formula at a world");
    sub->add_option("model", check_model)->required();
    sub->add_option("world", check_world)->required();
    sub->add_option("formula", check_formula)->required();
    sub->add_option("--assign", check_assign,
                    "world-variable binding name=world (repeatable)");
    sub->add_option("--sig", check_sig, "signature file");
    sub->callback([&] {
      const KripkeModel m = load_model_file(check_model, check_sig);
      const int w = m.require_world(check_world);
      const HybridFormula f = hybis::parse_hybrid(check_formula, m.sig());
      const bool verdict =
          sat_hybrid(m, parse_assignments(m, check_assign), w, f);
      print_verdict(verdict, as_json);
      rc = verdict ? 0 : 1;
    });
  }

  // ---- st ----------------------------------------------------------------
  std::string st_formula, st_sig;
  {
    CLI::App* sub = app.add_subcommand(
        "st", "standard translation of a hybrid formula to first-order form");
    sub->add_option("formula", st_formula)->required();
    sub->add_option("--sig", st_sig, "signature file");
    sub->callback([&] {
      const Signature sig = formula_signature(st_formula, st_sig);
      const hybis::FolFormula out =
          hybis::st(hybis::parse_hybrid(st_formula, sig));
      if (as_json) {
        ordered_json doc;
        doc["formula"] = to_string(out);
        std::cout << doc.dump(2) << "\n";
      } else {
        std::cout << to_string(out) << "\n";
      }
    });
  }

  // ---- sbt ---------------------------------------------------------------
  std::string sbt_formula;
  {
    CLI::App* sub = app.add_subcommand(
        "sbt", "back translation of a first-order formula to hybrid form");
    sub->add_option("formula", sbt_formula)->required();
    sub->callback([&] {
      const HybridFormula out = hybis::sbt(hybis::parse_fol(sbt_formula));
      if (as_json) {
        ordered_json doc;
        doc["formula"] = to_string(out);
        std::cout << doc.dump(2) << "\n";
      } else {
        std::cout << to_string(out) << "\n";
      }
    });
  }

  // ---- relativize ----------------------------------------------------------
  std::string rel_formula, rel_pred;
  {
    CLI::App* sub = app.add_subcommand(
        "relativize", "restrict a first-order formula's quantifiers to a predicate");
    sub->add_option("formula", rel_formula)->required();
    sub->add_option("predicate", rel_pred)->required();
    sub->callback([&] {
      const hybis::FolFormula out =
          hybis::relativise(hybis::parse_fol(rel_formula), rel_pred);
      std::cout << to_string(out) << "\n";
    });
  }

  // ---- psi-sigma -----------------------------------------------------------
  std::string ps_sigma, ps_phi, ps_pred = "P";
  {
    CLI::App* sub = app.add_subcommand(
        "psi-sigma", "combine a sentence and a one-variable formula");
    sub->add_option("sigma", ps_sigma)->required();
    sub->add_option("phi", ps_phi)->required();
    sub->add_option("--pred", ps_pred, "relativisation predicate");
    sub->callback([&] {
      const hybis::FolFormula out = hybis::psi_sigma(
          hybis::parse_fol(ps_sigma), hybis::parse_fol(ps_phi), ps_pred);
      std::cout << to_string(out) << "\n";
    });
  }

  // ---- bisim ---------------------------------------------------------------
  std::string bv_m, bv_n, bv_fam, bv_sig, bv_seed;
  std::string bm_m, bm_n, bm_sig;
  std::string bv_features, bm_features;
  int bm_k = 0, bm_l = 0;
  int bv_depth_below = -1;
  long long bm_cap = -1;
  {
    CLI::App* bisim = app.add_subcommand("bisim", "bisimulation families");
    bisim->require_subcommand(1);

    CLI::App* verify = bisim->add_subcommand(
        "verify", "check a relation or family against the gated conditions");
    verify->add_option("left", bv_m)->required();
    verify->add_option("right", bv_n)->required();
    verify->add_option("family", bv_fam)->required();
    verify->add_option("--features", bv_features, "e.g. down,nom");
    verify->add_option("--seed", bv_seed,
                       "require the constant tuples over w1,w2 at level 0");
    verify->add_option("--depth-below", bv_depth_below,
                       "only check pairs whose worlds sit above this depth");
    verify->add_option("--sig", bv_sig, "signature file");
    verify->callback([&] {
      const KripkeModel m = load_model_file(bv_m, bv_sig);
      const KripkeModel n = load_model_file(bv_n, bv_sig);
      const FeatureSet f = FeatureSet::parse(bv_features);
      const std::string text = read_file(bv_fam);
      const ordered_json doc = ordered_json::parse(text, nullptr, false);
      hybis::VerifyReport rep;
      if (doc.is_object() && doc.contains("pairs")) {
        rep = verify_plain_bisim(m, n, hybis::load_pair_relation(text), f.nom);
      } else if (doc.is_object() && doc.contains("L")) {
        std::optional<std::pair<std::string, std::string>> seed;
        if (!bv_seed.empty()) {
          const size_t comma = bv_seed.find(',');
          if (comma == std::string::npos)
            throw DomainError("--seed expects left,right world names");
          seed = {bv_seed.substr(0, comma), bv_seed.substr(comma + 1)};
        }
        rep = verify_kl_family(m, n, hybis::load_kl_family(text), f, seed);
      } else {
        std::optional<int> depth;
        if (bv_depth_below >= 0) depth = bv_depth_below;
        rep = verify_omega_family(m, n, hybis::load_omega_family(text), f,
                                  depth);
      }
      rc = report_outcome(rep, as_json);
    });

    CLI::App* maximal = bisim->add_subcommand(
        "maximal", "greatest family for the given bounds");
    maximal->add_option("left", bm_m)->required();
    maximal->add_option("right", bm_n)->required();
    maximal->add_option("--features", bm_features, "e.g. down,nom");
    maximal->add_option("--k", bm_k, "width bound")->required();
    maximal->add_option("--l", bm_l, "level bound")->required();
    maximal->add_option("--max-pairs", bm_cap, "pair-space guard");
    maximal->add_option("--sig", bm_sig, "signature file");
    maximal->callback([&] {
      const KripkeModel m = load_model_file(bm_m, bm_sig);
      const KripkeModel n = load_model_file(bm_n, bm_sig);
      const hybis::KlFamily fam = max_kl_family(
          m, n, FeatureSet::parse(bm_features), bm_k, bm_l, bm_cap);
      std::cout << save_kl_family(fam);
    });
  }

  // ---- equiv ---------------------------------------------------------------
  std::string eq_m, eq_wm, eq_n, eq_wn, eq_features, eq_sig;
  int eq_l = 0, eq_k = -1;
  long long eq_cap = -1;
  {
    CLI::App* sub = app.add_subcommand(
        "equiv", "decide bounded-degree equivalence via the greatest family");
    sub->add_option("left", eq_m)->required();
    sub->add_option("left-world", eq_wm)->required();
    sub->add_option("right", eq_n)->required();
    sub->add_option("right-world", eq_wn)->required();
    sub->add_option("--features", eq_features, "e.g. down,nom");
    sub->add_option("--l", eq_l, "degree bound")->required();
    sub->add_option("--k", eq_k, "width bound (defaults per features)");
    sub->add_option("--max-pairs", eq_cap, "pair-space guard");
    sub->add_option("--sig", eq_sig, "signature file");
    sub->callback([&] {
      const KripkeModel m = load_model_file(eq_m, eq_sig);
      const KripkeModel n = load_model_file(eq_n, eq_sig);
      std::optional<int> k;
      if (eq_k >= 0) k = eq_k;
      const bool verdict = decide_equiv(
          PointedModel::at(m, eq_wm), PointedModel::at(n, eq_wn),
          FeatureSet::parse(eq_features), eq_l, k, eq_cap);
      print_verdict(verdict, as_json);
      rc = verdict ? 0 : 1;
    });
  }

  // ---- oracle ----------------------------------------------------------------
  std::string oc_m, oc_wm, oc_n, oc_wn, oc_features, oc_sig;
  int oc_k = 0, oc_l = 0;
  long long oc_cap = -1;
  bool oc_separate = false;
  {
    CLI::App* oracle = app.add_subcommand("oracle", "formula-level agreement");
    oracle->require_subcommand(1);
    for (const char* name : {"compare", "separate"}) {
      CLI::App* sub = oracle->add_subcommand(
          name, std::string(name) == "compare"
                    ? "decide agreement on all bounded formulas"
                    : "agreement plus a separating formula when they differ");
      sub->add_option("left", oc_m)->required();
      sub->add_option("left-world", oc_wm)->required();
      sub->add_option("right", oc_n)->required();
      sub->add_option("right-world", oc_wn)->required();
      sub->add_option("--features", oc_features, "e.g. down,nom");
      sub->add_option("--k", oc_k, "slot pool size")->required();
      sub->add_option("--l", oc_l, "degree bound")->required();
      sub->add_option("--cap", oc_cap, "context/representative cap");
      sub->add_option("--sig", oc_sig, "signature file");
      const bool is_separate = std::string(name) == "separate";
      sub->callback([&, is_separate] {
        oc_separate = is_separate;
        const KripkeModel m = load_model_file(oc_m, oc_sig);
        const KripkeModel n = load_model_file(oc_n, oc_sig);
        const PointedModel mp = PointedModel::at(m, oc_wm);
        const PointedModel np = PointedModel::at(n, oc_wn);
        const FeatureSet f = FeatureSet::parse(oc_features);
        if (!oc_separate) {
          const bool verdict = agree_up_to(mp, np, f, oc_k, oc_l, oc_cap);
          print_verdict(verdict, as_json);
          rc = verdict ? 0 : 1;
          return;
        }
        const std::optional<HybridFormula> sep =
            separating_formula(mp, np, f, oc_k, oc_l, oc_cap);
        if (as_json) {
          ordered_json doc;
          doc["verdict"] = !sep.has_value();
          if (sep) doc["separator"] = to_string(*sep);
          std::cout << doc.dump(2) << "\n";
        } else if (sep) {
          std::cout << "false\n" << to_string(*sep) << "\n";
        } else {
          std::cout << "true\n";
        }
        rc = sep ? 1 : 0;
      });
    }
  }

  // ---- axiomatise ------------------------------------------------------------
  std::vector<std::string> ax_args;
  std::string ax_features, ax_sig;
  int ax_l = 0;
  long long ax_cap = -1;
  {
    CLI::App* sub = app.add_subcommand(
        "axiomatise", "one formula pinning a finite class of pointed models");
    sub->add_option("pointed", ax_args, "alternating model file and world")
        ->required()
        ->expected(-1);
    sub->add_option("--features", ax_features, "e.g. down,nom");
    sub->add_option("--l", ax_l, "degree bound")->required();
    sub->add_option("--cap", ax_cap, "output-size cap");
    sub->add_option("--sig", ax_sig, "signature file");
    sub->callback([&] {
      if (ax_args.empty() || ax_args.size() % 2 != 0)
        throw DomainError(
            "axiomatise expects model/world pairs, e.g. m.json w0 n.json v1");
      std::vector<PointedModel> ks;
      for (size_t i = 0; i < ax_args.size(); i += 2)
        ks.push_back(PointedModel::at(load_model_file(ax_args[i], ax_sig),
                                      ax_args[i + 1]));
      const HybridFormula out =
          axiomatise(ks, FeatureSet::parse(ax_features), ax_l, ax_cap);
      if (as_json) {
        ordered_json doc;
        doc["formula"] = to_string(out);
        std::cout << doc.dump(2) << "\n";
      } else {
        std::cout << to_string(out) << "\n";
      }
    });
  }

  // ---- qinj ------------------------------------------------------------------
  std::string qj_m, qj_n, qj_b, qj_sig;
  int qj_k = 0;
  {
    CLI::App* qinj =
        app.add_subcommand("qinj", "quasi-injective bisimulations");
    qinj->require_subcommand(1);

    CLI::App* verify = qinj->add_subcommand("verify", "test the property");
    CLI::App* construct = qinj->add_subcommand(
        "construct", "expand a quasi-injective bisimulation into a family");
    for (CLI::App* sub : {verify, construct}) {
      sub->add_option("left", qj_m)->required();
      sub->add_option("right", qj_n)->required();
      sub->add_option("relation", qj_b)->required();
      sub->add_option("--sig", qj_sig, "signature file");
    }
    construct->add_option("--k", qj_k, "width bound")->required();
    verify->callback([&] {
      const KripkeModel m = load_model_file(qj_m, qj_sig);
      const KripkeModel n = load_model_file(qj_n, qj_sig);
      const bool verdict =
          is_quasi_injective(m, n, hybis::load_pair_relation(read_file(qj_b)));
      print_verdict(verdict, as_json);
      rc = verdict ? 0 : 1;
    });
    construct->callback([&] {
      const KripkeModel m = load_model_file(qj_m, qj_sig);
      const KripkeModel n = load_model_file(qj_n, qj_sig);
      const hybis::OmegaFamily fam = qinj_to_family(
          m, n, hybis::load_pair_relation(read_file(qj_b)), qj_k);
      std::cout << save_omega_family(fam);
    });
  }

  // ---- fixtures ----------------------------------------------------------------
  std::string fx_name, fx_out;
  int fx_param = 0;
  {
    CLI::App* fixtures =
        app.add_subcommand("fixtures", "built-in example models");
    fixtures->require_subcommand(1);

    CLI::App* list = fixtures->add_subcommand("list", "available names");
    list->callback([&] {
      std::cout << "models:\n";
      for (const std::string& name : hybis::fixture_model_names())
        std::cout << "  " << name << "\n";
      std::cout << "pairs (left model, right model, relation):\n";
      for (const std::string& name : hybis::fixture_pair_names())
        std::cout << "  " << name << "\n";
    });

    CLI::App* emit = fixtures->add_subcommand("emit", "write a fixture as JSON");
    emit->add_option("name", fx_name)->required();
    emit->add_option("--param", fx_param, "size parameter (0 = default)");
    emit->add_option("--out", fx_out, "output file (default stdout)");
    emit->callback([&] {
      for (const std::string& name : hybis::fixture_model_names())
        if (name == fx_name) {
          emit_text(save_model(hybis::fixture_model(fx_name, fx_param)),
                    fx_out);
          return;
        }
      const hybis::FixtureTriple triple = hybis::fixture_pair(fx_name, fx_param);
      ordered_json doc;
      doc["left"] = ordered_json::parse(save_model(triple.left));
      doc["right"] = ordered_json::parse(save_model(triple.right));
      doc["relation"] =
          ordered_json::parse(save_pair_relation(triple.relation));
      emit_text(doc.dump(2) + "\n", fx_out);
    });
  }

  // accept --json after the subcommand as well as before it
  std::function<void(CLI::App*)> allow_global = [&](CLI::App* node) {
    for (CLI::App* sub : node->get_subcommands(nullptr)) {
      sub->fallthrough();
      allow_global(sub);
    }
  };
  allow_global(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const hybis::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
