#include "hybis/model.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace hybis {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// KripkeModel

KripkeModel::KripkeModel(Signature sig, std::vector<std::string> worlds,
                         std::vector<std::pair<std::string, std::string>> edges,
                         std::vector<std::vector<std::string>> valuation,
                         std::vector<std::string> nom_targets)
    : sig_(std::move(sig)), worlds_(std::move(worlds)) {
  sig_.validate();
  if (worlds_.empty()) throw ModelError("a model needs at least one world");
  for (std::size_t i = 0; i < worlds_.size(); ++i)
    for (std::size_t j = i + 1; j < worlds_.size(); ++j)
      if (worlds_[i] == worlds_[j])
        throw ModelError("duplicate world name: '" + worlds_[i] + "'");

  int n = num_worlds();
  succ_.resize(n);
  edge_set_.assign(n, std::vector<bool>(n, false));
  for (const auto& [from, to] : edges) {
    int a = require_world(from), b = require_world(to);
    if (!edge_set_[a][b]) {
      edge_set_[a][b] = true;
      edges_.emplace_back(a, b);
      succ_[a].push_back(b);
    }
  }

  if (valuation.size() != sig_.props.size())
    throw ModelError("valuation must list one extent per proposition");
  val_.assign(sig_.props.size(), std::vector<bool>(n, false));
  for (std::size_t p = 0; p < valuation.size(); ++p)
    for (const auto& w : valuation[p]) val_[p][require_world(w)] = true;

  if (nom_targets.size() != sig_.noms.size())
    throw ModelError("every nominal needs an interpretation");
  nom_interp_.reserve(nom_targets.size());
  for (std::size_t s = 0; s < nom_targets.size(); ++s) {
    if (nom_targets[s].empty())
      throw ModelError("nominal '" + sig_.noms[s] + "' is uninterpreted");
    nom_interp_.push_back(require_world(nom_targets[s]));
  }
}

int KripkeModel::world_index(const std::string& name) const {
  auto it = std::find(worlds_.begin(), worlds_.end(), name);
  return it == worlds_.end() ? -1 : static_cast<int>(it - worlds_.begin());
}

int KripkeModel::require_world(const std::string& name) const {
  int w = world_index(name);
  if (w < 0) throw ModelError("unknown world '" + name + "'");
  return w;
}

bool KripkeModel::has_edge(int from, int to) const {
  return edge_set_[from][to];
}

int KripkeModel::prop_index(const std::string& name) const {
  auto it = std::find(sig_.props.begin(), sig_.props.end(), name);
  return it == sig_.props.end() ? -1
                                : static_cast<int>(it - sig_.props.begin());
}

int KripkeModel::nom_index(const std::string& name) const {
  auto it = std::find(sig_.noms.begin(), sig_.noms.end(), name);
  return it == sig_.noms.end() ? -1 : static_cast<int>(it - sig_.noms.begin());
}

std::vector<std::vector<bool>> reachability(const KripkeModel& m) {
  int n = m.num_worlds();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a) reach[a][a] = true;
  for (const auto& [a, b] : m.edges()) reach[a][b] = true;
  // Floyd-Warshall on booleans.
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      if (reach[a][k])
        for (int b = 0; b < n; ++b)
          if (reach[k][b]) reach[a][b] = true;
  return reach;
}

// ---------------------------------------------------------------------------
// PairRelation

void PairRelation::validate(const KripkeModel& m, const KripkeModel& n) const {
  if (k < 0) throw ModelError("negative tuple length");
  std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> seen;
  for (const auto& p : pairs) {
    if (static_cast<int>(p.left.size()) != k + 1 ||
        static_cast<int>(p.right.size()) != k + 1)
      throw ModelError("pair arity mismatch: expected " + std::to_string(k) +
                       "+1 names per side");
    for (const auto& w : p.left) m.require_world(w);
    for (const auto& w : p.right) n.require_world(w);
    if (!seen.insert({p.left, p.right}).second)
      throw ModelError("duplicate pair in relation");
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw ModelError("model document: " + what);
}

ordered_json parse_json(const std::string& text, const char* what) {
  ordered_json doc = ordered_json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw ModelError(std::string("invalid JSON in ") + what);
  return doc;
}

}  // namespace

KripkeModel load_model(const std::string& json_text,
                       const std::optional<Signature>& sig) {
  ordered_json doc = parse_json(json_text, "model document");
  if (!doc.is_object()) schema_error("top level must be an object");
  if (!doc.contains("worlds") || !doc["worlds"].is_array())
    schema_error("missing \"worlds\" array");

  std::vector<std::string> worlds;
  for (const auto& w : doc["worlds"]) {
    if (!w.is_string()) schema_error("world names must be strings");
    worlds.push_back(w.get<std::string>());
  }

  std::vector<std::pair<std::string, std::string>> edges;
  if (doc.contains("rel")) {
    if (!doc["rel"].is_array()) schema_error("\"rel\" must be an array");
    for (const auto& e : doc["rel"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
          !e[1].is_string())
        schema_error("\"rel\" entries must be [from, to] string pairs");
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }

  ordered_json prop = doc.value("prop", ordered_json::object());
  ordered_json nom = doc.value("nom", ordered_json::object());
  if (!prop.is_object()) schema_error("\"prop\" must be an object");
  if (!nom.is_object()) schema_error("\"nom\" must be an object");

  Signature effective;
  if (sig) {
    effective = *sig;
    for (const auto& [name, extent] : prop.items())
      if (!effective.has_prop(name))
        schema_error("proposition '" + name + "' is not in the signature");
    for (const auto& [name, target] : nom.items())
      if (!effective.has_nom(name))
        schema_error("nominal '" + name + "' is not in the signature");
    for (const auto& name : effective.noms)
      if (!nom.contains(name))
        schema_error("nominal '" + name + "' is uninterpreted");
  } else {
    for (const auto& [name, extent] : prop.items())
      effective.props.push_back(name);
    for (const auto& [name, target] : nom.items())
      effective.noms.push_back(name);
  }

  std::vector<std::vector<std::string>> valuation(effective.props.size());
  for (std::size_t p = 0; p < effective.props.size(); ++p) {
    if (!prop.contains(effective.props[p])) continue;
    const auto& extent = prop[effective.props[p]];
    if (!extent.is_array())
      schema_error("extent of '" + effective.props[p] + "' must be an array");
    for (const auto& w : extent) {
      if (!w.is_string()) schema_error("extent members must be world names");
      valuation[p].push_back(w.get<std::string>());
    }
  }

  std::vector<std::string> nom_targets(effective.noms.size());
  for (std::size_t s = 0; s < effective.noms.size(); ++s) {
    if (!nom.contains(effective.noms[s]))
      schema_error("nominal '" + effective.noms[s] + "' is uninterpreted");
    const auto& target = nom[effective.noms[s]];
    if (!target.is_string())
      schema_error("nominal interpretations must be world names");
    nom_targets[s] = target.get<std::string>();
  }

  return KripkeModel(std::move(effective), std::move(worlds), std::move(edges),
                     std::move(valuation), std::move(nom_targets));
}

std::string save_model(const KripkeModel& m) {
  ordered_json doc;
  doc["worlds"] = m.worlds();
  ordered_json rel = ordered_json::array();
  for (const auto& [a, b] : m.edges())
    rel.push_back({m.world_name(a), m.world_name(b)});
  doc["rel"] = std::move(rel);
  ordered_json prop = ordered_json::object();
  for (std::size_t p = 0; p < m.sig().props.size(); ++p) {
    ordered_json extent = ordered_json::array();
    for (int w = 0; w < m.num_worlds(); ++w)
      if (m.prop_holds(static_cast<int>(p), w)) extent.push_back(m.world_name(w));
    prop[m.sig().props[p]] = std::move(extent);
  }
  doc["prop"] = std::move(prop);
  ordered_json nom = ordered_json::object();
  for (std::size_t s = 0; s < m.sig().noms.size(); ++s)
    nom[m.sig().noms[s]] = m.world_name(m.nom_target(static_cast<int>(s)));
  doc["nom"] = std::move(nom);
  return doc.dump(2);
}

PairRelation load_pair_relation(const std::string& json_text) {
  ordered_json doc = parse_json(json_text, "pair relation");
  if (!doc.is_object() || !doc.contains("k") ||
      !doc["k"].is_number_integer() || !doc.contains("pairs") ||
      !doc["pairs"].is_array())
    throw ModelError("pair relation: expected { \"k\": int, \"pairs\": [...] }");
  PairRelation rel;
  rel.k = doc["k"].get<int>();
  for (const auto& p : doc["pairs"]) {
    if (!p.is_object() || !p.contains("left") || !p.contains("right") ||
        !p["left"].is_array() || !p["right"].is_array())
      throw ModelError(
          "pair relation: pairs need \"left\" and \"right\" arrays");
    NamedPair np;
    for (const auto& w : p["left"]) np.left.push_back(w.get<std::string>());
    for (const auto& w : p["right"]) np.right.push_back(w.get<std::string>());
    rel.pairs.push_back(std::move(np));
  }
  return rel;
}

std::string save_pair_relation(const PairRelation& rel) {
  ordered_json doc;
  doc["k"] = rel.k;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : rel.pairs) {
    ordered_json jp;
    jp["left"] = p.left;
    jp["right"] = p.right;
    pairs.push_back(std::move(jp));
  }
  doc["pairs"] = std::move(pairs);
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Disjoint union

KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b,
                           const std::string& tag_a, const std::string& tag_b) {
  if (!(a.sig() == b.sig()))
    throw ModelError("disjoint union requires equal signatures");
  if (tag_a == tag_b) throw ModelError("disjoint union tags must differ");

  auto tag = [](const std::string& t, const std::string& w) {
    return t + ":" + w;
  };

  std::vector<std::string> worlds;
  for (const auto& w : a.worlds()) worlds.push_back(tag(tag_a, w));
  for (const auto& w : b.worlds()) worlds.push_back(tag(tag_b, w));

  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [x, y] : a.edges())
    edges.emplace_back(tag(tag_a, a.world_name(x)), tag(tag_a, a.world_name(y)));
  for (const auto& [x, y] : b.edges())
    edges.emplace_back(tag(tag_b, b.world_name(x)), tag(tag_b, b.world_name(y)));

  std::vector<std::vector<std::string>> valuation(a.sig().props.size());
  for (std::size_t p = 0; p < a.sig().props.size(); ++p) {
    for (int w = 0; w < a.num_worlds(); ++w)
      if (a.prop_holds(static_cast<int>(p), w))
        valuation[p].push_back(tag(tag_a, a.world_name(w)));
    for (int w = 0; w < b.num_worlds(); ++w)
      if (b.prop_holds(static_cast<int>(p), w))
        valuation[p].push_back(tag(tag_b, b.world_name(w)));
  }

  // Constants are interpreted as in the left operand.
  std::vector<std::string> nom_targets;
  for (std::size_t s = 0; s < a.sig().noms.size(); ++s)
    nom_targets.push_back(tag(tag_a, a.world_name(a.nom_target(static_cast<int>(s)))));

  return KripkeModel(a.sig(), std::move(worlds), std::move(edges),
                     std::move(valuation), std::move(nom_targets));
}

std::vector<bool> part_mask(const KripkeModel& u, const std::string& tag) {
  std::vector<bool> mask(u.num_worlds(), false);
  std::string prefix = tag + ":";
  for (int w = 0; w < u.num_worlds(); ++w)
    mask[w] = u.world_name(w).rfind(prefix, 0) == 0;
  return mask;
}

}  // namespace hybis
