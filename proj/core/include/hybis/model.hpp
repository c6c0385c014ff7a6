#pragma once

// Finite Kripke structures, pointed models, tuple pair relations, JSON
// (de)serialization, disjoint union, and reachability.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybis/syntax.hpp"

namespace hybis {

// Model construction/validation failure.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite structure M = (W, R, V, nominal interpretation).  Worlds are
// referred to by index internally and by name externally; declaration order
// is preserved and used for deterministic iteration.
class KripkeModel {
 public:
  KripkeModel() = default;
  // Validates everything (see throw messages); sig.validate() is implied.
  KripkeModel(Signature sig, std::vector<std::string> worlds,
              std::vector<std::pair<std::string, std::string>> edges,
              std::vector<std::vector<std::string>> valuation,  // per prop
              std::vector<std::string> nom_targets);            // per nominal

  const Signature& sig() const { return sig_; }
  int num_worlds() const { return static_cast<int>(worlds_.size()); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::string& world_name(int w) const { return worlds_[w]; }
  // -1 when absent.
  int world_index(const std::string& name) const;
  // Throws ModelError when absent.
  int require_world(const std::string& name) const;

  const std::vector<int>& successors(int w) const { return succ_[w]; }
  bool has_edge(int from, int to) const;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  int prop_index(const std::string& name) const;  // -1 when absent
  bool prop_holds(int prop, int w) const { return val_[prop][w]; }
  const std::vector<bool>& prop_extent(int prop) const { return val_[prop]; }

  int nom_index(const std::string& name) const;  // -1 when absent
  int nom_target(int nom) const { return nom_interp_[nom]; }

 private:
  Signature sig_;
  std::vector<std::string> worlds_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<bool>> val_;       // [prop][world]
  std::vector<std::vector<bool>> edge_set_;  // adjacency matrix
  std::vector<int> nom_interp_;              // [nom] -> world
};

struct PointedModel {
  KripkeModel model;
  int point = 0;

  static PointedModel at(KripkeModel m, const std::string& world) {
    int w = m.require_world(world);
    return {std::move(m), w};
  }
};

// Reflexive-transitive closure of the accessibility relation;
// result[a][b] == true iff b is reachable from a in zero or more steps.
std::vector<std::vector<bool>> reachability(const KripkeModel& m);

// ---------------------------------------------------------------------------
// Tuple pair relations (B ⊆ (M^k × M) × (N^k × N)), world names external.

struct NamedPair {
  std::vector<std::string> left;   // k tuple entries then the current point
  std::vector<std::string> right;  // same length
  bool operator==(const NamedPair&) const = default;
};

struct PairRelation {
  int k = 0;
  std::vector<NamedPair> pairs;

  // Throws ModelError unless every pair has k+1 names per side, all worlds
  // exist (left in m, right in n), and there are no duplicates.
  void validate(const KripkeModel& m, const KripkeModel& n) const;
};

// ---------------------------------------------------------------------------
// JSON (schemas documented in the README)

// Model document: { "worlds": [...], "rel": [[from,to]...],
//                   "prop": {name: [...]}, "nom": {name: world} }.
// When sig is given, prop keys must be declared (missing props get empty
// extent) and nom keys must match exactly; otherwise the signature is
// inferred from the document's key order.
KripkeModel load_model(const std::string& json_text,
                       const std::optional<Signature>& sig = std::nullopt);
std::string save_model(const KripkeModel& m);

// { "k": int, "pairs": [ {"left": [...], "right": [...]} ] }
PairRelation load_pair_relation(const std::string& json_text);
std::string save_pair_relation(const PairRelation& rel);

// ---------------------------------------------------------------------------
// Disjoint union (relations and constants case): universe is the tagged
// union ("<tag_a>:w" / "<tag_b>:w"), relations and valuations are unions,
// nominal interpretations are taken from a.  Signatures must be equal.
KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b,
                           const std::string& tag_a = "a",
                           const std::string& tag_b = "b");

// Membership mask for the tagged part of a disjoint union (worlds whose
// name starts with "<tag>:"), e.g. the U_A interpretation.
std::vector<bool> part_mask(const KripkeModel& u, const std::string& tag);

}  // namespace hybis
