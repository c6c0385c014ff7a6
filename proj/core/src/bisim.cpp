#include "hybis/bisim.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>

#include "hybis/fixtures.hpp"
#include "json.hpp"

namespace hybis {

namespace {

using ordered_json = nlohmann::ordered_json;

// Mixed-radix codec for ((m̄, m)) tuples: width = k+1 digits in base
// |worlds|, digit j < k is tuple slot j+1, digit k is the current world.
struct TupleCodec {
  int base = 1;
  int width = 1;
  std::vector<long long> pw;

  TupleCodec(int base_, int width_) : base(base_), width(width_) {
    pw.assign(static_cast<size_t>(width) + 1, 1);
    for (int i = 1; i <= width; ++i) {
      if (pw[i - 1] > LLONG_MAX / base)
        throw ResourceError("tuple space does not fit in 63 bits");
      pw[i] = pw[i - 1] * base;
    }
  }

  long long total() const { return pw[width]; }
  int digit(long long id, int pos) const {
    return static_cast<int>(id / pw[pos] % base);
  }
  long long with_digit(long long id, int pos, int value) const {
    return id + (static_cast<long long>(value) - digit(id, pos)) * pw[pos];
  }
  std::vector<int> decode(long long id) const {
    std::vector<int> t(static_cast<size_t>(width));
    for (int i = 0; i < width; ++i) t[i] = digit(id, i);
    return t;
  }
  long long encode(const std::vector<int>& t) const {
    long long id = 0;
    for (int i = 0; i < width; ++i) id += t[i] * pw[i];
    return id;
  }
};

void require_same_signature(const KripkeModel& m, const KripkeModel& n) {
  if (m.sig().props != n.sig().props || m.sig().noms != n.sig().noms)
    throw DomainError("the two models must share a signature");
  if (m.num_worlds() == 0 || n.num_worlds() == 0)
    throw DomainError("models must be nonempty");
}

std::vector<int> bfs_depths(const KripkeModel& m) {
  std::vector<int> depth(static_cast<size_t>(m.num_worlds()), -1);
  std::deque<int> queue;
  depth[0] = 0;
  queue.push_back(0);
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (int v : m.successors(w))
      if (depth[v] < 0) {
        depth[v] = depth[w] + 1;
        queue.push_back(v);
      }
  }
  return depth;
}

NamedPair decode_names(const KripkeModel& m, const KripkeModel& n,
                       const std::vector<int>& lt, const std::vector<int>& rt) {
  NamedPair p;
  for (int w : lt) p.left.push_back(m.world_name(w));
  for (int w : rt) p.right.push_back(n.world_name(w));
  return p;
}

std::pair<std::vector<int>, std::vector<int>> encode_worlds(
    const KripkeModel& m, const KripkeModel& n, const NamedPair& p) {
  std::pair<std::vector<int>, std::vector<int>> out;
  for (const auto& name : p.left) out.first.push_back(m.require_world(name));
  for (const auto& name : p.right) out.second.push_back(n.require_world(name));
  return out;
}

struct Gates {
  bool nom = false, bind = false, atv = false, atn = false, ex = false;
  explicit Gates(const FeatureSet& f) {
    std::set<Cond> c = gated_conds(f);
    nom = c.count(Cond::Nom) != 0;
    bind = c.count(Cond::Bind) != 0;
    atv = c.count(Cond::AtV) != 0;
    atn = c.count(Cond::AtN) != 0;
    ex = c.count(Cond::ExF) != 0;
  }
};

std::string level_tag(int i) { return "level " + std::to_string(i); }

}  // namespace

std::string to_string(Cond c) {
  switch (c) {
    case Cond::Prop: return "prop";
    case Cond::WVar: return "wvar";
    case Cond::Forth: return "forth";
    case Cond::Back: return "back";
    case Cond::Nom: return "nom";
    case Cond::Bind: return "bind";
    case Cond::AtV: return "atv";
    case Cond::AtN: return "atn";
    case Cond::ExF: return "ex_f";
    case Cond::ExB: return "ex_b";
    case Cond::Ext: return "ext";
    case Cond::Chain: return "chain";
    case Cond::Seed: return "seed";
  }
  return "?";
}

std::set<Cond> gated_conds(const FeatureSet& f) {
  std::set<Cond> c;
  if (f.nom) c.insert(Cond::Nom);
  if (f.down) c.insert(Cond::Bind);
  if (f.at) c.insert(Cond::AtV);
  if (f.at && f.nom) {
    c.insert(Cond::AtN);
    c.insert(Cond::Nom);
  }
  if (f.exists) {
    c.insert(Cond::ExF);
    c.insert(Cond::ExB);
    c.insert(Cond::Bind);  // the binder is definable from ∃
  }
  return c;
}

KlFamily KlFamily::empty(int K, int L) {
  KlFamily fam;
  fam.K = K;
  fam.L = L;
  fam.levels.assign(static_cast<size_t>(K) + 1,
                    std::vector<PairRelation>(static_cast<size_t>(L) + 1));
  for (int k = 0; k <= K; ++k)
    for (int i = 0; i <= L; ++i) fam.levels[k][i].k = k;
  return fam;
}

const PairRelation& KlFamily::at(int k, int i) const {
  if (k < 0 || k > K || i < 0 || i > L)
    throw DomainError("family index out of range");
  return levels[k][i];
}

PairRelation& KlFamily::at(int k, int i) {
  if (k < 0 || k > K || i < 0 || i > L)
    throw DomainError("family index out of range");
  return levels[k][i];
}

void VerifyReport::add(Cond c, int k, int level, NamedPair pair,
                       std::string detail) {
  ok = false;
  violations.push_back(
      Violation{c, k, level, std::move(pair), std::move(detail)});
}

long long default_pair_cap() {
  if (const char* env = std::getenv("HYBIS_MAX_PAIRS")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 5'000'000;
}

KlFamily max_kl_family(const KripkeModel& m, const KripkeModel& n,
                       const FeatureSet& f, int K, int L, long long cap) {
  require_same_signature(m, n);
  if (K < 0 || L < 0) throw DomainError("family bounds must be non-negative");
  const long long budget = cap < 0 ? default_pair_cap() : cap;
  const long double estimate =
      std::pow(static_cast<long double>(m.num_worlds()) * n.num_worlds(),
               K + 1) *
      (L + 1);
  if (estimate > static_cast<long double>(budget))
    throw ResourceError("pair space for K=" + std::to_string(K) +
                        ", L=" + std::to_string(L) + " exceeds the cap of " +
                        std::to_string(budget) + " pairs");

  const Gates g(f);
  const int WM = m.num_worlds(), WN = n.num_worlds();
  const auto& noms = m.sig().noms;

  // local agreement of current worlds (prop, and nom when gated)
  std::vector<char> cur_ok(static_cast<size_t>(WM) * WN, 1);
  for (int a = 0; a < WM; ++a)
    for (int b = 0; b < WN; ++b) {
      bool ok = true;
      for (size_t p = 0; ok && p < m.sig().props.size(); ++p)
        ok = m.prop_holds(static_cast<int>(p), a) ==
             n.prop_holds(static_cast<int>(p), b);
      if (g.nom)
        for (size_t s = 0; ok && s < noms.size(); ++s)
          ok = (m.nom_target(static_cast<int>(s)) == a) ==
               (n.nom_target(static_cast<int>(s)) == b);
      cur_ok[static_cast<size_t>(a) * WN + b] = ok ? 1 : 0;
    }

  KlFamily fam = KlFamily::empty(K, L);
  for (int k = 0; k <= K; ++k) {
    const TupleCodec cm(WM, k + 1), cn(WN, k + 1);
    const long long LM = cm.total(), LN = cn.total();

    std::vector<char> local(static_cast<size_t>(LM * LN), 0);
    for (long long lid = 0; lid < LM; ++lid) {
      const std::vector<int> lt = cm.decode(lid);
      const int a = lt[static_cast<size_t>(k)];
      for (long long rid = 0; rid < LN; ++rid) {
        const int b = cn.digit(rid, k);
        bool ok = cur_ok[static_cast<size_t>(a) * WN + b] != 0;
        for (int j = 0; ok && j < k; ++j)
          ok = (lt[static_cast<size_t>(j)] == a) == (cn.digit(rid, j) == b);
        local[static_cast<size_t>(lid * LN + rid)] = ok ? 1 : 0;
      }
    }

    std::vector<std::vector<char>> alive(static_cast<size_t>(L) + 1, local);
    auto alive_at = [&](int i, long long lid, long long rid) {
      return alive[static_cast<size_t>(i)][static_cast<size_t>(lid * LN + rid)] !=
             0;
    };

    auto passes = [&](int i, long long lid, long long rid) {
      const int a = cm.digit(lid, k), b = cn.digit(rid, k);
      if (i < L) {
        if (!alive_at(i + 1, lid, rid)) return false;  // chain
        for (int ma : m.successors(a)) {               // forth
          const long long lid2 = cm.with_digit(lid, k, ma);
          bool found = false;
          for (int nb : n.successors(b))
            if (alive_at(i + 1, lid2, cn.with_digit(rid, k, nb))) {
              found = true;
              break;
            }
          if (!found) return false;
        }
        for (int nb : n.successors(b)) {  // back
          const long long rid2 = cn.with_digit(rid, k, nb);
          bool found = false;
          for (int ma : m.successors(a))
            if (alive_at(i + 1, cm.with_digit(lid, k, ma), rid2)) {
              found = true;
              break;
            }
          if (!found) return false;
        }
        if (g.bind)
          for (int j = 0; j < k; ++j)
            if (!alive_at(i + 1, cm.with_digit(lid, j, a),
                          cn.with_digit(rid, j, b)))
              return false;
        if (g.ex)
          for (int j = 0; j < k; ++j) {
            for (int ma = 0; ma < WM; ++ma) {  // ex_f
              const long long lid2 = cm.with_digit(lid, j, ma);
              bool found = false;
              for (int nb = 0; nb < WN && !found; ++nb)
                found = alive_at(i + 1, lid2, cn.with_digit(rid, j, nb));
              if (!found) return false;
            }
            for (int nb = 0; nb < WN; ++nb) {  // ex_b
              const long long rid2 = cn.with_digit(rid, j, nb);
              bool found = false;
              for (int ma = 0; ma < WM && !found; ++ma)
                found = alive_at(i + 1, cm.with_digit(lid, j, ma), rid2);
              if (!found) return false;
            }
          }
      }
      if (g.atv)
        for (int j = 0; j < k; ++j)
          if (!alive_at(i, cm.with_digit(lid, k, cm.digit(lid, j)),
                        cn.with_digit(rid, k, cn.digit(rid, j))))
            return false;
      if (g.atn)
        for (size_t s = 0; s < noms.size(); ++s)
          if (!alive_at(i,
                        cm.with_digit(lid, k, m.nom_target(static_cast<int>(s))),
                        cn.with_digit(rid, k, n.nom_target(static_cast<int>(s)))))
            return false;
      return true;
    };

    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = L; i >= 0; --i)
        for (long long lid = 0; lid < LM; ++lid)
          for (long long rid = 0; rid < LN; ++rid) {
            const size_t idx = static_cast<size_t>(lid * LN + rid);
            if (alive[static_cast<size_t>(i)][idx] && !passes(i, lid, rid)) {
              alive[static_cast<size_t>(i)][idx] = 0;
              changed = true;
            }
          }
    }

    for (int i = 0; i <= L; ++i) {
      PairRelation& rel = fam.at(k, i);
      for (long long lid = 0; lid < LM; ++lid) {
        const std::vector<int> lt = cm.decode(lid);
        for (long long rid = 0; rid < LN; ++rid)
          if (alive[static_cast<size_t>(i)]
                   [static_cast<size_t>(lid * LN + rid)])
            rel.pairs.push_back(decode_names(m, n, lt, cn.decode(rid)));
      }
    }
  }
  return fam;
}

VerifyReport verify_kl_family(
    const KripkeModel& m, const KripkeModel& n, const KlFamily& fam,
    const FeatureSet& f,
    const std::optional<std::pair<std::string, std::string>>& seed) {
  require_same_signature(m, n);
  if (fam.K < 0 || fam.L < 0 ||
      fam.levels.size() != static_cast<size_t>(fam.K) + 1)
    throw DomainError("malformed family: width count does not match K");
  for (int k = 0; k <= fam.K; ++k) {
    if (fam.levels[static_cast<size_t>(k)].size() !=
        static_cast<size_t>(fam.L) + 1)
      throw DomainError("malformed family: level count does not match L");
    for (int i = 0; i <= fam.L; ++i) {
      const PairRelation& rel = fam.at(k, i);
      if (rel.k != k)
        throw DomainError("malformed family: relation width disagrees with its slot");
      rel.validate(m, n);
    }
  }

  const Gates g(f);
  const auto& props = m.sig().props;
  const auto& noms = m.sig().noms;
  const int L = fam.L;

  std::vector<TupleCodec> cms, cns;
  for (int k = 0; k <= fam.K; ++k) {
    cms.emplace_back(m.num_worlds(), k + 1);
    cns.emplace_back(n.num_worlds(), k + 1);
  }
  std::vector<std::vector<std::set<std::pair<long long, long long>>>> sets(
      static_cast<size_t>(fam.K) + 1);
  for (int k = 0; k <= fam.K; ++k) {
    sets[static_cast<size_t>(k)].resize(static_cast<size_t>(L) + 1);
    for (int i = 0; i <= L; ++i)
      for (const NamedPair& p : fam.at(k, i).pairs) {
        auto [lt, rt] = encode_worlds(m, n, p);
        sets[static_cast<size_t>(k)][static_cast<size_t>(i)].insert(
            {cms[static_cast<size_t>(k)].encode(lt),
             cns[static_cast<size_t>(k)].encode(rt)});
      }
  }

  VerifyReport rep;
  for (int k = 0; k <= fam.K; ++k) {
    const TupleCodec& cm = cms[static_cast<size_t>(k)];
    const TupleCodec& cn = cns[static_cast<size_t>(k)];
    auto member = [&](int i, long long lid, long long rid) {
      return sets[static_cast<size_t>(k)][static_cast<size_t>(i)].count(
                 {lid, rid}) != 0;
    };
    for (int i = 0; i <= L; ++i) {
      for (const NamedPair& pr : fam.at(k, i).pairs) {
        auto [lt, rt] = encode_worlds(m, n, pr);
        const long long lid = cm.encode(lt), rid = cn.encode(rt);
        const int a = lt[static_cast<size_t>(k)], b = rt[static_cast<size_t>(k)];

        for (size_t p = 0; p < props.size(); ++p)
          if (m.prop_holds(static_cast<int>(p), a) !=
              n.prop_holds(static_cast<int>(p), b))
            rep.add(Cond::Prop, k, i, pr,
                    "proposition " + props[p] + " differs at " +
                        m.world_name(a) + " / " + n.world_name(b));
        for (int j = 0; j < k; ++j)
          if ((lt[static_cast<size_t>(j)] == a) !=
              (rt[static_cast<size_t>(j)] == b))
            rep.add(Cond::WVar, k, i, pr,
                    "slot " + std::to_string(j + 1) +
                        " names the current world on one side only");
        if (g.nom)
          for (size_t s = 0; s < noms.size(); ++s)
            if ((m.nom_target(static_cast<int>(s)) == a) !=
                (n.nom_target(static_cast<int>(s)) == b))
              rep.add(Cond::Nom, k, i, pr,
                      "nominal " + noms[s] + " names " +
                          (m.nom_target(static_cast<int>(s)) == a
                               ? m.world_name(a)
                               : n.world_name(b)) +
                          " on one side only");

        if (i < L) {
          if (!member(i + 1, lid, rid))
            rep.add(Cond::Chain, k, i, pr,
                    "pair is missing from " + level_tag(i + 1));
          for (int ma : m.successors(a)) {
            const long long lid2 = cm.with_digit(lid, k, ma);
            bool found = false;
            for (int nb : n.successors(b))
              if (member(i + 1, lid2, cn.with_digit(rid, k, nb))) {
                found = true;
                break;
              }
            if (!found)
              rep.add(Cond::Forth, k, i, pr,
                      "step " + m.world_name(a) + " -> " + m.world_name(ma) +
                          " has no matching step into " + level_tag(i + 1));
          }
          for (int nb : n.successors(b)) {
            const long long rid2 = cn.with_digit(rid, k, nb);
            bool found = false;
            for (int ma : m.successors(a))
              if (member(i + 1, cm.with_digit(lid, k, ma), rid2)) {
                found = true;
                break;
              }
            if (!found)
              rep.add(Cond::Back, k, i, pr,
                      "step " + n.world_name(b) + " -> " + n.world_name(nb) +
                          " has no matching step into " + level_tag(i + 1));
          }
          if (g.bind)
            for (int j = 0; j < k; ++j)
              if (!member(i + 1, cm.with_digit(lid, j, a),
                          cn.with_digit(rid, j, b)))
                rep.add(Cond::Bind, k, i, pr,
                        "rebinding slot " + std::to_string(j + 1) +
                            " to the current worlds is missing from " +
                            level_tag(i + 1));
          if (g.ex)
            for (int j = 0; j < k; ++j) {
              for (int ma = 0; ma < m.num_worlds(); ++ma) {
                const long long lid2 = cm.with_digit(lid, j, ma);
                bool found = false;
                for (int nb = 0; nb < n.num_worlds() && !found; ++nb)
                  found = member(i + 1, lid2, cn.with_digit(rid, j, nb));
                if (!found)
                  rep.add(Cond::ExF, k, i, pr,
                          "no partner for rebinding slot " +
                              std::to_string(j + 1) + " to " +
                              m.world_name(ma) + " in " + level_tag(i + 1));
              }
              for (int nb = 0; nb < n.num_worlds(); ++nb) {
                const long long rid2 = cn.with_digit(rid, j, nb);
                bool found = false;
                for (int ma = 0; ma < m.num_worlds() && !found; ++ma)
                  found = member(i + 1, cm.with_digit(lid, j, ma), rid2);
                if (!found)
                  rep.add(Cond::ExB, k, i, pr,
                          "no partner for rebinding slot " +
                              std::to_string(j + 1) + " to " +
                              n.world_name(nb) + " in " + level_tag(i + 1));
              }
            }
        }
        if (g.atv)
          for (int j = 0; j < k; ++j)
            if (!member(i, cm.with_digit(lid, k, cm.digit(lid, j)),
                        cn.with_digit(rid, k, cn.digit(rid, j))))
              rep.add(Cond::AtV, k, i, pr,
                      "@-shift to slot " + std::to_string(j + 1) +
                          " is missing from " + level_tag(i));
        if (g.atn)
          for (size_t s = 0; s < noms.size(); ++s)
            if (!member(
                    i, cm.with_digit(lid, k, m.nom_target(static_cast<int>(s))),
                    cn.with_digit(rid, k, n.nom_target(static_cast<int>(s)))))
              rep.add(Cond::AtN, k, i, pr,
                      "@-shift to nominal " + noms[s] + " is missing from " +
                          level_tag(i));
      }
    }
  }

  if (seed) {
    const int sa = m.require_world(seed->first);
    const int sb = n.require_world(seed->second);
    for (int k = 0; k <= fam.K; ++k) {
      const std::vector<int> lt(static_cast<size_t>(k) + 1, sa);
      const std::vector<int> rt(static_cast<size_t>(k) + 1, sb);
      if (!sets[static_cast<size_t>(k)][0].count(
              {cms[static_cast<size_t>(k)].encode(lt),
               cns[static_cast<size_t>(k)].encode(rt)}))
        rep.add(Cond::Seed, k, 0, decode_names(m, n, lt, rt),
                "constant tuple over the seed points is missing from level 0");
    }
  }
  return rep;
}

bool decide_equiv(const PointedModel& mp, const PointedModel& np,
                  const FeatureSet& f, int L, std::optional<int> K,
                  long long cap) {
  if (L < 0) throw DomainError("degree bound must be non-negative");
  const int width = K ? *K : ((f.down || f.exists) ? L : 0);
  KlFamily fam = max_kl_family(mp.model, np.model, f, width, L, cap);
  for (int k = 0; k <= width; ++k) {
    NamedPair want{
        std::vector<std::string>(static_cast<size_t>(k) + 1,
                                 mp.model.world_name(mp.point)),
        std::vector<std::string>(static_cast<size_t>(k) + 1,
                                 np.model.world_name(np.point))};
    const auto& pairs = fam.at(k, 0).pairs;
    if (std::find(pairs.begin(), pairs.end(), want) == pairs.end())
      return false;
  }
  return true;
}

OmegaFamily union_family(const std::vector<KlFamily>& fams) {
  if (fams.empty()) throw DomainError("no families to unite");
  const int K = fams.front().K;
  for (const KlFamily& fam : fams)
    if (fam.K != K) throw DomainError("families disagree on K");
  OmegaFamily out(static_cast<size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    out[static_cast<size_t>(k)].k = k;
    std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> seen;
    for (const KlFamily& fam : fams)
      for (const NamedPair& p : fam.at(k, 0).pairs)
        if (seen.insert({p.left, p.right}).second)
          out[static_cast<size_t>(k)].pairs.push_back(p);
  }
  return out;
}

VerifyReport verify_omega_family(const KripkeModel& m, const KripkeModel& n,
                                 const OmegaFamily& b, const FeatureSet& f,
                                 std::optional<int> depth_below) {
  require_same_signature(m, n);
  VerifyReport rep;
  if (b.empty()) {
    rep.add(Cond::Seed, 0, -1, NamedPair{}, "family has no width components");
    return rep;
  }
  const int Kb = static_cast<int>(b.size()) - 1;
  std::vector<TupleCodec> cms, cns;
  std::vector<std::set<std::pair<long long, long long>>> sets(b.size());
  size_t total = 0;
  for (int k = 0; k <= Kb; ++k) {
    if (b[static_cast<size_t>(k)].k != k)
      throw DomainError("width-" + std::to_string(k) +
                        " slot holds a relation of different width");
    b[static_cast<size_t>(k)].validate(m, n);
    cms.emplace_back(m.num_worlds(), k + 1);
    cns.emplace_back(n.num_worlds(), k + 1);
    for (const NamedPair& p : b[static_cast<size_t>(k)].pairs) {
      auto [lt, rt] = encode_worlds(m, n, p);
      sets[static_cast<size_t>(k)].insert(
          {cms[static_cast<size_t>(k)].encode(lt),
           cns[static_cast<size_t>(k)].encode(rt)});
      ++total;
    }
  }
  if (total == 0) {
    rep.add(Cond::Seed, 0, -1, NamedPair{}, "family is empty");
    return rep;
  }

  const Gates g(f);
  const auto& props = m.sig().props;
  const auto& noms = m.sig().noms;
  const std::vector<int> dm = depth_below ? bfs_depths(m) : std::vector<int>{};
  const std::vector<int> dn = depth_below ? bfs_depths(n) : std::vector<int>{};
  auto included = [&](const std::vector<int>& lt, const std::vector<int>& rt) {
    if (!depth_below) return true;
    for (int w : lt)
      if (dm[static_cast<size_t>(w)] < 0 ||
          dm[static_cast<size_t>(w)] >= *depth_below)
        return false;
    for (int w : rt)
      if (dn[static_cast<size_t>(w)] < 0 ||
          dn[static_cast<size_t>(w)] >= *depth_below)
        return false;
    return true;
  };

  for (int k = 0; k <= Kb; ++k) {
    const TupleCodec& cm = cms[static_cast<size_t>(k)];
    const TupleCodec& cn = cns[static_cast<size_t>(k)];
    auto member = [&](long long lid, long long rid) {
      return sets[static_cast<size_t>(k)].count({lid, rid}) != 0;
    };
    for (const NamedPair& pr : b[static_cast<size_t>(k)].pairs) {
      auto [lt, rt] = encode_worlds(m, n, pr);
      if (!included(lt, rt)) continue;
      const long long lid = cm.encode(lt), rid = cn.encode(rt);
      const int a = lt[static_cast<size_t>(k)], bb = rt[static_cast<size_t>(k)];

      for (size_t p = 0; p < props.size(); ++p)
        if (m.prop_holds(static_cast<int>(p), a) !=
            n.prop_holds(static_cast<int>(p), bb))
          rep.add(Cond::Prop, k, -1, pr,
                  "proposition " + props[p] + " differs at " + m.world_name(a) +
                      " / " + n.world_name(bb));
      for (int j = 0; j < k; ++j)
        if ((lt[static_cast<size_t>(j)] == a) !=
            (rt[static_cast<size_t>(j)] == bb))
          rep.add(Cond::WVar, k, -1, pr,
                  "slot " + std::to_string(j + 1) +
                      " names the current world on one side only");
      if (g.nom)
        for (size_t s = 0; s < noms.size(); ++s)
          if ((m.nom_target(static_cast<int>(s)) == a) !=
              (n.nom_target(static_cast<int>(s)) == bb))
            rep.add(Cond::Nom, k, -1, pr,
                    "nominal " + noms[s] + " is matched on one side only");

      for (int ma : m.successors(a)) {
        const long long lid2 = cm.with_digit(lid, k, ma);
        bool found = false;
        for (int nb : n.successors(bb))
          if (member(lid2, cn.with_digit(rid, k, nb))) {
            found = true;
            break;
          }
        if (!found)
          rep.add(Cond::Forth, k, -1, pr,
                  "step " + m.world_name(a) + " -> " + m.world_name(ma) +
                      " has no matching step");
      }
      for (int nb : n.successors(bb)) {
        const long long rid2 = cn.with_digit(rid, k, nb);
        bool found = false;
        for (int ma : m.successors(a))
          if (member(cm.with_digit(lid, k, ma), rid2)) {
            found = true;
            break;
          }
        if (!found)
          rep.add(Cond::Back, k, -1, pr,
                  "step " + n.world_name(bb) + " -> " + n.world_name(nb) +
                      " has no matching step");
      }
      if (g.bind)
        for (int j = 0; j < k; ++j)
          if (!member(cm.with_digit(lid, j, a), cn.with_digit(rid, j, bb)))
            rep.add(Cond::Bind, k, -1, pr,
                    "rebinding slot " + std::to_string(j + 1) +
                        " to the current worlds leaves the family");
      if (g.ex)
        for (int j = 0; j < k; ++j) {
          for (int ma = 0; ma < m.num_worlds(); ++ma) {
            const long long lid2 = cm.with_digit(lid, j, ma);
            bool found = false;
            for (int nb = 0; nb < n.num_worlds() && !found; ++nb)
              found = member(lid2, cn.with_digit(rid, j, nb));
            if (!found)
              rep.add(Cond::ExF, k, -1, pr,
                      "no partner for rebinding slot " + std::to_string(j + 1) +
                          " to " + m.world_name(ma));
          }
          for (int nb = 0; nb < n.num_worlds(); ++nb) {
            const long long rid2 = cn.with_digit(rid, j, nb);
            bool found = false;
            for (int ma = 0; ma < m.num_worlds() && !found; ++ma)
              found = member(cm.with_digit(lid, j, ma), rid2);
            if (!found)
              rep.add(Cond::ExB, k, -1, pr,
                      "no partner for rebinding slot " + std::to_string(j + 1) +
                          " to " + n.world_name(nb));
          }
        }
      if (g.atv)
        for (int j = 0; j < k; ++j)
          if (!member(cm.with_digit(lid, k, cm.digit(lid, j)),
                      cn.with_digit(rid, k, cn.digit(rid, j))))
            rep.add(Cond::AtV, k, -1, pr,
                    "@-shift to slot " + std::to_string(j + 1) +
                        " leaves the family");
      if (g.atn)
        for (size_t s = 0; s < noms.size(); ++s)
          if (!member(cm.with_digit(lid, k, m.nom_target(static_cast<int>(s))),
                      cn.with_digit(rid, k, n.nom_target(static_cast<int>(s)))))
            rep.add(Cond::AtN, k, -1, pr,
                    "@-shift to nominal " + noms[s] + " leaves the family");
      if (k < Kb) {
        std::vector<int> lt2 = lt, rt2 = rt;
        lt2.push_back(a);
        rt2.push_back(bb);
        if (!sets[static_cast<size_t>(k) + 1].count(
                {cms[static_cast<size_t>(k) + 1].encode(lt2),
                 cns[static_cast<size_t>(k) + 1].encode(rt2)}))
          rep.add(Cond::Ext, k, -1, pr,
                  "appending the current worlds is missing from width " +
                      std::to_string(k + 1));
      }
    }
  }
  return rep;
}

VerifyReport verify_plain_bisim(const KripkeModel& m, const KripkeModel& n,
                                const PairRelation& b, bool with_nom) {
  require_same_signature(m, n);
  if (b.k != 0)
    throw DomainError("plain bisimulation check needs a width-0 relation");
  b.validate(m, n);
  const auto& props = m.sig().props;
  const auto& noms = m.sig().noms;
  std::set<std::pair<int, int>> rel;
  for (const NamedPair& p : b.pairs)
    rel.insert({m.require_world(p.left[0]), n.require_world(p.right[0])});

  VerifyReport rep;
  for (const NamedPair& pr : b.pairs) {
    const int a = m.require_world(pr.left[0]);
    const int bb = n.require_world(pr.right[0]);
    for (size_t p = 0; p < props.size(); ++p)
      if (m.prop_holds(static_cast<int>(p), a) !=
          n.prop_holds(static_cast<int>(p), bb))
        rep.add(Cond::Prop, 0, -1, pr,
                "proposition " + props[p] + " differs at " + m.world_name(a) +
                    " / " + n.world_name(bb));
    if (with_nom)
      for (size_t s = 0; s < noms.size(); ++s)
        if ((m.nom_target(static_cast<int>(s)) == a) !=
            (n.nom_target(static_cast<int>(s)) == bb))
          rep.add(Cond::Nom, 0, -1, pr,
                  "nominal " + noms[s] + " names " +
                      (n.nom_target(static_cast<int>(s)) == bb
                           ? n.world_name(bb)
                           : m.world_name(a)) +
                      " on one side only");
    for (int ma : m.successors(a)) {
      bool found = false;
      for (int nb : n.successors(bb))
        if (rel.count({ma, nb})) {
          found = true;
          break;
        }
      if (!found)
        rep.add(Cond::Forth, 0, -1, pr,
                "step " + m.world_name(a) + " -> " + m.world_name(ma) +
                    " has no matching step");
    }
    for (int nb : n.successors(bb)) {
      bool found = false;
      for (int ma : m.successors(a))
        if (rel.count({ma, nb})) {
          found = true;
          break;
        }
      if (!found)
        rep.add(Cond::Back, 0, -1, pr,
                "step " + n.world_name(bb) + " -> " + n.world_name(nb) +
                    " has no matching step");
    }
  }
  return rep;
}

bool is_quasi_injective(const KripkeModel& m, const KripkeModel& n,
                        const PairRelation& b) {
  if (!verify_plain_bisim(m, n, b, false).ok) return false;
  const auto rm = reachability(m);
  const auto rn = reachability(n);
  std::vector<std::pair<int, int>> ps;
  for (const NamedPair& p : b.pairs)
    ps.emplace_back(m.require_world(p.left[0]), n.require_world(p.right[0]));
  for (size_t i = 0; i < ps.size(); ++i)
    for (size_t j = i + 1; j < ps.size(); ++j) {
      const auto [a1, b1] = ps[i];
      const auto [a2, b2] = ps[j];
      if (a1 == a2 && b1 != b2 &&
          (rn[static_cast<size_t>(b1)][static_cast<size_t>(b2)] ||
           rn[static_cast<size_t>(b2)][static_cast<size_t>(b1)]))
        return false;
      if (b1 == b2 && a1 != a2 &&
          (rm[static_cast<size_t>(a1)][static_cast<size_t>(a2)] ||
           rm[static_cast<size_t>(a2)][static_cast<size_t>(a1)]))
        return false;
    }
  return true;
}

OmegaFamily qinj_to_family(const KripkeModel& m, const KripkeModel& n,
                           const PairRelation& b, int K) {
  if (K < 0) throw DomainError("width bound must be non-negative");
  if (!is_quasi_injective(m, n, b))
    throw DomainError("relation is not a quasi-injective bisimulation");
  const auto rm = reachability(m);
  const auto rn = reachability(n);
  std::vector<std::pair<int, int>> ps;
  for (const NamedPair& p : b.pairs)
    ps.emplace_back(m.require_world(p.left[0]), n.require_world(p.right[0]));

  OmegaFamily out(static_cast<size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    out[static_cast<size_t>(k)].k = k;
    for (const auto& [ca, cb] : ps) {
      std::vector<int> choice(static_cast<size_t>(k));
      std::function<void(int)> fill = [&](int depth) {
        if (depth == k) {
          NamedPair np;
          for (int idx : choice) {
            np.left.push_back(m.world_name(ps[static_cast<size_t>(idx)].first));
            np.right.push_back(
                n.world_name(ps[static_cast<size_t>(idx)].second));
          }
          np.left.push_back(m.world_name(ca));
          np.right.push_back(n.world_name(cb));
          out[static_cast<size_t>(k)].pairs.push_back(std::move(np));
          return;
        }
        for (size_t idx = 0; idx < ps.size(); ++idx) {
          const auto [sa, sb] = ps[idx];
          if (rm[static_cast<size_t>(sa)][static_cast<size_t>(ca)] &&
              rn[static_cast<size_t>(sb)][static_cast<size_t>(cb)]) {
            choice[static_cast<size_t>(depth)] = static_cast<int>(idx);
            fill(depth + 1);
          }
        }
      };
      fill(0);
    }
  }
  return out;
}

Example46 example46_family(int depth, int kbound) {
  if (depth < 2) throw DomainError("depth must be >= 2");
  if (kbound < 0) throw DomainError("width bound must be non-negative");
  KripkeModel m = fixture_model("fig3_m", depth);
  KripkeModel n = fixture_model("fig3_n", depth);

  struct Pattern {
    int a, b;
    std::vector<std::pair<int, int>> allowed;
  };
  std::vector<Pattern> patterns;
  patterns.push_back({0, 0, {{0, 0}}});
  for (int i = 1; i <= depth; ++i) {
    Pattern p{i, i, {{0, 0}}};
    for (int j = 1; j <= i; ++j) p.allowed.emplace_back(j, j);
    patterns.push_back(std::move(p));
  }
  for (int i = 1; i + 1 <= depth; ++i) {
    Pattern p{i + 1, i, {{0, 0}}};
    for (int j = 1; j <= i; ++j) p.allowed.emplace_back(j + 1, j);
    patterns.push_back(std::move(p));
  }

  OmegaFamily fam(static_cast<size_t>(kbound) + 1);
  for (int k = 0; k <= kbound; ++k) {
    fam[static_cast<size_t>(k)].k = k;
    for (const Pattern& pat : patterns) {
      std::vector<size_t> choice(static_cast<size_t>(k), 0);
      std::function<void(int)> fill = [&](int d) {
        if (d == k) {
          NamedPair np;
          for (size_t idx : choice) {
            np.left.push_back("m" + std::to_string(pat.allowed[idx].first));
            np.right.push_back("n" + std::to_string(pat.allowed[idx].second));
          }
          np.left.push_back("m" + std::to_string(pat.a));
          np.right.push_back("n" + std::to_string(pat.b));
          fam[static_cast<size_t>(k)].pairs.push_back(std::move(np));
          return;
        }
        for (size_t idx = 0; idx < pat.allowed.size(); ++idx) {
          choice[static_cast<size_t>(d)] = idx;
          fill(d + 1);
        }
      };
      fill(0);
    }
  }
  return {std::move(m), std::move(n), std::move(fam)};
}

std::string save_kl_family(const KlFamily& fam) {
  ordered_json doc;
  doc["K"] = fam.K;
  doc["L"] = fam.L;
  ordered_json levels = ordered_json::object();
  for (int k = 0; k <= fam.K; ++k)
    for (int i = 0; i <= fam.L; ++i)
      levels[std::to_string(k) + "," + std::to_string(i)] =
          ordered_json::parse(save_pair_relation(fam.at(k, i)));
  doc["levels"] = std::move(levels);
  return doc.dump(2) + "\n";
}

KlFamily load_kl_family(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("family document is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object() || !doc.contains("K") || !doc.contains("L") ||
      !doc.contains("levels") || !doc["K"].is_number_integer() ||
      !doc["L"].is_number_integer() || !doc["levels"].is_object())
    throw ModelError(
        "family document needs integer \"K\", \"L\" and object \"levels\"");
  const int K = doc["K"].get<int>(), L = doc["L"].get<int>();
  if (K < 0 || L < 0) throw ModelError("family bounds must be non-negative");
  KlFamily fam = KlFamily::empty(K, L);
  for (const auto& [key, value] : doc["levels"].items()) {
    const size_t comma = key.find(',');
    int k = -1, i = -1;
    try {
      if (comma != std::string::npos) {
        k = std::stoi(key.substr(0, comma));
        i = std::stoi(key.substr(comma + 1));
      }
    } catch (const std::exception&) {
      k = -1;
    }
    if (k < 0 || k > K || i < 0 || i > L)
      throw ModelError("level key \"" + key + "\" is not \"k,i\" within bounds");
    PairRelation rel = load_pair_relation(value.dump());
    if (rel.k != k)
      throw ModelError("level \"" + key + "\" holds a width-" +
                       std::to_string(rel.k) + " relation");
    fam.at(k, i) = std::move(rel);
  }
  return fam;
}

std::string save_omega_family(const OmegaFamily& fam) {
  ordered_json doc;
  doc["K"] = static_cast<int>(fam.size()) - 1;
  ordered_json levels = ordered_json::object();
  for (size_t k = 0; k < fam.size(); ++k)
    levels[std::to_string(k)] =
        ordered_json::parse(save_pair_relation(fam[k]));
  doc["levels"] = std::move(levels);
  return doc.dump(2) + "\n";
}

OmegaFamily load_omega_family(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("family document is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object() || !doc.contains("K") || !doc.contains("levels") ||
      !doc["K"].is_number_integer() || !doc["levels"].is_object())
    throw ModelError(
        "family document needs integer \"K\" and object \"levels\"");
  const int K = doc["K"].get<int>();
  if (K < 0) throw ModelError("family bound must be non-negative");
  OmegaFamily fam(static_cast<size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) fam[static_cast<size_t>(k)].k = k;
  for (const auto& [key, value] : doc["levels"].items()) {
    int k = -1;
    try {
      k = std::stoi(key);
    } catch (const std::exception&) {
      k = -1;
    }
    if (k < 0 || k > K)
      throw ModelError("width key \"" + key + "\" is out of bounds");
    PairRelation rel = load_pair_relation(value.dump());
    if (rel.k != k)
      throw ModelError("width " + key + " holds a width-" +
                       std::to_string(rel.k) + " relation");
    fam[static_cast<size_t>(k)] = std::move(rel);
  }
  return fam;
}

}  // namespace hybis
