#include "hybis/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

#include "hybis/semantics.hpp"

namespace hybis {

namespace {

// ---------------------------------------------------------------------------
// Context spaces.  A context is (tuple of k slot worlds, current world) on
// one of the models; ids run over the left model's contexts first.  Within a
// side the id is the mixed-radix code: slot j+1 is digit j, the current
// world is digit k.

struct Side {
  const KripkeModel* model = nullptr;
  long long base = 0;
  long long count = 0;
  std::vector<long long> pw;
};

struct Space {
  int k = 0;
  std::vector<Side> sides;
  long long total = 0;

  std::vector<std::vector<long long>> succ;       // per context
  std::vector<std::vector<long long>> shift_var;  // [j][cid]: current := slot j+1
  std::vector<std::vector<long long>> shift_nom;  // [s][cid]: current := s's world
  std::vector<std::vector<long long>> bind;       // [j][cid]: slot j+1 := current

  int side_of(long long cid) const {
    return sides.size() > 1 && cid >= sides[1].base ? 1 : 0;
  }
  const Side& side(long long cid) const {
    return sides[static_cast<size_t>(side_of(cid))];
  }
  int digit(long long cid, int pos) const {
    const Side& s = side(cid);
    return static_cast<int>((cid - s.base) / s.pw[static_cast<size_t>(pos)] %
                            s.model->num_worlds());
  }
  int current(long long cid) const { return digit(cid, k); }
  long long with_digit(long long cid, int pos, int v) const {
    const Side& s = side(cid);
    return cid + (static_cast<long long>(v) - digit(cid, pos)) *
                     s.pw[static_cast<size_t>(pos)];
  }
  long long seed_context(int side_idx, int point) const {
    const Side& s = sides[static_cast<size_t>(side_idx)];
    long long lid = 0;
    for (int pos = 0; pos <= k; ++pos)
      lid += point * s.pw[static_cast<size_t>(pos)];
    return s.base + lid;
  }
};

Space make_space(const std::vector<const KripkeModel*>& models, int k,
                 long long cap) {
  Space sp;
  sp.k = k;
  for (const KripkeModel* m : models) {
    if (m->num_worlds() == 0) throw DomainError("models must be nonempty");
    Side side;
    side.model = m;
    side.base = sp.total;
    side.pw.assign(static_cast<size_t>(k) + 2, 1);
    for (int i = 1; i <= k + 1; ++i) {
      side.pw[static_cast<size_t>(i)] =
          side.pw[static_cast<size_t>(i) - 1] * m->num_worlds();
      if (side.pw[static_cast<size_t>(i)] > cap)
        throw ResourceError(
            "evaluation-context space exceeds the cap of " +
            std::to_string(cap) + " contexts");
    }
    side.count = side.pw[static_cast<size_t>(k) + 1];
    sp.total += side.count;
    sp.sides.push_back(std::move(side));
  }
  if (sp.total > cap)
    throw ResourceError("evaluation-context space of " +
                        std::to_string(sp.total) + " contexts exceeds the cap of " +
                        std::to_string(cap));

  const size_t noms = sp.sides.front().model->sig().noms.size();
  sp.succ.resize(static_cast<size_t>(sp.total));
  sp.shift_var.assign(static_cast<size_t>(k),
                      std::vector<long long>(static_cast<size_t>(sp.total)));
  sp.shift_nom.assign(noms,
                      std::vector<long long>(static_cast<size_t>(sp.total)));
  sp.bind.assign(static_cast<size_t>(k),
                 std::vector<long long>(static_cast<size_t>(sp.total)));
  for (long long cid = 0; cid < sp.total; ++cid) {
    const KripkeModel* m = sp.side(cid).model;
    const int cur = sp.current(cid);
    for (int v : m->successors(cur))
      sp.succ[static_cast<size_t>(cid)].push_back(sp.with_digit(cid, k, v));
    for (int j = 0; j < k; ++j) {
      sp.shift_var[static_cast<size_t>(j)][static_cast<size_t>(cid)] =
          sp.with_digit(cid, k, sp.digit(cid, j));
      sp.bind[static_cast<size_t>(j)][static_cast<size_t>(cid)] =
          sp.with_digit(cid, j, cur);
    }
    for (size_t s = 0; s < noms; ++s)
      sp.shift_nom[s][static_cast<size_t>(cid)] =
          sp.with_digit(cid, k, m->nom_target(static_cast<int>(s)));
  }
  return sp;
}

// ---------------------------------------------------------------------------
// Type refinement.  cls[d][cid] is the class of cid under agreement on all
// degree-<=d formulas of the gated language; pre[d] is the stage before the
// @-jump round (the plain atom classes at d = 0).  Because a jump never
// changes the tuple, one @-round reaches its fixpoint: the jump targets of a
// jump target are the original context's own jump targets.

struct Refinement {
  std::vector<std::vector<int>> cls, pre;
  std::vector<std::vector<long long>> cls_rep, pre_rep;  // first context per class
};

struct Classified {
  std::vector<int> cls;
  std::vector<long long> rep;
};

Classified classify(const std::vector<std::vector<long long>>& keys) {
  Classified out;
  out.cls.resize(keys.size());
  std::map<std::vector<long long>, int> ids;
  for (size_t cid = 0; cid < keys.size(); ++cid) {
    auto [it, fresh] =
        ids.try_emplace(keys[cid], static_cast<int>(out.rep.size()));
    if (fresh) out.rep.push_back(static_cast<long long>(cid));
    out.cls[cid] = it->second;
  }
  return out;
}

void append_sorted_unique(std::vector<long long>& key,
                          std::vector<long long> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  key.push_back(-1);
  key.insert(key.end(), values.begin(), values.end());
}

Classified atom_classes(const Space& sp, const FeatureSet& f) {
  const Signature& sig = sp.sides.front().model->sig();
  std::vector<std::vector<long long>> keys(static_cast<size_t>(sp.total));
  for (long long cid = 0; cid < sp.total; ++cid) {
    std::vector<long long>& key = keys[static_cast<size_t>(cid)];
    const KripkeModel* m = sp.side(cid).model;
    const int cur = sp.current(cid);
    for (size_t p = 0; p < sig.props.size(); ++p)
      key.push_back(m->prop_holds(static_cast<int>(p), cur) ? 1 : 0);
    for (int j = 0; j < sp.k; ++j)
      key.push_back(sp.digit(cid, j) == cur ? 1 : 0);
    if (f.nom)
      for (size_t s = 0; s < sig.noms.size(); ++s)
        key.push_back(m->nom_target(static_cast<int>(s)) == cur ? 1 : 0);
  }
  return classify(keys);
}

Classified at_round(const Space& sp, const FeatureSet& f,
                    const Classified& base) {
  if (!f.at || (sp.k == 0 && !(f.nom && !sp.shift_nom.empty()))) return base;
  std::vector<std::vector<long long>> keys(static_cast<size_t>(sp.total));
  for (long long cid = 0; cid < sp.total; ++cid) {
    std::vector<long long>& key = keys[static_cast<size_t>(cid)];
    key.push_back(base.cls[static_cast<size_t>(cid)]);
    for (int j = 0; j < sp.k; ++j)
      key.push_back(base.cls[static_cast<size_t>(
          sp.shift_var[static_cast<size_t>(j)][static_cast<size_t>(cid)])]);
    if (f.nom)
      for (const auto& table : sp.shift_nom)
        key.push_back(base.cls[static_cast<size_t>(table[static_cast<size_t>(cid)])]);
  }
  return classify(keys);
}

Classified step_classes(const Space& sp, const FeatureSet& f,
                        const std::vector<int>& prev) {
  const bool bind_gate = f.down || f.exists;
  std::vector<std::vector<long long>> keys(static_cast<size_t>(sp.total));
  for (long long cid = 0; cid < sp.total; ++cid) {
    std::vector<long long>& key = keys[static_cast<size_t>(cid)];
    key.push_back(prev[static_cast<size_t>(cid)]);
    std::vector<long long> succ_cls;
    for (long long sc : sp.succ[static_cast<size_t>(cid)])
      succ_cls.push_back(prev[static_cast<size_t>(sc)]);
    append_sorted_unique(key, std::move(succ_cls));
    if (bind_gate)
      for (int j = 0; j < sp.k; ++j)
        key.push_back(prev[static_cast<size_t>(
            sp.bind[static_cast<size_t>(j)][static_cast<size_t>(cid)])]);
    if (f.exists)
      for (int j = 0; j < sp.k; ++j) {
        std::vector<long long> re_cls;
        for (int v = 0; v < sp.side(cid).model->num_worlds(); ++v)
          re_cls.push_back(
              prev[static_cast<size_t>(sp.with_digit(cid, j, v))]);
        append_sorted_unique(key, std::move(re_cls));
      }
  }
  return classify(keys);
}

Refinement refine(const Space& sp, const FeatureSet& f, int L) {
  Refinement r;
  Classified atoms = atom_classes(sp, f);
  Classified c0 = at_round(sp, f, atoms);
  r.pre.push_back(std::move(atoms.cls));
  r.pre_rep.push_back(std::move(atoms.rep));
  r.cls.push_back(std::move(c0.cls));
  r.cls_rep.push_back(std::move(c0.rep));
  for (int d = 1; d <= L; ++d) {
    Classified pre = step_classes(sp, f, r.cls.back());
    Classified cd = at_round(sp, f, pre);
    r.pre.push_back(std::move(pre.cls));
    r.pre_rep.push_back(std::move(pre.rep));
    r.cls.push_back(std::move(cd.cls));
    r.cls_rep.push_back(std::move(cd.rep));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Truth-vector arithmetic over a space.

int word_count(long long total) { return static_cast<int>((total + 63) >> 6); }

TruthVector vec_const(long long total, bool value) {
  TruthVector v;
  v.words.assign(static_cast<size_t>(word_count(total)), value ? ~0ull : 0ull);
  if (value && (total & 63))
    v.words.back() = ~0ull >> (64 - (total & 63));
  return v;
}

void set_bit(TruthVector& v, long long c) {
  v.words[static_cast<size_t>(c >> 6)] |= 1ull << (c & 63);
}

TruthVector vec_not(long long total, const TruthVector& a) {
  TruthVector v = a;
  for (auto& w : v.words) w = ~w;
  if (total & 63) v.words.back() &= ~0ull >> (64 - (total & 63));
  return v;
}

TruthVector vec_or(const TruthVector& a, const TruthVector& b) {
  TruthVector v = a;
  for (size_t i = 0; i < v.words.size(); ++i) v.words[i] |= b.words[i];
  return v;
}

TruthVector vec_dia(const Space& sp, const TruthVector& a) {
  TruthVector v = vec_const(sp.total, false);
  for (long long cid = 0; cid < sp.total; ++cid)
    for (long long sc : sp.succ[static_cast<size_t>(cid)])
      if (a.get(sc)) {
        set_bit(v, cid);
        break;
      }
  return v;
}

TruthVector vec_gather(const Space& sp, const std::vector<long long>& table,
                       const TruthVector& a) {
  TruthVector v = vec_const(sp.total, false);
  for (long long cid = 0; cid < sp.total; ++cid)
    if (a.get(table[static_cast<size_t>(cid)])) set_bit(v, cid);
  return v;
}

TruthVector vec_exists(const Space& sp, int j, const TruthVector& a) {
  TruthVector v = vec_const(sp.total, false);
  for (long long cid = 0; cid < sp.total; ++cid)
    for (int w = 0; w < sp.side(cid).model->num_worlds(); ++w)
      if (a.get(sp.with_digit(cid, j, w))) {
        set_bit(v, cid);
        break;
      }
  return v;
}

// ---------------------------------------------------------------------------
// Enumeration.

struct Candidate {
  HybridFormula formula;
  TruthVector vector;
};

struct VectorHash {
  size_t operator()(const TruthVector& v) const {
    size_t h = 1469598103934665603ull;  // FNV-1a
    for (uint64_t w : v.words) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h;
  }
};

void require_same_signature(const KripkeModel& m, const KripkeModel& n) {
  if (m.sig().props != n.sig().props || m.sig().noms != n.sig().noms)
    throw DomainError("the two models must share a signature");
}

void require_bounds(int k, int L) {
  if (k < 0 || L < 0) throw DomainError("bounds must be non-negative");
}

}  // namespace

long long default_oracle_cap() {
  if (const char* env = std::getenv("HYBIS_ORACLE_CAP")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 200'000;
}

TruthVector truth_vector(const KripkeModel& m, const KripkeModel& n, int k,
                         const HybridFormula& f) {
  if (k < 0) throw DomainError("bounds must be non-negative");
  long long total = 0;
  for (const KripkeModel* model : {&m, &n}) {
    long long count = 1;
    for (int i = 0; i <= k; ++i) {
      count *= model->num_worlds();
      if (count > (1LL << 40))
        throw ResourceError("evaluation-context space is too large");
    }
    total += count;
  }
  TruthVector v = vec_const(total, false);
  long long cid = 0;
  for (const KripkeModel* model : {&m, &n}) {
    const int W = model->num_worlds();
    long long count = 1;
    for (int i = 0; i <= k; ++i) count *= W;
    for (long long lid = 0; lid < count; ++lid, ++cid) {
      std::vector<int> tuple(static_cast<size_t>(k));
      long long rest = lid;
      for (int j = 0; j < k; ++j) {
        tuple[static_cast<size_t>(j)] = static_cast<int>(rest % W);
        rest /= W;
      }
      const int cur = static_cast<int>(rest % W);
      if (sat_hybrid(*model, slot_assignment(tuple), cur, f)) set_bit(v, cid);
    }
  }
  return v;
}

Enumeration enumerate(const KripkeModel& m, const KripkeModel& n,
                      const FeatureSet& f, int k, int L, long long cap) {
  require_same_signature(m, n);
  require_bounds(k, L);
  const long long capv = cap < 0 ? default_oracle_cap() : cap;
  const Space sp = make_space({&m, &n}, k, capv);
  const Signature& sig = m.sig();

  // A saturated stratum holds every degree-<=d definable vector, i.e. the
  // powerset algebra over the degree-d refinement classes.  Knowing that
  // size in advance lets the closure stop the moment it is reached instead
  // of paying a full all-duplicates confirmation round.
  const Refinement ref = refine(sp, f, L);
  std::vector<long long> target(static_cast<size_t>(L) + 1);
  for (int d = 0; d <= L; ++d) {
    const size_t classes = ref.cls_rep[static_cast<size_t>(d)].size();
    target[static_cast<size_t>(d)] =
        classes < 62 ? (1LL << classes) : std::numeric_limits<long long>::max();
  }

  Enumeration out;
  std::unordered_set<TruthVector, VectorHash> seen;
  bool stratum_full = false;
  bool stratum_saturated = false;

  // make_formula is only invoked when the vector is genuinely new, so the
  // (dominant) duplicate candidates never allocate AST nodes.
  auto insert = [&](Stratum& st, int d, TruthVector v, auto&& make_formula) {
    if (seen.count(v) != 0) return false;
    if (static_cast<long long>(st.members.size()) >= capv) {
      if (out.capped_stratum < 0) out.capped_stratum = d;
      out.complete = false;
      stratum_full = true;
      return false;
    }
    seen.insert(v);
    st.members.push_back(Representative{make_formula(), std::move(v)});
    if (static_cast<long long>(st.members.size()) >=
        target[static_cast<size_t>(d)])
      stratum_saturated = true;
    return true;
  };

  for (int d = 0; d <= L; ++d) {
    Stratum st;
    st.degree = d;
    size_t frontier_begin = 0;
    stratum_full = false;
    stratum_saturated = false;

    std::vector<Candidate> cands;
    if (d == 0) {
      cands.push_back({HybridFormula::bot(), vec_const(sp.total, false)});
      cands.push_back({HybridFormula::top(), vec_const(sp.total, true)});
      for (const std::string& p : sig.props) {
        TruthVector v = vec_const(sp.total, false);
        for (long long cid = 0; cid < sp.total; ++cid)
          if (sp.side(cid).model->prop_holds(
                  sp.side(cid).model->prop_index(p), sp.current(cid)))
            set_bit(v, cid);
        cands.push_back({HybridFormula::prop(p), std::move(v)});
      }
      for (int j = 0; j < k; ++j) {
        TruthVector v = vec_const(sp.total, false);
        for (long long cid = 0; cid < sp.total; ++cid)
          if (sp.digit(cid, j) == sp.current(cid)) set_bit(v, cid);
        cands.push_back({HybridFormula::wvar(slot_name(j + 1)), std::move(v)});
      }
      if (f.nom)
        for (size_t s = 0; s < sig.noms.size(); ++s) {
          TruthVector v = vec_const(sp.total, false);
          for (long long cid = 0; cid < sp.total; ++cid)
            if (sp.side(cid).model->nom_target(static_cast<int>(s)) ==
                sp.current(cid))
              set_bit(v, cid);
          cands.push_back({HybridFormula::nom(sig.noms[s]), std::move(v)});
        }
    } else {
      const Stratum& prev = out.strata.back();
      st.members = prev.members;  // strata grow monotonically
      frontier_begin = st.members.size();
      for (const Representative& r : prev.members) {
        cands.push_back({HybridFormula::dia(r.formula), vec_dia(sp, r.vector)});
        if (f.down)
          for (int j = 0; j < k; ++j)
            cands.push_back(
                {HybridFormula::down(slot_name(j + 1), r.formula),
                 vec_gather(sp, sp.bind[static_cast<size_t>(j)], r.vector)});
        if (f.exists)
          for (int j = 0; j < k; ++j)
            cands.push_back({HybridFormula::exists(slot_name(j + 1), r.formula),
                             vec_exists(sp, j, r.vector)});
      }
      std::stable_sort(cands.begin(), cands.end(),
                       [](const Candidate& a, const Candidate& b) {
                         return a.formula.size() < b.formula.size();
                       });
    }
    for (Candidate& c : cands) {
      if (stratum_full || stratum_saturated) break;
      insert(st, d, std::move(c.vector), [&] { return std::move(c.formula); });
    }
    if (static_cast<long long>(st.members.size()) >=
        target[static_cast<size_t>(d)])
      stratum_saturated = true;  // e.g. carried over in full

    // boolean + @ closure: each round combines last round's newcomers with
    // everything present.  Candidates are inserted as they are generated —
    // materializing a round up front is quadratic in the stratum size and
    // defeats the cap.  st.members may reallocate under insert, so every
    // candidate is built before the call.
    auto closing = [&] { return !stratum_full && !stratum_saturated; };
    while (closing()) {
      const size_t count = st.members.size();
      if (frontier_begin == count) break;
      for (size_t i = frontier_begin; i < count && closing(); ++i)
        insert(st, d, vec_not(sp.total, st.members[i].vector),
               [&] { return HybridFormula::neg(st.members[i].formula); });
      if (f.at) {
        for (size_t i = frontier_begin; i < count && closing(); ++i) {
          for (int j = 0; j < k && closing(); ++j)
            insert(st, d,
                   vec_gather(sp, sp.shift_var[static_cast<size_t>(j)],
                              st.members[i].vector),
                   [&] {
                     return HybridFormula::at_wvar(slot_name(j + 1),
                                                   st.members[i].formula);
                   });
          if (f.nom)
            for (size_t s = 0; s < sig.noms.size() && closing(); ++s)
              insert(st, d, vec_gather(sp, sp.shift_nom[s], st.members[i].vector),
                     [&] {
                       return HybridFormula::at_nom(sig.noms[s],
                                                    st.members[i].formula);
                     });
        }
      }
      for (size_t j = frontier_begin; j < count && closing(); ++j)
        for (size_t i = 0; i < j && closing(); ++i)
          insert(st, d, vec_or(st.members[i].vector, st.members[j].vector),
                 [&] {
                   return HybridFormula::disj(st.members[i].formula,
                                              st.members[j].formula);
                 });
      frontier_begin = count;
    }
    out.strata.push_back(std::move(st));
  }
  return out;
}

bool agree_up_to(const PointedModel& mp, const PointedModel& np,
                 const FeatureSet& f, int k, int L, long long cap) {
  require_same_signature(mp.model, np.model);
  require_bounds(k, L);
  const long long capv = cap < 0 ? default_oracle_cap() : cap;
  const Space sp = make_space({&mp.model, &np.model}, k, capv);
  const Refinement r = refine(sp, f, L);
  const long long a = sp.seed_context(0, mp.point);
  const long long b = sp.seed_context(1, np.point);
  return r.cls[static_cast<size_t>(L)][static_cast<size_t>(a)] ==
         r.cls[static_cast<size_t>(L)][static_cast<size_t>(b)];
}

namespace {

// ---------------------------------------------------------------------------
// Characteristic formulas.  chi(d, class) holds at a context of any
// same-signature model iff that context has the given degree-d type; it is
// assembled from one representative context per class, mirroring the
// refinement keys clause for clause.

HybridFormula conj_all(std::vector<HybridFormula> fs) {
  if (fs.empty()) return HybridFormula::top();
  HybridFormula out = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;)
    out = HybridFormula::conj(fs[i], out);
  return out;
}

HybridFormula disj_all(std::vector<HybridFormula> fs) {
  if (fs.empty()) return HybridFormula::bot();
  HybridFormula out = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;)
    out = HybridFormula::disj(fs[i], out);
  return out;
}

class CharBuilder {
 public:
  CharBuilder(const KripkeModel& model, const FeatureSet& f, int k, int L,
              long long cap)
      : model_(model),
        f_(f),
        sp_(make_space({&model}, k, cap)),
        ref_(refine(sp_, f, L)) {}

  HybridFormula at_seed(int point, int L) {
    return chi(L, ref_.cls[static_cast<size_t>(L)][static_cast<size_t>(
                      sp_.seed_context(0, point))]);
  }

 private:
  HybridFormula chi(int d, int c) {
    auto key = std::make_pair(d, c);
    auto it = chi_memo_.find(key);
    if (it != chi_memo_.end()) return it->second;
    const long long rep =
        ref_.cls_rep[static_cast<size_t>(d)][static_cast<size_t>(c)];
    std::vector<HybridFormula> parts;
    parts.push_back(
        pre(d, ref_.pre[static_cast<size_t>(d)][static_cast<size_t>(rep)]));
    if (f_.at) {
      for (int j = 0; j < sp_.k; ++j)
        parts.push_back(HybridFormula::at_wvar(
            slot_name(j + 1),
            pre(d, ref_.pre[static_cast<size_t>(d)][static_cast<size_t>(
                       sp_.shift_var[static_cast<size_t>(j)]
                                    [static_cast<size_t>(rep)])])));
      if (f_.nom)
        for (size_t s = 0; s < model_.sig().noms.size(); ++s)
          parts.push_back(HybridFormula::at_nom(
              model_.sig().noms[s],
              pre(d, ref_.pre[static_cast<size_t>(d)][static_cast<size_t>(
                         sp_.shift_nom[s][static_cast<size_t>(rep)])])));
    }
    HybridFormula out = conj_all(std::move(parts));
    chi_memo_.emplace(key, out);
    return out;
  }

  HybridFormula pre(int d, int p) {
    auto key = std::make_pair(d, p);
    auto it = pre_memo_.find(key);
    if (it != pre_memo_.end()) return it->second;
    const long long rep =
        ref_.pre_rep[static_cast<size_t>(d)][static_cast<size_t>(p)];
    HybridFormula out = d == 0 ? atoms_of(rep) : step_of(d, rep);
    pre_memo_.emplace(key, out);
    return out;
  }

  HybridFormula atoms_of(long long cid) {
    const Signature& sig = model_.sig();
    const int cur = sp_.current(cid);
    std::vector<HybridFormula> lits;
    for (size_t p = 0; p < sig.props.size(); ++p) {
      HybridFormula atom = HybridFormula::prop(sig.props[p]);
      lits.push_back(model_.prop_holds(static_cast<int>(p), cur)
                         ? atom
                         : HybridFormula::neg(atom));
    }
    for (int j = 0; j < sp_.k; ++j) {
      HybridFormula atom = HybridFormula::wvar(slot_name(j + 1));
      lits.push_back(sp_.digit(cid, j) == cur ? atom
                                              : HybridFormula::neg(atom));
    }
    if (f_.nom)
      for (size_t s = 0; s < sig.noms.size(); ++s) {
        HybridFormula atom = HybridFormula::nom(sig.noms[s]);
        lits.push_back(model_.nom_target(static_cast<int>(s)) == cur
                           ? atom
                           : HybridFormula::neg(atom));
      }
    return conj_all(std::move(lits));
  }

  HybridFormula step_of(int d, long long cid) {
    const std::vector<int>& prev = ref_.cls[static_cast<size_t>(d) - 1];
    std::vector<HybridFormula> parts;
    parts.push_back(chi(d - 1, prev[static_cast<size_t>(cid)]));

    std::vector<int> succ_cls;
    for (long long sc : sp_.succ[static_cast<size_t>(cid)])
      succ_cls.push_back(prev[static_cast<size_t>(sc)]);
    std::sort(succ_cls.begin(), succ_cls.end());
    succ_cls.erase(std::unique(succ_cls.begin(), succ_cls.end()),
                   succ_cls.end());
    std::vector<HybridFormula> succ_chis;
    for (int s : succ_cls) succ_chis.push_back(chi(d - 1, s));
    for (const HybridFormula& sc : succ_chis)
      parts.push_back(HybridFormula::dia(sc));
    parts.push_back(HybridFormula::box(disj_all(succ_chis)));

    if (f_.down || f_.exists)
      for (int j = 0; j < sp_.k; ++j) {
        HybridFormula target =
            chi(d - 1, prev[static_cast<size_t>(
                           sp_.bind[static_cast<size_t>(j)]
                                   [static_cast<size_t>(cid)])]);
        const std::string name = slot_name(j + 1);
        parts.push_back(
            f_.down ? HybridFormula::down(name, target)
                    : HybridFormula::exists(
                          name, HybridFormula::conj(HybridFormula::wvar(name),
                                                    target)));
      }
    if (f_.exists)
      for (int j = 0; j < sp_.k; ++j) {
        std::vector<int> re_cls;
        for (int v = 0; v < model_.num_worlds(); ++v)
          re_cls.push_back(
              prev[static_cast<size_t>(sp_.with_digit(cid, j, v))]);
        std::sort(re_cls.begin(), re_cls.end());
        re_cls.erase(std::unique(re_cls.begin(), re_cls.end()), re_cls.end());
        const std::string name = slot_name(j + 1);
        std::vector<HybridFormula> re_chis;
        for (int t : re_cls) re_chis.push_back(chi(d - 1, t));
        for (const HybridFormula& rc : re_chis)
          parts.push_back(HybridFormula::exists(name, rc));
        parts.push_back(HybridFormula::neg(HybridFormula::exists(
            name, HybridFormula::neg(disj_all(re_chis)))));
      }
    return conj_all(std::move(parts));
  }

  const KripkeModel& model_;
  FeatureSet f_;
  Space sp_;
  Refinement ref_;
  std::map<std::pair<int, int>, HybridFormula> chi_memo_, pre_memo_;
};

}  // namespace

std::optional<HybridFormula> separating_formula(const PointedModel& mp,
                                                const PointedModel& np,
                                                const FeatureSet& f, int k,
                                                int L, long long cap) {
  if (agree_up_to(mp, np, f, k, L, cap)) return std::nullopt;
  const long long capv = cap < 0 ? default_oracle_cap() : cap;

  const std::vector<int> tm(static_cast<size_t>(k), mp.point);
  const std::vector<int> tn(static_cast<size_t>(k), np.point);
  auto separates = [&](const HybridFormula& fm) {
    return sat_hybrid(mp.model, slot_assignment(tm), mp.point, fm) !=
           sat_hybrid(np.model, slot_assignment(tn), np.point, fm);
  };

  const Enumeration e = enumerate(mp.model, np.model, f, k, L, capv);
  long long seed_m = 0, seed_n = 0;
  {
    const Space sp = make_space({&mp.model, &np.model}, k, capv);
    seed_m = sp.seed_context(0, mp.point);
    seed_n = sp.seed_context(1, np.point);
  }
  // members of the last stratum are ordered by (stratum introduced,
  // generation order), so one scan honors the preference order
  const std::vector<Representative>& reps =
      e.strata[static_cast<size_t>(L)].members;
  for (bool closed_pass : {true, false})
    for (const Representative& r : reps) {
      if (closed_pass != is_sentence(r.formula)) continue;
      if (r.vector.get(seed_m) == r.vector.get(seed_n)) continue;
      if (separates(r.formula)) return r.formula;
    }

  // the capped enumeration missed every separator; fall back to the left
  // seed's characteristic formula, which disagrees whenever the types do
  CharBuilder cb(mp.model, f, k, L, capv);
  HybridFormula chi = cb.at_seed(mp.point, L);
  if (!separates(chi))
    throw std::logic_error(
        "characteristic formula failed to separate disagreeing seeds");
  return chi;
}

HybridFormula axiomatise(const std::vector<PointedModel>& ks,
                         const FeatureSet& f, int L, long long cap) {
  if (L < 0) throw DomainError("bounds must be non-negative");
  const long long capv = cap < 0 ? default_oracle_cap() : cap;
  if (ks.empty()) return HybridFormula::bot();
  for (const PointedModel& pm : ks) {
    require_same_signature(ks.front().model, pm.model);
    if (pm.point < 0 || pm.point >= pm.model.num_worlds())
      throw DomainError("pointed model's point is out of range");
  }
  const int k = (f.down || f.exists) ? L : 0;
  std::vector<HybridFormula> parts;
  for (const PointedModel& pm : ks) {
    CharBuilder cb(pm.model, f, k, L, capv);
    HybridFormula chi = cb.at_seed(pm.point, L);
    if (chi.size() > capv)
      throw ResourceError("characteristic formula of " +
                          std::to_string(chi.size()) +
                          " nodes exceeds the cap of " + std::to_string(capv));
    parts.push_back(std::move(chi));
  }
  return disj_all(std::move(parts));
}

}  // namespace hybis
