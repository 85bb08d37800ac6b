#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "latcol/crystgeom.hpp"
#include "latcol/error.hpp"

namespace latcol {

namespace {

Vec subtract(const Vec& a, const Vec& b) {
  Vec r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

}  // namespace

CrystGroup CrystGroup::generate(int d, const std::vector<AffineMap>& generators) {
  for (const auto& g : generators)
    if (g.dim() != d) throw InvalidArgument("generator has the wrong dimension");
  CrystGroup out;
  out.dim_ = d;
  out.rep_of_code_.assign(static_cast<std::size_t>(hyperoctahedral_order(d)), -1);
  out.reps_.push_back(AffineMap::identity(d));
  out.rep_of_code_[static_cast<std::size_t>(SignedPerm::identity(d).code())] = 0;
  LatticeBuilder lattice(d);
  for (std::size_t k = 0; k < out.reps_.size(); ++k) {
    for (const auto& g : generators) {
      AffineMap m = out.reps_[k] * g;
      int& slot = out.rep_of_code_[static_cast<std::size_t>(m.linear.code())];
      if (slot < 0) {
        slot = static_cast<int>(out.reps_.size());
        out.reps_.push_back(m);
        continue;
      }
      // m * rep^-1 is a pure translation by m.t - rep.t (same linear part).
      lattice.add(subtract(m.translation, out.reps_[static_cast<std::size_t>(slot)].translation));
    }
  }
  if (!lattice.full_rank()) throw InvalidArgument("generators do not give a finite-index subgroup");
  out.lattice_ = lattice.finish();
  for (auto& r : out.reps_) r.translation = out.lattice_.reduce(r.translation);
  out.choose_generators();
  return out;
}

CrystGroup CrystGroup::from_cosets(const IntegerLattice& lattice, std::vector<AffineMap> representatives) {
  CrystGroup out;
  out.dim_ = lattice.dim();
  out.lattice_ = lattice;
  out.reps_ = std::move(representatives);
  for (auto& r : out.reps_) {
    if (r.dim() != out.dim_) throw InvalidArgument("representative has the wrong dimension");
    r.translation = lattice.reduce(r.translation);
  }
  out.index_representatives();
  out.choose_generators();
  return out;
}

void CrystGroup::index_representatives() {
  rep_of_code_.assign(static_cast<std::size_t>(hyperoctahedral_order(dim_)), -1);
  int identity_slot = -1;
  for (std::size_t k = 0; k < reps_.size(); ++k) {
    int& slot = rep_of_code_[static_cast<std::size_t>(reps_[k].linear.code())];
    if (slot >= 0) throw InvalidArgument("two representatives share a linear part");
    slot = static_cast<int>(k);
    if (reps_[k].linear.is_identity()) identity_slot = static_cast<int>(k);
  }
  if (identity_slot < 0) throw InvalidArgument("representatives lack the identity");
  if (identity_slot != 0) {
    std::swap(reps_[0], reps_[static_cast<std::size_t>(identity_slot)]);
    rep_of_code_[static_cast<std::size_t>(reps_[0].linear.code())] = 0;
    rep_of_code_[static_cast<std::size_t>(reps_[static_cast<std::size_t>(identity_slot)].linear.code())] = identity_slot;
  }
}

void CrystGroup::choose_generators() {
  generators_.clear();
  // Greedy: keep a representative when its linear part is not yet generated.
  std::vector<char> reached(static_cast<std::size_t>(hyperoctahedral_order(dim_)), 0);
  std::vector<SignedPerm> closure{SignedPerm::identity(dim_)};
  reached[static_cast<std::size_t>(closure[0].code())] = 1;
  for (const auto& r : reps_) {
    if (reached[static_cast<std::size_t>(r.linear.code())]) continue;
    generators_.push_back(r);
    for (std::size_t k = 0; k < closure.size(); ++k)
      for (const auto& g : generators_) {
        SignedPerm p = closure[k] * g.linear;
        if (!reached[static_cast<std::size_t>(p.code())]) {
          reached[static_cast<std::size_t>(p.code())] = 1;
          closure.push_back(p);
        }
      }
  }
  for (int i = 0; i < dim_; ++i) generators_.push_back(AffineMap::pure_translation(dim_, lattice_.row(i)));
}

std::vector<SignedPerm> CrystGroup::point_group() const {
  std::vector<SignedPerm> out;
  for (const auto& r : reps_) out.push_back(r.linear);
  return out;
}

const AffineMap* CrystGroup::representative(const SignedPerm& b) const {
  if (b.dim() != dim_) return nullptr;
  int slot = rep_of_code_[static_cast<std::size_t>(b.code())];
  return slot < 0 ? nullptr : &reps_[static_cast<std::size_t>(slot)];
}

bool CrystGroup::contains(const AffineMap& m) const {
  const AffineMap* r = representative(m.linear);
  return r && lattice_.contains(subtract(m.translation, r->translation));
}

bool CrystGroup::contains(const CrystGroup& sub) const {
  if (sub.dim_ != dim_ || !lattice_.contains(sub.lattice_)) return false;
  return std::all_of(sub.reps_.begin(), sub.reps_.end(), [this](const AffineMap& r) { return contains(r); });
}

std::int64_t CrystGroup::index() const {
  return lattice_.index() * hyperoctahedral_order(dim_) / point_group_order();
}

CrystGroup CrystGroup::conjugated(const AffineMap& g) const {
  AffineMap gi = g.inverse();
  std::vector<AffineMap> reps;
  for (const auto& r : reps_) reps.push_back(g * r * gi);
  return from_cosets(lattice_.transformed(g.linear), std::move(reps));
}

bool operator==(const CrystGroup& a, const CrystGroup& b) {
  if (a.dim_ != b.dim_ || a.lattice_ != b.lattice_ || a.reps_.size() != b.reps_.size()) return false;
  for (const auto& r : a.reps_) {
    const AffineMap* s = b.representative(r.linear);
    if (!s || s->translation != r.translation) return false;
  }
  return true;
}

TranslationSubgroup translation_subgroup(const CrystGroup& g) {
  return {g.translations(), g.coset_representatives()};
}

CrystGroup full_automorphism_group(int d) {
  auto gens = generator_maps(d);
  for (int i = 0; i < d; ++i) gens.push_back(AffineMap::unit_translation(d, i));
  return CrystGroup::generate(d, gens);
}

CrystGroup lattice_normalizer(const IntegerLattice& lattice) {
  const int d = lattice.dim();
  std::vector<AffineMap> reps;
  for (const auto& b : hyperoctahedral_group(d))
    if (lattice.transformed(b) == lattice) reps.push_back(AffineMap{b, {}});
  return CrystGroup::from_cosets(IntegerLattice::full(d), std::move(reps));
}

bool contains(const CrystGroup& g, const AffineMap& m) { return g.contains(m); }

// ---------------------------------------------------------------------------
// Fingerprints

namespace {

Permutation compose(const Permutation& p, const Permutation& q) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[static_cast<std::size_t>(q[i])];
  return r;
}

Permutation invert(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return r;
}

std::set<Permutation> closure(const std::vector<Permutation>& gens, std::size_t n) {
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<Permutation> seen{id};
  std::deque<Permutation> queue{id};
  while (!queue.empty()) {
    Permutation p = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      Permutation q = compose(p, g);
      if (seen.insert(q).second) queue.push_back(q);
    }
  }
  return seen;
}

}  // namespace

GroupFingerprint group_fingerprint(const std::vector<Permutation>& elements) {
  if (elements.empty()) throw InvalidArgument("empty group");
  const std::size_t n = elements[0].size();
  std::set<Permutation> group(elements.begin(), elements.end());
  for (const auto& p : group) {
    if (p.size() != n) throw InvalidArgument("permutations of different degree");
    for (const auto& q : group)
      if (!group.count(compose(p, q))) throw InvalidArgument("elements are not closed under composition");
  }
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0);

  GroupFingerprint fp;
  fp.order = static_cast<std::int64_t>(group.size());
  for (const auto& p : group) {
    int k = 1;
    for (Permutation q = p; q != id; q = compose(q, p)) ++k;
    ++fp.element_orders[k];
    bool central = std::all_of(group.begin(), group.end(),
                               [&](const Permutation& q) { return compose(p, q) == compose(q, p); });
    if (central) ++fp.center_order;
  }

  std::vector<Permutation> commutators;
  for (const auto& p : group)
    for (const auto& q : group) commutators.push_back(compose(compose(invert(p), invert(q)), compose(p, q)));
  std::sort(commutators.begin(), commutators.end());
  commutators.erase(std::unique(commutators.begin(), commutators.end()), commutators.end());
  std::set<Permutation> derived = closure(commutators, n);

  // In G/G', the number of elements with order dividing p^k is p^(sum min(k, e_i)).
  std::int64_t quotient = fp.order / static_cast<std::int64_t>(derived.size());
  std::map<Permutation, std::int64_t> coset_order;  // keyed by coset minimum
  for (const auto& p : group) {
    Permutation key = p;
    for (const auto& h : derived) key = std::min(key, compose(p, h));
    if (coset_order.count(key)) continue;
    std::int64_t k = 1;
    for (Permutation q = p; !derived.count(q); q = compose(q, p)) ++k;
    coset_order[key] = k;
  }
  std::int64_t rest = quotient;
  for (std::int64_t prime = 2; rest > 1; ++prime) {
    if (rest % prime) continue;
    while (rest % prime == 0) rest /= prime;
    // log_p of the count of elements of order dividing p^k, for k = 0, 1, ...
    std::vector<int> logs{0};
    for (std::int64_t pk = prime;; pk *= prime) {
      std::int64_t count = 0;
      for (const auto& [key, ord] : coset_order)
        if (pk % ord == 0) ++count;
      int lg = 0;
      while (count > 1) {
        count /= prime;
        ++lg;
      }
      if (lg == logs.back()) break;
      logs.push_back(lg);
    }
    // logs[k] - logs[k-1] = number of invariants with exponent >= k.
    for (std::size_t k = 1; k < logs.size(); ++k) {
      int at_least_k = logs[k] - logs[k - 1];
      int at_least_next = k + 1 < logs.size() ? logs[k + 1] - logs[k] : 0;
      std::int64_t power = 1;
      for (std::size_t j = 0; j < k; ++j) power *= prime;
      for (int c = 0; c < at_least_k - at_least_next; ++c) fp.abelian_invariants.push_back(power);
    }
  }
  std::sort(fp.abelian_invariants.begin(), fp.abelian_invariants.end());
  return fp;
}

GroupFingerprint group_fingerprint(const std::vector<SignedPerm>& elements) {
  std::vector<Permutation> perms;
  for (const auto& b : elements) perms.push_back(as_permutation(b));
  return group_fingerprint(perms);
}

Permutation as_permutation(const SignedPerm& b) {
  const int d = b.dim();
  Permutation p(static_cast<std::size_t>(2 * d));
  for (int j = 0; j < d; ++j) {
    // B e_j has a single nonzero entry at the row i with perm(i) == j.
    for (int i = 0; i < d; ++i) {
      if (b.perm(i) != j) continue;
      int s = b.sign(i);
      p[static_cast<std::size_t>(j)] = s > 0 ? i : d + i;
      p[static_cast<std::size_t>(d + j)] = s > 0 ? d + i : i;
    }
  }
  return p;
}

}  // namespace latcol
