#include "latcol/partitions.hpp"

#include <algorithm>
#include <set>

#include "latcol/error.hpp"

namespace latcol {

namespace {

Vec add(const Vec& a, const Vec& b) {
  Vec r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec negate(const Vec& a) {
  Vec r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = -a[i];
  return r;
}

bool same_classes(const OrbitPartition& a, const OrbitPartition& b) {
  if (a.lattice != b.lattice) return false;
  OrbitPartition x = a, y = b;
  normalize_colors(x);
  normalize_colors(y);
  return x.colors == y.colors;
}

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int k = bytes - 1; k >= 0; --k) out.push_back(static_cast<std::uint8_t>((v >> (8 * k)) & 0xff));
}

}  // namespace

IntegerLattice max_translation_lattice(const OrbitPartition& p) {
  const int d = p.dim();
  auto points = torus_points(p.lattice);
  std::vector<Vec> gens;
  for (int i = 0; i < d; ++i) gens.push_back(p.lattice.row(i));
  for (std::size_t s = 1; s < points.size(); ++s) {
    const Vec& v = points[s];
    bool ok = true;
    for (std::size_t k = 0; k < points.size() && ok; ++k)
      ok = p.colors[k] == p.color_of(add(points[k], v));
    if (ok) gens.push_back(v);
  }
  return IntegerLattice::hnf(d, gens);
}

OrbitPartition repartition(const OrbitPartition& p, const IntegerLattice& lattice) {
  OrbitPartition out;
  out.lattice = lattice;
  for (const Vec& y : torus_points(lattice)) out.colors.push_back(p.color_of(y));
  normalize_colors(out);
  return out;
}

OrbitPartition transform_partition(const OrbitPartition& p, const AffineMap& g) {
  OrbitPartition out;
  out.lattice = p.lattice.transformed(g.linear);
  AffineMap gi = g.inverse();
  for (const Vec& y : torus_points(out.lattice)) out.colors.push_back(p.color_of(gi.apply(y)));
  normalize_colors(out);
  return out;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (auto b : bytes) {
    s += digits[b >> 4];
    s += digits[b & 15];
  }
  return s;
}

std::string Certificate::hex() const { return to_hex(bytes); }

Certificate canonical_certificate(const OrbitPartition& p) {
  const int d = p.dim();
  OrbitPartition q = repartition(p, max_translation_lattice(p));
  const IntegerLattice& tstar = q.lattice;

  auto header = [&](const IntegerLattice& l) {
    std::vector<std::uint8_t> h;
    h.push_back(static_cast<std::uint8_t>(d));
    put_be(h, static_cast<std::uint64_t>(q.orbit_count), 2);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) put_be(h, static_cast<std::uint64_t>(l.row(i)[static_cast<std::size_t>(j)]), 4);
    return h;
  };

  std::vector<std::uint8_t> best_header;
  std::vector<SignedPerm> candidates;
  for (const auto& b : hyperoctahedral_group(d)) {
    auto h = header(tstar.transformed(b));
    if (best_header.empty() || h < best_header) {
      best_header = std::move(h);
      candidates = {b};
    } else if (h == best_header) {
      candidates.push_back(b);
    }
  }

  std::vector<int> best_word, word;
  AffineMap best_map;
  for (const auto& b : candidates) {
    IntegerLattice l = tstar.transformed(b);
    auto points = torus_points(l);
    SignedPerm bi = b.inverse();
    std::vector<Vec> pre;
    for (const Vec& y : points) pre.push_back(bi.apply(y));
    for (const Vec& t : points) {
      // colour'(y) = colour(B^-1 y - B^-1 t)
      Vec shift = negate(bi.apply(t));
      std::vector<int> relabel(static_cast<std::size_t>(q.orbit_count), -1);
      int next = 0;
      word.clear();
      bool worse = false, better = best_word.empty();
      for (std::size_t k = 0; k < pre.size(); ++k) {
        int c = q.color_of(add(pre[k], shift));
        int& r = relabel[static_cast<std::size_t>(c)];
        if (r < 0) r = next++;
        word.push_back(r);
        if (!better) {
          if (r > best_word[k]) {
            worse = true;
            break;
          }
          if (r < best_word[k]) better = true;
        }
      }
      if (worse || !better) continue;
      best_word = word;
      best_map = AffineMap{b, t};
    }
  }

  Certificate cert;
  cert.bytes = best_header;
  for (int c : best_word) cert.bytes.push_back(static_cast<std::uint8_t>(c));
  cert.witness = best_map;
  cert.canonical.lattice = tstar.transformed(best_map.linear);
  cert.canonical.colors = best_word;
  cert.canonical.orbit_count = q.orbit_count;
  return cert;
}

CrystGroup class_stabilizer(const OrbitPartition& p, const IntegerLattice& normalized) {
  const int d = p.dim();
  OrbitPartition q = repartition(p, max_translation_lattice(p));
  const IntegerLattice& tstar = q.lattice;
  auto points = torus_points(tstar);
  std::vector<AffineMap> reps;
  for (const auto& b : hyperoctahedral_group(d)) {
    if (normalized.transformed(b) != normalized || tstar.transformed(b) != tstar) continue;
    std::vector<Vec> images;
    for (const Vec& x : points) images.push_back(b.apply(x));
    for (const Vec& t : points) {
      if (q.color_of(t) != q.colors[0]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < points.size() && ok; ++k) ok = q.color_of(add(images[k], t)) == q.colors[k];
      if (ok) {
        reps.push_back(AffineMap{b, t});
        break;
      }
    }
  }
  return CrystGroup::from_cosets(tstar, std::move(reps));
}

AutPartitionSteps aut_partition_steps(const CrystGroup& H, const OrbitPartition& p) {
  IntegerLattice tstar = max_translation_lattice(p);
  OrbitPartition q = repartition(p, tstar);
  OrbitPartition oh = orbit_partition(H);
  if (max_translation_lattice(oh) != tstar || !same_classes(repartition(oh, tstar), q))
    throw InvalidArgument("partition is not the orbit partition of the group");
  AutPartitionSteps out;
  out.intermediate = class_stabilizer(p, H.translations());
  if (out.intermediate.translations() != tstar)
    throw ConsistencyError("class stabilizer translations differ from the maximal lattice");
  out.aut = class_stabilizer(p, out.intermediate.translations());
  if (!out.aut.contains(H) || !out.aut.contains(out.intermediate))
    throw ConsistencyError("symmetry group does not contain the generating group");
  if (!same_classes(repartition(orbit_partition(out.aut), tstar), q))
    throw ConsistencyError("symmetry group orbits differ from the partition classes");
  return out;
}

CrystGroup aut_partition(const CrystGroup& H, const OrbitPartition& p) { return aut_partition_steps(H, p).aut; }

void InclusionAccumulator::add(const CrystGroup& group, const Certificate& certificate) {
  CrystGroup g = group.conjugated(certificate.witness);
  auto& top = maximal_[certificate.bytes];
  for (const auto& m : top)
    if (m.contains(g)) return;
  std::erase_if(top, [&g](const CrystGroup& m) { return g.contains(m); });
  top.push_back(std::move(g));
}

std::map<std::vector<std::uint8_t>, CrystGroup> InclusionAccumulator::largest() const {
  std::map<std::vector<std::uint8_t>, CrystGroup> out;
  for (const auto& [bytes, top] : maximal_) {
    if (top.size() != 1) throw ConsistencyError("no unique maximal group for certificate " + to_hex(bytes));
    out.emplace(bytes, top.front());
  }
  return out;
}

std::map<std::vector<std::uint8_t>, CrystGroup> aut_partition_by_inclusion(const std::vector<InclusionInput>& records) {
  InclusionAccumulator acc;
  for (const auto& r : records) acc.add(r.group, r.certificate);
  return acc.largest();
}

IndexDecomposition index_decomposition(const CrystGroup& g) {
  return {g.translations().index(), hyperoctahedral_order(g.dim()) / g.point_group_order()};
}

std::vector<Permutation> color_permutation_group(const OrbitPartition& p) {
  const int d = p.dim();
  OrbitPartition q = repartition(p, max_translation_lattice(p));
  auto points = torus_points(q.lattice);
  const auto n = static_cast<std::size_t>(q.orbit_count);
  std::set<Permutation> found;
  for (const auto& b : hyperoctahedral_group(d)) {
    if (q.lattice.transformed(b) != q.lattice) continue;
    std::vector<Vec> images;
    for (const Vec& x : points) images.push_back(b.apply(x));
    for (const Vec& t : points) {
      Permutation sigma(n, -1);
      bool ok = true;
      for (std::size_t k = 0; k < points.size() && ok; ++k) {
        int c = q.colors[k], e = q.color_of(add(images[k], t));
        int& s = sigma[static_cast<std::size_t>(c)];
        if (s < 0) s = e;
        ok = s == e;
      }
      if (!ok) continue;
      std::vector<char> hit(n, 0);
      for (int s : sigma) hit[static_cast<std::size_t>(s)] = 1;
      if (std::find(hit.begin(), hit.end(), 0) == hit.end()) found.insert(sigma);
    }
  }
  return {found.begin(), found.end()};
}

bool is_transitive(const std::vector<Permutation>& group, int points) {
  if (points <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(points), 0);
  seen[0] = 1;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const auto& g : group) {
      int y = g[static_cast<std::size_t>(x)];
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        stack.push_back(y);
      }
    }
  }
  return std::find(seen.begin(), seen.end(), 0) == seen.end();
}

bool swap_symmetric(const OrbitPartition& p) { return is_transitive(color_permutation_group(p), p.orbit_count); }

std::vector<std::vector<int>> NeighbourhoodSignature::key() const {
  auto out = stars;
  std::sort(out.begin(), out.end());
  return out;
}

NeighbourhoodSignature neighbourhood_signature(const OrbitPartition& p, int radius) {
  if (radius != 1 && radius != 2) throw InvalidArgument("radius must be 1 or 2");
  const int d = p.dim();
  std::vector<Vec> offsets;
  for (int i = 0; i < d; ++i)
    for (int s : {1, -1}) {
      Vec v{};
      v[static_cast<std::size_t>(i)] = s;
      offsets.push_back(v);
    }
  if (radius == 2) {
    std::vector<Vec> shell;
    for (const Vec& a : offsets)
      for (const Vec& b : offsets) {
        Vec v = add(a, b);
        std::int64_t l1 = 0;
        for (auto x : v) l1 += x < 0 ? -x : x;
        if (l1 == 2) shell.push_back(v);
      }
    std::sort(shell.begin(), shell.end());
    shell.erase(std::unique(shell.begin(), shell.end()), shell.end());
    offsets.insert(offsets.end(), shell.begin(), shell.end());
  }
  NeighbourhoodSignature sig;
  sig.radius = radius;
  const auto n = static_cast<std::size_t>(p.orbit_count);
  sig.counts.assign(n, std::vector<int>(n, 0));
  sig.stars.resize(n);
  std::vector<char> done(n, 0);
  auto points = torus_points(p.lattice);
  for (std::size_t k = 0; k < points.size(); ++k) {
    auto c = static_cast<std::size_t>(p.colors[k]);
    if (done[c]) continue;
    done[c] = 1;
    for (const Vec& v : offsets) ++sig.counts[c][static_cast<std::size_t>(p.color_of(add(points[k], v)))];
    std::vector<int> best, star;
    std::vector<int> relabel(n);
    for (const auto& b : hyperoctahedral_group(d)) {
      std::fill(relabel.begin(), relabel.end(), -1);
      relabel[c] = 0;
      int next = 1;
      star.clear();
      for (const Vec& v : offsets) {
        auto e = static_cast<std::size_t>(p.color_of(add(points[k], b.apply(v))));
        if (relabel[e] < 0) relabel[e] = next++;
        star.push_back(relabel[e]);
      }
      if (best.empty() || star < best) best = star;
    }
    sig.stars[c] = std::move(best);
  }
  return sig;
}

bool is_proper_colouring(const OrbitPartition& p) {
  auto points = torus_points(p.lattice);
  for (std::size_t k = 0; k < points.size(); ++k)
    for (int i = 0; i < p.dim(); ++i) {
      Vec y = points[k];
      ++y[static_cast<std::size_t>(i)];
      if (p.color_of(y) == p.colors[k]) return false;
    }
  return true;
}

OrbitPartition superposition_lift(const OrbitPartition& p) {
  const int d = p.dim();
  if (d >= kMaxDim) throw InvalidArgument("cannot lift beyond dimension 4");
  std::vector<Vec> rows;
  for (int i = 0; i < d; ++i) rows.push_back(p.lattice.row(i));
  Vec e{};
  e[static_cast<std::size_t>(d)] = 1;
  rows.push_back(e);
  OrbitPartition out;
  out.lattice = IntegerLattice::hnf(d + 1, rows);
  out.colors = p.colors;
  out.orbit_count = p.orbit_count;
  return out;
}

bool is_superposed(const OrbitPartition& p) {
  IntegerLattice t = max_translation_lattice(p);
  for (int i = 0; i < p.dim(); ++i) {
    Vec e{};
    e[static_cast<std::size_t>(i)] = 1;
    if (t.contains(e)) return true;
  }
  return false;
}

std::vector<GroupFingerprint> stabilizer_fingerprints(const CrystGroup& g, const OrbitPartition& p) {
  std::vector<GroupFingerprint> out(static_cast<std::size_t>(p.orbit_count));
  std::vector<char> done(out.size(), 0);
  auto points = torus_points(p.lattice);
  for (std::size_t k = 0; k < points.size(); ++k) {
    auto c = static_cast<std::size_t>(p.colors[k]);
    if (done[c]) continue;
    done[c] = 1;
    std::vector<SignedPerm> linear;
    for (const auto& e : stabilizer(g, points[k]).elements) linear.push_back(e.linear);
    out[c] = group_fingerprint(linear);
  }
  return out;
}

}  // namespace latcol
