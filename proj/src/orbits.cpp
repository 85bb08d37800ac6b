#include "latcol/orbits.hpp"

#include <algorithm>
#include <deque>

#include "latcol/error.hpp"

namespace latcol {

std::vector<Vec> torus_points(const IntegerLattice& lattice) {
  const int d = lattice.dim();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(lattice.index()));
  Vec x{};
  for (;;) {
    out.push_back(x);
    int i = d - 1;
    while (i >= 0 && ++x[static_cast<std::size_t>(i)] == lattice.pivot(i)) x[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

std::size_t torus_position(const IntegerLattice& lattice, const Vec& reduced) {
  std::size_t pos = 0;
  for (int i = 0; i < lattice.dim(); ++i)
    pos = pos * static_cast<std::size_t>(lattice.pivot(i)) + static_cast<std::size_t>(reduced[static_cast<std::size_t>(i)]);
  return pos;
}

std::vector<int> OrbitPartition::orbit_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(orbit_count), 0);
  for (int c : colors) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

void normalize_colors(OrbitPartition& p) {
  int top = 0;
  for (int c : p.colors) top = std::max(top, c + 1);
  std::vector<int> relabel(static_cast<std::size_t>(top), -1);
  p.orbit_count = 0;
  for (int& c : p.colors) {
    int& r = relabel[static_cast<std::size_t>(c)];
    if (r < 0) r = p.orbit_count++;
    c = r;
  }
}

OrbitPartition orbit_partition(const CrystGroup& g) {
  OrbitPartition p;
  p.lattice = g.translations();
  auto points = torus_points(p.lattice);
  p.colors.assign(points.size(), -1);
  std::vector<AffineMap> moves;
  for (const auto& m : g.generators())
    if (!m.is_translation()) moves.push_back(m);
  for (std::size_t s = 0; s < points.size(); ++s) {
    if (p.colors[s] >= 0) continue;
    int color = p.orbit_count++;
    p.colors[s] = color;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (const auto& m : moves) {
        std::size_t v = torus_position(p.lattice, p.lattice.reduce(m.apply(points[u])));
        if (p.colors[v] < 0) {
          p.colors[v] = color;
          queue.push_back(v);
        }
      }
    }
  }
  return p;
}

StabilizerInfo stabilizer(const CrystGroup& g, const Vec& x) {
  StabilizerInfo info;
  info.point = x;
  for (const auto& r : g.coset_representatives()) {
    Vec y = r.apply(x), v{};
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x[i] - y[i];
    if (!g.translations().contains(v)) continue;
    AffineMap e = r;
    for (std::size_t i = 0; i < v.size(); ++i) e.translation[i] += v[i];
    info.elements.push_back(e);
  }
  info.order = static_cast<int>(info.elements.size());
  return info;
}

Proposition1Report proposition1_check(const CrystGroup& G, const CrystGroup& H) {
  if (!G.contains(H)) throw InvalidArgument("H is not a subgroup of G");
  Proposition1Report rep;
  rep.index = H.index() / G.index();
  OrbitPartition pg = orbit_partition(G), ph = orbit_partition(H);
  rep.sums.assign(static_cast<std::size_t>(pg.orbit_count), 0);
  auto points = torus_points(ph.lattice);
  std::vector<char> done(static_cast<std::size_t>(ph.orbit_count), 0);
  for (std::size_t s = 0; s < points.size(); ++s) {
    int h = ph.colors[s];
    if (done[static_cast<std::size_t>(h)]) continue;
    done[static_cast<std::size_t>(h)] = 1;
    Proposition1Term t;
    t.h_orbit = h;
    t.point = points[s];
    t.g_orbit = pg.color_of(points[s]);
    t.stab_g = stabilizer(G, points[s]).order;
    t.stab_h = stabilizer(H, points[s]).order;
    if (t.stab_g % t.stab_h != 0) throw ConsistencyError("stabilizer in H does not divide stabilizer in G");
    rep.sums[static_cast<std::size_t>(t.g_orbit)] += t.stab_g / t.stab_h;
    rep.terms.push_back(t);
  }
  rep.holds = std::all_of(rep.sums.begin(), rep.sums.end(), [&](std::int64_t s) { return s == rep.index; });
  return rep;
}

CrystGroup subgroup_from_table(int d, const CosetTable& table) {
  if (table.generator_count() != static_cast<int>(generator_maps(d).size()))
    throw InvalidArgument("coset table does not match the presentation for this dimension");
  CrystGroup h = subgroup_from_table(generator_maps(d), table);
  if (h.index() != table.index()) throw ConsistencyError("coset table index disagrees with the affine subgroup");
  return h;
}

CrystGroup subgroup_from_table(const std::vector<AffineMap>& maps, const CosetTable& table) {
  if (maps.empty() || table.generator_count() != static_cast<int>(maps.size()))
    throw InvalidArgument("coset table does not match the generator images");
  const int d = maps[0].dim();
  const int n = table.index();
  // Affine images of the breadth-first representatives.
  std::vector<AffineMap> rep(static_cast<std::size_t>(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  rep[0] = AffineMap::identity(d);
  seen[0] = 1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int g = 0; g < table.generator_count(); ++g) {
      for (int sign : {1, -1}) {
        int e = table.act(c, sign * (g + 1));
        if (seen[static_cast<std::size_t>(e)]) continue;
        seen[static_cast<std::size_t>(e)] = 1;
        const AffineMap& m = maps[static_cast<std::size_t>(g)];
        rep[static_cast<std::size_t>(e)] = rep[static_cast<std::size_t>(c)] * (sign > 0 ? m : m.inverse());
        queue.push_back(e);
      }
    }
  }
  std::vector<AffineMap> gens;
  for (int c = 0; c < n; ++c)
    for (int g = 0; g < table.generator_count(); ++g) {
      int e = table.act(c, g + 1);
      AffineMap s = rep[static_cast<std::size_t>(c)] * maps[static_cast<std::size_t>(g)] *
                    rep[static_cast<std::size_t>(e)].inverse();
      if (!s.is_identity()) gens.push_back(s);
    }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return CrystGroup::generate(d, gens);
}

std::vector<int> point_stabilizer_generators(int d) {
  std::vector<int> out;
  auto maps = generator_maps(d);
  for (std::size_t g = 0; g < maps.size(); ++g)
    if (maps[g].translation == Vec{}) out.push_back(static_cast<int>(g));
  return out;
}

std::vector<int> node_orbit_sizes(int d, const CosetTable& table) {
  auto w = point_stabilizer_generators(d);
  std::vector<int> orbit(static_cast<std::size_t>(table.index()), -1);
  std::vector<int> sizes;
  for (int s = 0; s < table.index(); ++s) {
    if (orbit[static_cast<std::size_t>(s)] >= 0) continue;
    int id = static_cast<int>(sizes.size());
    sizes.push_back(0);
    std::vector<int> stack{s};
    orbit[static_cast<std::size_t>(s)] = id;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      ++sizes.back();
      for (int g : w)
        for (int x : {g + 1, -(g + 1)}) {
          int e = table.act(c, x);
          if (orbit[static_cast<std::size_t>(e)] < 0) {
            orbit[static_cast<std::size_t>(e)] = id;
            stack.push_back(e);
          }
        }
    }
  }
  return sizes;
}

}  // namespace latcol
