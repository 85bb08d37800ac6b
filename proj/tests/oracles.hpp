#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. They use only coset tables, words and generator images.

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "latcol/crystgeom.hpp"
#include "latcol/fpgroup.hpp"
#include "latcol/orbits.hpp"

namespace oracle {

using namespace latcol;

inline int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
  return x;
}

// Words for the unit translations of Z^2 in make_presentation(2).
inline std::vector<Word> unit_translation_words_2d() {
  Presentation p = make_presentation(2);
  Word ty = p.parse_word("bcac");
  Word tx = p.parse_word("c") * ty * p.parse_word("c");
  return {tx, ty};
}

// Smallest modulus m in {24, 120, 168, 840} with m Z^2 inside the subgroup of
// the table; 0 if none.
inline int torus_modulus_2d(const CosetTable& t) {
  auto units = unit_translation_words_2d();
  for (int m : {24, 120, 168, 840}) {
    bool ok = true;
    for (const Word& u : units) ok = ok && t.trace(0, u.power(m)) == 0;
    if (ok) return m;
  }
  return 0;
}

// Orbits of the subgroup of a d=2 table on Z^2 / (mZ)^2, by union-find over
// its Schreier generators. Entry x*m + y is the orbit root of (x, y).
inline std::vector<int> brute_orbits_2d(const CosetTable& t, int m) {
  Presentation p = make_presentation(2);
  auto maps = generator_maps(2);
  std::vector<AffineMap> gens;
  for (const Word& w : schreier_generators(p, t)) gens.push_back(word_to_affine(w, maps));
  std::vector<int> parent(static_cast<std::size_t>(m * m));
  std::iota(parent.begin(), parent.end(), 0);
  auto mod = [m](std::int64_t v) { return static_cast<int>(((v % m) + m) % m); };
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (const auto& g : gens) {
        Vec img = g.apply(Vec{x, y, 0, 0});
        int a = find_root(parent, x * m + y), b = find_root(parent, mod(img[0]) * m + mod(img[1]));
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }
  for (int i = 0; i < m * m; ++i) parent[static_cast<std::size_t>(i)] = find_root(parent, i);
  return parent;
}

// True when the two labellings of the m^2 points induce the same partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [x, fresh_x] = ab.emplace(a[i], b[i]);
    auto [y, fresh_y] = ba.emplace(b[i], a[i]);
    if (x->second != b[i] || y->second != a[i]) return false;
  }
  return true;
}

struct OrbitCheck {
  int subgroups = 0;
  int mismatches = 0;
  int moduli_above_24 = 0;
};

// Every subgroup of Aut(Z^2) of index <= max_index (all conjugates): pipeline
// orbit partition against the brute-force closure.
inline OrbitCheck check_all_orbit_partitions_2d(int max_index) {
  Presentation p = make_presentation(2);
  OrbitCheck out;
  for (const auto& rec : low_index_subgroups(p, max_index)) {
    std::vector<std::vector<std::vector<int>>> seen;
    for (int b = 0; b < rec.coset_table.index(); ++b) {
      CosetTable t = standardize(p, rec.coset_table, b);
      bool dup = false;
      for (const auto& s : seen) dup = dup || s == t.action();
      if (dup) continue;
      seen.push_back(t.action());
      ++out.subgroups;
      int m = torus_modulus_2d(t);
      if (m == 0) {
        ++out.mismatches;
        continue;
      }
      out.moduli_above_24 += m > 24;
      std::vector<int> brute = brute_orbits_2d(t, m);
      OrbitPartition part = orbit_partition(subgroup_from_table(2, t));
      std::vector<int> piped(static_cast<std::size_t>(m * m));
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) piped[static_cast<std::size_t>(x * m + y)] = part.color_of(Vec{x, y, 0, 0});
      if (!same_partition(brute, piped)) ++out.mismatches;
    }
  }
  return out;
}

}  // namespace oracle
