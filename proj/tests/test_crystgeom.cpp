#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "latcol/crystgeom.hpp"
#include "latcol/error.hpp"
#include "latcol/orbits.hpp"

using namespace latcol;

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

int root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
  return x;
}

// Transitive action is primitive iff the smallest block through {0, x} is
// everything, for every x.
bool primitive(const CosetTable& t) {
  const int n = t.index();
  for (int x = 1; x < n; ++x) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::pair<int, int>> queue{{0, x}};
    parent[static_cast<std::size_t>(x)] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int g = 0; g < t.generator_count(); ++g) {
        int a = root(parent, t.act(queue[q].first, g + 1)), b = root(parent, t.act(queue[q].second, g + 1));
        if (a == b) continue;
        parent[static_cast<std::size_t>(b)] = a;
        queue.emplace_back(a, b);
      }
    for (int c = 0; c < n; ++c)
      if (root(parent, c) != root(parent, 0)) return false;
  }
  return true;
}

// Action of the generators (with affine images) on the right cosets of m.
CosetTable coset_action(const std::vector<AffineMap>& images, const CrystGroup& m, int limit) {
  std::vector<AffineMap> reps{AffineMap::identity(m.dim())};
  std::vector<std::vector<int>> action(images.size());
  for (std::size_t c = 0; c < reps.size(); ++c)
    for (std::size_t g = 0; g < images.size(); ++g) {
      AffineMap y = reps[c] * images[g];
      std::size_t z = 0;
      while (z < reps.size() && !m.contains(y * reps[z].inverse())) ++z;
      if (z == reps.size()) {
        if (static_cast<int>(reps.size()) == limit) return CosetTable();
        reps.push_back(y);
      }
      action[g].push_back(static_cast<int>(z));
    }
  return CosetTable(std::move(action));
}

Matrix dense(const SignedPerm& b) {
  int d = b.dim();
  Matrix m(static_cast<std::size_t>(d), std::vector<std::int64_t>(static_cast<std::size_t>(d), 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = b.entry(i, j);
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  std::size_t n = a.size();
  Matrix c(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

std::int64_t det(Matrix m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  std::int64_t s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    Matrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    s += (c % 2 ? -1 : 1) * m[0][c] * det(minor);
  }
  return s;
}

// Index of the lattice spanned by `vs`: gcd of all maximal minors.
std::int64_t minor_gcd(int d, const std::vector<Vec>& vs) {
  std::int64_t g = 0;
  std::size_t n = vs.size();
  std::vector<std::size_t> pick(static_cast<std::size_t>(d));
  std::iota(pick.begin(), pick.end(), 0);
  if (n < static_cast<std::size_t>(d)) return 0;
  for (;;) {
    Matrix m;
    for (std::size_t r : pick) m.emplace_back(vs[r].begin(), vs[r].begin() + d);
    g = std::gcd(g, det(m));
    int i = d - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - static_cast<std::size_t>(d - i)) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return g < 0 ? -g : g;
}

}  // namespace

TEST(SignedPerm, MatchesDenseMatrices) {
  for (int d = 1; d <= 3; ++d) {
    const auto& g = hyperoctahedral_group(d);
    EXPECT_EQ(static_cast<int>(g.size()), hyperoctahedral_order(d));
    std::set<int> codes;
    for (const auto& a : g) {
      codes.insert(a.code());
      EXPECT_TRUE((a * a.inverse()).is_identity());
      for (const auto& b : g) EXPECT_EQ(dense(a * b), multiply(dense(a), dense(b)));
      Vec x{3, -5, 7, 0};
      Vec y = a.apply(x);
      auto m = dense(a);
      for (int i = 0; i < d; ++i) {
        std::int64_t s = 0;
        for (int j = 0; j < d; ++j) s += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        EXPECT_EQ(y[static_cast<std::size_t>(i)], s);
      }
    }
    EXPECT_EQ(static_cast<int>(codes.size()), hyperoctahedral_order(d));
    EXPECT_EQ(*codes.begin(), 0);
    EXPECT_EQ(*codes.rbegin(), hyperoctahedral_order(d) - 1);
  }
  EXPECT_EQ(hyperoctahedral_group(4).size(), 384u);
}

TEST(AffineMap, CompositionInverseAndText) {
  auto maps = generator_maps(3);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    AffineMap f = AffineMap::identity(3), g = AffineMap::identity(3);
    for (int k = 0; k < 6; ++k) f = f * maps[rng() % maps.size()];
    for (int k = 0; k < 6; ++k) g = g * maps[rng() % maps.size()];
    Vec x{static_cast<std::int64_t>(rng() % 11) - 5, static_cast<std::int64_t>(rng() % 11) - 5, 2, 0};
    EXPECT_EQ((f * g).apply(x), f.apply(g.apply(x)));
    EXPECT_TRUE((f * f.inverse()).is_identity());
    EXPECT_EQ(AffineMap::parse(3, f.to_text()), f);
  }
  auto g2 = generator_maps(2);
  EXPECT_EQ(g2[0].to_triplet(), "-x, y");
  EXPECT_EQ(g2[1].to_triplet(), "x, 1-y");
  EXPECT_EQ(g2[2].to_triplet(), "y, x");
}

TEST(IntegerLattice, HnfMatchesMinorOracle) {
  std::mt19937 rng(11);
  for (int d = 1; d <= 3; ++d)
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<Vec> vs;
      int n = d + static_cast<int>(rng() % 3);
      for (int k = 0; k < n; ++k) {
        Vec v{};
        for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rng() % 13) - 6;
        vs.push_back(v);
      }
      std::int64_t idx = minor_gcd(d, vs);
      if (idx == 0) {
        EXPECT_THROW(IntegerLattice::hnf(d, vs), InvalidArgument);
        continue;
      }
      IntegerLattice l = IntegerLattice::hnf(d, vs);
      EXPECT_EQ(l.index(), idx);
      for (int i = 0; i < d; ++i) {
        EXPECT_GT(l.pivot(i), 0);
        for (int j = 0; j < i; ++j) EXPECT_EQ(l.row(i)[static_cast<std::size_t>(j)], 0);
        for (int r = 0; r < i; ++r) {
          EXPECT_GE(l.row(r)[static_cast<std::size_t>(i)], 0);
          EXPECT_LT(l.row(r)[static_cast<std::size_t>(i)], l.pivot(i));
        }
      }
      for (int probe = 0; probe < 10; ++probe) {
        Vec v{};
        for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rng() % 9) - 4;
        auto ext = vs;
        ext.push_back(v);
        EXPECT_EQ(l.contains(v), minor_gcd(d, ext) == idx);
        Vec r = l.reduce(v);
        for (int i = 0; i < d; ++i) {
          EXPECT_GE(r[static_cast<std::size_t>(i)], 0);
          EXPECT_LT(r[static_cast<std::size_t>(i)], l.pivot(i));
        }
        Vec diff{};
        for (int i = 0; i < d; ++i) diff[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)];
        EXPECT_TRUE(l.contains(diff));
        EXPECT_EQ(l.reduce(r), r);
      }
    }
}

TEST(IntegerLattice, TransformedAndContainment) {
  IntegerLattice l = IntegerLattice::hnf(2, {{2, 0, 0, 0}, {0, 1, 0, 0}});
  SignedPerm swap = SignedPerm::from_rows(2, {{0, 1}, {1, 0}});
  IntegerLattice s = l.transformed(swap);
  EXPECT_TRUE(s.contains(Vec{1, 0, 0, 0}));
  EXPECT_FALSE(s.contains(Vec{0, 1, 0, 0}));
  EXPECT_TRUE(IntegerLattice::full(2).contains(l));
  EXPECT_FALSE(l.contains(IntegerLattice::full(2)));
  EXPECT_EQ(IntegerLattice::hnf(2, {{2, 0, 0, 0}, {0, 2, 0, 0}, {1, 1, 0, 0}}).index(), 2);
}

TEST(CrystGroup, AutomorphismGroupFromGenerators) {
  for (int d = 1; d <= 4; ++d) {
    CrystGroup aut = full_automorphism_group(d);
    EXPECT_EQ(aut.index(), 1);
    EXPECT_EQ(aut.point_group_order(), hyperoctahedral_order(d));
    EXPECT_EQ(CrystGroup::generate(d, generator_maps(d)), aut);
  }
}

TEST(CrystGroup, SubgroupFromTableHasTableIndex) {
  for (int d = 1; d <= 3; ++d) {
    Presentation p = make_presentation(d);
    auto maps = generator_maps(d);
    for (const auto& rec : low_index_subgroups(p, d == 3 ? 8 : 16)) {
      const CosetTable& t = rec.coset_table;
      CrystGroup h = subgroup_from_table(d, t);
      EXPECT_EQ(h.index(), t.index());
      for (const Word& w : schreier_generators(p, t)) EXPECT_TRUE(h.contains(word_to_affine(w, maps)));
      auto reps = coset_representatives(p, t);
      for (int c = 1; c < t.index(); ++c) EXPECT_FALSE(h.contains(word_to_affine(reps[static_cast<std::size_t>(c)], maps)));
      EXPECT_EQ(CrystGroup::generate(d, h.generators()), h);
    }
  }
}

TEST(CrystGroup, ConjugationPreservesIndex) {
  Presentation p = make_presentation(2);
  auto maps = generator_maps(2);
  AffineMap g = maps[1] * maps[2] * AffineMap::unit_translation(2, 0);
  for (const auto& rec : low_index_subgroups(p, 12)) {
    CrystGroup h = subgroup_from_table(2, rec.coset_table);
    CrystGroup c = h.conjugated(g);
    EXPECT_EQ(c.index(), h.index());
    for (const auto& x : h.generators()) EXPECT_TRUE(c.contains(g * x * g.inverse()));
    EXPECT_EQ(c.conjugated(g.inverse()), h);
  }
}

TEST(CrystGroup, LatticeNormalizerMatchesBruteForce) {
  std::vector<IntegerLattice> lattices{IntegerLattice::hnf(2, {{2, 0, 0, 0}, {0, 1, 0, 0}}),
                                       IntegerLattice::hnf(2, {{1, 1, 0, 0}, {0, 2, 0, 0}}),
                                       IntegerLattice::hnf(3, {{1, 1, 0, 0}, {0, 3, 0, 0}, {0, 0, 2, 0}})};
  for (const auto& l : lattices) {
    int expected = 0;
    for (const auto& b : hyperoctahedral_group(l.dim())) expected += l.transformed(b) == l;
    CrystGroup n = lattice_normalizer(l);
    EXPECT_EQ(n.point_group_order(), expected);
    EXPECT_EQ(n.translations(), IntegerLattice::full(l.dim()));
  }
}

TEST(CrystGroup, TranslationSubgroup) {
  Presentation p = make_presentation(2);
  for (const auto& rec : low_index_subgroups(p, 8)) {
    CrystGroup h = subgroup_from_table(2, rec.coset_table);
    TranslationSubgroup ts = translation_subgroup(h);
    EXPECT_EQ(ts.lattice, h.translations());
    EXPECT_EQ(ts.lattice.index() * 8 / h.point_group_order(), h.index());
  }
}

TEST(GroupFingerprint, SmallGroups) {
  // cyclic group of order 6 on 6 points
  std::vector<Permutation> c6;
  for (int k = 0; k < 6; ++k) {
    Permutation p(6);
    for (int i = 0; i < 6; ++i) p[static_cast<std::size_t>(i)] = (i + k) % 6;
    c6.push_back(p);
  }
  GroupFingerprint f = group_fingerprint(c6);
  EXPECT_EQ(f.order, 6);
  EXPECT_EQ(f.center_order, 6);
  EXPECT_EQ(f.abelian_invariants, (std::vector<std::int64_t>{2, 3}));
  EXPECT_EQ(f.element_orders, (std::map<int, int>{{1, 1}, {2, 1}, {3, 2}, {6, 2}}));

  GroupFingerprint sq = group_fingerprint(hyperoctahedral_group(2));
  EXPECT_EQ(sq.order, 8);
  EXPECT_EQ(sq.center_order, 2);
  EXPECT_EQ(sq.abelian_invariants, (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(sq.element_orders, (std::map<int, int>{{1, 1}, {2, 5}, {4, 2}}));

  c6.pop_back();
  EXPECT_THROW(group_fingerprint(c6), InvalidArgument);
}

TEST(MaximalSubgroups, MatchPrimitiveLowIndexClasses) {
  struct Case {
    int d, group_index, max_index;
  };
  int checked = 0, classes = 0;
  for (Case c : {Case{1, 6, 12}, Case{2, 8, 12}, Case{2, 1, 16}, Case{3, 4, 12}, Case{3, 1, 24}}) {
    Presentation pres = make_presentation(c.d);
    auto maps = generator_maps(c.d);
    for (const auto& rec : low_index_subgroups(pres, c.group_index)) {
      CrystGroup g = subgroup_from_table(c.d, rec.coset_table);
      SubgroupPresentation sp = reidemeister_schreier(pres, rec.coset_table);
      std::vector<AffineMap> images;
      for (const Word& w : sp.generator_words) images.push_back(word_to_affine(w, maps));

      std::set<std::vector<std::uint8_t>> expected, got;
      for (const auto& sub : low_index_subgroups(sp.presentation, c.max_index))
        if (sub.coset_table.index() > 1 && primitive(sub.coset_table)) expected.insert(sub.canonical_table_form);
      for (const CrystGroup& m : maximal_subgroups(g, c.max_index)) {
        ASSERT_TRUE(g.contains(m));
        CosetTable t = coset_action(images, m, c.max_index);
        ASSERT_GT(t.index(), 1);
        EXPECT_EQ(t.index(), m.index() / g.index());
        got.insert(canonical_table_form(sp.presentation, t));
      }
      EXPECT_EQ(got, expected) << "d=" << c.d << " index " << rec.coset_table.index();
      ++checked;
      classes += static_cast<int>(expected.size());
    }
  }
  EXPECT_GT(checked, 50);
  EXPECT_GT(classes, 3 * checked);
}
