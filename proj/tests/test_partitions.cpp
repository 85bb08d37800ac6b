#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "latcol/crystgeom.hpp"
#include "latcol/error.hpp"
#include "latcol/orbits.hpp"
#include "latcol/partitions.hpp"
#include "fixtures.hpp"

using namespace latcol;
using namespace fixtures;

namespace {

OrbitPartition stripes(int axis) {
  OrbitPartition p;
  Vec r0{}, r1{};
  r0[0] = axis == 0 ? 2 : 1;
  r1[1] = axis == 0 ? 1 : 2;
  p.lattice = IntegerLattice::hnf(2, {r0, r1});
  for (const Vec& x : torus_points(p.lattice)) p.colors.push_back(static_cast<int>(x[static_cast<std::size_t>(axis)] % 2));
  p.orbit_count = 2;
  return p;
}

CrystGroup chessboard_group(int d) {
  std::vector<AffineMap> gens;
  for (const auto& m : generator_maps(d)) gens.push_back(AffineMap{m.linear, {}});
  for (int i = 0; i + 1 < d; ++i) {
    Vec v{};
    v[static_cast<std::size_t>(i)] = 1;
    v[static_cast<std::size_t>(i + 1)] = 1;
    gens.push_back(shift(d, v));
  }
  Vec two{};
  two[0] = 2;
  gens.push_back(shift(d, two));
  return CrystGroup::generate(d, gens);
}

}  // namespace

TEST(Calcite, MirrorAndGenerators) {
  AffineMap m = mirror_xxz();
  EXPECT_EQ(m.to_triplet(), "y, x, z");
  CrystGroup h = calcite_h();
  EXPECT_FALSE(h.contains(m));
  EXPECT_TRUE(h.contains(m * shift(3, {0, 2, 0, 0})));
}

TEST(Calcite, TorusOrbitsAndAutomorphismGroup) {
  CrystGroup h = calcite_h();
  EXPECT_EQ(h.translations().index(), 4);
  auto pts = torus_points(h.translations());
  EXPECT_EQ(pts, (std::vector<Vec>{{0, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 2, 0}, {0, 0, 3, 0}}));
  OrbitPartition p = orbit_partition(h);
  EXPECT_EQ(p.orbit_count, 2);
  EXPECT_EQ(p.colors, (std::vector<int>{0, 1, 0, 1}));

  CrystGroup n1 = lattice_normalizer(h.translations());
  EXPECT_EQ(n1.point_group_order(), 12);
  EXPECT_EQ(n1, CrystGroup::generate(3, {calcite_a(), mirror_xxz(), AffineMap::unit_translation(3, 0)}));

  AutPartitionSteps steps = aut_partition_steps(h, p);
  AffineMap tyz = shift(3, {0, 1, 1, 0});
  EXPECT_EQ(steps.intermediate, CrystGroup::generate(3, {calcite_a(), mirror_xxz(), tyz}));
  IntegerLattice ts = max_translation_lattice(p);
  EXPECT_EQ(ts, steps.intermediate.translations());
  EXPECT_EQ(ts.index(), 2);
  OrbitPartition s_orbits = repartition(p, ts);
  EXPECT_EQ(torus_points(ts), (std::vector<Vec>{{0, 0, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_EQ(s_orbits.colors, (std::vector<int>{0, 1}));
  EXPECT_EQ(lattice_normalizer(ts), full_automorphism_group(3));

  CrystGroup expected = CrystGroup::generate(3, {calcite_a(), calcite_b(), tyz});
  EXPECT_EQ(steps.aut, expected);
  EXPECT_EQ(expected.point_group_order(), 48);
  EXPECT_EQ(aut_partition(h, p), expected);
}

TEST(Calcite, AlternativeGroupGivesTheSamePattern) {
  AffineMap a = calcite_a(), b = calcite_b();
  CrystGroup alt = CrystGroup::generate(
      3, {a, a * a * a * b * shift(3, {1, -1, 0, 0}), a * b * a * a * shift(3, {1, 0, -1, 0})});
  OrbitPartition p = orbit_partition(alt);
  EXPECT_EQ(p.orbit_count, 2);
  EXPECT_EQ(canonical_certificate(p).bytes, canonical_certificate(orbit_partition(calcite_h())).bytes);
}

TEST(Certificate, StripesAgree) {
  Certificate x = canonical_certificate(stripes(0)), y = canonical_certificate(stripes(1));
  EXPECT_EQ(x.bytes, y.bytes);
  EXPECT_NE(x.bytes, canonical_certificate(orbit_partition(chessboard_group(2))).bytes);
}

TEST(Certificate, InvariantUnderAutAndRelabelling) {
  std::mt19937 rng(3);
  for (int d = 1; d <= 3; ++d) {
    Presentation pres = make_presentation(d);
    auto maps = generator_maps(d);
    for (const auto& rec : low_index_subgroups(pres, d == 3 ? 8 : 12)) {
      OrbitPartition p = orbit_partition(subgroup_from_table(d, rec.coset_table));
      Certificate c = canonical_certificate(p);
      OrbitPartition canon = repartition(transform_partition(p, c.witness), c.canonical.lattice);
      EXPECT_EQ(canon.colors, c.canonical.colors);
      EXPECT_EQ(max_translation_lattice(canon), c.canonical.lattice);
      for (int trial = 0; trial < 3; ++trial) {
        AffineMap g = AffineMap::identity(d);
        for (int k = 0; k < 8; ++k) g = g * maps[rng() % maps.size()];
        OrbitPartition q = transform_partition(p, g);
        std::vector<int> relabel(static_cast<std::size_t>(q.orbit_count));
        std::iota(relabel.begin(), relabel.end(), 0);
        std::shuffle(relabel.begin(), relabel.end(), rng);
        for (int& col : q.colors) col = relabel[static_cast<std::size_t>(col)];
        EXPECT_EQ(canonical_certificate(q).bytes, c.bytes);
      }
    }
  }
}

TEST(AutPartition, TrivialCases) {
  Presentation p1 = make_presentation(1);
  CrystGroup h = CrystGroup::generate(1, {shift(1, {3}), generator_maps(1)[1]});
  EXPECT_EQ(h.index(), 3);
  EXPECT_EQ(aut_partition(h, orbit_partition(h)), h);

  for (const auto& rec : low_index_subgroups(make_presentation(2), 8)) {
    CrystGroup g = subgroup_from_table(2, rec.coset_table);
    OrbitPartition p = orbit_partition(g);
    CrystGroup aut = aut_partition(g, p);
    EXPECT_TRUE(aut.contains(g));
    OrbitPartition q = orbit_partition(aut);
    EXPECT_EQ(canonical_certificate(q).bytes, canonical_certificate(p).bytes);
    if (p.orbit_count == 1) EXPECT_EQ(aut, full_automorphism_group(2));
  }
  CrystGroup chess = chessboard_group(2);
  EXPECT_THROW(aut_partition(chess, stripes(0)), InvalidArgument);
}

TEST(AutPartition, InclusionDetectsConflicts) {
  CrystGroup chess = chessboard_group(2);
  Certificate c = canonical_certificate(orbit_partition(chess));
  auto by_inclusion = aut_partition_by_inclusion({{chess, c}});
  ASSERT_EQ(by_inclusion.size(), 1u);
  EXPECT_EQ(by_inclusion.begin()->second, chess.conjugated(c.witness));

  CrystGroup other = CrystGroup::generate(2, {shift(2, {2, 0, 0, 0}), shift(2, {0, 1, 0, 0}), generator_maps(2)[0]});
  EXPECT_THROW(aut_partition_by_inclusion({{chess, c}, {other, c}}), ConsistencyError);
}

TEST(AutPartition, InclusionIsOrderIndependent) {
  CrystGroup chess = chessboard_group(2);
  std::vector<AffineMap> lattice{shift(2, {1, 1, 0, 0}), shift(2, {1, -1, 0, 0})};
  auto with = [&](const AffineMap& m) {
    auto gens = lattice;
    gens.push_back(m);
    return CrystGroup::generate(2, gens);
  };
  CrystGroup turn = with(AffineMap{SignedPerm::from_rows(2, {{0, -1}, {1, 0}}), {}});
  CrystGroup swap = with(AffineMap{SignedPerm::from_rows(2, {{0, 1}, {1, 0}}), {}});
  ASSERT_FALSE(turn.contains(swap));
  ASSERT_FALSE(swap.contains(turn));
  Certificate c = canonical_certificate(orbit_partition(chess));
  for (const CrystGroup* g : {&turn, &swap}) ASSERT_EQ(canonical_certificate(orbit_partition(*g)).bytes, c.bytes);

  InclusionAccumulator partial;
  partial.add(turn, c);
  partial.add(swap, c);
  EXPECT_THROW(partial.largest(), ConsistencyError);
  partial.add(chess, c);
  EXPECT_EQ(partial.largest().at(c.bytes), chess.conjugated(c.witness));

  InclusionAccumulator middle;
  middle.add(turn, c);
  middle.add(chess, c);
  middle.add(swap, c);
  EXPECT_EQ(middle.largest().at(c.bytes), chess.conjugated(c.witness));
}

TEST(Partitions, ChessboardProperties) {
  for (int d = 1; d <= 3; ++d) {
    CrystGroup g = chessboard_group(d);
    EXPECT_EQ(g.index(), 2);
    OrbitPartition p = orbit_partition(g);
    EXPECT_TRUE(is_proper_colouring(p));
    EXPECT_TRUE(swap_symmetric(p));
    EXPECT_FALSE(is_superposed(p));
    IntegerLattice even = max_translation_lattice(p);
    EXPECT_EQ(even.index(), 2);
    EXPECT_EQ(lattice_normalizer(even).point_group_order(), hyperoctahedral_order(d));
    IndexDecomposition ix = index_decomposition(g);
    EXPECT_EQ(ix.i_t, 2);
    EXPECT_EQ(ix.i_k, 1);
    NeighbourhoodSignature s = neighbourhood_signature(p, 1);
    EXPECT_EQ(s.counts[0], (std::vector<int>{0, 2 * d}));
    EXPECT_EQ(s.counts[1], (std::vector<int>{2 * d, 0}));
    for (const auto& f : stabilizer_fingerprints(g, p)) EXPECT_EQ(f.order, hyperoctahedral_order(d));
  }
}

TEST(Partitions, LineThirdsAreNotSwapSymmetric) {
  CrystGroup h = CrystGroup::generate(1, {shift(1, {3}), generator_maps(1)[1]});
  OrbitPartition p = orbit_partition(h);
  EXPECT_FALSE(swap_symmetric(p));
  EXPECT_FALSE(is_proper_colouring(p));
  auto perms = color_permutation_group(p);
  EXPECT_EQ(perms.size(), 1u);
  EXPECT_FALSE(is_transitive(perms, 2));
}

TEST(Partitions, SuperpositionLift) {
  OrbitPartition line = orbit_partition(chessboard_group(1));
  OrbitPartition lifted = superposition_lift(line);
  EXPECT_EQ(lifted.dim(), 2);
  EXPECT_TRUE(is_superposed(lifted));
  EXPECT_EQ(canonical_certificate(lifted).bytes, canonical_certificate(stripes(0)).bytes);
  EXPECT_TRUE(swap_symmetric(lifted));
  EXPECT_FALSE(is_proper_colouring(lifted));
  EXPECT_TRUE(is_superposed(superposition_lift(lifted)));
}

TEST(Partitions, NeighbourhoodSignatureIsFrameIndependent) {
  auto maps = generator_maps(2);
  for (const auto& rec : low_index_subgroups(make_presentation(2), 10)) {
    OrbitPartition p = orbit_partition(subgroup_from_table(2, rec.coset_table));
    OrbitPartition q = transform_partition(p, maps[1] * maps[2]);
    for (int r = 1; r <= 2; ++r) EXPECT_EQ(neighbourhood_signature(p, r).key(), neighbourhood_signature(q, r).key());
  }
}
