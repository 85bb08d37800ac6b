#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <mutex>
#include <set>

#include "latcol/crystgeom.hpp"
#include "latcol/error.hpp"
#include "latcol/fpgroup.hpp"
#include "latcol/orbits.hpp"

using namespace latcol;

namespace {

using Perm = std::vector<int>;

std::vector<Perm> all_perms(int n) {
  std::vector<Perm> out;
  Perm p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Perm> involutions(int n) {
  std::vector<Perm> out;
  for (auto& p : all_perms(n)) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = p[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] == i;
    if (ok) out.push_back(p);
  }
  return out;
}

Perm invert(const Perm& p) {
  Perm q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return q;
}

// Number of subgroups of index n: transitive actions on n points satisfying
// the relators, divided by (n-1)! relabellings fixing point 0.
std::int64_t brute_subgroup_count(const Presentation& pres, int n) {
  int g = pres.generator_count();
  std::vector<std::vector<Perm>> choices(static_cast<std::size_t>(g));
  for (int k = 0; k < g; ++k) choices[static_cast<std::size_t>(k)] = pres.is_involution(k) ? involutions(n) : all_perms(n);
  std::vector<std::size_t> pick(static_cast<std::size_t>(g), 0);
  std::int64_t count = 0;
  for (;;) {
    std::vector<Perm> fwd, inv;
    for (int k = 0; k < g; ++k) {
      fwd.push_back(choices[static_cast<std::size_t>(k)][pick[static_cast<std::size_t>(k)]]);
      inv.push_back(invert(fwd.back()));
    }
    bool ok = true;
    for (const Word& r : pres.relators()) {
      for (int p = 0; p < n && ok; ++p) {
        int q = p;
        for (int x : r.letters) q = (x > 0 ? fwd : inv)[static_cast<std::size_t>(letter_generator(x))][static_cast<std::size_t>(q)];
        ok = q == p;
      }
      if (!ok) break;
    }
    if (ok) {
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      std::vector<int> stack{0};
      seen[0] = 1;
      int reached = 1;
      while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        for (auto& f : fwd)
          if (!seen[static_cast<std::size_t>(f[static_cast<std::size_t>(p)])]) {
            seen[static_cast<std::size_t>(f[static_cast<std::size_t>(p)])] = 1;
            ++reached;
            stack.push_back(f[static_cast<std::size_t>(p)]);
          }
      }
      if (reached == n) ++count;
    }
    int k = 0;
    while (k < g && ++pick[static_cast<std::size_t>(k)] == choices[static_cast<std::size_t>(k)].size()) pick[static_cast<std::size_t>(k++)] = 0;
    if (k == g) break;
  }
  std::int64_t fact = 1;
  for (int i = 2; i < n; ++i) fact *= i;
  return count / fact;
}

std::int64_t class_size(const Presentation& pres, const CosetTable& t) {
  std::set<std::vector<std::vector<int>>> distinct;
  for (int b = 0; b < t.index(); ++b) distinct.insert(standardize(pres, t, b).action());
  return static_cast<std::int64_t>(distinct.size());
}

Presentation symmetric4() { return Presentation::parse("generators: a b\na^2\nb^4\n(ab)^3\n"); }

}  // namespace

TEST(Word, InverseAndReduction) {
  Presentation p = make_presentation(2);
  Word w = p.parse_word("abcA");
  EXPECT_EQ(p.format_word(w.inverse()), "aCBA");
  EXPECT_TRUE(free_reduce(w * w.inverse()).empty());
  EXPECT_EQ(p.format_word(cyclic_reduce(p.parse_word("aBcbA"))), "c");
  EXPECT_EQ(p.format_word(cyclic_reduce(p.parse_word("aBcAb"))), "aBcAb");
  EXPECT_EQ(p.format_word(p.parse_word("(ab)^-2")), "BABA");
}

TEST(Presentation, TextRoundTrip) {
  for (int d = 1; d <= 4; ++d) {
    Presentation p = make_presentation(d);
    Presentation q = Presentation::parse(p.to_text());
    EXPECT_EQ(q.generator_count(), p.generator_count());
    EXPECT_EQ(q.relators(), p.relators());
  }
  EXPECT_THROW(Presentation::parse("generators: a\nab\n"), InvalidArgument);
  EXPECT_THROW(Presentation::parse("generators: a\na^\n"), InvalidArgument);
}

TEST(Presentation, GeneratorImagesSatisfyRelators) {
  for (int d = 1; d <= 4; ++d) {
    Presentation p = make_presentation(d);
    auto maps = generator_maps(d);
    for (const Word& r : p.relators()) EXPECT_TRUE(word_to_affine(r, maps).is_identity()) << d << " " << p.format_word(r);
  }
}

TEST(CosetEnumeration, FiniteGroupOrders) {
  Presentation s3 = Presentation::parse("generators: a b\na^2\nb^3\n(ab)^2\n");
  EXPECT_EQ(coset_enumerate(s3, {}, 1000).index(), 6);
  EXPECT_EQ(coset_enumerate(symmetric4(), {}, 1000).index(), 24);
  EXPECT_EQ(coset_enumerate(symmetric4(), {}, 1000, EnumerationStrategy::kFelsch).index(), 24);
}

TEST(CosetEnumeration, HltAndFelschAgree) {
  for (int d = 1; d <= 3; ++d) {
    Presentation p = make_presentation(d);
    for (const auto& rec : low_index_subgroups(p, d == 3 ? 12 : 16)) {
      const auto& words = schreier_generators(p, rec.coset_table);
      CosetTable h = coset_enumerate(p, words, 4096);
      CosetTable f = coset_enumerate(p, words, 4096, EnumerationStrategy::kFelsch);
      EXPECT_EQ(h, rec.coset_table);
      EXPECT_EQ(f, rec.coset_table);
    }
  }
}

TEST(CosetEnumeration, TranslationSubgroupHasPointGroupIndex) {
  Presentation p = make_presentation(2);
  Word ty = p.parse_word("bcac");
  Word tx = p.parse_word("c") * ty * p.parse_word("c");
  auto maps = generator_maps(2);
  EXPECT_EQ(word_to_affine(ty, maps), AffineMap::unit_translation(2, 1));
  EXPECT_EQ(word_to_affine(tx, maps), AffineMap::unit_translation(2, 0));
  EXPECT_EQ(coset_enumerate(p, {tx, ty}, 1000).index(), 8);
  EXPECT_EQ(coset_enumerate(p, {tx.power(2), ty.power(3)}, 1000, EnumerationStrategy::kFelsch).index(), 48);
  EXPECT_THROW(coset_enumerate(p, {tx}, 200), EnumerationOverflow);
}

TEST(CosetTable, RepresentativesAndSchreierGenerators) {
  Presentation p = make_presentation(2);
  for (const auto& rec : low_index_subgroups(p, 8)) {
    const CosetTable& t = rec.coset_table;
    EXPECT_TRUE(t.is_consistent(p));
    auto reps = coset_representatives(p, t);
    for (int c = 0; c < t.index(); ++c) EXPECT_EQ(t.trace(0, reps[static_cast<std::size_t>(c)]), c);
    for (const Word& w : schreier_generators(p, t)) EXPECT_EQ(t.trace(0, w), 0);
  }
}

TEST(CosetTable, CanonicalFormIsConjugationInvariant) {
  Presentation p = make_presentation(2);
  for (const auto& rec : low_index_subgroups(p, 8))
    for (int b = 0; b < rec.coset_table.index(); ++b)
      EXPECT_EQ(canonical_table_form(p, standardize(p, rec.coset_table, b)), rec.canonical_table_form);
}

TEST(CosetTable, CanonicalFormIsSmallestStandardEncoding) {
  for (int d = 1; d <= 3; ++d) {
    Presentation p = make_presentation(d);
    for (const auto& rec : low_index_subgroups(p, d == 3 ? 8 : 12)) {
      std::vector<std::uint8_t> smallest;
      for (int b = 0; b < rec.coset_table.index(); ++b) {
        auto e = encode_table(p, standardize(p, rec.coset_table, b));
        if (b == 0 || e < smallest) smallest = e;
      }
      EXPECT_EQ(canonical_table_form(p, rec.coset_table), smallest);
    }
  }
}

TEST(LowIndex, SubgroupCountsMatchPermutationRepresentations) {
  struct Case {
    Presentation pres;
    int max_index;
  };
  std::vector<Case> cases{{make_presentation(1), 6}, {make_presentation(2), 6}, {symmetric4(), 5}};
  for (const auto& c : cases) {
    auto recs = low_index_subgroups(c.pres, c.max_index);
    std::vector<std::int64_t> counted(static_cast<std::size_t>(c.max_index + 1), 0);
    std::set<std::vector<std::uint8_t>> forms;
    for (const auto& r : recs) {
      counted[static_cast<std::size_t>(r.coset_table.index())] += class_size(c.pres, r.coset_table);
      EXPECT_TRUE(forms.insert(r.canonical_table_form).second);
    }
    for (int n = 1; n <= c.max_index; ++n)
      EXPECT_EQ(counted[static_cast<std::size_t>(n)], brute_subgroup_count(c.pres, n)) << c.pres.to_text() << " n=" << n;
  }
}

TEST(LowIndex, DeterministicAcrossJobs) {
  Presentation p = make_presentation(3);
  LowIndexOptions one, three;
  three.jobs = 3;
  std::vector<std::vector<std::uint8_t>> a, b;
  LowIndexStats sa = for_each_low_index_subgroup(p, 16, one, [&](const CosetTable&, const auto& f, int) { a.push_back(f); });
  std::mutex m;
  LowIndexStats sb = for_each_low_index_subgroup(p, 16, three, [&](const CosetTable&, const auto& f, int) {
    std::lock_guard lock(m);
    b.push_back(f);
  });
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_EQ(sa.nodes, sb.nodes);
}

TEST(LowIndex, BudgetIsEnforced) {
  LowIndexOptions o;
  o.node_budget = 100;
  EXPECT_THROW(low_index_subgroups(make_presentation(3), 48, o), BudgetExceeded);
}

TEST(ReidemeisterSchreier, SubgroupOrdersInFiniteGroup) {
  Presentation s4 = symmetric4();
  for (const auto& rec : low_index_subgroups(s4, 24)) {
    SubgroupPresentation sp = reidemeister_schreier(s4, rec.coset_table);
    for (const Word& w : sp.generator_words) EXPECT_EQ(rec.coset_table.trace(0, w), 0);
    EXPECT_EQ(coset_enumerate(sp.presentation, {}, 10000).index() * rec.coset_table.index(), 24);
  }
}

TEST(ReidemeisterSchreier, TranslationSubgroupIsFreeAbelianOfRankTwo) {
  Presentation p = make_presentation(2);
  Word ty = p.parse_word("bcac");
  Word tx = p.parse_word("c") * ty * p.parse_word("c");
  CosetTable t = coset_enumerate(p, {tx, ty}, 100);
  SubgroupPresentation sp = reidemeister_schreier(p, t);
  // Z^2 has sigma(n) subgroups of index n, all normal.
  for (int n = 1; n <= 6; ++n) {
    std::int64_t sigma = 0;
    for (int k = 1; k <= n; ++k) sigma += n % k == 0 ? k : 0;
    std::int64_t count = 0;
    for (const auto& r : low_index_subgroups(sp.presentation, n))
      if (r.coset_table.index() == n) ++count;
    EXPECT_EQ(count, sigma) << n;
  }
}

TEST(ReidemeisterSchreier, SubgroupsMatchAutLevelSubgroupsInsideG) {
  Presentation p = make_presentation(2);
  auto maps = generator_maps(2);
  auto aut_level = low_index_subgroups(p, 16);
  int checked = 0;
  for (const auto& grec : aut_level) {
    int gi = grec.coset_table.index();
    if (gi > 8) continue;
    CrystGroup G = subgroup_from_table(2, grec.coset_table);
    SubgroupPresentation sp = reidemeister_schreier(p, grec.coset_table);
    std::vector<AffineMap> images;
    for (const Word& w : sp.generator_words) images.push_back(word_to_affine(w, maps));
    for (int k = 1; k * gi <= 16; ++k) {
      std::vector<CrystGroup> via_rs;
      for (const auto& r : low_index_subgroups(sp.presentation, k)) {
        if (r.coset_table.index() != k) continue;
        // every G-conjugate: rebase the table
        for (int b = 0; b < k; ++b) {
          CrystGroup h = subgroup_from_table(images, standardize(sp.presentation, r.coset_table, b));
          if (std::find(via_rs.begin(), via_rs.end(), h) == via_rs.end()) via_rs.push_back(h);
        }
      }
      std::vector<CrystGroup> direct;
      for (const auto& hrec : aut_level) {
        if (hrec.coset_table.index() != k * gi) continue;
        for (int b = 0; b < k * gi; ++b) {
          CrystGroup h = subgroup_from_table(2, standardize(p, hrec.coset_table, b));
          if (G.contains(h) && std::find(direct.begin(), direct.end(), h) == direct.end()) direct.push_back(h);
        }
      }
      EXPECT_EQ(via_rs.size(), direct.size()) << "G index " << gi << " k " << k;
      for (const auto& h : via_rs) EXPECT_NE(std::find(direct.begin(), direct.end(), h), direct.end());
      ++checked;
    }
  }
  EXPECT_GT(checked, 10);
}
