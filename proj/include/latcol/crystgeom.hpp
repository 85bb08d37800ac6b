#pragma once

// Exact affine geometry over Z^d for d <= 4: signed-permutation affine maps,
// sublattices in Hermite normal form, and crystallographic subgroups of
// Aut(Z^d) stored as (translation lattice, point-group coset representatives).

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "latcol/fpgroup.hpp"

namespace latcol {

constexpr int kMaxDim = 4;

// Integer vector; entries at positions >= dimension are kept zero.
using Vec = std::array<std::int64_t, kMaxDim>;

// Order 2^d * d! of the hyperoctahedral group.
int hyperoctahedral_order(int d);

// A signed permutation matrix B: (B x)_i = sign[i] * x[perm[i]].
class SignedPerm {
 public:
  SignedPerm() = default;
  static SignedPerm identity(int d);
  static SignedPerm from_rows(int d, const std::vector<std::vector<int>>& rows);
  static SignedPerm from_parts(int d, std::array<int, kMaxDim> perm, std::array<int, kMaxDim> sign);

  int dim() const { return dim_; }
  int perm(int i) const { return perm_[static_cast<std::size_t>(i)]; }
  int sign(int i) const { return sign_[static_cast<std::size_t>(i)]; }
  int entry(int row, int col) const { return perm(row) == col ? sign(row) : 0; }
  bool is_identity() const;

  Vec apply(const Vec& x) const;
  // (*this * other)(x) = this(other(x))
  SignedPerm operator*(const SignedPerm& other) const;
  SignedPerm inverse() const;

  // Dense code in [0, hyperoctahedral_order(d)).
  int code() const;

  friend bool operator==(const SignedPerm&, const SignedPerm&) = default;
  friend auto operator<=>(const SignedPerm&, const SignedPerm&) = default;

 private:
  int dim_ = 0;
  std::array<std::int8_t, kMaxDim> perm_{};
  std::array<std::int8_t, kMaxDim> sign_{};
};

// All 2^d * d! signed permutations, sorted by code().
const std::vector<SignedPerm>& hyperoctahedral_group(int d);

// x -> linear * x + translation.
struct AffineMap {
  SignedPerm linear;
  Vec translation{};

  static AffineMap identity(int d) { return AffineMap{SignedPerm::identity(d), {}}; }
  static AffineMap pure_translation(int d, const Vec& v) { return AffineMap{SignedPerm::identity(d), v}; }
  static AffineMap unit_translation(int d, int axis);

  int dim() const { return linear.dim(); }
  Vec apply(const Vec& x) const;
  AffineMap inverse() const;
  bool is_identity() const;
  bool is_translation() const { return linear.is_identity(); }

  // Text format: d lines of d integers (rows of the linear part), then one
  // line with the translation.
  std::string to_text() const;
  static AffineMap parse(int d, std::string_view text);
  // Coordinate-triplet form such as "-x, y" or "y, 1-x, z".
  std::string to_triplet() const;

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
  friend auto operator<=>(const AffineMap&, const AffineMap&) = default;
};

// (f * g)(x) = f(g(x)).
AffineMap operator*(const AffineMap& f, const AffineMap& g);
inline AffineMap affine_compose(const AffineMap& f, const AffineMap& g) { return f * g; }

struct GeneratorImage {
  char symbol;
  AffineMap map;
};

// Affine images of the generators of make_presentation(d), in generator
// order. For d = 1, a is the unit translation and b the negation.
std::vector<GeneratorImage> generator_images(int d);
std::vector<AffineMap> generator_maps(int d);

// Product of generator images in word order: w = x1 x2 ... maps to
// image(x1) * image(x2) * ...
AffineMap word_to_affine(const Word& w, const std::vector<AffineMap>& images);

// Full-rank sublattice of Z^d. Rows of the basis are in Hermite normal form:
// row i vanishes before column i, has a positive pivot at column i, and every
// entry above a pivot lies in [0, pivot).
class IntegerLattice {
 public:
  IntegerLattice() = default;
  static IntegerLattice full(int d);
  // Throws InvalidArgument if the vectors do not span a full-rank lattice.
  static IntegerLattice hnf(int d, const std::vector<Vec>& vectors);

  int dim() const { return dim_; }
  const Vec& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  std::int64_t pivot(int i) const { return rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]; }
  std::int64_t index() const;

  // Canonical coset representative: 0 <= x_i < pivot(i).
  Vec reduce(Vec x) const;
  bool contains(const Vec& v) const;
  bool contains(const IntegerLattice& sub) const;
  IntegerLattice transformed(const SignedPerm& b) const;

  friend bool operator==(const IntegerLattice&, const IntegerLattice&) = default;
  friend auto operator<=>(const IntegerLattice&, const IntegerLattice&) = default;

 private:
  friend class LatticeBuilder;
  int dim_ = 0;
  std::array<Vec, kMaxDim> rows_{};
};

// Incremental HNF accumulation; cheap when most added vectors already lie in
// the lattice.
class LatticeBuilder {
 public:
  explicit LatticeBuilder(int d) : dim_(d) {}
  void add(Vec v);
  bool full_rank() const;
  IntegerLattice finish() const;

 private:
  void normalize();
  int dim_;
  std::array<Vec, kMaxDim> rows_{};
  std::array<bool, kMaxDim> present_{};
};

// A finite-index subgroup of Aut(Z^d), stored as its translation lattice T and
// one representative per point-group element, with translation reduced mod T.
class CrystGroup {
 public:
  CrystGroup() = default;
  // Closes the generators: point group by breadth-first search, T from the
  // Schreier generators of the kernel of the linear-part map.
  static CrystGroup generate(int d, const std::vector<AffineMap>& generators);
  // Builds a group from a lattice and one representative per point-group
  // element. The caller guarantees that the data describe a group.
  static CrystGroup from_cosets(const IntegerLattice& lattice, std::vector<AffineMap> representatives);

  int dim() const { return dim_; }
  const std::vector<AffineMap>& generators() const { return generators_; }
  const IntegerLattice& translations() const { return lattice_; }
  // Representatives in breadth-first order; the first is the identity.
  const std::vector<AffineMap>& coset_representatives() const { return reps_; }
  int point_group_order() const { return static_cast<int>(reps_.size()); }
  std::vector<SignedPerm> point_group() const;
  // nullptr if `b` is not in the point group.
  const AffineMap* representative(const SignedPerm& b) const;

  bool contains(const AffineMap& m) const;
  bool contains(const CrystGroup& sub) const;
  // [Aut(Z^d) : this] = [Z^d : T] * (2^d d!) / |P|.
  std::int64_t index() const;
  // g * this * g^-1
  CrystGroup conjugated(const AffineMap& g) const;

  // Equal iff same translation lattice and same (linear part, translation
  // mod T) pairs.
  friend bool operator==(const CrystGroup& a, const CrystGroup& b);

 private:
  void index_representatives();
  void choose_generators();

  int dim_ = 0;
  IntegerLattice lattice_;
  std::vector<AffineMap> reps_;
  std::vector<int> rep_of_code_;
  std::vector<AffineMap> generators_;
};

struct TranslationSubgroup {
  IntegerLattice lattice;
  std::vector<AffineMap> point_group;  // coset representatives
};

TranslationSubgroup translation_subgroup(const CrystGroup& g);

// Aut(Z^d): generator images together with the unit translations.
CrystGroup full_automorphism_group(int d);

// Elements of Aut(Z^d) mapping L onto itself: all translations and every
// signed permutation B with B L = L.
CrystGroup lattice_normalizer(const IntegerLattice& lattice);

bool contains(const CrystGroup& g, const AffineMap& m);

// Maximal subgroups of g of index <= max_index: preimages of maximal
// subgroups of the point group, and subgroups with the full point group over
// a maximal invariant sublattice. Every conjugacy class under g is
// represented, some more than once.
std::vector<CrystGroup> maximal_subgroups(const CrystGroup& g, std::int64_t max_index);

using Permutation = std::vector<int>;

// Isomorphism invariants of a finite group; not a certified name.
struct GroupFingerprint {
  std::int64_t order = 0;
  std::vector<std::int64_t> abelian_invariants;  // prime powers, ascending
  std::map<int, int> element_orders;             // order -> count
  std::int64_t center_order = 0;

  friend bool operator==(const GroupFingerprint&, const GroupFingerprint&) = default;
};

// Throws InvalidArgument unless `elements` is closed under composition.
GroupFingerprint group_fingerprint(const std::vector<Permutation>& elements);
GroupFingerprint group_fingerprint(const std::vector<SignedPerm>& elements);

// Action of a signed permutation on the 2d signed unit vectors: +e_j is point
// j, -e_j is point d + j.
Permutation as_permutation(const SignedPerm& b);

}  // namespace latcol
