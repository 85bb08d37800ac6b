#pragma once

// Orbits of crystallographic groups on the lattice nodes, computed on the
// finite torus Z^d / T.

#include <cstdint>
#include <vector>

#include "latcol/crystgeom.hpp"
#include "latcol/fpgroup.hpp"

namespace latcol {

// Canonical representatives of Z^d / L in lexicographic order.
std::vector<Vec> torus_points(const IntegerLattice& lattice);

// Position of a reduced point in torus_points(lattice).
std::size_t torus_position(const IntegerLattice& lattice, const Vec& reduced);

struct OrbitPartition {
  IntegerLattice lattice;
  std::vector<int> colors;  // indexed by torus position
  int orbit_count = 0;

  int color_of(const Vec& x) const { return colors[torus_position(lattice, lattice.reduce(x))]; }
  std::vector<int> orbit_sizes() const;
  int dim() const { return lattice.dim(); }
};

// Recolours by first occurrence in torus order.
void normalize_colors(OrbitPartition& p);

OrbitPartition orbit_partition(const CrystGroup& g);

struct StabilizerInfo {
  Vec point{};
  int order = 0;
  std::vector<AffineMap> elements;
};

// Elements of g fixing x exactly, one per point-group coset at most.
StabilizerInfo stabilizer(const CrystGroup& g, const Vec& x);

struct Proposition1Term {
  int g_orbit = 0;
  int h_orbit = 0;
  Vec point{};
  int stab_g = 0;
  int stab_h = 0;
};

struct Proposition1Report {
  std::int64_t index = 0;           // [G : H]
  std::vector<Proposition1Term> terms;
  std::vector<std::int64_t> sums;   // one per G-orbit; each should equal index
  bool holds = false;
};

// Throws InvalidArgument if H is not contained in G.
Proposition1Report proposition1_check(const CrystGroup& G, const CrystGroup& H);

// The subgroup of Aut(Z^d) stabilizing coset 0 of a coset table for
// make_presentation(d).
CrystGroup subgroup_from_table(int d, const CosetTable& table);
// Same for a table over any presentation whose generators map to `images`.
CrystGroup subgroup_from_table(const std::vector<AffineMap>& images, const CosetTable& table);

// Orbit sizes of the point stabilizer W on the cosets of a table: one entry
// per node orbit of the subgroup, equal to |W| / |Stab_H(x)| for a node x of
// that orbit. Ordered by smallest coset.
std::vector<int> node_orbit_sizes(int d, const CosetTable& table);

// Generators of make_presentation(d) whose images fix the origin.
std::vector<int> point_stabilizer_generators(int d);

}  // namespace latcol
