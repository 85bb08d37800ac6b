#pragma once

// Partition-level analysis: certificates up to Aut(Z^d) and colour
// relabelling, the symmetry group Aut(P) of a partition, colour permutation
// symmetry, neighbourhood signatures and superposition.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "latcol/crystgeom.hpp"
#include "latcol/orbits.hpp"

namespace latcol {

// Translations preserving every colour class.
IntegerLattice max_translation_lattice(const OrbitPartition& p);

// The same colouring re-indexed over a coarser-or-equal lattice L (the
// colouring must be L-periodic).
OrbitPartition repartition(const OrbitPartition& p, const IntegerLattice& lattice);

// Image of p under x -> g(x): colour'(y) = colour(g^-1 y), colours renumbered
// by first occurrence.
OrbitPartition transform_partition(const OrbitPartition& p, const AffineMap& g);

struct Certificate {
  std::vector<std::uint8_t> bytes;
  // transform_partition(p, witness) is the canonical representative.
  AffineMap witness;
  OrbitPartition canonical;

  std::string hex() const;
};

Certificate canonical_certificate(const OrbitPartition& p);
std::string to_hex(const std::vector<std::uint8_t>& bytes);

// Elements of lattice_normalizer(normalized) fixing every colour class; its
// translations are max_translation_lattice(p). `normalized` must be mapped to
// itself by the returned linear parts and contain p.lattice.
CrystGroup class_stabilizer(const OrbitPartition& p, const IntegerLattice& normalized);

struct AutPartitionSteps {
  CrystGroup intermediate;  // class stabilizer inside the normalizer of T(H)
  CrystGroup aut;           // class stabilizer inside the normalizer of T(S)
};

// Throws InvalidArgument if p is not the orbit partition of H.
AutPartitionSteps aut_partition_steps(const CrystGroup& H, const OrbitPartition& p);
CrystGroup aut_partition(const CrystGroup& H, const OrbitPartition& p);

struct InclusionInput {
  CrystGroup group;
  Certificate certificate;
};

// For every certificate, the largest group (conjugated into the canonical
// frame) among the inputs; throws ConsistencyError unless it contains all
// other groups with the same certificate.
std::map<std::vector<std::uint8_t>, CrystGroup> aut_partition_by_inclusion(const std::vector<InclusionInput>& records);

// The same check one group at a time: keeps, per certificate, the groups not
// contained in any other seen so far.
class InclusionAccumulator {
 public:
  void add(const CrystGroup& group, const Certificate& certificate);
  // Throws ConsistencyError unless every certificate has a single maximal
  // group.
  std::map<std::vector<std::uint8_t>, CrystGroup> largest() const;

 private:
  std::map<std::vector<std::uint8_t>, std::vector<CrystGroup>> maximal_;
};

struct IndexDecomposition {
  std::int64_t i_t = 0;
  std::int64_t i_k = 0;
};

IndexDecomposition index_decomposition(const CrystGroup& g);

// Distinct colour permutations induced by lattice symmetries that preserve
// the partition as a set of classes; sorted, identity first.
std::vector<Permutation> color_permutation_group(const OrbitPartition& p);
bool is_transitive(const std::vector<Permutation>& group, int points);
bool swap_symmetric(const OrbitPartition& p);

// counts[c][k]: number of nodes of colour k around a node of colour c, over
// l1-distance 1 (radius 1) or 1..2 (radius 2). stars[c] is the colour pattern
// on those offsets around such a node, with the centre's colour as 0 and the
// other colours numbered by first occurrence, minimized over the point
// symmetries of the lattice.
struct NeighbourhoodSignature {
  int radius = 1;
  std::vector<std::vector<int>> counts;
  std::vector<std::vector<int>> stars;

  // Label-free form: the stars of all colours, sorted.
  std::vector<std::vector<int>> key() const;
};

NeighbourhoodSignature neighbourhood_signature(const OrbitPartition& p, int radius);

bool is_proper_colouring(const OrbitPartition& p);

// Colouring of Z^(d+1) constant along the last axis.
OrbitPartition superposition_lift(const OrbitPartition& p);
// Some unit translation preserves every colour class.
bool is_superposed(const OrbitPartition& p);

// Fingerprint of the site-symmetry group in g of the first node of each
// colour.
std::vector<GroupFingerprint> stabilizer_fingerprints(const CrystGroup& g, const OrbitPartition& p);

}  // namespace latcol
