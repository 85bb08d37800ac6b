#pragma once

#include <cstdint>
#include <vector>

#include "latcol/crystgeom.hpp"
#include "latcol/fpgroup.hpp"

namespace latcol::detail {

struct TransitiveTable {
  CosetTable table;  // canonical, over make_presentation(d)
  std::vector<std::uint8_t> form;
};

// Presentation of the point group of Aut(Z^d) on the generators of
// make_presentation(d) that fix the origin, with their linear parts.
Presentation point_presentation(int d, std::vector<SignedPerm>* images = nullptr);

// Node-transitive subgroups of Aut(Z^d) (one per conjugacy class, unsorted)
// built from their point stabilizers. `nodes` receives the search effort.
std::vector<TransitiveTable> transitive_by_point_stabilizer(int d, const LowIndexOptions& options,
                                                            std::uint64_t& nodes);

}  // namespace latcol::detail
