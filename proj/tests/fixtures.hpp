#pragma once

// Groups used by several test programs.

#include "latcol/crystgeom.hpp"

namespace fixtures {

using namespace latcol;

inline AffineMap shift(int d, Vec v) { return AffineMap::pure_translation(d, v); }

inline AffineMap lin3(std::array<int, kMaxDim> perm, std::array<int, kMaxDim> sign) {
  return AffineMap{SignedPerm::from_parts(3, perm, sign), {}};
}

// a = -z,-x,-y ; b = -y,-x,z
inline AffineMap calcite_a() { return lin3({2, 0, 1}, {-1, -1, -1}); }
inline AffineMap calcite_b() { return lin3({1, 0, 2}, {-1, -1, 1}); }
inline AffineMap mirror_xxz() {
  AffineMap a = calcite_a(), b = calcite_b();
  AffineMap aba = a * b * a;
  return aba * aba * b;
}

// <a, m_xxz t_y^2, t_x^2 t_y t_z>
inline CrystGroup calcite_h() {
  return CrystGroup::generate(3, {calcite_a(), mirror_xxz() * shift(3, {0, 2, 0, 0}), shift(3, {2, 1, 1, 0})});
}

}  // namespace fixtures
