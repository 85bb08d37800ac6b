#include "latcol/crystgeom.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "latcol/error.hpp"

namespace latcol {

namespace {

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) throw InvalidArgument("dimension must be in 1..4, got " + std::to_string(d));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

int hyperoctahedral_order(int d) {
  check_dim(d);
  int order = 1;
  for (int k = 1; k <= d; ++k) order *= 2 * k;
  return order;
}

// ---------------------------------------------------------------------------
// SignedPerm

SignedPerm SignedPerm::identity(int d) {
  check_dim(d);
  SignedPerm b;
  b.dim_ = d;
  for (int i = 0; i < d; ++i) {
    b.perm_[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(i);
    b.sign_[static_cast<std::size_t>(i)] = 1;
  }
  return b;
}

SignedPerm SignedPerm::from_parts(int d, std::array<int, kMaxDim> perm, std::array<int, kMaxDim> sign) {
  check_dim(d);
  SignedPerm b;
  b.dim_ = d;
  std::array<bool, kMaxDim> seen{};
  for (int i = 0; i < d; ++i) {
    int p = perm[static_cast<std::size_t>(i)], s = sign[static_cast<std::size_t>(i)];
    if (p < 0 || p >= d || seen[static_cast<std::size_t>(p)] || (s != 1 && s != -1))
      throw InvalidArgument("not a signed permutation");
    seen[static_cast<std::size_t>(p)] = true;
    b.perm_[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(p);
    b.sign_[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(s);
  }
  return b;
}

SignedPerm SignedPerm::from_rows(int d, const std::vector<std::vector<int>>& rows) {
  if (static_cast<int>(rows.size()) != d) throw InvalidArgument("matrix has wrong number of rows");
  std::array<int, kMaxDim> perm{}, sign{};
  for (int i = 0; i < d; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != d) throw InvalidArgument("matrix row has wrong length");
    int nonzero = 0;
    for (int j = 0; j < d; ++j) {
      int v = row[static_cast<std::size_t>(j)];
      if (v == 0) continue;
      if (v != 1 && v != -1) throw InvalidArgument("matrix entries must be -1, 0 or 1");
      perm[static_cast<std::size_t>(i)] = j;
      sign[static_cast<std::size_t>(i)] = v;
      ++nonzero;
    }
    if (nonzero != 1) throw InvalidArgument("not a signed permutation matrix");
  }
  return from_parts(d, perm, sign);
}

bool SignedPerm::is_identity() const {
  for (int i = 0; i < dim_; ++i)
    if (perm(i) != i || sign(i) != 1) return false;
  return true;
}

Vec SignedPerm::apply(const Vec& x) const {
  Vec y{};
  for (int i = 0; i < dim_; ++i)
    y[static_cast<std::size_t>(i)] = sign(i) * x[static_cast<std::size_t>(perm(i))];
  return y;
}

SignedPerm SignedPerm::operator*(const SignedPerm& other) const {
  if (dim_ != other.dim_) throw InvalidArgument("dimension mismatch");
  SignedPerm r;
  r.dim_ = dim_;
  for (int i = 0; i < dim_; ++i) {
    int p = perm(i);
    r.perm_[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(other.perm(p));
    r.sign_[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(sign(i) * other.sign(p));
  }
  return r;
}

SignedPerm SignedPerm::inverse() const {
  SignedPerm r;
  r.dim_ = dim_;
  for (int i = 0; i < dim_; ++i) {
    r.perm_[static_cast<std::size_t>(perm(i))] = static_cast<std::int8_t>(i);
    r.sign_[static_cast<std::size_t>(perm(i))] = static_cast<std::int8_t>(sign(i));
  }
  return r;
}

int SignedPerm::code() const {
  // Lehmer rank of the permutation, then the sign bits.
  int rank = 0;
  for (int i = 0; i < dim_; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < dim_; ++j)
      if (perm(j) < perm(i)) ++smaller;
    rank = rank * (dim_ - i) + smaller;
  }
  int bits = 0;
  for (int i = 0; i < dim_; ++i)
    if (sign(i) < 0) bits |= 1 << i;
  return (rank << dim_) | bits;
}

const std::vector<SignedPerm>& hyperoctahedral_group(int d) {
  check_dim(d);
  static std::array<std::vector<SignedPerm>, kMaxDim + 1> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int dd = 1; dd <= kMaxDim; ++dd) {
      std::array<int, kMaxDim> perm{};
      std::iota(perm.begin(), perm.begin() + dd, 0);
      std::vector<SignedPerm> all;
      do {
        for (int bits = 0; bits < (1 << dd); ++bits) {
          std::array<int, kMaxDim> sign{};
          for (int i = 0; i < dd; ++i) sign[static_cast<std::size_t>(i)] = (bits >> i) & 1 ? -1 : 1;
          all.push_back(SignedPerm::from_parts(dd, perm, sign));
        }
      } while (std::next_permutation(perm.begin(), perm.begin() + dd));
      std::sort(all.begin(), all.end(),
                [](const SignedPerm& a, const SignedPerm& b) { return a.code() < b.code(); });
      cache[static_cast<std::size_t>(dd)] = std::move(all);
    }
  });
  return cache[static_cast<std::size_t>(d)];
}

// ---------------------------------------------------------------------------
// AffineMap

AffineMap AffineMap::unit_translation(int d, int axis) {
  Vec v{};
  v[static_cast<std::size_t>(axis)] = 1;
  return pure_translation(d, v);
}

Vec AffineMap::apply(const Vec& x) const {
  Vec y = linear.apply(x);
  for (int i = 0; i < dim(); ++i) y[static_cast<std::size_t>(i)] += translation[static_cast<std::size_t>(i)];
  return y;
}

AffineMap operator*(const AffineMap& f, const AffineMap& g) {
  if (f.dim() != g.dim()) throw InvalidArgument("dimension mismatch in affine composition");
  AffineMap r;
  r.linear = f.linear * g.linear;
  r.translation = f.apply(g.translation);
  return r;
}

AffineMap AffineMap::inverse() const {
  AffineMap r;
  r.linear = linear.inverse();
  Vec t = r.linear.apply(translation);
  for (int i = 0; i < dim(); ++i) t[static_cast<std::size_t>(i)] = -t[static_cast<std::size_t>(i)];
  r.translation = t;
  return r;
}

bool AffineMap::is_identity() const {
  if (!linear.is_identity()) return false;
  for (int i = 0; i < dim(); ++i)
    if (translation[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

std::string AffineMap::to_text() const {
  std::ostringstream out;
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) out << (j ? " " : "") << linear.entry(i, j);
    out << '\n';
  }
  for (int i = 0; i < dim(); ++i) out << (i ? " " : "") << translation[static_cast<std::size_t>(i)];
  out << '\n';
  return out.str();
}

AffineMap AffineMap::parse(int d, std::string_view text) {
  check_dim(d);
  std::istringstream in{std::string(text)};
  std::vector<long long> values;
  long long v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw InvalidArgument("affine map text contains a non-integer token");
  if (static_cast<int>(values.size()) != d * d + d)
    throw InvalidArgument("affine map text needs d*d + d integers");
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<int>(values[static_cast<std::size_t>(i * d + j)]);
  AffineMap m;
  m.linear = SignedPerm::from_rows(d, rows);
  for (int i = 0; i < d; ++i) m.translation[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(d * d + i)];
  return m;
}

std::string AffineMap::to_triplet() const {
  static const char* names[] = {"x", "y", "z", "w"};
  std::string out;
  for (int i = 0; i < dim(); ++i) {
    if (i) out += ", ";
    std::int64_t t = translation[static_cast<std::size_t>(i)];
    std::string var = (linear.sign(i) < 0 ? "-" : "") + std::string(names[linear.perm(i)]);
    if (t == 0)
      out += var;
    else if (linear.sign(i) < 0)
      out += std::to_string(t) + var;
    else
      out += std::to_string(t) + "+" + var;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generator images

std::vector<GeneratorImage> generator_images(int d) {
  check_dim(d);
  auto map = [d](std::array<int, kMaxDim> perm, std::array<int, kMaxDim> sign, Vec t) {
    return AffineMap{SignedPerm::from_parts(d, perm, sign), t};
  };
  switch (d) {
    case 1:
      return {{'a', map({0}, {1}, {1})}, {'b', map({0}, {-1}, {})}};
    case 2:
      return {{'a', map({0, 1}, {-1, 1}, {})},       // -x, y
              {'b', map({0, 1}, {1, -1}, {0, 1})},   // x, 1-y
              {'c', map({1, 0}, {1, 1}, {})}};       // y, x
    case 3:
      return {{'a', map({0, 1, 2}, {1, 1, -1}, {})},       // x, y, -z
              {'b', map({0, 1, 2}, {-1, 1, 1}, {1, 0, 0})},  // 1-x, y, z
              {'c', map({1, 0, 2}, {1, 1, 1}, {})},        // y, x, z
              {'d', map({0, 2, 1}, {1, 1, 1}, {})}};       // x, z, y
    default:
      return {{'a', map({1, 0, 2, 3}, {1, 1, 1, 1}, {})},          // y, x, z, w
              {'b', map({0, 1, 2, 3}, {1, 1, -1, 1}, {})},         // x, y, -z, w
              {'c', map({0, 1, 2, 3}, {-1, 1, 1, 1}, {1, 0, 0, 0})}, // 1-x, y, z, w
              {'d', map({0, 2, 1, 3}, {1, 1, 1, 1}, {})},          // x, z, y, w
              {'f', map({0, 1, 3, 2}, {1, 1, 1, 1}, {})}};         // x, y, w, z
  }
}

std::vector<AffineMap> generator_maps(int d) {
  std::vector<AffineMap> maps;
  for (auto& g : generator_images(d)) maps.push_back(g.map);
  return maps;
}

AffineMap word_to_affine(const Word& w, const std::vector<AffineMap>& images) {
  if (images.empty()) throw InvalidArgument("no generator images");
  AffineMap r = AffineMap::identity(images[0].dim());
  for (int x : w.letters) {
    int g = letter_generator(x);
    if (x == 0 || g >= static_cast<int>(images.size())) throw InvalidArgument("unknown generator in word");
    r = r * (x > 0 ? images[static_cast<std::size_t>(g)] : images[static_cast<std::size_t>(g)].inverse());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lattices

IntegerLattice IntegerLattice::full(int d) {
  check_dim(d);
  IntegerLattice l;
  l.dim_ = d;
  for (int i = 0; i < d; ++i) l.rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return l;
}

IntegerLattice IntegerLattice::hnf(int d, const std::vector<Vec>& vectors) {
  check_dim(d);
  LatticeBuilder b(d);
  for (const Vec& v : vectors) b.add(v);
  return b.finish();
}

std::int64_t IntegerLattice::index() const {
  std::int64_t n = 1;
  for (int i = 0; i < dim_; ++i) n *= pivot(i);
  return n;
}

Vec IntegerLattice::reduce(Vec x) const {
  for (int i = 0; i < dim_; ++i) {
    const Vec& r = rows_[static_cast<std::size_t>(i)];
    std::int64_t q = floor_div(x[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(i)]);
    if (q != 0)
      for (int j = i; j < dim_; ++j) x[static_cast<std::size_t>(j)] -= q * r[static_cast<std::size_t>(j)];
  }
  return x;
}

bool IntegerLattice::contains(const Vec& v) const {
  Vec r = reduce(v);
  for (int i = 0; i < dim_; ++i)
    if (r[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

bool IntegerLattice::contains(const IntegerLattice& sub) const {
  for (int i = 0; i < dim_; ++i)
    if (!contains(sub.row(i))) return false;
  return true;
}

IntegerLattice IntegerLattice::transformed(const SignedPerm& b) const {
  std::vector<Vec> rows;
  for (int i = 0; i < dim_; ++i) rows.push_back(b.apply(row(i)));
  return hnf(dim_, rows);
}

void LatticeBuilder::add(Vec v) {
  if (full_rank()) {
    IntegerLattice cur = finish();
    v = cur.reduce(v);
  }
  for (int i = 0; i < dim_; ++i) {
    auto si = static_cast<std::size_t>(i);
    if (v[si] == 0) continue;
    if (!present_[si]) {
      if (v[si] < 0)
        for (int j = i; j < dim_; ++j) v[static_cast<std::size_t>(j)] = -v[static_cast<std::size_t>(j)];
      rows_[si] = v;
      present_[si] = true;
      normalize();
      return;
    }
    // Extended gcd on the pivot column: replace (row, v) by (g-row, v').
    Vec& row = rows_[si];
    std::int64_t a = row[si], b = v[si];
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
      std::int64_t q = floor_div(old_r, r);
      std::tie(old_r, r) = std::pair(r, old_r - q * r);
      std::tie(old_s, s) = std::pair(s, old_s - q * s);
      std::tie(old_t, t) = std::pair(t, old_t - q * t);
    }
    if (old_r < 0) {
      old_r = -old_r;
      old_s = -old_s;
      old_t = -old_t;
    }
    std::int64_t g = old_r, ca = a / g, cb = b / g;
    Vec new_row{}, rest{};
    for (int j = i; j < dim_; ++j) {
      auto sj = static_cast<std::size_t>(j);
      new_row[sj] = old_s * row[sj] + old_t * v[sj];
      rest[sj] = ca * v[sj] - cb * row[sj];
    }
    row = new_row;
    v = rest;
  }
  normalize();
}

bool LatticeBuilder::full_rank() const {
  for (int i = 0; i < dim_; ++i)
    if (!present_[static_cast<std::size_t>(i)]) return false;
  return true;
}

void LatticeBuilder::normalize() {
  for (int i = dim_ - 1; i >= 0; --i) {
    auto si = static_cast<std::size_t>(i);
    if (!present_[si]) continue;
    for (int j = i + 1; j < dim_; ++j) {
      auto sj = static_cast<std::size_t>(j);
      if (!present_[sj]) continue;
      std::int64_t q = floor_div(rows_[si][sj], rows_[sj][sj]);
      if (q != 0)
        for (int k = j; k < dim_; ++k) rows_[si][static_cast<std::size_t>(k)] -= q * rows_[sj][static_cast<std::size_t>(k)];
    }
  }
}

IntegerLattice LatticeBuilder::finish() const {
  if (!full_rank()) throw InvalidArgument("vectors do not span a full-rank lattice");
  IntegerLattice l;
  l.dim_ = dim_;
  l.rows_ = rows_;
  return l;
}

}  // namespace latcol
