#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>

#include "census.hpp"
#include "latcol/crystgeom.hpp"
#include "latcol/error.hpp"

namespace latcol {

namespace {

// ---------------------------------------------------------------------------
// Subgroups of the hyperoctahedral group, as sets of element codes

using CodeSet = std::array<std::uint64_t, 6>;
static_assert(64 * std::tuple_size_v<CodeSet> >= 384);

bool has(const CodeSet& s, int code) { return (s[static_cast<std::size_t>(code >> 6)] >> (code & 63)) & 1U; }
void put(CodeSet& s, int code) { s[static_cast<std::size_t>(code >> 6)] |= std::uint64_t{1} << (code & 63); }

bool subset(const CodeSet& a, const CodeSet& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

int size(const CodeSet& s) {
  int n = 0;
  for (auto w : s) n += std::popcount(w);
  return n;
}

// Every subgroup, from the low-index classes of the point presentation and
// all their conjugates.
std::vector<CodeSet> compute_point_subgroups(int d) {
  std::vector<SignedPerm> images;
  Presentation pres = detail::point_presentation(d, &images);
  const int order = hyperoctahedral_order(d);
  std::vector<int> parent(static_cast<std::size_t>(order), -1), via(static_cast<std::size_t>(order), -1);
  std::vector<int> bfs;
  std::vector<SignedPerm> element(static_cast<std::size_t>(order));
  SignedPerm id = SignedPerm::identity(d);
  bfs.push_back(id.code());
  parent[static_cast<std::size_t>(id.code())] = id.code();
  element[static_cast<std::size_t>(id.code())] = id;
  for (std::size_t i = 0; i < bfs.size(); ++i)
    for (std::size_t g = 0; g < images.size(); ++g) {
      SignedPerm e = element[static_cast<std::size_t>(bfs[i])] * images[g];
      auto c = static_cast<std::size_t>(e.code());
      if (parent[c] >= 0) continue;
      parent[c] = bfs[i];
      via[c] = static_cast<int>(g);
      element[c] = e;
      bfs.push_back(e.code());
    }
  if (static_cast<int>(bfs.size()) != order) throw ConsistencyError("point generators do not generate");

  std::set<CodeSet> all;
  for (const auto& rec : low_index_subgroups(pres, order)) {
    const CosetTable& t = rec.coset_table;
    const int n = t.index();
    std::vector<std::vector<int>> at(static_cast<std::size_t>(order));  // at[e][b] = b.e
    at[static_cast<std::size_t>(bfs[0])].resize(static_cast<std::size_t>(n));
    std::iota(at[static_cast<std::size_t>(bfs[0])].begin(), at[static_cast<std::size_t>(bfs[0])].end(), 0);
    for (std::size_t i = 1; i < bfs.size(); ++i) {
      auto c = static_cast<std::size_t>(bfs[i]);
      const auto& from = at[static_cast<std::size_t>(parent[c])];
      auto& to = at[c];
      to.resize(static_cast<std::size_t>(n));
      for (int b = 0; b < n; ++b) to[static_cast<std::size_t>(b)] = t.act(from[static_cast<std::size_t>(b)], via[c] + 1);
    }
    for (int b = 0; b < n; ++b) {
      CodeSet s{};
      for (int c = 0; c < order; ++c)
        if (at[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)] == b) put(s, c);
      all.insert(s);
    }
  }
  return {all.begin(), all.end()};
}

const std::vector<CodeSet>& point_subgroups(int d) {
  static std::array<std::vector<CodeSet>, kMaxDim + 1> cache;
  static std::array<std::once_flag, kMaxDim + 1> once;
  std::call_once(once[static_cast<std::size_t>(d)], [d] { cache[static_cast<std::size_t>(d)] = compute_point_subgroups(d); });
  return cache[static_cast<std::size_t>(d)];
}

// Maximal subgroups of p, one per conjugacy class in p.
std::vector<CodeSet> maximal_point_subgroups(int d, const CodeSet& p) {
  static std::mutex mutex;
  static std::map<std::pair<int, CodeSet>, std::vector<CodeSet>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({d, p});
    if (it != cache.end()) return it->second;
  }
  std::vector<CodeSet> proper;
  for (const CodeSet& s : point_subgroups(d))
    if (s != p && subset(s, p)) proper.push_back(s);
  const auto& group = hyperoctahedral_group(d);
  std::vector<const SignedPerm*> members;
  for (const auto& b : group)
    if (has(p, b.code())) members.push_back(&b);

  std::vector<CodeSet> out;
  std::set<CodeSet> classes;
  for (const CodeSet& s : proper) {
    bool maximal = std::none_of(proper.begin(), proper.end(),
                                [&s](const CodeSet& t) { return t != s && subset(s, t); });
    if (!maximal) continue;
    std::optional<CodeSet> key;
    for (const SignedPerm* x : members) {
      CodeSet c{};
      SignedPerm xi = x->inverse();
      for (const SignedPerm* e : members)
        if (has(s, e->code())) put(c, (*x * *e * xi).code());
      if (!key || c < *key) key = c;
    }
    if (classes.insert(*key).second) out.push_back(s);
  }
  std::lock_guard lock(mutex);
  cache.emplace(std::pair(d, p), out);
  return out;
}

// ---------------------------------------------------------------------------
// Linear algebra over F_p

using Row = std::vector<std::int64_t>;
using Matrix = std::vector<Row>;

std::int64_t mod(std::int64_t a, std::int64_t p) { return ((a % p) + p) % p; }

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = mod(a, p);
  for (std::int64_t e = p - 2; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

// Reduced row echelon form in place; zero rows dropped. Returns the pivot
// columns.
std::vector<int> row_reduce(Matrix& m, std::int64_t p) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int cols = static_cast<int>(m[0].size());
  std::size_t r = 0;
  for (int c = 0; c < cols && r < m.size(); ++c) {
    std::size_t at = r;
    while (at < m.size() && mod(m[at][static_cast<std::size_t>(c)], p) == 0) ++at;
    if (at == m.size()) continue;
    std::swap(m[r], m[at]);
    std::int64_t inv = inverse_mod(m[r][static_cast<std::size_t>(c)], p);
    for (auto& x : m[r]) x = mod(x * inv, p);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r) continue;
      std::int64_t f = mod(m[i][static_cast<std::size_t>(c)], p);
      if (f == 0) continue;
      for (std::size_t j = 0; j < m[i].size(); ++j) m[i][j] = mod(m[i][j] - f * m[r][j], p);
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

// Basis of {x : a x = 0}; a has `cols` columns.
Matrix kernel(Matrix a, int cols, std::int64_t p) {
  std::vector<int> pivots = row_reduce(a, p);
  std::vector<char> is_pivot(static_cast<std::size_t>(cols), 0);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = 1;
  Matrix basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    Row x(static_cast<std::size_t>(cols), 0);
    x[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      x[static_cast<std::size_t>(pivots[r])] = mod(-a[r][static_cast<std::size_t>(f)], p);
    basis.push_back(std::move(x));
  }
  return basis;
}

// One solution of a x = b, if any.
std::optional<Row> solve(const Matrix& a, const Row& b, int cols, std::int64_t p) {
  Matrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  std::vector<int> pivots = row_reduce(aug, p);
  Row x(static_cast<std::size_t>(cols), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == cols) return std::nullopt;
    x[static_cast<std::size_t>(pivots[r])] = aug[r][static_cast<std::size_t>(cols)];
  }
  return x;
}

// Echelon basis grown one vector at a time.
class Span {
 public:
  explicit Span(std::int64_t p) : p_(p) {}

  bool add(Row v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      std::int64_t f = mod(v[static_cast<std::size_t>(pivots_[i])], p_);
      if (f == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = mod(v[j] - f * rows_[i][j], p_);
    }
    auto lead = std::find_if(v.begin(), v.end(), [this](std::int64_t x) { return mod(x, p_) != 0; });
    if (lead == v.end()) return false;
    std::int64_t inv = inverse_mod(*lead, p_);
    for (auto& x : v) x = mod(x * inv, p_);
    pivots_.push_back(static_cast<int>(lead - v.begin()));
    rows_.push_back(std::move(v));
    return true;
  }
  std::size_t dim() const { return rows_.size(); }

 private:
  std::int64_t p_;
  Matrix rows_;
  std::vector<int> pivots_;
};

Row times(const Matrix& m, const Row& v, std::int64_t p) {
  Row out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += m[i][j] * v[j];
    out[i] = mod(s, p);
  }
  return out;
}

// Row vector times matrix.
Row times(const Row& v, const Matrix& m, std::int64_t p) {
  Row out(m.empty() ? 0 : m[0].size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += v[i] * m[i][j];
  for (auto& x : out) x = mod(x, p);
  return out;
}

// Calls fn(y) for every nonzero y in F_p^n with leading entry 1.
template <class Fn>
void for_each_projective_point(int n, std::int64_t p, std::int64_t limit, Fn fn) {
  std::int64_t count = 0;
  for (int lead = 0; lead < n; ++lead) {
    Row y(static_cast<std::size_t>(n), 0);
    y[static_cast<std::size_t>(lead)] = 1;
    while (true) {
      if (++count > limit) throw Error("too many subspaces to enumerate");
      fn(y);
      int i = n - 1;
      while (i > lead && ++y[static_cast<std::size_t>(i)] == p) y[static_cast<std::size_t>(i--)] = 0;
      if (i == lead) break;
    }
  }
}

Row combine(const Row& y, const Matrix& basis, std::int64_t p) { return times(y, basis, p); }

// Smallest subspace containing v and closed under the matrices (acting on
// columns).
Matrix spin(const Row& v, const std::vector<Matrix>& gens, std::int64_t p) {
  Span span(p);
  Matrix basis;
  if (span.add(v)) basis.push_back(v);
  for (std::size_t q = 0; q < basis.size(); ++q)
    for (const Matrix& m : gens) {
      Row w = times(m, basis[q], p);
      if (span.add(w)) basis.push_back(std::move(w));
    }
  return basis;
}

constexpr std::int64_t kEnumerationLimit = 5'000'000;

// Minimal nonzero subspaces of F_p^d closed under gens (acting on columns),
// with p^dim <= max_index. Each is returned in reduced echelon form.
std::vector<Matrix> minimal_submodules(int d, const std::vector<Matrix>& gens, const std::vector<int>& orders,
                                       std::int64_t p, std::int64_t max_index) {
  std::set<Matrix> found;
  if (p * p <= max_index) {
    for_each_projective_point(d, p, kEnumerationLimit, [&](const Row& v) {
      Matrix s = spin(v, gens, p);
      std::int64_t size = 1;
      for (std::size_t i = 0; i < s.size(); ++i) size *= p;
      if (size > max_index) return;
      Matrix key = s;
      row_reduce(key, p);
      if (found.count(key)) return;
      bool minimal = true;
      for_each_projective_point(static_cast<int>(s.size()), p, kEnumerationLimit, [&](const Row& y) {
        minimal = minimal && spin(combine(y, s, p), gens, p).size() == s.size();
      });
      if (minimal) found.insert(std::move(key));
    });
    return {found.begin(), found.end()};
  }
  // only lines fit: common eigenvectors
  Matrix identity(static_cast<std::size_t>(d), Row(static_cast<std::size_t>(d), 0));
  for (int i = 0; i < d; ++i) identity[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  std::vector<Matrix> spaces{identity};
  for (std::size_t g = 0; g < gens.size(); ++g) {
    std::vector<Matrix> next;
    for (std::int64_t lambda = 1; lambda < p; ++lambda) {
      std::int64_t power = 1;
      for (int k = 0; k < orders[g]; ++k) power = power * lambda % p;
      if (power != 1) continue;
      for (const Matrix& e : spaces) {
        // y with (M - lambda) (y E) = 0
        Matrix a(static_cast<std::size_t>(d), Row(e.size(), 0));
        for (std::size_t r = 0; r < e.size(); ++r) {
          Row col = times(gens[g], e[r], p);
          for (int i = 0; i < d; ++i)
            a[static_cast<std::size_t>(i)][r] = mod(col[static_cast<std::size_t>(i)] - lambda * e[r][static_cast<std::size_t>(i)], p);
        }
        Matrix ys = kernel(a, static_cast<int>(e.size()), p);
        if (ys.empty()) continue;
        Matrix sub;
        for (const Row& y : ys) sub.push_back(combine(y, e, p));
        next.push_back(std::move(sub));
      }
    }
    spaces = std::move(next);
  }
  for (const Matrix& e : spaces)
    for_each_projective_point(static_cast<int>(e.size()), p, kEnumerationLimit, [&](const Row& y) {
      Matrix line{combine(y, e, p)};
      row_reduce(line, p);
      found.insert(std::move(line));
    });
  return {found.begin(), found.end()};
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t k = 2; k <= n; ++k) {
    bool prime = true;
    for (std::int64_t q : out) {
      if (q * q > k) break;
      if (k % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(k);
  }
  return out;
}

// Coordinates of v in the Hermite basis of l.
Row lattice_coordinates(const IntegerLattice& l, Vec v) {
  Row c(static_cast<std::size_t>(l.dim()), 0);
  for (int i = 0; i < l.dim(); ++i) {
    auto ui = static_cast<std::size_t>(i);
    if (v[ui] % l.pivot(i) != 0) throw ConsistencyError("vector is not in the lattice");
    c[ui] = v[ui] / l.pivot(i);
    for (int j = 0; j < l.dim(); ++j) v[static_cast<std::size_t>(j)] -= c[ui] * l.row(i)[static_cast<std::size_t>(j)];
  }
  return c;
}

// Matrix of b on the lattice: row i holds the coordinates of b(row i).
Matrix lattice_action(const IntegerLattice& l, const SignedPerm& b) {
  Matrix m;
  for (int i = 0; i < l.dim(); ++i) m.push_back(lattice_coordinates(l, b.apply(l.row(i))));
  return m;
}

int element_order(const SignedPerm& b) {
  int k = 1;
  for (SignedPerm x = b; !x.is_identity(); x = x * b) ++k;
  return k;
}

// Subgroups of g with the same point group whose translations form the
// maximal sublattice cut out by the submodule `s` of the dual of T/pT; one per
// class under conjugation by translations.
void klassengleiche(const CrystGroup& g, const std::vector<int>& gens, const Matrix& s, std::int64_t p,
                    std::vector<CrystGroup>& out) {
  const int d = g.dim();
  const IntegerLattice& t = g.translations();
  const auto& reps = g.coset_representatives();
  const int k = static_cast<int>(s.size());

  LatticeBuilder builder(d);
  for (int i = 0; i < d; ++i) {
    Vec v{};
    for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(j)] = p * t.row(i)[static_cast<std::size_t>(j)];
    builder.add(v);
  }
  auto to_vec = [&](const Row& c) {
    Vec v{};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(j)] += c[static_cast<std::size_t>(i)] * t.row(i)[static_cast<std::size_t>(j)];
    return v;
  };
  for (const Row& c : kernel(s, d, p)) builder.add(to_vec(c));
  IntegerLattice sub = builder.finish();
  std::int64_t pk = 1;
  for (int i = 0; i < k; ++i) pk *= p;
  if (sub.index() != t.index() * pk) throw ConsistencyError("sublattice has the wrong index");

  // T/T' ~ F_p^k via c -> (c.s_j); lifts[j] maps back unit j.
  auto project = [&](const Row& c) {
    Row n(static_cast<std::size_t>(k), 0);
    for (int j = 0; j < k; ++j) {
      std::int64_t x = 0;
      for (int i = 0; i < d; ++i) x += mod(c[static_cast<std::size_t>(i)], p) * s[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      n[static_cast<std::size_t>(j)] = mod(x, p);
    }
    return n;
  };
  Matrix lifts;
  for (int j = 0; j < k; ++j) {
    Row e(static_cast<std::size_t>(k), 0);
    e[static_cast<std::size_t>(j)] = 1;
    auto c = solve(s, e, d, p);
    if (!c) throw ConsistencyError("projection is not onto");
    lifts.push_back(*c);
  }
  auto lift = [&](const Row& n) { return to_vec(times(n, lifts, p)); };

  const std::size_t order = reps.size();
  auto index_of = [&](const SignedPerm& b) {
    const AffineMap* r = g.representative(b);
    if (!r) throw ConsistencyError("point group not closed");
    return static_cast<std::size_t>(r - reps.data());
  };
  std::vector<Matrix> act(order);  // action on T/T'
  for (std::size_t b = 0; b < order; ++b) {
    Matrix m = lattice_action(t, reps[b].linear);
    for (const Row& l : lifts) act[b].push_back(project(times(l, m, p)));
  }

  // n_B = X L_B + c_B, X the unknown corrections of the generators
  const int unknowns = static_cast<int>(gens.size()) * k;
  std::vector<Matrix> lin(order);
  std::vector<Row> cst(order);
  std::vector<char> seen(order, 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  lin[0].assign(static_cast<std::size_t>(unknowns), Row(static_cast<std::size_t>(k), 0));
  cst[0].assign(static_cast<std::size_t>(k), 0);
  Matrix eqs;
  Row rhs;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    std::size_t b = queue[q];
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const AffineMap& gj = reps[static_cast<std::size_t>(gens[j])];
      AffineMap prod = reps[b] * gj;
      std::size_t c = index_of(prod.linear);
      Vec diff{};
      for (int i = 0; i < d; ++i)
        diff[static_cast<std::size_t>(i)] = prod.translation[static_cast<std::size_t>(i)] - reps[c].translation[static_cast<std::size_t>(i)];
      Row cd = project(lattice_coordinates(t, diff));
      Matrix l = lin[b];
      for (int i = 0; i < k; ++i)
        for (int m = 0; m < k; ++m) {
          auto& x = l[j * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
          x = mod(x + act[b][static_cast<std::size_t>(i)][static_cast<std::size_t>(m)], p);
        }
      Row cc(static_cast<std::size_t>(k));
      for (int m = 0; m < k; ++m) cc[static_cast<std::size_t>(m)] = mod(cst[b][static_cast<std::size_t>(m)] + cd[static_cast<std::size_t>(m)], p);
      if (!seen[c]) {
        seen[c] = 1;
        lin[c] = std::move(l);
        cst[c] = std::move(cc);
        queue.push_back(c);
        continue;
      }
      for (int m = 0; m < k; ++m) {
        Row e(static_cast<std::size_t>(unknowns));
        for (int u = 0; u < unknowns; ++u)
          e[static_cast<std::size_t>(u)] = mod(l[static_cast<std::size_t>(u)][static_cast<std::size_t>(m)] - lin[c][static_cast<std::size_t>(u)][static_cast<std::size_t>(m)], p);
        eqs.push_back(std::move(e));
        rhs.push_back(mod(cst[c][static_cast<std::size_t>(m)] - cc[static_cast<std::size_t>(m)], p));
      }
    }
  }
  if (queue.size() != order) throw ConsistencyError("generators do not generate the point group");

  Row base(static_cast<std::size_t>(unknowns), 0);
  Matrix free;
  if (!eqs.empty()) {
    auto x0 = solve(eqs, rhs, unknowns, p);
    if (!x0) return;  // the extension does not split
    base = *x0;
    free = kernel(eqs, unknowns, p);
  } else {
    for (int u = 0; u < unknowns; ++u) {
      Row e(static_cast<std::size_t>(unknowns), 0);
      e[static_cast<std::size_t>(u)] = 1;
      free.push_back(std::move(e));
    }
  }
  // drop the directions of conjugation by translations
  Span span(p);
  for (int i = 0; i < k; ++i) {
    Row cob(static_cast<std::size_t>(unknowns), 0);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const Matrix& a = act[static_cast<std::size_t>(gens[j])];
      for (int m = 0; m < k; ++m)
        cob[j * static_cast<std::size_t>(k) + static_cast<std::size_t>(m)] = mod((i == m ? 1 : 0) - a[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)], p);
    }
    span.add(std::move(cob));
  }
  Matrix directions;
  for (const Row& f : free)
    if (span.add(f)) directions.push_back(f);

  std::int64_t total = 1;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    total *= p;
    if (total > kEnumerationLimit) throw Error("too many complements to enumerate");
  }
  Row coeff(directions.size(), 0);
  for (std::int64_t step = 0; step < total; ++step) {
    Row x = base;
    for (std::size_t i = 0; i < directions.size(); ++i)
      for (int u = 0; u < unknowns; ++u)
        x[static_cast<std::size_t>(u)] = mod(x[static_cast<std::size_t>(u)] + coeff[i] * directions[i][static_cast<std::size_t>(u)], p);
    std::vector<AffineMap> out_reps;
    out_reps.reserve(order);
    for (std::size_t b = 0; b < order; ++b) {
      Row n = cst[b];
      for (int u = 0; u < unknowns; ++u)
        for (int m = 0; m < k; ++m)
          n[static_cast<std::size_t>(m)] += x[static_cast<std::size_t>(u)] * lin[b][static_cast<std::size_t>(u)][static_cast<std::size_t>(m)];
      for (auto& v : n) v = mod(v, p);
      Vec shift = lift(n);
      Vec tr = reps[b].translation;
      for (int i = 0; i < d; ++i) tr[static_cast<std::size_t>(i)] += shift[static_cast<std::size_t>(i)];
      out_reps.push_back(AffineMap{reps[b].linear, sub.reduce(tr)});
    }
    out.push_back(CrystGroup::from_cosets(sub, std::move(out_reps)));
    for (std::size_t i = 0; i < coeff.size() && ++coeff[i] == p; ++i) coeff[i] = 0;
  }
}

}  // namespace

std::vector<CrystGroup> maximal_subgroups(const CrystGroup& g, std::int64_t max_index) {
  const int d = g.dim();
  const auto& reps = g.coset_representatives();
  std::vector<CrystGroup> out;

  CodeSet pset{};
  for (const auto& r : reps) put(pset, r.linear.code());
  for (const CodeSet& q : maximal_point_subgroups(d, pset)) {
    if (static_cast<std::int64_t>(reps.size()) > max_index * size(q)) continue;
    std::vector<AffineMap> sub;
    for (const auto& r : reps)
      if (has(q, r.linear.code())) sub.push_back(r);
    out.push_back(CrystGroup::from_cosets(g.translations(), std::move(sub)));
  }

  std::vector<int> gens;
  std::set<int> codes;
  for (const auto& m : g.generators()) {
    if (m.linear.is_identity() || !codes.insert(m.linear.code()).second) continue;
    gens.push_back(static_cast<int>(g.representative(m.linear) - reps.data()));
  }
  std::vector<int> orders;
  for (int j : gens) orders.push_back(element_order(reps[static_cast<std::size_t>(j)].linear));
  for (std::int64_t p : primes_up_to(max_index)) {
    std::vector<Matrix> dual;  // action on the dual of T/pT
    for (int j : gens) {
      Matrix m = lattice_action(g.translations(), reps[static_cast<std::size_t>(j)].linear);
      for (auto& row : m)
        for (auto& x : row) x = mod(x, p);
      dual.push_back(std::move(m));
    }
    for (const Matrix& s : minimal_submodules(d, dual, orders, p, max_index)) klassengleiche(g, gens, s, p, out);
  }
  return out;
}

}  // namespace latcol
