#include <algorithm>
#include <string>
#include <vector>

#include "latcol/error.hpp"
#include "latcol/fpgroup.hpp"

namespace latcol {

namespace {

// Todd-Coxeter with coincidence processing. Cosets live in slots numbered by
// definition order; dead slots are reclaimed by compaction between passes.
class Enumerator {
 public:
  Enumerator(const Presentation& pres, const std::vector<Word>& subgroup_words, int max_cosets)
      : layout_(pres), columns_(layout_.columns()), max_cosets_(max_cosets) {
    if (max_cosets < 1) throw InvalidArgument("max_cosets must be positive");
    physical_limit_ = 4 * max_cosets + 64;
    for (const Word& r : pres.relators()) relators_.push_back(layout_.columns_of(r));
    for (const Word& w : subgroup_words) {
      for (int x : w.letters)
        if (x == 0 || letter_generator(x) >= pres.generator_count())
          throw InvalidArgument("subgroup word letter out of range");
      subgroup_.push_back(layout_.columns_of(w));
    }
    by_column_.resize(static_cast<std::size_t>(columns_));
    for (const auto& r : relators_)
      for (std::size_t s = 0; s < r.size(); ++s) {
        std::vector<int> rot(r.begin() + static_cast<std::ptrdiff_t>(s), r.end());
        rot.insert(rot.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(s));
        by_column_[static_cast<std::size_t>(rot[0])].push_back(std::move(rot));
      }
    add_coset();
  }

  std::vector<std::vector<int>> run_hlt() {
    for (const auto& w : subgroup_) scan_and_fill(0, w);
    for (int pass = 0; pass < 64; ++pass) {
      for (int c = 0; c < used_; ++c) {
        if (used_ > physical_limit_ / 2) c = compact(c);
        if (!live_[idx(c)]) continue;
        deductions_.clear();
        for (const auto& r : relators_) {
          scan_and_fill(c, r);
          if (!live_[idx(c)]) break;
        }
        for (int col = 0; col < columns_ && live_[idx(c)]; ++col)
          if (at(c, col) < 0) define(c, col);
      }
      if (closed()) return finish();
    }
    throw ConsistencyError("coset enumeration failed to converge");
  }

  std::vector<std::vector<int>> run_felsch() {
    felsch_ = true;
    for (const auto& w : subgroup_) scan_and_fill(0, w);
    process_deductions();
    for (;;) {
      int c = 0, col = -1;
      for (; c < used_; ++c) {
        if (!live_[idx(c)]) continue;
        for (int k = 0; k < columns_; ++k)
          if (at(c, k) < 0) {
            col = k;
            break;
          }
        if (col >= 0) break;
      }
      if (col < 0) break;
      define(c, col);
      process_deductions();
      if (used_ > physical_limit_ / 2) compact(0);
    }
    if (!closed()) throw ConsistencyError("Felsch enumeration produced an inconsistent table");
    return finish();
  }

 private:
  static std::size_t idx(int c) { return static_cast<std::size_t>(c); }
  int& at(int c, int col) { return table_[idx(c) * idx(columns_) + idx(col)]; }
  int inv(int col) const { return layout_.inverse(col); }

  int add_coset() {
    if (used_ >= physical_limit_)
      throw EnumerationOverflow("coset table storage exhausted");
    int c = used_++;
    table_.resize(idx(used_) * idx(columns_), -1);
    live_.push_back(1);
    parent_.push_back(c);
    ++live_count_;
    return c;
  }

  // Defines c.col as a new coset, running a lookahead pass first if the
  // live-coset limit has been reached.
  void define(int c, int col) {
    if (live_count_ >= max_cosets_) {
      lookahead();
      if (!live_[idx(c)] || at(c, col) >= 0) return;
      if (live_count_ >= max_cosets_)
        throw EnumerationOverflow("coset enumeration needs more than " +
                                  std::to_string(max_cosets_) + " cosets");
    }
    int d = add_coset();
    at(c, col) = d;
    at(d, inv(col)) = c;
    deductions_.emplace_back(c, col);
  }

  void scan_and_fill(int c, const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    for (;;) {
      if (!live_[idx(c)]) return;
      int f = c, i = 0;
      while (i < n && at(f, w[idx(i)]) >= 0) f = at(f, w[idx(i++)]);
      if (i == n) {
        if (f != c) coincidence(f, c);
        return;
      }
      int b = c, j = n - 1;
      while (j >= i && at(b, inv(w[idx(j)])) >= 0) b = at(b, inv(w[idx(j--)]));
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (j == i) {
        at(f, w[idx(i)]) = b;
        at(b, inv(w[idx(i)])) = f;
        deductions_.emplace_back(f, w[idx(i)]);
        return;
      }
      define(f, w[idx(i)]);
    }
  }

  // Scan without defining new cosets; returns true if anything changed.
  bool scan_and_check(int c, const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    int f = c, i = 0;
    while (i < n && at(f, w[idx(i)]) >= 0) f = at(f, w[idx(i++)]);
    if (i == n) {
      if (f == c) return false;
      coincidence(f, c);
      return true;
    }
    int b = c, j = n - 1;
    while (j >= i && at(b, inv(w[idx(j)])) >= 0) b = at(b, inv(w[idx(j--)]));
    if (j < i) {
      coincidence(f, b);
      return true;
    }
    if (j == i) {
      at(f, w[idx(i)]) = b;
      at(b, inv(w[idx(i)])) = f;
      deductions_.emplace_back(f, w[idx(i)]);
      return true;
    }
    return false;
  }

  void lookahead() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& w : subgroup_) changed |= scan_and_check(0, w);
      for (int c = 0; c < used_; ++c) {
        for (const auto& r : relators_) {
          if (!live_[idx(c)]) break;
          changed |= scan_and_check(c, r);
        }
      }
    }
    if (!felsch_) deductions_.clear();
  }

  void process_deductions() {
    while (!deductions_.empty()) {
      auto [c, col] = deductions_.back();
      deductions_.pop_back();
      if (!live_[idx(c)] || at(c, col) < 0) continue;
      for (const auto& r : by_column_[idx(col)]) {
        if (!live_[idx(c)]) break;
        scan_and_check(c, r);
      }
      if (!live_[idx(c)] || at(c, col) < 0) continue;
      int d = at(c, col);
      for (const auto& r : by_column_[idx(inv(col))]) {
        if (!live_[idx(d)]) break;
        scan_and_check(d, r);
      }
      if (deductions_.empty())
        for (const auto& w : subgroup_) scan_and_check(0, w);
    }
  }

  int rep(int c) {
    int r = c;
    while (parent_[idx(r)] != r) r = parent_[idx(r)];
    while (parent_[idx(c)] != r) {
      int next = parent_[idx(c)];
      parent_[idx(c)] = r;
      c = next;
    }
    return r;
  }

  void merge(int a, int b, std::vector<int>& queue) {
    int x = rep(a), y = rep(b);
    if (x == y) return;
    int keep = std::min(x, y), drop = std::max(x, y);
    parent_[idx(drop)] = keep;
    live_[idx(drop)] = 0;
    --live_count_;
    queue.push_back(drop);
  }

  void coincidence(int a, int b) {
    std::vector<int> queue;
    merge(a, b, queue);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      int g = queue[q];
      for (int col = 0; col < columns_; ++col) {
        int d = at(g, col);
        if (d < 0) continue;
        if (at(d, inv(col)) == g) at(d, inv(col)) = -1;
        at(g, col) = -1;
        int mu = rep(g), nu = rep(d);
        if (at(mu, col) >= 0) {
          merge(nu, at(mu, col), queue);
        } else if (at(nu, inv(col)) >= 0) {
          merge(mu, at(nu, inv(col)), queue);
        } else {
          at(mu, col) = nu;
          at(nu, inv(col)) = mu;
          deductions_.emplace_back(mu, col);
        }
      }
    }
  }

  // Drops dead slots, preserving definition order. Returns the new number of
  // the first live coset at or after `c`.
  int compact(int c) {
    std::vector<int> renumber(idx(used_), -1);
    int n = 0, new_c = -1;
    for (int s = 0; s < used_; ++s) {
      if (s >= c && new_c < 0 && live_[idx(s)]) new_c = n;
      if (live_[idx(s)]) renumber[idx(s)] = n++;
    }
    if (new_c < 0) new_c = n;
    std::vector<int> table(idx(n) * idx(columns_), -1);
    for (int s = 0; s < used_; ++s) {
      if (!live_[idx(s)]) continue;
      for (int col = 0; col < columns_; ++col) {
        int v = at(s, col);
        table[idx(renumber[idx(s)]) * idx(columns_) + idx(col)] = v < 0 ? -1 : renumber[idx(v)];
      }
    }
    std::vector<std::pair<int, int>> deductions;
    for (auto [s, col] : deductions_)
      if (live_[idx(s)]) deductions.emplace_back(renumber[idx(s)], col);
    deductions_ = std::move(deductions);
    table_ = std::move(table);
    used_ = n;
    live_.assign(idx(n), 1);
    parent_.resize(idx(n));
    for (int s = 0; s < n; ++s) parent_[idx(s)] = s;
    return new_c;
  }

  bool closed() {
    for (int c = 0; c < used_; ++c) {
      if (!live_[idx(c)]) continue;
      for (int col = 0; col < columns_; ++col)
        if (at(c, col) < 0) return false;
      for (const auto& r : relators_) {
        int f = c;
        for (int x : r) f = at(f, x);
        if (f != c) return false;
      }
    }
    for (const auto& w : subgroup_) {
      int f = 0;
      for (int x : w) f = at(f, x);
      if (f != 0) return false;
    }
    return true;
  }

  std::vector<std::vector<int>> finish() {
    compact(0);
    std::vector<std::vector<int>> action;
    for (int col = 0; col < columns_; ++col) {
      if (layout_.letter(col) < 0) continue;
      std::vector<int> perm(idx(used_));
      for (int c = 0; c < used_; ++c) perm[idx(c)] = at(c, col);
      action.push_back(std::move(perm));
    }
    return action;
  }

  ColumnLayout layout_;
  int columns_;
  int max_cosets_;
  int physical_limit_ = 0;
  std::vector<std::vector<int>> relators_;
  std::vector<std::vector<int>> subgroup_;
  std::vector<std::vector<std::vector<int>>> by_column_;
  std::vector<int> table_;
  std::vector<char> live_;
  std::vector<int> parent_;
  std::vector<std::pair<int, int>> deductions_;
  int used_ = 0;
  int live_count_ = 0;
  bool felsch_ = false;
};

}  // namespace

CosetTable coset_enumerate(const Presentation& pres, const std::vector<Word>& subgroup_words,
                           int max_cosets, EnumerationStrategy strategy) {
  Enumerator e(pres, subgroup_words, max_cosets);
  auto action = strategy == EnumerationStrategy::kHlt ? e.run_hlt() : e.run_felsch();
  return standardize(pres, CosetTable(std::move(action), subgroup_words), 0);
}

}  // namespace latcol
