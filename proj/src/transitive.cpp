#include <algorithm>
#include <atomic>
#include <set>

#include "census.hpp"
#include "latcol/crystgeom.hpp"
#include "latcol/error.hpp"

namespace latcol::detail {

namespace {

// The presentation split into its point-group part (generators whose image
// fixes the origin) and the single generator carrying a translation.
struct Split {
  Presentation point;
  std::vector<int> point_index;  // full generator -> point generator, or -1
  int translation = -1;
  std::vector<std::vector<int>> mixed;  // relators that use the translation generator
};

Split split_presentation(int d, const Presentation& pres) {
  auto maps = generator_maps(d);
  Split s;
  s.point_index.assign(static_cast<std::size_t>(pres.generator_count()), -1);
  std::string names;
  int k = 0;
  for (int g = 0; g < pres.generator_count(); ++g) {
    if (maps[static_cast<std::size_t>(g)].translation == Vec{}) {
      s.point_index[static_cast<std::size_t>(g)] = k++;
      names += pres.generator_name(g);
    } else {
      if (s.translation >= 0) throw ConsistencyError("more than one translating generator");
      s.translation = g;
    }
  }
  if (s.translation < 0) throw ConsistencyError("no translating generator");
  std::vector<Word> point_relators;
  for (const Word& r : pres.relators()) {
    bool uses = std::any_of(r.letters.begin(), r.letters.end(),
                            [&s](int x) { return letter_generator(x) == s.translation; });
    if (uses) {
      s.mixed.push_back(r.letters);
      continue;
    }
    Word w;
    for (int x : r.letters) {
      int p = s.point_index[static_cast<std::size_t>(letter_generator(x))] + 1;
      w.letters.push_back(x > 0 ? p : -p);
    }
    point_relators.push_back(std::move(w));
  }
  s.point = Presentation(k, std::move(point_relators), names);
  if (coset_enumerate(s.point, {}, 4 * hyperoctahedral_order(d)).index() != hyperoctahedral_order(d))
    throw ConsistencyError("point-group relators do not define the hyperoctahedral group");
  return s;
}

// Backtracking search for the translation generator's permutation of the
// cosets of a point stabilizer, with the other columns fixed. Deductions come
// from scanning the relators that involve it.
class ColumnSearch {
 public:
  ColumnSearch(const Split& split, bool involution, const CosetTable& stabilizer, std::atomic<std::uint64_t>& nodes,
               std::uint64_t budget)
      : split_(split),
        involution_(involution),
        k_(stabilizer),
        n_(stabilizer.index()),
        fwd_(static_cast<std::size_t>(n_), -1),
        bwd_(static_cast<std::size_t>(n_), -1),
        nodes_(nodes),
        budget_(budget) {}

  void run(const std::function<void(const std::vector<int>&)>& leaf) {
    leaf_ = &leaf;
    search();
  }

 private:
  int act(int c, int letter) const {
    int g = letter_generator(letter);
    if (g == split_.translation) return letter > 0 ? fwd_[static_cast<std::size_t>(c)] : bwd_[static_cast<std::size_t>(c)];
    int p = split_.point_index[static_cast<std::size_t>(g)] + 1;
    return k_.act(c, letter > 0 ? p : -p);
  }

  bool define(int x, int y) {
    auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
    if (fwd_[ux] == y) return true;
    if (fwd_[ux] >= 0 || bwd_[uy] >= 0) return false;
    fwd_[ux] = y;
    bwd_[uy] = x;
    trail_.push_back(x);
    if (involution_ && x != y) {
      if (fwd_[uy] >= 0 || bwd_[ux] >= 0) return false;
      fwd_[uy] = x;
      bwd_[ux] = y;
      trail_.push_back(y);
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto x = static_cast<std::size_t>(trail_.back());
      trail_.pop_back();
      bwd_[static_cast<std::size_t>(fwd_[x])] = -1;
      fwd_[x] = -1;
    }
  }

  // Scans relator r cyclically from position i at coset s.
  bool scan(const std::vector<int>& r, std::size_t i, int s) {
    const std::size_t len = r.size();
    int f = s;
    std::size_t j = 0;
    for (; j < len; ++j) {
      int nf = act(f, r[(i + j) % len]);
      if (nf < 0) break;
      f = nf;
    }
    if (j == len) return f == s;
    int b = s;
    std::size_t k = len;
    for (; k > j + 1; --k) {
      int nb = act(b, -r[(i + k - 1) % len]);
      if (nb < 0) return true;
      b = nb;
    }
    return r[(i + j) % len] > 0 ? define(f, b) : define(b, f);
  }

  bool propagate(std::size_t from) {
    for (std::size_t q = from; q < trail_.size(); ++q) {
      int x = trail_[q];
      int y = fwd_[static_cast<std::size_t>(x)];
      for (const auto& r : split_.mixed)
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (letter_generator(r[i]) != split_.translation) continue;
          if (!scan(r, i, r[i] > 0 ? x : y)) return false;
        }
    }
    return true;
  }

  void search() {
    if (++nodes_ > budget_) throw BudgetExceeded("translation-column search", "node budget exhausted");
    int x = 0;
    while (x < n_ && fwd_[static_cast<std::size_t>(x)] >= 0) ++x;
    if (x == n_) {
      (*leaf_)(fwd_);
      return;
    }
    for (int y = 0; y < n_; ++y) {
      if (bwd_[static_cast<std::size_t>(y)] >= 0) continue;
      std::size_t mark = trail_.size();
      if (define(x, y) && propagate(mark)) search();
      undo(mark);
    }
  }

  const Split& split_;
  bool involution_;
  const CosetTable& k_;
  int n_;
  std::vector<int> fwd_, bwd_, trail_;
  std::atomic<std::uint64_t>& nodes_;
  std::uint64_t budget_;
  const std::function<void(const std::vector<int>&)>* leaf_ = nullptr;
};

}  // namespace

Presentation point_presentation(int d, std::vector<SignedPerm>* images) {
  Split s = split_presentation(d, make_presentation(d));
  if (images) {
    images->clear();
    auto maps = generator_maps(d);
    for (std::size_t g = 0; g < maps.size(); ++g)
      if (s.point_index[g] >= 0) images->push_back(maps[g].linear);
  }
  return s.point;
}

std::vector<TransitiveTable> transitive_by_point_stabilizer(int d, const LowIndexOptions& options,
                                                            std::uint64_t& nodes) {
  const Presentation pres = make_presentation(d);
  const Split split = split_presentation(d, pres);
  const bool involution = pres.is_involution(split.translation);
  const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  std::vector<std::vector<TransitiveTable>> per_worker(jobs);
  std::atomic<std::uint64_t> column_nodes{0};

  LowIndexStats stats = for_each_low_index_subgroup(
      split.point, hyperoctahedral_order(d), options,
      [&](const CosetTable& k, const std::vector<std::uint8_t>&, int worker) {
        std::set<std::vector<std::uint8_t>> seen;
        ColumnSearch search(split, involution, k, column_nodes, options.node_budget);
        search.run([&](const std::vector<int>& column) {
          std::vector<std::vector<int>> action(static_cast<std::size_t>(pres.generator_count()));
          for (int g = 0; g < pres.generator_count(); ++g) {
            if (g == split.translation) {
              action[static_cast<std::size_t>(g)] = column;
              continue;
            }
            auto p = static_cast<std::size_t>(split.point_index[static_cast<std::size_t>(g)]);
            action[static_cast<std::size_t>(g)] = k.action()[p];
          }
          CosetTable table(std::move(action));
          if (!table.is_consistent(pres)) throw ConsistencyError("translation column violates a relator");
          auto form = canonical_table_form(pres, table);
          if (seen.insert(form).second)
            per_worker[static_cast<std::size_t>(worker)].push_back({decode_table(pres, form), std::move(form)});
        });
      });
  nodes = stats.nodes + column_nodes.load();
  std::vector<TransitiveTable> out;
  for (auto& v : per_worker)
    for (auto& t : v) out.push_back(std::move(t));
  return out;
}

}  // namespace latcol::detail
