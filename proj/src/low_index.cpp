#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "latcol/error.hpp"
#include "latcol/fpgroup.hpp"

namespace latcol {

namespace {

// Relator data shared read-only by all workers.
struct SearchPlan {
  int columns = 0;
  int max_index = 0;
  std::vector<int> inverse;
  std::vector<int> letter;
  // Cyclic rotations of each relator, as column sequences, grouped by their
  // first column. Relators x^2 on involution columns are implied by the
  // layout and dropped.
  std::vector<std::vector<std::vector<int>>> rotations;
};

SearchPlan make_plan(const Presentation& pres, int max_index) {
  ColumnLayout layout(pres);
  SearchPlan plan;
  plan.columns = layout.columns();
  plan.max_index = max_index;
  for (int col = 0; col < plan.columns; ++col) {
    plan.inverse.push_back(layout.inverse(col));
    plan.letter.push_back(layout.letter(col));
  }
  plan.rotations.resize(static_cast<std::size_t>(plan.columns));
  for (const Word& rel : pres.relators()) {
    Word r = cyclic_reduce(rel);
    if (r.empty()) continue;
    auto cols = layout.columns_of(r);
    if (cols.size() == 2 && cols[0] == cols[1] && layout.inverse(cols[0]) == cols[0]) continue;
    for (std::size_t s = 0; s < cols.size(); ++s) {
      std::vector<int> rot(cols.begin() + static_cast<std::ptrdiff_t>(s), cols.end());
      rot.insert(rot.end(), cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(s));
      auto& bucket = plan.rotations[static_cast<std::size_t>(rot[0])];
      if (std::find(bucket.begin(), bucket.end(), rot) == bucket.end()) bucket.push_back(std::move(rot));
    }
  }
  return plan;
}

// A partial coset table on which the backtrack search runs.
struct Frame {
  std::vector<int> table;
  int count = 1;
  int position = 0;  // every entry before this scan position is defined
};

struct Shared {
  std::atomic<std::uint64_t> nodes{0};
  std::uint64_t budget = 0;
  std::atomic<bool> stop{false};
};

class Searcher {
 public:
  Searcher(const SearchPlan& plan, Shared& shared, const LowIndexVisitor& visit, int worker,
           const Presentation& pres)
      : plan_(plan), shared_(shared), visit_(visit), worker_(worker), pres_(pres) {
    map_.assign(static_cast<std::size_t>(plan.max_index), -1);
    back_.assign(static_cast<std::size_t>(plan.max_index), -1);
  }

  // Explores the subtree below `frame`. With depth_limit >= 0, frames at that
  // depth are appended to `frontier` instead of being explored.
  void run(Frame frame, int depth_limit = -1, std::vector<Frame>* frontier = nullptr) {
    table_ = std::move(frame.table);
    count_ = frame.count;
    depth_limit_ = depth_limit;
    frontier_ = frontier;
    log_.clear();
    search(frame.position, 0);
  }

  std::uint64_t found() const { return found_; }

 private:
  int& at(int c, int col) { return table_[static_cast<std::size_t>(c * plan_.columns + col)]; }

  void set(int c, int col, int v) {
    int pos = c * plan_.columns + col;
    table_[static_cast<std::size_t>(pos)] = v;
    log_.push_back(pos);
    int ipos = v * plan_.columns + plan_.inverse[static_cast<std::size_t>(col)];
    if (ipos != pos) {
      table_[static_cast<std::size_t>(ipos)] = c;
      log_.push_back(ipos);
    }
    queue_.push_back(pos);
  }

  void undo(std::size_t mark) {
    while (log_.size() > mark) {
      table_[static_cast<std::size_t>(log_.back())] = -1;
      log_.pop_back();
    }
  }

  bool scan(int c, const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    int f = c, i = 0;
    while (i < n) {
      int next = at(f, w[static_cast<std::size_t>(i)]);
      if (next < 0) break;
      f = next;
      ++i;
    }
    if (i == n) return f == c;
    int b = c, j = n - 1;
    while (j >= i) {
      int next = at(b, plan_.inverse[static_cast<std::size_t>(w[static_cast<std::size_t>(j)])]);
      if (next < 0) break;
      b = next;
      --j;
    }
    if (j < i) return false;
    if (j == i) set(f, w[static_cast<std::size_t>(i)], b);
    return true;
  }

  bool process() {
    while (!queue_.empty()) {
      int pos = queue_.back();
      queue_.pop_back();
      int c = pos / plan_.columns, col = pos % plan_.columns;
      int d = table_[static_cast<std::size_t>(pos)];
      for (const auto& w : plan_.rotations[static_cast<std::size_t>(col)])
        if (!scan(c, w)) return false;
      int icol = plan_.inverse[static_cast<std::size_t>(col)];
      if (icol == col && d == c) continue;
      for (const auto& w : plan_.rotations[static_cast<std::size_t>(icol)])
        if (!scan(d, w)) return false;
    }
    return true;
  }

  // False if renumbering the table from some other base coset yields a
  // table that is already known to be smaller in scan order.
  bool canonical() {
    const int cols = plan_.columns;
    for (int base = 1; base < count_; ++base) {
      std::fill(map_.begin(), map_.begin() + count_, -1);
      map_[static_cast<std::size_t>(base)] = 0;
      back_[0] = base;
      int next = 1;
      bool decided = false;
      for (int i = 0; i < count_ && !decided; ++i) {
        if (i >= next) break;
        int orig = back_[static_cast<std::size_t>(i)];
        for (int col = 0; col < cols; ++col) {
          int v = at(orig, col);
          int cur = at(i, col);
          if (v < 0 || cur < 0) {
            decided = true;
            break;
          }
          int& m = map_[static_cast<std::size_t>(v)];
          if (m < 0) {
            m = next;
            back_[static_cast<std::size_t>(next++)] = v;
          }
          if (m < cur) return false;
          if (m > cur) {
            decided = true;
            break;
          }
        }
      }
    }
    return true;
  }

  void emit() {
    // Deduction processing scans every relator through every entry; the
    // final check guards the invariant rather than the common path.
    std::vector<std::vector<int>> action;
    for (int col = 0; col < plan_.columns; ++col) {
      if (plan_.letter[static_cast<std::size_t>(col)] < 0) continue;
      std::vector<int> perm(static_cast<std::size_t>(count_));
      for (int c = 0; c < count_; ++c) perm[static_cast<std::size_t>(c)] = at(c, col);
      action.push_back(std::move(perm));
    }
    CosetTable table(std::move(action));
    std::vector<std::uint8_t> form;
    form.reserve(static_cast<std::size_t>(2 + 2 * count_ * plan_.columns));
    auto put = [&form](int v) {
      form.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
      form.push_back(static_cast<std::uint8_t>(v & 0xff));
    };
    put(count_);
    for (int c = 0; c < count_; ++c)
      for (int col = 0; col < plan_.columns; ++col) put(at(c, col));
    ++found_;
    visit_(table, form, worker_);
  }

  void search(int position, int depth) {
    if (shared_.stop.load(std::memory_order_relaxed)) return;
    std::uint64_t n = shared_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (n > shared_.budget)
      throw BudgetExceeded("low_index", "low-index search exceeded node budget of " +
                                            std::to_string(shared_.budget));
    const int cols = plan_.columns;
    const int limit = count_ * cols;
    while (position < limit && table_[static_cast<std::size_t>(position)] >= 0) ++position;
    if (position == limit) {
      emit();
      return;
    }
    if (depth_limit_ >= 0 && depth == depth_limit_) {
      // counted again when the frame is explored
      shared_.nodes.fetch_sub(1, std::memory_order_relaxed);
      frontier_->push_back(Frame{table_, count_, position});
      return;
    }
    const int c = position / cols, col = position % cols;
    const int icol = plan_.inverse[static_cast<std::size_t>(col)];
    for (int j = 0; j <= count_; ++j) {
      bool fresh = j == count_;
      if (fresh) {
        if (count_ >= plan_.max_index) break;
      } else if (at(j, icol) >= 0) {
        continue;
      }
      std::size_t mark = log_.size();
      int saved_count = count_;
      if (fresh) ++count_;
      queue_.clear();
      set(c, col, j);
      if (process() && canonical()) search(position + 1, depth + 1);
      undo(mark);
      count_ = saved_count;
    }
  }

  const SearchPlan& plan_;
  Shared& shared_;
  const LowIndexVisitor& visit_;
  int worker_;
  const Presentation& pres_;
  std::vector<int> table_;
  int count_ = 1;
  std::vector<int> log_;
  std::vector<int> queue_;
  std::vector<int> map_;
  std::vector<int> back_;
  int depth_limit_ = -1;
  std::vector<Frame>* frontier_ = nullptr;
  std::uint64_t found_ = 0;
};

}  // namespace

LowIndexStats for_each_low_index_subgroup(const Presentation& pres, int max_index,
                                          const LowIndexOptions& options,
                                          const LowIndexVisitor& visit) {
  if (max_index < 1) throw InvalidArgument("max_index must be positive");
  if (max_index > 0xffff) throw InvalidArgument("max_index too large");
  SearchPlan plan = make_plan(pres, max_index);
  Shared shared;
  shared.budget = options.node_budget;
  Frame root;
  root.table.assign(static_cast<std::size_t>(max_index * plan.columns), -1);
  LowIndexStats stats;
  const int jobs = std::max(1, options.jobs);

  if (jobs == 1) {
    Searcher s(plan, shared, visit, 0, pres);
    s.run(std::move(root));
    stats.found = s.found();
  } else {
    // Expand the top of the tree on worker 0 until there is enough work to
    // share, then hand out the frontier frames.
    std::vector<Frame> frontier;
    std::uint64_t found = 0;
    for (int depth = 1; depth <= 64; ++depth) {
      frontier.clear();
      Shared probe;
      probe.budget = options.node_budget;
      std::uint64_t probe_found = 0;
      LowIndexVisitor count_only = [&probe_found](const CosetTable&, const std::vector<std::uint8_t>&,
                                                  int) { ++probe_found; };
      Searcher s(plan, probe, count_only, 0, pres);
      s.run(root, depth, &frontier);
      if (static_cast<int>(frontier.size()) >= 8 * jobs || frontier.empty() || depth == 64) {
        // Replay this depth for real so shallow tables reach the visitor.
        frontier.clear();
        Searcher real(plan, shared, visit, 0, pres);
        real.run(root, depth, &frontier);
        found += real.found();
        break;
      }
    }
    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> total{found};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    for (int w = 0; w < jobs; ++w) {
      threads.emplace_back([&, w] {
        Searcher s(plan, shared, visit, w, pres);
        try {
          for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= frontier.size() || shared.stop.load()) break;
            s.run(std::move(frontier[k]));
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          shared.stop = true;
        }
        total += s.found();
      });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    stats.found = total.load();
  }
  stats.nodes = shared.nodes.load();
  return stats;
}

std::vector<SubgroupRecord> low_index_subgroups(const Presentation& pres, int max_index,
                                                const LowIndexOptions& options) {
  const int jobs = std::max(1, options.jobs);
  std::vector<std::vector<SubgroupRecord>> buckets(static_cast<std::size_t>(jobs));
  for_each_low_index_subgroup(
      pres, max_index, options,
      [&buckets](const CosetTable& table, const std::vector<std::uint8_t>& form, int worker) {
        buckets[static_cast<std::size_t>(worker)].push_back(SubgroupRecord{table, form});
      });
  std::vector<SubgroupRecord> all;
  for (auto& b : buckets)
    for (auto& r : b) all.push_back(std::move(r));
  std::sort(all.begin(), all.end(), [](const SubgroupRecord& a, const SubgroupRecord& b) {
    if (a.coset_table.index() != b.coset_table.index())
      return a.coset_table.index() < b.coset_table.index();
    return a.canonical_table_form < b.canonical_table_form;
  });
  return all;
}

}  // namespace latcol
