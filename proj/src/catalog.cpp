#include "latcol/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "census.hpp"
#include "latcol/error.hpp"

namespace latcol {

namespace {

using Clock = std::chrono::steady_clock;

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// exception.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (int t = 0; t < std::min<int>(jobs, static_cast<int>(n)); ++t)
    threads.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : threads) th.join();
  if (error) std::rethrow_exception(error);
}

void check_dimension(int d) {
  if (d < 1 || d > kMaxDim) throw InvalidArgument("dimension must be in 1..4");
}

// The presentation images generate all of Aut(Z^d), translations included.
void check_generator_images(int d) {
  CrystGroup g = CrystGroup::generate(d, generator_maps(d));
  if (g.translations() != IntegerLattice::full(d) || g.point_group_order() != hyperoctahedral_order(d))
    throw ConsistencyError("generator images do not generate Aut(Z^d)");
}

struct Found {
  std::int64_t index = 0;
  std::vector<std::uint8_t> order_key;
  CrystGroup group;
  Certificate cert;
};

// The orbit-stabilizer index identity for H <= Aut(Z^d), plus agreement of
// the affine orbit data with the coset-table orbit sizes when given.
bool proposition1_ok(const CrystGroup& aut, const CrystGroup& h, const std::vector<int>* table_sizes) {
  Proposition1Report rep = proposition1_check(aut, h);
  if (!rep.holds) return false;
  if (table_sizes) {
    std::vector<int> terms;
    for (const auto& t : rep.terms) terms.push_back(t.stab_g / t.stab_h);
    std::vector<int> sizes = *table_sizes;
    std::sort(terms.begin(), terms.end());
    std::sort(sizes.begin(), sizes.end());
    if (terms != sizes) return false;
  }
  return true;
}

// Folds found groups into one entry per certificate: the first group in
// (index, generator key) order, and the largest group for the inclusion
// cross-check.
class Assembler {
 public:
  void add(Found f) {
    inclusion_.add(f.group, f.cert);
    auto it = first_.find(f.cert.bytes);
    if (it == first_.end())
      first_.emplace(f.cert.bytes, std::move(f));
    else if (std::tie(f.index, f.order_key) < std::tie(it->second.index, it->second.order_key))
      it->second = std::move(f);
  }

  Catalog finish(int d, int n, int jobs) const {
    std::vector<const Found*> firsts;
    for (const auto& [bytes, f] : first_) firsts.push_back(&f);
    Catalog cat;
    cat.dimension = d;
    cat.orbit_count = n;
    cat.records.resize(firsts.size());
    parallel_for(firsts.size(), jobs, [&](std::size_t r) {
      const Found& f = *firsts[r];
      cat.records[r] = make_record(f.group.conjugated(f.cert.witness), f.cert);
    });
    const auto largest = inclusion_.largest();
    for (const auto& rec : cat.records)
      if (!(rec.aut == largest.at(rec.certificate.bytes)))
        throw ConsistencyError("normalizer and inclusion methods disagree for " + rec.certificate.hex());
    return cat;
  }

 private:
  std::map<std::vector<std::uint8_t>, Found> first_;
  InclusionAccumulator inclusion_;
};

// Per certificate, only the first group and those not contained in another
// group of the class; enough for Assembler by transitivity of inclusion.
std::vector<Found> reduce_classes(std::vector<Found> found) {
  struct Class {
    std::size_t first;
    std::vector<std::pair<std::size_t, CrystGroup>> top;
  };
  std::map<std::vector<std::uint8_t>, Class> classes;
  for (std::size_t k = 0; k < found.size(); ++k) {
    const Found& f = found[k];
    auto [it, fresh] = classes.try_emplace(f.cert.bytes, Class{k, {}});
    Class& c = it->second;
    if (std::tie(f.index, f.order_key) < std::tie(found[c.first].index, found[c.first].order_key)) c.first = k;
    CrystGroup g = f.group.conjugated(f.cert.witness);
    if (std::any_of(c.top.begin(), c.top.end(), [&g](const auto& m) { return m.second.contains(g); })) continue;
    std::erase_if(c.top, [&g](const auto& m) { return g.contains(m.second); });
    c.top.emplace_back(k, std::move(g));
  }
  std::vector<Found> out;
  for (auto& [bytes, c] : classes) {
    out.push_back(found[c.first]);
    for (const auto& [k, g] : c.top)
      if (k != c.first) out.push_back(found[k]);
  }
  return out;
}

std::vector<std::uint8_t> generator_key(const CrystGroup& g) {
  std::string text;
  for (const auto& m : g.generators()) text += m.to_text();
  return {text.begin(), text.end()};
}

}  // namespace

int RunConfig::index_bound() const { return max_index > 0 ? max_index : orbits * hyperoctahedral_order(dimension); }

std::uint64_t node_budget_from_env(std::uint64_t fallback) {
  const char* v = std::getenv("LATCOL_NODE_BUDGET");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  unsigned long long b = std::strtoull(v, &end, 10);
  if (*end != '\0' || b == 0) throw InvalidArgument("LATCOL_NODE_BUDGET must be a positive integer");
  return b;
}

PartitionRecord make_record(const CrystGroup& generating, const Certificate& cert) {
  PartitionRecord r;
  r.certificate = cert;
  r.partition = cert.canonical;
  r.generating_subgroup = generating;
  r.subgroup_index = generating.index();
  r.aut = aut_partition(generating, r.partition);
  r.index = index_decomposition(r.aut);
  r.proper_colouring = is_proper_colouring(r.partition);
  auto perms = color_permutation_group(r.partition);
  r.colour_permutations = static_cast<int>(perms.size());
  r.swap_symmetric = is_transitive(perms, r.partition.orbit_count);
  r.superposed = is_superposed(r.partition);
  r.radius1 = neighbourhood_signature(r.partition, 1);
  r.radius2 = neighbourhood_signature(r.partition, 2);
  r.stabilizer_fingerprints = stabilizer_fingerprints(r.aut, r.partition);
  return r;
}

Catalog enumerate_partitions(const RunConfig& cfg) {
  const auto start = Clock::now();
  const int d = cfg.dimension, n = cfg.orbits;
  check_dimension(d);
  if (n < 1) throw InvalidArgument("orbit count must be positive");
  if (cfg.jobs < 1) throw InvalidArgument("jobs must be positive");
  check_generator_images(d);
  const Presentation pres = make_presentation(d);
  const CrystGroup aut = full_automorphism_group(d);
  const int jobs = cfg.jobs;

  std::vector<std::vector<Found>> per_worker(static_cast<std::size_t>(jobs));
  std::vector<std::uint64_t> visited(static_cast<std::size_t>(jobs)), failures(static_cast<std::size_t>(jobs));
  LowIndexOptions options;
  options.node_budget = cfg.node_budget;
  options.jobs = jobs;
  LowIndexStats stats = for_each_low_index_subgroup(
      pres, cfg.index_bound(), options,
      [&](const CosetTable& table, const std::vector<std::uint8_t>& form, int worker) {
        auto w = static_cast<std::size_t>(worker);
        ++visited[w];
        auto sizes = node_orbit_sizes(d, table);
        if (static_cast<int>(sizes.size()) != n) return;
        CrystGroup h = subgroup_from_table(d, table);
        OrbitPartition p = orbit_partition(h);
        if (p.orbit_count != n) throw ConsistencyError("coset-table and affine orbit counts disagree");
        if (!proposition1_ok(aut, h, &sizes)) ++failures[w];
        per_worker[w].push_back({table.index(), form, std::move(h), canonical_certificate(p)});
      });

  Assembler assembler;
  std::uint64_t matching = 0;
  for (auto& v : per_worker)
    for (auto& f : v) {
      assembler.add(std::move(f));
      ++matching;
    }
  Catalog cat = assembler.finish(d, n, jobs);
  cat.provenance.presentation = pres.to_text();
  cat.provenance.method = "low-index";
  cat.provenance.index_bound = cfg.index_bound();
  cat.provenance.search_nodes = stats.nodes;
  for (auto v : visited) cat.provenance.subgroups_visited += v;
  for (auto v : failures) cat.provenance.proposition1_failures += v;
  cat.provenance.matching_subgroups = matching;
  cat.provenance.proposition1_checked = matching;
  if (cfg.record_timing)
    cat.provenance.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return cat;
}

TransitiveCensus enumerate_node_transitive(int d, const LowIndexOptions& options, CensusMethod method) {
  check_dimension(d);
  TransitiveCensus census;
  if (method == CensusMethod::kPointStabilizer) {
    for (auto& t : detail::transitive_by_point_stabilizer(d, options, census.search_nodes))
      census.groups.push_back({std::move(t.table), std::move(t.form), {}});
  } else {
    const Presentation pres = make_presentation(d);
    const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
    std::vector<std::vector<TransitiveGroup>> per_worker(jobs);
    LowIndexStats stats = for_each_low_index_subgroup(
        pres, hyperoctahedral_order(d), options,
        [&](const CosetTable& table, const std::vector<std::uint8_t>& form, int worker) {
          if (node_orbit_sizes(d, table).size() != 1) return;
          per_worker[static_cast<std::size_t>(worker)].push_back({table, form, {}});
        });
    census.search_nodes = stats.nodes;
    for (auto& v : per_worker)
      for (auto& g : v) census.groups.push_back(std::move(g));
  }
  std::sort(census.groups.begin(), census.groups.end(), [](const TransitiveGroup& a, const TransitiveGroup& b) {
    if (a.coset_table.index() != b.coset_table.index()) return a.coset_table.index() < b.coset_table.index();
    return a.canonical_table_form < b.canonical_table_form;
  });
  parallel_for(census.groups.size(), options.jobs, [&](std::size_t k) {
    census.groups[k].group = subgroup_from_table(d, census.groups[k].coset_table);
  });
  return census;
}

// ---------------------------------------------------------------------------
// Two-step enumeration

namespace {

struct CheckpointEntry {
  std::string certificate;
  std::vector<std::string> generators;
};

struct CheckpointLine {
  std::vector<CheckpointEntry> found;
  std::uint64_t nodes = 0, visited = 0, matching = 0, failures = 0;
};

std::map<int, CheckpointLine> read_checkpoint(const std::string& path, int d, int n) {
  std::map<int, CheckpointLine> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      break;  // torn final line from an interrupted run
    }
    if (j.value("dimension", d) != d || j.value("orbits", n) != n)
      throw InvalidArgument("checkpoint file belongs to a different run");
    CheckpointLine entry;
    for (const auto& f : j.at("found"))
      entry.found.push_back({f.at("certificate").get<std::string>(), f.at("generators").get<std::vector<std::string>>()});
    entry.nodes = j.value("search_nodes", std::uint64_t{0});
    entry.visited = j.value("subgroups_visited", std::uint64_t{0});
    entry.matching = j.value("matching_subgroups", std::uint64_t{0});
    entry.failures = j.value("proposition1_failures", std::uint64_t{0});
    done[j.at("transitive_index").get<int>()] = std::move(entry);
  }
  return done;
}

}  // namespace

Catalog two_step_enumerate(const TwoStepConfig& cfg) {
  const auto start = Clock::now();
  const int d = cfg.dimension, n = cfg.orbits;
  check_dimension(d);
  if (n < 1) throw InvalidArgument("orbit count must be positive");
  check_generator_images(d);
  const Presentation pres = make_presentation(d);
  const CrystGroup aut = full_automorphism_group(d);
  const auto maps = generator_maps(d);
  auto say = [&](const std::string& s) {
    if (cfg.progress) cfg.progress(s);
  };

  LowIndexOptions options;
  options.node_budget = cfg.node_budget;
  options.jobs = cfg.jobs;
  const bool maximal = cfg.second_step == SecondStep::kMaximalSubgroups ||
                       (cfg.second_step == SecondStep::kAuto && n == 2);
  if (maximal && n != 2) throw InvalidArgument("the maximal-subgroup step needs exactly two orbits");
  TransitiveCensus census = enumerate_node_transitive(d, options);
  say("node-transitive groups: " + std::to_string(census.groups.size()));

  std::map<int, CheckpointLine> done;
  if (!cfg.checkpoint_path.empty()) done = read_checkpoint(cfg.checkpoint_path, d, n);
  std::ofstream checkpoint;
  if (!cfg.checkpoint_path.empty()) {
    checkpoint.open(cfg.checkpoint_path, std::ios::app);
    if (!checkpoint) throw Error("cannot open checkpoint file " + cfg.checkpoint_path);
  }

  Assembler assembler;
  std::uint64_t nodes = census.search_nodes, visited = 0, failures = 0, matching = 0;
  for (std::size_t t = 0; t < census.groups.size(); ++t) {
    const TransitiveGroup& tg = census.groups[t];
    std::vector<Found> local;
    auto it = done.find(static_cast<int>(t));
    if (it != done.end()) {
      nodes += it->second.nodes;
      visited += it->second.visited;
      matching += it->second.matching;
      failures += it->second.failures;
      for (const auto& e : it->second.found) {
        std::vector<AffineMap> gens;
        for (const auto& g : e.generators) gens.push_back(AffineMap::parse(d, g));
        CrystGroup h = CrystGroup::generate(d, gens);
        Certificate c = canonical_certificate(orbit_partition(h));
        if (c.hex() != e.certificate) throw ConsistencyError("checkpoint certificate mismatch");
        local.push_back({h.index(), generator_key(h), std::move(h), std::move(c)});
      }
    } else {
      const int stab = hyperoctahedral_order(d) / tg.coset_table.index();
      std::vector<CrystGroup> candidates;
      std::uint64_t group_nodes = 0;
      if (maximal) {
        candidates = maximal_subgroups(tg.group, n * stab);
      } else {
        SubgroupPresentation rs = reidemeister_schreier(pres, tg.coset_table);
        std::vector<AffineMap> images;
        for (const auto& w : rs.generator_words) images.push_back(word_to_affine(w, maps));
        std::vector<SubgroupRecord> subs;
        std::mutex subs_mutex;
        LowIndexStats stats = for_each_low_index_subgroup(
            rs.presentation, n * stab, options, [&](const CosetTable& table, const std::vector<std::uint8_t>& form, int) {
              std::lock_guard lock(subs_mutex);
              subs.push_back({table, form});
            });
        group_nodes = stats.nodes;
        std::sort(subs.begin(), subs.end(), [](const SubgroupRecord& a, const SubgroupRecord& b) {
          if (a.coset_table.index() != b.coset_table.index()) return a.coset_table.index() < b.coset_table.index();
          return a.canonical_table_form < b.canonical_table_form;
        });
        for (const auto& sub : subs) {
          candidates.push_back(subgroup_from_table(images, sub.coset_table));
          if (candidates.back().index() != static_cast<std::int64_t>(tg.coset_table.index()) * sub.coset_table.index())
            throw ConsistencyError("subgroup index disagrees with its coset table");
        }
      }
      std::vector<std::optional<Found>> results(candidates.size());
      std::vector<char> failed(candidates.size(), 0);
      parallel_for(candidates.size(), cfg.jobs, [&](std::size_t k) {
        CrystGroup& h = candidates[k];
        OrbitPartition p = orbit_partition(h);
        if (p.orbit_count != n) return;
        failed[k] = !proposition1_ok(aut, h, nullptr) || !proposition1_check(tg.group, h).holds;
        results[k] = Found{h.index(), generator_key(h), std::move(h), canonical_certificate(p)};
      });
      const std::uint64_t visited_before = visited, matching_before = matching, failures_before = failures;
      nodes += group_nodes;
      visited += candidates.size();
      for (std::size_t k = 0; k < results.size(); ++k) {
        if (!results[k]) continue;
        ++matching;
        failures += static_cast<std::uint64_t>(failed[k]);
        local.push_back(std::move(*results[k]));
      }
      local = reduce_classes(std::move(local));
      if (checkpoint.is_open()) {
        nlohmann::json j;
        j["dimension"] = d;
        j["orbits"] = n;
        j["transitive_index"] = t;
        j["search_nodes"] = group_nodes;
        j["subgroups_visited"] = visited - visited_before;
        j["matching_subgroups"] = matching - matching_before;
        j["proposition1_failures"] = failures - failures_before;
        j["found"] = nlohmann::json::array();
        for (const auto& f : local) {
          std::vector<std::string> gens;
          for (const auto& g : f.group.generators()) gens.push_back(g.to_text());
          j["found"].push_back({{"certificate", f.cert.hex()}, {"generators", gens}});
        }
        checkpoint << j.dump() << '\n';
        checkpoint.flush();
      }
    }
    for (auto& f : local) assembler.add(std::move(f));
    if ((t + 1) % 100 == 0 || t + 1 == census.groups.size())
      say("transitive groups processed: " + std::to_string(t + 1) + "/" + std::to_string(census.groups.size()));
  }

  Catalog cat = assembler.finish(d, n, cfg.jobs);
  cat.provenance.presentation = pres.to_text();
  cat.provenance.method = maximal ? "two-step, maximal subgroups" : "two-step, low index";
  cat.provenance.index_bound = n * hyperoctahedral_order(d);
  cat.provenance.search_nodes = nodes;
  cat.provenance.subgroups_visited = visited;
  cat.provenance.matching_subgroups = matching;
  cat.provenance.proposition1_checked = matching;
  cat.provenance.proposition1_failures = failures;
  if (cfg.record_timing)
    cat.provenance.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return cat;
}

}  // namespace latcol
