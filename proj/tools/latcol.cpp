// Command-line driver: enumeration, censuses, verification and rendering.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "latcol/catalog.hpp"
#include "latcol/error.hpp"

using namespace latcol;

namespace {

constexpr int kExitMismatch = 2;
constexpr int kExitBudget = 3;

void log(const std::string& s) { std::cerr << "latcol: " << s << "\n"; }

int run_enumerate(int dim, int orbits, int max_index, int jobs, const std::string& out, bool no_timing) {
  RunConfig cfg;
  cfg.dimension = dim;
  cfg.orbits = orbits;
  cfg.max_index = max_index;
  cfg.jobs = jobs;
  cfg.node_budget = node_budget_from_env(cfg.node_budget);
  cfg.record_timing = !no_timing;
  Catalog cat = enumerate_partitions(cfg);
  write_catalog(cat, out, !no_timing);
  std::cout << cat.records.size() << " partition classes (d=" << dim << ", " << orbits << " orbits) written to "
            << out << "\n";
  if (cat.provenance.proposition1_failures) {
    log("Proposition 1 failed for " + std::to_string(cat.provenance.proposition1_failures) + " subgroups");
    return kExitMismatch;
  }
  return 0;
}

int run_transitive(int dim, bool long_run, int jobs, const std::string& out) {
  if (dim == 4 && !long_run) {
    log("the d=4 census is a long run; pass --long-run to start it");
    return 1;
  }
  LowIndexOptions options;
  options.jobs = jobs;
  options.node_budget = node_budget_from_env(options.node_budget);
  TransitiveCensus census = enumerate_node_transitive(dim, options);
  std::cout << census.groups.size() << " node-transitive groups (d=" << dim << ")\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error("cannot write " + out);
    for (const auto& g : census.groups) {
      f << "{\"index\":" << g.coset_table.index() << ",\"coset_table\":" << coset_table_to_json(g.coset_table)
        << ",\"generators\":[";
      bool first = true;
      for (const auto& m : g.group.generators()) {
        f << (first ? "" : ",") << "\"" << m.to_triplet() << "\"";
        first = false;
      }
      f << "]}\n";
    }
  }
  return 0;
}

int run_two_step(int dim, const std::string& checkpoint, int jobs, const std::string& out, bool no_timing) {
  TwoStepConfig cfg;
  cfg.dimension = dim;
  cfg.checkpoint_path = checkpoint;
  cfg.jobs = jobs;
  cfg.node_budget = node_budget_from_env(cfg.node_budget);
  cfg.record_timing = !no_timing;
  cfg.progress = log;
  Catalog cat = two_step_enumerate(cfg);
  std::size_t swap = 0, sup = 0;
  for (const auto& r : cat.records) {
    swap += r.swap_symmetric;
    sup += r.superposed;
  }
  std::cout << cat.records.size() << " two-orbit partition classes (d=" << dim << "), " << swap << " swap-symmetric, "
            << sup << " superposed\n";
  if (!out.empty()) write_catalog(cat, out, !no_timing);
  return 0;
}

int run_verify(const std::string& path) {
  Catalog cat = read_catalog(path);
  VerifyReport rep = verify_catalog(cat);
  for (const auto& m : rep.mismatches) std::cout << "MISMATCH " << m << "\n";
  std::cout << rep.records << " records checked, " << rep.mismatches.size() << " mismatches\n";
  return rep.ok() ? 0 : kExitMismatch;
}

int run_render(const std::string& path, const std::string& id, int window, const std::string& out) {
  Catalog cat = read_catalog(path);
  const PartitionRecord* r = find_record(cat, id);
  if (!r) {
    log("no unique record matches '" + id + "'");
    return 1;
  }
  std::ofstream f(out);
  if (!f) throw Error("cannot write " + out);
  f << render_svg(r->partition, window);
  return 0;
}

int run_report(const std::string& path) {
  std::cout << report_tables(read_catalog(path));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit partitions of the cubic lattices Z^1..Z^4"};
  app.require_subcommand(1);

  int dim = 2, orbits = 2, max_index = 0, jobs = 1, window = 12;
  bool long_run = false, no_timing = false;
  std::string out, checkpoint, catalog, id;

  auto* en = app.add_subcommand("enumerate", "enumerate orbit partitions with a given number of orbits");
  en->add_option("--dim", dim, "lattice dimension")->required()->check(CLI::Range(1, 4));
  en->add_option("--orbits", orbits, "number of orbits")->required()->check(CLI::PositiveNumber);
  en->add_option("--max-index", max_index, "subgroup index bound (default orbits * 2^d d!)");
  en->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  en->add_option("--out", out, "catalog JSON file")->required();
  en->add_flag("--no-timing", no_timing, "omit wall time from the catalog");

  auto* tr = app.add_subcommand("transitive", "count node-transitive subgroups");
  tr->add_option("--dim", dim, "lattice dimension")->required()->check(CLI::Range(1, 4));
  tr->add_flag("--long-run", long_run, "allow the d=4 census");
  tr->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  tr->add_option("--out", out, "write the groups as JSON lines");

  int two_dim = 4;
  auto* ts = app.add_subcommand("d4-two-orbit", "two-orbit partitions via node-transitive groups");
  ts->add_option("--checkpoint", checkpoint, "JSON-lines progress file (resumable)")->required();
  ts->add_option("--dim", two_dim, "lattice dimension (default 4)")->check(CLI::Range(1, 4));
  ts->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  ts->add_option("--out", out, "catalog JSON file");
  ts->add_flag("--no-timing", no_timing, "omit wall time from the catalog");

  auto* ve = app.add_subcommand("verify", "re-check every record of a catalog");
  ve->add_option("catalog", catalog, "catalog JSON file")->required();

  auto* re = app.add_subcommand("render", "draw a d=2 partition as SVG");
  re->add_option("--catalog", catalog, "catalog JSON file")->required();
  re->add_option("--id", id, "certificate hex, unique prefix, or 1-based record number")->required();
  re->add_option("--window", window, "cells per side")->check(CLI::Range(1, 1000));
  re->add_option("--out", out, "SVG file")->required();

  auto* rp = app.add_subcommand("report", "print the catalog as a table");
  rp->add_option("--catalog", catalog, "catalog JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*en) return run_enumerate(dim, orbits, max_index, jobs, out, no_timing);
    if (*tr) return run_transitive(dim, long_run, jobs, out);
    if (*ts) return run_two_step(two_dim, checkpoint, jobs, out, no_timing);
    if (*ve) return run_verify(catalog);
    if (*re) return run_render(catalog, id, window, out);
    if (*rp) return run_report(catalog);
  } catch (const BudgetExceeded& e) {
    log(std::string("search budget exhausted in stage ") + e.stage() + ": " + e.what());
    return kExitBudget;
  } catch (const std::exception& e) {
    log(e.what());
    return 1;
  }
  return 0;
}
