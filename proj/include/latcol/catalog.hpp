#pragma once

// End-to-end enumeration of orbit partitions, catalog serialization,
// verification and rendering.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latcol/crystgeom.hpp"
#include "latcol/fpgroup.hpp"
#include "latcol/orbits.hpp"
#include "latcol/partitions.hpp"

namespace latcol {

inline constexpr const char* kToolVersion = "latcol 1.0.0";

struct RunConfig {
  int dimension = 2;
  int orbits = 2;
  int max_index = 0;  // 0: orbits * 2^d d!
  int jobs = 1;
  std::uint64_t node_budget = 20'000'000'000ULL;
  bool record_timing = true;

  int index_bound() const;
};

// Node budget from LATCOL_NODE_BUDGET, or `fallback`.
std::uint64_t node_budget_from_env(std::uint64_t fallback);

struct PartitionRecord {
  Certificate certificate;
  OrbitPartition partition;  // canonical frame, over the maximal lattice
  CrystGroup generating_subgroup;
  std::int64_t subgroup_index = 0;
  CrystGroup aut;
  IndexDecomposition index;
  bool proper_colouring = false;
  bool swap_symmetric = false;
  bool superposed = false;
  int colour_permutations = 0;
  NeighbourhoodSignature radius1;
  NeighbourhoodSignature radius2;
  std::vector<GroupFingerprint> stabilizer_fingerprints;
};

struct Provenance {
  std::string tool_version = kToolVersion;
  std::string presentation;
  std::string method;
  int index_bound = 0;
  std::uint64_t search_nodes = 0;
  std::uint64_t subgroups_visited = 0;
  std::uint64_t matching_subgroups = 0;
  std::uint64_t proposition1_checked = 0;
  std::uint64_t proposition1_failures = 0;
  std::optional<double> wall_time_seconds;
};

struct Catalog {
  int dimension = 0;
  int orbit_count = 0;
  std::vector<PartitionRecord> records;  // sorted by certificate bytes
  Provenance provenance;
};

// Builds the full record for one partition class from its generating group
// (already in the canonical frame of `cert`).
PartitionRecord make_record(const CrystGroup& generating, const Certificate& cert);

Catalog enumerate_partitions(const RunConfig& cfg);

struct TransitiveGroup {
  CosetTable coset_table;
  std::vector<std::uint8_t> canonical_table_form;
  CrystGroup group;
};

struct TransitiveCensus {
  std::vector<TransitiveGroup> groups;  // sorted by index, then form
  std::uint64_t search_nodes = 0;
};

enum class CensusMethod {
  kPointStabilizer,  // stabilizer classes in the point group, then the translation column
  kLowIndex,         // all subgroups of index <= 2^d d!, filtered
};

TransitiveCensus enumerate_node_transitive(int d, const LowIndexOptions& options = {},
                                           CensusMethod method = CensusMethod::kPointStabilizer);

enum class SecondStep {
  kAuto,              // maximal subgroups for two orbits, otherwise low index
  kMaximalSubgroups,  // two orbits only
  kLowIndex,          // on a Reidemeister-Schreier presentation
};

struct TwoStepConfig {
  int dimension = 4;
  int orbits = 2;
  SecondStep second_step = SecondStep::kAuto;
  int jobs = 1;
  std::uint64_t node_budget = 20'000'000'000ULL;
  std::string checkpoint_path;  // empty: no checkpoint
  bool record_timing = true;
  std::function<void(const std::string&)> progress;
};

// Candidates inside each node-transitive group G, of index <= orbits *
// |Stab_G(x)|: all subgroups from a Reidemeister-Schreier presentation of G,
// or, for two orbits, only the maximal subgroups (the automorphism group of
// a two-orbit partition is maximal in some node-transitive group).
Catalog two_step_enumerate(const TwoStepConfig& cfg);

struct VerifyReport {
  int records = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

VerifyReport verify_catalog(const Catalog& catalog);

std::string render_svg(const OrbitPartition& p, int window);
std::string report_tables(const Catalog& catalog);

// JSON (text) serialization. Timing is written only when present and
// include_timing is set.
std::string catalog_to_json(const Catalog& catalog, bool include_timing = true);
Catalog catalog_from_json(const std::string& text);
void write_catalog(const Catalog& catalog, const std::string& path, bool include_timing = true);
Catalog read_catalog(const std::string& path);

std::string coset_table_to_json(const CosetTable& table);
std::string orbit_partition_to_json(const OrbitPartition& p);

// Finds a record by full certificate hex, unique hex prefix, or 1-based
// position; nullptr if none.
const PartitionRecord* find_record(const Catalog& catalog, const std::string& id);

}  // namespace latcol
