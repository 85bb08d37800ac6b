#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

#include "latcol/catalog.hpp"
#include "latcol/error.hpp"

namespace latcol {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "latcol-catalog";
constexpr int kFormatVersion = 1;

json lattice_json(const IntegerLattice& l) {
  json rows = json::array();
  for (int i = 0; i < l.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < l.dim(); ++j) row.push_back(l.row(i)[static_cast<std::size_t>(j)]);
    rows.push_back(row);
  }
  return rows;
}

IntegerLattice lattice_from(int d, const json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) throw InvalidArgument("lattice must have d rows");
  std::vector<Vec> rows;
  for (const auto& r : j) {
    if (!r.is_array() || static_cast<int>(r.size()) != d) throw InvalidArgument("lattice row must have d entries");
    Vec v{};
    for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k)].get<std::int64_t>();
    rows.push_back(v);
  }
  IntegerLattice l = IntegerLattice::hnf(d, rows);
  for (int i = 0; i < d; ++i)
    if (l.row(i) != rows[static_cast<std::size_t>(i)]) throw InvalidArgument("lattice rows are not in Hermite normal form");
  return l;
}

json partition_json(const OrbitPartition& p) {
  return {{"lattice", lattice_json(p.lattice)},
          {"orbit_count", p.orbit_count},
          {"colors", p.colors},
          {"orbit_sizes", p.orbit_sizes()}};
}

OrbitPartition partition_from(int d, const json& j) {
  OrbitPartition p;
  p.lattice = lattice_from(d, j.at("lattice"));
  p.orbit_count = j.at("orbit_count").get<int>();
  p.colors = j.at("colors").get<std::vector<int>>();
  if (static_cast<std::int64_t>(p.colors.size()) != p.lattice.index())
    throw InvalidArgument("colour array length differs from the lattice index");
  for (int c : p.colors)
    if (c < 0 || c >= p.orbit_count) throw InvalidArgument("colour out of range");
  return p;
}

json group_json(const CrystGroup& g) {
  json gens = json::array();
  for (const auto& m : g.generators()) gens.push_back(m.to_text());
  return {{"translations", lattice_json(g.translations())},
          {"point_group_order", g.point_group_order()},
          {"index", g.index()},
          {"generators", gens}};
}

CrystGroup group_from(int d, const json& j) {
  std::vector<AffineMap> gens;
  for (const auto& t : j.at("generators")) gens.push_back(AffineMap::parse(d, t.get<std::string>()));
  CrystGroup g = CrystGroup::generate(d, gens);
  if (g.translations() != lattice_from(d, j.at("translations")) ||
      g.point_group_order() != j.at("point_group_order").get<int>())
    throw InvalidArgument("group summary does not match its generators");
  return g;
}

json signature_json(const NeighbourhoodSignature& s) {
  return {{"radius", s.radius}, {"counts", s.counts}, {"stars", s.stars}};
}

NeighbourhoodSignature signature_from(const json& j) {
  NeighbourhoodSignature s;
  s.radius = j.at("radius").get<int>();
  s.counts = j.at("counts").get<std::vector<std::vector<int>>>();
  s.stars = j.at("stars").get<std::vector<std::vector<int>>>();
  return s;
}

json fingerprint_json(const GroupFingerprint& f) {
  json orders = json::object();
  for (auto [k, v] : f.element_orders) orders[std::to_string(k)] = v;
  return {{"order", f.order},
          {"abelian_invariants", f.abelian_invariants},
          {"element_orders", orders},
          {"center_order", f.center_order}};
}

GroupFingerprint fingerprint_from(const json& j) {
  GroupFingerprint f;
  f.order = j.at("order").get<std::int64_t>();
  f.abelian_invariants = j.at("abelian_invariants").get<std::vector<std::int64_t>>();
  for (const auto& [k, v] : j.at("element_orders").items()) f.element_orders[std::stoi(k)] = v.get<int>();
  f.center_order = j.at("center_order").get<std::int64_t>();
  return f;
}

std::vector<std::uint8_t> from_hex(const std::string& s) {
  if (s.size() % 2) throw InvalidArgument("odd-length hex string");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < s.size(); i += 2) out.push_back(static_cast<std::uint8_t>(std::stoi(s.substr(i, 2), nullptr, 16)));
  return out;
}

json record_json(const PartitionRecord& r) {
  json fps = json::array();
  for (const auto& f : r.stabilizer_fingerprints) fps.push_back(fingerprint_json(f));
  return {{"certificate", r.certificate.hex()},
          {"partition", partition_json(r.partition)},
          {"generating_subgroup", group_json(r.generating_subgroup)},
          {"aut", group_json(r.aut)},
          {"i_t", r.index.i_t},
          {"i_k", r.index.i_k},
          {"flags",
           {{"proper_colouring", r.proper_colouring},
            {"swap_symmetric", r.swap_symmetric},
            {"superposed", r.superposed}}},
          {"colour_permutations", r.colour_permutations},
          {"signatures", {{"radius1", signature_json(r.radius1)}, {"radius2", signature_json(r.radius2)}}},
          {"stabilizer_fingerprints", fps}};
}

PartitionRecord record_from(int d, const json& j) {
  PartitionRecord r;
  r.certificate.bytes = from_hex(j.at("certificate").get<std::string>());
  r.partition = partition_from(d, j.at("partition"));
  r.certificate.canonical = r.partition;
  r.generating_subgroup = group_from(d, j.at("generating_subgroup"));
  r.subgroup_index = r.generating_subgroup.index();
  r.aut = group_from(d, j.at("aut"));
  r.index.i_t = j.at("i_t").get<std::int64_t>();
  r.index.i_k = j.at("i_k").get<std::int64_t>();
  const auto& flags = j.at("flags");
  r.proper_colouring = flags.at("proper_colouring").get<bool>();
  r.swap_symmetric = flags.at("swap_symmetric").get<bool>();
  r.superposed = flags.at("superposed").get<bool>();
  r.colour_permutations = j.at("colour_permutations").get<int>();
  r.radius1 = signature_from(j.at("signatures").at("radius1"));
  r.radius2 = signature_from(j.at("signatures").at("radius2"));
  for (const auto& f : j.at("stabilizer_fingerprints")) r.stabilizer_fingerprints.push_back(fingerprint_from(f));
  return r;
}

}  // namespace

std::string catalog_to_json(const Catalog& catalog, bool include_timing) {
  const Provenance& pv = catalog.provenance;
  json prov = {{"tool_version", pv.tool_version},
               {"presentation", pv.presentation},
               {"method", pv.method},
               {"index_bound", pv.index_bound},
               {"search_nodes", pv.search_nodes},
               {"subgroups_visited", pv.subgroups_visited},
               {"matching_subgroups", pv.matching_subgroups},
               {"proposition1_checked", pv.proposition1_checked},
               {"proposition1_failures", pv.proposition1_failures}};
  if (include_timing && pv.wall_time_seconds) prov["wall_time_seconds"] = *pv.wall_time_seconds;
  json records = json::array();
  for (const auto& r : catalog.records) records.push_back(record_json(r));
  json j = {{"format", kFormat},
            {"format_version", kFormatVersion},
            {"dimension", catalog.dimension},
            {"orbit_count", catalog.orbit_count},
            {"record_count", catalog.records.size()},
            {"provenance", prov},
            {"records", records}};
  return j.dump(1) + "\n";
}

Catalog catalog_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("catalog is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) throw InvalidArgument("not a latcol catalog");
    if (j.at("format_version").get<int>() != kFormatVersion) throw InvalidArgument("unsupported catalog version");
    Catalog c;
    c.dimension = j.at("dimension").get<int>();
    if (c.dimension < 1 || c.dimension > kMaxDim) throw InvalidArgument("catalog dimension out of range");
    c.orbit_count = j.at("orbit_count").get<int>();
    const auto& pv = j.at("provenance");
    c.provenance.tool_version = pv.at("tool_version").get<std::string>();
    c.provenance.presentation = pv.at("presentation").get<std::string>();
    c.provenance.method = pv.at("method").get<std::string>();
    c.provenance.index_bound = pv.at("index_bound").get<int>();
    c.provenance.search_nodes = pv.at("search_nodes").get<std::uint64_t>();
    c.provenance.subgroups_visited = pv.at("subgroups_visited").get<std::uint64_t>();
    c.provenance.matching_subgroups = pv.at("matching_subgroups").get<std::uint64_t>();
    c.provenance.proposition1_checked = pv.at("proposition1_checked").get<std::uint64_t>();
    c.provenance.proposition1_failures = pv.at("proposition1_failures").get<std::uint64_t>();
    if (pv.contains("wall_time_seconds")) c.provenance.wall_time_seconds = pv["wall_time_seconds"].get<double>();
    for (const auto& r : j.at("records")) c.records.push_back(record_from(c.dimension, r));
    if (j.at("record_count").get<std::size_t>() != c.records.size()) throw InvalidArgument("record_count mismatch");
    return c;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("catalog schema violation: ") + e.what());
  }
}

void write_catalog(const Catalog& catalog, const std::string& path, bool include_timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << catalog_to_json(catalog, include_timing);
  if (!out) throw Error("write failed for " + path);
}

Catalog read_catalog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return catalog_from_json(ss.str());
}

std::string coset_table_to_json(const CosetTable& table) {
  json perms = json::array();
  for (const auto& p : table.action()) {
    json row = json::array();
    for (int c : p) row.push_back(c + 1);
    perms.push_back(row);
  }
  return json{{"index", table.index()}, {"permutations", perms}}.dump();
}

std::string orbit_partition_to_json(const OrbitPartition& p) { return partition_json(p).dump(); }

const PartitionRecord* find_record(const Catalog& catalog, const std::string& id) {
  if (!id.empty() && std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
      id.size() < 6) {
    std::size_t k = std::stoul(id);
    if (k >= 1 && k <= catalog.records.size()) return &catalog.records[k - 1];
  }
  const PartitionRecord* hit = nullptr;
  for (const auto& r : catalog.records) {
    std::string h = r.certificate.hex();
    if (h == id) return &r;
    if (h.compare(0, id.size(), id) == 0) {
      if (hit) return nullptr;
      hit = &r;
    }
  }
  return hit;
}

// ---------------------------------------------------------------------------
// Verification

VerifyReport verify_catalog(const Catalog& catalog) {
  VerifyReport rep;
  const int d = catalog.dimension;
  const CrystGroup full = full_automorphism_group(d);
  rep.records = static_cast<int>(catalog.records.size());
  for (std::size_t k = 0; k < catalog.records.size(); ++k) {
    const PartitionRecord& r = catalog.records[k];
    const std::string tag = "record " + std::to_string(k + 1) + " (" + r.certificate.hex().substr(0, 16) + "...): ";
    auto fail = [&](const std::string& what) { rep.mismatches.push_back(tag + what); };
    if (k > 0 && !(catalog.records[k - 1].certificate.bytes < r.certificate.bytes))
      fail("records not strictly sorted by certificate");
    if (r.partition.orbit_count != catalog.orbit_count) fail("orbit count differs from the catalog");
    try {
      Certificate c = canonical_certificate(r.partition);
      if (c.bytes != r.certificate.bytes) fail("certificate mismatch");
      if (!full.contains(r.generating_subgroup)) fail("generating subgroup outside Aut(Z^d)");
      CrystGroup recomputed = aut_partition(r.generating_subgroup, r.partition);
      if (!(recomputed == r.aut)) fail("stored symmetry group differs from the recomputed one");
      if (!(aut_partition(r.aut, r.partition) == r.aut)) fail("symmetry group is not a fixed point");
      if (!r.aut.contains(r.generating_subgroup)) fail("symmetry group does not contain the generating subgroup");
      if (!proposition1_check(full, r.generating_subgroup).holds) fail("Proposition 1 fails for the generating subgroup");
      if (!proposition1_check(r.aut, r.generating_subgroup).holds) fail("Proposition 1 fails inside the symmetry group");
      auto idx = index_decomposition(r.aut);
      if (idx.i_t != r.index.i_t || idx.i_k != r.index.i_k) fail("index decomposition mismatch");
      if (idx.i_t * idx.i_k != r.aut.index()) fail("i_t * i_k differs from the index");
      if (is_proper_colouring(r.partition) != r.proper_colouring) fail("proper-colouring flag mismatch");
      auto perms = color_permutation_group(r.partition);
      if (static_cast<int>(perms.size()) != r.colour_permutations) fail("colour permutation count mismatch");
      if (is_transitive(perms, r.partition.orbit_count) != r.swap_symmetric) fail("swap flag mismatch");
      if (is_superposed(r.partition) != r.superposed) fail("superposition flag mismatch");
      auto s1 = neighbourhood_signature(r.partition, 1), s2 = neighbourhood_signature(r.partition, 2);
      if (s1.counts != r.radius1.counts || s1.stars != r.radius1.stars) fail("radius-1 signature mismatch");
      if (s2.counts != r.radius2.counts || s2.stars != r.radius2.stars) fail("radius-2 signature mismatch");
      if (stabilizer_fingerprints(r.aut, r.partition) != r.stabilizer_fingerprints) fail("stabilizer fingerprint mismatch");
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rendering and reports

std::string render_svg(const OrbitPartition& p, int window) {
  if (p.dim() != 2) throw InvalidArgument("SVG rendering needs a 2-dimensional partition");
  if (window < 1 || window > 1000) throw InvalidArgument("window must be in 1..1000");
  static const char* palette[] = {"#1b1b1b", "#f2f2f2", "#d1495b", "#00798c", "#edae49",
                                  "#66a182", "#2e4057", "#8d96a3", "#7b2cbf", "#f77f00"};
  const int cell = 20;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << window * cell << "\" height=\"" << window * cell
      << "\" viewBox=\"0 0 " << window * cell << ' ' << window * cell << "\">\n";
  for (int y = 0; y < window; ++y)
    for (int x = 0; x < window; ++x) {
      int c = p.color_of(Vec{x, y, 0, 0});
      const char* fill = c < 10 ? palette[c] : "#999999";
      // y grows upwards in lattice coordinates
      out << "<rect x=\"" << x * cell << "\" y=\"" << (window - 1 - y) * cell << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << fill << "\" stroke=\"#888888\" stroke-width=\"0.5\" data-colour=\""
          << c << "\"/>\n";
    }
  out << "</svg>\n";
  return out.str();
}

std::string report_tables(const Catalog& catalog) {
  std::ostringstream out;
  out << "dimension " << catalog.dimension << ", " << catalog.orbit_count << " orbits, " << catalog.records.size()
      << " partitions\n";
  out << std::left << std::setw(4) << "No." << std::setw(18) << "certificate" << std::setw(10) << "i_t*i_k"
      << std::setw(16) << "class sizes" << std::setw(8) << "proper" << std::setw(6) << "swap" << std::setw(6)
      << "sup" << std::setw(14) << "stabilizers" << "r1-class\n";
  std::map<std::vector<std::vector<int>>, int> r1_class;
  for (const auto& r : catalog.records) r1_class.emplace(r.radius1.key(), 0);
  int next = 0;
  for (auto& [k, v] : r1_class) v = ++next;
  int no = 0;
  for (const auto& r : catalog.records) {
    std::string sizes, stabs;
    for (int s : r.partition.orbit_sizes()) sizes += (sizes.empty() ? "" : "/") + std::to_string(s);
    for (const auto& f : r.stabilizer_fingerprints) stabs += (stabs.empty() ? "" : "/") + std::to_string(f.order);
    out << std::left << std::setw(4) << ++no << std::setw(18) << r.certificate.hex().substr(0, 16) << std::setw(10)
        << (std::to_string(r.index.i_t) + "*" + std::to_string(r.index.i_k)) << std::setw(16) << sizes << std::setw(8)
        << (r.proper_colouring ? "yes" : "no") << std::setw(6) << (r.swap_symmetric ? "yes" : "no") << std::setw(6)
        << (r.superposed ? "yes" : "no") << std::setw(14) << stabs << r1_class.at(r.radius1.key()) << "\n";
  }
  return out.str();
}

}  // namespace latcol
