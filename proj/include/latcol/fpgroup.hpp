#pragma once

// Finitely presented groups: words, presentations, coset enumeration,
// low-index subgroups and Reidemeister-Schreier rewriting.

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace latcol {

// A word over the generators of a presentation. Letter +k stands for
// generator k-1, letter -k for its formal inverse. The empty word is the
// identity.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> l) : letters(std::move(l)) {}

  static Word gen(int g) { return Word({g + 1}); }
  static Word gen_inverse(int g) { return Word({-(g + 1)}); }

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }

  Word inverse() const;
  Word power(int k) const;
  Word operator*(const Word& other) const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;
};

inline int letter_generator(int letter) { return (letter > 0 ? letter : -letter) - 1; }

// Cancels adjacent x x^-1 pairs.
Word free_reduce(const Word& w);
// Free reduction followed by cancellation across the cyclic boundary.
Word cyclic_reduce(const Word& w);

class Presentation {
 public:
  Presentation() = default;
  // `names` is optional; when given it must have one character per
  // generator.
  Presentation(int generator_count, std::vector<Word> relators, std::string names = {});

  int generator_count() const { return generator_count_; }
  const std::vector<Word>& relators() const { return relators_; }
  const std::string& names() const { return names_; }
  std::string generator_name(int g) const;

  // True when some relator is g^2 (or g^-2).
  bool is_involution(int g) const { return involution_[static_cast<std::size_t>(g)] != 0; }

  // Text format: an optional "generators: a b c" header, then one relator per
  // line. Lowercase letters are generators, uppercase their inverses;
  // parenthesised groups and integer powers (including negative) are
  // accepted. Lines starting with '#' are comments.
  static Presentation parse(std::string_view text);
  std::string to_text() const;

  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;

 private:
  int generator_count_ = 0;
  std::vector<Word> relators_;
  std::string names_;
  std::vector<char> involution_;
};

// Presentation of Aut(Z^d) for d = 1..4. For d >= 2 these are the Coxeter-type
// presentations on reflections; d = 1 is <a, b | b^2, abab> with a the unit
// translation.
Presentation make_presentation(int d);

// Coset-table column layout: involutive generators own one column, the others
// two (g, then g^-1).
class ColumnLayout {
 public:
  explicit ColumnLayout(const Presentation& pres);

  int columns() const { return static_cast<int>(inverse_.size()); }
  int column(int letter) const;
  int inverse(int column) const { return inverse_[static_cast<std::size_t>(column)]; }
  int letter(int column) const { return letter_[static_cast<std::size_t>(column)]; }
  std::vector<int> columns_of(const Word& w) const;

 private:
  std::vector<int> forward_;   // per generator
  std::vector<int> backward_;  // per generator
  std::vector<int> inverse_;
  std::vector<int> letter_;
};

// A closed coset table: the permutation action of the parent group on the
// right cosets of a subgroup. Cosets are numbered from 0; coset 0 is the
// subgroup itself.
class CosetTable {
 public:
  CosetTable() = default;
  // action[g][c] is the coset c.g.
  CosetTable(std::vector<std::vector<int>> action, std::vector<Word> subgroup_words = {});

  int index() const { return index_; }
  int generator_count() const { return static_cast<int>(action_.size()); }
  const std::vector<std::vector<int>>& action() const { return action_; }
  const std::vector<Word>& subgroup_words() const { return subgroup_words_; }

  int act(int coset, int letter) const;
  int trace(int coset, const Word& w) const;

  // Every relator fixes every coset and every subgroup word fixes coset 0.
  bool is_consistent(const Presentation& pres) const;

  friend bool operator==(const CosetTable& a, const CosetTable& b) {
    return a.action_ == b.action_;
  }

 private:
  int index_ = 0;
  std::vector<std::vector<int>> action_;
  std::vector<std::vector<int>> inverse_action_;
  std::vector<Word> subgroup_words_;
};

// Words rep(c) with 0.rep(c) = c along the breadth-first spanning tree that
// standardization uses.
std::vector<Word> coset_representatives(const Presentation& pres, const CosetTable& table);

// Schreier generators rep(c) x rep(c.x)^-1 for the non-tree edges, one per
// inverse pair. They generate the stabilizer of coset 0.
std::vector<Word> schreier_generators(const Presentation& pres, const CosetTable& table);

// Renumbers cosets in breadth-first order from `base` (rows scanned in order,
// columns in layout order).
CosetTable standardize(const Presentation& pres, const CosetTable& table, int base = 0);

// Byte encoding of a standardized table (index, then entries in scan order,
// all 16-bit big-endian).
std::vector<std::uint8_t> encode_table(const Presentation& pres, const CosetTable& table);
// Inverse of encode_table.
CosetTable decode_table(const Presentation& pres, const std::vector<std::uint8_t>& bytes);

// Minimum of encode_table(standardize(table, b)) over all base cosets b.
// Equal iff the two subgroups are conjugate.
std::vector<std::uint8_t> canonical_table_form(const Presentation& pres, const CosetTable& table);

enum class EnumerationStrategy { kHlt, kFelsch };

// Todd-Coxeter enumeration of the cosets of <subgroup_words>. Throws
// EnumerationOverflow if more than max_cosets live cosets would be needed.
// The result is standardized from coset 0.
CosetTable coset_enumerate(const Presentation& pres, const std::vector<Word>& subgroup_words,
                           int max_cosets,
                           EnumerationStrategy strategy = EnumerationStrategy::kHlt);

struct SubgroupRecord {
  CosetTable coset_table;
  std::vector<std::uint8_t> canonical_table_form;
};

struct LowIndexOptions {
  // Search-tree nodes allowed before BudgetExceeded is thrown.
  std::uint64_t node_budget = 20'000'000'000ULL;
  int jobs = 1;
};

struct LowIndexStats {
  std::uint64_t nodes = 0;
  std::uint64_t found = 0;
};

// Called once per conjugacy class with its canonical table and form. May be
// called concurrently from different workers; `worker` is in [0, jobs).
using LowIndexVisitor =
    std::function<void(const CosetTable& table, const std::vector<std::uint8_t>& form, int worker)>;

LowIndexStats for_each_low_index_subgroup(const Presentation& pres, int max_index,
                                          const LowIndexOptions& options,
                                          const LowIndexVisitor& visit);

// One record per conjugacy class of subgroups of index <= max_index, sorted
// by index, then canonical form.
std::vector<SubgroupRecord> low_index_subgroups(const Presentation& pres, int max_index,
                                                const LowIndexOptions& options = {});

struct SubgroupPresentation {
  Presentation presentation;
  // generator_words[k] expresses subgroup generator k in the parent.
  std::vector<Word> generator_words;
};

SubgroupPresentation reidemeister_schreier(const Presentation& pres, const CosetTable& table);

}  // namespace latcol
