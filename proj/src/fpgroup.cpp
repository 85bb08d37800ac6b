#include "latcol/fpgroup.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "latcol/error.hpp"

namespace latcol {

Word Word::inverse() const {
  Word r;
  r.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.letters.push_back(-*it);
  return r;
}

Word Word::power(int k) const {
  Word base = k < 0 ? inverse() : *this;
  Word r;
  for (int i = 0; i < (k < 0 ? -k : k); ++i)
    r.letters.insert(r.letters.end(), base.letters.begin(), base.letters.end());
  return r;
}

Word Word::operator*(const Word& other) const {
  Word r = *this;
  r.letters.insert(r.letters.end(), other.letters.begin(), other.letters.end());
  return r;
}

Word free_reduce(const Word& w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (int x : w.letters) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return Word(std::move(out));
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r.letters[lo] == -r.letters[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(std::vector<int>(r.letters.begin() + static_cast<std::ptrdiff_t>(lo),
                               r.letters.begin() + static_cast<std::ptrdiff_t>(hi)));
}

// ---------------------------------------------------------------------------
// Presentation

Presentation::Presentation(int generator_count, std::vector<Word> relators, std::string names)
    : generator_count_(generator_count), relators_(std::move(relators)), names_(std::move(names)) {
  if (generator_count_ < 1) throw InvalidArgument("presentation needs at least one generator");
  if (!names_.empty() && static_cast<int>(names_.size()) != generator_count_)
    throw InvalidArgument("generator names do not match generator count");
  involution_.assign(static_cast<std::size_t>(generator_count_), 0);
  for (const Word& r : relators_) {
    if (r.empty()) throw InvalidArgument("empty relator");
    for (int x : r.letters)
      if (x == 0 || letter_generator(x) >= generator_count_)
        throw InvalidArgument("relator letter out of range");
    if (r.size() == 2 && r.letters[0] == r.letters[1])
      involution_[static_cast<std::size_t>(letter_generator(r.letters[0]))] = 1;
  }
}

std::string Presentation::generator_name(int g) const {
  if (!names_.empty()) return std::string(1, names_[static_cast<std::size_t>(g)]);
  if (generator_count_ <= 26) return std::string(1, static_cast<char>('a' + g));
  return "g" + std::to_string(g + 1);
}

namespace {

class WordParser {
 public:
  WordParser(std::string_view text, const std::string& names, int generator_count)
      : text_(text), names_(names), generator_count_(generator_count) {}

  Word parse() {
    Word w = parse_sequence();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return w;
  }

  int max_generator() const { return max_generator_; }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '*'))
      ++pos_;
  }

  [[noreturn]] void fail(const char* msg) const {
    throw InvalidArgument(std::string("cannot parse word '") + std::string(text_) + "': " + msg);
  }

  int generator_of(char c) {
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    int g;
    if (!names_.empty()) {
      auto at = names_.find(lower);
      if (at == std::string::npos) fail("unknown generator");
      g = static_cast<int>(at);
    } else {
      g = lower - 'a';
    }
    if (generator_count_ > 0 && g >= generator_count_) fail("generator out of range");
    max_generator_ = std::max(max_generator_, g);
    return g;
  }

  Word parse_sequence() {
    Word w;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == ')') return w;
      Word f = parse_factor();
      w = w * f;
    }
  }

  Word parse_factor() {
    Word atom;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      atom = parse_sequence();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
      ++pos_;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      int g = generator_of(c);
      atom = std::isupper(static_cast<unsigned char>(c)) ? Word::gen_inverse(g) : Word::gen(g);
      ++pos_;
    } else if (c == '1') {
      ++pos_;
    } else {
      fail("unexpected character");
    }
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      skip_space();
      bool negative = false;
      if (pos_ < text_.size() && text_[pos_] == '-') {
        negative = true;
        ++pos_;
      }
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("missing exponent");
      int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
      atom = atom.power(negative ? -k : k);
    }
    return atom;
  }

  std::string_view text_;
  const std::string& names_;
  int generator_count_;
  std::size_t pos_ = 0;
  int max_generator_ = -1;
};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

Presentation Presentation::parse(std::string_view text) {
  std::string names;
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("generators", 0) == 0) {
      auto colon = t.find(':');
      if (colon == std::string::npos) throw InvalidArgument("malformed generators line");
      for (char c : t.substr(colon + 1)) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') continue;
        if (!std::islower(static_cast<unsigned char>(c)))
          throw InvalidArgument("generator names must be lowercase letters");
        if (names.find(c) != std::string::npos) throw InvalidArgument("duplicate generator name");
        names.push_back(c);
      }
      continue;
    }
    lines.push_back(t);
  }
  std::vector<Word> relators;
  int max_gen = -1;
  for (const auto& l : lines) {
    WordParser p(l, names, static_cast<int>(names.size()));
    Word w = p.parse();
    max_gen = std::max(max_gen, p.max_generator());
    if (w.empty()) throw InvalidArgument("empty relator: " + l);
    relators.push_back(std::move(w));
  }
  int count = names.empty() ? max_gen + 1 : static_cast<int>(names.size());
  return Presentation(count, std::move(relators), names);
}

Word Presentation::parse_word(std::string_view text) const {
  std::string names = names_;
  if (names.empty() && generator_count_ <= 26)
    for (int g = 0; g < generator_count_; ++g) names.push_back(static_cast<char>('a' + g));
  return WordParser(text, names, generator_count_).parse();
}

std::string Presentation::format_word(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  bool letters_only = generator_count_ <= 26;
  for (int x : w.letters) {
    std::string name = generator_name(letter_generator(x));
    if (letters_only) {
      out += x > 0 ? name
                   : std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(name[0]))));
    } else {
      if (!out.empty()) out += '*';
      out += name;
      if (x < 0) out += "^-1";
    }
  }
  return out;
}

std::string Presentation::to_text() const {
  if (generator_count_ > 26) throw InvalidArgument("text format supports at most 26 generators");
  std::string out = "generators:";
  for (int g = 0; g < generator_count_; ++g) out += " " + generator_name(g);
  out += '\n';
  for (const Word& r : relators_) out += format_word(r) + '\n';
  return out;
}

Presentation make_presentation(int d) {
  auto build = [](const char* names, std::initializer_list<const char*> rels) {
    Presentation shell(static_cast<int>(std::char_traits<char>::length(names)), {}, names);
    std::vector<Word> relators;
    for (const char* r : rels) relators.push_back(shell.parse_word(r));
    return Presentation(shell.generator_count(), std::move(relators), names);
  };
  switch (d) {
    case 1:
      return build("ab", {"b^2", "abab"});
    case 2:
      return build("abc", {"a^2", "b^2", "c^2", "(ba)^2", "(cb)^4", "(ca)^4"});
    case 3:
      return build("abcd", {"a^2", "b^2", "c^2", "d^2", "(ac)^2", "(bd)^2", "(ba)^2", "(cd)^3",
                            "(da)^4", "(cb)^4"});
    case 4:
      return build("abcdf", {"a^2", "b^2", "c^2", "d^2", "f^2", "(ba)^2", "(cd)^2", "(cb)^2",
                             "(af)^2", "(cf)^2", "(df)^3", "(da)^3", "(dfbf)^2", "(ca)^4",
                             "(db)^4", "(bf)^4"});
    default:
      throw InvalidArgument("dimension must be in 1..4, got " + std::to_string(d));
  }
}

// ---------------------------------------------------------------------------
// Column layout

ColumnLayout::ColumnLayout(const Presentation& pres) {
  int n = pres.generator_count();
  forward_.resize(static_cast<std::size_t>(n));
  backward_.resize(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) {
    int f = static_cast<int>(inverse_.size());
    forward_[static_cast<std::size_t>(g)] = f;
    if (pres.is_involution(g)) {
      backward_[static_cast<std::size_t>(g)] = f;
      inverse_.push_back(f);
      letter_.push_back(g + 1);
    } else {
      backward_[static_cast<std::size_t>(g)] = f + 1;
      inverse_.push_back(f + 1);
      inverse_.push_back(f);
      letter_.push_back(g + 1);
      letter_.push_back(-(g + 1));
    }
  }
}

int ColumnLayout::column(int letter) const {
  int g = letter_generator(letter);
  return letter > 0 ? forward_[static_cast<std::size_t>(g)] : backward_[static_cast<std::size_t>(g)];
}

std::vector<int> ColumnLayout::columns_of(const Word& w) const {
  std::vector<int> cols;
  cols.reserve(w.size());
  for (int x : w.letters) cols.push_back(column(x));
  return cols;
}

// ---------------------------------------------------------------------------
// Coset tables

CosetTable::CosetTable(std::vector<std::vector<int>> action, std::vector<Word> subgroup_words)
    : action_(std::move(action)), subgroup_words_(std::move(subgroup_words)) {
  if (action_.empty()) throw InvalidArgument("coset table needs at least one generator");
  index_ = static_cast<int>(action_[0].size());
  if (index_ < 1) throw InvalidArgument("coset table index must be positive");
  inverse_action_.resize(action_.size());
  for (std::size_t g = 0; g < action_.size(); ++g) {
    const auto& perm = action_[g];
    if (static_cast<int>(perm.size()) != index_) throw InvalidArgument("ragged coset table");
    auto& inv = inverse_action_[g];
    inv.assign(static_cast<std::size_t>(index_), -1);
    for (int c = 0; c < index_; ++c) {
      int d = perm[static_cast<std::size_t>(c)];
      if (d < 0 || d >= index_ || inv[static_cast<std::size_t>(d)] != -1)
        throw InvalidArgument("coset table action is not a permutation");
      inv[static_cast<std::size_t>(d)] = c;
    }
  }
}

int CosetTable::act(int coset, int letter) const {
  auto g = static_cast<std::size_t>(letter_generator(letter));
  return letter > 0 ? action_[g][static_cast<std::size_t>(coset)]
                    : inverse_action_[g][static_cast<std::size_t>(coset)];
}

int CosetTable::trace(int coset, const Word& w) const {
  for (int x : w.letters) coset = act(coset, x);
  return coset;
}

bool CosetTable::is_consistent(const Presentation& pres) const {
  if (generator_count() != pres.generator_count()) return false;
  for (const Word& r : pres.relators())
    for (int c = 0; c < index_; ++c)
      if (trace(c, r) != c) return false;
  for (const Word& w : subgroup_words_)
    if (trace(0, w) != 0) return false;
  return true;
}

namespace {

// Breadth-first order from `base`: returns (order, parent coset, parent column).
struct SpanningTree {
  std::vector<int> order;
  std::vector<int> position;
  std::vector<int> parent;
  std::vector<int> parent_column;
};

SpanningTree spanning_tree(const ColumnLayout& layout, const CosetTable& table, int base) {
  int n = table.index();
  SpanningTree t;
  t.position.assign(static_cast<std::size_t>(n), -1);
  t.parent.assign(static_cast<std::size_t>(n), -1);
  t.parent_column.assign(static_cast<std::size_t>(n), -1);
  t.order.push_back(base);
  t.position[static_cast<std::size_t>(base)] = 0;
  for (std::size_t i = 0; i < t.order.size(); ++i) {
    int c = t.order[i];
    for (int col = 0; col < layout.columns(); ++col) {
      int d = table.act(c, layout.letter(col));
      if (t.position[static_cast<std::size_t>(d)] < 0) {
        t.position[static_cast<std::size_t>(d)] = static_cast<int>(t.order.size());
        t.parent[static_cast<std::size_t>(d)] = c;
        t.parent_column[static_cast<std::size_t>(d)] = col;
        t.order.push_back(d);
      }
    }
  }
  if (static_cast<int>(t.order.size()) != n) throw InvalidArgument("coset table is not transitive");
  return t;
}

}  // namespace

std::vector<Word> coset_representatives(const Presentation& pres, const CosetTable& table) {
  ColumnLayout layout(pres);
  SpanningTree t = spanning_tree(layout, table, 0);
  std::vector<Word> reps(static_cast<std::size_t>(table.index()));
  for (int c : t.order) {
    if (c == 0) continue;
    auto p = static_cast<std::size_t>(t.parent[static_cast<std::size_t>(c)]);
    reps[static_cast<std::size_t>(c)] =
        reps[p] * Word({layout.letter(t.parent_column[static_cast<std::size_t>(c)])});
  }
  return reps;
}

std::vector<Word> schreier_generators(const Presentation& pres, const CosetTable& table) {
  ColumnLayout layout(pres);
  SpanningTree t = spanning_tree(layout, table, 0);
  std::vector<Word> reps = coset_representatives(pres, table);
  std::vector<Word> gens;
  for (int c = 0; c < table.index(); ++c) {
    for (int col = 0; col < layout.columns(); ++col) {
      int d = table.act(c, layout.letter(col));
      int icol = layout.inverse(col);
      bool tree = (t.parent[static_cast<std::size_t>(d)] == c &&
                   t.parent_column[static_cast<std::size_t>(d)] == col) ||
                  (t.parent[static_cast<std::size_t>(c)] == d &&
                   t.parent_column[static_cast<std::size_t>(c)] == icol);
      if (tree) continue;
      // one generator per inverse pair {(c, col), (d, icol)}
      if (std::pair(d, icol) < std::pair(c, col)) continue;
      Word w = free_reduce(reps[static_cast<std::size_t>(c)] * Word({layout.letter(col)}) *
                           reps[static_cast<std::size_t>(d)].inverse());
      if (!w.empty()) gens.push_back(std::move(w));
    }
  }
  return gens;
}

CosetTable standardize(const Presentation& pres, const CosetTable& table, int base) {
  ColumnLayout layout(pres);
  SpanningTree t = spanning_tree(layout, table, base);
  int n = table.index();
  std::vector<std::vector<int>> action(static_cast<std::size_t>(table.generator_count()),
                                       std::vector<int>(static_cast<std::size_t>(n)));
  for (int g = 0; g < table.generator_count(); ++g)
    for (int c = 0; c < n; ++c)
      action[static_cast<std::size_t>(g)][static_cast<std::size_t>(t.position[static_cast<std::size_t>(c)])] =
          t.position[static_cast<std::size_t>(table.act(c, g + 1))];
  std::vector<Word> words = table.subgroup_words();
  if (base != 0) words.clear();
  return CosetTable(std::move(action), std::move(words));
}

std::vector<std::uint8_t> encode_table(const Presentation& pres, const CosetTable& table) {
  ColumnLayout layout(pres);
  std::vector<std::uint8_t> out;
  auto put = [&out](int v) {
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
  };
  put(table.index());
  for (int c = 0; c < table.index(); ++c)
    for (int col = 0; col < layout.columns(); ++col) put(table.act(c, layout.letter(col)));
  return out;
}

CosetTable decode_table(const Presentation& pres, const std::vector<std::uint8_t>& bytes) {
  ColumnLayout layout(pres);
  auto get = [&bytes](std::size_t k) {
    if (2 * k + 1 >= bytes.size()) throw InvalidArgument("truncated table encoding");
    return (bytes[2 * k] << 8) | bytes[2 * k + 1];
  };
  const int n = get(0), cols = layout.columns();
  if (bytes.size() != 2 * (1 + static_cast<std::size_t>(n) * static_cast<std::size_t>(cols)))
    throw InvalidArgument("table encoding has the wrong length");
  std::vector<std::vector<int>> action(static_cast<std::size_t>(pres.generator_count()),
                                       std::vector<int>(static_cast<std::size_t>(n)));
  for (int c = 0; c < n; ++c)
    for (int g = 0; g < pres.generator_count(); ++g)
      action[static_cast<std::size_t>(g)][static_cast<std::size_t>(c)] =
          get(1 + static_cast<std::size_t>(c * cols + layout.column(g + 1)));
  return CosetTable(std::move(action));
}

std::vector<std::uint8_t> canonical_table_form(const Presentation& pres, const CosetTable& table) {
  // Breadth-first renumbering from each base, emitted row by row and
  // abandoned as soon as it exceeds the best sequence so far.
  ColumnLayout layout(pres);
  const int n = table.index(), cols = layout.columns();
  std::vector<int> best, cur(static_cast<std::size_t>(n) * static_cast<std::size_t>(cols));
  std::vector<int> position(static_cast<std::size_t>(n)), order(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) {
    std::fill(position.begin(), position.end(), -1);
    order[0] = b;
    position[static_cast<std::size_t>(b)] = 0;
    int next = 1;
    bool better = best.empty(), worse = false;
    for (int i = 0; i < n && !worse; ++i) {
      if (i >= next) throw InvalidArgument("coset table is not transitive");
      int c = order[static_cast<std::size_t>(i)];
      for (int col = 0; col < cols; ++col) {
        auto d = static_cast<std::size_t>(table.act(c, layout.letter(col)));
        if (position[d] < 0) {
          position[d] = next;
          order[static_cast<std::size_t>(next++)] = static_cast<int>(d);
        }
        auto k = static_cast<std::size_t>(i * cols + col);
        int v = position[d];
        if (!better) {
          if (v > best[k]) {
            worse = true;
            break;
          }
          better = v < best[k];
        }
        cur[k] = v;
      }
    }
    if (!worse && better) best = cur;
  }
  std::vector<std::uint8_t> out;
  auto put = [&out](int v) {
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
  };
  put(n);
  for (int v : best) put(v);
  return out;
}

}  // namespace latcol
