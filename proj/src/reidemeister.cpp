#include <algorithm>
#include <set>
#include <vector>

#include "latcol/error.hpp"
#include "latcol/fpgroup.hpp"

namespace latcol {

namespace {

// Symbol letters: +k / -k for Schreier symbol k-1. A symbol is either live
// or replaced by a single letter (possibly the empty word, letter 0).
struct Substitution {
  std::vector<int> replacement;  // 0 = live, otherwise a letter; kTrivial for 1
  static constexpr int kTrivial = 0x7fffffff;

  // Resolves letter x through chains of replacements. Returns 0 for the
  // identity.
  int resolve(int x) const {
    for (;;) {
      int s = letter_generator(x);
      int r = replacement[static_cast<std::size_t>(s)];
      if (r == 0) return x;
      if (r == kTrivial) return 0;
      x = x > 0 ? r : -r;
    }
  }

  Word apply(const Word& w) const {
    std::vector<int> out;
    for (int x : w.letters)
      if (int y = resolve(x)) out.push_back(y);
    return cyclic_reduce(Word(std::move(out)));
  }
};

Word canonical_rotation(const Word& w) {
  Word best = w;
  for (const Word& v : {w, w.inverse()}) {
    Word r = v;
    for (std::size_t k = 0; k < v.size(); ++k) {
      std::rotate(r.letters.begin(), r.letters.begin() + 1, r.letters.end());
      best = std::min(best, r);
    }
  }
  return best;
}

}  // namespace

SubgroupPresentation reidemeister_schreier(const Presentation& pres, const CosetTable& table) {
  if (table.generator_count() != pres.generator_count())
    throw InvalidArgument("coset table does not match the presentation");
  const int n = table.index();
  const int gens = pres.generator_count();
  std::vector<Word> reps = coset_representatives(pres, table);

  // symbol[c][g] for the edge c --g--> c.g, -1 on spanning-tree edges.
  std::vector<std::vector<int>> symbol(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(gens), -1));
  std::vector<Word> words;
  for (int c = 0; c < n; ++c)
    for (int g = 0; g < gens; ++g) {
      int d = table.act(c, g + 1);
      Word w = free_reduce(reps[static_cast<std::size_t>(c)] * Word::gen(g) * reps[static_cast<std::size_t>(d)].inverse());
      if (w.empty()) continue;
      symbol[static_cast<std::size_t>(c)][static_cast<std::size_t>(g)] = static_cast<int>(words.size());
      words.push_back(std::move(w));
    }

  std::vector<Word> relators;
  for (int c = 0; c < n; ++c)
    for (const Word& r : pres.relators()) {
      std::vector<int> out;
      int cur = c;
      for (int x : r.letters) {
        int g = letter_generator(x);
        if (x > 0) {
          int s = symbol[static_cast<std::size_t>(cur)][static_cast<std::size_t>(g)];
          if (s >= 0) out.push_back(s + 1);
          cur = table.act(cur, x);
        } else {
          cur = table.act(cur, x);
          int s = symbol[static_cast<std::size_t>(cur)][static_cast<std::size_t>(g)];
          if (s >= 0) out.push_back(-(s + 1));
        }
      }
      if (cur != c) throw InvalidArgument("coset table is not closed under a relator");
      Word w = cyclic_reduce(Word(std::move(out)));
      if (!w.empty()) relators.push_back(std::move(w));
    }

  // Eliminate symbols killed by a relator of length 1, or equal to another
  // symbol's inverse by a relator of length 2.
  Substitution sub;
  sub.replacement.assign(words.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (Word& r : relators) {
      r = sub.apply(r);
      if (r.size() == 1) {
        sub.replacement[static_cast<std::size_t>(letter_generator(r.letters[0]))] = Substitution::kTrivial;
        changed = true;
      } else if (r.size() == 2 && letter_generator(r.letters[0]) != letter_generator(r.letters[1])) {
        // x y = 1: drop the larger symbol, x = y^-1.
        int x = r.letters[0], y = r.letters[1];
        if (letter_generator(x) < letter_generator(y)) std::swap(x, y);
        int s = letter_generator(x);
        sub.replacement[static_cast<std::size_t>(s)] = x > 0 ? -y : y;
        changed = true;
      } else {
        continue;
      }
      r = Word();
    }
  }

  std::vector<int> renumber(words.size(), -1);
  SubgroupPresentation out;
  for (std::size_t s = 0; s < words.size(); ++s)
    if (sub.replacement[s] == 0) {
      renumber[s] = static_cast<int>(out.generator_words.size());
      out.generator_words.push_back(words[s]);
    }
  std::set<Word> seen;
  std::vector<Word> final_relators;
  for (const Word& r : relators) {
    Word w = sub.apply(r);
    if (w.empty()) continue;
    for (int& x : w.letters) {
      int k = renumber[static_cast<std::size_t>(letter_generator(x))];
      x = x > 0 ? k + 1 : -(k + 1);
    }
    Word key = canonical_rotation(w);
    if (seen.insert(key).second) final_relators.push_back(std::move(key));
  }
  if (out.generator_words.empty()) {
    // trivial subgroup: one generator that is itself a relator
    out.generator_words.push_back(Word());
    final_relators = {Word::gen(0)};
  }
  out.presentation = Presentation(static_cast<int>(out.generator_words.size()), std::move(final_relators));
  return out;
}

}  // namespace latcol
