#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qb {

// Freely reduced word in the generators of a closed-surface group.
// Generators are indexed 0..2g-1 in the order a1, b1, a2, b2, ...
// A letter is stored as a nonzero int8: +(i+1) is generator i, -(i+1) its
// inverse.  Every constructor and operation keeps the word freely reduced.
class Word {
 public:
  Word() = default;

  static Word generator(int index, int sign = +1);
  // Builds from raw letter codes, applying free reduction.
  static Word from_code(std::vector<std::int8_t> code);

  int size() const { return static_cast<int>(code_.size()); }
  bool empty() const { return code_.empty(); }
  // (generator index, +1/-1) of the i-th letter.
  std::pair<int, int> letter(int i) const {
    std::int8_t c = code_[static_cast<std::size_t>(i)];
    return {std::abs(c) - 1, c > 0 ? +1 : -1};
  }
  const std::vector<std::int8_t>& code() const { return code_; }
  // Largest generator index used, -1 when empty.
  int max_generator() const;

  Word operator*(const Word& rhs) const;  // concatenation + free reduction
  Word inverse() const;
  Word pow(int k) const;
  // u * w * u^{-1}
  Word conjugated_by(const Word& u) const { return u * (*this) * u.inverse(); }
  // w = conjugator * core * conjugator^{-1} with core cyclically reduced.
  struct CyclicForm;
  CyclicForm cyclic_reduce() const;

  bool operator==(const Word&) const = default;
  // Length-then-lexicographic; used for canonical coset representatives.
  std::strong_ordering operator<=>(const Word& rhs) const;

 private:
  std::vector<std::int8_t> code_;
};

struct Word::CyclicForm {
  Word core;
  Word conjugator;
};

// Fixed presentation <a1,b1,...,ag,bg | prod_i [a_i,b_i]> of the genus-g
// closed orientable surface group.
class SurfacePresentation {
 public:
  SurfacePresentation() : SurfacePresentation(2) {}
  explicit SurfacePresentation(int genus);

  int genus() const { return genus_; }
  int generator_count() const { return 2 * genus_; }
  const Word& relator() const { return relator_; }

  std::string generator_name(int index) const;   // 0 -> "a1", 1 -> "b1", ...
  int generator_index(std::string_view name) const;  // throws on unknown name

  // Whitespace-separated tokens; uppercase token = inverse ("A1" = a1^{-1}).
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  bool contains(const Word& w) const;  // all letters within this presentation

 private:
  int genus_;
  Word relator_;
};

}  // namespace qb
