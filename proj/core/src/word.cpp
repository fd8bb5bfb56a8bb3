#include "quakebend/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "quakebend/errors.hpp"

namespace qb {

Word Word::generator(int index, int sign) {
  if (index < 0 || index > 126 || (sign != +1 && sign != -1))
    fail_config("bad generator letter");
  Word w;
  w.code_.push_back(static_cast<std::int8_t>(sign * (index + 1)));
  return w;
}

Word Word::from_code(std::vector<std::int8_t> code) {
  Word w;
  for (std::int8_t c : code) {
    if (c == 0) fail_config("zero letter code");
    if (!w.code_.empty() && w.code_.back() == -c)
      w.code_.pop_back();
    else
      w.code_.push_back(c);
  }
  return w;
}

int Word::max_generator() const {
  int m = -1;
  for (std::int8_t c : code_) m = std::max(m, std::abs(static_cast<int>(c)) - 1);
  return m;
}

Word Word::operator*(const Word& rhs) const {
  Word w = *this;
  for (std::int8_t c : rhs.code_) {
    if (!w.code_.empty() && w.code_.back() == -c)
      w.code_.pop_back();
    else
      w.code_.push_back(c);
  }
  return w;
}

Word Word::inverse() const {
  Word w;
  w.code_.reserve(code_.size());
  for (auto it = code_.rbegin(); it != code_.rend(); ++it)
    w.code_.push_back(static_cast<std::int8_t>(-*it));
  return w;
}

Word Word::pow(int k) const {
  Word base = k < 0 ? inverse() : *this;
  Word out;
  for (int i = 0; i < std::abs(k); ++i) out = out * base;
  return out;
}

Word::CyclicForm Word::cyclic_reduce() const {
  std::vector<std::int8_t> conj;
  std::vector<std::int8_t> core = code_;
  while (core.size() >= 2 && core.front() == -core.back()) {
    conj.push_back(core.front());
    core.erase(core.begin());
    core.pop_back();
  }
  CyclicForm out;
  out.core.code_ = std::move(core);
  out.conjugator.code_ = std::move(conj);
  return out;
}

std::strong_ordering Word::operator<=>(const Word& rhs) const {
  if (auto c = code_.size() <=> rhs.code_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(code_.begin(), code_.end(), rhs.code_.begin(),
                                                rhs.code_.end());
}

SurfacePresentation::SurfacePresentation(int genus) : genus_(genus) {
  if (genus < 2 || genus > 10) fail_config("genus must be between 2 and 10");
  std::vector<std::int8_t> rel;
  for (int i = 0; i < genus; ++i) {
    std::int8_t a = static_cast<std::int8_t>(2 * i + 1);
    std::int8_t b = static_cast<std::int8_t>(2 * i + 2);
    rel.push_back(a);
    rel.push_back(b);
    rel.push_back(static_cast<std::int8_t>(-a));
    rel.push_back(static_cast<std::int8_t>(-b));
  }
  relator_ = Word::from_code(rel);
}

std::string SurfacePresentation::generator_name(int index) const {
  if (index < 0 || index >= generator_count()) fail_config("generator index out of range");
  return (index % 2 == 0 ? "a" : "b") + std::to_string(index / 2 + 1);
}

int SurfacePresentation::generator_index(std::string_view name) const {
  if (name.size() < 2) fail_config("bad generator name: " + std::string(name));
  char fam = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
  int handle = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i])))
      fail_config("bad generator name: " + std::string(name));
    handle = handle * 10 + (name[i] - '0');
  }
  if ((fam != 'a' && fam != 'b') || handle < 1 || handle > genus_)
    fail_config("bad generator name: " + std::string(name));
  return 2 * (handle - 1) + (fam == 'b' ? 1 : 0);
}

Word SurfacePresentation::parse(std::string_view text) const {
  std::istringstream in{std::string(text)};
  std::vector<std::int8_t> code;
  std::string tok;
  while (in >> tok) {
    bool inv = std::isupper(static_cast<unsigned char>(tok[0])) != 0;
    int idx = generator_index(tok);
    code.push_back(static_cast<std::int8_t>(inv ? -(idx + 1) : (idx + 1)));
  }
  return Word::from_code(std::move(code));
}

std::string SurfacePresentation::format(const Word& w) const {
  if (!contains(w)) fail_config("word uses generators outside the presentation");
  std::string out;
  for (int i = 0; i < w.size(); ++i) {
    auto [idx, sign] = w.letter(i);
    std::string name = generator_name(idx);
    if (sign < 0) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    if (!out.empty()) out += ' ';
    out += name;
  }
  return out;
}

bool SurfacePresentation::contains(const Word& w) const {
  return w.max_generator() < generator_count();
}

}  // namespace qb
