#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "rotkit/rational.hpp"

namespace rotkit {

// Reduced words in <a, b | a^2 = b^3 = 1>, the free product Z2 * Z3.
// Token alphabet: 'a', 'b', 'B' where B = b^2 = b^{-1}. A syllable is one
// token; reduced words alternate a-syllables and b-syllables.
struct Syllable {
  bool is_a;
  int exp;  // 1 for a; 1 or 2 for b

  friend bool operator==(const Syllable&, const Syllable&) = default;

  // token order a < b < B
  int key() const { return is_a ? 0 : exp; }
  char token() const { return is_a ? 'a' : (exp == 1 ? 'b' : 'B'); }
};

class Word {
 public:
  Word() = default;

  static Word identity() { return Word(); }
  static Word a() { return Word({{true, 1}}); }
  static Word b() { return Word({{false, 1}}); }
  static Word B() { return Word({{false, 2}}); }

  static Word parse(std::string_view tokens) {
    Word w;
    for (char c : tokens) {
      switch (c) {
        case 'a':
          w.push(Syllable{true, 1});
          break;
        case 'b':
          w.push(Syllable{false, 1});
          break;
        case 'B':
          w.push(Syllable{false, 2});
          break;
        default:
          throw MalformedError(std::string("bad word token: '") + c + "'");
      }
    }
    return w;
  }

  std::string str() const {
    std::string s;
    s.reserve(syl_.size());
    for (const Syllable& x : syl_) s += x.token();
    return s;
  }

  const std::vector<Syllable>& syllables() const { return syl_; }
  size_t size() const { return syl_.size(); }
  bool is_identity() const { return syl_.empty(); }

  Word inverse() const {
    Word w;
    w.syl_.reserve(syl_.size());
    for (auto it = syl_.rbegin(); it != syl_.rend(); ++it)
      w.syl_.push_back(it->is_a ? *it : Syllable{false, 3 - it->exp});
    return w;
  }

  friend Word operator*(const Word& u, const Word& v) {
    Word w = u;
    for (const Syllable& s : v.syl_) w.push(s);
    return w;
  }

  Word pow(long n) const {
    Word base = n < 0 ? inverse() : *this;
    long m = n < 0 ? -n : n;
    Word w;
    for (long i = 0; i < m; ++i) w = w * base;
    return w;
  }

  friend bool operator==(const Word&, const Word&) = default;

  friend std::strong_ordering operator<=>(const Word& u, const Word& v) {
    if (u.syl_.size() != v.syl_.size()) return u.syl_.size() <=> v.syl_.size();
    for (size_t i = 0; i < u.syl_.size(); ++i)
      if (u.syl_[i].key() != v.syl_[i].key()) return u.syl_[i].key() <=> v.syl_[i].key();
    return std::strong_ordering::equal;
  }

 private:
  explicit Word(std::vector<Syllable> s) : syl_(std::move(s)) {}

  void push(const Syllable& s) {
    if (syl_.empty() || syl_.back().is_a != s.is_a) {
      syl_.push_back(s);
      return;
    }
    if (s.is_a) {
      syl_.pop_back();
      return;
    }
    int e = (syl_.back().exp + s.exp) % 3;
    syl_.pop_back();
    if (e != 0) syl_.push_back(Syllable{false, e});
  }

  std::vector<Syllable> syl_;
};

struct ConjClass {
  enum class Kind { Identity, PowerOfAlpha, PowerOfBeta, Hyperbolic };

  Kind kind = Kind::Identity;
  int beta_exp = 0;  // for PowerOfBeta: 1 or 2
  Word canonical;    // cyclically reduced representative, lex-least rotation

  friend bool operator==(const ConjClass&, const ConjClass&) = default;

  std::string kind_name() const {
    switch (kind) {
      case Kind::Identity:
        return "Identity";
      case Kind::PowerOfAlpha:
        return "PowerOfAlpha";
      case Kind::PowerOfBeta:
        return "PowerOfBeta";
      case Kind::Hyperbolic:
        return "Hyperbolic";
    }
    return {};
  }
};

inline ConjClass classify_conjugacy(const Word& w) {
  std::vector<Syllable> s = w.syllables();
  // conjugate by the last syllable while the ends share a type
  while (s.size() >= 2 && s.front().is_a == s.back().is_a) {
    if (s.front().is_a) {
      s.erase(s.begin());
      s.pop_back();
    } else {
      int e = (s.back().exp + s.front().exp) % 3;
      s.pop_back();
      if (e == 0)
        s.erase(s.begin());
      else
        s.front().exp = e;
    }
  }
  ConjClass c;
  if (s.empty()) {
    c.kind = ConjClass::Kind::Identity;
    return c;
  }
  if (s.size() == 1) {
    if (s[0].is_a) {
      c.kind = ConjClass::Kind::PowerOfAlpha;
      c.canonical = Word::a();
    } else {
      c.kind = ConjClass::Kind::PowerOfBeta;
      c.beta_exp = s[0].exp;
      c.canonical = s[0].exp == 1 ? Word::b() : Word::B();
    }
    return c;
  }
  c.kind = ConjClass::Kind::Hyperbolic;
  size_t n = s.size();
  size_t best = 0;
  for (size_t r = 1; r < n; ++r) {
    for (size_t i = 0; i < n; ++i) {
      int kr = s[(r + i) % n].key(), kb = s[(best + i) % n].key();
      if (kr != kb) {
        if (kr < kb) best = r;
        break;
      }
    }
  }
  std::string tok;
  for (size_t i = 0; i < n; ++i) tok += s[(best + i) % n].token();
  c.canonical = Word::parse(tok);
  return c;
}

// nontrivial reduced words with at most max_syllables syllables, ordered by
// syllable count then lexicographically (a < b < B)
inline std::vector<Word> enumerate_words(int max_syllables) {
  if (max_syllables < 1) throw MalformedError("enumerate_words: max_syllables < 1");
  std::vector<Word> out;
  std::string cur;
  auto rec = [&](auto&& self, int remaining, char prev_type) -> void {
    if (remaining == 0) return;
    static constexpr const char* choices[2] = {"bB", "a"};
    for (const char* p = prev_type == 'a' ? choices[0] : (prev_type == 'b' ? choices[1] : "abB");
         *p; ++p) {
      cur.push_back(*p);
      out.push_back(Word::parse(cur));
      self(self, remaining - 1, *p == 'a' ? 'a' : 'b');
      cur.pop_back();
    }
  };
  // depth-first emission groups words by prefix, not length; sort afterwards
  rec(rec, max_syllables, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rotkit
