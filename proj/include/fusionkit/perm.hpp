#pragma once

// Permutations on {0..degree-1} with cycle-notation text I/O.
// Text formats are 1-based; internal points are 0-based.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fusionkit/common.hpp"

namespace fusionkit {

using Point = std::uint16_t;

class Perm {
 public:
  Perm() = default;

  explicit Perm(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), Point{0});
  }

  explicit Perm(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point im : images_) {
      if (im >= images_.size() || seen[im])
        throw DomainError("image array is not a bijection");
      seen[im] = true;
    }
  }

  static Perm identity(std::size_t degree) { return Perm(degree); }

  std::size_t degree() const { return images_.size(); }

  Point operator[](Point pt) const { return images_[pt]; }

  const std::vector<Point>& images() const { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  // Smallest point moved; degree() if identity.
  Point smallest_moved() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return static_cast<Point>(i);
    return static_cast<Point>(images_.size());
  }

  Perm inverse() const {
    std::vector<Point> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
      inv[images_[i]] = static_cast<Point>(i);
    Perm r;
    r.images_ = std::move(inv);
    return r;
  }

  // Product applies the left factor first: (a*b)(x) = b(a(x)).
  friend Perm operator*(const Perm& a, const Perm& b) {
    if (a.degree() != b.degree())
      throw DomainError("composing permutations of unequal degree");
    std::vector<Point> im(a.degree());
    for (std::size_t i = 0; i < im.size(); ++i) im[i] = b.images_[a.images_[i]];
    Perm r;
    r.images_ = std::move(im);
    return r;
  }

  // Conjugate g^{-1} * this * g.
  Perm conjugated_by(const Perm& g) const {
    if (g.degree() != degree())
      throw DomainError("conjugating by permutation of unequal degree");
    std::vector<Point> im(degree());
    for (std::size_t i = 0; i < im.size(); ++i)
      im[g.images_[i]] = g.images_[images_[i]];
    Perm r;
    r.images_ = std::move(im);
    return r;
  }

  std::uint64_t order() const {
    std::uint64_t ord = 1;
    std::vector<bool> seen(degree(), false);
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      std::uint64_t len = 0;
      for (Point j = static_cast<Point>(i); !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      ord = std::lcm(ord, len);
    }
    return ord;
  }

  auto operator<=>(const Perm&) const = default;

 private:
  std::vector<Point> images_;
};

// Parses disjoint-cycle notation with 1-based points; "()" is the identity.
inline Perm perm_parse(const std::string& text, std::size_t degree) {
  std::vector<Point> images(degree);
  std::iota(images.begin(), images.end(), Point{0});
  std::vector<bool> used(degree, false);

  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip_ws();
  if (i == text.size()) throw ParseError("empty permutation");
  bool any_cycle = false;
  while (i < text.size()) {
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '(') throw ParseError("expected '(' in cycle notation");
    ++i;
    std::vector<Point> cycle;
    skip_ws();
    while (i < text.size() && text[i] != ')') {
      if (!isdigit(static_cast<unsigned char>(text[i])))
        throw ParseError("expected point number in cycle");
      std::size_t val = 0;
      while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) {
        val = val * 10 + static_cast<std::size_t>(text[i] - '0');
        ++i;
      }
      if (val == 0 || val > degree)
        throw ParseError("point " + std::to_string(val) + " out of range 1.." +
                         std::to_string(degree));
      Point pt = static_cast<Point>(val - 1);
      if (used[pt])
        throw ParseError("point " + std::to_string(val) + " repeated");
      used[pt] = true;
      cycle.push_back(pt);
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        skip_ws();
      }
    }
    if (i == text.size()) throw ParseError("unterminated cycle");
    ++i;  // ')'
    if (cycle.size() == 1) throw ParseError("cycle of length 1");
    for (std::size_t k = 0; k < cycle.size(); ++k)
      images[cycle[k]] = cycle[(k + 1) % cycle.size()];
    any_cycle = true;
    skip_ws();
  }
  if (!any_cycle) {
    // the whole text must have been "()"
  }
  return Perm(std::move(images));
}

// Prints disjoint cycles with 1-based points; identity prints as "()".
inline std::string perm_print(const Perm& g) {
  std::string out;
  std::vector<bool> seen(g.degree(), false);
  for (std::size_t i = 0; i < g.degree(); ++i) {
    if (seen[i] || g[static_cast<Point>(i)] == i) continue;
    out += '(';
    Point j = static_cast<Point>(i);
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out += ',';
      out += std::to_string(j + 1);
      first = false;
      j = g[j];
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

}  // namespace fusionkit
