#pragma once

// Permutation groups with a stabilizer chain: order, membership and
// (below the element cap) a sorted full element table.
//
// Groups are immutable after construction and cheap to copy (shared state).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "fusionkit/common.hpp"
#include "fusionkit/perm.hpp"

namespace fusionkit {

namespace detail {

struct ChainLevel {
  Point base = 0;
  // point in orbit -> transversal element mapping base to that point
  std::map<Point, Perm> transversal;
};

struct PermGroupData {
  std::size_t degree = 0;
  std::vector<Perm> gens;  // non-identity, deduplicated, input order
  std::vector<Perm> strong_gens;
  std::vector<ChainLevel> levels;
  std::uint64_t order = 1;
  bool has_elements = false;
  std::vector<Perm> elements;  // sorted; present iff has_elements
};

}  // namespace detail

class PermGroup {
 public:
  PermGroup() : d_(trivial_data(0)) {}

  std::size_t degree() const { return d_->degree; }
  std::uint64_t order() const { return d_->order; }
  const std::vector<Perm>& generators() const { return d_->gens; }
  bool is_trivial() const { return d_->order == 1; }

  bool contains(const Perm& g) const {
    if (g.degree() != degree())
      throw DomainError("membership test across degrees");
    return sift(g).is_identity();
  }

  // All elements in lexicographic order on image arrays; identity first.
  const std::vector<Perm>& elements() const {
    if (!d_->has_elements)
      throw CapExceeded("element table unavailable: order " +
                        std::to_string(d_->order) + " exceeds element cap");
    return d_->elements;
  }

  bool has_element_table() const { return d_->has_elements; }

  // Read-only view of the stabilizer chain (base points and transversals).
  const std::vector<detail::ChainLevel>& chain() const { return d_->levels; }

  // Canonical key: concatenated image arrays of the sorted element table.
  // Above the element cap the sorted strong generators stand in.
  const std::vector<Point>& canonical_key() const {
    if (key_.empty() && order() > 1) build_key();
    return key_;
  }

  friend bool operator==(const PermGroup& a, const PermGroup& b) {
    if (a.d_ == b.d_) return true;
    if (a.degree() != b.degree() || a.order() != b.order()) return false;
    return a.canonical_key() == b.canonical_key();
  }

  bool is_abelian() const {
    const auto& gs = d_->gens;
    for (std::size_t i = 0; i < gs.size(); ++i)
      for (std::size_t j = i + 1; j < gs.size(); ++j)
        if (gs[i] * gs[j] != gs[j] * gs[i]) return false;
    return true;
  }

  bool is_pgroup(unsigned p) const {
    std::uint64_t n = order();
    while (n % p == 0) n /= p;
    return n == 1;
  }

  bool is_elementary_abelian(unsigned p) const {
    if (!is_pgroup(p) || !is_abelian()) return false;
    for (const Perm& g : d_->gens)
      if (g.order() > p) return false;
    return true;
  }

  // Subset test via membership of generators.
  bool contains_subgroup(const PermGroup& h) const {
    if (h.degree() != degree()) return false;
    if (h.order() > order() || order() % h.order() != 0) return false;
    for (const Perm& g : h.generators())
      if (!contains(g)) return false;
    return true;
  }

  static PermGroup from_generators(std::vector<Perm> gens, std::size_t degree,
                                   const Caps& caps = {});

 private:
  explicit PermGroup(std::shared_ptr<const detail::PermGroupData> d)
      : d_(std::move(d)) {}

  static std::shared_ptr<const detail::PermGroupData> trivial_data(
      std::size_t degree) {
    auto d = std::make_shared<detail::PermGroupData>();
    d->degree = degree;
    d->order = 1;
    d->has_elements = true;
    d->elements = {Perm(degree)};
    return d;
  }

  // Returns the residue after sifting through the chain.
  Perm sift(Perm g) const {
    for (const auto& lvl : d_->levels) {
      Point im = g[lvl.base];
      auto it = lvl.transversal.find(im);
      if (it == lvl.transversal.end()) return g;
      g = g * it->second.inverse();
    }
    return g;
  }

  void build_key() const {
    const std::vector<Perm>* src;
    std::vector<Perm> sorted_strong;
    if (d_->has_elements) {
      src = &d_->elements;
    } else {
      sorted_strong = d_->strong_gens;
      std::sort(sorted_strong.begin(), sorted_strong.end());
      sorted_strong.erase(
          std::unique(sorted_strong.begin(), sorted_strong.end()),
          sorted_strong.end());
      src = &sorted_strong;
    }
    key_.reserve(src->size() * degree());
    for (const Perm& g : *src)
      key_.insert(key_.end(), g.images().begin(), g.images().end());
  }

  std::shared_ptr<const detail::PermGroupData> d_;
  mutable std::vector<Point> key_;
};

inline PermGroup PermGroup::from_generators(std::vector<Perm> gens,
                                            std::size_t degree,
                                            const Caps& caps) {
  for (const Perm& g : gens)
    if (g.degree() != degree)
      throw DomainError("generator degree mismatch");

  auto d = std::make_shared<detail::PermGroupData>();
  d->degree = degree;
  std::set<Perm> seen;
  for (Perm& g : gens) {
    if (g.is_identity() || !seen.insert(g).second) continue;
    d->gens.push_back(std::move(g));
  }
  if (d->gens.empty()) return PermGroup(trivial_data(degree));

  // Deterministic Schreier-Sims. Strong generators live in one pool; level i
  // uses the ones fixing all earlier base points. Invariants: every strong
  // generator moves some base point, and transversals are rebuilt before each
  // verification sweep, so a failing sift always yields a residue that is not
  // yet a strong generator. The loop therefore strictly grows the strong set
  // and terminates exactly when every Schreier generator sifts to identity.
  auto& strong = d->strong_gens;
  auto& levels = d->levels;
  strong = d->gens;

  auto gens_at = [&](std::size_t level) {
    std::vector<Perm> out;
    for (const Perm& s : strong) {
      bool fixes = true;
      for (std::size_t j = 0; j < level; ++j)
        if (s[levels[j].base] != levels[j].base) {
          fixes = false;
          break;
        }
      if (fixes) out.push_back(s);
    }
    return out;
  };

  auto rebuild_transversal = [&](std::size_t level) {
    auto& lvl = levels[level];
    lvl.transversal.clear();
    lvl.transversal.emplace(lvl.base, Perm(degree));
    auto gs = gens_at(level);
    bool changed = true;
    while (changed) {
      changed = false;
      // std::map iteration keeps the sweep deterministic
      for (auto it = lvl.transversal.begin(); it != lvl.transversal.end();
           ++it) {
        for (const Perm& s : gs) {
          Point im = s[it->first];
          if (!lvl.transversal.count(im)) {
            lvl.transversal.emplace(im, it->second * s);
            changed = true;
          }
        }
      }
    }
  };

  auto ensure_bases = [&] {
    // append base points until every strong generator moves one
    for (bool grew = true; grew;) {
      grew = false;
      for (const Perm& s : strong) {
        bool fixes_all = true;
        for (const auto& lvl : levels)
          if (s[lvl.base] != lvl.base) {
            fixes_all = false;
            break;
          }
        if (fixes_all) {
          detail::ChainLevel lvl;
          lvl.base = s.smallest_moved();
          levels.push_back(std::move(lvl));
          grew = true;
        }
      }
    }
  };

  auto sift_through = [&](Perm g) {
    for (const auto& lvl : levels) {
      Point im = g[lvl.base];
      auto it = lvl.transversal.find(im);
      if (it == lvl.transversal.end()) return g;
      g = g * it->second.inverse();
    }
    return g;
  };

  for (;;) {
    ensure_bases();
    for (std::size_t li = 0; li < levels.size(); ++li) rebuild_transversal(li);

    Perm missing;
    bool found = false;
    for (std::size_t li = 0; li < levels.size() && !found; ++li) {
      auto gs = gens_at(li);
      for (const auto& [pt, t] : levels[li].transversal) {
        for (const Perm& s : gs) {
          Perm ts = t * s;
          const Perm& rep = levels[li].transversal.at(ts[levels[li].base]);
          Perm res = sift_through(ts * rep.inverse());
          if (!res.is_identity()) {
            missing = std::move(res);
            found = true;
            break;
          }
        }
        if (found) break;
      }
    }
    if (!found) break;
    strong.push_back(std::move(missing));
  }

  d->order = 1;
  for (const auto& lvl : levels) d->order *= lvl.transversal.size();

  if (d->order <= caps.element_cap) {
    // every element factors uniquely as t_{L-1} * ... * t_0
    std::vector<Perm> partial{Perm(degree)};
    for (std::size_t li = levels.size(); li-- > 0;) {
      std::vector<Perm> next;
      next.reserve(partial.size() * levels[li].transversal.size());
      for (const Perm& pre : partial)
        for (const auto& [pt, t] : levels[li].transversal) next.push_back(pre * t);
      partial = std::move(next);
    }
    std::vector<Perm> elems = std::move(partial);
    std::sort(elems.begin(), elems.end());
    if (elems.size() != d->order ||
        std::adjacent_find(elems.begin(), elems.end()) != elems.end())
      throw Error("internal: element enumeration disagrees with chain order");
    d->elements = std::move(elems);
    d->has_elements = true;
  }

  return PermGroup(d);
}

inline PermGroup group_from_gens(std::vector<Perm> gens, std::size_t degree,
                                 const Caps& caps = {}) {
  return PermGroup::from_generators(std::move(gens), degree, caps);
}

inline PermGroup group_from_gens(std::vector<Perm> gens, const Caps& caps = {}) {
  if (gens.empty())
    throw DomainError("empty generator list needs an explicit degree");
  std::size_t degree = gens.front().degree();
  return PermGroup::from_generators(std::move(gens), degree, caps);
}

// Sorted elements of a group, as an ordered list of keys, for set operations.
inline std::vector<Perm> sorted_elements(const PermGroup& g) {
  return g.elements();
}

// Deterministic small generating set for a known element collection:
// scan elements in canonical order and keep the ones enlarging the group.
inline PermGroup group_from_element_set(const std::vector<Perm>& elems,
                                        std::size_t degree,
                                        const Caps& caps = {}) {
  std::vector<Perm> sorted = elems;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Perm> gens;
  PermGroup current = group_from_gens({}, degree, caps);
  for (const Perm& e : sorted) {
    if (e.is_identity() || current.contains(e)) continue;
    gens.push_back(e);
    current = group_from_gens(gens, degree, caps);
    if (current.order() == sorted.size()) break;
  }
  if (current.order() != sorted.size())
    throw DomainError("element set is not closed under the group operations");
  return current;
}

}  // namespace fusionkit
