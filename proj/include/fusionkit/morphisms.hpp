#pragma once

// Verified homomorphisms as generator-image maps, automorphism groups of
// small groups via their faithful action on the element table, quotient
// actions of automorphisms, and strongly p-embedded detection.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fusionkit/common.hpp"
#include "fusionkit/group_structure.hpp"
#include "fusionkit/perm.hpp"
#include "fusionkit/perm_group.hpp"

namespace fusionkit {

class GroupMap {
 public:
  GroupMap() = default;

  // Builds and verifies the homomorphism dom -> cod sending the i-th
  // generator of dom to images[i]. The full element table is materialized
  // and multiplicativity is checked on every (element, generator) edge.
  static GroupMap from_images(const PermGroup& dom, const PermGroup& cod,
                              std::vector<Perm> images,
                              const Caps& caps = {}) {
    if (images.size() != dom.generators().size())
      throw DomainError("one image per domain generator required");
    for (const Perm& im : images)
      if (!cod.contains(im))
        throw ImageOutsideCodomain("generator image lies outside the codomain");
    if (dom.order() > caps.element_cap)
      throw CapExceeded("map verification needs the domain element table");

    GroupMap m;
    m.dom_ = dom;
    m.cod_ = cod;
    m.gen_images_ = std::move(images);

    // breadth-first closure defines the map; conflicts refute it
    std::map<Perm, Perm> table;
    table.emplace(Perm(dom.degree()), Perm(cod.degree()));
    std::vector<Perm> frontier{Perm(dom.degree())};
    while (!frontier.empty()) {
      std::vector<Perm> next;
      for (const Perm& x : frontier) {
        const Perm& fx = table.at(x);
        for (std::size_t i = 0; i < dom.generators().size(); ++i) {
          Perm y = x * dom.generators()[i];
          Perm fy = fx * m.gen_images_[i];
          auto it = table.find(y);
          if (it == table.end()) {
            table.emplace(y, fy);
            next.push_back(std::move(y));
          } else if (it->second != fy) {
            throw NotAHomomorphism("generator images violate a relation");
          }
        }
      }
      frontier = std::move(next);
    }
    if (table.size() != dom.order())
      throw Error("internal: homomorphism closure incomplete");
    // verify every edge, not just the spanning tree
    for (const auto& [x, fx] : table)
      for (std::size_t i = 0; i < dom.generators().size(); ++i)
        if (table.at(x * dom.generators()[i]) != fx * m.gen_images_[i])
          throw NotAHomomorphism("generator images violate a relation");

    std::set<Perm> image_set;
    for (const auto& [x, fx] : table) image_set.insert(fx);
    m.injective_ = image_set.size() == dom.order();
    m.table_ = std::move(table);
    return m;
  }

  // The map sending x to x^g, as an automorphism of h (g must normalize h).
  static GroupMap conjugation(const PermGroup& h, const Perm& g,
                              const Caps& caps = {}) {
    std::vector<Perm> images;
    for (const Perm& s : h.generators()) images.push_back(s.conjugated_by(g));
    return from_images(h, h, std::move(images), caps);
  }

  static GroupMap identity(const PermGroup& h, const Caps& caps = {}) {
    return from_images(h, h, h.generators(), caps);
  }

  const PermGroup& dom() const { return dom_; }
  const PermGroup& cod() const { return cod_; }
  const std::vector<Perm>& gen_images() const { return gen_images_; }
  bool injective() const { return injective_; }

  Perm apply(const Perm& x) const {
    auto it = table_.find(x);
    if (it == table_.end()) throw DomainError("element outside the domain");
    return it->second;
  }

  PermGroup image(const Caps& caps = {}) const {
    return group_from_gens(gen_images_, cod_.degree(), caps);
  }

  PermGroup image_of(const PermGroup& sub, const Caps& caps = {}) const {
    std::vector<Perm> imgs;
    for (const Perm& s : sub.generators()) imgs.push_back(apply(s));
    return group_from_gens(imgs, cod_.degree(), caps);
  }

  bool is_automorphism_of(const PermGroup& x) const {
    return injective_ && dom_ == x && image() == x;
  }

  // this followed by next
  GroupMap compose(const GroupMap& next, const Caps& caps = {}) const {
    std::vector<Perm> images;
    for (const Perm& im : gen_images_) images.push_back(next.apply(im));
    return from_images(dom_, next.cod_, std::move(images), caps);
  }

  GroupMap restriction(const PermGroup& sub, const Caps& caps = {}) const {
    std::vector<Perm> images;
    for (const Perm& s : sub.generators()) images.push_back(apply(s));
    return from_images(sub, cod_, std::move(images), caps);
  }

  GroupMap inverse_iso(const Caps& caps = {}) const {
    if (!injective_) throw DomainError("inverse of a non-injective map");
    PermGroup img = image(caps);
    std::map<Perm, Perm> back;
    for (const auto& [x, fx] : table_) back.emplace(fx, x);
    std::vector<Perm> images;
    for (const Perm& s : img.generators()) images.push_back(back.at(s));
    return from_images(img, dom_, std::move(images), caps);
  }

 private:
  PermGroup dom_, cod_;
  std::vector<Perm> gen_images_;
  std::map<Perm, Perm> table_;
  bool injective_ = false;
};

inline GroupMap map_from_images(const PermGroup& dom, const PermGroup& cod,
                                std::vector<Perm> images,
                                const Caps& caps = {}) {
  return GroupMap::from_images(dom, cod, std::move(images), caps);
}

// ---------------------------------------------------------------------------
// Automorphism groups

// Aut(P) acting faithfully on the sorted element table of P. Every model
// element decodes to an automorphism through the table, so `dictionary` is
// only kept for the model generators.
struct AutGrp {
  PermGroup base;
  PermGroup model;  // degree = |base|
  std::vector<GroupMap> dictionary;
  PermGroup inn;
  std::uint64_t out_order = 1;

  // Decode a model element into the automorphism it represents.
  GroupMap map_of(const Perm& model_elem, const Caps& caps = {}) const {
    const auto& elems = base.elements();
    std::vector<Perm> images;
    for (const Perm& g : base.generators()) {
      std::size_t idx = static_cast<std::size_t>(
          std::lower_bound(elems.begin(), elems.end(), g) - elems.begin());
      images.push_back(elems[model_elem[static_cast<Point>(idx)]]);
    }
    return GroupMap::from_images(base, base, std::move(images), caps);
  }

  // Encode an automorphism of base as a model element.
  Perm perm_of(const GroupMap& alpha) const {
    const auto& elems = base.elements();
    std::vector<Point> im(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i) {
      Perm fx = alpha.apply(elems[i]);
      im[i] = static_cast<Point>(
          std::lower_bound(elems.begin(), elems.end(), fx) - elems.begin());
    }
    return Perm(std::move(im));
  }
};

namespace detail {

// Deterministic minimal generating sequence: scan elements in canonical
// order, keeping those that enlarge the generated subgroup.
inline std::vector<Perm> minimal_generating_sequence(const PermGroup& p,
                                                     const Caps& caps) {
  std::vector<Perm> gens;
  PermGroup current = group_from_gens({}, p.degree(), caps);
  for (const Perm& x : p.elements()) {
    if (x.is_identity() || current.contains(x)) continue;
    gens.push_back(x);
    current = group_from_gens(gens, p.degree(), caps);
    if (current.order() == p.order()) break;
  }
  return gens;
}

// Does mapping gens[i] -> images[i] extend to a homomorphism on <gens>?
// Checks every Cayley edge of the closure.
inline bool partial_map_consistent(const std::vector<Perm>& gens,
                                   const std::vector<Perm>& images,
                                   std::size_t degree) {
  std::map<Perm, Perm> table;
  table.emplace(Perm(degree), Perm(degree));
  std::vector<Perm> frontier{Perm(degree)};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const Perm& x : frontier) {
      const Perm fx = table.at(x);
      for (std::size_t i = 0; i < gens.size(); ++i) {
        Perm y = x * gens[i];
        Perm fy = fx * images[i];
        auto it = table.find(y);
        if (it == table.end()) {
          table.emplace(y, fy);
          next.push_back(std::move(y));
        } else if (it->second != fy) {
          return false;
        }
      }
    }
    frontier = std::move(next);
  }
  for (const auto& [x, fx] : table)
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (table.at(x * gens[i]) != fx * images[i]) return false;
  return true;
}

}  // namespace detail

inline AutGrp automorphism_group(const PermGroup& p, const Caps& caps = {}) {
  if (p.order() > caps.aut_cap)
    throw CapExceeded("automorphism_group: order " + std::to_string(p.order()) +
                      " exceeds aut cap " + std::to_string(caps.aut_cap));
  const auto& elems = p.elements();
  auto index_of = [&](const Perm& x) {
    return static_cast<Point>(
        std::lower_bound(elems.begin(), elems.end(), x) - elems.begin());
  };

  AutGrp a;
  a.base = p;
  if (p.is_trivial()) {
    a.model = group_from_gens({}, 1, caps);
    a.inn = a.model;
    a.out_order = 1;
    return a;
  }

  std::vector<Perm> gens = detail::minimal_generating_sequence(p, caps);

  // conjugacy class sizes as a cheap automorphism invariant
  std::map<Perm, std::size_t> class_size;
  for (const Perm& x : elems) {
    if (class_size.count(x)) continue;
    std::vector<Perm> cls{x};
    std::set<Perm> in_cls{x};
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (const Perm& g : p.generators()) {
        Perm y = cls[i].conjugated_by(g);
        if (in_cls.insert(y).second) cls.push_back(y);
      }
    for (const Perm& y : cls) class_size[y] = cls.size();
  }

  // candidate images per position: same order, same class size
  std::vector<std::vector<Perm>> candidates(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (const Perm& x : elems) {
      if (x.is_identity()) continue;
      if (x.order() != gens[i].order()) continue;
      if (class_size.at(x) != class_size.at(gens[i])) continue;
      candidates[i].push_back(x);
    }

  std::vector<Perm> model_gens;  // one perm of the element table per tuple
  std::vector<GroupMap> dict;
  std::vector<Perm> chosen(gens.size(), Perm(p.degree()));

  std::uint64_t found = 0;
  auto dfs = [&](auto&& self, std::size_t pos) -> void {
    if (pos == gens.size()) {
      PermGroup img = group_from_gens(chosen, p.degree(), caps);
      if (img.order() != p.order()) return;
      GroupMap alpha = GroupMap::from_images(p, p, chosen, caps);
      std::vector<Point> im(elems.size());
      for (std::size_t i = 0; i < elems.size(); ++i)
        im[i] = index_of(alpha.apply(elems[i]));
      model_gens.push_back(Perm(std::move(im)));
      dict.push_back(std::move(alpha));
      if (++found > 500000)
        throw CapExceeded("automorphism search exceeded its budget");
      return;
    }
    PermGroup partial = group_from_gens(
        std::vector<Perm>(chosen.begin(), chosen.begin() + pos), p.degree(),
        caps);
    for (const Perm& cand : candidates[pos]) {
      if (partial.contains(cand)) continue;  // images must stay independent
      chosen[pos] = cand;
      if (!detail::partial_map_consistent(
              std::vector<Perm>(gens.begin(), gens.begin() + pos + 1),
              std::vector<Perm>(chosen.begin(), chosen.begin() + pos + 1),
              p.degree()))
        continue;
      self(self, pos + 1);
    }
  };
  dfs(dfs, 0);

  a.model = group_from_gens(model_gens, elems.size(), caps);
  a.dictionary = std::move(dict);

  std::vector<Perm> inn_gens;
  for (const Perm& g : p.generators()) {
    std::vector<Point> im(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i)
      im[i] = index_of(elems[i].conjugated_by(g));
    inn_gens.push_back(Perm(std::move(im)));
  }
  a.inn = group_from_gens(inn_gens, elems.size(), caps);
  a.out_order = a.model.order() / a.inn.order();
  return a;
}

// Induced automorphism of P/N for an automorphism alpha of P leaving the
// normal subgroup N invariant. The quotient is returned as the domain of the
// resulting map (its regular coset action).
inline GroupMap induced_on_quotient(const GroupMap& alpha, const PermGroup& n,
                                    const Caps& caps = {}) {
  const PermGroup& p = alpha.dom();
  if (!alpha.is_automorphism_of(p))
    throw DomainError("induced_on_quotient: map is not an automorphism");
  if (!(alpha.image_of(n, caps) == n))
    throw DomainError("induced_on_quotient: N is not invariant");
  QuotientAction q = quotient_action(p, n, caps);
  std::vector<Perm> images;
  for (const Perm& g : p.generators()) images.push_back(q.action_of(alpha.apply(g)));
  // the quotient group's generators are exactly the actions of p's generators
  std::vector<Perm> dom_gens;
  for (const Perm& g : p.generators()) dom_gens.push_back(q.action_of(g));
  PermGroup quo = group_from_gens(dom_gens, q.coset_reps.size(), caps);
  // rewrite images over the quotient's generator list
  std::vector<Perm> aligned;
  for (const Perm& qg : quo.generators()) {
    // find a parent generator mapping to qg
    bool ok = false;
    for (std::size_t i = 0; i < dom_gens.size(); ++i)
      if (dom_gens[i] == qg) {
        aligned.push_back(images[i]);
        ok = true;
        break;
      }
    if (!ok) throw Error("internal: quotient generator alignment failed");
  }
  return GroupMap::from_images(quo, quo, std::move(aligned), caps);
}

// ---------------------------------------------------------------------------
// Strongly p-embedded subgroups

struct SpeResult {
  bool has = false;
  unsigned components = 1;
  unsigned n_sylow = 1;
};

// H has a strongly p-embedded subgroup iff the graph on Syl_p(H) joining
// Sylow subgroups with non-trivial intersection is disconnected. p-groups
// have a single Sylow subgroup and always answer false.
inline SpeResult has_strongly_p_embedded(const PermGroup& h, unsigned p,
                                         const Caps& caps = {}) {
  if (h.order() % p != 0)
    throw DomainError("has_strongly_p_embedded: p does not divide |H|");
  PermGroup s = sylow(h, p, caps);
  // all Sylow p-subgroups: conjugation orbit
  std::vector<PermGroup> sylows{s};
  std::set<std::vector<Point>> seen{s.canonical_key()};
  for (std::size_t i = 0; i < sylows.size(); ++i)
    for (const Perm& g : h.generators()) {
      std::vector<Perm> gens;
      for (const Perm& x : sylows[i].generators())
        gens.push_back(x.conjugated_by(g));
      PermGroup sc = group_from_gens(gens, h.degree(), caps);
      if (seen.insert(sc.canonical_key()).second) sylows.push_back(std::move(sc));
    }

  SpeResult r;
  r.n_sylow = static_cast<unsigned>(sylows.size());
  if (sylows.size() == 1) return r;

  std::vector<unsigned> comp(sylows.size());
  std::iota(comp.begin(), comp.end(), 0u);
  std::function<unsigned(unsigned)> find = [&](unsigned x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (std::size_t i = 0; i < sylows.size(); ++i)
    for (std::size_t j = i + 1; j < sylows.size(); ++j) {
      bool meet = false;
      for (const Perm& x : sylows[i].elements())
        if (!x.is_identity() && sylows[j].contains(x)) {
          meet = true;
          break;
        }
      if (meet) comp[find(static_cast<unsigned>(i))] =
          find(static_cast<unsigned>(j));
    }
  std::set<unsigned> roots;
  for (unsigned i = 0; i < sylows.size(); ++i) roots.insert(find(i));
  r.components = static_cast<unsigned>(roots.size());
  r.has = r.components >= 2;
  return r;
}

// Definitional test for a specific pair: M < H strongly p-embedded.
inline bool is_strongly_p_embedded_in(const PermGroup& m, const PermGroup& h,
                                      unsigned p, const Caps& caps = {}) {
  (void)caps;
  if (!(h.contains_subgroup(m)) || m.order() == h.order()) return false;
  if (m.order() % p != 0) return false;
  for (const Perm& g : h.elements()) {
    if (m.contains(g)) continue;
    std::size_t meet = 0;
    for (const Perm& x : m.elements()) {
      Perm xc = x.conjugated_by(g);
      if (m.contains(xc)) ++meet;
    }
    if (meet % p == 0) return false;  // p divides |M ∩ M^g|
  }
  return true;
}

// Q is characteristic in P when every automorphism of P fixes it setwise.
inline bool is_characteristic(const PermGroup& p, const PermGroup& q,
                              const Caps& caps = {}) {
  if (!p.contains_subgroup(q))
    throw DomainError("is_characteristic: Q is not a subgroup of P");
  AutGrp a = automorphism_group(p, caps);
  for (const GroupMap& alpha : a.dictionary)
    if (!(alpha.image_of(q, caps) == q)) return false;
  return true;
}

}  // namespace fusionkit
