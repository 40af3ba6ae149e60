#pragma once

// Subgroup machinery: centralizers, normalizers, quotient actions, the
// characteristic series Z_i / derived / Frattini / omega / agemo, Thompson
// subgroup data, Sylow subgroups, subgroup-lattice enumeration, conjugacy.
//
// Below the element cap, brute force over the element table is the default
// and the oracle; centralizer/normalizer fall back to a backtrack search
// over the stabilizer chain above it.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "fusionkit/common.hpp"
#include "fusionkit/perm.hpp"
#include "fusionkit/perm_group.hpp"

namespace fusionkit {

inline std::uint64_t p_part(std::uint64_t n, unsigned p) {
  std::uint64_t q = 1;
  while (n % p == 0) {
    n /= p;
    q *= p;
  }
  return q;
}

inline Perm commutator(const Perm& a, const Perm& b) {
  return a.inverse() * b.inverse() * a * b;
}

// ---------------------------------------------------------------------------
// Centralizer and normalizer

namespace detail {

inline bool centralizes_all(const Perm& g, const std::vector<Perm>& xs) {
  for (const Perm& x : xs)
    if (g * x != x * g) return false;
  return true;
}

inline bool normalizes(const Perm& g, const PermGroup& h) {
  for (const Perm& x : h.generators())
    if (!h.contains(x.conjugated_by(g))) return false;
  return true;
}

// Backtrack over the stabilizer chain. Elements factor as t_{L-1} * ... * t_0
// (left-to-right composition); choosing the suffix s_k = t_k * ... * t_0 pins
// the images of the first k+1 base points: g(b_i) = s_k(b_i) for i <= k.
// `prune(s, k)` may reject a suffix based on those pinned images; `leaf` is
// the exact predicate. Satisfying elements are folded into the result group.
template <typename PartialPrune, typename LeafTest>
PermGroup chain_backtrack(const PermGroup& g, PartialPrune prune,
                          LeafTest leaf, const Caps& caps) {
  const auto& levels = g.chain();
  std::vector<Perm> found;
  PermGroup result = group_from_gens({}, g.degree(), caps);

  struct Frame {
    Perm suffix;
    std::size_t level;
  };
  std::vector<Frame> stack;
  stack.push_back({Perm(g.degree()), 0});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.level == levels.size()) {
      if (leaf(f.suffix) && !result.contains(f.suffix)) {
        found.push_back(f.suffix);
        result = group_from_gens(found, g.degree(), caps);
      }
      continue;
    }
    for (auto it = levels[f.level].transversal.rbegin();
         it != levels[f.level].transversal.rend(); ++it) {
      Perm cand = it->second * f.suffix;
      if (prune(cand, f.level)) continue;
      stack.push_back({std::move(cand), f.level + 1});
    }
  }
  return result;
}

}  // namespace detail

// C_G(X) for a set of permutations X.
inline PermGroup centralizer(const PermGroup& g, const std::vector<Perm>& xs,
                             const Caps& caps = {}) {
  for (const Perm& x : xs)
    if (x.degree() != g.degree()) throw DomainError("centralizer: degree mismatch");
  if (g.has_element_table()) {
    std::vector<Perm> elems;
    for (const Perm& e : g.elements())
      if (detail::centralizes_all(e, xs)) elems.push_back(e);
    return group_from_element_set(elems, g.degree(), caps);
  }
  // Pinned base images must satisfy g(x(b_i)) = x(g(b_i)) whenever x moves a
  // pinned base point to another pinned base point.
  const auto& levels = g.chain();
  auto prune = [&](const Perm& cand, std::size_t level) {
    for (const Perm& x : xs)
      for (std::size_t i = 0; i <= level; ++i) {
        Point bi = levels[i].base;
        Point xbi = x[bi];
        for (std::size_t j = 0; j <= level; ++j)
          if (levels[j].base == xbi && cand[xbi] != x[cand[bi]]) return true;
      }
    return false;
  };
  auto leaf = [&](const Perm& cand) { return detail::centralizes_all(cand, xs); };
  return detail::chain_backtrack(g, prune, leaf, caps);
}

inline PermGroup centralizer(const PermGroup& g, const Perm& x,
                             const Caps& caps = {}) {
  return centralizer(g, std::vector<Perm>{x}, caps);
}

inline PermGroup centralizer(const PermGroup& g, const PermGroup& x,
                             const Caps& caps = {}) {
  return centralizer(g, x.generators(), caps);
}

// N_G(H).
inline PermGroup normalizer(const PermGroup& g, const PermGroup& h,
                            const Caps& caps = {}) {
  if (h.degree() != g.degree()) throw DomainError("normalizer: degree mismatch");
  if (g.has_element_table()) {
    std::vector<Perm> elems;
    for (const Perm& e : g.elements())
      if (detail::normalizes(e, h)) elems.push_back(e);
    return group_from_element_set(elems, g.degree(), caps);
  }
  // Orbit pruning: a normalizing element permutes the H-orbits on points,
  // preserving orbit sizes.
  std::vector<std::size_t> orbit_size(g.degree(), 0);
  {
    std::vector<int> orbit_of(g.degree(), -1);
    int next = 0;
    for (std::size_t a = 0; a < g.degree(); ++a) {
      if (orbit_of[a] >= 0) continue;
      std::vector<Point> orbit{static_cast<Point>(a)};
      orbit_of[a] = next;
      for (std::size_t i = 0; i < orbit.size(); ++i)
        for (const Perm& s : h.generators()) {
          Point im = s[orbit[i]];
          if (orbit_of[im] < 0) {
            orbit_of[im] = next;
            orbit.push_back(im);
          }
        }
      for (Point pt : orbit) orbit_size[pt] = orbit.size();
      ++next;
    }
  }
  const auto& levels = g.chain();
  auto prune = [&](const Perm& cand, std::size_t level) {
    for (std::size_t i = 0; i <= level; ++i) {
      Point bi = levels[i].base;
      if (orbit_size[bi] != orbit_size[cand[bi]]) return true;
    }
    return false;
  };
  auto leaf = [&](const Perm& cand) { return detail::normalizes(cand, h); };
  return detail::chain_backtrack(g, prune, leaf, caps);
}

// ---------------------------------------------------------------------------
// Derived subgroup, normal closure, characteristic series

// Normal closure of the subgroup generated by `seed` in G.
inline PermGroup normal_closure(const PermGroup& g,
                                const std::vector<Perm>& seed,
                                const Caps& caps = {}) {
  std::vector<Perm> gens;
  for (const Perm& s : seed)
    if (!s.is_identity()) gens.push_back(s);
  PermGroup k = group_from_gens(gens, g.degree(), caps);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Perm> frontier = gens;
    for (const Perm& x : frontier)
      for (const Perm& c : g.generators()) {
        Perm y = x.conjugated_by(c);
        if (!k.contains(y)) {
          gens.push_back(y);
          k = group_from_gens(gens, g.degree(), caps);
          grew = true;
        }
      }
  }
  return k;
}

inline PermGroup derived_subgroup(const PermGroup& g, const Caps& caps = {}) {
  std::vector<Perm> comms;
  const auto& gs = g.generators();
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = 0; j < gs.size(); ++j)
      if (i != j) comms.push_back(commutator(gs[i], gs[j]));
  return normal_closure(g, comms, caps);
}

inline PermGroup center(const PermGroup& g, const Caps& caps = {}) {
  return centralizer(g, g.generators(), caps);
}

struct CharSeries {
  PermGroup center;
  PermGroup derived;
  PermGroup frattini;
  PermGroup omega;
  PermGroup agemo;
  std::vector<PermGroup> upper_central;  // Z_1 <= Z_2 <= ... terminating at P
};

// Characteristic series of a p-group (needs the element table).
inline CharSeries char_series(const PermGroup& p_grp, unsigned p,
                              const Caps& caps = {}) {
  if (!p_grp.is_pgroup(p))
    throw DomainError("char_series: group is not a p-group for p=" +
                      std::to_string(p));
  const auto& elems = p_grp.elements();
  CharSeries cs;
  cs.center = center(p_grp, caps);
  cs.derived = derived_subgroup(p_grp, caps);

  std::vector<Perm> omega_gens, agemo_gens;
  for (const Perm& x : elems) {
    if (x.is_identity()) continue;
    if (x.order() == p) omega_gens.push_back(x);
    Perm xp = x;
    for (unsigned i = 1; i < p; ++i) xp = xp * x;
    if (!xp.is_identity()) agemo_gens.push_back(xp);
  }
  cs.omega = group_from_gens(omega_gens, p_grp.degree(), caps);
  cs.agemo = group_from_gens(agemo_gens, p_grp.degree(), caps);

  std::vector<Perm> frat_gens = cs.derived.generators();
  for (const Perm& x : cs.agemo.generators()) frat_gens.push_back(x);
  cs.frattini = group_from_gens(frat_gens, p_grp.degree(), caps);

  // Z_{i+1}/Z_i = Z(P/Z_i), computed as the elements whose commutators with
  // every generator fall in Z_i.
  PermGroup z = cs.center;
  cs.upper_central.push_back(z);
  while (z.order() < p_grp.order()) {
    std::vector<Perm> next;
    for (const Perm& x : elems) {
      bool ok = true;
      for (const Perm& s : p_grp.generators())
        if (!z.contains(commutator(x, s))) {
          ok = false;
          break;
        }
      if (ok) next.push_back(x);
    }
    PermGroup zn = group_from_element_set(next, p_grp.degree(), caps);
    if (zn.order() == z.order())
      throw Error("internal: upper central series stalled");
    z = zn;
    cs.upper_central.push_back(z);
  }
  return cs;
}

// ---------------------------------------------------------------------------
// Thompson subgroup

struct ThompsonData {
  unsigned max_rank = 0;
  std::vector<PermGroup> witnesses;  // A(S), sorted by canonical key
  PermGroup j;                       // J(S)
  PermGroup core_omega;              // intersection of all A in A(S)
};

inline PermGroup intersect_groups(const PermGroup& a, const PermGroup& b,
                                  const Caps& caps = {}) {
  std::vector<Perm> common;
  for (const Perm& x : a.elements())
    if (b.contains(x)) common.push_back(x);
  return group_from_element_set(common, a.degree(), caps);
}

inline ThompsonData thompson(const PermGroup& s, unsigned p,
                             const Caps& caps = {}) {
  if (s.is_trivial() || !s.is_pgroup(p))
    throw DomainError("thompson: need a non-trivial p-group");
  const auto& elems = s.elements();

  // Enumerate all elementary abelian subgroups breadth-first.
  std::map<std::vector<Point>, PermGroup> seen;
  std::vector<PermGroup> frontier;
  std::vector<Perm> order_p;
  for (const Perm& x : elems)
    if (!x.is_identity() && x.order() == p) order_p.push_back(x);
  for (const Perm& x : order_p) {
    PermGroup c = group_from_gens({x}, s.degree(), caps);
    auto key = c.canonical_key();
    if (seen.emplace(key, c).second) frontier.push_back(c);
  }
  while (!frontier.empty()) {
    std::vector<PermGroup> next;
    for (const PermGroup& a : frontier)
      for (const Perm& x : order_p) {
        if (a.contains(x)) continue;
        bool commutes = true;
        for (const Perm& g : a.generators())
          if (g * x != x * g) {
            commutes = false;
            break;
          }
        if (!commutes) continue;
        std::vector<Perm> gens = a.generators();
        gens.push_back(x);
        PermGroup bigger = group_from_gens(gens, s.degree(), caps);
        auto key = bigger.canonical_key();
        if (seen.emplace(key, bigger).second) next.push_back(bigger);
      }
    frontier = std::move(next);
  }

  std::uint64_t max_order = 1;
  for (const auto& [k, a] : seen) max_order = std::max(max_order, a.order());

  ThompsonData td;
  td.max_rank = 0;
  for (std::uint64_t m = max_order; m > 1; m /= p) ++td.max_rank;
  std::vector<Perm> j_gens;
  std::optional<PermGroup> core;
  for (const auto& [k, a] : seen) {
    if (a.order() != max_order) continue;
    td.witnesses.push_back(a);
    for (const Perm& g : a.generators()) j_gens.push_back(g);
    core = core ? intersect_groups(*core, a, caps) : a;
  }
  if (max_order == 1) {  // only possible for the trivial group, excluded above
    td.witnesses.push_back(group_from_gens({}, s.degree(), caps));
    core = td.witnesses.front();
  }
  td.j = group_from_gens(j_gens, s.degree(), caps);
  td.core_omega = *core;

  // Consistency with the omega identities; both are theorems, so a mismatch
  // means a bug in the enumeration.
  PermGroup zj = center(td.j, caps);
  std::vector<Perm> zj_omega;
  for (const Perm& x : zj.elements())
    if (x.is_identity() || x.order() == p) zj_omega.push_back(x);
  PermGroup omega_zj = group_from_element_set(zj_omega, s.degree(), caps);
  if (!(omega_zj == td.core_omega))
    throw Error("internal: Omega(Z(J)) differs from the witness intersection");
  return td;
}

// ---------------------------------------------------------------------------
// Sylow subgroups

inline PermGroup sylow(const PermGroup& g, unsigned p, const Caps& caps = {}) {
  std::uint64_t target = p_part(g.order(), p);
  PermGroup s = group_from_gens({}, g.degree(), caps);
  if (target == 1) return s;
  const auto& elems = g.elements();  // throws CapExceeded above the cap
  while (s.order() < target) {
    // a p-element of N_G(S) \ S extends S to a larger p-subgroup;
    // picking the first in canonical order keeps the result deterministic
    bool extended = false;
    for (const Perm& x : elems) {
      if (x.is_identity() || s.contains(x)) continue;
      std::uint64_t ord = x.order();
      if (p_part(ord, p) != ord) continue;
      if (!detail::normalizes(x, s)) continue;
      std::vector<Perm> gens = s.generators();
      gens.push_back(x);
      s = group_from_gens(gens, g.degree(), caps);
      extended = true;
      break;
    }
    if (!extended)
      throw Error("internal: sylow climb stalled");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Subgroup lattice

// Every subgroup of P, sorted by (order, canonical key). Bottom-up cyclic
// extension: repeatedly adjoin a single element to known subgroups.
inline std::vector<PermGroup> all_subgroups(const PermGroup& p_grp,
                                            const Caps& caps = {}) {
  if (p_grp.order() > caps.subgroup_cap)
    throw CapExceeded("all_subgroups: order " + std::to_string(p_grp.order()) +
                      " exceeds subgroup cap " +
                      std::to_string(caps.subgroup_cap));
  const auto& elems = p_grp.elements();
  std::map<std::vector<Point>, PermGroup> seen;
  PermGroup triv = group_from_gens({}, p_grp.degree(), caps);
  seen.emplace(triv.canonical_key(), triv);
  std::vector<PermGroup> frontier{triv};
  while (!frontier.empty()) {
    std::vector<PermGroup> next;
    for (const PermGroup& h : frontier)
      for (const Perm& x : elems) {
        if (x.is_identity() || h.contains(x)) continue;
        std::vector<Perm> gens = h.generators();
        gens.push_back(x);
        PermGroup k = group_from_gens(gens, p_grp.degree(), caps);
        auto key = k.canonical_key();
        if (seen.emplace(key, k).second) next.push_back(k);
      }
    frontier = std::move(next);
  }
  std::vector<PermGroup> out;
  out.reserve(seen.size());
  for (auto& [k, h] : seen) out.push_back(h);
  std::sort(out.begin(), out.end(), [](const PermGroup& a, const PermGroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.canonical_key() < b.canonical_key();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Conjugacy of subgroups

struct ConjugacyWitness {
  bool conjugate = false;
  Perm by;
};

// Searches the conjugation orbit of A under G for B; breadth-first with
// witnesses, no element table required.
inline ConjugacyWitness is_conjugate(const PermGroup& g, const PermGroup& a,
                                     const PermGroup& b) {
  ConjugacyWitness w;
  if (a.order() != b.order()) return w;
  auto conj_group = [&](const PermGroup& h, const Perm& x) {
    std::vector<Perm> gens;
    for (const Perm& s : h.generators()) gens.push_back(s.conjugated_by(x));
    return group_from_gens(gens, h.degree());
  };
  std::map<std::vector<Point>, Perm> visited;
  std::vector<std::pair<PermGroup, Perm>> queue{{a, Perm(g.degree())}};
  visited.emplace(a.canonical_key(), Perm(g.degree()));
  const auto target = b.canonical_key();
  if (a.canonical_key() == target) return {true, Perm(g.degree())};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto [h, word] = queue[i];
    for (const Perm& s : g.generators()) {
      PermGroup hc = conj_group(h, s);
      auto key = hc.canonical_key();
      if (visited.count(key)) continue;
      Perm nw = word * s;
      if (key == target) return {true, nw};
      visited.emplace(key, nw);
      queue.emplace_back(std::move(hc), std::move(nw));
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Quotient actions

struct QuotientAction {
  PermGroup group;               // the action image, one point per coset
  std::vector<Perm> coset_reps;  // canonical (minimal) representative per coset
  std::map<Perm, Point> coset_of_elem;
  std::vector<Perm> gen_actions;  // aligned with the parent's generators

  Point coset_of(const Perm& x) const {
    auto it = coset_of_elem.find(x);
    if (it == coset_of_elem.end()) throw DomainError("element outside parent");
    return it->second;
  }

  Perm action_of(const Perm& g) const {
    std::vector<Point> im(coset_reps.size());
    for (std::size_t i = 0; i < coset_reps.size(); ++i)
      im[i] = coset_of_elem.at(coset_reps[i] * g);
    return Perm(std::move(im));
  }
};

// Right-coset action of G on N\G for N normal in G.
inline QuotientAction quotient_action(const PermGroup& g, const PermGroup& n,
                                      const Caps& caps = {}) {
  for (const Perm& x : n.generators())
    if (!g.contains(x)) throw DomainError("quotient: N not inside G");
  for (const Perm& x : n.generators())
    for (const Perm& c : g.generators())
      if (!n.contains(x.conjugated_by(c)))
        throw DomainError("quotient: N not normal in G");

  QuotientAction q;
  const auto& elems = g.elements();
  const auto& nelems = n.elements();
  for (const Perm& x : elems) {
    if (q.coset_of_elem.count(x)) continue;
    Point id = static_cast<Point>(q.coset_reps.size());
    q.coset_reps.push_back(x);  // elems sorted, so x is the coset minimum
    for (const Perm& nn : nelems) q.coset_of_elem.emplace(nn * x, id);
  }
  std::vector<Perm> action_gens;
  for (const Perm& s : g.generators()) {
    std::vector<Point> im(q.coset_reps.size());
    for (std::size_t i = 0; i < q.coset_reps.size(); ++i)
      im[i] = q.coset_of_elem.at(q.coset_reps[i] * s);
    action_gens.push_back(Perm(std::move(im)));
    q.gen_actions.push_back(action_gens.back());
  }
  q.group = group_from_gens(action_gens, q.coset_reps.size(), caps);
  return q;
}

// Largest normal p-subgroup: the intersection of all Sylow p-subgroups.
inline PermGroup p_core(const PermGroup& g, unsigned p, const Caps& caps = {}) {
  PermGroup s = sylow(g, p, caps);
  if (s.is_trivial()) return s;
  PermGroup core = s;
  std::map<std::vector<Point>, bool> visited;
  std::vector<PermGroup> queue{s};
  visited.emplace(s.canonical_key(), true);
  for (std::size_t i = 0; i < queue.size() && core.order() > 1; ++i) {
    for (const Perm& c : g.generators()) {
      std::vector<Perm> gens;
      for (const Perm& x : queue[i].generators())
        gens.push_back(x.conjugated_by(c));
      PermGroup sc = group_from_gens(gens, g.degree(), caps);
      if (visited.emplace(sc.canonical_key(), true).second) {
        core = intersect_groups(core, sc, caps);
        queue.push_back(std::move(sc));
      }
    }
  }
  return core;
}

// Smallest normal subgroup of p-power index: generated by all p'-elements.
inline PermGroup op_residual(const PermGroup& g, unsigned p,
                             const Caps& caps = {}) {
  std::vector<Perm> gens;
  for (const Perm& x : g.elements())
    if (!x.is_identity() && x.order() % p != 0) gens.push_back(x);
  return group_from_gens(gens, g.degree(), caps);
}

// Smallest normal subgroup of p'-index: the normal closure of a Sylow
// p-subgroup.
inline PermGroup pprime_residual(const PermGroup& g, unsigned p,
                                 const Caps& caps = {}) {
  PermGroup s = sylow(g, p, caps);
  return normal_closure(g, s.generators(), caps);
}

}  // namespace fusionkit
