#pragma once

#include <algorithm>

#include "minorlab/meet_term.hpp"

namespace minorlab {

/// A finite set of subsets of [m].  Members are stored as bitmasks in
/// ascending characteristic-integer order (sum of 2^(j-1) over elements j),
/// which fixes the canonical bijection sigma: member S |-> its 1-based
/// position.  The empty set is a legal member; members are deduplicated.
struct SetSystem {
  std::uint32_t ground = 0;            // m
  std::vector<std::uint32_t> members;  // sorted ascending, unique

  std::size_t size() const { return members.size(); }

  /// 1-based canonical index of a member; 0 if absent.
  std::uint32_t sigma(std::uint32_t member) const {
    auto it = std::lower_bound(members.begin(), members.end(), member);
    if (it == members.end() || *it != member) return 0;
    return static_cast<std::uint32_t>(it - members.begin()) + 1;
  }

  bool contains(std::uint32_t member) const { return sigma(member) != 0; }

  friend bool operator==(const SetSystem&, const SetSystem&) = default;
};

inline SetSystem make_set_system(std::uint32_t ground,
                                 std::vector<std::uint32_t> members) {
  require(ground >= 1 && ground <= 31, ErrorKind::InvalidInput,
          "set system: ground size out of range");
  for (std::uint32_t s : members)
    require(s < (1u << ground), ErrorKind::InvalidInput,
            "set system: member outside the ground set");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  require(!members.empty(), ErrorKind::InvalidInput,
          "set system: must have at least one member");
  return SetSystem{ground, std::move(members)};
}

/// The indexed family X_1..X_n attached to a term tuple: X_i collects the
/// positions j whose term phi_j uses variable i.  (Duality: j in X_i iff
/// i in Phi_j.)
inline std::vector<std::uint32_t> x_family(const TermVector& tv) {
  std::vector<std::uint32_t> fam(tv.ambient, 0);
  for (std::size_t j = 0; j < tv.terms.size(); ++j)
    for_each_bit(tv.terms[j].vars,
                 [&](std::uint32_t b) { fam[b] |= 1u << j; });
  return fam;
}

/// The X-system of a term tuple: { X_1, ..., X_n } as a set (duplicates
/// collapse; the empty set stays when some variable is unused).
inline SetSystem x_system(const TermVector& tv) {
  require(tv.terms.size() >= 1 && tv.terms.size() <= 31,
          ErrorKind::InvalidInput, "x_system: tuple length out of range");
  return make_set_system(static_cast<std::uint32_t>(tv.terms.size()),
                         x_family(tv));
}

/// The canonical term tuple Psi_E = (psi_1, ..., psi_m) over |E| variables:
/// psi_j is the meet of x_sigma(S) over the members S containing j.
/// Requires every j in [m] to lie in some member.
inline TermVector psi_of(const SetSystem& E) {
  std::uint32_t m = E.ground;
  std::uint32_t n = static_cast<std::uint32_t>(E.members.size());
  require(n <= 31, ErrorKind::CapExceeded,
          "psi_of: too many members for a term ambient arity");
  TermVector tv{n, {}};
  tv.terms.reserve(m);
  for (std::uint32_t j = 0; j < m; ++j) {
    std::uint32_t vars = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      if (E.members[i] & (1u << j)) vars |= 1u << i;
    require(vars != 0, ErrorKind::InvalidInput,
            "psi_of: position " + std::to_string(j + 1) +
                " is covered by no member");
    tv.terms.push_back(MeetTerm{n, vars});
  }
  return tv;
}

/// True if every member of E is a union of members of F.
inline bool members_are_unions(const SetSystem& E, const SetSystem& F) {
  for (std::uint32_t v : E.members) {
    std::uint32_t u = 0;
    for (std::uint32_t s : F.members)
      if ((s & ~v) == 0) u |= s;
    if (u != v) return false;
  }
  return true;
}

/// True if every member of F is contained in some member of E.
inline bool members_dominated(const SetSystem& F, const SetSystem& E) {
  for (std::uint32_t s : F.members) {
    bool ok = false;
    for (std::uint32_t v : E.members)
      if ((s & ~v) == 0) { ok = true; break; }
    if (!ok) return false;
  }
  return true;
}

/// Substituting a meet-term tuple into Psi_F yields a tuple whose X-system
/// is E exactly when E consists of unions of members of F and dominates F.
/// This is the syntactic reachability test used to order and merge systems;
/// it is sound for the minor preorder and exact on the system level.
inline bool system_reachable(const SetSystem& E, const SetSystem& F) {
  require(E.ground == F.ground, ErrorKind::InvalidInput,
          "system_reachable: systems over different ground sets");
  return members_are_unions(E, F) && members_dominated(F, E);
}

/// Reachability of an X-family (not yet collapsed to a set) from F; the
/// family may contain duplicates and the empty set.
inline bool family_reachable(const std::vector<std::uint32_t>& fam,
                             const SetSystem& F) {
  for (std::uint32_t v : fam) {
    std::uint32_t u = 0;
    for (std::uint32_t s : F.members)
      if ((s & ~v) == 0) u |= s;
    if (u != v) return false;
  }
  for (std::uint32_t s : F.members) {
    bool ok = false;
    for (std::uint32_t v : fam)
      if ((s & ~v) == 0) { ok = true; break; }
    if (!ok) return false;
  }
  return true;
}

} // namespace minorlab
