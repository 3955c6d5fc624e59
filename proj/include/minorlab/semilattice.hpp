#pragma once

#include <array>
#include <optional>

#include "minorlab/core.hpp"

namespace minorlab {

/// Outcome of checking the semilattice identities on a binary operation.
/// On failure, `law` names the violated identity and `witness` holds the
/// elements violating it (`count` of them are meaningful).
struct SemilatticeCheck {
  bool ok = false;
  const char* law = nullptr;
  std::array<Element, 3> witness{0, 0, 0};
  std::uint32_t count = 0;
};

inline Element meet_of(const Operation& m, Element a, Element b) {
  return m.table[static_cast<std::size_t>(a) * m.domain.size + b];
}

/// Checks idempotency, commutativity and associativity, reporting the first
/// violating tuple in scan order.
inline SemilatticeCheck check_semilattice(const Operation& op) {
  require(op.arity == 2, ErrorKind::InvalidInput,
          "check_semilattice: operation must be binary");
  std::uint32_t k = op.domain.size;
  for (Element x = 0; x < k; ++x)
    if (meet_of(op, x, x) != x)
      return {false, "idempotency", {x, x, 0}, 1};
  for (Element x = 0; x < k; ++x)
    for (Element y = 0; y < k; ++y)
      if (meet_of(op, x, y) != meet_of(op, y, x))
        return {false, "commutativity", {x, y, 0}, 2};
  for (Element x = 0; x < k; ++x)
    for (Element y = 0; y < k; ++y)
      for (Element z = 0; z < k; ++z)
        if (meet_of(op, meet_of(op, x, y), z) !=
            meet_of(op, x, meet_of(op, y, z)))
          return {false, "associativity", {x, y, z}, 3};
  return {true, nullptr, {0, 0, 0}, 0};
}

inline bool is_semilattice(const Operation& op) {
  return check_semilattice(op).ok;
}

/// The identity element (e ^ x = x for all x), if present.
inline std::optional<Element> find_identity(const Operation& meet) {
  std::uint32_t k = meet.domain.size;
  for (Element e = 0; e < k; ++e) {
    bool all = true;
    for (Element x = 0; x < k && all; ++x) all = meet_of(meet, e, x) == x;
    if (all) return e;
  }
  return std::nullopt;
}

/// The zero element (z ^ x = z for all x), if present.
inline std::optional<Element> find_zero(const Operation& meet) {
  std::uint32_t k = meet.domain.size;
  for (Element z = 0; z < k; ++z) {
    bool all = true;
    for (Element x = 0; x < k && all; ++x) all = meet_of(meet, z, x) == z;
    if (all) return z;
  }
  return std::nullopt;
}

/// A validated semilattice operation together with its distinguished
/// elements (when they exist).
struct SemilatticeStructure {
  Operation meet;
  std::optional<Element> identity;
  std::optional<Element> zero;

  std::uint32_t domain_size() const { return meet.domain.size; }
  Domain domain() const { return meet.domain; }

  Element apply(Element a, Element b) const { return meet_of(meet, a, b); }

  static SemilatticeStructure from_meet(const Operation& op) {
    check_operation(op);
    auto check = check_semilattice(op);
    require(check.ok, ErrorKind::InvalidInput,
            std::string("not a semilattice operation: ") +
                (check.law ? check.law : "") + " fails");
    return SemilatticeStructure{op, find_identity(op), find_zero(op)};
  }
};

/// Min over the chain 0 < 1 < ... < k-1; identity k-1, zero 0.
/// For k = 2 this is the Boolean conjunction.
inline SemilatticeStructure chain_semilattice(std::uint32_t k) {
  require(k >= 1, ErrorKind::InvalidInput, "chain_semilattice: empty domain");
  Operation meet{Domain{k}, 2, Table(static_cast<std::size_t>(k) * k)};
  for (Element a = 0; a < k; ++a)
    for (Element b = 0; b < k; ++b)
      meet.table[static_cast<std::size_t>(a) * k + b] = std::min(a, b);
  return SemilatticeStructure{meet, static_cast<Element>(k - 1), Element{0}};
}

} // namespace minorlab
