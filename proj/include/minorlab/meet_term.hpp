#pragma once

#include <sstream>

#include "minorlab/semilattice.hpp"

namespace minorlab {

/// A meet of variables ^{i in vars} x_i over an ambient tuple x_1..x_n,
/// with vars a nonempty subset of [n] stored as a bitmask (bit i-1 = x_i).
struct MeetTerm {
  std::uint32_t ambient = 0;
  std::uint32_t vars = 0;

  friend bool operator==(const MeetTerm&, const MeetTerm&) = default;
};

inline MeetTerm make_meet_term(std::uint32_t ambient, std::uint32_t vars) {
  require(ambient >= 1 && ambient <= 31, ErrorKind::InvalidInput,
          "meet term: ambient arity out of range");
  require(vars != 0, ErrorKind::InvalidInput,
          "meet term: variable set must be nonempty");
  require(vars < (1u << ambient), ErrorKind::InvalidInput,
          "meet term: variable out of ambient range");
  return MeetTerm{ambient, vars};
}

/// Either a meet term or a constant (used when the clone carries 0 / 1).
struct ExtendedTerm {
  bool is_constant = false;
  MeetTerm term;     // valid when !is_constant
  Element value = 0; // valid when is_constant

  static ExtendedTerm meet(MeetTerm t) { return {false, t, 0}; }
  static ExtendedTerm constant(std::uint32_t ambient, Element v) {
    return {true, MeetTerm{ambient, 0}, v};
  }
  std::uint32_t ambient() const { return term.ambient; }
  friend bool operator==(const ExtendedTerm&, const ExtendedTerm&) = default;
};

/// A tuple of meet terms over one shared ambient arity.
struct TermVector {
  std::uint32_t ambient = 0;
  std::vector<MeetTerm> terms;

  std::size_t size() const { return terms.size(); }
  friend bool operator==(const TermVector&, const TermVector&) = default;
};

inline TermVector make_term_vector(std::uint32_t ambient,
                                   std::vector<std::uint32_t> masks) {
  require(!masks.empty(), ErrorKind::InvalidInput,
          "term vector must contain at least one term");
  TermVector tv{ambient, {}};
  tv.terms.reserve(masks.size());
  for (std::uint32_t m : masks) tv.terms.push_back(make_meet_term(ambient, m));
  return tv;
}

/// `^{1,3}` with 1-based variable indices.
inline std::string term_text(const MeetTerm& t) {
  std::ostringstream os;
  os << "^{";
  bool first = true;
  for_each_bit(t.vars, [&](std::uint32_t b) {
    if (!first) os << ',';
    os << b + 1;
    first = false;
  });
  os << "}";
  return os.str();
}

inline std::string term_text(const ExtendedTerm& t) {
  if (t.is_constant) return "const " + std::to_string(int(t.value));
  return term_text(t.term);
}

inline std::string term_text(const TermVector& tv) {
  std::string out;
  for (std::size_t j = 0; j < tv.terms.size(); ++j) {
    if (j) out += ' ';
    out += term_text(tv.terms[j]);
  }
  return out;
}

/// Value table of a meet term under S.
inline Operation realize(const MeetTerm& t, const SemilatticeStructure& S) {
  std::uint32_t k = S.domain_size();
  std::size_t rows = pow_size(k, t.ambient);
  Operation op{S.domain(), t.ambient, Table(rows)};
  std::vector<Element> args(t.ambient);
  for (std::size_t r = 0; r < rows; ++r) {
    decode_index(r, t.ambient, k, args);
    Element acc = 0;
    bool first = true;
    for_each_bit(t.vars, [&](std::uint32_t b) {
      acc = first ? args[b] : S.apply(acc, args[b]);
      first = false;
    });
    op.table[r] = acc;
  }
  return op;
}

inline Operation realize(const ExtendedTerm& t, const SemilatticeStructure& S) {
  if (t.is_constant) return constant_op(S.domain(), t.term.ambient, t.value);
  return realize(t.term, S);
}

inline std::vector<Operation> realize(const TermVector& tv,
                                      const SemilatticeStructure& S) {
  std::vector<Operation> ops;
  ops.reserve(tv.terms.size());
  for (const MeetTerm& t : tv.terms) ops.push_back(realize(t, S));
  return ops;
}

/// All meet-term value tables over a fixed ambient arity, indexed by the
/// variable mask (entry 0 is unused).  Shared by the search routines.
class MeetTermSpace {
public:
  MeetTermSpace(const SemilatticeStructure& S, std::uint32_t ambient)
      : ambient_(ambient) {
    require(ambient >= 1 && ambient <= 20, ErrorKind::CapExceeded,
            "meet term space: ambient arity out of range");
    std::uint32_t k = S.domain_size();
    std::size_t rows = pow_size(k, ambient);
    std::uint32_t count = 1u << ambient;
    require(static_cast<std::uint64_t>(rows) * count <= (1ull << 26),
            ErrorKind::CapExceeded, "meet term space: table set too large");
    tables_.resize(count);
    // Fill by lowest set bit: ^{i} is a projection; larger sets extend a
    // smaller table by one meet.
    std::vector<Element> args(ambient);
    for (std::uint32_t mask = 1; mask < count; ++mask) {
      tables_[mask].resize(rows);
      std::uint32_t low = mask & (mask - 1u);
      std::uint32_t bit = static_cast<std::uint32_t>(std::countr_zero(mask));
      if (low == 0) {
        std::size_t period = pow_size(k, ambient - (bit + 1));
        for (std::size_t r = 0; r < rows; ++r)
          tables_[mask][r] = static_cast<Element>((r / period) % k);
      } else {
        const Table& rest = tables_[low];
        const Table& one = tables_[1u << bit];
        for (std::size_t r = 0; r < rows; ++r)
          tables_[mask][r] = S.apply(one[r], rest[r]);
      }
    }
  }

  std::uint32_t ambient() const { return ambient_; }
  std::uint32_t count() const { return (1u << ambient_) - 1; }
  const Table& table(std::uint32_t mask) const { return tables_[mask]; }

private:
  std::uint32_t ambient_;
  std::vector<Table> tables_;
};

} // namespace minorlab
