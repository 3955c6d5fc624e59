#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>

#include "minorlab/common.hpp"

namespace minorlab {

/// A finite domain {0, 1, ..., size-1}.
struct Domain {
  std::uint32_t size = 0;

  friend bool operator==(const Domain&, const Domain&) = default;
};

inline std::size_t pow_size(std::uint32_t base, std::uint32_t exp) {
  std::size_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    require(r <= (std::size_t{1} << 31) / base, ErrorKind::CapExceeded,
            "value table too large: " + std::to_string(base) + "^" +
                std::to_string(exp));
    r *= base;
  }
  return r;
}

/// A finitary operation given by its full value table.
///
/// The table is row-major with the first argument most significant: the
/// entry for (a_1, ..., a_n) sits at index sum a_i * k^(n-i).
struct Operation {
  Domain domain;
  std::uint32_t arity = 0;
  Table table;

  std::size_t rows() const { return table.size(); }

  friend bool operator==(const Operation&, const Operation&) = default;
};

/// Canonical ordering: by arity, then value table (domains compare first so
/// mixed-domain containers stay well ordered, though they never mix in use).
inline bool operator<(const Operation& a, const Operation& b) {
  if (a.domain.size != b.domain.size) return a.domain.size < b.domain.size;
  if (a.arity != b.arity) return a.arity < b.arity;
  return a.table < b.table;
}

struct OperationHash {
  std::size_t operator()(const Operation& op) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::size_t v) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(op.domain.size);
    mix(op.arity);
    for (Element e : op.table) mix(e);
    return h;
  }
};

inline void check_operation(const Operation& op) {
  require(op.domain.size >= 1, ErrorKind::InvalidInput, "domain must be nonempty");
  require(op.arity >= 1, ErrorKind::InvalidInput, "arity must be at least 1");
  require(op.table.size() == pow_size(op.domain.size, op.arity),
          ErrorKind::InvalidInput, "table length must be domain^arity");
  for (Element e : op.table)
    require(e < op.domain.size, ErrorKind::InvalidInput,
            "table entry out of domain range");
}

inline std::size_t encode_args(std::span<const Element> args, std::uint32_t k) {
  std::size_t idx = 0;
  for (Element a : args) idx = idx * k + a;
  return idx;
}

/// Writes the argument tuple encoded by `index` into `out` (a_1 first).
inline void decode_index(std::size_t index, std::uint32_t arity, std::uint32_t k,
                         std::span<Element> out) {
  for (std::uint32_t i = arity; i-- > 0;) {
    out[i] = static_cast<Element>(index % k);
    index /= k;
  }
}

inline Element eval(const Operation& op, std::span<const Element> args) {
  require(args.size() == op.arity, ErrorKind::InvalidInput,
          "eval: wrong number of arguments");
  return op.table[encode_args(args, op.domain.size)];
}

/// The i-th n-ary projection, i being 1-based.
inline Operation projection(Domain d, std::uint32_t arity, std::uint32_t i) {
  require(i >= 1 && i <= arity, ErrorKind::InvalidInput,
          "projection index out of range");
  std::size_t n = pow_size(d.size, arity);
  // Digit i of the row index cycles with period k^(n-i).
  std::size_t period = pow_size(d.size, arity - i);
  Operation op{d, arity, Table(n)};
  for (std::size_t r = 0; r < n; ++r)
    op.table[r] = static_cast<Element>((r / period) % d.size);
  return op;
}

/// The n-ary constant with value c.  (Constants exist at every arity >= 1;
/// there are no nullary operations.)
inline Operation constant_op(Domain d, std::uint32_t arity, Element c) {
  require(c < d.size, ErrorKind::InvalidInput, "constant out of range");
  require(arity >= 1, ErrorKind::InvalidInput, "arity must be at least 1");
  return Operation{d, arity, Table(pow_size(d.size, arity), c)};
}

inline bool is_constant(const Operation& op) {
  return std::all_of(op.table.begin(), op.table.end(),
                     [&](Element e) { return e == op.table[0]; });
}

/// Superposition f(g_1, ..., g_n): every g_i shares one arity m, and the
/// result is the m-ary operation a |-> f(g_1(a), ..., g_n(a)).
inline Operation compose(const Operation& f, std::span<const Operation> inner) {
  require(inner.size() == f.arity, ErrorKind::InvalidInput,
          "compose: inner tuple length must equal outer arity");
  require(!inner.empty(), ErrorKind::InvalidInput, "compose: empty inner tuple");
  std::uint32_t m = inner[0].arity;
  for (const Operation& g : inner) {
    require(g.domain == f.domain, ErrorKind::DomainMismatch,
            "compose: mixed domains");
    require(g.arity == m, ErrorKind::InvalidInput,
            "compose: inner operations must share one arity");
  }
  std::uint32_t k = f.domain.size;
  std::size_t rows = inner[0].rows();
  Operation out{f.domain, m, Table(rows)};
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t idx = 0;
    for (const Operation& g : inner) idx = idx * k + g.table[r];
    out.table[r] = f.table[idx];
  }
  return out;
}

inline Operation compose(const Operation& f, std::initializer_list<Operation> inner) {
  std::vector<Operation> v(inner);
  return compose(f, std::span<const Operation>(v));
}

/// True if the value of `op` depends on its i-th variable (1-based).
inline bool depends_on(const Operation& op, std::uint32_t i) {
  std::uint32_t k = op.domain.size;
  std::size_t period = pow_size(k, op.arity - i); // stride of digit i
  std::size_t block = period * k;
  for (std::size_t base = 0; base < op.rows(); base += block)
    for (std::size_t off = 0; off < period; ++off) {
      Element v = op.table[base + off];
      for (std::uint32_t a = 1; a < k; ++a)
        if (op.table[base + off + a * period] != v) return true;
    }
  return false;
}

/// 1-based indices of the essential variables, ascending.
inline std::vector<std::uint32_t> essential_variables(const Operation& op) {
  std::vector<std::uint32_t> ess;
  for (std::uint32_t i = 1; i <= op.arity; ++i)
    if (depends_on(op, i)) ess.push_back(i);
  return ess;
}

/// Restriction of `op` to the given variables (which must include every
/// essential one); the result's j-th variable is vars[j-1] of `op`.
inline Operation restrict_to_variables(const Operation& op,
                                       const std::vector<std::uint32_t>& vars) {
  std::uint32_t k = op.domain.size;
  std::uint32_t m = static_cast<std::uint32_t>(vars.size());
  if (m == 0) {
    // Fully inessential: keep a single dummy variable so arity stays >= 1.
    return constant_op(op.domain, 1, op.table[0]);
  }
  std::size_t rows = pow_size(k, m);
  Operation out{op.domain, m, Table(rows)};
  std::vector<Element> small(m), big(op.arity, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    decode_index(r, m, k, small);
    std::fill(big.begin(), big.end(), 0);
    for (std::uint32_t j = 0; j < m; ++j) big[vars[j] - 1] = small[j];
    out.table[r] = op.table[encode_args(big, k)];
  }
  return out;
}

/// Drops inessential variables.  Returns the reduced operation and the
/// 1-based original indices its variables came from.
inline std::pair<Operation, std::vector<std::uint32_t>> drop_inessential(
    const Operation& op) {
  auto ess = essential_variables(op);
  if (ess.size() == op.arity) return {op, ess};
  return {restrict_to_variables(op, ess), ess};
}

/// The operation (a_1,...,a_n) |-> op(a_perm[0], ..., a_perm[n-1]),
/// perm holding 1-based variable indices into an ambient tuple of size
/// `ambient` (defaults to the largest index used).
inline Operation substitute_variables(const Operation& op,
                                      const std::vector<std::uint32_t>& perm,
                                      std::uint32_t ambient = 0) {
  require(perm.size() == op.arity, ErrorKind::InvalidInput,
          "substitute_variables: wrong permutation size");
  std::uint32_t k = op.domain.size;
  std::uint32_t n = ambient;
  for (std::uint32_t p : perm) n = std::max(n, p);
  std::size_t rows = pow_size(k, n);
  Operation out{op.domain, n, Table(rows)};
  std::vector<Element> args(n), inner(op.arity);
  for (std::size_t r = 0; r < rows; ++r) {
    decode_index(r, n, k, args);
    for (std::size_t j = 0; j < perm.size(); ++j) inner[j] = args[perm[j] - 1];
    out.table[r] = op.table[encode_args(inner, k)];
  }
  return out;
}

/// Every operation of the given arity over the domain, in canonical (table)
/// order.  Guarded by `cap` since there are k^(k^n) of them.
inline std::vector<Operation> all_operations(Domain d, std::uint32_t arity,
                                             std::size_t cap = 1u << 20) {
  std::size_t rows = pow_size(d.size, arity);
  require(rows <= 24, ErrorKind::CapExceeded,
          "all_operations: table too large to enumerate");
  std::size_t count = 1;
  for (std::size_t r = 0; r < rows; ++r) {
    count *= d.size;
    require(count <= cap, ErrorKind::CapExceeded,
            "all_operations: enumeration exceeds cap");
  }
  std::vector<Operation> out;
  out.reserve(count);
  Operation op{d, arity, Table(rows, 0)};
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t v = c;
    for (std::size_t r = rows; r-- > 0;) {
      op.table[r] = static_cast<Element>(v % d.size);
      v /= d.size;
    }
    out.push_back(op);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace minorlab
