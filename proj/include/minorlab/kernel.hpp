#pragma once

#include <span>
#include <unordered_map>

#include "minorlab/core.hpp"

namespace minorlab {

/// The kernel of an operation: the partition of its argument tuples into
/// fibers.  Canonical labeling: each row is labeled by the smallest row
/// index in its block.
struct Kernel {
  std::vector<std::uint32_t> label;

  std::size_t rows() const { return label.size(); }
  friend bool operator==(const Kernel&, const Kernel&) = default;
};

inline Kernel kernel_of(const Operation& op) {
  Kernel k;
  k.label.resize(op.rows());
  // First row index seen per value; domain values are < 256.
  std::uint32_t first[256];
  std::fill(std::begin(first), std::end(first), UINT32_MAX);
  for (std::size_t r = 0; r < op.rows(); ++r) {
    Element v = op.table[r];
    if (first[v] == UINT32_MAX) first[v] = static_cast<std::uint32_t>(r);
    k.label[r] = first[v];
  }
  return k;
}

/// True if p refines q (every block of p lies inside a block of q).
/// Both must partition the same row space.
inline bool kernel_refines(const Kernel& p, const Kernel& q) {
  require(p.rows() == q.rows(), ErrorKind::InvalidInput,
          "kernel_refines: partitions of different row spaces");
  for (std::size_t r = 0; r < p.rows(); ++r)
    if (q.label[r] != q.label[p.label[r]]) return false;
  return true;
}

/// True if the joint kernel of `tuple` (all of one arity) refines the kernel
/// of `f`: rows on which every tuple member agrees must share f's value.
/// This is the factorization criterion: it holds iff f = g(tuple) for some g.
inline bool joint_kernel_refines(std::span<const Operation* const> tuple,
                                 const Operation& f) {
  require(!tuple.empty(), ErrorKind::InvalidInput,
          "joint_kernel_refines: empty tuple");
  std::size_t rows = f.rows();
  for (const Operation* t : tuple)
    require(t->rows() == rows && t->domain == f.domain, ErrorKind::InvalidInput,
            "joint_kernel_refines: row space mismatch");
  if (tuple.size() <= 8) {
    // Pack the joint value into one 64-bit key.
    std::unordered_map<std::uint64_t, Element> seen;
    seen.reserve(rows * 2);
    for (std::size_t r = 0; r < rows; ++r) {
      std::uint64_t key = 0;
      for (const Operation* t : tuple) key = (key << 8) | t->table[r];
      auto [it, fresh] = seen.emplace(key, f.table[r]);
      if (!fresh && it->second != f.table[r]) return false;
    }
    return true;
  }
  std::unordered_map<std::string, Element> seen;
  std::string key(tuple.size(), '\0');
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < tuple.size(); ++j)
      key[j] = static_cast<char>(tuple[j]->table[r]);
    auto [it, fresh] = seen.emplace(key, f.table[r]);
    if (!fresh && it->second != f.table[r]) return false;
  }
  return true;
}

inline bool joint_kernel_refines(std::span<const Operation> tuple,
                                 const Operation& f) {
  std::vector<const Operation*> ptrs;
  ptrs.reserve(tuple.size());
  for (const Operation& t : tuple) ptrs.push_back(&t);
  return joint_kernel_refines(std::span<const Operation* const>(ptrs), f);
}

/// Given a tuple whose joint kernel refines f's kernel, synthesizes the
/// unique-on-image outer operation g with f = g(tuple); off-image rows are
/// filled with element 0, making the result deterministic.
inline Operation synthesize_outer(std::span<const Operation> tuple,
                                  const Operation& f) {
  std::uint32_t k = f.domain.size;
  std::uint32_t m = static_cast<std::uint32_t>(tuple.size());
  Operation g{f.domain, m, Table(pow_size(k, m), 0)};
  std::vector<bool> assigned(g.rows(), false);
  for (std::size_t r = 0; r < f.rows(); ++r) {
    std::size_t idx = 0;
    for (const Operation& t : tuple) idx = idx * k + t.table[r];
    if (assigned[idx]) {
      require(g.table[idx] == f.table[r], ErrorKind::InvalidInput,
              "synthesize_outer: tuple does not factor f");
    } else {
      g.table[idx] = f.table[r];
      assigned[idx] = true;
    }
  }
  return g;
}

} // namespace minorlab
