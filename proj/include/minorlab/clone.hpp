#pragma once

#include <optional>
#include <unordered_set>

#include "minorlab/decomposition.hpp"
#include "minorlab/kernel.hpp"
#include "minorlab/minor_search.hpp"

namespace minorlab {

struct CloneCaps {
  std::size_t max_part_size = 100'000;
};

/// The arity-indexed parts of the clone generated by a finite set of
/// operations, materialized up to max_arity.
///
/// Every n-ary member of a generated clone is an n-ary term function, and a
/// term evaluates bottom-up through subterms that are themselves n-ary
/// members, so a fixpoint of single compositions generator(h_1, ..., h_r)
/// with n-ary h_i yields the full n-ary part for every n <= max_arity
/// (generator arities are required not to exceed max_arity).
class CloneTable {
public:
  CloneTable(Domain domain, std::vector<Operation> generators,
             std::uint32_t max_arity, CloneCaps caps = {})
      : domain_(domain), generators_(std::move(generators)),
        max_arity_(max_arity) {
    require(max_arity_ >= 1, ErrorKind::InvalidInput,
            "clone table: max_arity must be at least 1");
    for (const Operation& g : generators_) {
      check_operation(g);
      require(g.domain == domain_, ErrorKind::DomainMismatch,
              "clone table: generator over a different domain");
      require(g.arity <= max_arity_, ErrorKind::InvalidInput,
              "clone table: generator arity exceeds max_arity");
    }
    build(caps);
  }

  Domain domain() const { return domain_; }
  std::uint32_t max_arity() const { return max_arity_; }
  const std::vector<Operation>& generators() const { return generators_; }

  /// Canonically ordered n-ary part, 1 <= n <= max_arity.
  const std::vector<Operation>& part(std::uint32_t arity) const {
    require(arity >= 1 && arity <= max_arity_, ErrorKind::InvalidInput,
            "clone table: arity out of materialized range");
    return parts_[arity - 1];
  }

  bool contains(const Operation& op) const {
    if (op.domain != domain_ || op.arity == 0 || op.arity > max_arity_)
      return false;
    const auto& p = parts_[op.arity - 1];
    return std::binary_search(p.begin(), p.end(), op);
  }

private:
  void build(const CloneCaps& caps) {
    parts_.resize(max_arity_);
    for (std::uint32_t n = 1; n <= max_arity_; ++n) {
      std::unordered_set<Operation, OperationHash> seen;
      std::vector<Operation> members;
      for (std::uint32_t i = 1; i <= n; ++i) {
        Operation p = projection(domain_, n, i);
        if (seen.insert(p).second) members.push_back(std::move(p));
      }
      bool grew = true;
      while (grew) {
        grew = false;
        std::size_t snapshot = members.size();
        for (const Operation& gen : generators_) {
          std::vector<std::size_t> pick(gen.arity, 0);
          std::vector<Operation> tuple(gen.arity);
          for (;;) {
            for (std::uint32_t j = 0; j < gen.arity; ++j)
              tuple[j] = members[pick[j]];
            Operation h = compose(gen, std::span<const Operation>(tuple));
            if (seen.insert(h).second) {
              members.push_back(std::move(h));
              require(members.size() <= caps.max_part_size,
                      ErrorKind::CapExceeded,
                      "clone closure exceeded the part-size cap");
              grew = true;
            }
            // Odometer over tuples drawn from the pre-round snapshot.
            std::uint32_t j = gen.arity;
            while (j-- > 0) {
              if (++pick[j] < snapshot) break;
              pick[j] = 0;
              if (j == 0) goto next_generator;
            }
            if (gen.arity == 0) break;
            continue;
          next_generator:
            break;
          }
        }
      }
      std::sort(members.begin(), members.end());
      parts_[n - 1] = std::move(members);
    }
  }

  Domain domain_;
  std::vector<Operation> generators_;
  std::uint32_t max_arity_;
  std::vector<std::vector<Operation>> parts_;
};

inline CloneTable generate_clone(Domain domain, std::vector<Operation> generators,
                                 std::uint32_t max_arity, CloneCaps caps = {}) {
  return CloneTable(domain, std::move(generators), max_arity, caps);
}

/// Searches for a decomposition f = g(h_1, ..., h_m) with every h_i in
/// C^(f.arity).  The search is exhaustive over that inner space (pruned but
/// complete), so nullopt is a proof that f is not a C-minor of g.  The
/// first witness in lexicographic candidate order is returned.
inline std::optional<Decomposition> is_c_minor(const Operation& f,
                                               const Operation& g,
                                               const CloneTable& C,
                                               SearchBudget* budget = nullptr) {
  check_operation(f);
  check_operation(g);
  require(f.domain == g.domain && f.domain == C.domain(),
          ErrorKind::DomainMismatch, "is_c_minor: domain mismatch");
  require(f.arity <= C.max_arity(), ErrorKind::InvalidInput,
          "is_c_minor: f.arity exceeds the clone table's max_arity");
  const std::vector<Operation>& pool = C.part(f.arity);
  std::vector<Table> candidates;
  candidates.reserve(pool.size());
  for (const Operation& op : pool) candidates.push_back(op.table);
  SearchBudget local;
  SearchBudget& b = budget ? *budget : local;
  auto found = find_inner_tuple(g, f, candidates, b);
  if (!found) return std::nullopt;
  Decomposition d{g, {}};
  d.inner.reserve(found->size());
  for (std::uint32_t idx : *found) d.inner.push_back(pool[idx]);
  return d;
}

inline bool c_equivalent(const Operation& f, const Operation& g,
                         const CloneTable& C, SearchBudget* budget = nullptr) {
  return is_c_minor(f, g, C, budget).has_value() &&
         is_c_minor(g, f, C, budget).has_value();
}

namespace detail {

/// Least m and lexicographically first m-combination of `pool` indices whose
/// joint kernel refines f's kernel.  Skips nothing the caller didn't already
/// exclude; the pool must make success certain at m = pool-independent bound
/// (projections guarantee it for clone parts).
inline std::optional<std::pair<std::uint32_t, std::vector<std::uint32_t>>>
least_refining_combination(const Operation& f,
                           const std::vector<const Operation*>& pool,
                           std::uint32_t max_m, SearchBudget& budget) {
  Kernel kf = kernel_of(f);
  std::vector<std::uint32_t> idx;
  std::vector<const Operation*> chosen;
  std::optional<std::vector<std::uint32_t>> hit;

  auto check = [&]() {
    budget.spend();
    return joint_kernel_refines(std::span<const Operation* const>(chosen), f);
  };

  std::function<bool(std::uint32_t, std::uint32_t)> rec =
      [&](std::uint32_t depth, std::uint32_t first) -> bool {
    if (depth == 0) {
      if (check()) { hit = idx; return true; }
      return false;
    }
    for (std::uint32_t i = first;
         i + depth <= static_cast<std::uint32_t>(pool.size()); ++i) {
      idx.push_back(i);
      chosen.push_back(pool[i]);
      bool done = rec(depth - 1, i + 1);
      idx.pop_back();
      chosen.pop_back();
      if (done) return true;
    }
    return false;
  };

  for (std::uint32_t m = 1; m <= max_m; ++m)
    if (rec(m, 0)) return std::make_pair(m, *hit);
  return std::nullopt;
}

} // namespace detail

/// The C-degree of f: 0 for constants, otherwise the least m admitting a
/// decomposition with m inner members of C^(f.arity).  Minimal
/// decompositions never repeat an inner member and never use a constant
/// one (either would collapse to fewer coordinates), so the search scans
/// ascending combinations of non-constant members; projections make m =
/// f.arity always succeed.
inline std::uint32_t c_degree(const Operation& f, const CloneTable& C,
                              SearchBudget* budget = nullptr) {
  check_operation(f);
  require(f.domain == C.domain(), ErrorKind::DomainMismatch,
          "c_degree: domain mismatch");
  require(f.arity <= C.max_arity(), ErrorKind::InvalidInput,
          "c_degree: f.arity exceeds the clone table's max_arity");
  if (is_constant(f)) return 0;
  std::vector<const Operation*> pool;
  for (const Operation& op : C.part(f.arity))
    if (!is_constant(op)) pool.push_back(&op);
  SearchBudget local;
  SearchBudget& b = budget ? *budget : local;
  auto found = detail::least_refining_combination(f, pool, f.arity, b);
  require(found.has_value(), ErrorKind::Internal,
          "c_degree: no decomposition found although projections exist");
  return found->first;
}

/// A minimal decomposition of a non-constant f: inner tuple of c_degree(f)
/// non-constant members of C^(f.arity) (lexicographically first combination
/// that factors f) and the outer operation synthesized from f's values,
/// element 0 off the inner image.
inline Decomposition minimal_decomposition(const Operation& f,
                                           const CloneTable& C,
                                           SearchBudget* budget = nullptr) {
  check_operation(f);
  require(f.domain == C.domain(), ErrorKind::DomainMismatch,
          "minimal_decomposition: domain mismatch");
  require(!is_constant(f), ErrorKind::ConstantFunction,
          "minimal_decomposition: constants have degree 0 and no "
          "minimal decomposition");
  require(f.arity <= C.max_arity(), ErrorKind::InvalidInput,
          "minimal_decomposition: f.arity exceeds the clone table's max_arity");
  std::vector<const Operation*> pool;
  for (const Operation& op : C.part(f.arity))
    if (!is_constant(op)) pool.push_back(&op);
  SearchBudget local;
  SearchBudget& b = budget ? *budget : local;
  auto found = detail::least_refining_combination(f, pool, f.arity, b);
  require(found.has_value(), ErrorKind::Internal,
          "minimal_decomposition: projections should always factor f");
  Decomposition d;
  d.inner.reserve(found->second.size());
  for (std::uint32_t i : found->second) d.inner.push_back(*pool[i]);
  d.outer = synthesize_outer(std::span<const Operation>(d.inner), f);
  require(d.decomposes(f), ErrorKind::Internal,
          "minimal_decomposition: synthesized outer failed to recompose");
  return d;
}

/// Functional dependence of a tuple (all one arity): true iff some member
/// is determined by the others, i.e. the joint kernel of the rest refines
/// its kernel.  Requires at least two members.
inline bool is_functionally_dependent(std::span<const Operation> tuple) {
  require(tuple.size() >= 2, ErrorKind::InvalidInput,
          "is_functionally_dependent: need at least two operations");
  for (std::size_t i = 1; i < tuple.size(); ++i)
    require(tuple[i].domain == tuple[0].domain &&
                tuple[i].arity == tuple[0].arity,
            ErrorKind::InvalidInput,
            "is_functionally_dependent: mixed arities or domains");
  std::vector<Operation> rest;
  rest.reserve(tuple.size() - 1);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    rest.clear();
    for (std::size_t j = 0; j < tuple.size(); ++j)
      if (j != i) rest.push_back(tuple[j]);
    if (joint_kernel_refines(std::span<const Operation>(rest), tuple[i]))
      return true;
  }
  return false;
}

} // namespace minorlab
