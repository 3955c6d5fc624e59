#pragma once

#include "minorlab/core.hpp"

namespace minorlab {

/// A factorization f = outer(inner_1, ..., inner_m): the inner operations
/// share one arity and come from the clone under consideration.
struct Decomposition {
  Operation outer;
  std::vector<Operation> inner;

  std::uint32_t inner_arity() const {
    return inner.empty() ? 0 : inner[0].arity;
  }

  Operation composed() const {
    return compose(outer, std::span<const Operation>(inner));
  }

  bool decomposes(const Operation& f) const { return composed() == f; }
};

} // namespace minorlab
