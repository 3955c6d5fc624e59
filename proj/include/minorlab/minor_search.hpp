#pragma once

#include <functional>
#include <optional>

#include "minorlab/core.hpp"

namespace minorlab {

/// Node budget for backtracking searches.  A "node" is one candidate
/// attempted at one depth.  Exceeding the budget raises BudgetExceeded,
/// which is distinct from a completed search that found nothing.
struct SearchBudget {
  std::uint64_t limit = 50'000'000;
  std::uint64_t used = 0;

  void spend() {
    if (++used > limit)
      raise(ErrorKind::BudgetExceeded,
            "search budget exceeded after " + std::to_string(used - 1) +
                " nodes");
  }
};

/// Backtracking search for an inner tuple (c_1, ..., c_m), each c_j drawn
/// from `candidates` (value tables over the target's row space), with
/// g(c_1, ..., c_m) equal to `target`.  Coordinates are assigned in order
/// j = 1..m and candidates tried in list order, so the first witness found
/// is the lexicographically least one; partial assignments are pruned by
/// the set of values g can still reach on each row.
///
/// `leaf_filter`, when set, must also accept the full assignment (indices
/// into `candidates`); the search continues past rejected leaves.
class MinorSearch {
public:
  MinorSearch(const Operation& g, const Operation& target,
              std::span<const Table> candidates, SearchBudget& budget)
      : g_(g), target_(target), candidates_(candidates), budget_(budget) {
    require(g.domain == target.domain, ErrorKind::DomainMismatch,
            "minor search: outer and target domains differ");
    k_ = g.domain.size;
    m_ = g.arity;
    rows_ = target.rows();
    for (const Table& c : candidates_)
      require(c.size() == rows_, ErrorKind::InvalidInput,
              "minor search: candidate row space mismatch");
    build_masks();
    state_.assign(static_cast<std::size_t>(m_ + 1) * rows_, 0);
    chosen_.assign(m_, 0);
  }

  std::optional<std::vector<std::uint32_t>> run(
      const std::function<bool(std::span<const std::uint32_t>)>& leaf_filter =
          nullptr) {
    // Row precheck: every target value must be reachable at the root.
    for (std::size_t r = 0; r < rows_; ++r)
      if (!(masks_[0][0] >> target_.table[r] & 1)) return std::nullopt;
    if (descend(0, leaf_filter)) return chosen_;
    return std::nullopt;
  }

private:
  // masks_[j][p]: set of values g can take from the depth-j prefix node p.
  void build_masks() {
    require(k_ <= 64, ErrorKind::CapExceeded,
            "minor search: domain too large for value masks");
    masks_.resize(m_ + 1);
    std::size_t width = g_.rows();
    masks_[m_].resize(width);
    for (std::size_t p = 0; p < width; ++p)
      masks_[m_][p] = 1ULL << g_.table[p];
    for (std::uint32_t j = m_; j-- > 0;) {
      width /= k_;
      masks_[j].resize(width);
      for (std::size_t p = 0; p < width; ++p) {
        std::uint64_t acc = 0;
        for (std::uint32_t v = 0; v < k_; ++v)
          acc |= masks_[j + 1][p * k_ + v];
        masks_[j][p] = acc;
      }
    }
  }

  bool descend(std::uint32_t depth,
               const std::function<bool(std::span<const std::uint32_t>)>& leaf_filter) {
    if (depth == m_) return !leaf_filter || leaf_filter(chosen_);
    const std::uint32_t* cur = &state_[static_cast<std::size_t>(depth) * rows_];
    std::uint32_t* next = &state_[static_cast<std::size_t>(depth + 1) * rows_];
    const auto& mask = masks_[depth + 1];
    for (std::uint32_t c = 0; c < candidates_.size(); ++c) {
      budget_.spend();
      const Table& val = candidates_[c];
      bool ok = true;
      for (std::size_t r = 0; r < rows_; ++r) {
        std::uint32_t node = cur[r] * k_ + val[r];
        if (!(mask[node] >> target_.table[r] & 1)) { ok = false; break; }
        next[r] = node;
      }
      if (!ok) continue;
      chosen_[depth] = c;
      if (descend(depth + 1, leaf_filter)) return true;
    }
    return false;
  }

  const Operation& g_;
  const Operation& target_;
  std::span<const Table> candidates_;
  SearchBudget& budget_;
  std::uint32_t k_ = 0, m_ = 0;
  std::size_t rows_ = 0;
  std::vector<std::vector<std::uint64_t>> masks_;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> chosen_;
};

/// Convenience wrapper: first inner tuple (as candidate indices) with
/// g(tuple) == target, or nullopt after exhausting the space.
inline std::optional<std::vector<std::uint32_t>> find_inner_tuple(
    const Operation& g, const Operation& target,
    std::span<const Table> candidates, SearchBudget& budget,
    const std::function<bool(std::span<const std::uint32_t>)>& leaf_filter =
        nullptr) {
  MinorSearch search(g, target, candidates, budget);
  return search.run(leaf_filter);
}

} // namespace minorlab
