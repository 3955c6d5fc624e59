#pragma once

#include "minorlab/canonical.hpp"
#include "minorlab/decomposition.hpp"
#include "minorlab/minor_search.hpp"

namespace minorlab {

/// A minor witness over a semilattice clone: one term per coordinate of the
/// outer operation, plus the realized decomposition.
struct SlDecomposition {
  std::vector<ExtendedTerm> terms;
  Decomposition decomposition;

  std::string text() const {
    std::string out;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (j) out += ' ';
      out += term_text(terms[j]);
    }
    return out;
  }
};

namespace detail {

inline std::optional<SlDecomposition> term_minor_search(
    const Operation& f, const Operation& g, const SemilatticeStructure& S,
    bool use_zero, bool use_one, SearchBudget& budget) {
  check_operation(f);
  check_operation(g);
  require(f.domain == S.domain() && g.domain == S.domain(),
          ErrorKind::DomainMismatch,
          "minor check: operations must live over the semilattice domain");
  std::uint32_t n = f.arity;
  MeetTermSpace space(S, n);
  std::vector<Table> candidates;
  std::vector<ExtendedTerm> meaning;
  candidates.reserve(space.count() + 2);
  meaning.reserve(space.count() + 2);
  for (std::uint32_t mask = 1; mask <= space.count(); ++mask) {
    candidates.push_back(space.table(mask));
    meaning.push_back(ExtendedTerm::meet(MeetTerm{n, mask}));
  }
  if (use_zero) {
    require(S.zero.has_value(), ErrorKind::InvalidInput,
            "minor check: clone uses a zero the semilattice does not have");
    candidates.push_back(Table(f.rows(), *S.zero));
    meaning.push_back(ExtendedTerm::constant(n, *S.zero));
  }
  if (use_one) {
    require(S.identity.has_value(), ErrorKind::InvalidInput,
            "minor check: clone uses an identity the semilattice does not have");
    candidates.push_back(Table(f.rows(), *S.identity));
    meaning.push_back(ExtendedTerm::constant(n, *S.identity));
  }
  auto found = find_inner_tuple(g, f, candidates, budget);
  if (!found) return std::nullopt;
  SlDecomposition d;
  d.decomposition.outer = g;
  for (std::uint32_t idx : *found) {
    d.terms.push_back(meaning[idx]);
    d.decomposition.inner.push_back(
        Operation{f.domain, n, candidates[idx]});
  }
  return d;
}

} // namespace detail

/// Exhaustive backtracking search for f = g(phi_1, ..., phi_m) with each
/// phi_j a meet term over f's variables.  Coordinates are filled left to
/// right, candidate subsets in ascending characteristic-integer order, so
/// the witness is deterministic; nullopt is a proof of non-minority over
/// the pure meet clone.
inline std::optional<SlDecomposition> fast_minor_check(
    const Operation& f, const Operation& g, const SemilatticeStructure& S,
    SearchBudget* budget = nullptr) {
  SearchBudget local;
  return detail::term_minor_search(f, g, S, false, false,
                                   budget ? *budget : local);
}

/// Same search with constants admitted as inner candidates (after all meet
/// terms, zero before identity).
inline std::optional<SlDecomposition> with_constants(
    const Operation& f, const Operation& g, const SemilatticeStructure& S,
    bool use_zero, bool use_one, SearchBudget* budget = nullptr) {
  SearchBudget local;
  return detail::term_minor_search(f, g, S, use_zero, use_one,
                                   budget ? *budget : local);
}

/// Alternative strategy for the constant-bearing check: substitute every
/// choice of constants into g first (shrinking its arity), then run the
/// pure-term search on each residual function.  Must agree with
/// `with_constants` on existence; used to cross-check it.
inline std::optional<SlDecomposition> with_constants_by_substitution(
    const Operation& f, const Operation& g, const SemilatticeStructure& S,
    bool use_zero, bool use_one, SearchBudget* budget = nullptr) {
  check_operation(f);
  check_operation(g);
  require(f.domain == S.domain() && g.domain == S.domain(),
          ErrorKind::DomainMismatch,
          "minor check: operations must live over the semilattice domain");
  SearchBudget local;
  SearchBudget& b = budget ? *budget : local;
  std::vector<Element> consts;
  if (use_zero) {
    require(S.zero.has_value(), ErrorKind::InvalidInput,
            "minor check: clone uses a zero the semilattice does not have");
    consts.push_back(*S.zero);
  }
  if (use_one) {
    require(S.identity.has_value(), ErrorKind::InvalidInput,
            "minor check: clone uses an identity the semilattice does not have");
    consts.push_back(*S.identity);
  }
  std::uint32_t m = g.arity;
  std::uint32_t k = g.domain.size;
  for (std::uint32_t fixed = 0; fixed < (1u << m); ++fixed) {
    std::uint32_t nfixed = static_cast<std::uint32_t>(std::popcount(fixed));
    if (nfixed > 0 && consts.empty()) continue;
    // Enumerate constant assignments for the fixed coordinates.
    std::vector<std::size_t> pick(nfixed, 0);
    for (;;) {
      std::vector<std::optional<Element>> assign(m);
      std::uint32_t slot = 0;
      for (std::uint32_t j = 0; j < m; ++j)
        if (fixed >> j & 1) assign[j] = consts[pick[slot++]];
      // Build the residual operation over the free coordinates.
      std::uint32_t free_arity = m - nfixed;
      std::optional<SlDecomposition> found;
      if (free_arity == 0) {
        Element v;
        {
          std::vector<Element> args(m);
          for (std::uint32_t j = 0; j < m; ++j) args[j] = *assign[j];
          v = eval(g, args);
        }
        if (f == constant_op(f.domain, f.arity, v)) {
          found = SlDecomposition{};
          found->decomposition.outer = g;
          for (std::uint32_t j = 0; j < m; ++j) {
            found->terms.push_back(ExtendedTerm::constant(f.arity, *assign[j]));
            found->decomposition.inner.push_back(
                constant_op(f.domain, f.arity, *assign[j]));
          }
        }
      } else {
        Operation residual{g.domain, free_arity,
                           Table(pow_size(k, free_arity))};
        std::vector<Element> free_args(free_arity), full(m);
        for (std::size_t r = 0; r < residual.rows(); ++r) {
          decode_index(r, free_arity, k, free_args);
          std::uint32_t slot2 = 0;
          for (std::uint32_t j = 0; j < m; ++j)
            full[j] = assign[j] ? *assign[j] : free_args[slot2++];
          residual.table[r] = g.table[encode_args(full, k)];
        }
        auto sub = detail::term_minor_search(f, residual, S, false, false, b);
        if (sub) {
          found = SlDecomposition{};
          found->decomposition.outer = g;
          std::uint32_t slot2 = 0;
          for (std::uint32_t j = 0; j < m; ++j) {
            if (assign[j]) {
              found->terms.push_back(ExtendedTerm::constant(f.arity, *assign[j]));
              found->decomposition.inner.push_back(
                  constant_op(f.domain, f.arity, *assign[j]));
            } else {
              found->terms.push_back(sub->terms[slot2]);
              found->decomposition.inner.push_back(
                  sub->decomposition.inner[slot2]);
              ++slot2;
            }
          }
        }
      }
      if (found) {
        require(found->decomposition.decomposes(f), ErrorKind::Internal,
                "with_constants_by_substitution: witness failed to recompose");
        return found;
      }
      // Advance the constant odometer.
      std::uint32_t j = nfixed;
      bool done = (nfixed == 0);
      while (j-- > 0) {
        if (++pick[j] < consts.size()) break;
        pick[j] = 0;
        if (j == 0) done = true;
      }
      if (done) break;
    }
  }
  return std::nullopt;
}

/// Decides whether `target` is an S-minor of the function f(phi_1..phi_m)
/// for any (equivalently, every) term tuple with X-system E: substituting
/// terms into such a tuple produces exactly the tuples whose X-family
/// consists of unions of members of E and dominates E, so the search runs
/// over the outer operation f (small arity) with that leaf condition.
inline bool minor_of_presented(const Operation& target, const Operation& f,
                               const SetSystem& E,
                               const SemilatticeStructure& S,
                               SearchBudget& budget) {
  require(E.ground == f.arity, ErrorKind::InvalidInput,
          "minor_of_presented: system ground must equal the outer arity");
  std::uint32_t n = target.arity;
  MeetTermSpace space(S, n);
  std::vector<Table> candidates;
  candidates.reserve(space.count());
  for (std::uint32_t mask = 1; mask <= space.count(); ++mask)
    candidates.push_back(space.table(mask));
  std::vector<std::uint32_t> fam(n);
  auto leaf = [&](std::span<const std::uint32_t> chosen) {
    std::fill(fam.begin(), fam.end(), 0);
    for (std::uint32_t j = 0; j < chosen.size(); ++j) {
      std::uint32_t vars = chosen[j] + 1; // candidate index back to mask
      for_each_bit(vars, [&](std::uint32_t b) { fam[b] |= 1u << j; });
    }
    return family_reachable(fam, E);
  };
  return find_inner_tuple(f, target, candidates, budget, leaf).has_value();
}

/// Complete equivalence decision for two operations over the pure meet
/// clone: trivial and invariant fast paths first, then the bidirectional
/// exhaustive search.
inline bool sl_equivalent(const Operation& f1, const Operation& f2,
                          const SemilatticeStructure& S,
                          SearchBudget* budget = nullptr) {
  check_operation(f1);
  check_operation(f2);
  bool c1 = is_constant(f1), c2 = is_constant(f2);
  if (c1 || c2) return c1 && c2 && f1.table[0] == f2.table[0];
  // Images are preserved by composition with terms, hence equal on a class.
  auto image = [](const Operation& op) {
    std::uint64_t s = 0;
    for (Element e : op.table) s |= 1ULL << e;
    return s;
  };
  if (image(f1) != image(f2)) return false;
  auto [n1, keep1] = drop_inessential(f1);
  auto [n2, keep2] = drop_inessential(f2);
  if (n1 == n2) return true;
  SearchBudget local;
  SearchBudget& b = budget ? *budget : local;
  return fast_minor_check(n1, n2, S, &b).has_value() &&
         fast_minor_check(n2, n1, S, &b).has_value();
}

} // namespace minorlab
