#pragma once

#include <map>
#include <set>

#include "minorlab/sl_minor.hpp"

namespace minorlab {

struct DownsetOptions {
  std::uint64_t e_cap = 1u << 20;        // cap on candidate system masks
  std::uint64_t budget = 1'000'000'000;  // node budget for class decisions
  std::uint32_t samples = 0;             // random minors to classify
  std::uint32_t ambient_max = 5;         // largest sampled ambient arity
  std::uint64_t seed = 0;
  std::uint32_t threads = 1;
};

struct DownsetClass {
  Operation representative;  // least (arity, table) function in the class
  SetSystem witness;         // a system whose function is the representative
  std::vector<std::uint32_t> system_masks;  // systems in the class, ascending
  std::uint64_t class_size_sampled = 0;
};

struct DownsetReport {
  std::vector<DownsetClass> classes;
  std::uint32_t system_count = 0;
  std::uint64_t samples_total = 0;
  std::uint64_t samples_matched = 0;
};

/// All covering set systems over [n], encoded as masks: bit s selects the
/// member subset whose characteristic integer is s, and a mask qualifies
/// when the selected members jointly cover [n].  Ascending order.
inline std::vector<std::uint32_t> enumerate_systems(std::uint32_t n,
                                                    std::uint64_t e_cap) {
  require(n >= 1 && n <= 5, ErrorKind::CapExceeded,
          "system enumeration: ground set too large");
  std::uint64_t candidates = 1ull << (1u << n);
  require(candidates <= e_cap, ErrorKind::CapExceeded,
          "system enumeration: candidate count exceeds the cap");
  std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint32_t> out;
  for (std::uint64_t mask = 1; mask < candidates; ++mask) {
    std::uint32_t covered = 0;
    for_each_bit(mask, [&](std::uint32_t s) { covered |= s; });
    if (covered == full) out.push_back(static_cast<std::uint32_t>(mask));
  }
  return out;
}

inline SetSystem system_from_mask(std::uint32_t n, std::uint32_t mask) {
  std::vector<std::uint32_t> members;
  for_each_bit(mask, [&](std::uint32_t s) { members.push_back(s); });
  return make_set_system(n, std::move(members));
}

inline std::uint32_t mask_of_system(const SetSystem& E) {
  std::uint32_t mask = 0;
  for (std::uint32_t s : E.members) mask |= 1u << s;
  return mask;
}

namespace detail {

/// Restriction to constant tuples.  Meet terms fix constant tuples, so the
/// diagonal is shared by a whole equivalence class.
inline Table diagonal_of(const Operation& op) {
  std::uint32_t k = op.domain.size;
  Table d(k);
  std::vector<Element> args(op.arity);
  for (std::uint32_t a = 0; a < k; ++a) {
    std::fill(args.begin(), args.end(), static_cast<Element>(a));
    d[a] = eval(op, args);
  }
  return d;
}

inline std::uint64_t image_of(const Operation& op) {
  std::uint64_t s = 0;
  for (Element e : op.table) s |= 1ull << e;
  return s;
}

/// Least table over all permutations of the essential variables.  Equal keys
/// certify equivalence (renamings are meet terms); unequal keys decide
/// nothing.  Wide tables skip the permutation scan.
inline std::pair<std::uint32_t, Table> perm_canonical_key(const Operation& op) {
  auto [norm, keep] = drop_inessential(op);
  std::uint32_t a = norm.arity;
  if (a > 8) return {a, norm.table};
  std::vector<std::uint32_t> perm(a);
  for (std::uint32_t i = 0; i < a; ++i) perm[i] = i + 1;
  Table best = norm.table;
  while (std::next_permutation(perm.begin(), perm.end())) {
    Operation p = substitute_variables(norm, perm, a);
    if (p.table < best) best = p.table;
  }
  return {a, best};
}

/// The set of binary minors {op(t_1,...,t_arity) : t_i meet terms over [2]}
/// as a sorted blob.  Equivalent operations have equal binary-minor sets.
inline std::string binary_minor_key(const Operation& op,
                                    const SemilatticeStructure& S) {
  if (op.arity > 10) return {};  // 3^arity assignments; skip when too wide
  MeetTermSpace space(S, 2);
  std::size_t rows = space.table(1).size();
  std::uint32_t k = op.domain.size;
  std::uint64_t total = 1;
  for (std::uint32_t u = 0; u < op.arity; ++u) total *= 3;
  std::set<Table> minors;
  std::vector<std::uint32_t> asg(op.arity);
  std::vector<Element> args(op.arity);
  Table minor(rows);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (std::uint32_t u = 0; u < op.arity; ++u) {
      asg[u] = static_cast<std::uint32_t>(t % 3) + 1;
      t /= 3;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::uint32_t u = 0; u < op.arity; ++u)
        args[u] = space.table(asg[u])[r];
      minor[r] = op.table[encode_args(args, k)];
    }
    minors.insert(minor);
  }
  std::string key;
  for (const Table& m : minors) {
    key.append(m.begin(), m.end());
    key.push_back('\x7f');
  }
  return key;
}

/// Computes the equivalence classes among the functions f(Psi_E) over all
/// covering systems E.  Merging layers, all certificate-backed:
///   1. equal value tables;
///   2. equal permutation-canonical normalized tables;
///   3. closure under system reachability (substitution witnesses exist);
///   4. exhaustive minor search against a presented side, guarded by cheap
///      class invariants (diagonal, image, binary-minor set).
/// Separations are certified either by a differing invariant or by an
/// exhausted search, so the final blocks are exactly the classes.
class DownsetAnalysis {
 public:
  DownsetAnalysis(const Operation& f, const SemilatticeStructure& S,
                  const DownsetOptions& opt)
      : f_(f), s_(S), opt_(opt), budget_{opt.budget, 0} {
    check_operation(f);
    require(f.domain == S.domain(), ErrorKind::DomainMismatch,
            "downset: operation must live over the semilattice domain");
    masks_ = enumerate_systems(f.arity, opt.e_cap);
    build_functions();
    group_by_table();
    merge_by_perm_key();
    build_reach();
    resolve();
    emit_classes();
  }

  DownsetReport report() {
    DownsetReport out;
    out.system_count = static_cast<std::uint32_t>(masks_.size());
    out.classes = classes_;
    if (opt_.samples > 0) run_samples(out);
    return out;
  }

 private:
  std::uint32_t find(std::uint32_t g) {
    while (uf_[g] != g) g = uf_[g] = uf_[uf_[g]];
    return g;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    uf_[b] = a;  // keep the least group id (least (arity, table)) as root
  }

  void build_functions() {
    systems_.reserve(masks_.size());
    fe_.reserve(masks_.size());
    for (std::uint32_t mask : masks_) {
      systems_.push_back(system_from_mask(f_.arity, mask));
      std::vector<Operation> psi = realize(psi_of(systems_.back()), s_);
      fe_.push_back(compose(f_, std::span<const Operation>(psi)));
    }
  }

  void group_by_table() {
    std::map<std::pair<std::uint32_t, Table>, std::vector<std::uint32_t>> by;
    for (std::uint32_t s = 0; s < systems_.size(); ++s)
      by[{fe_[s].arity, fe_[s].table}].push_back(s);
    group_of_.assign(systems_.size(), 0);
    for (auto& [key, members] : by) {
      std::uint32_t g = static_cast<std::uint32_t>(group_first_.size());
      group_first_.push_back(members.front());
      for (std::uint32_t s : members) group_of_[s] = g;
    }
    uf_.resize(group_first_.size());
    for (std::uint32_t g = 0; g < uf_.size(); ++g) uf_[g] = g;
  }

  const Operation& group_rep(std::uint32_t g) const {
    return fe_[group_first_[g]];
  }

  void merge_by_perm_key() {
    std::map<std::pair<std::uint32_t, Table>, std::uint32_t> seen;
    for (std::uint32_t g = 0; g < group_first_.size(); ++g) {
      auto key = perm_canonical_key(group_rep(g));
      auto [it, fresh] = seen.emplace(std::move(key), g);
      if (!fresh) unite(it->second, g);
    }
  }

  void build_reach() {
    std::size_t n = systems_.size();
    words_ = (n + 63) / 64;
    if (n > 4096) return;  // quadratic layer skipped; the search layer decides
    sys_reach_.assign(n, std::vector<std::uint64_t>(words_, 0));
    for (std::uint32_t j = 0; j < n; ++j)
      for (std::uint32_t i = 0; i < n; ++i)
        if (system_reachable(systems_[i], systems_[j]))
          sys_reach_[j][i / 64] |= 1ull << (i % 64);
  }

  static bool intersects(const std::vector<std::uint64_t>& a,
                         const std::vector<std::uint64_t>& b) {
    for (std::size_t w = 0; w < a.size(); ++w)
      if (a[w] & b[w]) return true;
    return false;
  }

  std::vector<std::uint32_t> roots() {
    std::vector<std::uint32_t> out;
    for (std::uint32_t g = 0; g < uf_.size(); ++g)
      if (find(g) == g) out.push_back(g);
    return out;
  }

  /// Merge blocks that reach each other through system reachability,
  /// iterated until stable so that chains of known equivalences compound.
  void reach_fixpoint() {
    for (;;) {
      auto rs = roots();
      std::size_t R = rs.size();
      std::vector<std::uint32_t> index(uf_.size(), 0);
      for (std::size_t i = 0; i < R; ++i) index[rs[i]] = i;
      std::vector<std::vector<std::uint64_t>> block_sys(
          R, std::vector<std::uint64_t>(words_, 0));
      std::vector<std::vector<std::uint64_t>> below(
          R, std::vector<std::uint64_t>(words_, 0));
      for (std::uint32_t s = 0; s < systems_.size(); ++s) {
        std::size_t b = index[find(group_of_[s])];
        block_sys[b][s / 64] |= 1ull << (s % 64);
        if (!sys_reach_.empty())
          for (std::size_t w = 0; w < words_; ++w)
            below[b][w] |= sys_reach_[s][w];
      }
      std::vector<std::vector<bool>> le(R, std::vector<bool>(R, false));
      for (std::size_t a = 0; a < R; ++a)
        for (std::size_t b = 0; b < R; ++b)
          le[a][b] = (a == b) || intersects(below[b], block_sys[a]);
      for (std::size_t m = 0; m < R; ++m)
        for (std::size_t a = 0; a < R; ++a)
          if (le[a][m])
            for (std::size_t b = 0; b < R; ++b)
              if (le[m][b]) le[a][b] = true;
      bool changed = false;
      for (std::size_t a = 0; a < R; ++a)
        for (std::size_t b = a + 1; b < R; ++b)
          if (le[a][b] && le[b][a] && find(rs[a]) != find(rs[b])) {
            unite(rs[a], rs[b]);
            changed = true;
          }
      if (!changed) return;
    }
  }

  std::uint32_t first_system_of(std::uint32_t root) {
    for (std::uint32_t s = 0; s < systems_.size(); ++s)
      if (find(group_of_[s]) == root) return s;
    raise(ErrorKind::Internal, "downset: block without systems");
  }

  struct Invariants {
    Table diag;
    std::uint64_t image = 0;
    std::string minors2;
  };

  const Invariants& invariants_of(std::uint32_t group) {
    auto it = inv_.find(group);
    if (it == inv_.end()) {
      const Operation& r = group_rep(group);
      it = inv_.emplace(group,
                        Invariants{diagonal_of(r), image_of(r),
                                   binary_minor_key(r, s_)})
               .first;
    }
    return it->second;
  }

  /// Complete pairwise decisions for the blocks the cheap layers left
  /// apart.  A differing invariant separates soundly; otherwise the
  /// exhaustive presented-side search settles the pair exactly.
  void resolve() {
    for (;;) {
      reach_fixpoint();
      auto rs = roots();
      bool merged = false;
      for (std::size_t i = 0; i < rs.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < rs.size() && !merged; ++j) {
          std::uint32_t a = rs[i], b = rs[j];
          const Invariants& ia = invariants_of(a);
          const Invariants& ib = invariants_of(b);
          if (ia.diag != ib.diag || ia.image != ib.image) continue;
          if (!ia.minors2.empty() && !ib.minors2.empty() &&
              ia.minors2 != ib.minors2)
            continue;
          if (!minor_of_presented(group_rep(a), f_,
                                  systems_[first_system_of(b)], s_, budget_))
            continue;
          if (!minor_of_presented(group_rep(b), f_,
                                  systems_[first_system_of(a)], s_, budget_))
            continue;
          unite(a, b);
          merged = true;
        }
      }
      if (!merged) return;
    }
  }

  void emit_classes() {
    class_of_system_.assign(systems_.size(), 0);
    for (std::uint32_t root : roots()) {
      DownsetClass c;
      c.representative = group_rep(root);
      c.witness = systems_[group_first_[root]];
      for (std::uint32_t s = 0; s < systems_.size(); ++s)
        if (find(group_of_[s]) == root) {
          c.system_masks.push_back(masks_[s]);
          class_of_system_[s] = static_cast<std::uint32_t>(classes_.size());
        }
      classes_.push_back(std::move(c));
    }
  }

  void run_samples(DownsetReport& out) {
    std::uint32_t n = f_.arity;
    std::vector<std::uint32_t> sample_class(opt_.samples, 0);
    parallel_for(opt_.samples, opt_.threads, [&](std::size_t i) {
      auto rng = make_rng(opt_.seed, i);
      std::uint32_t ambient = 1 + static_cast<std::uint32_t>(
                                      rng() % opt_.ambient_max);
      std::uint32_t limit = (1u << ambient) - 1;
      std::vector<std::uint32_t> tmasks(n);
      for (std::uint32_t j = 0; j < n; ++j)
        tmasks[j] = 1 + static_cast<std::uint32_t>(rng() % limit);
      TermVector tv = make_term_vector(ambient, tmasks);
      // The canonical form certifies, bit-exactly, that the sampled minor
      // is equivalent to the function of its own X-system.
      CanonicalForm cf = canonicalize(f_, tv, s_);
      std::uint32_t smask = mask_of_system(cf.system);
      auto it = std::lower_bound(masks_.begin(), masks_.end(), smask);
      require(it != masks_.end() && *it == smask, ErrorKind::Internal,
              "sampled minor: X-system missing from the enumeration");
      std::uint32_t idx = static_cast<std::uint32_t>(it - masks_.begin());
      require(cf.f_prime == fe_[idx], ErrorKind::Internal,
              "sampled minor: canonical function mismatch");
      sample_class[i] = class_of_system_[idx];
    });
    out.samples_total = opt_.samples;
    for (std::uint32_t c : sample_class) {
      out.classes[c].class_size_sampled += 1;
      out.samples_matched += 1;
    }
  }

  const Operation& f_;
  const SemilatticeStructure& s_;
  DownsetOptions opt_;
  SearchBudget budget_;
  std::vector<std::uint32_t> masks_;
  std::vector<SetSystem> systems_;
  std::vector<Operation> fe_;
  std::vector<std::uint32_t> group_of_;
  std::vector<std::uint32_t> group_first_;
  std::vector<std::uint32_t> uf_;
  std::size_t words_ = 0;
  std::vector<std::vector<std::uint64_t>> sys_reach_;
  std::map<std::uint32_t, Invariants> inv_;
  std::vector<std::uint32_t> class_of_system_;
  std::vector<DownsetClass> classes_;
};

}  // namespace detail

/// Enumerates every covering system E over [f.arity], forms f(Psi_E), and
/// groups the results into equivalence classes; optionally classifies
/// seeded random minors of f against those classes.  The class list covers,
/// up to equivalence, every minor of f built from meet terms.
inline DownsetReport downset_report(const Operation& f,
                                    const SemilatticeStructure& S,
                                    const DownsetOptions& opt = {}) {
  detail::DownsetAnalysis analysis(f, S, opt);
  return analysis.report();
}

/// One representative operation per equivalence class in the down-set of f.
inline std::vector<Operation> downset_representatives(
    const Operation& f, const SemilatticeStructure& S,
    const DownsetOptions& opt = {}) {
  DownsetOptions o = opt;
  o.samples = 0;
  std::vector<Operation> out;
  for (DownsetClass& c : downset_report(f, S, o).classes)
    out.push_back(std::move(c.representative));
  return out;
}

}  // namespace minorlab
