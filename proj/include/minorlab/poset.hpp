#pragma once

#include <map>

#include "minorlab/clone.hpp"
#include "minorlab/downset.hpp"

namespace minorlab {

/// A finite, duplicate-free set of operations over one domain whose minor
/// preorder is to be analyzed.  Operations are kept sorted by (arity,
/// table), so indices are canonical.
struct Universe {
  Domain domain;
  std::vector<Operation> operations;
};

inline Universe make_universe(Domain d, std::vector<Operation> ops) {
  for (const Operation& op : ops) {
    check_operation(op);
    require(op.domain == d, ErrorKind::DomainMismatch,
            "universe: operation over a different domain");
  }
  std::sort(ops.begin(), ops.end());
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  require(!ops.empty(), ErrorKind::InvalidInput,
          "universe: must contain at least one operation");
  return Universe{d, std::move(ops)};
}

/// Every operation of each listed arity over the domain.
inline Universe universe_all(Domain d, std::vector<std::uint32_t> arities) {
  std::sort(arities.begin(), arities.end());
  arities.erase(std::unique(arities.begin(), arities.end()), arities.end());
  require(!arities.empty(), ErrorKind::InvalidInput,
          "universe: need at least one arity");
  std::uint32_t k = d.size;
  std::vector<Operation> ops;
  for (std::uint32_t a : arities) {
    require(a >= 1, ErrorKind::InvalidInput, "universe: arity must be >= 1");
    std::size_t rows = pow_size(k, a);
    require(rows <= 20, ErrorKind::CapExceeded,
            "universe: table too long to enumerate all operations");
    std::uint64_t count = 1;
    for (std::size_t r = 0; r < rows; ++r) {
      count *= k;
      require(count <= (1ull << 21), ErrorKind::CapExceeded,
              "universe: too many operations of the requested arity");
    }
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Table t(rows);
      std::uint64_t v = idx;
      for (std::size_t r = rows; r-- > 0;) {
        t[r] = static_cast<Element>(v % k);
        v /= k;
      }
      ops.push_back(Operation{d, a, std::move(t)});
    }
  }
  return make_universe(d, std::move(ops));
}

/// Recognizes a clone presented by generators as a semilattice clone: one
/// generator must be a semilattice operation and every other generator a
/// constant equal to its zero or identity element.
struct SemilatticeCloneView {
  SemilatticeStructure s;
  bool use_zero = false;
  bool use_one = false;

  static std::optional<SemilatticeCloneView> from_generators(
      const CloneTable& C) {
    const Operation* meet = nullptr;
    std::vector<Element> consts;
    for (const Operation& g : C.generators()) {
      if (is_constant(g)) {
        consts.push_back(g.table[0]);
        continue;
      }
      if (g.arity != 2 || meet != nullptr) return std::nullopt;
      meet = &g;
    }
    if (meet == nullptr || !is_semilattice(*meet)) return std::nullopt;
    SemilatticeCloneView view{SemilatticeStructure::from_meet(*meet), false,
                              false};
    for (Element c : consts) {
      if (view.s.zero && *view.s.zero == c)
        view.use_zero = true;
      else if (view.s.identity && *view.s.identity == c)
        view.use_one = true;
      else
        return std::nullopt;
    }
    return view;
  }
};

enum class PosetStrategy { Generic, SemilatticeFast };

struct PosetOptions {
  std::uint32_t threads = 1;
  std::uint64_t composition_cap = 1'000'000'000;
};

struct PosetClassInfo {
  std::vector<std::uint32_t> members;  // universe indices, ascending
  Operation representative;           // least (arity, table) member
};

/// The equivalence classes of a universe under the minor preorder of a
/// clone, with the order relation between classes and its cover relation.
struct MinorPoset {
  Universe universe;
  std::vector<std::uint32_t> class_of;   // operation index -> class id
  std::vector<PosetClassInfo> classes;   // ordered by least member index
  std::vector<std::vector<std::uint64_t>> below;  // bit rows: leq(a, b)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> hasse;  // covers

  std::size_t class_count() const { return classes.size(); }

  bool leq(std::uint32_t a, std::uint32_t b) const {
    return (below[b][a / 64] >> (a % 64)) & 1u;
  }

  std::uint64_t downset_size(std::uint32_t c) const {
    std::uint64_t n = 0;
    for (std::uint64_t w : below[c]) n += std::popcount(w);
    return n;
  }
};

namespace detail {

/// Tables of the clone members of one arity, used as the inner candidate
/// pool.  Both strategies produce the same set for semilattice clones: the
/// fast path writes the members down directly (meet terms plus admitted
/// constants), the generic path materializes the clone part.
inline std::vector<Table> inner_pool(const CloneTable& C,
                                     const SemilatticeCloneView* view,
                                     std::uint32_t arity) {
  std::vector<Table> out;
  if (view == nullptr) {
    for (const Operation& op : C.part(arity)) out.push_back(op.table);
    return out;
  }
  MeetTermSpace space(view->s, arity);
  for (std::uint32_t mask = 1; mask <= space.count(); ++mask)
    out.push_back(space.table(mask));
  std::size_t rows = pow_size(view->s.domain_size(), arity);
  if (view->use_zero) out.push_back(Table(rows, *view->s.zero));
  if (view->use_one) out.push_back(Table(rows, *view->s.identity));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Computes, for every operation in the universe, which other members are
/// its minors, by enumerating all compositions with inner tuples drawn from
/// the clone.  Clones are composition-closed, so a minor of a minor is
/// itself reached directly and the resulting relation is transitive without
/// a closure pass.  Identical minor sets characterize equivalence (each
/// operation sits in its own set via projections).
inline MinorPoset build_preorder(const Universe& universe, const CloneTable& C,
                                 PosetStrategy strategy,
                                 const PosetOptions& opt = {}) {
  require(universe.domain == C.domain(), ErrorKind::DomainMismatch,
          "build_preorder: universe and clone over different domains");
  std::optional<SemilatticeCloneView> view;
  if (strategy == PosetStrategy::SemilatticeFast) {
    view = SemilatticeCloneView::from_generators(C);
    require(view.has_value(), ErrorKind::InvalidInput,
            "build_preorder: the fast strategy requires a clone generated by "
            "a semilattice operation and its constants");
  }

  const std::vector<Operation>& ops = universe.operations;
  std::size_t nops = ops.size();
  std::uint32_t k = universe.domain.size;

  std::vector<std::uint32_t> arities;
  for (const Operation& op : ops) arities.push_back(op.arity);
  std::sort(arities.begin(), arities.end());
  arities.erase(std::unique(arities.begin(), arities.end()), arities.end());
  require(arities.back() <= C.max_arity(), ErrorKind::InvalidInput,
          "build_preorder: universe arity exceeds the clone table's range");

  std::vector<std::vector<Table>> pools(arities.size());
  std::vector<std::map<Table, std::uint32_t>> index(arities.size());
  for (std::size_t t = 0; t < arities.size(); ++t) {
    pools[t] = detail::inner_pool(C, view ? &*view : nullptr, arities[t]);
    for (std::uint32_t i = 0; i < nops; ++i)
      if (ops[i].arity == arities[t]) index[t].emplace(ops[i].table, i);
  }

  std::uint64_t total = 0;
  for (const Operation& op : ops)
    for (std::size_t t = 0; t < arities.size(); ++t) {
      std::uint64_t tuples = 1;
      for (std::uint32_t j = 0; j < op.arity; ++j) {
        tuples *= pools[t].size();
        require(tuples <= opt.composition_cap, ErrorKind::CapExceeded,
                "build_preorder: composition count exceeds the cap");
      }
      total += tuples;
      require(total <= opt.composition_cap, ErrorKind::CapExceeded,
              "build_preorder: composition count exceeds the cap");
    }

  std::size_t words = (nops + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(
      nops, std::vector<std::uint64_t>(words, 0));

  parallel_for(nops, opt.threads, [&](std::size_t i) {
    const Operation& g = ops[i];
    std::uint32_t m = g.arity;
    for (std::size_t t = 0; t < arities.size(); ++t) {
      const std::vector<Table>& pool = pools[t];
      std::size_t cnt = pool.size();
      std::size_t nrows = pow_size(k, arities[t]);
      std::vector<std::size_t> pick(m, 0);
      Table composed(nrows);
      std::vector<Element> args(m);
      bool done = false;
      while (!done) {
        for (std::size_t r = 0; r < nrows; ++r) {
          for (std::uint32_t j = 0; j < m; ++j) args[j] = pool[pick[j]][r];
          composed[r] = g.table[encode_args(args, k)];
        }
        auto it = index[t].find(composed);
        if (it != index[t].end())
          rows[i][it->second / 64] |= 1ull << (it->second % 64);
        std::uint32_t j = m;
        for (;;) {
          if (j == 0) {
            done = true;
            break;
          }
          --j;
          if (++pick[j] < cnt) break;
          pick[j] = 0;
        }
      }
    }
  });

  MinorPoset poset;
  poset.universe = universe;
  poset.class_of.assign(nops, 0);
  std::map<std::vector<std::uint64_t>, std::uint32_t> by_row;
  for (std::uint32_t i = 0; i < nops; ++i) {
    auto [it, fresh] =
        by_row.emplace(rows[i], static_cast<std::uint32_t>(poset.classes.size()));
    if (fresh)
      poset.classes.push_back(PosetClassInfo{{}, ops[i]});
    poset.class_of[i] = it->second;
    poset.classes[it->second].members.push_back(i);
  }

  std::size_t ncls = poset.classes.size();
  std::size_t cwords = (ncls + 63) / 64;
  poset.below.assign(ncls, std::vector<std::uint64_t>(cwords, 0));
  for (std::uint32_t b = 0; b < ncls; ++b) {
    const std::vector<std::uint64_t>& row = rows[poset.classes[b].members[0]];
    for (std::uint32_t i = 0; i < nops; ++i)
      if ((row[i / 64] >> (i % 64)) & 1u) {
        std::uint32_t a = poset.class_of[i];
        poset.below[b][a / 64] |= 1ull << (a % 64);
      }
  }

  for (std::uint32_t hi = 0; hi < ncls; ++hi)
    for (std::uint32_t lo = 0; lo < ncls; ++lo) {
      if (lo == hi || !poset.leq(lo, hi)) continue;
      bool cover = true;
      for (std::uint32_t c = 0; c < ncls && cover; ++c)
        if (c != lo && c != hi && poset.leq(lo, c) && poset.leq(c, hi))
          cover = false;
      if (cover) poset.hasse.emplace_back(lo, hi);
    }
  std::sort(poset.hasse.begin(), poset.hasse.end());
  return poset;
}

struct DccOptions {
  std::uint32_t samples_per_op = 0;  // random minors per checked operation
  std::uint32_t op_limit = 0;        // 0 = check every eligible operation
  std::uint32_t ambient_max = 4;
  std::uint64_t seed = 0;
  std::uint32_t threads = 1;
  std::uint64_t budget = 1'000'000'000;
  std::uint64_t e_cap = 1u << 20;
};

struct DccReport {
  bool acyclic = false;
  bool downsets_monotone = false;
  std::uint64_t max_downset_size = 0;
  std::uint64_t operations_sampled = 0;
  std::uint64_t sampled_minors = 0;
  std::uint64_t sampled_matched = 0;

  bool ok() const {
    return acyclic && downsets_monotone && sampled_minors == sampled_matched;
  }
};

/// Evidence that the minor order has no infinite descent on the universe:
/// the condensation is a genuine partial order (antisymmetry across
/// classes), downsets are finite and monotone along the order, and sampled
/// random minors of members — including minors whose arity leaves the
/// universe — land in the enumerated, finite class list of each member's
/// down-set.  The sampling pass needs the semilattice structure.
inline DccReport verify_dcc(const MinorPoset& poset,
                            const SemilatticeStructure* S = nullptr,
                            const DccOptions& opt = {}) {
  DccReport report;
  std::size_t ncls = poset.class_count();

  report.acyclic = true;
  for (std::uint32_t a = 0; a < ncls && report.acyclic; ++a)
    for (std::uint32_t b = a + 1; b < ncls; ++b)
      if (poset.leq(a, b) && poset.leq(b, a)) {
        report.acyclic = false;
        break;
      }

  report.downsets_monotone = true;
  for (std::uint32_t a = 0; a < ncls; ++a) {
    report.max_downset_size =
        std::max(report.max_downset_size, poset.downset_size(a));
    for (std::uint32_t b = 0; b < ncls && report.downsets_monotone; ++b) {
      if (!poset.leq(a, b)) continue;
      for (std::size_t w = 0; w < poset.below[a].size(); ++w)
        if (poset.below[a][w] & ~poset.below[b][w]) {
          report.downsets_monotone = false;
          break;
        }
    }
  }

  if (S == nullptr || opt.samples_per_op == 0) return report;

  std::vector<std::uint32_t> chosen;
  for (std::uint32_t i = 0; i < poset.universe.operations.size(); ++i)
    if (poset.universe.operations[i].arity <= 4) chosen.push_back(i);
  if (opt.op_limit > 0 && chosen.size() > opt.op_limit) {
    std::vector<std::uint32_t> spaced;
    for (std::uint32_t j = 0; j < opt.op_limit; ++j)
      spaced.push_back(chosen[j * chosen.size() / opt.op_limit]);
    spaced.erase(std::unique(spaced.begin(), spaced.end()), spaced.end());
    chosen = std::move(spaced);
  }
  for (std::uint32_t i : chosen) {
    DownsetOptions d;
    d.samples = opt.samples_per_op;
    d.ambient_max = opt.ambient_max;
    d.seed = mix_seed(opt.seed, i);
    d.threads = opt.threads;
    d.budget = opt.budget;
    d.e_cap = opt.e_cap;
    DownsetReport r = downset_report(poset.universe.operations[i], *S, d);
    report.operations_sampled += 1;
    report.sampled_minors += r.samples_total;
    report.sampled_matched += r.samples_matched;
  }
  return report;
}

/// DOT rendering of the Hasse diagram, bottom-up.  Nodes are named by class
/// id; a node is labeled by the term or constant its representative
/// realizes when the semilattice structure is given and one exists,
/// otherwise by an arity:table digest.  The output is byte-deterministic.
inline std::string export_dot(const MinorPoset& poset,
                              const SemilatticeStructure* S = nullptr) {
  auto digest = [&](const Operation& op) {
    std::string out = std::to_string(op.arity) + ":";
    for (Element e : op.table) {
      if (op.domain.size > 10 && out.back() != ':') out += '.';
      out += std::to_string(int(e));
    }
    return out;
  };
  auto label = [&](const Operation& op) -> std::string {
    if (S != nullptr && op.domain == S->domain()) {
      if (is_constant(op)) return "const " + std::to_string(int(op.table[0]));
      MeetTermSpace space(*S, op.arity);
      for (std::uint32_t mask = 1; mask <= space.count(); ++mask)
        if (space.table(mask) == op.table)
          return term_text(make_meet_term(op.arity, mask));
    }
    return digest(op);
  };
  std::string out = "digraph minor_poset {\n  rankdir=BT;\n";
  for (std::uint32_t c = 0; c < poset.class_count(); ++c)
    out += "  c" + std::to_string(c) + " [label=\"" +
           label(poset.classes[c].representative) + "\"];\n";
  for (const auto& [lo, hi] : poset.hasse)
    out += "  c" + std::to_string(lo) + " -> c" + std::to_string(hi) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace minorlab
