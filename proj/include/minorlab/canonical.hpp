#pragma once

#include "minorlab/set_system.hpp"

namespace minorlab {

/// Witnesses tying f = g(phi_1..phi_m) over x_1..x_n to its canonical form
/// f' = g(Psi_E), E the X-system of the tuple:
///   (a) f(x_pi(1), ..., x_pi(n)) = f'   with pi(i) = sigma_E(X_i),
///   (b) f'(xi_1, ..., xi_|E|)    = f    with xi_j the meet of the variables
///       whose X-set is the j-th member of E (never empty).
struct CanonicalWitness {
  std::vector<std::uint32_t> pi; // size n, 1-based values in [|E|]
  TermVector xi;                 // |E| terms over n variables
};

struct CanonicalForm {
  Operation f;       // g composed with the given tuple
  Operation f_prime; // g composed with Psi_E
  SetSystem system;  // E
  TermVector psi;    // Psi_E
  CanonicalWitness witness;
};

/// Builds the canonical form of (g, tuple) and verifies both witness
/// identities bit-exactly (term-level and table-level) before returning.
inline CanonicalForm canonicalize(const Operation& g, const TermVector& tv,
                                  const SemilatticeStructure& S) {
  check_operation(g);
  require(g.domain == S.domain(), ErrorKind::DomainMismatch,
          "canonicalize: operation and semilattice domains differ");
  require(tv.size() == g.arity, ErrorKind::InvalidInput,
          "canonicalize: tuple length must equal the outer arity");
  for (const MeetTerm& t : tv.terms)
    require(t.ambient == tv.ambient && t.vars != 0 &&
                t.vars < (1u << tv.ambient),
            ErrorKind::InvalidInput, "canonicalize: malformed term");

  std::uint32_t n = tv.ambient;
  std::uint32_t m = static_cast<std::uint32_t>(tv.size());

  CanonicalForm out;
  auto inner = realize(tv, S);
  out.f = compose(g, std::span<const Operation>(inner));

  std::vector<std::uint32_t> fam = x_family(tv);
  out.system = make_set_system(m, fam);
  const SetSystem& E = out.system;
  out.psi = psi_of(E);
  auto psi_ops = realize(out.psi, S);
  out.f_prime = compose(g, std::span<const Operation>(psi_ops));

  // pi(i) = sigma(X_i).
  out.witness.pi.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out.witness.pi[i] = E.sigma(fam[i]);
    require(out.witness.pi[i] != 0, ErrorKind::Internal,
            "canonicalize: X_i missing from its own system");
  }

  // xi_j = meet over { i : X_i = j-th member }; nonempty because every
  // member of E arises as some X_i.
  std::uint32_t e = static_cast<std::uint32_t>(E.size());
  out.witness.xi.ambient = n;
  out.witness.xi.terms.reserve(e);
  for (std::uint32_t j = 0; j < e; ++j) {
    std::uint32_t vars = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      if (fam[i] == E.members[j]) vars |= 1u << i;
    require(vars != 0, ErrorKind::Internal,
            "canonicalize: member of E not realized by any variable");
    out.witness.xi.terms.push_back(MeetTerm{n, vars});
  }

  // Identity (a), term level: substituting x_i |-> x_pi(i) into phi_j must
  // give psi_j.
  for (std::uint32_t j = 0; j < m; ++j) {
    std::uint32_t mapped = 0;
    for_each_bit(tv.terms[j].vars, [&](std::uint32_t b) {
      mapped |= 1u << (out.witness.pi[b] - 1);
    });
    require(mapped == out.psi.terms[j].vars, ErrorKind::Internal,
            "canonicalize: witness (a) fails at the term level");
  }
  // Identity (a), table level: f(x_pi(1), ..., x_pi(n)) = f'.
  require(substitute_variables(out.f, out.witness.pi, e) == out.f_prime,
          ErrorKind::Internal,
          "canonicalize: witness (a) fails at the table level");

  // Identity (b), term level: psi_j(xi_1, ..., xi_e) must recompose phi_j.
  for (std::uint32_t j = 0; j < m; ++j) {
    std::uint32_t mapped = 0;
    for_each_bit(out.psi.terms[j].vars, [&](std::uint32_t v) {
      mapped |= out.witness.xi.terms[v].vars;
    });
    require(mapped == tv.terms[j].vars, ErrorKind::Internal,
            "canonicalize: witness (b) fails at the term level");
  }
  // Identity (b), table level: f'(xi_1, ..., xi_e) = f.
  auto xi_ops = realize(out.witness.xi, S);
  require(compose(out.f_prime, std::span<const Operation>(xi_ops)) == out.f,
          ErrorKind::Internal,
          "canonicalize: witness (b) fails at the table level");

  return out;
}

/// Decides equivalence of g(tv1) and g(tv2) by comparing X-systems: equal
/// systems share the canonical form, whose witnesses are verified on both
/// sides.  Returns false when the systems differ (the functions may or may
/// not be equivalent; this is the certificate-backed fast path only).
inline bool same_x_equivalent(const Operation& g, const TermVector& tv1,
                              const TermVector& tv2,
                              const SemilatticeStructure& S) {
  require(tv1.size() == g.arity && tv2.size() == g.arity,
          ErrorKind::InvalidInput,
          "same_x_equivalent: tuple lengths must equal the outer arity");
  if (x_system(tv1) != x_system(tv2)) return false;
  CanonicalForm c1 = canonicalize(g, tv1, S);
  CanonicalForm c2 = canonicalize(g, tv2, S);
  require(c1.f_prime == c2.f_prime, ErrorKind::Internal,
          "same_x_equivalent: equal systems produced different canonical forms");
  return true;
}

} // namespace minorlab
