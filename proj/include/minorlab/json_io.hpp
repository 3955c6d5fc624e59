#pragma once

#include <fstream>

#include "json.hpp"
#include "minorlab/poset.hpp"

namespace minorlab {

namespace detail {

inline const nlohmann::json& expect_object(const nlohmann::json& j,
                                           const char* what) {
  require(j.is_object(), ErrorKind::InvalidInput,
          std::string(what) + ": expected a JSON object");
  return j;
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key,
                                   const char* what) {
  expect_object(j, what);
  auto it = j.find(key);
  require(it != j.end(), ErrorKind::InvalidInput,
          std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

inline std::uint32_t uint_field(const nlohmann::json& j, const char* key,
                                const char* what) {
  const nlohmann::json& v = field(j, key, what);
  require(v.is_number_integer() && v.get<std::int64_t>() >= 0 &&
              v.get<std::int64_t>() <= 0xffffffffLL,
          ErrorKind::InvalidInput,
          std::string(what) + ": field \"" + key +
              "\" must be a nonnegative integer");
  return v.get<std::uint32_t>();
}

inline Element element_value(const nlohmann::json& v, std::uint32_t k,
                             const char* what) {
  require(v.is_number_integer() && v.get<std::int64_t>() >= 0 &&
              v.get<std::int64_t>() < std::int64_t(k),
          ErrorKind::InvalidInput,
          std::string(what) + ": table entry outside the domain");
  return static_cast<Element>(v.get<std::uint32_t>());
}

}  // namespace detail

inline nlohmann::json operation_to_json(const Operation& op) {
  nlohmann::json table = nlohmann::json::array();
  for (Element e : op.table) table.push_back(int(e));
  return nlohmann::json{
      {"domain", op.domain.size}, {"arity", op.arity}, {"table", table}};
}

inline Operation operation_from_json(const nlohmann::json& j) {
  const char* what = "operation";
  std::uint32_t k = detail::uint_field(j, "domain", what);
  require(k >= 1 && k <= 256, ErrorKind::InvalidInput,
          "operation: domain size must be between 1 and 256");
  std::uint32_t arity = detail::uint_field(j, "arity", what);
  const nlohmann::json& t = detail::field(j, "table", what);
  require(t.is_array(), ErrorKind::InvalidInput,
          "operation: \"table\" must be an array");
  Operation op{Domain{k}, arity, {}};
  op.table.reserve(t.size());
  for (const nlohmann::json& v : t)
    op.table.push_back(detail::element_value(v, k, what));
  check_operation(op);  // length = domain^arity, arity >= 1
  return op;
}

inline nlohmann::json semilattice_to_json(const Operation& meet) {
  require(meet.arity == 2, ErrorKind::InvalidInput,
          "semilattice: operation must be binary");
  std::uint32_t k = meet.domain.size;
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint32_t a = 0; a < k; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::uint32_t b = 0; b < k; ++b)
      row.push_back(int(meet.table[std::size_t(a) * k + b]));
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"domain", k}, {"meet", rows}};
}

/// Parses a binary operation presented as a k x k matrix.  Validation of
/// the semilattice identities is the caller's business, so invalid
/// candidates can be loaded and reported on.
inline Operation semilattice_candidate_from_json(const nlohmann::json& j) {
  const char* what = "semilattice";
  std::uint32_t k = detail::uint_field(j, "domain", what);
  require(k >= 1 && k <= 256, ErrorKind::InvalidInput,
          "semilattice: domain size must be between 1 and 256");
  const nlohmann::json& rows = detail::field(j, "meet", what);
  require(rows.is_array() && rows.size() == k, ErrorKind::InvalidInput,
          "semilattice: \"meet\" must be a matrix with one row per element");
  Operation op{Domain{k}, 2, {}};
  op.table.reserve(std::size_t(k) * k);
  for (const nlohmann::json& row : rows) {
    require(row.is_array() && row.size() == k, ErrorKind::InvalidInput,
            "semilattice: matrix rows must have one entry per element");
    for (const nlohmann::json& v : row)
      op.table.push_back(detail::element_value(v, k, what));
  }
  return op;
}

inline nlohmann::json term_vector_to_json(const TermVector& tv) {
  nlohmann::json terms = nlohmann::json::array();
  for (const MeetTerm& t : tv.terms) {
    nlohmann::json vars = nlohmann::json::array();
    for_each_bit(t.vars, [&](std::uint32_t b) { vars.push_back(b + 1); });
    terms.push_back(std::move(vars));
  }
  return nlohmann::json{{"n", tv.ambient}, {"terms", terms}};
}

inline TermVector term_vector_from_json(const nlohmann::json& j) {
  const char* what = "term tuple";
  std::uint32_t ambient = detail::uint_field(j, "n", what);
  const nlohmann::json& terms = detail::field(j, "terms", what);
  require(terms.is_array() && !terms.empty(), ErrorKind::InvalidInput,
          "term tuple: \"terms\" must be a nonempty array");
  std::vector<std::uint32_t> masks;
  for (const nlohmann::json& t : terms) {
    require(t.is_array() && !t.empty(), ErrorKind::InvalidInput,
            "term tuple: every term must list at least one variable");
    std::uint32_t mask = 0;
    for (const nlohmann::json& v : t) {
      require(v.is_number_integer() && v.get<std::int64_t>() >= 1 &&
                  v.get<std::int64_t>() <= ambient,
              ErrorKind::InvalidInput,
              "term tuple: variable index out of range");
      mask |= 1u << (v.get<std::uint32_t>() - 1);
    }
    masks.push_back(mask);
  }
  return make_term_vector(ambient, masks);
}

inline nlohmann::json set_system_to_json(const SetSystem& E) {
  nlohmann::json members = nlohmann::json::array();
  for (std::uint32_t s : E.members) {
    nlohmann::json member = nlohmann::json::array();
    for_each_bit(s, [&](std::uint32_t b) { member.push_back(b + 1); });
    members.push_back(std::move(member));
  }
  return nlohmann::json{{"m", E.ground}, {"members", members}};
}

inline SetSystem set_system_from_json(const nlohmann::json& j) {
  const char* what = "set system";
  std::uint32_t ground = detail::uint_field(j, "m", what);
  require(ground >= 1 && ground <= 31, ErrorKind::InvalidInput,
          "set system: ground size out of range");
  const nlohmann::json& members = detail::field(j, "members", what);
  require(members.is_array(), ErrorKind::InvalidInput,
          "set system: \"members\" must be an array");
  std::vector<std::uint32_t> masks;
  for (const nlohmann::json& member : members) {
    require(member.is_array(), ErrorKind::InvalidInput,
            "set system: members must be arrays of elements");
    std::uint32_t mask = 0;
    for (const nlohmann::json& v : member) {
      require(v.is_number_integer() && v.get<std::int64_t>() >= 1 &&
                  v.get<std::int64_t>() <= ground,
              ErrorKind::InvalidInput, "set system: element out of range");
      mask |= 1u << (v.get<std::uint32_t>() - 1);
    }
    masks.push_back(mask);
  }
  return make_set_system(ground, std::move(masks));
}

/// Named clone families over a semilattice: the meet alone or with its
/// distinguished constants attached.
inline std::pair<bool, bool> named_clone_constants(const std::string& name) {
  if (name == "meet") return {false, false};
  if (name == "meet0") return {true, false};
  if (name == "meet1") return {false, true};
  if (name == "meet01") return {true, true};
  raise(ErrorKind::InvalidInput, "unknown clone name: " + name);
}

/// Generators presenting the clone of a semilattice with optional attached
/// constants: the meet itself plus unary constants.
inline std::vector<Operation> semilattice_clone_generators(
    const SemilatticeStructure& S, bool use_zero, bool use_one) {
  std::vector<Operation> gens{S.meet};
  if (use_zero) {
    require(S.zero.has_value(), ErrorKind::InvalidInput,
            "clone preset: the semilattice has no zero element");
    gens.push_back(constant_op(S.domain(), 1, *S.zero));
  }
  if (use_one) {
    require(S.identity.has_value(), ErrorKind::InvalidInput,
            "clone preset: the semilattice has no identity element");
    gens.push_back(constant_op(S.domain(), 1, *S.identity));
  }
  return gens;
}

/// A clone is presented either by explicit generators or by a named family
/// over the min-chain semilattice of a stated domain.
inline CloneTable clone_from_json(const nlohmann::json& j,
                                  std::uint32_t max_arity_override = 0) {
  const char* what = "clone";
  detail::expect_object(j, what);
  std::uint32_t max_arity = max_arity_override
                                ? max_arity_override
                                : detail::uint_field(j, "max_arity", what);
  if (j.contains("named")) {
    const nlohmann::json& name = j["named"];
    require(name.is_string(), ErrorKind::InvalidInput,
            "clone: \"named\" must be a string");
    std::uint32_t k = detail::uint_field(j, "domain", what);
    require(k >= 1 && k <= 256, ErrorKind::InvalidInput,
            "clone: domain size must be between 1 and 256");
    auto [z, o] = named_clone_constants(name.get<std::string>());
    SemilatticeStructure S = chain_semilattice(k);
    return generate_clone(S.domain(),
                          semilattice_clone_generators(S, z, o), max_arity);
  }
  const nlohmann::json& gens = detail::field(j, "generators", what);
  require(gens.is_array() && !gens.empty(), ErrorKind::InvalidInput,
          "clone: \"generators\" must be a nonempty array");
  std::vector<Operation> generators;
  for (const nlohmann::json& g : gens)
    generators.push_back(operation_from_json(g));
  return generate_clone(generators.front().domain, generators, max_arity);
}

/// A universe is either every operation of the listed arities or an
/// explicit list of operations.
inline Universe universe_from_json(const nlohmann::json& j) {
  const char* what = "universe";
  std::uint32_t k = detail::uint_field(j, "domain", what);
  require(k >= 1 && k <= 256, ErrorKind::InvalidInput,
          "universe: domain size must be between 1 and 256");
  if (j.contains("arities")) {
    const nlohmann::json& arr = j["arities"];
    require(arr.is_array() && !arr.empty(), ErrorKind::InvalidInput,
            "universe: \"arities\" must be a nonempty array");
    std::vector<std::uint32_t> arities;
    for (const nlohmann::json& a : arr) {
      require(a.is_number_integer() && a.get<std::int64_t>() >= 1,
              ErrorKind::InvalidInput, "universe: arities must be >= 1");
      arities.push_back(a.get<std::uint32_t>());
    }
    return universe_all(Domain{k}, arities);
  }
  const nlohmann::json& arr = detail::field(j, "ops", what);
  require(arr.is_array() && !arr.empty(), ErrorKind::InvalidInput,
          "universe: \"ops\" must be a nonempty array");
  std::vector<Operation> ops;
  for (const nlohmann::json& o : arr) ops.push_back(operation_from_json(o));
  return make_universe(Domain{k}, std::move(ops));
}

inline nlohmann::json downset_report_to_json(const DownsetReport& report) {
  nlohmann::json out = nlohmann::json::array();
  for (const DownsetClass& c : report.classes)
    out.push_back(
        nlohmann::json{{"representative", operation_to_json(c.representative)},
                       {"class_size_sampled", c.class_size_sampled},
                       {"witness_E", set_system_to_json(c.witness)}});
  return out;
}

inline nlohmann::json poset_to_json(const MinorPoset& poset) {
  nlohmann::json classes = nlohmann::json::array();
  for (std::uint32_t c = 0; c < poset.class_count(); ++c) {
    nlohmann::json members = nlohmann::json::array();
    for (std::uint32_t i : poset.classes[c].members) members.push_back(i);
    classes.push_back(nlohmann::json{
        {"id", c},
        {"members", members},
        {"representative",
         operation_to_json(poset.classes[c].representative)}});
  }
  nlohmann::json hasse = nlohmann::json::array();
  for (const auto& [lo, hi] : poset.hasse)
    hasse.push_back(nlohmann::json::array({lo, hi}));
  return nlohmann::json{{"classes", classes}, {"hasse", hasse}};
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::InvalidInput, "cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::InvalidInput,
          "malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace minorlab
