#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "minorlab/downset.hpp"
#include "minorlab/json_io.hpp"

using namespace minorlab;
using nlohmann::json;

namespace {

const Operation kAnd2{Domain{2}, 2, {0, 0, 0, 1}};
const Operation kXor2{Domain{2}, 2, {0, 1, 1, 0}};
const Operation kMaj3{Domain{2}, 3, {0, 0, 0, 1, 0, 1, 1, 1}};

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("operations round-trip through JSON") {
  for (const Operation& op :
       {kAnd2, kXor2, kMaj3, Operation{Domain{3}, 1, {2, 0, 1}},
        constant_op(Domain{2}, 2, 1)}) {
    json j = operation_to_json(op);
    CHECK(operation_from_json(j) == op);
  }
  json j = operation_to_json(kAnd2);
  CHECK(j["domain"] == 2);
  CHECK(j["arity"] == 2);
  CHECK(j["table"] == json::array({0, 0, 0, 1}));
}

TEST_CASE("malformed operations are rejected") {
  json good = operation_to_json(kAnd2);

  json missing = good;
  missing.erase("arity");
  CHECK(kind_of([&] { operation_from_json(missing); }) ==
        ErrorKind::InvalidInput);

  json short_table = good;
  short_table["table"] = json::array({0, 0, 0});
  CHECK_THROWS_AS(operation_from_json(short_table), Error);

  json out_of_range = good;
  out_of_range["table"] = json::array({0, 0, 0, 2});
  CHECK(kind_of([&] { operation_from_json(out_of_range); }) ==
        ErrorKind::InvalidInput);

  json negative = good;
  negative["table"] = json::array({0, 0, 0, -1});
  CHECK_THROWS_AS(operation_from_json(negative), Error);

  json not_array = good;
  not_array["table"] = "0001";
  CHECK_THROWS_AS(operation_from_json(not_array), Error);

  json zero_arity = good;
  zero_arity["arity"] = 0;
  zero_arity["table"] = json::array({0});
  CHECK_THROWS_AS(operation_from_json(zero_arity), Error);

  json huge_domain = good;
  huge_domain["domain"] = 257;
  CHECK_THROWS_AS(operation_from_json(huge_domain), Error);

  CHECK_THROWS_AS(operation_from_json(json::array({1, 2})), Error);
}

TEST_CASE("semilattice matrices round-trip through JSON") {
  for (std::uint32_t k : {2u, 3u, 4u}) {
    Operation meet = chain_semilattice(k).meet;
    CHECK(semilattice_candidate_from_json(semilattice_to_json(meet)) == meet);
  }
  // candidates are parsed without law validation
  Operation xor_table{Domain{2}, 2, {0, 1, 1, 0}};
  CHECK(semilattice_candidate_from_json(semilattice_to_json(xor_table)) ==
        xor_table);

  json j = semilattice_to_json(chain_semilattice(2).meet);
  CHECK(j["meet"] == json::array({json::array({0, 0}), json::array({0, 1})}));

  json bad_rows = j;
  bad_rows["meet"] = json::array({json::array({0, 0})});
  CHECK_THROWS_AS(semilattice_candidate_from_json(bad_rows), Error);

  json ragged = j;
  ragged["meet"] = json::array({json::array({0, 0}), json::array({0})});
  CHECK_THROWS_AS(semilattice_candidate_from_json(ragged), Error);

  json alien = j;
  alien["meet"] = json::array({json::array({0, 0}), json::array({0, 5})});
  CHECK(kind_of([&] { semilattice_candidate_from_json(alien); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("term tuples round-trip through JSON") {
  TermVector tv = make_term_vector(3, {0b001, 0b011});
  json j = term_vector_to_json(tv);
  CHECK(j["n"] == 3);
  CHECK(j["terms"] == json::array({json::array({1}), json::array({1, 2})}));
  CHECK(term_vector_from_json(j) == tv);

  CHECK_THROWS_AS(term_vector_from_json(json{{"n", 3}, {"terms", json::array()}}),
                  Error);
  CHECK_THROWS_AS(
      term_vector_from_json(json{
          {"n", 3}, {"terms", json::array({json::array()})}}),
      Error);
  CHECK_THROWS_AS(
      term_vector_from_json(json{
          {"n", 3}, {"terms", json::array({json::array({4})})}}),
      Error);
  CHECK_THROWS_AS(
      term_vector_from_json(json{
          {"n", 3}, {"terms", json::array({json::array({0})})}}),
      Error);
  CHECK_THROWS_AS(term_vector_from_json(json{{"terms", json::array()}}), Error);
}

TEST_CASE("set systems round-trip through JSON, empty member included") {
  SetSystem E = make_set_system(2, {0b00, 0b10, 0b11});
  json j = set_system_to_json(E);
  CHECK(j["m"] == 2);
  CHECK(j["members"] ==
        json::array({json::array(), json::array({2}), json::array({1, 2})}));
  CHECK(set_system_from_json(j) == E);

  // duplicate members collapse
  json dup{{"m", 2}, {"members", json::array({json::array({1}),
                                               json::array({1})})}};
  CHECK(set_system_from_json(dup) == make_set_system(2, {0b01}));

  CHECK_THROWS_AS(set_system_from_json(json{{"m", 2},
                                            {"members", json::array()}}),
                  Error);
  CHECK_THROWS_AS(
      set_system_from_json(json{
          {"m", 2}, {"members", json::array({json::array({3})})}}),
      Error);
  CHECK_THROWS_AS(set_system_from_json(json{{"m", 0},
                                            {"members", json::array()}}),
                  Error);
  CHECK_THROWS_AS(set_system_from_json(json{{"members", json::array()}}),
                  Error);
}

TEST_CASE("named clone presets resolve to constant choices") {
  CHECK(named_clone_constants("meet") == std::make_pair(false, false));
  CHECK(named_clone_constants("meet0") == std::make_pair(true, false));
  CHECK(named_clone_constants("meet1") == std::make_pair(false, true));
  CHECK(named_clone_constants("meet01") == std::make_pair(true, true));
  CHECK_THROWS_AS(named_clone_constants("majority"), Error);
}

TEST_CASE("clone generator presets respect the semilattice's constants") {
  SemilatticeStructure S = chain_semilattice(2);
  CHECK(semilattice_clone_generators(S, false, false).size() == 1);
  auto gens = semilattice_clone_generators(S, true, true);
  REQUIRE(gens.size() == 3);
  CHECK(gens[0] == S.meet);
  CHECK(gens[1] == constant_op(Domain{2}, 1, 0));
  CHECK(gens[2] == constant_op(Domain{2}, 1, 1));

  // a flat semilattice without identity rejects the identity constant
  Operation flat{Domain{3}, 2, {0, 2, 2, 2, 1, 2, 2, 2, 2}};
  SemilatticeStructure F = SemilatticeStructure::from_meet(flat);
  REQUIRE_FALSE(F.identity.has_value());
  CHECK(semilattice_clone_generators(F, true, false).size() == 2);
  CHECK_THROWS_AS(semilattice_clone_generators(F, false, true), Error);
}

TEST_CASE("clones parse from names or explicit generators") {
  json named{{"max_arity", 3}, {"named", "meet01"}, {"domain", 2}};
  CloneTable C = clone_from_json(named);
  CHECK(C.max_arity() == 3);
  CHECK(C.generators().size() == 3);
  CHECK(C.part(2).size() == 5);

  CloneTable overridden = clone_from_json(named, 2);
  CHECK(overridden.max_arity() == 2);

  json explicit_gens{{"max_arity", 2},
                     {"generators", json::array({operation_to_json(kAnd2)})}};
  CloneTable D = clone_from_json(explicit_gens);
  CHECK(D.part(2).size() == 3);
  CHECK(D.contains(kAnd2));

  CHECK_THROWS_AS(clone_from_json(json{{"max_arity", 2},
                                       {"named", "meet"}}),
                  Error);  // no domain
  CHECK_THROWS_AS(clone_from_json(json{{"max_arity", 2},
                                       {"generators", json::array()}}),
                  Error);
  CHECK_THROWS_AS(clone_from_json(json{{"named", "meet"}, {"domain", 2}}),
                  Error);  // no max_arity
}

TEST_CASE("universes parse from arity lists or explicit operations") {
  json by_arity{{"domain", 2}, {"arities", json::array({1, 2})}};
  CHECK(universe_from_json(by_arity).operations.size() == 20);

  json by_ops{{"domain", 2},
              {"ops", json::array({operation_to_json(kAnd2),
                                   operation_to_json(kXor2)})}};
  Universe u = universe_from_json(by_ops);
  REQUIRE(u.operations.size() == 2);
  CHECK(u.operations[0] == kAnd2);

  CHECK_THROWS_AS(universe_from_json(json{{"domain", 2}}), Error);
  CHECK_THROWS_AS(
      universe_from_json(json{{"domain", 2}, {"arities", json::array()}}),
      Error);
  CHECK_THROWS_AS(
      universe_from_json(json{{"domain", 2}, {"arities", json::array({0})}}),
      Error);
}

TEST_CASE("down-set reports serialize with witnesses") {
  SemilatticeStructure S = chain_semilattice(2);
  json j = downset_report_to_json(downset_report(kXor2, S));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 4);
  CHECK(j[0]["representative"]["table"] == json::array({0, 0}));
  CHECK(j[0]["class_size_sampled"] == 0);
  CHECK(j[2]["representative"]["table"] == json::array({0, 1, 1, 0}));
  CHECK(j[2]["witness_E"]["members"] ==
        json::array({json::array({1}), json::array({2})}));
}

TEST_CASE("posets serialize with classes and covers") {
  Universe u = universe_all(Domain{2}, {1});
  CloneTable C = generate_clone(
      Domain{2},
      {chain_semilattice(2).meet, constant_op(Domain{2}, 1, 0),
       constant_op(Domain{2}, 1, 1)},
      2);
  json j = poset_to_json(build_preorder(u, C, PosetStrategy::Generic));
  REQUIRE(j["classes"].size() == 4);
  CHECK(j["classes"][0]["id"] == 0);
  CHECK(j["classes"][0]["members"] == json::array({0}));
  CHECK(j["classes"][0]["representative"]["table"] == json::array({0, 0}));
  CHECK(j["hasse"] == json::array({json::array({0, 1}), json::array({0, 2}),
                                   json::array({3, 1}), json::array({3, 2})}));
}

TEST_CASE("file loading distinguishes malformed and missing input") {
  const char* path = "json_io_roundtrip_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"domain": 2, "arity": 2, "table": [0, 0, 0, 1]})";
  }
  CHECK(operation_from_json(load_json_file(path)) == kAnd2);
  {
    std::ofstream out(path);
    out << R"({"domain": 2, "arity": 2, )";  // truncated
  }
  CHECK(kind_of([&] { load_json_file(path); }) == ErrorKind::InvalidInput);
  std::remove(path);
  CHECK(kind_of([&] { load_json_file(path); }) == ErrorKind::InvalidInput);
}
