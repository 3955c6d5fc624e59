// Command-line front end: validate semilattices, decide minors, compute
// degrees, canonicalize term tuples, enumerate down-set classes, and build
// minor posets.  Exit codes: 0 success / relation holds, 1 negative result,
// 2 bad input, 3 budget or enumeration cap exceeded.
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "minorlab/json_io.hpp"

namespace ml = minorlab;

namespace {

std::uint64_t default_budget() {
  if (const char* env = std::getenv("MINORLAB_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return v;
  }
  return 1'000'000'000ULL;
}

std::string system_text(const ml::SetSystem& E) {
  std::string out = "{";
  bool first_member = true;
  for (std::uint32_t s : E.members) {
    if (!first_member) out += ", ";
    out += "{";
    bool first_elem = true;
    ml::for_each_bit(s, [&](std::uint32_t b) {
      if (!first_elem) out += ",";
      out += std::to_string(b + 1);
      first_elem = false;
    });
    out += "}";
    first_member = false;
  }
  return out + "}";
}

std::string op_digest(const ml::Operation& op) {
  std::string out = std::to_string(op.arity) + ":";
  for (ml::Element e : op.table) {
    if (op.domain.size > 10 && out.back() != ':') out += '.';
    out += std::to_string(int(e));
  }
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  ml::require(f.good(), ml::ErrorKind::InvalidInput,
              "cannot open output file: " + out_path);
  f << text;
}

struct CloneChoice {
  bool preset = false;
  bool use_zero = false;
  bool use_one = false;
  std::string file;
};

CloneChoice parse_clone_arg(const std::string& value) {
  if (value == "meet" || value == "meet0" || value == "meet1" ||
      value == "meet01") {
    auto [z, o] = ml::named_clone_constants(value);
    return CloneChoice{true, z, o, {}};
  }
  return CloneChoice{false, false, false, value};
}

ml::SemilatticeStructure load_semilattice(const std::string& path,
                                          std::uint32_t default_domain) {
  if (path.empty()) return ml::chain_semilattice(default_domain);
  return ml::SemilatticeStructure::from_meet(
      ml::semilattice_candidate_from_json(ml::load_json_file(path)));
}

int cmd_validate(const std::string& path) {
  ml::Operation cand =
      ml::semilattice_candidate_from_json(ml::load_json_file(path));
  ml::SemilatticeCheck chk = ml::check_semilattice(cand);
  if (!chk.ok) {
    std::cout << "semilattice: INVALID\n";
    std::cout << "violation: " << chk.law << " at (";
    if (chk.count == 1)
      std::cout << int(chk.witness[0]) << ", " << int(chk.witness[0]);
    else
      for (std::uint32_t i = 0; i < chk.count; ++i) {
        if (i) std::cout << ", ";
        std::cout << int(chk.witness[i]);
      }
    std::cout << ")\n";
    return 1;
  }
  std::cout << "semilattice: valid\n";
  auto identity = ml::find_identity(cand);
  auto zero = ml::find_zero(cand);
  std::cout << "identity: "
            << (identity ? std::to_string(int(*identity)) : "none") << "\n";
  std::cout << "zero: " << (zero ? std::to_string(int(*zero)) : "none")
            << "\n";
  return 0;
}

int cmd_minor(const std::string& f_path, const std::string& g_path,
              const std::string& clone_arg, std::uint32_t max_arity,
              std::uint64_t budget_limit) {
  ml::Operation f = ml::operation_from_json(ml::load_json_file(f_path));
  ml::Operation g = ml::operation_from_json(ml::load_json_file(g_path));
  ml::SearchBudget budget{budget_limit, 0};
  CloneChoice choice = parse_clone_arg(clone_arg);
  if (choice.preset) {
    ml::SemilatticeStructure S = ml::chain_semilattice(f.domain.size);
    if (choice.use_zero)
      ml::require(S.zero.has_value(), ml::ErrorKind::InvalidInput,
                  "clone preset: no zero element");
    if (choice.use_one)
      ml::require(S.identity.has_value(), ml::ErrorKind::InvalidInput,
                  "clone preset: no identity element");
    auto found = ml::with_constants(f, g, S, choice.use_zero, choice.use_one,
                                    &budget);
    if (found) {
      std::cout << "witness: " << found->text() << "\n";
      return 0;
    }
    std::cout << "NOT A MINOR\n";
    return 1;
  }
  ml::CloneTable C =
      ml::clone_from_json(ml::load_json_file(choice.file), max_arity);
  auto found = ml::is_c_minor(f, g, C, &budget);
  if (found) {
    std::string text;
    for (std::size_t j = 0; j < found->inner.size(); ++j) {
      if (j) text += ' ';
      text += op_digest(found->inner[j]);
    }
    std::cout << "witness: " << text << "\n";
    return 0;
  }
  std::cout << "NOT A MINOR\n";
  return 1;
}

int cmd_degree(const std::string& op_path, const std::string& clone_arg,
               std::uint32_t max_arity, std::uint64_t budget_limit) {
  ml::Operation f = ml::operation_from_json(ml::load_json_file(op_path));
  ml::SearchBudget budget{budget_limit, 0};
  CloneChoice choice = parse_clone_arg(clone_arg);
  ml::CloneTable C = [&] {
    if (choice.preset) {
      ml::SemilatticeStructure S = ml::chain_semilattice(f.domain.size);
      return ml::generate_clone(
          S.domain(),
          ml::semilattice_clone_generators(S, choice.use_zero, choice.use_one),
          std::max(f.arity, 2u));
    }
    return ml::clone_from_json(ml::load_json_file(choice.file), max_arity);
  }();
  std::cout << "degree: " << ml::c_degree(f, C, &budget) << "\n";
  return 0;
}

int cmd_canon(const std::string& op_path, const std::string& terms_path,
              const std::string& sl_path) {
  ml::Operation g = ml::operation_from_json(ml::load_json_file(op_path));
  ml::TermVector tv =
      ml::term_vector_from_json(ml::load_json_file(terms_path));
  ml::SemilatticeStructure S = load_semilattice(sl_path, g.domain.size);
  ml::CanonicalForm cf = ml::canonicalize(g, tv, S);
  std::cout << "E: " << system_text(cf.system) << "\n";
  std::cout << "psi: " << ml::term_text(cf.psi) << "\n";
  std::cout << "pi: (";
  for (std::size_t i = 0; i < cf.witness.pi.size(); ++i) {
    if (i) std::cout << ", ";
    std::cout << cf.witness.pi[i];
  }
  std::cout << ")\n";
  std::cout << "xi: " << ml::term_text(cf.witness.xi) << "\n";
  std::cout << "verified\n";
  return 0;
}

int cmd_downset(const std::string& op_path, const std::string& sl_path,
                const ml::DownsetOptions& opt, const std::string& out_path) {
  ml::Operation f = ml::operation_from_json(ml::load_json_file(op_path));
  ml::SemilatticeStructure S = load_semilattice(sl_path, f.domain.size);
  ml::DownsetReport report = ml::downset_report(f, S, opt);
  write_output(ml::downset_report_to_json(report).dump(2) + "\n", out_path);
  return 0;
}

int cmd_poset(const std::string& universe_path, const std::string& clone_arg,
              std::uint32_t max_arity, const std::string& strategy_name,
              const std::string& format, std::uint32_t threads,
              const std::string& out_path) {
  ml::Universe universe =
      ml::universe_from_json(ml::load_json_file(universe_path));
  std::uint32_t top_arity = 0;
  for (const ml::Operation& op : universe.operations)
    top_arity = std::max(top_arity, op.arity);
  CloneChoice choice = parse_clone_arg(clone_arg);
  ml::CloneTable C = [&] {
    if (choice.preset) {
      ml::SemilatticeStructure S =
          ml::chain_semilattice(universe.domain.size);
      return ml::generate_clone(
          S.domain(),
          ml::semilattice_clone_generators(S, choice.use_zero, choice.use_one),
          std::max({top_arity, 2u, max_arity}));
    }
    return ml::clone_from_json(ml::load_json_file(choice.file), max_arity);
  }();
  ml::PosetStrategy strategy;
  if (strategy_name == "generic")
    strategy = ml::PosetStrategy::Generic;
  else if (strategy_name == "fast")
    strategy = ml::PosetStrategy::SemilatticeFast;
  else
    ml::raise(ml::ErrorKind::InvalidInput,
              "unknown strategy: " + strategy_name);
  ml::PosetOptions opt;
  opt.threads = threads;
  ml::MinorPoset poset = ml::build_preorder(universe, C, strategy, opt);
  if (format == "dot") {
    auto view = ml::SemilatticeCloneView::from_generators(C);
    write_output(ml::export_dot(poset, view ? &view->s : nullptr), out_path);
  } else if (format == "json") {
    write_output(ml::poset_to_json(poset).dump(2) + "\n", out_path);
  } else {
    ml::raise(ml::ErrorKind::InvalidInput, "unknown format: " + format);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "minor preorders, degrees and canonical decompositions of finite "
      "operations over semilattice-generated clones"};
  app.require_subcommand(1);

  std::uint64_t budget = default_budget();
  std::uint32_t threads = 1;
  std::uint32_t max_arity = 0;

  auto* validate =
      app.add_subcommand("validate", "check the semilattice identities");
  std::string validate_input;
  validate->add_option("input", validate_input, "semilattice JSON file")
      ->required();

  auto* minor = app.add_subcommand(
      "minor", "decide whether f is a minor of g over a clone");
  std::string minor_f, minor_g, minor_clone = "meet";
  minor->add_option("f", minor_f, "candidate minor (operation JSON)")
      ->required();
  minor->add_option("g", minor_g, "outer operation (operation JSON)")
      ->required();
  minor->add_option("--clone", minor_clone,
                    "meet|meet0|meet1|meet01 or a clone JSON file");
  minor->add_option("--budget", budget, "search node budget");
  minor->add_option("--max-arity", max_arity,
                    "materialized clone arity bound (clone files)");

  auto* degree =
      app.add_subcommand("degree", "least arity of an outer operation");
  std::string degree_op, degree_clone = "meet";
  degree->add_option("op", degree_op, "operation JSON file")->required();
  degree->add_option("--clone", degree_clone,
                     "meet|meet0|meet1|meet01 or a clone JSON file");
  degree->add_option("--budget", budget, "search node budget");
  degree->add_option("--max-arity", max_arity,
                     "materialized clone arity bound (clone files)");

  auto* canon = app.add_subcommand(
      "canon", "canonical form of an operation composed with meet terms");
  std::string canon_op, canon_terms, canon_sl;
  canon->add_option("op", canon_op, "outer operation JSON file")->required();
  canon->add_option("terms", canon_terms, "term tuple JSON file")->required();
  canon->add_option("--semilattice", canon_sl,
                    "semilattice JSON (default: min over a chain)");

  auto* downset = app.add_subcommand(
      "downset", "equivalence classes below an operation");
  std::string downset_op, downset_sl, downset_out;
  ml::DownsetOptions downset_opt;
  downset->add_option("op", downset_op, "operation JSON file")->required();
  downset->add_option("--semilattice", downset_sl,
                      "semilattice JSON (default: min over a chain)");
  downset->add_option("--samples", downset_opt.samples,
                      "random minors to classify");
  downset->add_option("--seed", downset_opt.seed, "sampling seed");
  downset->add_option("--ambient-max", downset_opt.ambient_max,
                      "largest sampled ambient arity");
  downset->add_option("--e-cap", downset_opt.e_cap,
                      "cap on enumerated candidate systems");
  downset->add_option("--budget", budget, "search node budget");
  downset->add_option("--threads", threads, "worker threads");
  downset->add_option("--out", downset_out, "write JSON here (else stdout)");

  auto* poset = app.add_subcommand(
      "poset", "minor preorder of an operation universe under a clone");
  std::string poset_universe, poset_clone = "meet", poset_out;
  std::string poset_strategy = "generic", poset_format = "json";
  poset->add_option("universe", poset_universe, "universe JSON file")
      ->required();
  poset->add_option("--clone", poset_clone,
                    "meet|meet0|meet1|meet01 or a clone JSON file");
  poset->add_option("--strategy", poset_strategy, "generic|fast");
  poset->add_option("--format", poset_format, "json|dot");
  poset->add_option("--threads", threads, "worker threads");
  poset->add_option("--max-arity", max_arity,
                    "materialized clone arity bound (clone files)");
  poset->add_option("--out", poset_out, "write output here (else stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_input);
    if (minor->parsed())
      return cmd_minor(minor_f, minor_g, minor_clone, max_arity, budget);
    if (degree->parsed())
      return cmd_degree(degree_op, degree_clone, max_arity, budget);
    if (canon->parsed()) return cmd_canon(canon_op, canon_terms, canon_sl);
    if (downset->parsed()) {
      downset_opt.budget = budget;
      downset_opt.threads = threads;
      return cmd_downset(downset_op, downset_sl, downset_opt, downset_out);
    }
    if (poset->parsed())
      return cmd_poset(poset_universe, poset_clone, max_arity, poset_strategy,
                       poset_format, threads, poset_out);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const ml::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ml::ErrorKind::BudgetExceeded:
      case ml::ErrorKind::CapExceeded:
        return 3;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
