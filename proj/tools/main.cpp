#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

  using namespace kccli;

  void add_source(CLI::App* cmd, Source& src) {
    cmd->add_option("-g,--group", src.group, "Catalog key");
    cmd->add_option("-p,--presentation", src.presentation,
                    "Presentation text, e.g. \"< x, y | y*x*y = x*y*x >\"");
    cmd->add_option("-f,--file", src.file, "File holding a presentation");
    cmd->add_option("--surgery", src.surgery,
                    "Dehn surgery slope p,q on a catalog entry");
    cmd->add_option("--component", src.component,
                    "Link component for --surgery")
        ->capture_default_str();
  }

  void add_format(CLI::App* cmd, Settings& st) {
    cmd->add_option("--format", st.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }

  void add_povm_options(CLI::App* cmd, kc_povm_options& po,
                        std::vector<std::size_t>& factors) {
    cmd->add_option("--factors", factors,
                    "Pauli tensor factors, e.g. --factors 2 2 or --factors 6 "
                    "(default: prime factorization)")
        ->delimiter(',');
    cmd->add_option("--element-cap", po.element_cap,
                    "Largest image enumerated for candidate states")
        ->capture_default_str();
    cmd->add_option("--rank-tol", po.rank_relative,
                    "Relative eigenvalue cutoff for the Gram rank")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--sic-tol", po.sic, "Absolute tolerance of the SIC test")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--pp-gap", po.pp_gap,
                    "Gap separating distinct pairwise values")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-index subgroups, coverings and Pauli-orbit POVMs of "
               "knot and link groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kc_version()));

  Settings st;
  kc_lowindex_options_init(&st.lowindex);
  if (char const* env = std::getenv("KNOTCOVER_NODE_BUDGET");
      env != nullptr && *env != '\0') {
    try {
      st.lowindex.node_budget = std::stoull(env);
    } catch (std::exception const&) {
      std::cerr << "KNOTCOVER_NODE_BUDGET must be a positive integer\n";
      return exit_usage;
    }
  }
  bool no_elimination = false;
  app.add_option("--node-budget", st.lowindex.node_budget,
                 "Search node budget (env KNOTCOVER_NODE_BUDGET)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-cosets", st.max_cosets,
                 "Coset table size limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--no-elimination", no_elimination,
               "Search the presentation as given, without eliminating "
               "generators first");

  Source                   src;
  std::size_t              max_d  = 8;
  std::size_t              degree = 0;
  bool                     oracle = false;
  bool                     all    = false;
  bool                     table  = false;
  std::string              dump_dir, subgroup, key, which;
  std::optional<std::size_t> reproduce_max;
  kc_povm_options          po;
  kc_povm_options_init(&po);
  std::vector<std::size_t> factors;

  auto* eta = app.add_subcommand("eta", "Conjugacy classes of subgroups per index");
  add_source(eta, src);
  add_format(eta, st);
  eta->add_option("-d,--max-d", max_d, "Largest index")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eta->add_flag("--oracle", oracle,
                "Compare with the catalog oracle; exit 1 on mismatch");

  auto* cov = app.add_subcommand("coverings",
                                 "One row per class: type, homology, cusps");
  add_source(cov, src);
  add_format(cov, st);
  cov->add_option("-d,--max-d", max_d, "Largest index")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cov->add_option("--dump-tables", dump_dir,
                  "Write each class's coset table as CSV into this directory");

  auto* povm = app.add_subcommand("povm",
                                  "Pauli-orbit POVMs of the classes of one index");
  add_source(povm, src);
  add_format(povm, st);
  povm->add_option("-d,--degree", degree, "Index of the classes to scan")
      ->required()
      ->check(CLI::PositiveNumber);
  add_povm_options(povm, po, factors);
  povm->add_flag("--all", all, "Also list the rank of every candidate state");

  auto* cos = app.add_subcommand("cosets", "Todd-Coxeter coset enumeration");
  add_source(cos, src);
  cos->add_option("-s,--subgroup", subgroup,
                  "Comma-separated subgroup generators (default: trivial)");
  cos->add_flag("--table", table, "Print the coset table as CSV");

  auto* cat = app.add_subcommand("catalog", "List catalog keys or show one entry");
  cat->add_option("key", key, "Catalog key");

  auto* rep = app.add_subcommand("reproduce",
                                 "Compare the pipeline with stored oracle tables");
  rep->add_option("table", which, "t1, t2, t4 or t5")
      ->required()
      ->check(CLI::IsMember({"t1", "t2", "t4", "t5"}));
  rep->add_option("-d,--max-d", reproduce_max,
                  "Largest covering degree checked (default: 6, 5, 4, 10)");
  add_format(rep, st);
  add_povm_options(rep, po, factors);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  st.lowindex.eliminate_generators = no_elimination ? 0 : 1;
  if (!factors.empty()) {
    po.factors     = factors.data();
    po.num_factors = factors.size();
  }

  try {
    if (eta->parsed()) {
      return cmd_eta(src, st, max_d, oracle, std::cout);
    }
    if (cov->parsed()) {
      return cmd_coverings(src, st, max_d, dump_dir, std::cout);
    }
    if (povm->parsed()) {
      return cmd_povm(src, st, degree, po, all, std::cout);
    }
    if (cos->parsed()) {
      return cmd_cosets(src, st, subgroup, table, std::cout);
    }
    if (cat->parsed()) {
      return cmd_catalog(key, std::cout);
    }
    if (rep->parsed()) {
      return cmd_reproduce(which, st, reproduce_max, po, std::cout);
    }
  } catch (Failure const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.status);
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_mismatch;
  }
  return exit_usage;
}
