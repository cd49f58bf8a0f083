// qmc: capacities, entropy rates and sweep datasets for the two-branch
// depolarizing channel with Markov memory.

#include "qmc/cli/commands.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

namespace {

using namespace qmc::cli;

struct ParamFlags {
  std::optional<double> mu, a, d, x0, x1;
  bool positive_map = false;

  void attach(CLI::App* app, bool mu_required) {
    auto* m = app->add_option("--mu", mu, "memory correlation mu in (-1, 1)");
    if (mu_required) m->required();
    auto* oa = app->add_option("--a", a, "branch sum a = x0 + x1");
    auto* od = app->add_option("--d", d, "branch difference d = x0 - x1");
    auto* o0 = app->add_option("--x0", x0, "depolarizing parameter of branch 0");
    auto* o1 = app->add_option("--x1", x1, "depolarizing parameter of branch 1");
    for (auto* o : {oa, od}) o->excludes(o0)->excludes(o1);
    app->add_flag("--positive-map", positive_map,
                  "accept branch parameters in [-1, 1] (positive but not completely positive)");
  }

  ParamInput input() const {
    ParamInput in{mu, a, d, x0, x1, qmc::ParamDomain::completely_positive};
    if (positive_map) in.domain = qmc::ParamDomain::positive_map;
    return in;
  }
};

const std::map<std::string, OutputFormat> kFormats = {{"csv", OutputFormat::csv},
                                                      {"json", OutputFormat::json}};

int emit(const CommandResult& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical capacities of a depolarizing channel with Markov memory"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  ParamFlags two_flags;
  OutputFormat two_format = OutputFormat::json;
  auto* two = app.add_subcommand("two-qubit", "two-use capacity and optimal input family");
  two_flags.attach(two, true);
  two->add_option("--format", two_format)->transform(CLI::CheckedTransformer(kFormats));

  ParamFlags sweep_flags;
  std::string axis = "mu";
  std::string quantity = "f";
  std::string families = "all";
  std::string d_mode = "explicit";
  SweepSpec spec;
  SweepQuantity sq;
  OutputFormat sweep_format = OutputFormat::csv;
  auto* sweep = app.add_subcommand("sweep", "one-parameter sweep, one row per grid point");
  sweep_flags.attach(sweep, false);
  sweep->add_option("--axis", axis, "swept parameter: mu | a | d")
      ->check(CLI::IsMember({"mu", "a", "d"}));
  sweep->add_option("--lo", spec.lo, "lower end of the range")->required();
  sweep->add_option("--hi", spec.hi, "upper end of the range")->required();
  sweep->add_option("--steps", spec.steps, "number of intervals (steps + 1 points)");
  sweep->add_option("--quantity", quantity, "f | c2 | i_n | c_prod | bound")
      ->check(CLI::IsMember({"f", "c2", "i_n", "c_prod", "bound"}));
  sweep->add_option("--n", sq.n, "block length for i_n");
  sweep->add_option("--families", families, "comma list of product,ghz,w,max_entangled or all");
  sweep->add_option("--tolerance", sq.tolerance, "bracket half-width target for c_prod/bound");
  sweep->add_option("--n-max", sq.n_max, "largest block length for c_prod/bound");
  sweep->add_option("--d-mode", d_mode, "explicit | max_valid")
      ->check(CLI::IsMember({"explicit", "max_valid"}));
  sweep->add_option("--format", sweep_format)->transform(CLI::CheckedTransformer(kFormats));

  ParamFlags rate_flags;
  double rate_tol = 1e-6;
  int rate_n_max = 20;
  OutputFormat rate_format = OutputFormat::json;
  auto* rate = app.add_subcommand("entropy-rate", "product-state capacity and upper bound");
  rate_flags.attach(rate, true);
  rate->add_option("--tolerance", rate_tol, "bracket half-width target");
  rate->add_option("--n-max", rate_n_max, "largest block length (<= 24)");
  rate->add_option("--format", rate_format)->transform(CLI::CheckedTransformer(kFormats));

  ParamFlags mi_flags;
  int mi_n = 2;
  std::string mi_families = "all";
  OutputFormat mi_format = OutputFormat::csv;
  auto* mi = app.add_subcommand("mutual-info", "Pauli-orbit mutual information per family");
  mi_flags.attach(mi, true);
  mi->add_option("--n", mi_n, "number of channel uses");
  mi->add_option("--families", mi_families, "comma list of product,ghz,w,max_entangled or all");
  mi->add_option("--format", mi_format)->transform(CLI::CheckedTransformer(kFormats));

  std::string out_dir = "figures";
  auto* fig = app.add_subcommand("figures", "write fig1..fig5.csv and manifest.json");
  fig->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*two) return emit(cmd_two_qubit(two_flags.input(), two_format));
    if (*sweep) {
      spec.axis = *parse_axis(axis);
      spec.fixed = sweep_flags.input();
      spec.d_mode = d_mode == "max_valid" ? DMode::max_valid : DMode::explicit_value;
      sq.kind = *parse_quantity(quantity);
      sq.families = parse_families(families);
      return emit(cmd_sweep(spec, sq, sweep_format));
    }
    if (*rate) return emit(cmd_entropy_rate(rate_flags.input(), rate_tol, rate_n_max, rate_format));
    if (*mi) return emit(cmd_mutual_info(mi_flags.input(), mi_n, parse_families(mi_families),
                                         mi_format));
    if (*fig) return emit(cmd_figures(out_dir));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
