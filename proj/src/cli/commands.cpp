#include "qmc/cli/commands.hpp"

#include "qmc/cli/format.hpp"
#include "qmc/ensembles.hpp"
#include "qmc/errors.hpp"
#include "qmc/hmm_rate.hpp"
#include "qmc/two_qubit.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace qmc::cli {

namespace {

using Json = nlohmann::ordered_json;

// Rows share one column order; cells are JSON scalars (null = not computed).
struct Table {
  std::vector<std::string> columns;
  std::vector<Json> rows;

  std::string csv() const {
    std::ostringstream os;
    CsvWriter writer(os);
    writer.row(columns);
    std::vector<std::string> fields;
    for (const Json& r : rows) {
      fields.clear();
      for (const auto& c : columns) fields.push_back(cell(r.contains(c) ? r.at(c) : Json()));
      writer.row(fields);
    }
    return os.str();
  }

  static std::string cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number()) return format_number(v.get<double>());
    return v.get<std::string>();
  }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

CommandResult invalid(const std::string& message) {
  return {kExitInvalidInput, "", "error: " + message + "\n"};
}

void put_params(Json& row, double mu, double a, double d) {
  row["mu"] = mu;
  row["a"] = a;
  row["d"] = d;
  row["x0"] = 0.5 * (a + d);
  row["x1"] = 0.5 * (a - d);
}

const char* domain_name(ParamDomain domain) {
  return domain == ParamDomain::completely_positive ? "completely_positive" : "positive_map";
}

std::optional<std::string> check_families(int n, const std::vector<std::string>& families) {
  if (n < 1 || n > ChannelOptions{}.max_qubits) {
    return "n must lie in [1, " + std::to_string(ChannelOptions{}.max_qubits) + "]";
  }
  if (families.empty()) return std::string("no input families given");
  for (const auto& name : families) {
    try {
      (void)ensembles::family_from_name(name, n);
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
  }
  return std::nullopt;
}

// Per-use and raw I_n for one family; null cells when the output is not a
// valid state (only possible in the positive-map domain).
void put_family_info(Json& row, const std::string& prefix, const std::string& family, int n,
                     const MemoryChannel& channel) {
  try {
    const auto mi = ensembles::orbit_mutual_information(ensembles::family_from_name(family, n),
                                                        channel);
    row[prefix + "per_use"] = mi.per_use;
    row[prefix + "raw"] = mi.raw;
  } catch (const InvalidStateError&) {
    row[prefix + "per_use"] = nullptr;
    row[prefix + "raw"] = nullptr;
  }
}

// ---- sweep -----------------------------------------------------------------

struct Triple {
  double mu = 0.0;
  double a = 0.0;
  double d = 0.0;
};

std::vector<std::string> quantity_columns(const SweepQuantity& q) {
  switch (q.kind) {
    case QuantityKind::f:
      return {"f"};
    case QuantityKind::c2:
      return {"f", "c2_product", "c2_entangled", "capacity", "optimal_family"};
    case QuantityKind::i_n: {
      std::vector<std::string> cols = {"n"};
      for (const auto& fam : q.families) {
        cols.push_back(fam + "_per_use");
        cols.push_back(fam + "_raw");
      }
      return cols;
    }
    case QuantityKind::c_prod:
      return {"c_prod", "c_prod_lower", "c_prod_upper", "n_used", "converged"};
    case QuantityKind::bound:
      return {"c_prod_upper", "markov_rate", "bound"};
  }
  return {};
}

void put_quantity(Json& row, const SweepQuantity& q, const ChannelParams& p) {
  switch (q.kind) {
    case QuantityKind::f:
      row["f"] = two_qubit::threshold_f(p);
      break;
    case QuantityKind::c2: {
      const auto cap = two_qubit::two_use_capacity(p);
      row["f"] = two_qubit::threshold_f(p);
      row["c2_product"] = cap.product_branch;
      row["c2_entangled"] = cap.entangled_branch;
      row["capacity"] = cap.capacity_bits_per_use;
      row["optimal_family"] = two_qubit::to_string(cap.optimal_family);
      break;
    }
    case QuantityKind::i_n: {
      const MemoryChannel channel(p);
      row["n"] = q.n;
      for (const auto& fam : q.families) put_family_info(row, fam + "_", fam, q.n, channel);
      break;
    }
    case QuantityKind::c_prod: {
      const auto pc = hmm::product_state_capacity(hmm::FlipProcess(p), q.n_max, q.tolerance);
      row["c_prod"] = pc.capacity;
      row["c_prod_lower"] = pc.lower;
      row["c_prod_upper"] = pc.upper;
      row["n_used"] = pc.n_used;
      row["converged"] = pc.converged;
      break;
    }
    case QuantityKind::bound: {
      const hmm::FlipProcess process(p);
      const auto pc = hmm::product_state_capacity(process, q.n_max, q.tolerance);
      const double rate = hmm::markov_entropy_rate(process.memory());
      row["c_prod_upper"] = pc.upper;
      row["markov_rate"] = rate;
      row["bound"] = std::min(1.0, pc.upper + rate);
      break;
    }
  }
}

const char* quantity_name(QuantityKind k) {
  switch (k) {
    case QuantityKind::f: return "f";
    case QuantityKind::c2: return "c2";
    case QuantityKind::i_n: return "i_n";
    case QuantityKind::c_prod: return "c_prod";
    case QuantityKind::bound: return "bound";
  }
  return "";
}

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::mu: return "mu";
    case SweepAxis::a: return "a";
    case SweepAxis::d: return "d";
  }
  return "";
}

// ---- figures ---------------------------------------------------------------

const std::vector<std::string> kFigureColumns = {"panel", "mu",     "a",      "d",      "x0",
                                                 "x1",    "valid",  "domain", "n",      "f",
                                                 "family", "I_n",   "per_use", "physical"};

const std::vector<std::string> kAllFamilies = {"product", "ghz", "w", "max_entangled"};

double grid_value(double lo, double hi, int steps, int i) {
  return i == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / steps;
}

// Appends one row per family for the point (mu, a, d).
void figure_point(Table& table, const std::string& panel, double mu, double a, double d, int n,
                  const std::vector<std::string>& families,
                  ParamDomain domain = ParamDomain::completely_positive) {
  const bool valid = !ChannelParams::violation(mu, a, d, domain).has_value();
  std::optional<ChannelParams> params;
  std::optional<MemoryChannel> channel;
  if (valid) {
    params = ChannelParams::make(mu, a, d, domain);
    channel.emplace(*params);
  }
  for (const auto& fam : families) {
    Json row;
    row["panel"] = panel;
    put_params(row, mu, a, d);
    row["valid"] = valid;
    row["domain"] = domain_name(domain);
    row["n"] = n;
    row["family"] = fam;
    if (valid) {
      row["f"] = two_qubit::threshold_f(*params);
      put_family_info(row, "", fam, n, *channel);
      const bool physical = !row["per_use"].is_null();
      row["I_n"] = row["raw"];
      row.erase("raw");
      row["physical"] = physical;
    }
    table.rows.push_back(std::move(row));
  }
}

void surface(Table& table, int n, int a_steps, double mu_lo, double mu_hi, int mu_steps) {
  const double a_lo = -2.0 / 3.0;
  const double a_hi = 2.0;
  for (int i = 0; i <= a_steps; ++i) {
    const double a = grid_value(a_lo, a_hi, a_steps, i);
    for (int j = 0; j <= mu_steps; ++j) {
      const double mu = grid_value(mu_lo, mu_hi, mu_steps, j);
      figure_point(table, "surface", mu, a, max_valid_d(a), n, {"product", "max_entangled"});
    }
  }
}

Table figure1() {
  Table t{kFigureColumns, {}};
  surface(t, 2, 40, -0.95, 0.95, 38);
  return t;
}

Table figure2() {
  Table t{kFigureColumns, {}};
  const std::vector<std::string> fams = {"product", "max_entangled"};
  for (int i = 0; i <= 100; ++i) {
    figure_point(t, "mu", grid_value(-0.99, 0.99, 100, i), 1.0 / 3.0, -1.0, 2, fams);
  }
  for (int i = 0; i <= 100; ++i) {
    figure_point(t, "a", 2.0 / 3.0, grid_value(0.0, 1.2, 100, i), -1.0, 2, fams);
  }
  for (int i = 0; i <= 100; ++i) {
    figure_point(t, "d", 2.0 / 3.0, 1.0 / 3.0, grid_value(-1.0, 1.0, 100, i), 2, fams);
  }
  return t;
}

Table figure3() {
  Table t{kFigureColumns, {}};
  for (double mu : {0.7, 0.9}) {
    for (int n : {2, 4, 6, 8}) {
      figure_point(t, "families", mu, 2.0 / 3.0, -4.0 / 3.0, n, kAllFamilies);
    }
  }
  return t;
}

Table figure4() {
  Table t{kFigureColumns, {}};
  surface(t, 4, 20, -0.9, 0.9, 18);
  for (int i = 0; i <= 38; ++i) {
    figure_point(t, "mu_sweep", grid_value(-0.95, 0.95, 38, i), 1.0 / 3.0, 4.0 / 3.0, 4,
                 kAllFamilies, ParamDomain::positive_map);
  }
  return t;
}

Table figure5() {
  Table t{kFigureColumns, {}};
  surface(t, 6, 20, -0.9, 0.9, 18);
  return t;
}

}  // namespace

const char* version() {
#ifdef QMC_VERSION
  return QMC_VERSION;
#else
  return "unknown";
#endif
}

ResolvedParams resolve(const ParamInput& in) {
  if (!in.mu) return {std::nullopt, "--mu is required"};
  const bool has_ad = in.a.has_value() || in.d.has_value();
  const bool has_x = in.x0.has_value() || in.x1.has_value();
  if (has_ad && has_x) return {std::nullopt, "--a/--d and --x0/--x1 are mutually exclusive"};
  double a = 0.0;
  double d = 0.0;
  if (has_x) {
    if (!in.x0 || !in.x1) return {std::nullopt, "both --x0 and --x1 are required"};
    a = *in.x0 + *in.x1;
    d = *in.x0 - *in.x1;
  } else {
    if (!in.a || !in.d) return {std::nullopt, "both --a and --d are required"};
    a = *in.a;
    d = *in.d;
  }
  if (auto v = ChannelParams::violation(*in.mu, a, d, in.domain)) {
    return {std::nullopt, "invalid parameters: " + *v};
  }
  return {ChannelParams::make(*in.mu, a, d, in.domain), ""};
}

double max_valid_d(double a) {
  const double reach = std::min(2.0 - a, a + 2.0 / 3.0);
  if (!(reach >= -1e-12)) return std::nan("");
  return reach <= 0.0 ? 0.0 : -reach;
}

std::optional<SweepAxis> parse_axis(const std::string& s) {
  if (s == "mu") return SweepAxis::mu;
  if (s == "a") return SweepAxis::a;
  if (s == "d") return SweepAxis::d;
  return std::nullopt;
}

std::optional<QuantityKind> parse_quantity(const std::string& s) {
  if (s == "f") return QuantityKind::f;
  if (s == "c2") return QuantityKind::c2;
  if (s == "i_n") return QuantityKind::i_n;
  if (s == "c_prod") return QuantityKind::c_prod;
  if (s == "bound") return QuantityKind::bound;
  return std::nullopt;
}

std::vector<std::string> parse_families(const std::string& s) {
  if (s.empty() || s == "all") return kAllFamilies;
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

CommandResult cmd_two_qubit(const ParamInput& input, OutputFormat format) {
  const ResolvedParams r = resolve(input);
  if (!r.params) return invalid(r.error);
  const ChannelParams& p = *r.params;
  const auto spectrum = two_qubit::lambda_pair(p);
  const auto cap = two_qubit::two_use_capacity(p);

  Json rec;
  put_params(rec, p.mu(), p.a(), p.d());
  rec["f"] = two_qubit::threshold_f(p);
  rec["c2_product"] = cap.product_branch;
  rec["c2_entangled"] = cap.entangled_branch;
  rec["capacity"] = cap.capacity_bits_per_use;
  rec["optimal_family"] = two_qubit::to_string(cap.optimal_family);
  rec["theta_star"] = cap.theta_star;
  rec["lambda00"] = spectrum.lambda00;
  rec["lambda01"] = spectrum.lambda01;
  rec["lambda11"] = spectrum.lambda11;

  if (format == OutputFormat::json) return {kExitOk, dump(rec), ""};
  Table t;
  for (const auto& [key, _] : rec.items()) t.columns.push_back(key);
  t.rows.push_back(rec);
  return {kExitOk, t.csv(), ""};
}

CommandResult cmd_sweep(const SweepSpec& spec, const SweepQuantity& q, OutputFormat format) {
  if (!(spec.lo < spec.hi)) return invalid("sweep range needs lo < hi");
  if (spec.steps < 1) return invalid("--steps must be positive");
  if (spec.d_mode == DMode::max_valid && spec.axis == SweepAxis::d) {
    return invalid("--d-mode max_valid cannot be combined with --axis d");
  }
  if (q.kind == QuantityKind::i_n) {
    if (auto v = check_families(q.n, q.families)) return invalid(*v);
  }
  if ((q.kind == QuantityKind::c_prod || q.kind == QuantityKind::bound) &&
      (q.n_max < 1 || q.n_max > hmm::kMaxExactLength || !(q.tolerance >= 0.0))) {
    return invalid("--n-max must lie in [1, 24] and --tolerance must be non-negative");
  }

  // Fixed coordinates: accept x0/x1 in place of a/d.
  std::optional<double> fixed_a = spec.fixed.a;
  std::optional<double> fixed_d = spec.fixed.d;
  if (spec.fixed.x0 || spec.fixed.x1) {
    if (fixed_a || fixed_d) return invalid("--a/--d and --x0/--x1 are mutually exclusive");
    if (!spec.fixed.x0 || !spec.fixed.x1) return invalid("both --x0 and --x1 are required");
    fixed_a = *spec.fixed.x0 + *spec.fixed.x1;
    fixed_d = *spec.fixed.x0 - *spec.fixed.x1;
  }
  if (spec.axis != SweepAxis::mu && !spec.fixed.mu) return invalid("--mu is required");
  if (spec.axis != SweepAxis::a && !fixed_a) return invalid("--a is required");
  if (spec.axis != SweepAxis::d && spec.d_mode == DMode::explicit_value && !fixed_d) {
    return invalid("--d is required (or --d-mode max_valid)");
  }

  auto point = [&](double t) {
    Triple p;
    p.mu = spec.axis == SweepAxis::mu ? t : *spec.fixed.mu;
    p.a = spec.axis == SweepAxis::a ? t : *fixed_a;
    if (spec.axis == SweepAxis::d) {
      p.d = t;
    } else {
      p.d = spec.d_mode == DMode::max_valid ? max_valid_d(p.a) : *fixed_d;
    }
    return p;
  };
  auto is_valid = [&](const Triple& p) {
    return !ChannelParams::violation(p.mu, p.a, p.d, spec.fixed.domain).has_value();
  };
  auto make_row = [&](const char* type, int index, const Triple& p) {
    Json row;
    row["row_type"] = type;
    row["index"] = index;
    put_params(row, p.mu, p.a, p.d);
    const bool valid = is_valid(p);
    row["valid"] = valid;
    if (valid) put_quantity(row, q, ChannelParams::make(p.mu, p.a, p.d, spec.fixed.domain));
    return row;
  };
  auto f_at = [&](double t) {
    const Triple p = point(t);
    return two_qubit::threshold_f(ChannelParams::make(p.mu, p.a, p.d, spec.fixed.domain));
  };

  Table table;
  table.columns = {"row_type", "index", "mu", "a", "d", "x0", "x1", "valid"};
  for (const auto& c : quantity_columns(q)) table.columns.push_back(c);

  const bool detect = q.kind == QuantityKind::f || q.kind == QuantityKind::c2;
  std::optional<double> prev_t;
  for (int i = 0; i <= spec.steps; ++i) {
    const double t = grid_value(spec.lo, spec.hi, spec.steps, i);
    const Triple p = point(t);
    if (detect && prev_t && is_valid(point(*prev_t)) && is_valid(p)) {
      // Entangled inputs are optimal iff f >= 0; a flip of that predicate
      // between neighbours is located by bisection.
      double lo = *prev_t;
      double hi = t;
      const bool lo_side = f_at(lo) >= 0.0;
      if (lo_side != (f_at(hi) >= 0.0)) {
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          ((f_at(mid) >= 0.0) == lo_side ? lo : hi) = mid;
        }
        table.rows.push_back(make_row("crossover", i - 1, point(0.5 * (lo + hi))));
      }
    }
    table.rows.push_back(make_row("point", i, p));
    prev_t = t;
  }

  if (format == OutputFormat::csv) return {kExitOk, table.csv(), ""};
  Json doc;
  doc["axis"] = axis_name(spec.axis);
  doc["quantity"] = quantity_name(q.kind);
  doc["domain"] = domain_name(spec.fixed.domain);
  doc["rows"] = table.rows;
  return {kExitOk, dump(doc), ""};
}

CommandResult cmd_entropy_rate(const ParamInput& input, double tolerance, int n_max,
                               OutputFormat format) {
  const ResolvedParams r = resolve(input);
  if (!r.params) return invalid(r.error);
  if (n_max < 1 || n_max > hmm::kMaxExactLength) return invalid("--n-max must lie in [1, 24]");
  if (!(tolerance >= 0.0)) return invalid("--tolerance must be non-negative");
  const ChannelParams& p = *r.params;
  const hmm::FlipProcess process(p);
  const auto pc = hmm::product_state_capacity(process, n_max, tolerance);
  const double rate = hmm::markov_entropy_rate(process.memory());
  const auto& last = pc.history.back();

  bool monotone = true;
  Json widths = Json::array();
  for (std::size_t i = 0; i < pc.history.size(); ++i) {
    widths.push_back(pc.history[i].width());
    if (i > 0) {
      monotone = monotone && pc.history[i].upper <= pc.history[i - 1].upper + 1e-12 &&
                 pc.history[i].lower >= pc.history[i - 1].lower - 1e-12;
    }
  }

  Json rec;
  put_params(rec, p.mu(), p.a(), p.d());
  rec["lower"] = last.lower;
  rec["upper"] = last.upper;
  rec["n_used"] = pc.n_used;
  rec["c_prod"] = pc.capacity;
  rec["c_prod_bracket"] = {pc.lower, pc.upper};
  rec["markov_rate"] = rate;
  rec["capacity_upper_bound"] = std::min(1.0, pc.upper + rate);
  rec["converged"] = pc.converged;
  rec["tolerance"] = tolerance;
  rec["n_max"] = n_max;
  rec["bracket_monotone"] = monotone;
  rec["bracket_widths"] = widths;

  CommandResult result;
  result.exit_code = pc.converged ? kExitOk : kExitPartial;
  if (!pc.converged) {
    result.err = "warning: bracket half-width " + format_number(0.5 * last.width()) +
                 " above tolerance at n_max = " + std::to_string(n_max) + "\n";
  }
  if (format == OutputFormat::json) {
    result.out = dump(rec);
  } else {
    Json flat = rec;
    flat.erase("c_prod_bracket");
    flat.erase("bracket_widths");
    flat["c_prod_lower"] = pc.lower;
    flat["c_prod_upper"] = pc.upper;
    Table t;
    for (const auto& [key, _] : flat.items()) t.columns.push_back(key);
    t.rows.push_back(flat);
    result.out = t.csv();
  }
  return result;
}

CommandResult cmd_mutual_info(const ParamInput& input, int n,
                              const std::vector<std::string>& families, OutputFormat format) {
  const ResolvedParams r = resolve(input);
  if (!r.params) return invalid(r.error);
  if (auto v = check_families(n, families)) return invalid(*v);
  const MemoryChannel channel(*r.params);
  std::vector<ensembles::FamilyRow> rows;
  try {
    rows = ensembles::family_comparison(channel, n, families);
  } catch (const InvalidStateError& e) {
    return invalid(std::string("channel output is not a valid state: ") + e.what());
  }

  Table t;
  t.columns = {"family", "n", "I_n", "per_use"};
  for (const auto& row : rows) {
    Json j;
    j["family"] = row.family;
    j["n"] = n;
    j["I_n"] = row.info.raw;
    j["per_use"] = row.info.per_use;
    t.rows.push_back(std::move(j));
  }
  if (format == OutputFormat::csv) return {kExitOk, t.csv(), ""};
  Json doc;
  put_params(doc, r.params->mu(), r.params->a(), r.params->d());
  doc["n"] = n;
  doc["max_entangled_bipartition"] = "half_chain";
  doc["rows"] = t.rows;
  return {kExitOk, dump(doc), ""};
}

CommandResult cmd_figures(const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) return {1, "", "error: cannot create " + out_dir.string() + ": " + ec.message() + "\n"};

  struct Figure {
    const char* file;
    const char* description;
    std::function<Table()> build;
  };
  const std::vector<Figure> figures = {
      {"fig1.csv", "per-use I_2 over (a, mu), product vs max_entangled, d = max_valid(a)",
       figure1},
      {"fig2.csv", "per-use I_2 and f along mu (a=1/3, d=-1), a (mu=2/3, d=-1), d (mu=2/3, a=1/3)",
       figure2},
      {"fig3.csv", "per-use I_n for n in {2,4,6,8}, all families, a=2/3, d=-4/3, mu in {0.7, 0.9}",
       figure3},
      {"fig4.csv",
       "per-use I_4 over (a, mu) with d = max_valid(a); mu sweep at a=1/3, d=4/3 in the "
       "positive-map domain for all families",
       figure4},
      {"fig5.csv", "per-use I_6 over (a, mu), product vs max_entangled, d = max_valid(a)",
       figure5},
  };

  Json files = Json::array();
  for (const auto& fig : figures) {
    const fs::path path = out_dir / fig.file;
    std::ofstream os(path, std::ios::binary);
    if (!os) return {1, "", "error: cannot open " + path.string() + " for writing\n"};
    os << fig.build().csv();
    if (!os) return {1, "", "error: write failed for " + path.string() + "\n"};
    Json entry;
    entry["file"] = fig.file;
    entry["description"] = fig.description;
    files.push_back(std::move(entry));
  }

  Json manifest;
  manifest["tool"] = "qmc";
  manifest["version"] = version();
  manifest["log_base"] = 2;
  manifest["units"] = "bits; I_n per block, per_use = I_n / n";
  manifest["csv_number_format"] = "%.12g";
  manifest["initial_memory"] = "stationary";
  manifest["max_entangled_bipartition"] = "half_chain: qubits 0..n/2-1 vs n/2..n-1";
  manifest["d_mode_max_valid"] = "d = -min(2 - a, a + 2/3)";
  manifest["ensemble"] = "equiprobable Pauli orbit; I_n = n - S(Gamma_n(rho))";
  manifest["files"] = files;

  const fs::path mpath = out_dir / "manifest.json";
  std::ofstream ms(mpath, std::ios::binary);
  if (!ms) return {1, "", "error: cannot open " + mpath.string() + " for writing\n"};
  ms << dump(manifest);
  if (!ms) return {1, "", "error: write failed for " + mpath.string() + "\n"};
  return {kExitOk, "wrote " + std::to_string(figures.size()) + " figure datasets to " +
                       out_dir.string() + "\n",
          ""};
}

}  // namespace qmc::cli
