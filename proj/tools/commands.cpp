#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string_view>

#include "ctxgeom/analysis.hpp"
#include "ctxgeom/error.hpp"
#include "ctxgeom/states.hpp"
#include "ctxgeom/witnesses.hpp"

namespace ctxgeom::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kSweepPoints = 91;
const std::vector<std::string> kFig2bStates{"mixed3", "0z", "0x", "+1z", "-1z", "+1x"};

// Re-emits every float in a serialized JSON document in shortest round-trip form.
std::string shortest_floats(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < text.size()) out += text[++i];
      else if (c == '"') in_string = false;
      ++i;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      ++i;
      continue;
    }
    if (c != '-' && (c < '0' || c > '9')) {
      out += c;
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && std::string_view("0123456789.eE+-").find(text[j]) != std::string_view::npos) ++j;
    const std::string_view token(text.data() + i, j - i);
    if (token.find_first_of(".eE") == std::string_view::npos) {
      out += token;
    } else {
      double v = 0.0;
      std::from_chars(token.data(), token.data() + token.size(), v);
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      std::string_view shortest(buf, static_cast<std::size_t>(res.ptr - buf));
      out += shortest;
      if (shortest.find_first_of(".e") == std::string_view::npos) out += ".0";
    }
    i = j;
  }
  return out;
}

class Writer {
 public:
  explicit Writer(const RunConfig& config) : config_(config) {}

  // Nearest double to the fixed-precision decimal, so JSON shows the same digits as CSV.
  double num(double x) const {
    const std::string s = fixed(x);
    double r = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), r);
    return r;
  }

  ordered_json nums(const std::vector<double>& xs) const {
    ordered_json arr = ordered_json::array();
    for (double x : xs) arr.push_back(num(x));
    return arr;
  }

  std::string fixed(double x) const { return format_fixed(x, config_.precision); }

  fs::path write_text(const std::string& filename, const std::string& content) {
    const fs::path path = config_.output_dir / filename;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    f << content;
    f.close();
    if (!f) throw std::ios_base::failure("failed writing " + path.string());
    written_.push_back(path);
    return path;
  }

  /// Summary document as JSON, or flattened to key,value CSV.
  fs::path write_summary(const std::string& stem, const ordered_json& doc) {
    if (config_.format == Format::Json) return write_text(stem + ".json", shortest_floats(doc.dump(2)) + "\n");
    std::ostringstream csv;
    csv << "key,value\n";
    flatten(doc, "", csv);
    return write_text(stem + ".csv", csv.str());
  }

  std::vector<fs::path> written() const { return written_; }

 private:
  void flatten(const ordered_json& node, const std::string& prefix, std::ostringstream& csv) const {
    if (node.is_object()) {
      for (const auto& [k, v] : node.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, csv);
    } else if (node.is_array()) {
      for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], prefix + "." + std::to_string(i), csv);
    } else if (node.is_number_float()) {
      csv << prefix << "," << fixed(node.get<double>()) << "\n";
    } else if (node.is_string()) {
      csv << prefix << "," << node.get<std::string>() << "\n";
    } else {
      csv << prefix << "," << node.dump() << "\n";
    }
  }

  const RunConfig& config_;
  std::vector<fs::path> written_;
};

void prepare_output(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir))
    throw std::ios_base::failure("cannot create output directory " + config.output_dir.string());
}

ordered_json context_json(const Writer& w, const ContextInvariants& inv, const MuBound& mu) {
  return {{"E", w.num(inv.energy)},
          {"S2_bits", w.num(inv.s2_bits)},
          {"c_mu", w.num(inv.c_mu)},
          {"saturated", inv.saturated},
          {"mu_bound_bits", w.num(mu.bits)},
          {"mu_bound_trivial", mu.trivial},
          {"principal_angles_rad", w.nums(inv.principal_angles)}};
}

ordered_json exactness_json(const Writer& w, const ExactnessReport& r) {
  return {{"total_ordered_pairs", r.total_ordered_pairs},
          {"duplicate_count", r.duplicate_count},
          {"duplicate_contributions", w.nums(r.duplicate_contributions)},
          {"mechanism", to_string(r.mechanism)},
          {"s2_total_bits", w.num(r.s2_total_bits)}};
}

ordered_json scenario_level_json(const Writer& w, const WitnessReport& r) {
  ordered_json contexts = ordered_json::array();
  for (std::size_t a = 0; a < r.contexts.size(); ++a)
    contexts.push_back(context_json(w, r.contexts[a], r.mu_bound_per_context[a]));
  return {{"contexts", contexts},
          {"s2_total_bits", w.num(r.s2_total_bits)},
          {"mu_bound_bits", w.num(r.mu_bound_scenario.bits)},
          {"berta_eur_qsi", r.mu_bound_scenario.trivial ? "trivial" : "nontrivial"}};
}

ordered_json witness_json(const Writer& w, const WitnessReport& r) {
  ordered_json j;
  if (r.chi) j["chi"] = w.num(*r.chi);
  if (r.cf) j["cf"] = w.num(*r.cf);
  j["bc_bits"] = w.nums(r.bc_values);
  j["bc_max_bits"] = w.num(r.bc_max);
  j["D_per_context"] = w.nums(r.d_per_context);
  j["D_total"] = w.num(r.d_total);
  return j;
}

}  // namespace

std::vector<double> default_p_grid() { return {0.0, 0.25, 0.5, p_star(), 0.75, 0.9, 1.0}; }

std::string format_fixed(double value, int precision) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
  std::string s(buf, res.ptr);
  // Collapse "-0.000000" to "0.000000".
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::vector<fs::path> cmd_kcbs(const RunConfig& config) {
  const auto p_grid = config.p_grid.empty() ? default_p_grid() : config.p_grid;
  for (double p : p_grid)
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("--p values must lie in [0, 1]");
  const auto sc = build_ncycle(5);
  prepare_output(config);
  Writer w(config);

  const auto on_zero = evaluate_witnesses(sc, named_state("0z"));
  const auto on_mixed = evaluate_witnesses(sc, named_state("mixed3"));
  const double ps = p_star();

  ordered_json grid = ordered_json::array();
  std::ostringstream fig1;
  fig1 << "# p_star=" << w.fixed(ps) << "\n# s2_total_bits=" << w.fixed(on_zero.s2_total_bits) << "\n";
  fig1 << "p,chi,cf,bc_max_bits\n";
  for (double p : p_grid) {
    const auto r = evaluate_witnesses(sc, kcbs_mixing_state(p));
    fig1 << w.fixed(p) << "," << w.fixed(*r.chi) << "," << w.fixed(*r.cf) << "," << w.fixed(r.bc_max) << "\n";
    grid.push_back({{"p", w.num(p)}, {"witnesses", witness_json(w, r)}});
  }

  std::ostringstream fig2a;
  fig2a << "# state=cos(s)|0_z>+sin(s)|+1_z>\n# p_star=" << w.fixed(ps) << "\n";
  fig2a << "s,D_total\n";
  for (int k = 0; k < kSweepPoints; ++k) {
    const double s = (std::numbers::pi / 2.0) * k / (kSweepPoints - 1);
    fig2a << w.fixed(s) << "," << w.fixed(commutator_witness_d(sc, sweep_state(s)).total) << "\n";
  }

  std::ostringstream fig2b;
  fig2b << "# s2_total_bits=" << w.fixed(on_zero.s2_total_bits) << "\n";
  fig2b << "state,D_total\n";
  ordered_json d_named;
  for (const auto& name : kFig2bStates) {
    const double d = commutator_witness_d(sc, named_state(name)).total;
    fig2b << name << "," << w.fixed(d) << "\n";
    d_named[name] = w.num(d);
  }

  ordered_json summary;
  summary["scenario"] = "kcbs";
  summary["theta_deg"] = w.num(sc.parameters.at("theta_deg"));
  summary["p_star"] = w.num(ps);
  summary["chi_nc"] = sc.bounds->chi_nc;
  summary["chi_ns"] = sc.bounds->chi_ns;
  summary["configuration"] = scenario_level_json(w, on_zero);
  summary["state_0z"] = witness_json(w, on_zero);
  summary["state_mixed3"] = witness_json(w, on_mixed);
  summary["D_named_states"] = d_named;
  summary["p_grid"] = grid;
  summary["exactness"] = exactness_json(w, verify_exactness(sc));

  w.write_summary("kcbs_summary", summary);
  w.write_text("fig1.csv", fig1.str());
  w.write_text("fig2a.csv", fig2a.str());
  w.write_text("fig2b.csv", fig2b.str());
  return w.written();
}

std::vector<fs::path> cmd_chsh(const RunConfig& config, const ChshConfig& angles, const std::string& regime) {
  const auto sc = build_chsh(angles);
  prepare_output(config);
  Writer w(config);
  const auto r = evaluate_witnesses(sc, named_state("phi_plus"));

  ordered_json summary;
  summary["scenario"] = "chsh";
  summary["regime"] = regime;
  summary["angles"] = {{"a0", angles.a0}, {"b0", angles.b0}, {"a1", angles.a1}, {"b1", angles.b1}};
  summary["state"] = "phi_plus";
  summary["chi_nc"] = sc.bounds->chi_nc;
  summary["chi_ns"] = sc.bounds->chi_ns;
  summary["witnesses"] = witness_json(w, r);
  summary["configuration"] = scenario_level_json(w, r);
  summary["exactness"] = exactness_json(w, verify_exactness(sc));
  w.write_summary("chsh_summary", summary);
  return w.written();
}

std::vector<fs::path> cmd_ncycle(const RunConfig& config) {
  for (int n : config.n_values) NCycleConfig::make(n);  // validate before touching the filesystem
  const auto rows = ncycle_scan(config.n_values);
  for (const auto& row : rows) {
    if (std::abs(row.c_mu_min - 1.0) > 1e-10 || std::abs(row.c_mu_max - 1.0) > 1e-10) {
      std::ostringstream msg;
      msg << "ncycle: c_mu differs from 1 for n = " << row.n << " (range " << row.c_mu_min << " .. " << row.c_mu_max
          << ")";
      throw NumericalError(msg.str());
    }
  }
  prepare_output(config);
  Writer w(config);
  std::ostringstream csv;
  csv << "# asymptote_n2_S2=" << w.fixed(ncycle_asymptote()) << "\n# c_mu_per_context=1\n";
  csv << "n,theta_deg,E,S2_per_context,S2_total,n2_S2_per_context\n";
  for (const auto& row : rows) {
    csv << row.n << "," << w.fixed(row.theta_deg) << "," << w.fixed(row.energy) << "," << w.fixed(row.s2_per_context)
        << "," << w.fixed(row.s2_total) << "," << w.fixed(row.n2_s2) << "\n";
  }
  w.write_text("ncycle.csv", csv.str());
  return w.written();
}

std::vector<fs::path> cmd_verify(const RunConfig& config) {
  if (config.trials == 0) throw InvalidArgument("--trials must be >= 1");
  const auto kcbs = build_ncycle(5);
  const auto bell = build_chsh(ChshConfig::bell_optimal());
  const auto entropic = build_chsh(ChshConfig::entropic_optimal());

  MonotonicityOptions opts;
  opts.trials = config.trials;
  opts.seed = config.seed;
  opts.threads = config.threads;
  const auto mono = verify_coarse_graining(opts);

  double residual = 0.0;
  for (const auto* sc : {&kcbs, &bell, &entropic})
    for (const auto& ctx : sc->contexts)
      residual = std::max(residual, commutator_identity_residual(ctx.left_family, ctx.right_family));

  prepare_output(config);
  Writer w(config);
  ordered_json doc;
  doc["exactness"] = {{"kcbs", exactness_json(w, verify_exactness(kcbs))},
                      {"chsh_bell", exactness_json(w, verify_exactness(bell))},
                      {"chsh_entropic", exactness_json(w, verify_exactness(entropic))}};
  ordered_json dims = ordered_json::array();
  for (auto d : opts.dims) dims.push_back(d);
  ordered_json sizes = ordered_json::array();
  for (auto m : opts.family_sizes) sizes.push_back(m);
  // Tiny deltas are kept in scientific form rather than rounded away.
  doc["monotonicity"] = {{"trials", mono.trials},
                         {"seed", config.seed},
                         {"dims", dims},
                         {"family_sizes", sizes},
                         {"violations", mono.violations},
                         {"max_negative_delta", mono.max_negative_delta},
                         {"min_delta", mono.min_delta},
                         {"equality_cases", mono.equality_cases},
                         {"equality_condition_failures", mono.equality_condition_failures},
                         {"max_cross_term_mismatch", mono.max_cross_term_mismatch}};
  doc["commutator_identity_max_residual"] = residual;
  w.write_summary("verify", doc);
  return w.written();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projector-geometric contextuality quantities for the KCBS and CHSH cycle scenarios"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::string out_dir;
  std::string format = "json";
  app.add_option("--out", out_dir, "Output directory (default: $CTXGEOM_OUT, else ./results)");
  app.add_option("--format", format, "Summary format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--precision", config.precision, "Decimal places in outputs")->check(CLI::Range(4, 15));

  auto* kcbs = app.add_subcommand("kcbs", "KCBS pentagon tables and figure data");
  kcbs->add_option("--p", config.p_grid, "Mixing parameter grid (repeatable)")->allow_extra_args(false);

  auto* chsh = app.add_subcommand("chsh", "CHSH 4-cycle on |Phi+>");
  std::string regime = "bell";
  std::vector<double> angles;
  chsh->add_option("--regime", regime, "Angle regime")->check(CLI::IsMember({"bell", "entropic"}));
  chsh->add_option("--angles", angles, "Explicit angles a0 b0 a1 b1 (radians)")->expected(4);

  auto* ncycle = app.add_subcommand("ncycle", "Odd n-cycle scan");
  std::vector<int> n_values;
  ncycle->add_option("--n", n_values, "Cycle length, odd >= 5 (repeatable)")->allow_extra_args(false);

  auto* verify = app.add_subcommand("verify", "Exactness reports and coarse-graining fuzz");
  verify->add_option("--trials", config.trials, "Random trials");
  verify->add_option("--seed", config.seed, "Base seed");
  verify->add_option("--threads", config.threads, "Worker threads (results are thread-count independent)");

  std::vector<const char*> argv{"ctxgeom"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  }

  if (!out_dir.empty()) {
    config.output_dir = out_dir;
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    config.output_dir = env;
  } else {
    config.output_dir = "results";
  }
  config.format = format == "csv" ? Format::Csv : Format::Json;
  if (!n_values.empty()) config.n_values = n_values;

  try {
    std::vector<fs::path> written;
    if (kcbs->parsed()) {
      written = cmd_kcbs(config);
    } else if (chsh->parsed()) {
      if (!angles.empty()) {
        written = cmd_chsh(config, {angles[0], angles[1], angles[2], angles[3]}, "custom");
      } else {
        written = cmd_chsh(config, regime == "bell" ? ChshConfig::bell_optimal() : ChshConfig::entropic_optimal(),
                           regime);
      }
    } else if (ncycle->parsed()) {
      written = cmd_ncycle(config);
    } else if (verify->parsed()) {
      written = cmd_verify(config);
    }
    for (const auto& p : written) out << p.string() << "\n";
    return kOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace ctxgeom::cli
