#include "signaling_cli/cli.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "signaling/audit.hpp"
#include "signaling/errors.hpp"
#include "signaling/json_io.hpp"
#include "signaling/outer_game.hpp"
#include "signaling/refinement.hpp"

namespace signaling::cli {

namespace {

struct Options {
  std::string params_path;
  std::string profile_path;
  std::string out_path;
  std::string format;
  int grid_points = 21;
  double tol = kDefaultTol;
  int jobs = 1;
  bool pessimistic = false;
  bool audit = false;
  std::string vary;
  double from = 0.0;
  double to = 0.0;
  int steps = 11;
  std::string plot_out;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_file(o.out_path, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

MarketParams load_params(const Options& o) {
  return params_from_json(read_json_file(o.params_path));
}

PolicyProfile load_profile(const Options& o, const MarketParams& params) {
  if (o.profile_path.empty()) throw InputError("--profile is required");
  Json j = read_json_file(o.profile_path);
  PolicyProfile profile =
      profile_from_json(j.is_object() && j.contains("profile") ? j.at("profile") : j);
  validate_profile(profile, params);
  return profile;
}

double effort_span(const PolicyProfile& profile, const MarketParams& params) {
  double top = riley_effort(params);
  for (const Policy& p : profile) {
    for (double t : p.monitoring.thresholds()) top = std::max(top, t);
  }
  return 2.0 * top;
}

// Monopoly (or credit-capped monopoly) at n = 1, the Riley outcome otherwise.
EquilibriumOutcome primary_outcome(const MarketParams& params, double tol) {
  if (params.n_schools == 1) {
    if (params.credit_cap) return credit_monopoly_rpbe(params, tol).outcome;
    return monopoly_rpbe(params, tol);
  }
  return riley_rpbe(params, params.n_schools, tol);
}

const char* kCsvHeader =
    "theta_L,theta_H,lambda,n_schools,credit_cap,label,fee,welfare_total,waste,"
    "profit,U_L,U_H\n";

std::string csv_row(const MarketParams& p, const EquilibriumOutcome& o) {
  WelfareReport w = welfare(o, p);
  std::ostringstream row;
  row << format_number(p.theta_l) << ',' << format_number(p.theta_h) << ','
      << format_number(p.lambda) << ',' << p.n_schools << ','
      << (p.credit_cap ? format_number(*p.credit_cap) : "") << ','
      << outcome_label_name(o.label) << ','
      << format_number(o.profile().empty() ? 0.0 : o.profile().front().fee) << ','
      << format_number(w.total) << ',' << format_number(w.effort_waste) << ','
      << format_number(w.school_profit_total) << ','
      << format_number(o.payoff(Type::kLow)) << ','
      << format_number(o.payoff(Type::kHigh)) << '\n';
  return row.str();
}

AuditReport audit_outcome(const EquilibriumOutcome& outcome,
                          const MarketParams& params, const Options& o) {
  AuditGrids grids = make_audit_grids(outcome, params, o.grid_points);
  return deviation_audit(outcome, params, grids, o.tol,
                         o.pessimistic ? ContinuationMode::kPessimistic
                                       : ContinuationMode::kCanonical,
                         o.jobs);
}

int cmd_solve(const Options& o, std::ostream& out) {
  MarketParams params = load_params(o);
  if (!o.profile_path.empty()) {
    PolicyProfile profile = load_profile(o, params);
    SubgameEquilibrium eq = construct_epbe(profile, params, o.tol);
    emit(o, dump({{"params", to_json(params)}, {"equilibrium", to_json(eq)}}), out);
    return kOk;
  }
  std::vector<EquilibriumOutcome> outcomes;
  Json extra = Json::object();
  if (params.n_schools == 1) {
    if (params.credit_cap) {
      CreditResult r = credit_monopoly_rpbe(params, o.tol);
      outcomes.push_back(r.outcome);
      if (r.family) {
        extra["credit_family"] = {{"fee", r.family->fee},
                                  {"pooling_cutoff_max", r.family->pooling_cutoff_max},
                                  {"pooling_cutoff_supported",
                                   r.family->pooling_cutoff_supported}};
      }
    } else {
      outcomes.push_back(monopoly_rpbe(params, o.tol));
    }
  } else {
    const int n = params.n_schools;
    outcomes.push_back(riley_rpbe(params, n, o.tol));
    auto fam = semipooling_family(params, n, SemiPoolingVariant::kZeroFee,
                                  PooledEffort{0.0}, std::nullopt, o.tol);
    outcomes.insert(outcomes.end(), fam.members.begin(), fam.members.end());
    FierceVerdict verdict = is_fierce(params, n);
    extra["fierce"] = to_json(verdict);
    extra["mild_fee_set"] = to_json(mild_fee_set(params, n));
  }
  if (o.format == "csv") {
    std::string text = kCsvHeader;
    for (const auto& oc : outcomes) text += csv_row(params, oc);
    emit(o, text, out);
    return kOk;
  }
  Json j{{"params", to_json(params)}};
  j["outcomes"] = Json::array();
  j["welfare"] = Json::array();
  for (const auto& oc : outcomes) {
    j["outcomes"].push_back(to_json(oc));
    j["welfare"].push_back(to_json(welfare(oc, params)));
  }
  for (auto& [k, v] : extra.items()) j[k] = v;
  if (o.audit) {
    j["audits"] = Json::array();
    for (const auto& oc : outcomes) {
      j["audits"].push_back(to_json(audit_outcome(oc, params, o)));
    }
  }
  emit(o, dump(j), out);
  return kOk;
}

SubgameEquilibrium load_bundle(const Options& o) {
  if (o.profile_path.empty()) throw InputError("--profile is required");
  Json j = read_json_file(o.profile_path);
  if (j.is_object() && j.contains("subgame")) {
    return outcome_from_json(j).subgame;
  }
  if (j.is_object() && j.contains("equilibrium")) {
    return equilibrium_from_json(j.at("equilibrium"));
  }
  if (j.is_object() && j.contains("outcomes") && j.at("outcomes").is_array() &&
      !j.at("outcomes").empty()) {
    return outcome_from_json(j.at("outcomes").front()).subgame;
  }
  return equilibrium_from_json(j);
}

int cmd_verify(const Options& o, std::ostream& out) {
  MarketParams params = load_params(o);
  SubgameEquilibrium eq = load_bundle(o);
  validate_profile(eq.profile, params);
  DeviationGrid grid = make_deviation_grid(eq.profile, o.grid_points,
                                           effort_span(eq.profile, params));
  VerificationReport report = verify_pbe(eq.profile, eq, params, grid, o.tol);
  report.merge(verify_extended_d1(eq.profile, eq, params, grid, o.tol));
  report.merge(check_minimality(eq.profile, eq, params, o.tol));
  emit(o, dump(to_json(report)), out);
  return report.passed() ? kOk : kVerificationFailed;
}

const std::vector<std::string> kVaryKeys{"theta_L", "theta_H", "lambda",
                                         "n_schools", "credit_cap", "kappa_L",
                                         "kappa_H", "exponent"};

MarketParams vary_params(const Json& base, const std::string& key, double value) {
  if (std::find(kVaryKeys.begin(), kVaryKeys.end(), key) == kVaryKeys.end()) {
    throw InputError("field 'vary': unknown parameter '" + key + "'");
  }
  Json j = base;
  if (key == "kappa_L" || key == "kappa_H" || key == "exponent") {
    if (!j.contains("cost") || !j["cost"].is_object()) {
      throw InputError("field 'cost': missing");
    }
    j["cost"][key] = value;
  } else if (key == "n_schools") {
    j[key] = static_cast<int>(std::lround(value));
  } else {
    j[key] = value;
  }
  return params_from_json(j);
}

std::vector<double> ladder(double from, double to, int steps) {
  if (steps < 1) throw InputError("field 'steps': must be at least 1");
  std::vector<double> xs;
  for (int k = 0; k < steps; ++k) {
    xs.push_back(steps == 1 ? from : from + (to - from) * k / (steps - 1));
  }
  return xs;
}

// Runs `f` over [0, count) with up to `jobs` threads; results keep input order.
template <typename T>
std::vector<T> parallel_map(std::size_t count, int jobs,
                            const std::function<T(std::size_t)>& f) {
  std::vector<T> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(jobs), count));
  auto work = [&](std::size_t start) {
    for (std::size_t k = start; k < count; k += workers) {
      try {
        results[k] = f(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<MarketParams> sweep_points(const Json& plan) {
  std::vector<MarketParams> points;
  if (plan.is_object() && plan.contains("points")) {
    const Json& ps = plan.at("points");
    if (!ps.is_array()) throw InputError("field 'points': expected an array");
    for (std::size_t k = 0; k < ps.size(); ++k) {
      try {
        points.push_back(params_from_json(ps[k]));
      } catch (const InputError& e) {
        throw InputError("field 'points[" + std::to_string(k) + "]' > " + e.what());
      }
    }
    return points;
  }
  if (!plan.is_object() || !plan.contains("base")) {
    throw InputError("field 'base': sweep file needs 'points' or 'base' + 'vary'");
  }
  if (!plan.contains("vary") || !plan.at("vary").is_string()) {
    throw InputError("field 'vary': expected a parameter name");
  }
  auto num = [&](const char* key) {
    if (!plan.contains(key) || !plan.at(key).is_number()) {
      throw InputError(std::string("field '") + key + "': expected a number");
    }
    return plan.at(key).get<double>();
  };
  if (!plan.contains("steps") || !plan.at("steps").is_number_integer()) {
    throw InputError("field 'steps': expected an integer");
  }
  std::string key = plan.at("vary").get<std::string>();
  for (double x : ladder(num("from"), num("to"), plan.at("steps").get<int>())) {
    points.push_back(vary_params(plan.at("base"), key, x));
  }
  return points;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  std::vector<MarketParams> points = sweep_points(read_json_file(o.params_path));
  auto outcomes = parallel_map<EquilibriumOutcome>(
      points.size(), o.jobs,
      [&](std::size_t k) { return primary_outcome(points[k], o.tol); });
  if (o.format == "json") {
    Json rows = Json::array();
    for (std::size_t k = 0; k < points.size(); ++k) {
      rows.push_back({{"params", to_json(points[k])},
                      {"outcome", to_json(outcomes[k])},
                      {"welfare", to_json(welfare(outcomes[k], points[k]))}});
    }
    emit(o, dump(rows), out);
    return kOk;
  }
  std::string text = kCsvHeader;
  for (std::size_t k = 0; k < points.size(); ++k) text += csv_row(points[k], outcomes[k]);
  emit(o, text, out);
  return kOk;
}

int cmd_oracle_compare(const Options& o, std::ostream& out) {
  MarketParams params = load_params(o);
  PolicyProfile profile = load_profile(o, params);
  DeviationGrid grid = make_deviation_grid(profile, o.grid_points,
                                           effort_span(profile, params));
  SubgameEquilibrium eq = construct_epbe(profile, params, o.tol);
  auto members = brute_force_equilibria(profile, params, grid, kMaxOracleSupport, o.tol);
  Json matched = nullptr;
  int d1_failures = 0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (matched.is_null() && outcome_equivalent(eq, members[k], grid)) {
      matched = static_cast<int>(k);
    }
    if (!verify_extended_d1(profile, members[k], params, grid, o.tol).passed()) {
      ++d1_failures;
    }
  }
  bool ok = !matched.is_null() && d1_failures == 0;
  emit(o,
       dump({{"result", ok ? "match" : "mismatch"},
             {"oracle_members", members.size()},
             {"matched_member", matched},
             {"oracle_d1_failures", d1_failures},
             {"grid_points", grid.efforts.size()},
             {"constructed", to_json(eq)}}),
       out);
  return ok ? kOk : kVerificationFailed;
}

int cmd_welfare(const Options& o, std::ostream& out) {
  Json base = read_json_file(o.params_path);
  MarketParams params = params_from_json(base);
  EquilibriumOutcome outcome = primary_outcome(params, o.tol);
  emit(o,
       dump({{"label", outcome_label_name(outcome.label)},
             {"welfare", to_json(welfare(outcome, params))}}),
       out);
  if (o.vary.empty()) return kOk;
  if (o.plot_out.empty()) throw InputError("--plot-out is required with --vary");
  std::vector<double> xs = ladder(o.from, o.to, o.steps);
  std::vector<MarketParams> points;
  for (double x : xs) points.push_back(vary_params(base, o.vary, x));
  auto outcomes = parallel_map<EquilibriumOutcome>(
      points.size(), o.jobs,
      [&](std::size_t k) { return primary_outcome(points[k], o.tol); });
  std::string text =
      o.vary + ",label,welfare_total,max_welfare,effort_waste,profit,U_L,U_H\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    WelfareReport w = welfare(outcomes[k], points[k]);
    text += format_number(xs[k]) + "," + outcome_label_name(outcomes[k].label) + "," +
            format_number(w.total) + "," + format_number(w.max_welfare) + "," +
            format_number(w.effort_waste) + "," +
            format_number(w.school_profit_total) + "," +
            format_number(outcomes[k].payoff(Type::kLow)) + "," +
            format_number(outcomes[k].payoff(Type::kHigh)) + "\n";
  }
  write_file(o.plot_out, text);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Signaling-design game solver and verifier"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_profile) {
    sub->add_option("--params", o.params_path, "Market parameter JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    auto* prof = sub->add_option("--profile", o.profile_path, "Policy profile or bundle JSON")
                     ->check(CLI::ExistingFile);
    if (needs_profile) prof->required();
    sub->add_option("--grid-points", o.grid_points, "Deviation grid points")
        ->check(CLI::Range(2, 1000));
    sub->add_option("--tol", o.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--out", o.out_path, "Output file (default stdout)");
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--pessimistic", o.pessimistic,
                  "Price audit deviations at the deviator's worst oracle equilibrium");
  };

  auto* solve = app.add_subcommand("solve", "Equilibrium outcomes for the parameters");
  common(solve, false);
  solve->add_flag("--audit", o.audit, "Attach deviation audits");
  auto* verify = app.add_subcommand("verify", "Verify an equilibrium bundle");
  common(verify, true);
  auto* sweep = app.add_subcommand("sweep", "Primary outcome over a parameter grid");
  common(sweep, false);
  auto* oracle = app.add_subcommand("oracle-compare", "Constructor vs brute-force oracle");
  common(oracle, true);
  auto* welf = app.add_subcommand("welfare", "Welfare report and plot data");
  common(welf, false);
  welf->add_option("--vary", o.vary, "Parameter to vary for the plot data");
  welf->add_option("--from", o.from, "First value of the varied parameter");
  welf->add_option("--to", o.to, "Last value of the varied parameter");
  welf->add_option("--steps", o.steps, "Number of values")->check(CLI::Range(1, 100000));
  welf->add_option("--plot-out", o.plot_out, "Plot-data CSV path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*solve) {
      if (o.format.empty()) o.format = "json";
      return cmd_solve(o, out);
    }
    if (*verify) {
      if (o.format == "csv") throw InputError("verify writes JSON only");
      return cmd_verify(o, out);
    }
    if (*sweep) {
      if (o.format.empty()) o.format = "csv";
      return cmd_sweep(o, out);
    }
    if (*oracle) {
      if (o.format == "csv") throw InputError("oracle-compare writes JSON only");
      return cmd_oracle_compare(o, out);
    }
    if (o.format == "csv") throw InputError("welfare writes JSON; use --plot-out for CSV");
    return cmd_welfare(o, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const RangeError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  }
}

}  // namespace signaling::cli
