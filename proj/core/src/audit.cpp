#include "signaling/audit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "signaling/errors.hpp"
#include "signaling/refinement.hpp"

namespace signaling {

namespace {

std::vector<Deviation> build_deviations(const EquilibriumOutcome& outcome,
                                        const MarketParams& params,
                                        const AuditGrids& grids, double epsilon,
                                        double gamma) {
  const PolicyProfile& profile = outcome.profile();
  StepMonitoringPolicy informative = perfectly_informative(grids.thresholds);
  std::vector<Deviation> out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    int school = static_cast<int>(i);
    double rival_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < profile.size(); ++j) {
      if (j != i || profile.size() == 1) {
        rival_min = std::min(rival_min, profile[j].fee);
      }
    }
    auto add = [&](const std::string& kind, double fee,
                   const StepMonitoringPolicy& m) {
      if (fee < 0.0 || fee > params.theta_h) return;
      out.push_back({school, kind, Policy{fee, m}});
    };
    add("identity", profile[i].fee, profile[i].monitoring);
    for (double fee : grids.fees) {
      add("grid", fee, StepMonitoringPolicy::uninformative());
      for (double t : grids.thresholds) {
        add("grid", fee, StepMonitoringPolicy::cutoff(t));
      }
    }
    const double c_low = params.cost(Type::kLow, epsilon);
    const double c_high = params.cost(Type::kHigh, epsilon);
    auto cut = StepMonitoringPolicy::cutoff(epsilon);
    add("undercut_reveal", rival_min - c_low - gamma, cut);
    add("tiny_fee", gamma, cut);
    add("screen", params.theta_h - c_high - gamma, cut);
    add("informative_tiny_fee", gamma, informative);
    add("informative_undercut", std::max(rival_min - gamma, 0.0), informative);
  }
  return out;
}

struct Priced {
  double profit = 0.0;
  bool oracle = false;
};

Priced price(const Deviation& d, const EquilibriumOutcome& outcome,
             const MarketParams& params, double tol, ContinuationMode mode) {
  PolicyProfile profile = outcome.profile();
  profile[static_cast<std::size_t>(d.school)] = d.policy;
  auto profit_of = [&](const SubgameEquilibrium& eq) {
    double fee = profile[static_cast<std::size_t>(d.school)].fee;
    double total = 0.0;
    for (Type type : kTypes) {
      double weight = type == Type::kHigh ? params.lambda : 1.0 - params.lambda;
      for (const Action& a : eq.strategy.of(type)) {
        if (a.school == d.school) total += fee * weight * a.prob;
      }
    }
    return total;
  };
  if (mode == ContinuationMode::kPessimistic &&
      all_signals(profile).size() <= kMaxPessimisticSignals) {
    auto members = brute_force_equilibria(profile, params,
                                          threshold_grid(profile), 2, tol);
    if (!members.empty()) {
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& eq : members) worst = std::min(worst, profit_of(eq));
      return {worst, true};
    }
  }
  return {profit_of(construct_epbe(profile, params, tol)), false};
}

}  // namespace

AuditGrids make_audit_grids(const EquilibriumOutcome& outcome,
                            const MarketParams& params, int points) {
  if (points < 2) throw InputError("audit grid: need at least two points");
  double top = riley_effort(params);
  for (const Policy& p : outcome.profile()) {
    for (double t : p.monitoring.thresholds()) top = std::max(top, t);
  }
  AuditGrids g;
  for (int k = 0; k < points; ++k) {
    g.fees.push_back(params.theta_h * k / (points - 1));
  }
  for (int k = 1; k < points; ++k) {
    g.thresholds.push_back(2.0 * top * k / (points - 1));
  }
  return g;
}

AuditReport deviation_audit(const EquilibriumOutcome& outcome,
                            const MarketParams& params, const AuditGrids& grids,
                            double tol, ContinuationMode mode, int jobs) {
  if (grids.fees.empty()) throw InputError("audit grid: no fees");
  if (grids.thresholds.empty()) throw InputError("audit grid: no thresholds");
  for (std::size_t k = 0; k < grids.thresholds.size(); ++k) {
    if (!(grids.thresholds[k] > 0.0) ||
        (k > 0 && !(grids.thresholds[k] > grids.thresholds[k - 1]))) {
      throw InputError("audit grid: thresholds must be positive and ascending");
    }
  }
  AuditReport report;
  report.epsilon = grids.epsilon.value_or(grids.thresholds.front());
  if (std::find(grids.thresholds.begin(), grids.thresholds.end(),
                report.epsilon) == grids.thresholds.end()) {
    throw InputError("audit grid: template effort step is not a grid threshold");
  }
  const double advantage = params.cost(Type::kLow, report.epsilon) -
                           params.cost(Type::kHigh, report.epsilon);
  report.gamma = grids.gamma.value_or(report.epsilon / 10.0);
  if (!(report.gamma > 0.0)) throw InputError("audit grid: gamma must be positive");
  if (!grids.gamma) {
    while (report.gamma >= advantage) report.gamma /= 10.0;
  } else if (report.gamma >= advantage) {
    throw InputError("audit grid: gamma must be below c(L, eps) - c(H, eps)");
  }

  const auto deviations =
      build_deviations(outcome, params, grids, report.epsilon, report.gamma);
  std::vector<Priced> priced(deviations.size());
  std::vector<std::exception_ptr> errors(deviations.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   static_cast<std::size_t>(std::max(jobs, 1)),
                                   deviations.size()));
  auto work = [&](std::size_t start) {
    for (std::size_t k = start; k < deviations.size(); k += workers) {
      try {
        priced[k] = price(deviations[k], outcome, params, tol, mode);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  report.max_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < deviations.size(); ++k) {
    const Deviation& d = deviations[k];
    double gain =
        priced[k].profit - outcome.profits[static_cast<std::size_t>(d.school)];
    if (mode == ContinuationMode::kPessimistic) {
      ++(priced[k].oracle ? report.oracle_evaluated : report.canonical_fallbacks);
    }
    if (gain > report.max_gain) {
      report.max_gain = gain;
      report.best = d;
    }
  }
  report.deviations_checked = deviations.size();
  return report;
}

}  // namespace signaling
