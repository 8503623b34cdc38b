#include "ctxgeom/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctxgeom/error.hpp"

namespace ctxgeom {

namespace {

constexpr double kCommuteTolerance = 1e-10;
constexpr double kDriftTolerance = 1e-10;
constexpr double kEntropyCutoff = 1e-14;
constexpr double kReportedZero = 1e-9;

void require_dims(const HermitianOperator& a, const DensityMatrix& rho, const char* op) {
  if (a.dim() != rho.dim()) {
    std::ostringstream msg;
    msg << op << ": operator dimension " << a.dim() << " does not match state dimension " << rho.dim();
    throw InvalidArgument(msg.str());
  }
}

void finalize(OutcomeDistribution& dist, const char* op) {
  for (auto& o : dist.outcomes) o.probability = std::max(o.probability, 0.0);
  const double total = dist.total();
  if (std::abs(total - 1.0) > kDriftTolerance) {
    std::ostringstream msg;
    msg << op << ": probabilities sum to " << total;
    throw NumericalError(msg.str());
  }
  for (auto& o : dist.outcomes) o.probability /= total;
}

}  // namespace

double OutcomeDistribution::total() const {
  double s = 0.0;
  for (const auto& o : outcomes) s += o.probability;
  return s;
}

OutcomeDistribution OutcomeDistribution::marginal(std::size_t which) const {
  if (which >= arity) throw InvalidArgument("OutcomeDistribution::marginal: index out of range");
  OutcomeDistribution out;
  out.arity = 1;
  for (const auto& o : outcomes) {
    const double v = o.values[which];
    auto it = std::find_if(out.outcomes.begin(), out.outcomes.end(),
                           [&](const Outcome& m) { return std::abs(m.values[0] - v) <= 1e-6; });
    if (it == out.outcomes.end()) {
      out.outcomes.push_back({{v}, o.probability});
    } else {
      it->probability += o.probability;
    }
  }
  return out;
}

OutcomeDistribution outcome_distribution(const HermitianOperator& a, const DensityMatrix& rho) {
  require_dims(a, rho, "outcome_distribution");
  OutcomeDistribution dist;
  dist.arity = 1;
  for (const auto& sp : spectral_projectors(a))
    dist.outcomes.push_back({{sp.eigenvalue}, rho.expectation(sp.projector).real()});
  finalize(dist, "outcome_distribution");
  return dist;
}

OutcomeDistribution joint_distribution(const HermitianOperator& a, const HermitianOperator& b,
                                       const DensityMatrix& rho) {
  require_dims(a, rho, "joint_distribution");
  require_dims(b, rho, "joint_distribution");
  const double c = commutator(a.matrix(), b.matrix()).hs_norm();
  if (c > kCommuteTolerance) {
    std::ostringstream msg;
    msg << "joint_distribution: observables do not commute (||[A,B]||_HS = " << c << ")";
    throw InvalidArgument(msg.str());
  }
  const auto pa = spectral_projectors(a);
  const auto pb = spectral_projectors(b);
  OutcomeDistribution dist;
  dist.arity = 2;
  for (const auto& x : pa)
    for (const auto& y : pb)
      dist.outcomes.push_back({{x.eigenvalue, y.eigenvalue}, rho.expectation(x.projector * y.projector).real()});
  finalize(dist, "joint_distribution");
  return dist;
}

double shannon_entropy_bits(const OutcomeDistribution& dist) {
  double h = 0.0;
  for (const auto& o : dist.outcomes)
    if (o.probability > kEntropyCutoff) h -= o.probability * std::log2(o.probability);
  return h;
}

double cycle_correlator(const Scenario& scenario, const DensityMatrix& rho) {
  if (!scenario.bounds) {
    std::ostringstream msg;
    msg << "cycle_correlator: no correlator convention for scenario '" << scenario.name << "' (n = " << scenario.n()
        << "); supported: the 5-cycle and the CHSH 4-cycle";
    throw InvalidArgument(msg.str());
  }
  const std::size_t n = scenario.n();
  double chi = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double term =
        rho.expectation(scenario.observables[a].matrix() * scenario.observables[(a + 1) % n].matrix()).real();
    chi += (scenario.sign_flip_index == a) ? -term : term;
  }
  return chi;
}

double contextual_fraction(double chi, double chi_nc, double chi_ns) {
  if (chi_nc == chi_ns) throw InvalidArgument("contextual_fraction: noncontextual and no-signalling bounds coincide");
  return std::max(0.0, (chi_nc - chi) / (chi_nc - chi_ns));
}

double chaves_fritz(const Scenario& scenario, const DensityMatrix& rho, std::size_t k) {
  const std::size_t n = scenario.n();
  if (k >= n) {
    std::ostringstream msg;
    msg << "chaves_fritz: k = " << k << " out of range for a " << n << "-cycle";
    throw InvalidArgument(msg.str());
  }
  const auto& obs = scenario.observables;
  auto pair_entropy = [&](std::size_t j) { return shannon_entropy_bits(joint_distribution(obs[j], obs[(j + 1) % n], rho)); };

  double bc = pair_entropy(k);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == k || j == (k + 1) % n) continue;
    bc += shannon_entropy_bits(outcome_distribution(obs[j], rho));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (j != k) bc -= pair_entropy(j);
  return bc;
}

CommutatorWitness commutator_witness_d(const Scenario& scenario, const DensityMatrix& rho) {
  CommutatorWitness w;
  w.per_context.reserve(scenario.contexts.size());
  for (const auto& ctx : scenario.contexts) {
    require_dims(ctx.left_obs, rho, "commutator_witness_d");
    double v = std::abs(rho.expectation(commutator(ctx.left_obs.matrix(), ctx.right_obs.matrix())));
    if (v < kReportedZero) v = 0.0;
    w.per_context.push_back(v);
    w.total += v;
  }
  return w;
}

MuBound mu_bound(double c_mu) {
  if (!(c_mu > 0.0)) throw InvalidArgument("mu_bound: c_mu must be positive");
  if (c_mu > 1.0 + 1e-9) throw InvalidArgument("mu_bound: c_mu exceeds 1");
  const double bits = -2.0 * std::log2(std::min(c_mu, 1.0));
  return {bits, bits <= kReportedZero};
}

double p_star() { return (3.0 * std::sqrt(5.0) + 5.0) / 20.0; }

WitnessReport evaluate_witnesses(const Scenario& scenario, const DensityMatrix& rho) {
  WitnessReport r;
  if (scenario.bounds) {
    r.chi = cycle_correlator(scenario, rho);
    r.cf = contextual_fraction(*r.chi, scenario.bounds->chi_nc, scenario.bounds->chi_ns);
  }
  for (std::size_t k = 0; k < scenario.n(); ++k) r.bc_values.push_back(chaves_fritz(scenario, rho, k));
  r.bc_max = *std::max_element(r.bc_values.begin(), r.bc_values.end());
  auto d = commutator_witness_d(scenario, rho);
  r.d_per_context = std::move(d.per_context);
  r.d_total = d.total;

  double c_max = 0.0;
  for (const auto& ctx : scenario.contexts) {
    auto inv = context_invariants(ctx.left_family, ctx.right_family);
    r.s2_total_bits += inv.s2_bits;
    r.mu_bound_per_context.push_back(mu_bound(inv.c_mu));
    c_max = std::max(c_max, inv.c_mu);
    r.contexts.push_back(std::move(inv));
  }
  r.mu_bound_scenario = mu_bound(c_max);
  return r;
}

}  // namespace ctxgeom
