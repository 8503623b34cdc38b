#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ctxgeom/overlap.hpp"
#include "ctxgeom/scenarios.hpp"
#include "ctxgeom/states.hpp"

namespace ctxgeom {

struct Outcome {
  std::vector<double> values;  // one value per measured observable
  double probability = 0.0;
};

/// Outcome statistics of one observable (arity 1) or a commuting pair (arity 2).
struct OutcomeDistribution {
  std::size_t arity = 0;
  std::vector<Outcome> outcomes;

  double total() const;
  /// Marginal over observable `which` (0 or 1) of a pair distribution.
  OutcomeDistribution marginal(std::size_t which) const;
};

/// p(a) = Tr[P_a rho] over the spectral projectors of A.
OutcomeDistribution outcome_distribution(const HermitianOperator& a, const DensityMatrix& rho);

/// p(a, b) = Tr[P_a P_b rho], clamped at zero and renormalized when the total
/// drifts by at most 1e-10. Throws InvalidArgument if A and B do not commute.
OutcomeDistribution joint_distribution(const HermitianOperator& a, const HermitianOperator& b,
                                       const DensityMatrix& rho);

/// Shannon entropy in bits; only probabilities above 1e-14 contribute.
double shannon_entropy_bits(const OutcomeDistribution& dist);

/// sum_alpha s_alpha <A_alpha A_{alpha+1}>, s_alpha = -1 only at the sign-flip
/// term. Throws InvalidArgument unless the scenario carries correlator bounds
/// (the 5-cycle and the CHSH 4-cycle).
double cycle_correlator(const Scenario& scenario, const DensityMatrix& rho);

/// max(0, (chi_nc - chi) / (chi_nc - chi_ns)).
double contextual_fraction(double chi, double chi_nc, double chi_ns);

/// Chaves-Fritz entropic cycle expression BC_n^k in bits:
/// H(X_k X_{k+1}) + sum_{j != k,k+1} H(X_j) - sum_{j != k} H(X_j X_{j+1}),
/// indices mod n. Nonpositive for noncontextual models.
double chaves_fritz(const Scenario& scenario, const DensityMatrix& rho, std::size_t k);

struct CommutatorWitness {
  std::vector<double> per_context;  // |Tr([A_{alpha-1}, A_{alpha+1}] rho)|, < 1e-9 reported as 0
  double total = 0.0;
};

CommutatorWitness commutator_witness_d(const Scenario& scenario, const DensityMatrix& rho);

struct MuBound {
  double bits = 0.0;
  bool trivial = false;  // bits <= 1e-9
};

/// -2 log2 c_mu for c_mu in (0, 1].
MuBound mu_bound(double c_mu);

/// Mixing threshold (3 sqrt 5 + 5) / 20 at which chi(rho(p)) crosses -3.
double p_star();

/// Every witness and configuration-level quantity of a scenario on one state.
struct WitnessReport {
  std::optional<double> chi;
  std::optional<double> cf;
  std::vector<double> bc_values;  // bits, one per k
  double bc_max = 0.0;
  std::vector<double> d_per_context;
  double d_total = 0.0;
  std::vector<ContextInvariants> contexts;
  std::vector<MuBound> mu_bound_per_context;
  MuBound mu_bound_scenario;  // from the largest c_mu over contexts
  double s2_total_bits = 0.0;
};

WitnessReport evaluate_witnesses(const Scenario& scenario, const DensityMatrix& rho);

}  // namespace ctxgeom
