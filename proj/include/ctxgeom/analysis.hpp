#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ctxgeom/overlap.hpp"
#include "ctxgeom/scenarios.hpp"

namespace ctxgeom {

/// S2(G) = sum_alpha S2(G_alpha) = -log2 prod_alpha E(G_alpha).
double s2_total(const Scenario& scenario);

enum class ExactnessMechanism { DistinctBases, CyclicOrthogonality, Inexact };

std::string to_string(ExactnessMechanism m);

/// Ordered (left member, right member) pairs pooled over all contexts, with
/// repeats detected at HS distance <= 1e-10 on both members.
struct ExactnessReport {
  std::size_t total_ordered_pairs = 0;
  std::size_t duplicate_count = 0;
  std::vector<double> duplicate_contributions;  // Tr[(PQ)^2]/d of each repeat
  ExactnessMechanism mechanism = ExactnessMechanism::DistinctBases;
  double s2_total_bits = 0.0;
};

ExactnessReport verify_exactness(const Scenario& scenario);

/// Haar-random unitary: complex Gaussian matrix orthonormalized column by
/// column (QR with positive diagonal of R).
ComplexMatrix haar_unitary(std::size_t dim, std::mt19937_64& rng);

/// Columns of a Haar-random unitary as an orthonormal basis.
std::vector<StateVector> haar_basis(std::size_t dim, std::mt19937_64& rng);

/// Change of E when members i and j of `left` are merged, together with the
/// independent cross-term form 2 sum_j Tr[P_i Q_j P_i' Q_j] / d and the largest
/// sandwich norm max_j ||P_i Q_j P_i'||_HS that decides equality.
struct MergeOutcome {
  double delta_energy = 0.0;
  double cross_term = 0.0;
  double max_sandwich_norm = 0.0;
};

MergeOutcome evaluate_merge(const ProjectorFamily& left, const ProjectorFamily& right, std::size_t i, std::size_t j);

struct MonotonicityReport {
  std::size_t trials = 0;
  std::size_t violations = 0;          // trials with Delta E < -1e-12
  double max_negative_delta = 0.0;     // most negative Delta E seen, 0 if none
  double min_delta = 0.0;
  std::size_t equality_cases = 0;      // |Delta E| <= 1e-12
  std::size_t equality_condition_failures = 0;  // equality cases with max sandwich norm > 1e-8
  double max_cross_term_mismatch = 0.0;         // |Delta E - cross term|

  friend bool operator==(const MonotonicityReport&, const MonotonicityReport&) = default;
};

struct MonotonicityOptions {
  std::size_t trials = 10000;
  std::vector<std::size_t> dims{3, 4, 5, 6};
  std::vector<std::size_t> family_sizes{4, 5, 6, 8};
  std::uint64_t seed = 42;
  std::size_t threads = 1;
};

/// Per trial t (rng seeded with seed ^ t): draw d and a left-family size m <= d,
/// build a Haar rank-1 left basis coarse-grained down to m members and a Haar
/// rank-1 right basis, merge a random pair of left members and record Delta E.
/// Results do not depend on `threads`.
MonotonicityReport verify_coarse_graining(const MonotonicityOptions& options);

struct NCycleRow {
  int n = 0;
  double theta_deg = 0.0;
  double energy = 0.0;  // per context (context 0)
  double s2_per_context = 0.0;
  double s2_total = 0.0;
  double n2_s2 = 0.0;
  double c_mu_min = 0.0;  // over all contexts
  double c_mu_max = 0.0;
  double energy_spread = 0.0;  // max - min E over contexts
};

std::vector<NCycleRow> ncycle_scan(std::span<const int> n_values);

/// 8 pi^2 / (3 ln 2), the large-n limit of n^2 S2(G_alpha).
double ncycle_asymptote();

/// Value at h = 0 of the polynomial through (h_k, f_k) (Neville's scheme).
/// With h = 1/n this is Richardson extrapolation in 1/n.
double richardson_extrapolate(std::span<const double> h, std::span<const double> f);

}  // namespace ctxgeom
