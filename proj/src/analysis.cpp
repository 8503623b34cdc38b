#include "ctxgeom/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "ctxgeom/error.hpp"

namespace ctxgeom {

namespace {

constexpr double kDuplicateTolerance = 1e-10;
constexpr double kZeroContribution = 1e-12;
constexpr double kDeltaTolerance = 1e-12;
constexpr double kEqualityCondition = 1e-8;

std::size_t pick(std::mt19937_64& rng, std::size_t count) {
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
}

// Two distinct indices below `count`.
std::pair<std::size_t, std::size_t> pick_pair(std::mt19937_64& rng, std::size_t count) {
  const std::size_t i = pick(rng, count);
  std::size_t j = pick(rng, count - 1);
  if (j >= i) ++j;
  return {i, j};
}

MergeOutcome run_trial(const MonotonicityOptions& opt, std::uint64_t trial) {
  std::mt19937_64 rng(opt.seed ^ trial);
  const std::size_t d = opt.dims[pick(rng, opt.dims.size())];
  std::vector<std::size_t> sizes;
  for (std::size_t m : opt.family_sizes)
    if (m >= 2 && m <= d) sizes.push_back(m);
  const std::size_t m = sizes.empty() ? d : sizes[pick(rng, sizes.size())];

  auto left = rank_one_family(haar_basis(d, rng));
  const auto right = rank_one_family(haar_basis(d, rng));
  while (left.size() > m) {
    const auto [i, j] = pick_pair(rng, left.size());
    left = coarse_grain(left, i, j);
  }
  const auto [i, j] = pick_pair(rng, left.size());
  return evaluate_merge(left, right, i, j);
}

}  // namespace

double s2_total(const Scenario& scenario) {
  double s = 0.0;
  for (const auto& ctx : scenario.contexts) s += -std::log2(overlap_matrix(ctx.left_family, ctx.right_family).total());
  return s;
}

std::string to_string(ExactnessMechanism m) {
  switch (m) {
    case ExactnessMechanism::DistinctBases:
      return "distinct-bases";
    case ExactnessMechanism::CyclicOrthogonality:
      return "cyclic-orthogonality";
    case ExactnessMechanism::Inexact:
      return "inexact";
  }
  return "unknown";
}

ExactnessReport verify_exactness(const Scenario& scenario) {
  struct Pair {
    const ComplexMatrix* p;
    const ComplexMatrix* q;
  };
  std::vector<Pair> pairs;
  for (const auto& ctx : scenario.contexts)
    for (const auto& p : ctx.left_family.members())
      for (const auto& q : ctx.right_family.members()) pairs.push_back({&p.projector.matrix(), &q.projector.matrix()});

  ExactnessReport report;
  report.total_ordered_pairs = pairs.size();
  const double d = static_cast<double>(scenario.dim);
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const bool repeat = std::any_of(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(t), [&](const Pair& s) {
      return hs_distance(*s.p, *pairs[t].p) <= kDuplicateTolerance && hs_distance(*s.q, *pairs[t].q) <= kDuplicateTolerance;
    });
    if (!repeat) continue;
    const auto pq = *pairs[t].p * *pairs[t].q;
    report.duplicate_contributions.push_back(std::abs((pq * pq).trace().real()) / d);
  }
  report.duplicate_count = report.duplicate_contributions.size();
  if (report.duplicate_count == 0) {
    report.mechanism = ExactnessMechanism::DistinctBases;
  } else if (std::all_of(report.duplicate_contributions.begin(), report.duplicate_contributions.end(),
                         [](double c) { return c <= kZeroContribution; })) {
    report.mechanism = ExactnessMechanism::CyclicOrthogonality;
  } else {
    report.mechanism = ExactnessMechanism::Inexact;
  }
  report.s2_total_bits = s2_total(scenario);
  return report;
}

ComplexMatrix haar_unitary(std::size_t dim, std::mt19937_64& rng) {
  if (dim == 0) throw InvalidArgument("haar_unitary: zero dimension");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<Complex>> cols(dim, std::vector<Complex>(dim));
  for (auto& col : cols)
    for (auto& x : col) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      x = Complex{re, im};
    }
  // Modified Gram-Schmidt; R's diagonal comes out real positive, which is the
  // phase fix that makes Q Haar distributed.
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      const Complex c = inner(cols[j], cols[k]);
      for (std::size_t i = 0; i < dim; ++i) cols[k][i] -= c * cols[j][i];
    }
    double nrm = 0.0;
    for (const auto& x : cols[k]) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) throw NumericalError("haar_unitary: rank-deficient Gaussian draw");
    for (auto& x : cols[k]) x /= nrm;
  }
  ComplexMatrix u(dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) u(i, j) = cols[j][i];
  return u;
}

std::vector<StateVector> haar_basis(std::size_t dim, std::mt19937_64& rng) {
  const auto u = haar_unitary(dim, rng);
  std::vector<StateVector> basis;
  basis.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<Complex> col(dim);
    for (std::size_t i = 0; i < dim; ++i) col[i] = u(i, j);
    basis.emplace_back(std::move(col));
  }
  return basis;
}

MergeOutcome evaluate_merge(const ProjectorFamily& left, const ProjectorFamily& right, std::size_t i, std::size_t j) {
  const auto merged = coarse_grain(left, i, j);
  MergeOutcome out;
  out.delta_energy = overlap_matrix(merged, right).total() - overlap_matrix(left, right).total();
  const auto& pi = left[i].projector.matrix();
  const auto& pj = left[j].projector.matrix();
  double cross = 0.0;
  for (const auto& q : right.members()) {
    const auto& qm = q.projector.matrix();
    const auto sandwich = pi * qm * pj;
    cross += (sandwich * qm).trace().real();
    out.max_sandwich_norm = std::max(out.max_sandwich_norm, sandwich.hs_norm());
  }
  out.cross_term = 2.0 * cross / static_cast<double>(left.dim());
  return out;
}

MonotonicityReport verify_coarse_graining(const MonotonicityOptions& options) {
  if (options.trials == 0) throw InvalidArgument("verify_coarse_graining: trials must be >= 1");
  if (options.dims.empty()) throw InvalidArgument("verify_coarse_graining: no dimensions given");
  for (std::size_t d : options.dims)
    if (d < 2) throw InvalidArgument("verify_coarse_graining: dimensions must be >= 2");

  std::vector<MergeOutcome> outcomes(options.trials);
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, options.trials);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < options.trials; t += workers) outcomes[t] = run_trial(options, t);
      });
    }
  }

  MonotonicityReport report;
  report.trials = options.trials;
  report.min_delta = outcomes.front().delta_energy;
  for (const auto& o : outcomes) {
    report.min_delta = std::min(report.min_delta, o.delta_energy);
    if (o.delta_energy < -kDeltaTolerance) ++report.violations;
    if (std::abs(o.delta_energy) <= kDeltaTolerance) {
      ++report.equality_cases;
      if (o.max_sandwich_norm > kEqualityCondition) ++report.equality_condition_failures;
    }
    report.max_cross_term_mismatch = std::max(report.max_cross_term_mismatch, std::abs(o.delta_energy - o.cross_term));
  }
  report.max_negative_delta = std::min(report.min_delta, 0.0);
  return report;
}

std::vector<NCycleRow> ncycle_scan(std::span<const int> n_values) {
  std::vector<NCycleRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    const auto sc = build_ncycle(n);
    NCycleRow row;
    row.n = n;
    row.theta_deg = sc.parameters.at("theta_deg");
    double e_min = 1.0;
    double e_max = 0.0;
    row.c_mu_min = 1.0;
    for (const auto& ctx : sc.contexts) {
      const auto inv = context_invariants(ctx.left_family, ctx.right_family);
      if (ctx.index == 0) row.energy = inv.energy;
      row.s2_total += inv.s2_bits;
      e_min = std::min(e_min, inv.energy);
      e_max = std::max(e_max, inv.energy);
      row.c_mu_min = std::min(row.c_mu_min, inv.c_mu);
      row.c_mu_max = std::max(row.c_mu_max, inv.c_mu);
    }
    row.energy_spread = e_max - e_min;
    row.s2_per_context = -std::log2(row.energy);
    row.n2_s2 = static_cast<double>(n) * n * row.s2_per_context;
    rows.push_back(row);
  }
  return rows;
}

double ncycle_asymptote() { return 8.0 * std::numbers::pi * std::numbers::pi / (3.0 * std::numbers::ln2); }

double richardson_extrapolate(std::span<const double> h, std::span<const double> f) {
  if (h.size() != f.size() || h.empty()) throw InvalidArgument("richardson_extrapolate: need matching non-empty inputs");
  std::vector<double> p(f.begin(), f.end());
  const std::size_t m = h.size();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      const double denom = h[i] - h[i + level];
      if (denom == 0.0) throw InvalidArgument("richardson_extrapolate: repeated abscissa");
      p[i] = (h[i] * p[i + 1] - h[i + level] * p[i]) / denom;
    }
  }
  return p[0];
}

}  // namespace ctxgeom
