#include "ctxgeom/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ctxgeom/error.hpp"

namespace ctxgeom {

namespace {

constexpr double kCommuteTolerance = 1e-10;

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

HermitianOperator reflection_about(const StateVector& v) {
  return HermitianOperator(ComplexMatrix::identity(v.dim()) - v.projector() * Complex{2.0, 0.0});
}

}  // namespace

SpinOperators spin1_operators() {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  const ComplexMatrix sx(3, {0, r, 0, r, 0, r, 0, r, 0});
  const ComplexMatrix sy(3, {0, -i * r, 0, i * r, 0, -i * r, 0, i * r, 0});
  const ComplexMatrix sz(3, {1, 0, 0, 0, 0, 0, 0, 0, -1});
  return {HermitianOperator(sx), HermitianOperator(sy), HermitianOperator(sz)};
}

HermitianOperator spin1_along(const Vec3& direction) {
  const auto s = spin1_operators();
  return HermitianOperator(s.x.matrix() * Complex{direction[0], 0.0} + s.y.matrix() * Complex{direction[1], 0.0} +
                           s.z.matrix() * Complex{direction[2], 0.0});
}

StateVector ms0_eigenstate(const Vec3& direction) {
  const double len = norm3(direction);
  if (len < 1e-300) throw InvalidArgument("ms0_eigenstate: zero direction");
  if (std::abs(len - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "ms0_eigenstate: direction must be a unit vector (norm " << len << ")";
    throw InvalidArgument(msg.str());
  }
  // Spectrum of S.l is {-1, 0, +1}; the middle eigenvector is m_s = 0.
  return hermitian_eig(spin1_along(direction), "S.l").vectors[1];
}

Scenario build_cycle_scenario(std::string name, std::vector<HermitianOperator> observables,
                              std::optional<std::size_t> sign_flip_index, std::optional<CycleBounds> bounds) {
  const std::size_t n = observables.size();
  if (n < 3) throw InvalidArgument("build_cycle_scenario: a cycle needs at least 3 observables");
  const std::size_t d = observables.front().dim();
  for (const auto& a : observables)
    if (a.dim() != d) throw InvalidArgument("build_cycle_scenario: observables differ in dimension");
  if (sign_flip_index && *sign_flip_index >= n) throw InvalidArgument("build_cycle_scenario: sign flip index out of range");
  for (std::size_t a = 0; a < n; ++a) {
    const double c = commutator(observables[a].matrix(), observables[(a + 1) % n].matrix()).hs_norm();
    if (c > kCommuteTolerance) {
      std::ostringstream msg;
      msg << "build_cycle_scenario: observables " << a << " and " << (a + 1) % n << " do not commute (" << c << ")";
      throw InvalidArgument(msg.str());
    }
  }

  Scenario sc;
  sc.name = std::move(name);
  sc.dim = d;
  sc.sign_flip_index = sign_flip_index;
  sc.bounds = bounds;
  sc.contexts.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& left = observables[(a + n - 1) % n];
    const auto& mid = observables[a];
    const auto& right = observables[(a + 1) % n];
    sc.contexts.push_back({a, left, mid, right, joint_eigenprojectors(left, mid), joint_eigenprojectors(right, mid)});
  }
  sc.observables = std::move(observables);
  return sc;
}

NCycleConfig NCycleConfig::make(int n) {
  if (n < 5 || n % 2 == 0) {
    std::ostringstream msg;
    msg << "NCycleConfig: n must be odd and >= 5 (got " << n << ")";
    throw InvalidArgument(msg.str());
  }
  NCycleConfig cfg;
  cfg.n = n;
  cfg.delta_phi = std::numbers::pi * (n + 1) / n;
  const double c = std::cos(cfg.delta_phi);
  cfg.theta = std::acos(std::sqrt(-c / (1.0 - c)));
  const double st = std::sin(cfg.theta);
  const double ct = std::cos(cfg.theta);
  cfg.axes.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const double phi = a * cfg.delta_phi;
    cfg.axes.push_back({st * std::cos(phi), st * std::sin(phi), ct});
  }
  return cfg;
}

Scenario build_ncycle(int n) {
  const auto cfg = NCycleConfig::make(n);
  std::vector<HermitianOperator> obs;
  obs.reserve(cfg.axes.size());
  for (const auto& axis : cfg.axes) obs.push_back(reflection_about(ms0_eigenstate(axis)));

  std::optional<CycleBounds> bounds;
  if (n == 5) bounds = CycleBounds{-3.0, -5.0};
  auto sc = build_cycle_scenario(n == 5 ? "kcbs" : "ncycle-" + std::to_string(n), std::move(obs), std::nullopt, bounds);
  sc.parameters["n"] = n;
  sc.parameters["theta_rad"] = cfg.theta;
  sc.parameters["theta_deg"] = cfg.theta * 180.0 / std::numbers::pi;
  sc.parameters["delta_phi_rad"] = cfg.delta_phi;
  return sc;
}

ChshConfig ChshConfig::bell_optimal() {
  constexpr double pi = std::numbers::pi;
  return {0.0, pi / 4.0, pi / 2.0, -pi / 4.0};
}

ChshConfig ChshConfig::entropic_optimal() { return {0.0, 0.916, 0.524, -2.880}; }

HermitianOperator pauli_at(double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return HermitianOperator(ComplexMatrix(2, {c, s, s, -c}));
}

Scenario build_chsh(const ChshConfig& config) {
  const auto id = ComplexMatrix::identity(2);
  std::vector<HermitianOperator> obs{
      HermitianOperator(kron(pauli_at(config.a0).matrix(), id)),
      HermitianOperator(kron(id, pauli_at(config.b0).matrix())),
      HermitianOperator(kron(pauli_at(config.a1).matrix(), id)),
      HermitianOperator(kron(id, pauli_at(config.b1).matrix())),
  };
  auto sc = build_cycle_scenario("chsh", std::move(obs), std::size_t{2}, CycleBounds{2.0, 4.0});
  sc.parameters["a0"] = config.a0;
  sc.parameters["b0"] = config.b0;
  sc.parameters["a1"] = config.a1;
  sc.parameters["b1"] = config.b1;
  return sc;
}

}  // namespace ctxgeom
