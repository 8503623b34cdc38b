#include "ctxgeom/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ctxgeom/error.hpp"

namespace ctxgeom {

namespace {

constexpr double kNegativeClamp = 1e-12;
constexpr double kSaturationTolerance = 1e-9;

void require_same_dim(const ProjectorFamily& left, const ProjectorFamily& right, const char* op) {
  if (left.dim() != right.dim()) {
    std::ostringstream msg;
    msg << op << ": families live in different dimensions (" << left.dim() << " vs " << right.dim() << ")";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

double OverlapMatrix::total() const {
  double s = 0.0;
  for (double x : entries) s += x;
  return s;
}

OverlapMatrix overlap_matrix(const ProjectorFamily& left, const ProjectorFamily& right) {
  require_same_dim(left, right, "overlap_matrix");
  const double d = static_cast<double>(left.dim());
  OverlapMatrix t;
  t.dim = left.dim();
  t.rows = left.size();
  t.cols = right.size();
  t.entries.reserve(t.rows * t.cols);
  for (const auto& p : left.members()) t.left_labels.push_back(p.label_string());
  for (const auto& q : right.members()) t.right_labels.push_back(q.label_string());

  for (const auto& p : left.members()) {
    for (const auto& q : right.members()) {
      const auto pq = p.projector.matrix() * q.projector.matrix();
      double value = (pq * pq).trace().real() / d;
      if (value < 0.0) {
        if (value < -kNegativeClamp) {
          std::ostringstream msg;
          msg << "overlap_matrix: negative entry " << value << " for " << p.label_string() << " x "
              << q.label_string();
          throw NumericalError(msg.str());
        }
        value = 0.0;
      }
      const double cap = static_cast<double>(std::min(p.rank(), q.rank())) / d;
      t.entries.push_back(std::min(value, cap));
    }
  }
  return t;
}

std::vector<double> principal_angles(const LabeledProjector& p, const LabeledProjector& q) {
  // Project the smaller basis V onto span(U): cosines are the singular values
  // of U^dagger V, sines those of the residual (1 - UU^dagger) V.
  const auto& u = p.rank() >= q.rank() ? p.basis : q.basis;
  const auto& v = p.rank() >= q.rank() ? q.basis : p.basis;
  if (u.empty() || v.empty()) return {};
  std::vector<std::vector<Complex>> cos_cols;
  std::vector<std::vector<Complex>> sin_cols;
  for (const auto& vj : v) {
    std::vector<Complex> c(u.size());
    std::vector<Complex> w(vj.amplitudes().begin(), vj.amplitudes().end());
    for (std::size_t i = 0; i < u.size(); ++i) {
      c[i] = inner(u[i].amplitudes(), vj.amplitudes());
      for (std::size_t a = 0; a < w.size(); ++a) w[a] -= c[i] * u[i][a];
    }
    cos_cols.push_back(std::move(c));
    sin_cols.push_back(std::move(w));
  }
  const auto cosines = column_singular_values(std::move(cos_cols));  // descending
  auto sines = column_singular_values(std::move(sin_cols));
  std::reverse(sines.begin(), sines.end());  // ascending
  std::vector<double> angles;
  angles.reserve(cosines.size());
  for (std::size_t k = 0; k < cosines.size(); ++k) angles.push_back(std::atan2(sines[k], cosines[k]));
  std::sort(angles.begin(), angles.end());
  return angles;
}

ContextInvariants context_invariants(const ProjectorFamily& left, const ProjectorFamily& right) {
  const auto t = overlap_matrix(left, right);
  ContextInvariants inv;
  inv.energy = t.total();
  inv.s2_bits = -std::log2(inv.energy);
  for (const auto& p : left.members()) {
    for (const auto& q : right.members()) {
      inv.c_mu = std::max(inv.c_mu, largest_singular_value(p.projector.matrix() * q.projector.matrix()));
      const auto angles = principal_angles(p, q);
      inv.principal_angles.insert(inv.principal_angles.end(), angles.begin(), angles.end());
    }
  }
  std::sort(inv.principal_angles.begin(), inv.principal_angles.end());
  inv.saturated = std::abs(inv.energy - inv.c_mu * inv.c_mu) <= kSaturationTolerance;
  return inv;
}

double commutator_identity_residual(const ProjectorFamily& left, const ProjectorFamily& right) {
  require_same_dim(left, right, "commutator_identity_residual");
  const double d = static_cast<double>(left.dim());
  double energy = 0.0;
  double commutator_sum = 0.0;
  for (const auto& p : left.members()) {
    for (const auto& q : right.members()) {
      const auto pq = p.projector.matrix() * q.projector.matrix();
      energy += (pq * pq).trace().real() / d;
      commutator_sum += commutator_hs_norm_sq(p.projector, q.projector);
    }
  }
  return std::abs((1.0 - energy) - commutator_sum / (2.0 * d));
}

}  // namespace ctxgeom
