#include "ctxgeom/projectors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "ctxgeom/error.hpp"

namespace ctxgeom {

namespace {

constexpr double kCommuteTolerance = 1e-10;
constexpr double kLabelSnap = 1e-6;
constexpr double kLabelMatch = 1e-6;
constexpr double kEigenRelationTolerance = 1e-8;
constexpr double kFamilyTolerance = 1e-10;
constexpr std::array<double, 4> kLambdas = {0.3719, 0.2183, 0.4677, 0.0941};

struct Cluster {
  double value = 0.0;
  std::vector<StateVector> vectors;
};

std::vector<Cluster> cluster_eigen(const EigenSystem& eig) {
  std::vector<Cluster> out;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (out.empty() || eig.values[k] - eig.values[k - 1] > kLabelSnap) {
      out.push_back({eig.values[k], {eig.vectors[k]}});
    } else {
      auto& c = out.back();
      const double m = static_cast<double>(c.vectors.size());
      c.value = (c.value * m + eig.values[k]) / (m + 1.0);
      c.vectors.push_back(eig.vectors[k]);
    }
  }
  return out;
}

double snap(double x, const std::vector<double>& spec) {
  double best = x;
  double best_gap = kLabelSnap;
  for (double s : spec) {
    const double gap = std::abs(x - s);
    if (gap <= best_gap) {
      best = s;
      best_gap = gap;
    }
  }
  return best;
}

ComplexMatrix projector_from(const std::vector<StateVector>& basis, std::size_t dim) {
  ComplexMatrix p(dim);
  for (const auto& v : basis) p += v.projector();
  return p;
}

bool labels_descending(const LabeledProjector& x, const LabeledProjector& y) {
  return std::lexicographical_compare(y.labels.begin(), y.labels.end(), x.labels.begin(), x.labels.end());
}

// One attempt at grouping the eigenvectors of A + lambda*B.
std::optional<ProjectorFamily> try_joint(const HermitianOperator& a, const HermitianOperator& b,
                                         const std::vector<double>& spec_a, const std::vector<double>& spec_b,
                                         double lambda) {
  const std::size_t d = a.dim();
  const auto combo = HermitianOperator(a.matrix() + b.matrix() * Complex{lambda, 0.0});
  const auto eig = hermitian_eig(combo, "A + lambda*B");

  std::vector<LabeledProjector> members;
  for (const auto& v : eig.vectors) {
    const EigenPair label{snap(a.expectation(v.amplitudes()), spec_a), snap(b.expectation(v.amplitudes()), spec_b)};
    auto it = std::find_if(members.begin(), members.end(), [&](const LabeledProjector& m) {
      return std::abs(m.labels[0].first - label.first) <= kLabelMatch &&
             std::abs(m.labels[0].second - label.second) <= kLabelMatch;
    });
    if (it == members.end()) {
      members.push_back({HermitianOperator{}, {label}, {v}});
    } else {
      it->basis.push_back(v);
    }
  }

  for (auto& m : members) {
    const auto p = projector_from(m.basis, d);
    const double a_res = (a.matrix() * p - p * Complex{m.labels[0].first, 0.0}).hs_norm();
    const double b_res = (b.matrix() * p - p * Complex{m.labels[0].second, 0.0}).hs_norm();
    if (a_res > kEigenRelationTolerance || b_res > kEigenRelationTolerance) return std::nullopt;
    m.projector = HermitianOperator(p);
  }
  try {
    return ProjectorFamily(d, std::move(members));
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

}  // namespace

std::string to_string(const EigenPair& label) {
  std::ostringstream s;
  s << "(" << label.first << "," << label.second << ")";
  return s.str();
}

const EigenPair& LabeledProjector::label() const {
  if (labels.size() != 1) throw InvalidArgument("LabeledProjector::label: merged member has no single label");
  return labels.front();
}

std::string LabeledProjector::label_string() const {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += "+";
    out += to_string(labels[i]);
  }
  return out;
}

ProjectorFamily::ProjectorFamily(std::size_t dim, std::vector<LabeledProjector> members)
    : dim_(dim), members_(std::move(members)) {
  if (members_.empty()) throw InvalidArgument("ProjectorFamily: no members");
  for (const auto& m : members_) {
    const auto& p = m.projector.matrix();
    if (p.dim() != dim_) throw InvalidArgument("ProjectorFamily: member dimension mismatch");
    if (m.labels.empty()) throw InvalidArgument("ProjectorFamily: member without label");
    if (m.basis.empty()) throw InvalidArgument("ProjectorFamily: zero-rank member");
    if (!is_projector(p, kFamilyTolerance)) throw InvalidArgument("ProjectorFamily: member is not idempotent");
    if (std::abs(p.trace().real() - static_cast<double>(m.rank())) > 1e-8)
      throw InvalidArgument("ProjectorFamily: trace differs from rank");
  }
  for (std::size_t i = 0; i < members_.size(); ++i)
    for (std::size_t j = i + 1; j < members_.size(); ++j)
      if ((members_[i].projector.matrix() * members_[j].projector.matrix()).hs_norm() > kFamilyTolerance)
        throw InvalidArgument("ProjectorFamily: members are not mutually orthogonal");
  if (completeness_defect() > kFamilyTolerance) throw InvalidArgument("ProjectorFamily: members do not sum to identity");
  for (auto& m : members_) std::sort(m.labels.begin(), m.labels.end(), std::greater<>());
  std::stable_sort(members_.begin(), members_.end(), labels_descending);
}

double ProjectorFamily::completeness_defect() const {
  ComplexMatrix sum(dim_);
  for (const auto& m : members_) sum += m.projector.matrix();
  return hs_distance(sum, ComplexMatrix::identity(dim_));
}

std::vector<double> spectrum(const HermitianOperator& h) {
  std::vector<double> out;
  for (const auto& c : cluster_eigen(hermitian_eig(h, "observable"))) out.push_back(c.value);
  return out;
}

std::vector<SpectralProjector> spectral_projectors(const HermitianOperator& h) {
  std::vector<SpectralProjector> out;
  for (const auto& c : cluster_eigen(hermitian_eig(h, "observable")))
    out.push_back({c.value, projector_from(c.vectors, h.dim())});
  return out;
}

ProjectorFamily joint_eigenprojectors(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("joint_eigenprojectors: dimension mismatch");
  const double comm = commutator(a.matrix(), b.matrix()).hs_norm();
  if (comm > kCommuteTolerance) {
    std::ostringstream msg;
    msg << "joint_eigenprojectors: observables do not commute (||[A,B]||_HS = " << comm << ")";
    throw InvalidArgument(msg.str());
  }
  const auto spec_a = spectrum(a);
  const auto spec_b = spectrum(b);
  for (double lambda : kLambdas)
    if (auto family = try_joint(a, b, spec_a, spec_b, lambda)) return *std::move(family);
  throw NumericalError("joint_eigenprojectors: label verification failed for every lambda");
}

ProjectorFamily coarse_grain(const ProjectorFamily& family, std::size_t i, std::size_t j) {
  if (i == j) throw InvalidArgument("coarse_grain: cannot merge a member with itself");
  if (i >= family.size() || j >= family.size()) {
    std::ostringstream msg;
    msg << "coarse_grain: index out of range (" << i << ", " << j << ") for family of size " << family.size();
    throw InvalidArgument(msg.str());
  }
  const auto& pi = family[i];
  const auto& pj = family[j];
  LabeledProjector merged;
  merged.projector = HermitianOperator(pi.projector.matrix() + pj.projector.matrix());
  merged.labels = pi.labels;
  merged.labels.insert(merged.labels.end(), pj.labels.begin(), pj.labels.end());
  merged.basis = pi.basis;
  merged.basis.insert(merged.basis.end(), pj.basis.begin(), pj.basis.end());

  std::vector<LabeledProjector> members;
  members.reserve(family.size() - 1);
  for (std::size_t k = 0; k < family.size(); ++k)
    if (k != i && k != j) members.push_back(family[k]);
  members.push_back(std::move(merged));
  return ProjectorFamily(family.dim(), std::move(members));
}

ProjectorFamily rank_one_family(std::span<const StateVector> basis) {
  if (basis.empty()) throw InvalidArgument("rank_one_family: empty basis");
  const std::size_t d = basis.front().dim();
  std::vector<LabeledProjector> members;
  members.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    members.push_back({HermitianOperator(basis[k].projector()), {EigenPair{static_cast<double>(k), 0.0}}, {basis[k]}});
  return ProjectorFamily(d, std::move(members));
}

}  // namespace ctxgeom
