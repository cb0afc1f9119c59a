#include "hierloc/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hierloc::manifold {

Curvature::Curvature(double k) : k_(k), r_(std::sqrt(k)) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ContractViolation("curvature K must be a positive finite number, got " + std::to_string(k));
  }
}

namespace raw {

double sinhc(double t) {
  if (std::abs(t) < kSeriesThreshold) return 1.0 + t * t / 6.0;
  return std::sinh(t) / t;
}

double arcosh_over_sqrt(double u) {
  const double e = u - 1.0;
  if (e < kSeriesThreshold) return 1.0 - std::max(e, 0.0) / 3.0;
  return std::acosh(u) / std::sqrt(u * u - 1.0);
}

double clamped_arcosh(double u) { return std::acosh(std::max(1.0, u)); }

}  // namespace raw

double lorentz_inner(ConstVectorRef x, ConstVectorRef y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ContractViolation("lorentz_inner: vectors must have equal length >= 2 (got " +
                            std::to_string(x.size()) + " and " + std::to_string(y.size()) + ")");
  }
  const auto n = x.size() - 1;
  return -x[0] * y[0] + x.tail(n).dot(y.tail(n));
}

double constraint_residual(ConstVectorRef x, Curvature c) {
  const double scale = std::max(c.k(), x[0] * x[0]);
  return std::abs(lorentz_inner(x, x) + c.k()) / scale;
}

LorentzPoint LorentzPoint::from_ambient(Vector coords, Curvature c, double tol) {
  if (coords.size() < 2) throw ContractViolation("LorentzPoint: need at least 2 ambient coordinates");
  if (!coords.allFinite()) throw ContractViolation("LorentzPoint: non-finite coordinates");
  if (coords[0] <= 0.0) throw ContractViolation("LorentzPoint: time coordinate must be positive");
  const double res = constraint_residual(coords, c);
  if (res > tol) {
    throw ContractViolation("LorentzPoint: off the hyperboloid (relative residual " + std::to_string(res) + ")");
  }
  return LorentzPoint(std::move(coords), c);
}

LorentzPoint origin(Curvature c, Eigen::Index d) {
  if (d < 1) throw ContractViolation("origin: dimension must be >= 1");
  Vector x = Vector::Zero(d + 1);
  x[0] = c.radius();
  return LorentzPoint::unchecked(std::move(x), c);
}

LorentzPoint exp_origin(const TangentVector& tv) {
  const Vector& v = tv.v;
  if (v.size() < 1) throw ContractViolation("exp_origin: empty tangent vector");
  if (!v.allFinite()) throw ContractViolation("exp_origin: non-finite tangent vector");
  const double r = tv.curvature.radius();
  const double t = v.norm() / r;
  Vector x(v.size() + 1);
  x[0] = r * std::cosh(t);
  x.tail(v.size()) = raw::sinhc(t) * v;
  return LorentzPoint::unchecked(std::move(x), tv.curvature);
}

TangentVector log_origin(const LorentzPoint& x) {
  const Curvature& c = x.curvature();
  const double r = c.radius();
  if (x.time() < r * (1.0 - 1e-9)) {
    throw ContractViolation("log_origin: time coordinate below the sheet apex (not on manifold)");
  }
  // asinh(|x_s|/R) equals arcosh(x0/R) on the sheet and stays accurate near
  // the origin where x0/R -> 1.
  const Vector s = x.spatial();
  const double t = std::asinh(s.norm() / r);
  return TangentVector{s / raw::sinhc(t), c};
}

LorentzPoint exp_at(const LorentzPoint& p, ConstVectorRef v) {
  if (v.size() != p.coords().size()) throw ContractViolation("exp_at: dimension mismatch");
  if (!v.allFinite()) throw ContractViolation("exp_at: non-finite tangent vector");
  const double ortho = lorentz_inner(p.coords(), v);
  const double scale = std::max(1.0, p.coords().norm() * v.norm());
  if (std::abs(ortho) > 1e-8 * scale) {
    throw ContractViolation("exp_at: v is not tangent at p (<p, v>_L = " + std::to_string(ortho) + ")");
  }
  const double nv2 = lorentz_inner(v, v);
  if (nv2 < -1e-8 * scale) throw ContractViolation("exp_at: tangent vector is not spacelike");
  const double t = std::sqrt(std::max(nv2, 0.0)) / p.curvature().radius();
  Vector x = std::cosh(t) * p.coords() + raw::sinhc(t) * v;
  return LorentzPoint::unchecked(std::move(x), p.curvature());
}

Vector log_at(const LorentzPoint& p, const LorentzPoint& x) {
  if (!(p.curvature() == x.curvature())) throw ContractViolation("log_at: curvature mismatch");
  if (p.dim() != x.dim()) throw ContractViolation("log_at: dimension mismatch");
  if (p.coords() == x.coords()) return Vector::Zero(p.coords().size());
  const double u = std::max(1.0, -lorentz_inner(p.coords(), x.coords()) / p.curvature().k());
  const double theta = std::acosh(u);
  return (x.coords() - u * p.coords()) / raw::sinhc(theta);
}

double geodesic_distance(const LorentzPoint& x, const LorentzPoint& y) {
  if (!(x.curvature() == y.curvature())) throw ContractViolation("geodesic_distance: curvature mismatch");
  if (x.dim() != y.dim()) throw ContractViolation("geodesic_distance: dimension mismatch");
  // The inner product of a point with itself lands a rounding error above -K,
  // which arcosh would turn into ~1e-8.
  if (x.coords() == y.coords()) return 0.0;
  return raw::distance_from_inner(lorentz_inner(x.coords(), y.coords()), x.curvature().k());
}

LorentzPoint project_to_hyperboloid(ConstVectorRef spatial, Curvature c) {
  if (!spatial.allFinite()) throw ContractViolation("project_to_hyperboloid: non-finite input");
  Vector x(spatial.size() + 1);
  x[0] = std::sqrt(c.k() + spatial.squaredNorm());
  x.tail(spatial.size()) = spatial;
  return LorentzPoint::unchecked(std::move(x), c);
}

Vector project_to_tangent(const LorentzPoint& p, ConstVectorRef u) {
  return u + (lorentz_inner(p.coords(), u) / p.curvature().k()) * p.coords();
}

}  // namespace hierloc::manifold
