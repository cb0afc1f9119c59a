#pragma once

// Lorentz (hyperboloid) model of hyperbolic space with curvature -1/K.
//
// Points live in R^{d+1} with the time coordinate first and satisfy
// <x, x>_L = -K, x0 > 0. Tangent vectors at the canonical origin are stored
// as their d spatial coordinates; tangent vectors at other base points are
// stored in ambient coordinates.

#include <Eigen/Dense>

#include "hierloc/errors.hpp"

namespace hierloc::manifold {

using Vector = Eigen::VectorXd;
using ConstVectorRef = Eigen::Ref<const Eigen::VectorXd>;

class Curvature {
 public:
  explicit Curvature(double k);

  double k() const { return k_; }
  double radius() const { return r_; }

  friend bool operator==(const Curvature&, const Curvature&) = default;

 private:
  double k_;
  double r_;
};

inline constexpr double kDefaultCurvature = 0.8;

// Below this norm ratio the exp/log maps use their series expansions.
inline constexpr double kSeriesThreshold = 1e-6;

class LorentzPoint {
 public:
  // Validates the hyperboloid constraint (scale-relative residual <= tol).
  static LorentzPoint from_ambient(Vector coords, Curvature c, double tol = 1e-9);
  // No validation; for callers that construct points exactly on the sheet.
  static LorentzPoint unchecked(Vector coords, Curvature c) {
    return LorentzPoint(std::move(coords), c);
  }

  const Vector& coords() const { return coords_; }
  double time() const { return coords_[0]; }
  auto spatial() const { return coords_.tail(coords_.size() - 1); }
  Eigen::Index dim() const { return coords_.size() - 1; }
  const Curvature& curvature() const { return curvature_; }

 private:
  LorentzPoint(Vector coords, Curvature c) : coords_(std::move(coords)), curvature_(c) {}

  Vector coords_;
  Curvature curvature_;
};

struct TangentVector {
  Vector v;
  Curvature curvature;
};

double lorentz_inner(ConstVectorRef x, ConstVectorRef y);

// |<x,x>_L + K| / max(K, x0^2): the residual measured against the magnitude
// of the terms that cancel in the Minkowski form.
double constraint_residual(ConstVectorRef x, Curvature c);

LorentzPoint origin(Curvature c, Eigen::Index d);

LorentzPoint exp_origin(const TangentVector& v);
TangentVector log_origin(const LorentzPoint& x);

// v is an ambient tangent vector at p (<p, v>_L = 0).
LorentzPoint exp_at(const LorentzPoint& p, ConstVectorRef v);
Vector log_at(const LorentzPoint& p, const LorentzPoint& x);

// arcosh(-<x,y>_L / K) with the argument clamped to >= 1.
double geodesic_distance(const LorentzPoint& x, const LorentzPoint& y);

LorentzPoint project_to_hyperboloid(ConstVectorRef spatial, Curvature c);

// Projects an ambient vector onto the tangent space at p.
Vector project_to_tangent(const LorentzPoint& p, ConstVectorRef u);

// Raw kernels on ambient coordinate rows, shared by autodiff and indices.
namespace raw {

// sinh(t)/t with the series branch near zero.
double sinhc(double t);
// arcosh(u)/sqrt(u^2-1), continuous at u = 1.
double arcosh_over_sqrt(double u);
double clamped_arcosh(double u);
// arcosh(-ip / K), clamped.
inline double distance_from_inner(double ip, double k) { return clamped_arcosh(-ip / k); }

}  // namespace raw

}  // namespace hierloc::manifold
