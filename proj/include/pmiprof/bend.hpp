#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pmiprof/distributions.hpp"

namespace pmiprof {

// Invertible map with a tractable log-Jacobian. log_det_jacobian_inverse is
// evaluated at a point of the image space; the forward log-det at v is the
// negative of it at forward(v).
class Diffeomorphism {
 public:
  virtual ~Diffeomorphism() = default;
  virtual int dim() const = 0;
  virtual Vector forward(const CVecRef& v) const = 0;
  virtual Vector inverse(const CVecRef& v_prime) const = 0;
  virtual double log_det_jacobian_inverse(const CVecRef& v_prime) const = 0;
  virtual std::string describe() const = 0;
};

using MapPtr = std::shared_ptr<const Diffeomorphism>;

// Elementwise v -> scale * v + shift; all scales nonzero.
MapPtr affine_map(Vector scale, Vector shift);
MapPtr affine_map(double scale, double shift, int dim);

// Elementwise asinh, the paper's tail-shortening transform.
MapPtr asinh_map(int dim);

// Rotates the first two coordinates by angle v * |x|^2 (full-vector norm),
// leaving the rest fixed. Norm-preserving and volume-preserving.
MapPtr spiral_map(double speed, int dim);

// Shear (x1, x2) -> (x1 + 5 sin(3 x2), x2); globally invertible, log-det 0.
MapPtr waves_injection();

// Composition, applied left-to-right in the forward direction.
MapPtr compose(std::vector<MapPtr> maps);

// Finite-difference check that |det(forward Jacobian)| matches the declared
// log-det at `points` standard-normal points; NumericError on failure.
// Runs automatically inside every factory above.
void validate_jacobian(const Diffeomorphism& map, int points = 10, double tol = 1e-4,
                       Seed seed = 0x6A09E667F3BCC908ull);

// Prop-2.7 wrapper: pushes base samples through (f, g) and evaluates
// densities by change of variables. Null maps mean identity.
class BentDistribution final : public JointDistribution {
 public:
  BentDistribution(DistPtr base, MapPtr f, MapPtr g);

  int dim_x() const override { return base_->dim_x(); }
  int dim_y() const override { return base_->dim_y(); }
  bool discrete_x() const override { return base_->discrete_x(); }
  bool discrete_y() const override { return base_->discrete_y(); }
  bool has_density() const override { return base_->has_density(); }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  MarginalPtr marginal_x() const override;
  MarginalPtr marginal_y() const override;
  std::string describe() const override;

  const DistPtr& base() const { return base_; }

 private:
  DistPtr base_;
  MapPtr f_, g_;
};

DistPtr bend(DistPtr base, MapPtr f, MapPtr g);

}  // namespace pmiprof
