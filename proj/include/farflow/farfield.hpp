#ifndef FARFLOW_FARFIELD_HPP
#define FARFLOW_FARFIELD_HPP

#include <functional>

#include "farflow/coeffs.hpp"
#include "farflow/geometry.hpp"
#include "farflow/sampler.hpp"

namespace farflow {

// Anisotropic radius Q(x) = sqrt((x-c)^T A (x-c)) with A the inverse of the
// limit coefficients a_ij^inf.  Comparable to |x-c| with the constant C
// computed from the eigenvalues of A.
struct QuadraticForm {
  Mat A;
  Vec center;
  int dim = 0;

  static QuadraticForm from_coeffs(const EllipticCoeffs& a_inf, Vec center);
  double comparability_constant() const;
};

double q_value(const Vec& x, const QuadraticForm& form);

struct QPowerDerivs {
  Vec gradient;
  Mat hessian;
};

// Closed-form gradient and Hessian of Q^{-l}:
//   d_i Q^{-l}    = -l Q^{-l-2} (A (x-c))_i
//   d_ij Q^{-l}   = l (l+2) Q^{-l-4} (A(x-c))_i (A(x-c))_j - l A_ij Q^{-l-2}
QPowerDerivs q_power_derivatives(const Vec& x, double l,
                                 const QuadraticForm& form);

// sum_ij a_ij^inf d_ij Q^{-l} - l (l+2-n) Q^{-l-2}, divided by the magnitude
// of the leading term l (l+2) Q^{-l-2}; vanishes identically when form.A is
// the inverse of a_inf.a.
double lemma21_residual(const Vec& x, double l, const EllipticCoeffs& a_inf,
                        const QuadraticForm& form);

// psi = Q^{2-n} - Q^{2-n-beta}, positive for Q > 1, vanishing at infinity.
struct ComparisonFunction {
  QuadraticForm form;
  double beta = 0.5;
};

double psi(const Vec& x, const ComparisonFunction& cmp);
QPowerDerivs psi_derivatives(const Vec& x, const ComparisonFunction& cmp);

// sum_ij a_ij(x) d_ij psi + beta (n-2+beta) Q^{-n-beta}; exactly zero for
// a = a_inf, O(Q^{-n-1-sigma}) for coefficients decaying at rate 1+sigma.
double lpsi_residual(const Vec& x, const Mat& a_at_x,
                     const ComparisonFunction& cmp);

struct BarrierCheckConfig {
  double c1 = 0.0;         // 0 selects the automatic rule 2 max |Phi|/psi on |x| = R'
  double r_prime = 0.0;
  double tolerance = -1.0; // < 0 selects the h^2-scaled automatic tolerance
  bool check_subsolution = true;
};

struct BarrierReport {
  double c1 = 0.0;
  double r_prime = 0.0;
  double tolerance = 0.0;
  double max_h_plus = 0.0;
  double max_h_minus = 0.0;
  double min_subsolution = 0.0;  // min over samples and signs of sum a_ij d_ij h±
  double subsolution_tolerance = 0.0;
  bool subsolution_pass = true;
  int n_samples = 0;
  int n_subsolution_samples = 0;
  bool pass = false;
};

// Evaluates h± = ±Phi/C1 - psi on samples of Omega_{R'} and checks the sign;
// optionally checks the discrete subsolution inequality sum a_ij d_ij h± >= 0
// at interior samples using native-grid central differences.
BarrierReport barrier_sign_check(const FieldSampler& field,
                                 const ComparisonFunction& cmp,
                                 const BarrierCheckConfig& cfg);

// Inversion y = x / |x|^2; an involution away from the origin.
Vec kelvin_map(const Vec& x);

// Transformed potential Phi_bar(y) = |y|^{2-n} Phi(y/|y|^2).
class KelvinPotential {
 public:
  KelvinPotential(std::function<double(const Vec&)> phi, int dim)
      : phi_(std::move(phi)), dim_(dim) {}
  double operator()(const Vec& y) const;

 private:
  std::function<double(const Vec&)> phi_;
  int dim_;
};

struct ConeOrthogonalityReport {
  double max_abs = 0.0;  // max over lateral samples of |grad Q . n|
  int n_samples = 0;
};

// On the cone's lateral boundary the normal is orthogonal to rays from the
// vertex, so grad Q . n = 0 whenever form is centered at the vertex with
// isotropic A.  Callers validate center == vertex beforehand; running with a
// displaced center reports the violation instead of throwing.
ConeOrthogonalityReport cone_orthogonality_check(const ConeDomain& cone,
                                                 const QuadraticForm& form,
                                                 int n_radii = 16,
                                                 int n_azimuth = 16);

}  // namespace farflow

#endif  // FARFLOW_FARFIELD_HPP
