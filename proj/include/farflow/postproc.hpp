#ifndef FARFLOW_POSTPROC_HPP
#define FARFLOW_POSTPROC_HPP

#include <functional>
#include <vector>

#include "farflow/coeffs.hpp"
#include "farflow/sampler.hpp"

namespace farflow {

// Least-squares fit of log(sup) against log(r) over shells; exponent is the
// negated slope.
struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::vector<double> radii;
  std::vector<double> sup_values;
  int n_excluded_zero = 0;
  bool exact = false;        // residual at roundoff on every shell; fit skipped
  bool noise_floor = false;  // sups at/below the documented floor everywhere
  double noise_floor_value = 0.0;
};

enum class DecayQuantity { SpeedError, PotentialError };

// Half-dyadic radii r0 * 2^{k/2}, k = 0..count-1.
std::vector<double> dyadic_shells(double r0, int count);

// Core fit on precomputed per-shell sups.
RateFit fit_rate(const std::vector<double>& radii,
                 const std::vector<double>& sups);

RateFit decay_fit(const FieldSampler& field, DecayQuantity quantity,
                  const std::vector<double>& shells, int n_angular = 128);

// Custom per-point quantity.
RateFit decay_fit(const FieldSampler& field,
                  const std::function<double(double, double)>& quantity,
                  const std::vector<double>& shells, int n_angular = 128);

// Coefficients of Phi = G r^{2-n} + sum G_i d_i r^{2-n} + sum G_ij d_ij r^{2-n}
// from boundary integrals over the obstacle sphere, normalization
// 1/(n (n-2) alpha(n)) with alpha(n) the unit-ball volume.  The normal is the
// obstacle-outward one, the sign convention validated against the exact
// dipole.
struct MultipoleCoefficients {
  double G = 0.0;
  Vec G_i;
  Mat G_ij;
  double normalization = 0.0;  // n (n-2) alpha(n)
  int dim = 3;
  double asymmetry = 0.0;      // |G_ij - G_ji| before symmetrization
  double net_flux = 0.0;       // boundary integral of grad Phi . n
  bool flux_violation = false; // net flux resolvably nonzero
  double richardson_rel_error = 0.0;  // quadrature self-check on G_1
  bool accuracy_warning = false;      // richardson disagreement > 1%
};

// Incompressible exterior fields only; axisymmetric reduction of the boundary
// integrals with the azimuthal direction integrated analytically.
MultipoleCoefficients multipole_extract(const FieldSampler& field,
                                        int n_quad = 0);

double multipole_eval(const MultipoleCoefficients& coeffs, const Vec& x);

// Decay of sup_shell |Phi - multipole_eval|.  A positive noise_floor is the
// caller's estimate of the field accuracy; sups at or below it on every shell
// set the noise_floor flag instead of asserting a rate.
RateFit expansion_residual_fit(const FieldSampler& field,
                               const MultipoleCoefficients& coeffs,
                               const std::vector<double>& shells,
                               int n_angular = 128, double noise_floor = 0.0);

}  // namespace farflow

#endif  // FARFLOW_POSTPROC_HPP
