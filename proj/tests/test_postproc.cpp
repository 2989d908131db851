#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "farflow/oracles.hpp"
#include "farflow/postproc.hpp"
#include "test_helpers.hpp"

using namespace farflow;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("fit recovers exact power laws") {
  for (double p = 1.0; p <= 6.0; p += 0.5) {
    std::vector<double> radii, sups;
    for (int k = 0; k < 8; ++k) {
      const double r = 2.0 * std::pow(2.0, 0.5 * k);
      radii.push_back(r);
      sups.push_back(3.7 * std::pow(r, -p));
    }
    const RateFit fit = fit_rate(radii, sups);
    CHECK(fit.exponent == doctest::Approx(p).epsilon(1e-3));
    CHECK(fit.stderr_slope < 1e-10);
  }
}

TEST_CASE("fit needs at least four usable shells; zeros are excluded") {
  std::vector<double> radii{2, 3, 4, 5, 6};
  std::vector<double> sups{1.0, 0.5, 0.0, 0.2, 0.1};
  const RateFit fit = fit_rate(radii, sups);
  CHECK(fit.n_excluded_zero == 1);
  CHECK(fit.radii.size() == 4);
  CHECK_THROWS_AS(fit_rate({2, 4, 8}, {1, 2, 3}), InsufficientDataError);
}

TEST_CASE("decay exponents of the closed-form fields") {
  SUBCASE("dipole velocity defect decays like r^{-3}") {
    const SphereDipoleField dip(1.0, 1.0);
    const RateFit fit =
        decay_fit(dip, DecayQuantity::SpeedError, dyadic_shells(2.0, 10));
    CHECK(fit.exponent == doctest::Approx(3.0).epsilon(0.02 / 3.0));
  }
  SUBCASE("dipole potential decays like r^{-2}") {
    const SphereDipoleField dip(1.0, 1.0);
    const RateFit fit =
        decay_fit(dip, DecayQuantity::PotentialError, dyadic_shells(2.0, 10));
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.02 / 2.0));
  }
  SUBCASE("point source speed decays like r^{-2}") {
    const PointSourceField src(2.0, 1.0, 1.0);
    const RateFit fit =
        decay_fit(src, DecayQuantity::SpeedError, dyadic_shells(2.0, 10));
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("exponent ordering: potential trails the gradient by one power") {
    const SphereDipoleField dip(1.0, 1.0);
    const auto shells = dyadic_shells(2.0, 10);
    const double es =
        decay_fit(dip, DecayQuantity::SpeedError, shells).exponent;
    const double ep =
        decay_fit(dip, DecayQuantity::PotentialError, shells).exponent;
    CHECK(std::abs(ep - (es - 1.0)) < 0.15);
  }
}

TEST_CASE("multipole extraction on the exact dipole") {
  const SphereDipoleField dip(1.0, 1.0);
  const MultipoleCoefficients coeffs = multipole_extract(dip);
  CHECK(std::abs(coeffs.G) < 1e-6);
  CHECK(coeffs.G_i(0) == doctest::Approx(-0.5).epsilon(0.01));
  CHECK(std::abs(coeffs.G_i(1)) < 1e-6);
  CHECK(std::abs(coeffs.G_i(2)) < 1e-6);
  CHECK(coeffs.G_ij.cwiseAbs().maxCoeff() < 1e-6);
  CHECK(!coeffs.flux_violation);
  CHECK(!coeffs.accuracy_warning);
  CHECK(coeffs.normalization == doctest::Approx(4.0 * kPi));

  SUBCASE("eval reproduces the field on r >= 4a within 1%") {
    for (const double r : {4.0, 8.0, 16.0}) {
      for (int j = 1; j < 16; ++j) {
        const double theta = kPi * j / 16.0;
        const Vec x = r * vec3(std::cos(theta), std::sin(theta), 0.0);
        const double exact = dip.phi(r, theta);
        CHECK(multipole_eval(coeffs, x) ==
              doctest::Approx(exact).epsilon(0.01));
      }
    }
  }
}

TEST_CASE("multipole extraction flags a net source") {
  const PointSourceField src(2.0, 1.0, 1.0);
  const MultipoleCoefficients coeffs = multipole_extract(src);
  CHECK(coeffs.flux_violation);
  CHECK(coeffs.net_flux == doctest::Approx(2.0 / 1.0).epsilon(1e-3));
  // G = -net_flux / (n(n-2) alpha(n))
  CHECK(coeffs.G == doctest::Approx(-2.0 / (4.0 * kPi)).epsilon(1e-3));
}

TEST_CASE("multipole extraction rejects unsupported fields") {
  testing::LambdaSampler compressible_field;
  compressible_field.model = GasModel::compressible(1.4, 2.5);
  compressible_field.phi_fn = [](double, double) { return 0.0; };
  CHECK_THROWS_AS(multipole_extract(compressible_field), ConfigurationError);

  testing::LambdaSampler cone_field;
  cone_field.kind = DomainKind::Cone;
  cone_field.phi_fn = [](double, double) { return 0.0; };
  CHECK_THROWS_AS(multipole_extract(cone_field), ConfigurationError);
}

TEST_CASE("multipole eval closed forms") {
  MultipoleCoefficients coeffs;
  coeffs.dim = 3;
  coeffs.G = 0.0;
  coeffs.G_i = Vec::Zero(3);
  coeffs.G_ij = Mat::Zero(3, 3);
  SUBCASE("all zero") {
    CHECK(multipole_eval(coeffs, vec3(1, 2, 3)) == 0.0);
  }
  SUBCASE("single dipole coefficient") {
    coeffs.G_i(0) = -0.5;
    // -1/2 d_1 r^{-1} at (2,0,0): -1/2 * (-x1/r^3) = 1/8
    CHECK(multipole_eval(coeffs, vec3(2, 0, 0)) == doctest::Approx(0.125));
  }
  SUBCASE("pure monopole is spherically symmetric") {
    coeffs.G = 0.7;
    const double v1 = multipole_eval(coeffs, vec3(3, 0, 0));
    const double v2 = multipole_eval(coeffs, vec3(0, 3, 0));
    CHECK(v1 == doctest::Approx(0.7 / 3.0));
    CHECK(v1 == doctest::Approx(v2));
  }
  SUBCASE("origin rejected") {
    CHECK_THROWS_AS(multipole_eval(coeffs, Vec::Zero(3)), SingularPointError);
  }
}

TEST_CASE("expansion residual fits") {
  const SphereDipoleField dip(1.0, 1.0);
  const auto shells = dyadic_shells(2.0, 10);
  SUBCASE("dipole with its own coefficients is exact") {
    MultipoleCoefficients coeffs;
    coeffs.dim = 3;
    coeffs.G = 0.0;
    coeffs.G_i = Vec::Zero(3);
    coeffs.G_i(0) = -0.5;
    coeffs.G_ij = Mat::Zero(3, 3);
    const RateFit fit = expansion_residual_fit(dip, coeffs, shells);
    CHECK(fit.exact);
  }
  SUBCASE("planted octupole-order term fits n + 1") {
    // Phi = dipole + c * d_111 r^{-1}; the extracted low-order coefficients
    // leave the planted term as the residual, decaying like r^{-4}.
    const double c = 0.02;
    testing::LambdaSampler field;
    field.model = GasModel::incompressible(1.0);
    field.u1 = 1.0;
    field.phi_fn = [&](double r, double theta) {
      const double x1 = r * std::cos(theta);
      // d^3/dx1^3 (1/r) = -15 x1^3 / r^7 + 9 x1 / r^5
      const double third =
          -15.0 * x1 * x1 * x1 / std::pow(r, 7) + 9.0 * x1 / std::pow(r, 5);
      return 0.5 * x1 / (r * r * r) + c * third;
    };
    field.velocity_fn = [&](double r, double theta) -> std::array<double, 2> {
      const SphereDipoleField d(1.0, 1.0);
      return d.velocity(r, theta);  // boundary data: slip sphere
    };
    const MultipoleCoefficients coeffs = multipole_extract(field);
    const RateFit fit = expansion_residual_fit(field, coeffs, shells);
    CHECK(!fit.exact);
    CHECK(fit.exponent == doctest::Approx(4.0).epsilon(0.05));
  }
  SUBCASE("noise floor flag") {
    MultipoleCoefficients coeffs;
    coeffs.dim = 3;
    coeffs.G = 0.0;
    coeffs.G_i = Vec::Zero(3);
    coeffs.G_i(0) = -0.5 * (1.0 + 1e-6);  // slightly wrong coefficient
    coeffs.G_ij = Mat::Zero(3, 3);
    const RateFit fit =
        expansion_residual_fit(dip, coeffs, shells, 128, 1e-5);
    CHECK(fit.noise_floor);
    CHECK(fit.noise_floor_value == 1e-5);
  }
}

TEST_CASE("shells outside the resolved range are dropped") {
  testing::LambdaSampler field;
  field.phi_fn = [](double r, double) { return 1.0 / (r * r); };
  field.resolved = 20.0;
  const RateFit fit = decay_fit(field, DecayQuantity::PotentialError,
                                dyadic_shells(2.0, 12));
  CHECK(fit.radii.back() <= 20.0);
  field.resolved = 7.0;  // only 2, 2.83, 4, 5.66 remain
  CHECK_NOTHROW(decay_fit(field, DecayQuantity::PotentialError,
                          dyadic_shells(2.0, 12)));
  field.resolved = 5.0;
  CHECK_THROWS_AS(
      decay_fit(field, DecayQuantity::PotentialError, dyadic_shells(2.0, 12)),
      InsufficientDataError);
}
