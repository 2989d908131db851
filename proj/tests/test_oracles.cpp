#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "farflow/oracles.hpp"
#include "farflow/postproc.hpp"

using namespace farflow;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("sphere dipole") {
  const double U = 1.0, a = 1.0;
  SUBCASE("slip at the obstacle") {
    for (int k = 0; k <= 16; ++k) {
      const double theta = kPi * k / 16.0;
      const Vec x = a * vec3(std::cos(theta), std::sin(theta), 0.0);
      const auto s = sphere_dipole(U, a, 3, x);
      CHECK(std::abs(s.grad.dot(x) / a) < 1e-12);  // radial velocity
    }
  }
  SUBCASE("free stream at infinity") {
    const auto s = sphere_dipole(U, a, 3, vec3(3000.0, 1500.0, 0.0));
    CHECK(s.grad(0) == doctest::Approx(U).epsilon(1e-8));
    CHECK(std::abs(s.grad(1)) < 1e-8);
  }
  SUBCASE("potential difference matches G1 d_1 r^{-1} with G1 = -U a^3/2") {
    for (const Vec& x : {vec3(2, 1, 0.5), vec3(-1, 3, 0), vec3(5, 0, 0)}) {
      const double r = x.norm();
      const double expected = (-U * a * a * a / 2.0) * (-x(0) / (r * r * r));
      CHECK(sphere_dipole_phi_diff(U, a, 3, x) ==
            doctest::Approx(expected).epsilon(1e-13));
      const auto s = sphere_dipole(U, a, 3, x);
      CHECK(s.phi - U * x(0) ==
            doctest::Approx(expected).epsilon(1e-13));
    }
  }
  SUBCASE("harmonic: discrete laplacian at O(h^2) of a smooth function") {
    const Vec x = vec3(1.7, 0.9, -0.4);
    const auto lap = [&](double h) {
      double acc = -6.0 * sphere_dipole(1.0, 1.0, 3, x).phi;
      for (int i = 0; i < 3; ++i) {
        Vec e = Vec::Zero(3);
        e(i) = h;
        acc += sphere_dipole(1.0, 1.0, 3, x + e).phi +
               sphere_dipole(1.0, 1.0, 3, x - e).phi;
      }
      return std::abs(acc) / (h * h);
    };
    CHECK(lap(1e-3) < 1e-7);
  }
  SUBCASE("inside the obstacle rejected") {
    CHECK_THROWS_AS(sphere_dipole(1.0, 1.0, 3, vec3(0.5, 0, 0)),
                    std::domain_error);
  }
  SUBCASE("general n slip") {
    for (const int n : {4, 5}) {
      Vec x = Vec::Zero(n);
      x(0) = 0.6;
      x(1) = 0.8;  // |x| = 1 = a
      const auto s = sphere_dipole(1.0, 1.0, n, x);
      CHECK(std::abs(s.grad.dot(x)) < 1e-12);
    }
  }
  SUBCASE("sampler view agrees with the cartesian evaluation") {
    const SphereDipoleField field(1.0, 1.0);
    const double r = 2.5, theta = 0.8;
    const Vec x = vec3(r * std::cos(theta), r * std::sin(theta), 0.0);
    CHECK(field.phi(r, theta) ==
          doctest::Approx(sphere_dipole_phi_diff(1, 1, 3, x)).epsilon(1e-13));
    const auto [u_r, u_t] = field.velocity(r, theta);
    const auto s = sphere_dipole(1, 1, 3, x);
    const Vec e_r = vec3(std::cos(theta), std::sin(theta), 0.0);
    const Vec e_t = vec3(-std::sin(theta), std::cos(theta), 0.0);
    CHECK(u_r == doctest::Approx(s.grad.dot(e_r)).epsilon(1e-12));
    CHECK(u_t == doctest::Approx(s.grad.dot(e_t)).epsilon(1e-12));
  }
}

TEST_CASE("radial cone flow") {
  const ConeDomain cone(Eigen::Vector3d::Zero(), kPi / 6.0, 1.0);
  SUBCASE("incompressible closed form") {
    const auto gas = GasModel::incompressible(1.0);
    const double m = cone.solid_angle();
    CHECK(radial_cone_speed(m, cone, gas, 1.0) == doctest::Approx(1.0));
    CHECK(radial_cone_speed(m, cone, gas, 2.0) == doctest::Approx(0.25));
  }
  SUBCASE("compressible root satisfies the flux relation to 1e-12") {
    const auto gas = GasModel::compressible(1.4, 2.5);
    const double m = 0.3 * cone.solid_angle();
    for (const double r : {1.0, 1.7, 4.0, 32.0}) {
      const double q = radial_cone_speed(m, cone, gas, r);
      const double flux =
          gas.density_from_speed(q * q) * q * cone.solid_angle() * r * r;
      CHECK(flux == doctest::Approx(m).epsilon(1e-12));
      CHECK(q < gas.critical_speed());
    }
  }
  SUBCASE("monotone decay and conserved flux") {
    const auto gas = GasModel::compressible(1.4, 2.5);
    const double m = 0.5 * cone.solid_angle();
    double prev = 1e300;
    for (int k = 0; k < 12; ++k) {
      const double r = std::pow(2.0, 0.25 * k);
      const double q = radial_cone_speed(m, cone, gas, r);
      CHECK(q < prev);
      prev = q;
    }
  }
  SUBCASE("supersonic flux rejected") {
    const auto gas = GasModel::compressible(1.4, 2.5);
    const double sonic = sonic_flux_limit(cone, gas, 1.0);
    CHECK_THROWS_AS(radial_cone_speed(1.01 * sonic, cone, gas, 1.0),
                    InfeasibleFluxError);
    CHECK_NOTHROW(radial_cone_speed(0.99 * sonic, cone, gas, 1.0));
  }
  SUBCASE("compressible sampler phi has the right slope") {
    const auto gas = GasModel::compressible(1.4, 2.5);
    const RadialConeField field(0.4 * cone.solid_angle(), cone, gas);
    for (const double r : {1.5, 3.0, 10.0}) {
      const double h = 1e-4 * r;
      const double slope =
          (field.phi(r + h, 0.1) - field.phi(r - h, 0.1)) / (2 * h);
      CHECK(slope == doctest::Approx(field.velocity(r, 0.1)[0]).epsilon(1e-6));
    }
    CHECK(std::abs(field.phi(1e8, 0.0)) < 1e-7);  // gauge at infinity
  }
}

TEST_CASE("point source") {
  const double m = 2.0, rho_bar = 1.5;
  SUBCASE("flux through spheres by quadrature") {
    const int n_theta = 64;
    for (const double r : {1.0, 3.0}) {
      double flux = 0.0;
      for (int j = 0; j <= n_theta; ++j) {
        const double theta = kPi * j / n_theta;
        const double w = (j == 0 || j == n_theta) ? 0.5 : 1.0;
        const Vec x = r * vec3(std::cos(theta), std::sin(theta), 0.0);
        const auto s = point_source(m, rho_bar, 3, x);
        flux += w * rho_bar * s.grad.dot(x / r) * std::sin(theta);
      }
      flux *= 2.0 * kPi * r * r * kPi / n_theta;
      CHECK(std::abs(flux - m) / m < 1e-3);
    }
  }
  SUBCASE("zero strength gives the zero field") {
    const auto s = point_source(0.0, 1.0, 3, vec3(1, 2, 3));
    CHECK(s.phi == 0.0);
    CHECK(s.grad.norm() == 0.0);
  }
  SUBCASE("speed ratio between radii follows the power law") {
    const auto s1 = point_source(m, rho_bar, 3, vec3(1, 0, 0));
    const auto s2 = point_source(m, rho_bar, 3, vec3(2, 0, 0));
    CHECK(s2.grad.norm() / s1.grad.norm() == doctest::Approx(0.25));
  }
  SUBCASE("origin rejected") {
    CHECK_THROWS_AS(point_source(m, rho_bar, 3, Vec::Zero(3)),
                    SingularPointError);
  }
}

TEST_CASE("optimality certificate") {
  const ConeDomain cone(Eigen::Vector3d::Zero(), kPi / 6.0, 1.0);
  const auto gas = GasModel::compressible(1.4, 2.5);
  SUBCASE("radial oracle field passes with near-equality") {
    const double m = 0.3 * cone.solid_angle();
    const RadialConeField field(m, cone, gas);
    const auto report = optimality_certificate(field, cone, m,
                                               dyadic_shells(1.0, 8), 1e-4);
    CHECK(report.conservation_pass);
    CHECK(report.margin_pass);
    CHECK(!report.vacuous);
    for (const auto& shell : report.shells) {
      CHECK(shell.margin >= 0.0);
      // Lambda / rho slack only: margin stays below (Lambda/rho - 1) bound
      CHECK(shell.flux_rel_error < 1e-4);
    }
  }
  SUBCASE("zero flux is vacuous") {
    const RadialConeField field(0.0, cone, GasModel::incompressible(1.0));
    const auto report = optimality_certificate(field, cone, 0.0,
                                               dyadic_shells(1.0, 6), 1e-6);
    CHECK(report.vacuous);
    CHECK(report.margin_pass);
    for (const auto& shell : report.shells) {
      CHECK(shell.lower_bound == 0.0);
    }
  }
}
