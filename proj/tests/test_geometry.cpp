#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "farflow/geometry.hpp"

using namespace farflow;

TEST_CASE("solid angle") {
  CHECK(solid_angle_of_half_angle(kPi / 2.0) == doctest::Approx(2.0 * kPi));
  CHECK(solid_angle_of_half_angle(kPi) == doctest::Approx(4.0 * kPi));
  CHECK(solid_angle_of_half_angle(kPi / 3.0) == doctest::Approx(kPi));
  CHECK_THROWS_AS(ConeDomain(Eigen::Vector3d::Zero(), kPi, 1.0),
                  ConfigurationError);
  CHECK_THROWS_AS(ConeDomain(Eigen::Vector3d::Zero(), 1.8, 1.0),
                  ConfigurationError);
}

TEST_CASE("exterior mesh basics") {
  const AxiMesh mesh = build_exterior_mesh({1.0, 3}, 16, 16);
  CHECK(mesh.sigma_max() == doctest::Approx(1.0));
  CHECK(mesh.theta_max() == doctest::Approx(kPi));
  CHECK(build_exterior_mesh({2.0, 3}, 16, 16).sigma_max() ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(build_exterior_mesh({1.0, 3}, 4, 16), ConfigurationError);

  SUBCASE("r(sigma(r)) round trip") {
    for (int i = 1; i <= 16; ++i) {
      const double r = mesh.r(i);
      CHECK(1.0 / mesh.sigma(i) == doctest::Approx(r).epsilon(1e-14));
    }
  }
  SUBCASE("row and column flags") {
    CHECK(mesh.is_infinity_row(0));
    CHECK(mesh.is_inner_row(16));
    CHECK(mesh.is_axis(0));
    CHECK(mesh.is_axis(16));
    CHECK(!mesh.is_lateral(16));
    CHECK_THROWS_AS(mesh.r(0), SingularPointError);
  }
}

TEST_CASE("cone mesh basics") {
  const ConeDomain cone(Eigen::Vector3d::Zero(), kPi / 6.0, 1.0);
  const AxiMesh mesh = build_cone_mesh(cone, 16, 8);
  CHECK(mesh.sigma_max() == doctest::Approx(1.0));
  CHECK(mesh.theta_max() == doctest::Approx(kPi / 6.0));
  CHECK(mesh.is_lateral(8));
  CHECK(!mesh.is_axis(8));
  CHECK(cone.solid_angle() == doctest::Approx(2.0 * kPi * (1.0 - std::cos(kPi / 6.0))));

  const ConeDomain half(Eigen::Vector3d::Zero(), kPi / 2.0, 1.0);
  CHECK(half.solid_angle() == doctest::Approx(2.0 * kPi));
}

TEST_CASE("dual weights integrate sin exactly") {
  const AxiMesh mesh = build_exterior_mesh({1.0, 3}, 16, 32);
  double total = 0.0;
  for (int j = 0; j <= 32; ++j) total += mesh.dual_sin_weight(j);
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));  // int_0^pi sin = 2

  const AxiMesh cone =
      build_cone_mesh(ConeDomain(Eigen::Vector3d::Zero(), kPi / 6.0, 1.0), 16, 32);
  total = 0.0;
  for (int j = 0; j <= 32; ++j) total += cone.dual_sin_weight(j);
  CHECK(total == doctest::Approx(1.0 - std::cos(kPi / 6.0)).epsilon(1e-14));
}

TEST_CASE("shell quadrature reproduces shell volumes") {
  SUBCASE("exterior") {
    const AxiMesh mesh = build_exterior_mesh({1.0, 3}, 64, 64);
    const double r1 = 1.3, r2 = 3.7;
    const double vol = mesh.integrate_shell(r1, r2, [](double, double) { return 1.0; });
    const double exact = 4.0 * kPi * (r2 * r2 * r2 - r1 * r1 * r1) / 3.0;
    CHECK(std::abs(vol - exact) / exact < 0.005);
  }
  SUBCASE("cone") {
    const ConeDomain cone(Eigen::Vector3d::Zero(), kPi / 6.0, 1.0);
    const AxiMesh mesh = build_cone_mesh(cone, 64, 64);
    const double r1 = 1.3, r2 = 3.7;
    const double vol = mesh.integrate_shell(r1, r2, [](double, double) { return 1.0; });
    const double exact =
        cone.solid_angle() * (r2 * r2 * r2 - r1 * r1 * r1) / 3.0;
    CHECK(std::abs(vol - exact) / exact < 0.005);
  }
}

TEST_CASE("dual cell extents cover the domain without overlap") {
  const AxiMesh mesh = build_exterior_mesh({1.0, 3}, 16, 8);
  for (int i = 2; i <= 16; ++i) {
    CHECK(mesh.dual_r_outer(i) == doctest::Approx(mesh.dual_r_inner(i - 1)));
    CHECK(mesh.dual_r_outer(i) > mesh.dual_r_inner(i));
  }
  CHECK(mesh.dual_r_inner(16) == doctest::Approx(1.0));
}
