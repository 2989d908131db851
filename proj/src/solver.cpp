#include "farflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

namespace farflow {

namespace {

inline double harmonic_mean(double a, double b) {
  return 2.0 * a * b / (a + b);
}

// sin^2(theta_hi) - sin^2(theta_lo) over the dual angular extent: twice the
// exact integral of cos sin, the ingredient of the free-stream face fluxes.
double sin2_jump(const AxiMesh& mesh, int j) {
  const double lo = std::sin(mesh.dual_theta_lo(j));
  const double hi = std::sin(mesh.dual_theta_hi(j));
  return hi * hi - lo * lo;
}

}  // namespace

double speed_from_mach(const GasModel& model, double mach) {
  if (!model.is_compressible()) {
    throw ConfigurationError(
        "speed_from_mach: incompressible flow has no Mach number; set the "
        "speed directly");
  }
  if (mach < 0.0 || mach >= 1.0) {
    throw NotSubsonicError("speed_from_mach: need 0 <= M < 1");
  }
  const double g = model.gamma();
  if (g == 1.0) return mach;  // sound speed is identically 1
  const double m2 = mach * mach;
  return std::sqrt(m2 * (g - 1.0) * model.bernoulli() /
                   (1.0 + 0.5 * (g - 1.0) * m2));
}

FlowField::FlowField(AxiMesh mesh, GasModel model, FlowMode mode,
                     double u1_infinity, double mass_flux,
                     std::vector<double> inflow_g)
    : mesh_(std::move(mesh)),
      model_(std::move(model)),
      mode_(mode),
      u1_inf_(u1_infinity),
      mass_flux_(mass_flux),
      inflow_g_(std::move(inflow_g)) {
  const std::size_t n = mesh_.n_nodes();
  phi_.assign(n, 0.0);
  u_r_.assign(n, 0.0);
  u_t_.assign(n, 0.0);
  rho_.assign(n, 0.0);
  mach_.assign(n, 0.0);
}

void FlowField::update_derived(double clamp_margin) {
  const int nr = mesh_.n_r(), nt = mesh_.n_theta();
  const double ds = mesh_.dsigma();
  const double qcr = model_.critical_speed();
  const double clamp2 = model_.is_compressible()
                            ? (1.0 - clamp_margin) * qcr * qcr
                            : std::numeric_limits<double>::max();
  for (int i = 0; i <= nr; ++i) {
    for (int j = 0; j <= nt; ++j) {
      const std::size_t p = mesh_.idx(i, j);
      const double theta = mesh_.theta(j);
      double ur, ut;
      if (i == 0) {
        // Point at infinity: the free stream exactly.
        ur = u1_inf_ * std::cos(theta);
        ut = -u1_inf_ * std::sin(theta);
      } else {
        const double sigma = mesh_.sigma(i);
        double dphi_ds;
        if (i == nr) {
          dphi_ds = (3.0 * phi_[p] - 4.0 * phi_[mesh_.idx(i - 1, j)] +
                     phi_[mesh_.idx(i - 2, j)]) /
                    (2.0 * ds);
        } else {
          dphi_ds =
              (phi_[mesh_.idx(i + 1, j)] - phi_[mesh_.idx(i - 1, j)]) /
              (2.0 * ds);
        }
        double dphi_dt = 0.0;
        if (j > 0 && j < nt) {
          dphi_dt = (phi_[mesh_.idx(i, j + 1)] - phi_[mesh_.idx(i, j - 1)]) /
                    (2.0 * mesh_.dtheta());
        }
        // axis columns keep dphi_dt = 0 by symmetry
        ur = u1_inf_ * std::cos(theta) - sigma * sigma * dphi_ds;
        ut = -u1_inf_ * std::sin(theta) + sigma * dphi_dt;
        if (mode_ == FlowMode::Airfoil && i == nr) ur = 0.0;  // slip, exact
        if (mesh_.is_lateral(j)) ut = 0.0;                    // slip, exact
      }
      u_r_[p] = ur;
      u_t_[p] = ut;
      const double q2 = ur * ur + ut * ut;
      const double q2_eval = std::min(q2, clamp2);
      const double rho = model_.density_from_speed(q2_eval);
      rho_[p] = rho;
      mach_[p] = model_.is_compressible()
                     ? std::sqrt(q2) / model_.sound_speed(rho)
                     : 0.0;
    }
  }
}

double FlowField::max_speed() const {
  double m = 0.0;
  for (std::size_t p = 0; p < u_r_.size(); ++p) {
    m = std::max(m, u_r_[p] * u_r_[p] + u_t_[p] * u_t_[p]);
  }
  return std::sqrt(m);
}

void FlowField::assemble(StencilOperator& op, std::vector<double>& rhs) const {
  const int nr = mesh_.n_r(), nt = mesh_.n_theta();
  const std::size_t n = mesh_.n_nodes();
  op.n_r = nr;
  op.n_theta = nt;
  op.diag.assign(n, 0.0);
  op.coef_r.assign(n, 0.0);
  op.coef_t.assign(n, 0.0);
  rhs.assign(n, 0.0);

  const double ds = mesh_.dsigma(), dt = mesh_.dtheta();
  const bool airfoil = mode_ == FlowMode::Airfoil;
  const double rho_ref =
      airfoil ? model_.density_from_speed(u1_inf_ * u1_inf_)
              : model_.stagnation_density();
  const double u = u1_inf_;

  // Radial edges (i,j)-(i+1,j); the i = 0 endpoint is the Dirichlet row.
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j <= nt; ++j) {
      const std::size_t p = mesh_.idx(i, j);
      const std::size_t q = mesh_.idx(i + 1, j);
      const double rho_face = harmonic_mean(rho_[p], rho_[q]);
      const double c = rho_face * mesh_.dual_sin_weight(j) / ds;
      if (i == 0) {
        op.diag[q] += c;  // coupling to Phi = 0 kept on the diagonal
      } else {
        op.coef_r[p] = c;
        op.diag[p] += c;
        op.diag[q] += c;
      }
      if (airfoil && u != 0.0) {
        const double sigma_f = (i + 0.5) * ds;
        // int u_inf . n dS over the face, outward -e_r for cell (i,j)
        const double iout =
            -u * sin2_jump(mesh_, j) / (2.0 * sigma_f * sigma_f);
        const double t = rho_face - rho_ref;
        if (i > 0) rhs[p] += t * iout;
        rhs[q] -= t * iout;
      }
    }
  }

  // Angular edges (i,j)-(i,j+1) within each non-Dirichlet row.
  for (int i = 1; i <= nr; ++i) {
    const double r_out = mesh_.dual_r_outer(i);
    const double r_in = mesh_.dual_r_inner(i);
    const double dr = r_out - r_in;
    const double r2half = 0.5 * (r_out * r_out - r_in * r_in);
    for (int j = 0; j < nt; ++j) {
      const std::size_t p = mesh_.idx(i, j);
      const std::size_t q = mesh_.idx(i, j + 1);
      const double theta_f = (j + 0.5) * dt;
      const double rho_face = harmonic_mean(rho_[p], rho_[q]);
      const double c = rho_face * std::sin(theta_f) * dr / dt;
      op.coef_t[p] = c;
      op.diag[p] += c;
      op.diag[q] += c;
      if (airfoil && u != 0.0) {
        const double s = std::sin(theta_f);
        const double iout = -u * s * s * r2half;  // outward +e_theta for (i,j)
        const double t = rho_face - rho_ref;
        rhs[p] += t * iout;
        rhs[q] -= t * iout;
      }
    }
  }

  // Inner boundary row: slip closure (airfoil) or inflow data (nozzle).
  for (int j = 0; j <= nt; ++j) {
    const std::size_t p = mesh_.idx(nr, j);
    if (airfoil) {
      if (u != 0.0) {
        const double a = mesh_.r_base();
        const double i_obs = -u * a * a * sin2_jump(mesh_, j) / 2.0;
        rhs[p] -= rho_ref * i_obs;
      }
    } else {
      // outflux through the cap face (outward -e_r) is -g R^2 w: inflow
      const double rin = mesh_.r_base();
      rhs[p] -= inflow_g_[j] * rin * rin * mesh_.dual_sin_weight(j);
    }
  }

  // Dirichlet row at sigma = 0.
  for (int j = 0; j <= nt; ++j) {
    const std::size_t p = mesh_.idx(0, j);
    op.diag[p] = 1.0;
    rhs[p] = 0.0;
  }
}

std::pair<FlowField, double> picard_step(const FlowField& field,
                                         const SolverConfig& cfg) {
  FlowField next = field;
  next.update_derived(cfg.subsonic_margin);

  StencilOperator op;
  std::vector<double> rhs;
  next.assemble(op, rhs);

  std::vector<double> x = next.phi_;
  const double lin_tol = cfg.linear_tolerance > 0.0 ? cfg.linear_tolerance
                                                    : cfg.picard_tolerance / 10.0;
  const CgResult lin = cg_solve(op, rhs, std::span<double>(x), lin_tol,
                                cfg.max_linear_iters, cfg.policy);
  if (!lin.converged) {
    throw LinearAlgebraError("picard_step: linear solve stalled",
                             lin.relative_residual);
  }
  next.history_.total_linear_iterations += lin.iterations;
  next.history_.linear_residuals.push_back(lin.relative_residual);

  const double omega = cfg.relaxation;
  double update = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double value = omega * x[k] + (1.0 - omega) * field.phi_[k];
    update = std::max(update, std::abs(value - field.phi_[k]));
    next.phi_[k] = value;
  }
  next.update_derived(cfg.subsonic_margin);
  return {std::move(next), update};
}

namespace {

FlowField run_picard(FlowField field, const SolverConfig& cfg) {
  field.update_derived(cfg.subsonic_margin);
  int growth_streak = 0;
  for (int it = 1; it <= cfg.max_picard_iters; ++it) {
    auto [next, update] = picard_step(field, cfg);
    field = std::move(next);
    field.history().update_norms.push_back(update);

    const auto& updates = field.history().update_norms;
    if (update < cfg.picard_tolerance) {
      field.history().converged = true;
      break;
    }
    if (updates.size() >= 2 && update > updates[updates.size() - 2]) {
      if (++growth_streak >= cfg.divergence_patience) {
        throw NonConvergenceError("picard iteration diverging", updates);
      }
    } else {
      growth_streak = 0;
    }
  }
  if (!field.history().converged) {
    throw NonConvergenceError("picard iteration did not reach tolerance",
                              field.history().update_norms);
  }
  if (field.gas().is_compressible()) {
    const double qcr = field.gas().critical_speed();
    const double bound = (1.0 - 0.5 * cfg.subsonic_margin) * qcr;
    if (field.max_speed() >= bound) {
      throw NotSubsonicError("converged field reaches the subsonic clamp");
    }
  }
  return field;
}

}  // namespace

FlowField solve_airfoil(const ExteriorDomain& domain, const GasModel& model,
                        double u1_infinity, int n_r, int n_theta,
                        const SolverConfig& cfg) {
  if (model.is_compressible()) {
    const double qcr = model.critical_speed();
    if (std::abs(u1_infinity) >=
        std::sqrt(1.0 - cfg.subsonic_margin) * qcr) {
      throw NotSubsonicError("solve_airfoil: free stream not subsonic");
    }
  }
  AxiMesh mesh = build_exterior_mesh(domain, n_r, n_theta);
  FlowField field(std::move(mesh), model, FlowMode::Airfoil, u1_infinity, 0.0,
                  {});
  return run_picard(std::move(field), cfg);
}

FlowField solve_nozzle(const ConeDomain& domain, const GasModel& model,
                       double mass_flux, int n_r, int n_theta,
                       const SolverConfig& cfg,
                       const std::function<double(double)>& inflow_shape) {
  if (mass_flux < 0.0) {
    throw ConfigurationError("solve_nozzle: mass flux must be >= 0");
  }
  AxiMesh mesh = build_cone_mesh(domain, n_r, n_theta);

  // Discrete inflow data: shape sampled at the cap nodes, scaled so the
  // quadrature flux equals mass_flux exactly.
  std::vector<double> g(n_theta + 1, 0.0);
  if (mass_flux > 0.0) {
    double weighted = 0.0;
    for (int j = 0; j <= n_theta; ++j) {
      const double shape =
          inflow_shape ? inflow_shape(mesh.theta(j)) : 1.0;
      if (shape < 0.0) {
        throw ConfigurationError("solve_nozzle: inflow shape must be >= 0");
      }
      g[j] = shape;
      weighted += shape * mesh.dual_sin_weight(j);
    }
    if (weighted <= 0.0) {
      throw ConfigurationError("solve_nozzle: inflow shape vanishes");
    }
    const double rin = domain.inner_radius;
    const double scale = mass_flux / (2.0 * kPi * rin * rin * weighted);
    for (double& v : g) v *= scale;

    if (model.is_compressible()) {
      const double qcr = model.critical_speed();
      const double rho_cr =
          model.density_from_speed(qcr * qcr * (1.0 - 1e-14));
      const double sonic_density_flux = rho_cr * qcr;
      for (double v : g) {
        if (v >= sonic_density_flux) {
          throw InfeasibleFluxError(
              "solve_nozzle: inflow flux density exceeds the sonic maximum");
        }
      }
    }
  }

  FlowField field(std::move(mesh), model, FlowMode::Nozzle, 0.0, mass_flux,
                  std::move(g));
  return run_picard(std::move(field), cfg);
}

double FlowField::discrete_shell_flux(int i) const {
  if (i < 0 || i >= mesh_.n_r()) {
    throw ConfigurationError("discrete_shell_flux: face layer out of range");
  }
  const double ds = mesh_.dsigma();
  double flux = 0.0;
  for (int j = 0; j <= mesh_.n_theta(); ++j) {
    const std::size_t p = mesh_.idx(i, j);
    const std::size_t q = mesh_.idx(i + 1, j);
    const double rho_face = harmonic_mean(rho_[p], rho_[q]);
    flux += rho_face * mesh_.dual_sin_weight(j) * (phi_[p] - phi_[q]) / ds;
  }
  return 2.0 * kPi * flux;
}

double FlowField::discrete_residual(double r_lo, double r_hi) const {
  StencilOperator op;
  std::vector<double> rhs;
  assemble(op, rhs);
  std::vector<double> ax(op.size());
  apply_stencil(op, phi_, std::span<double>(ax), ExecPolicy::Serial);
  const int nt = mesh_.n_theta();
  const int j_hi = mesh_.kind() == DomainKind::Cone ? nt - 1 : nt;
  double worst = 0.0;
  for (int i = 1; i < mesh_.n_r(); ++i) {
    const double r = mesh_.r(i);
    if (r < r_lo || r > r_hi) continue;
    for (int j = 0; j <= j_hi; ++j) {
      const std::size_t p = mesh_.idx(i, j);
      const double vol = mesh_.cell_volume(i, j) / (2.0 * kPi);
      worst = std::max(worst, std::abs(ax[p] - rhs[p]) / vol);
    }
  }
  return worst;
}

double FlowField::phi(double r, double theta) const {
  const double sigma_max = mesh_.sigma_max();
  double sigma = 1.0 / r;
  if (sigma > sigma_max * (1.0 + 1e-9)) {
    throw std::domain_error("FlowField::phi: point inside the inner boundary");
  }
  sigma = std::min(sigma, sigma_max);
  if (theta < -1e-12 || theta > mesh_.theta_max() * (1.0 + 1e-9)) {
    throw std::domain_error("FlowField::phi: theta out of range");
  }
  const double ti = std::clamp(theta, 0.0, mesh_.theta_max());
  const double ps = sigma / mesh_.dsigma();
  const double pt = ti / mesh_.dtheta();
  const int i0 = std::min(static_cast<int>(ps), mesh_.n_r() - 1);
  const int j0 = std::min(static_cast<int>(pt), mesh_.n_theta() - 1);
  const double a = ps - i0, b = pt - j0;
  return (1 - a) * (1 - b) * phi_[mesh_.idx(i0, j0)] +
         a * (1 - b) * phi_[mesh_.idx(i0 + 1, j0)] +
         (1 - a) * b * phi_[mesh_.idx(i0, j0 + 1)] +
         a * b * phi_[mesh_.idx(i0 + 1, j0 + 1)];
}

std::array<double, 2> FlowField::velocity(double r, double theta) const {
  const double sigma_max = mesh_.sigma_max();
  double sigma = 1.0 / r;
  sigma = std::min(sigma, sigma_max);
  const double ti = std::clamp(theta, 0.0, mesh_.theta_max());
  const double ps = sigma / mesh_.dsigma();
  const double pt = ti / mesh_.dtheta();
  const int i0 = std::min(static_cast<int>(ps), mesh_.n_r() - 1);
  const int j0 = std::min(static_cast<int>(pt), mesh_.n_theta() - 1);
  const double a = ps - i0, b = pt - j0;
  const auto lerp = [&](const std::vector<double>& v) {
    return (1 - a) * (1 - b) * v[mesh_.idx(i0, j0)] +
           a * (1 - b) * v[mesh_.idx(i0 + 1, j0)] +
           (1 - a) * b * v[mesh_.idx(i0, j0 + 1)] +
           a * b * v[mesh_.idx(i0 + 1, j0 + 1)];
  };
  return {lerp(u_r_), lerp(u_t_)};
}

std::vector<std::pair<double, double>> FlowField::sample_points(
    double r_min) const {
  std::vector<std::pair<double, double>> pts;
  for (int i = 1; i <= mesh_.n_r(); ++i) {
    const double r = mesh_.r(i);
    if (r < r_min) continue;
    for (int j = 0; j <= mesh_.n_theta(); ++j) {
      pts.emplace_back(r, mesh_.theta(j));
    }
  }
  return pts;
}

void FlowField::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "r,theta,phi_diff,speed_error,rho,mach\n";
  for (int i = 1; i <= mesh_.n_r(); ++i) {
    for (int j = 0; j <= mesh_.n_theta(); ++j) {
      const std::size_t p = mesh_.idx(i, j);
      const double theta = mesh_.theta(j);
      const double du_r = u_r_[p] - u1_inf_ * std::cos(theta);
      const double du_t = u_t_[p] + u1_inf_ * std::sin(theta);
      out << mesh_.r(i) << ',' << theta << ',' << phi_[p] << ','
          << std::sqrt(du_r * du_r + du_t * du_t) << ',' << rho_[p] << ','
          << mach_[p] << '\n';
    }
  }
}

}  // namespace farflow
