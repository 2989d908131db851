#ifndef FARFLOW_SOLVER_HPP
#define FARFLOW_SOLVER_HPP

#include <functional>
#include <string>
#include <vector>

#include "farflow/gas.hpp"
#include "farflow/geometry.hpp"
#include "farflow/kernels.hpp"
#include "farflow/sampler.hpp"

namespace farflow {

enum class FlowMode { Airfoil, Nozzle };

struct SolverConfig {
  int max_picard_iters = 80;
  double picard_tolerance = 1e-9;   // L-inf update between iterates
  double relaxation = 1.0;          // omega in (0, 1]
  double subsonic_margin = 0.05;    // delta: clamp speeds at (1-delta) q_cr
  double linear_tolerance = 0.0;    // 0: picard_tolerance / 10, relative
  int max_linear_iters = 50000;
  int divergence_patience = 5;      // growing updates before giving up
  ExecPolicy policy = ExecPolicy::OpenMP;
};

struct PicardHistory {
  std::vector<double> update_norms;
  std::vector<double> linear_residuals;
  int total_linear_iterations = 0;
  bool converged = false;
};

// Discrete solution of div(rho(|grad phi|^2) grad phi) = 0 on an AxiMesh.
// Stores Phi = phi - phi_inf per node (gauge Phi = 0 on the sigma = 0 row)
// plus derived velocity, density, and Mach number.
class FlowField : public FieldSampler {
 public:
  FlowField(AxiMesh mesh, GasModel model, FlowMode mode, double u1_infinity,
            double mass_flux, std::vector<double> inflow_g);

  // --- FieldSampler ---
  double phi(double r, double theta) const override;
  std::array<double, 2> velocity(double r, double theta) const override;
  const GasModel& gas() const override { return model_; }
  double axial_speed_infinity() const override { return u1_inf_; }
  DomainKind domain_kind() const override { return mesh_.kind(); }
  double theta_max() const override { return mesh_.theta_max(); }
  double r_inner() const override { return mesh_.r_base(); }
  double r_resolved() const override { return 1.0 / (3.0 * mesh_.dsigma()); }
  double native_dsigma() const override { return mesh_.dsigma(); }
  double native_dtheta() const override { return mesh_.dtheta(); }
  std::vector<std::pair<double, double>> sample_points(
      double r_min) const override;

  // --- grid access ---
  const AxiMesh& mesh() const { return mesh_; }
  FlowMode mode() const { return mode_; }
  double mass_flux() const { return mass_flux_; }
  const std::vector<double>& phi_nodes() const { return phi_; }
  std::vector<double>& phi_nodes() { return phi_; }
  const std::vector<double>& u_r_nodes() const { return u_r_; }
  const std::vector<double>& u_theta_nodes() const { return u_t_; }
  const std::vector<double>& rho_nodes() const { return rho_; }
  const std::vector<double>& mach_nodes() const { return mach_; }
  const std::vector<double>& inflow_g() const { return inflow_g_; }
  PicardHistory& history() { return history_; }
  const PicardHistory& history() const { return history_; }

  // Recompute velocity, density and Mach from the current Phi.  Speeds are
  // clamped to (1-delta) q_cr before evaluating the density.
  void update_derived(double clamp_margin);

  double max_speed() const;  // unclamped reconstruction

  // Mass flux (including the 2 pi azimuthal factor) through the dual face
  // layer between rows i and i+1, positive downstream (+r).  Nozzle mode.
  double discrete_shell_flux(int i) const;

  // L-inf over interior dual cells of the flux imbalance divided by the cell
  // volume; restricted to r in [r_lo, r_hi] when given.
  double discrete_residual(double r_lo = 0.0, double r_hi = 1e300) const;

  void write_csv(const std::string& path) const;

 private:
  friend std::pair<FlowField, double> picard_step(const FlowField&,
                                                  const SolverConfig&);
  AxiMesh mesh_;
  GasModel model_;
  FlowMode mode_;
  double u1_inf_ = 0.0;
  double mass_flux_ = 0.0;
  std::vector<double> inflow_g_;  // per angular node, cap row (nozzle)
  std::vector<double> phi_, u_r_, u_t_, rho_, mach_;
  PicardHistory history_;

  void assemble(StencilOperator& op, std::vector<double>& rhs) const;
};

// One freeze-coefficients step: densities from the current gradients, one
// symmetric positive-definite solve, relaxed update.  Returns the new field
// and the L-inf update norm.
std::pair<FlowField, double> picard_step(const FlowField& field,
                                         const SolverConfig& cfg);

FlowField solve_airfoil(const ExteriorDomain& domain, const GasModel& model,
                        double u1_infinity, int n_r, int n_theta,
                        const SolverConfig& cfg);

// inflow_shape is the angular shape of the Neumann data g(theta) at the cap;
// it is normalized so the discrete cap flux equals mass_flux exactly.
FlowField solve_nozzle(const ConeDomain& domain, const GasModel& model,
                       double mass_flux, int n_r, int n_theta,
                       const SolverConfig& cfg,
                       const std::function<double(double)>& inflow_shape = {});

// Axial speed with the given Mach number at infinity: solves M(q) = mach.
double speed_from_mach(const GasModel& model, double mach);

}  // namespace farflow

#endif  // FARFLOW_SOLVER_HPP
