#pragma once

#include <functional>
#include <optional>

#include "qtt/dense.hpp"
#include "qtt/loader.hpp"
#include "qtt/operators.hpp"

namespace qtt {

enum class Method { euler, heun, rk4, crank_nicolson, arnoldi, split_step };
enum class KineticKind { fd, hdaf };

struct StepperConfig {
  double dt = 0.1;
  Method method = Method::split_step;
  int n_v = 10;            // Krylov basis size
  double cg_tol = 1e-10;   // relative residual target on the normal equations
  int cg_max_iter = 500;
  Tolerances tol;
  KineticKind kinetic = KineticKind::hdaf;
  int hdaf_M = 40;
  double eps_coef = 1e-16;
  FdVariant fd_variant = FdVariant::smooth9;
};

struct Hamiltonian {
  Grid grid;
  Mpo kinetic;    // -1/2 d^2/dx^2
  Mpo potential;  // diag V
  Mpo combined;
};

Hamiltonian make_hamiltonian(const Grid& g, const std::function<double(double)>& v,
                             KineticKind kind, int hdaf_M, double eps_coef,
                             FdVariant fd_variant, const Tolerances& tol);

MpsState step_euler(const MpsState& psi, const Hamiltonian& h, const StepperConfig& cfg);
MpsState step_heun(const MpsState& psi, const Hamiltonian& h, const StepperConfig& cfg);
MpsState step_rk4(const MpsState& psi, const Hamiltonian& h, const StepperConfig& cfg);

struct CgStats {
  int iterations = 0;
  double residual = 0.0;
};
MpsState step_crank_nicolson(const MpsState& psi, const Hamiltonian& h,
                             const StepperConfig& cfg, CgStats* stats = nullptr);

struct ArnoldiStats {
  int dim = 0;
  bool breakdown = false;
};
MpsState step_arnoldi(const MpsState& psi, const Hamiltonian& h,
                      const StepperConfig& cfg, ArnoldiStats* stats = nullptr);

MpsState step_split(const MpsState& psi, const Mpo& kinetic_prop,
                    const Mpo& half_potential_prop, const StepperConfig& cfg);

struct SplitOps {
  Mpo kinetic_prop;         // exp(+i (dt/2) d^2/dx^2)
  Mpo half_potential_prop;  // exp(-i (dt/2) V)
};
SplitOps make_split_ops(const Grid& g, const QuenchParams& p, double dt, int hdaf_M,
                        double eps_coef, const Tolerances& tol);

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double norm = 0.0;  // L2 function norm
  Index chi_max = 1;
  double wall_ms = 0.0;
  std::optional<double> epsilon;
};
using Observer = std::function<void(const StepRecord&)>;

struct EvolveProblem {
  Grid grid;
  QuenchParams params;
};

/// Iterates the configured stepper round(t_final/dt) times. epsilon against
/// the analytic solution is attached for harmonic quenches, every
/// epsilon_stride steps (0 disables it).
MpsState evolve(MpsState psi, const EvolveProblem& prob, const StepperConfig& cfg,
                double t_final, const Observer& obs, int epsilon_stride = 1);

double epsilon_vs_analytic(const MpsState& psi, const QuenchParams& p, double t);

/// Dense single steps with the same update formulas, for cross-validation.
Vec dense_step(Method m, const Mat& h, const Vec& psi, double dt, int n_v,
               double cg_tol);
Vec dense_split_step(const Vec& psi, const Mat& kinetic_prop, const Vec& half_phase);

}  // namespace qtt
