// numeric.hpp: truncated-Fock backend propagating the full ion Hamiltonian
//   H = n - (delta/2) sz + (Omega/2) (s+ D(s i eta) + s- D(s i eta)^dagger)
// in units of nu. Basis order: g block, then e block.
#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "ionkick/state.hpp"

namespace ionkick::numeric {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct HamiltonianParams {
  double omega = 0.0;  // Omega / nu
  double delta = 0.0;  // delta / nu
  double eta = 0.1;
  Direction direction{};
};

struct RampSpec {
  double delta_start = 0.0;
  double delta_end = 0.0;
  double duration = 0.0;  // 1/nu
  std::size_t steps = 0;  // 0 picks default_ramp_steps

  // |delta_start - delta_end| / (Omega^2 tau); adiabatic following needs << 1.
  double adiabaticity(double omega) const;
};

// Step count giving a few hundred steps per unit of the largest phase rate.
std::size_t default_ramp_steps(double omega, double delta_start, double delta_end, double duration);

// Single-mode operators on the truncated space {|0>, ..., |N-1>}.
class OperatorSet {
 public:
  explicit OperatorSet(std::size_t n);

  std::size_t size() const { return n_; }
  const Matrix& a() const { return a_; }
  const Matrix& adag() const { return adag_; }
  const Matrix& number() const { return number_; }
  // a + a^dagger; its eigenvalues are the position grid x/x0 of the truncated space.
  const Matrix& position() const { return position_; }
  const Eigen::VectorXd& position_eigenvalues() const { return x_values_; }
  const Eigen::MatrixXd& position_eigenvectors() const { return x_vectors_; }

  static Eigen::Matrix2cd sigma_plus();   // |e><g|
  static Eigen::Matrix2cd sigma_minus();  // |g><e|
  static Eigen::Matrix2cd sigma_z();      // |e><e| - |g><g|

  // exp(beta a^dagger - conj(beta) a), computed spectrally.
  Matrix displacement(cplx beta) const;
  // D(i k) = exp(i k (a + a^dagger)) from the stored position eigenbasis.
  Matrix kick(double k) const;

 private:
  std::size_t n_;
  Matrix a_, adag_, number_, position_;
  Eigen::VectorXd x_values_;
  Eigen::MatrixXd x_vectors_;
};

// 1-mode Hamiltonian (2N x 2N) for the given operator set.
Matrix build_hamiltonian(const HamiltonianParams& p, const OperatorSet& ops);
// 2-mode Hamiltonian; the displacement acts on the pulse axis only.
Eigen::SparseMatrix<cplx> build_hamiltonian_2d(const HamiltonianParams& p, const OperatorSet& ops_x,
                                               const OperatorSet& ops_y);

// exp(-i H t) for Hermitian H.
Matrix propagator(const Matrix& h, double t);
// psi -> exp(-i H t) psi where H spans the full state space.
FockState evolve_const(const Matrix& h, double t, const FockState& psi);

// Applies a 2N_a x 2N_a operator over {g,e} x (mode on axis); in 2D the other
// mode is a spectator.
FockState apply_axis_operator(const Matrix& u, Axis axis, const FockState& psi);

// Square pulse of the given duration on the pulse axis. In 2D the other mode
// evolves freely for the same time (the two parts of H commute).
FockState apply_pulse(const HamiltonianParams& p, double duration, const OperatorSet& ops,
                      const FockState& psi);

struct RampOptions {
  bool verify = false;       // rerun with doubled steps and compare
  double tolerance = 1e-8;   // allowed infidelity between the two runs
};

// Linear detuning ramp. Integrated in the frame where the e block is shifted
// back by D^dagger: each step is an exact split of trap motion and a 4th order
// Magnus step of the 2x2 internal part, so every step is unitary.
FockState evolve_ramp(const HamiltonianParams& p, const RampSpec& ramp, const OperatorSet& ops,
                      const FockState& psi, const RampOptions& options = {});

FockState free_evolve(const FockState& psi, double t);
FockState free_evolve(const FockState& psi, double t, Axis axis);

// -i sigma_x on the internal state.
FockState carrier_flip(const FockState& psi);

enum class HalfSpace { left, right };

struct HalfSpaceOptions {
  double boundary = 0.0;   // in x/x0
  double smoothing = 0.0;  // tanh width in x/x0; 0 is a hard step
};

// exp(-i angle sx (x) Theta), Theta the projector onto the chosen side of the
// boundary, built in the eigenbasis of the truncated position operator.
Matrix half_space_rotation(double angle, HalfSpace side, const OperatorSet& ops,
                           const HalfSpaceOptions& options = {});

struct Measurement {
  double probability = 0.0;
  FockState projected;
};

double probability(const FockState& psi, Level outcome);
FockState project(const FockState& psi, Level outcome);
Measurement measure_internal(const FockState& psi, Level outcome);

// phi_n(x) for n < N at each grid point (rows: points, cols: n), normalized
// over x/x0: phi_0 = (2 pi)^(-1/4) e^{-x^2/4}.
Eigen::MatrixXd hermite_functions(const std::vector<double>& x, std::size_t n);

// Motional density matrix with the internal state traced out (1 mode).
Matrix reduced_density(const FockState& psi);

// rho(p, p') from Fock amplitudes with psi_n(p) = (-i)^n phi_n(p).
DensityGrid fock_to_momentum_grid(const FockState& psi, const std::vector<double>& grid);
DensityGrid fock_to_momentum_grid(const Matrix& rho, const std::vector<double>& grid);
DensityGrid position_density_2d_numeric(const FockState& psi, const std::vector<double>& grid_x,
                                        const std::vector<double>& grid_y);

}  // namespace ionkick::numeric
