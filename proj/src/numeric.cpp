#include "ionkick/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ionkick/errors.hpp"

namespace ionkick::numeric {

double RampSpec::adiabaticity(double omega) const {
  if (!(duration > 0.0) || omega == 0.0) return INFINITY;
  return std::abs(delta_start - delta_end) / (omega * omega * duration);
}

std::size_t default_ramp_steps(double omega, double delta_start, double delta_end, double duration) {
  const double rate = std::max({std::abs(omega), std::abs(delta_start), std::abs(delta_end), 1.0});
  const auto steps = static_cast<std::size_t>(std::ceil(4.0 * rate * duration));
  return std::max<std::size_t>(steps, 400);
}

OperatorSet::OperatorSet(std::size_t n) : n_(n) {
  if (n < 2) throw ShapeError("build_operators: truncation must be at least 2");
  const auto m = static_cast<Eigen::Index>(n);
  a_ = Matrix::Zero(m, m);
  for (Eigen::Index k = 1; k < m; ++k) a_(k - 1, k) = std::sqrt(static_cast<double>(k));
  adag_ = a_.adjoint();
  number_ = Matrix::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) number_(k, k) = static_cast<double>(k);
  position_ = a_ + adag_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(position_.real());
  x_values_ = es.eigenvalues();
  x_vectors_ = es.eigenvectors();
}

Eigen::Matrix2cd OperatorSet::sigma_plus() {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  s(1, 0) = 1.0;
  return s;
}

Eigen::Matrix2cd OperatorSet::sigma_minus() { return sigma_plus().adjoint(); }

Eigen::Matrix2cd OperatorSet::sigma_z() {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  s(0, 0) = -1.0;
  s(1, 1) = 1.0;
  return s;
}

Matrix OperatorSet::displacement(cplx beta) const {
  // beta a^dag - conj(beta) a = i K with K Hermitian.
  const Matrix k = cplx(0.0, -1.0) * (beta * adag_ - std::conj(beta) * a_);
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  const Vector phases = (I * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix OperatorSet::kick(double k) const {
  const Vector phases = (I * k * x_values_.cast<cplx>()).array().exp();
  const Matrix v = x_vectors_.cast<cplx>();
  return v * phases.asDiagonal() * v.transpose();
}

Matrix build_hamiltonian(const HamiltonianParams& p, const OperatorSet& ops) {
  const auto n = static_cast<Eigen::Index>(ops.size());
  const Matrix d = ops.kick(p.direction.sign * p.eta);
  Matrix h = Matrix::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = ops.number();
  h.bottomRightCorner(n, n) = ops.number();
  h.topLeftCorner(n, n).diagonal().array() += 0.5 * p.delta;
  h.bottomRightCorner(n, n).diagonal().array() -= 0.5 * p.delta;
  h.bottomLeftCorner(n, n) = 0.5 * p.omega * d;
  h.topRightCorner(n, n) = 0.5 * p.omega * d.adjoint();
  return h;
}

Eigen::SparseMatrix<cplx> build_hamiltonian_2d(const HamiltonianParams& p, const OperatorSet& ops_x,
                                               const OperatorSet& ops_y) {
  const std::size_t nx = ops_x.size();
  const std::size_t ny = ops_y.size();
  const std::size_t m = nx * ny;
  const bool on_x = p.direction.axis == Axis::x;
  const OperatorSet& ops_a = on_x ? ops_x : ops_y;
  const Matrix d = ops_a.kick(p.direction.sign * p.eta);
  auto idx = [&](std::size_t l, std::size_t ix, std::size_t iy) { return l * m + ix * ny + iy; };

  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t ix = 0; ix < nx; ++ix)
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double sz = l == 0 ? -1.0 : 1.0;
        t.emplace_back(idx(l, ix, iy), idx(l, ix, iy), static_cast<double>(ix + iy) - 0.5 * p.delta * sz);
      }
  // Coupling |e,k><g,j| (Omega/2) D(k,j) on the pulse axis, identity on the other.
  const std::size_t na = ops_a.size();
  const std::size_t nb = on_x ? ny : nx;
  for (std::size_t j = 0; j < na; ++j)
    for (std::size_t k = 0; k < na; ++k) {
      const cplx v = 0.5 * p.omega * d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
      if (v == cplx(0.0)) continue;
      for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t g = on_x ? idx(0, j, b) : idx(0, b, j);
        const std::size_t e = on_x ? idx(1, k, b) : idx(1, b, k);
        t.emplace_back(e, g, v);
        t.emplace_back(g, e, std::conj(v));
      }
    }
  Eigen::SparseMatrix<cplx> h(static_cast<Eigen::Index>(2 * m), static_cast<Eigen::Index>(2 * m));
  h.setFromTriplets(t.begin(), t.end());
  return h;
}

Matrix propagator(const Matrix& h, double t) {
  if (t == 0.0) return Matrix::Identity(h.rows(), h.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw IntegratorError("propagator: eigendecomposition failed");
  const Vector phases = (cplx(0.0, -t) * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

void check_finite(const FockState& psi, const char* where) {
  if (!psi.amplitudes.allFinite()) throw IntegratorError(std::string(where) + ": non-finite amplitudes");
}

Vector number_phases(std::size_t n, double t) {
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = std::polar(1.0, -t * static_cast<double>(k));
  return v;
}

}  // namespace

FockState evolve_const(const Matrix& h, double t, const FockState& psi) {
  if (h.rows() != psi.amplitudes.size()) throw ShapeError("evolve_const: Hamiltonian size mismatch");
  FockState out = psi;
  if (t == 0.0) return out;
  out.amplitudes = propagator(h, t) * psi.amplitudes;
  check_finite(out, "evolve_const");
  return out;
}

FockState apply_axis_operator(const Matrix& u, Axis axis, const FockState& psi) {
  const std::size_t nx = psi.dims[0];
  const std::size_t ny = psi.dims[1];
  const auto a = static_cast<Eigen::Index>(axis == Axis::x ? nx : ny);
  if (axis == Axis::y && psi.modes < 2) throw ShapeError("apply_axis_operator: y axis on a 1-mode state");
  if (u.rows() != 2 * a || u.cols() != 2 * a) throw ShapeError("apply_axis_operator: operator size mismatch");
  FockState out = psi;
  if (psi.modes == 1) {
    out.amplitudes = u * psi.amplitudes;
    return out;
  }
  const auto ex = static_cast<Eigen::Index>(nx);
  const auto ey = static_cast<Eigen::Index>(ny);
  if (axis == Axis::x) {
    // Storage is row-major (level*Nx + nx) x ny; the column-major view is its transpose.
    Eigen::Map<const Matrix> in(psi.amplitudes.data(), ey, 2 * ex);
    Eigen::Map<Matrix> res(out.amplitudes.data(), ey, 2 * ex);
    res = in * u.transpose();
  } else {
    const Eigen::Index m = ex * ey;
    Matrix stacked(2 * ey, ex);
    stacked.topRows(ey) = Eigen::Map<const Matrix>(psi.amplitudes.data(), ey, ex);
    stacked.bottomRows(ey) = Eigen::Map<const Matrix>(psi.amplitudes.data() + m, ey, ex);
    const Matrix res = u * stacked;
    Eigen::Map<Matrix>(out.amplitudes.data(), ey, ex) = res.topRows(ey);
    Eigen::Map<Matrix>(out.amplitudes.data() + m, ey, ex) = res.bottomRows(ey);
  }
  return out;
}

FockState apply_pulse(const HamiltonianParams& p, double duration, const OperatorSet& ops,
                      const FockState& psi) {
  const Axis axis = p.direction.axis;
  FockState out = apply_axis_operator(propagator(build_hamiltonian(p, ops), duration), axis, psi);
  if (psi.modes == 2) out = free_evolve(out, duration, axis == Axis::x ? Axis::y : Axis::x);
  check_finite(out, "apply_pulse");
  return out;
}

namespace {

Eigen::Matrix2cd internal_h(double delta, double omega) {
  Eigen::Matrix2cd h;
  h << 0.5 * delta, 0.5 * omega, 0.5 * omega, -0.5 * delta;
  return h;
}

// exp(-i H) for a Hermitian 2x2 matrix via its Pauli decomposition.
Eigen::Matrix2cd expm_herm2(const Eigen::Matrix2cd& h) {
  const double c0 = 0.5 * (h(0, 0) + h(1, 1)).real();
  const double cz = 0.5 * (h(0, 0) - h(1, 1)).real();
  const double cx = h(0, 1).real();
  const double cy = -h(0, 1).imag();
  const double r = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double c = std::cos(r);
  const double s = r > 0.0 ? std::sin(r) / r : 1.0;
  Eigen::Matrix2cd u;
  u << cplx(c, -s * cz), cplx(-s * cy, -s * cx), cplx(s * cy, -s * cx), cplx(c, s * cz);
  return std::polar(1.0, -c0) * u;
}

FockState ramp_once(const HamiltonianParams& p, const RampSpec& ramp, std::size_t steps,
                    const OperatorSet& ops, const FockState& psi) {
  const Axis axis = p.direction.axis;
  const auto n = static_cast<Eigen::Index>(ops.size());
  const double dt = ramp.duration / static_cast<double>(steps);
  const Matrix d = ops.kick(p.direction.sign * p.eta);
  const Matrix d_adj = d.adjoint();

  // Motion: g block free, e block D^dag n D, for half and full steps.
  const Vector half_g = number_phases(ops.size(), 0.5 * dt);
  const Vector full_g = number_phases(ops.size(), dt);
  const Matrix half_e = d_adj * half_g.asDiagonal() * d;
  const Matrix full_e = d_adj * full_g.asDiagonal() * d;

  // Work on a (2N) x rest matrix: rows are (level, n) on the pulse axis.
  const Eigen::Index rest = static_cast<Eigen::Index>(psi.motional_size()) / n;
  Matrix w(2 * n, rest);
  {
    Matrix frame = Matrix::Zero(2 * n, 2 * n);
    frame.topLeftCorner(n, n).setIdentity();
    frame.bottomRightCorner(n, n) = d_adj;
    const FockState moved = apply_axis_operator(frame, axis, psi);
    if (psi.modes == 1) {
      w = moved.amplitudes;
    } else if (axis == Axis::x) {
      w = Eigen::Map<const Matrix>(moved.amplitudes.data(), rest, 2 * n).transpose();
    } else {
      const Eigen::Index m = static_cast<Eigen::Index>(psi.motional_size());
      w.topRows(n) = Eigen::Map<const Matrix>(moved.amplitudes.data(), n, rest);
      w.bottomRows(n) = Eigen::Map<const Matrix>(moved.amplitudes.data() + m, n, rest);
    }
  }

  auto motion = [&](const Vector& g_phase, const Matrix& e_prop) {
    w.topRows(n) = g_phase.asDiagonal() * w.topRows(n);
    w.bottomRows(n) = e_prop * w.bottomRows(n);
  };

  const double slope = (ramp.delta_end - ramp.delta_start) / ramp.duration;
  const double gauss = 0.5 / std::sqrt(3.0);
  motion(half_g, half_e);
  for (std::size_t k = 0; k < steps; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * dt;
    const Eigen::Matrix2cd h1 = internal_h(ramp.delta_start + slope * (mid - gauss * dt), p.omega);
    const Eigen::Matrix2cd h2 = internal_h(ramp.delta_start + slope * (mid + gauss * dt), p.omega);
    const Eigen::Matrix2cd heff =
        0.5 * dt * (h1 + h2) - cplx(0.0, std::sqrt(3.0) / 12.0 * dt * dt) * (h2 * h1 - h1 * h2);
    const Eigen::Matrix2cd u = expm_herm2(heff);
    const Matrix g = w.topRows(n);
    const Matrix e = w.bottomRows(n);
    w.topRows(n) = u(0, 0) * g + u(0, 1) * e;
    w.bottomRows(n) = u(1, 0) * g + u(1, 1) * e;
    if (k + 1 < steps)
      motion(full_g, full_e);
    else
      motion(half_g, half_e);
  }
  w.bottomRows(n) = d * w.bottomRows(n);

  FockState out = psi;
  if (psi.modes == 1) {
    out.amplitudes = w;
  } else if (axis == Axis::x) {
    Eigen::Map<Matrix>(out.amplitudes.data(), rest, 2 * n) = w.transpose();
  } else {
    const Eigen::Index m = static_cast<Eigen::Index>(psi.motional_size());
    Eigen::Map<Matrix>(out.amplitudes.data(), n, rest) = w.topRows(n);
    Eigen::Map<Matrix>(out.amplitudes.data() + m, n, rest) = w.bottomRows(n);
  }
  if (psi.modes == 2) out = free_evolve(out, ramp.duration, axis == Axis::x ? Axis::y : Axis::x);
  check_finite(out, "evolve_ramp");
  return out;
}

}  // namespace

FockState evolve_ramp(const HamiltonianParams& p, const RampSpec& ramp, const OperatorSet& ops,
                      const FockState& psi, const RampOptions& options) {
  if (ramp.duration < 0.0) throw std::invalid_argument("evolve_ramp: negative duration");
  if (ramp.duration == 0.0) return psi;
  const std::size_t steps =
      ramp.steps ? ramp.steps : default_ramp_steps(p.omega, ramp.delta_start, ramp.delta_end, ramp.duration);
  if (steps < 100) throw std::invalid_argument("evolve_ramp: at least 100 steps required");
  FockState out = ramp_once(p, ramp, steps, ops, psi);
  if (!options.verify) return out;
  FockState fine = ramp_once(p, ramp, 2 * steps, ops, psi);
  const double infidelity = 1.0 - fidelity(out, fine);
  if (!(infidelity < options.tolerance))
    throw ConvergenceError("evolve_ramp: doubling " + std::to_string(steps) +
                               " steps changed the state by infidelity " + std::to_string(infidelity),
                           steps, infidelity);
  return fine;
}

FockState free_evolve(const FockState& psi, double t) {
  FockState out = free_evolve(psi, t, Axis::x);
  return psi.modes == 2 ? free_evolve(out, t, Axis::y) : out;
}

FockState free_evolve(const FockState& psi, double t, Axis axis) {
  if (axis == Axis::y && psi.modes < 2) throw ShapeError("free_evolve: y axis on a 1-mode state");
  FockState out = psi;
  const Vector ph = number_phases(psi.dims[static_cast<std::size_t>(axis)], t);
  for (int l = 0; l < 2; ++l)
    for (std::size_t nx = 0; nx < psi.dims[0]; ++nx)
      for (std::size_t ny = 0; ny < psi.dims[1]; ++ny)
        out.amplitudes(static_cast<Eigen::Index>(psi.index(static_cast<Level>(l), nx, ny))) *=
            ph(static_cast<Eigen::Index>(axis == Axis::x ? nx : ny));
  return out;
}

FockState carrier_flip(const FockState& psi) {
  FockState out = psi;
  const auto m = static_cast<Eigen::Index>(psi.motional_size());
  out.amplitudes.head(m) = cplx(0.0, -1.0) * psi.amplitudes.tail(m);
  out.amplitudes.tail(m) = cplx(0.0, -1.0) * psi.amplitudes.head(m);
  return out;
}

Matrix half_space_rotation(double angle, HalfSpace side, const OperatorSet& ops,
                           const HalfSpaceOptions& options) {
  const auto n = static_cast<Eigen::Index>(ops.size());
  const Eigen::VectorXd& x = ops.position_eigenvalues();
  Eigen::VectorXd c(n), s(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double signed_x = side == HalfSpace::right ? x(k) - options.boundary : options.boundary - x(k);
    double weight;
    if (options.smoothing > 0.0)
      weight = 0.5 * (1.0 + std::tanh(signed_x / options.smoothing));
    else
      weight = signed_x > 0.0 ? 1.0 : 0.0;
    c(k) = std::cos(angle * weight);
    s(k) = std::sin(angle * weight);
  }
  const Eigen::MatrixXd& v = ops.position_eigenvectors();
  const Matrix cm = (v * c.asDiagonal() * v.transpose()).cast<cplx>();
  const Matrix sm = (v * s.asDiagonal() * v.transpose()).cast<cplx>();
  Matrix u(2 * n, 2 * n);
  u.topLeftCorner(n, n) = cm;
  u.bottomRightCorner(n, n) = cm;
  u.topRightCorner(n, n) = cplx(0.0, -1.0) * sm;
  u.bottomLeftCorner(n, n) = cplx(0.0, -1.0) * sm;
  return u;
}

FockState project(const FockState& psi, Level outcome) {
  FockState out = psi;
  const auto m = static_cast<Eigen::Index>(psi.motional_size());
  if (outcome == Level::g)
    out.amplitudes.tail(m).setZero();
  else
    out.amplitudes.head(m).setZero();
  return out;
}

double probability(const FockState& psi, Level outcome) {
  const double total = norm_squared(psi);
  if (!(total > 0.0)) throw ZeroNormError("probability: zero-norm state", 0.0);
  return norm_squared(project(psi, outcome)) / total;
}

Measurement measure_internal(const FockState& psi, Level outcome) {
  const double p = probability(psi, outcome);
  if (p < 1e-14)
    throw ZeroNormError(std::string("measurement outcome ") + to_string(outcome) + " has zero probability", p);
  return {p, normalize(project(psi, outcome))};
}

Eigen::MatrixXd hermite_functions(const std::vector<double>& x, std::size_t n) {
  const auto rows = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd phi(rows, cols);
  const double norm = std::pow(2.0 * pi, -0.25);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    phi(i, 0) = norm * std::exp(-0.25 * xi * xi);
    if (cols > 1) phi(i, 1) = xi * phi(i, 0);
    for (Eigen::Index k = 1; k + 1 < cols; ++k)
      phi(i, k + 1) = (xi * phi(i, k) - std::sqrt(static_cast<double>(k)) * phi(i, k - 1)) /
                      std::sqrt(static_cast<double>(k + 1));
  }
  return phi;
}

Matrix reduced_density(const FockState& psi) {
  if (psi.modes != 1) throw ShapeError("reduced_density: needs a 1-mode state");
  const auto n = static_cast<Eigen::Index>(psi.dims[0]);
  const Vector g = psi.amplitudes.head(n);
  const Vector e = psi.amplitudes.tail(n);
  return g * g.adjoint() + e * e.adjoint();
}

DensityGrid fock_to_momentum_grid(const FockState& psi, const std::vector<double>& grid) {
  if (psi.modes != 1) throw ShapeError("fock_to_momentum_grid: needs a 1-mode state");
  return fock_to_momentum_grid(reduced_density(normalize(psi)), grid);
}

DensityGrid fock_to_momentum_grid(const Matrix& rho, const std::vector<double>& grid) {
  if (rho.rows() != rho.cols()) throw ShapeError("fock_to_momentum_grid: density matrix not square");
  const auto n = static_cast<std::size_t>(rho.rows());
  Matrix psi = hermite_functions(grid, n).cast<cplx>();
  cplx phase = 1.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) {
    psi.col(k) *= phase;
    phase *= cplx(0.0, -1.0);
  }
  DensityGrid out;
  out.kind = GridKind::density_operator;
  out.rows = {"p", "p0", grid};
  out.cols = {"p_prime", "p0", grid};
  out.values = psi * rho * psi.adjoint();
  out.values = 0.5 * (out.values + out.values.adjoint()).eval();
  out.metadata["backend"] = "numeric";
  if (grid.size() > 1 && (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1) > 1.0)
    out.metadata["warning"] = "grid coarser than one point per unit p/p0";
  validate(out);
  return out;
}

DensityGrid position_density_2d_numeric(const FockState& state, const std::vector<double>& grid_x,
                                        const std::vector<double>& grid_y) {
  if (state.modes != 2) throw ShapeError("position_density_2d_numeric: needs a 2-mode state");
  const FockState psi = normalize(state);
  const auto nx = static_cast<Eigen::Index>(psi.dims[0]);
  const auto ny = static_cast<Eigen::Index>(psi.dims[1]);
  const Matrix phx = hermite_functions(grid_x, psi.dims[0]).cast<cplx>();
  const Matrix phy = hermite_functions(grid_y, psi.dims[1]).cast<cplx>();
  DensityGrid out;
  out.kind = GridKind::probability;
  out.rows = {"x", "x0", grid_x};
  out.cols = {"y", "x0", grid_y};
  out.values = Matrix::Zero(phx.rows(), phy.rows());
  out.metadata["backend"] = "numeric";
  for (int l = 0; l < 2; ++l) {
    // Column-major view (ny x nx) of the row-major coefficient block.
    Eigen::Map<const Matrix> c(psi.amplitudes.data() + l * nx * ny, ny, nx);
    const Matrix amp = phx * c.transpose() * phy.transpose();
    out.values += amp.cwiseAbs2().cast<cplx>();
  }
  validate(out);
  return out;
}

}  // namespace ionkick::numeric
