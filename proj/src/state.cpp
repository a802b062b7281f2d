#include "ionkick/state.hpp"

#include <algorithm>
#include <cmath>

#include "ionkick/analytic.hpp"
#include "ionkick/errors.hpp"

namespace ionkick {

const char* to_string(Level l) { return l == Level::g ? "g" : "e"; }
const char* to_string(Axis a) { return a == Axis::x ? "x" : "y"; }

std::string to_string(Direction d) {
  return std::string(d.sign > 0 ? "+" : "-") + to_string(d.axis);
}

SuperpositionState SuperpositionState::coherent(Level level, cplx alpha, cplx coeff) {
  return {1, {{level, coeff, {alpha, 0.0}}}};
}

SuperpositionState SuperpositionState::coherent2d(Level level, cplx alpha_x, cplx alpha_y,
                                                  cplx coeff) {
  return {2, {{level, coeff, {alpha_x, alpha_y}}}};
}

FockState FockState::zero(int modes, std::array<std::size_t, 2> dims) {
  if (modes != 1 && modes != 2) throw ShapeError("FockState: modes must be 1 or 2");
  if (modes == 1) dims[1] = 1;
  if (dims[0] < 1 || dims[1] < 1) throw ShapeError("FockState: empty truncation");
  FockState s;
  s.modes = modes;
  s.dims = dims;
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * dims[0] * dims[1]));
  return s;
}

double FockState::leak() const {
  double worst = 0.0;
  for (int m = 0; m < modes; ++m) {
    const std::size_t n = dims[static_cast<std::size_t>(m)];
    const std::size_t top = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * n)));
    double pop = 0.0;
    for (int l = 0; l < 2; ++l)
      for (std::size_t nx = 0; nx < dims[0]; ++nx)
        for (std::size_t ny = 0; ny < dims[1]; ++ny) {
          const std::size_t k = m == 0 ? nx : ny;
          if (k + top >= n) pop += std::norm(amplitude(static_cast<Level>(l), nx, ny));
        }
    worst = std::max(worst, pop);
  }
  return worst;
}

namespace {

cplx component_overlap(const CoherentComponent& a, const CoherentComponent& b, int modes) {
  if (a.level != b.level) return 0.0;
  cplx ov = std::conj(a.coeff) * b.coeff;
  for (int m = 0; m < modes; ++m)
    ov *= analytic::coherent_overlap(a.alpha[static_cast<std::size_t>(m)],
                                     b.alpha[static_cast<std::size_t>(m)]);
  return ov;
}

void check_shape(const FockState& a, const FockState& b) {
  if (a.modes != b.modes || a.dims != b.dims || a.amplitudes.size() != b.amplitudes.size())
    throw ShapeError("Fock states have different truncation");
}

bool same_alpha(const CoherentComponent& a, const CoherentComponent& b, int modes, double tol) {
  for (int m = 0; m < modes; ++m)
    if (std::abs(a.alpha[static_cast<std::size_t>(m)] - b.alpha[static_cast<std::size_t>(m)]) >= tol)
      return false;
  return true;
}

}  // namespace

cplx inner_product(const SuperpositionState& a, const SuperpositionState& b) {
  if (a.modes != b.modes) throw ShapeError("inner_product: mode count mismatch");
  cplx sum = 0.0;
  for (const auto& ca : a.components)
    for (const auto& cb : b.components) sum += component_overlap(ca, cb, a.modes);
  return sum;
}

cplx inner_product(const FockState& a, const FockState& b) {
  check_shape(a, b);
  return a.amplitudes.dot(b.amplitudes);  // Eigen conjugates the left operand
}

double norm_squared(const SuperpositionState& s) {
  // Diagonal terms plus twice the real part of the upper triangle.
  double sum = 0.0;
  const auto& c = s.components;
  for (std::size_t j = 0; j < c.size(); ++j) {
    sum += std::norm(c[j].coeff);
    for (std::size_t k = j + 1; k < c.size(); ++k)
      sum += 2.0 * component_overlap(c[j], c[k], s.modes).real();
  }
  return sum;
}

double norm_squared(const FockState& s) { return s.amplitudes.squaredNorm(); }

SuperpositionState normalize(const SuperpositionState& s) {
  const double n2 = norm_squared(s);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw ZeroNormError("normalize: zero-norm state", 0.0);
  SuperpositionState out = s;
  const double k = 1.0 / std::sqrt(n2);
  for (auto& c : out.components) c.coeff *= k;
  return out;
}

FockState normalize(const FockState& s) {
  const double n2 = norm_squared(s);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw ZeroNormError("normalize: zero-norm state", 0.0);
  FockState out = s;
  out.amplitudes /= std::sqrt(n2);
  return out;
}

double fidelity(const SuperpositionState& a, const SuperpositionState& b) {
  return std::norm(inner_product(a, b)) / (norm_squared(a) * norm_squared(b));
}

double fidelity(const FockState& a, const FockState& b) {
  return std::norm(inner_product(a, b)) / (norm_squared(a) * norm_squared(b));
}

namespace {

Eigen::VectorXcd coherent_amplitudes(cplx alpha, std::size_t n) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t k = 1; k < n; ++k)
    v(static_cast<Eigen::Index>(k)) =
        v(static_cast<Eigen::Index>(k - 1)) * alpha / std::sqrt(static_cast<double>(k));
  return v;
}

}  // namespace

FockState fock_expand(const CoherentComponent& c, std::size_t n) {
  return fock_expand(c, {n, 1}, 1);
}

FockState fock_expand(const CoherentComponent& c, std::array<std::size_t, 2> dims, int modes) {
  FockState s = FockState::zero(modes, dims);
  const Eigen::VectorXcd ax = coherent_amplitudes(c.alpha[0], s.dims[0]);
  const Eigen::VectorXcd ay =
      modes == 2 ? coherent_amplitudes(c.alpha[1], s.dims[1]) : Eigen::VectorXcd::Ones(1);
  for (std::size_t nx = 0; nx < s.dims[0]; ++nx)
    for (std::size_t ny = 0; ny < s.dims[1]; ++ny)
      s.amplitudes(static_cast<Eigen::Index>(s.index(c.level, nx, ny))) =
          c.coeff * ax(static_cast<Eigen::Index>(nx)) * ay(static_cast<Eigen::Index>(ny));
  return s;
}

FockState fock_expand(const SuperpositionState& s, std::array<std::size_t, 2> dims) {
  FockState out = FockState::zero(s.modes, dims);
  for (const auto& c : s.components) out.amplitudes += fock_expand(c, out.dims, s.modes).amplitudes;
  return out;
}

SuperpositionState simplify(const SuperpositionState& s, double tol) {
  SuperpositionState out{s.modes, {}};
  for (const auto& c : s.components) {
    auto it = std::find_if(out.components.begin(), out.components.end(), [&](const auto& o) {
      return o.level == c.level && same_alpha(o, c, s.modes, tol);
    });
    if (it == out.components.end())
      out.components.push_back(c);
    else
      it->coeff += c.coeff;
  }
  // Cancelled branches keep rounding residue of order 1e-32; drop them.
  double largest = 0.0;
  for (const auto& c : out.components) largest = std::max(largest, std::abs(c.coeff));
  std::erase_if(out.components, [&](const auto& c) { return std::abs(c.coeff) <= 1e-15 * largest; });
  return out;
}

bool approx_equal(const SuperpositionState& a, const SuperpositionState& b, double tol,
                  bool up_to_phase) {
  if (a.modes != b.modes) return false;
  const double alpha_tol = 1e-9;
  const SuperpositionState sa = simplify(a, alpha_tol);
  SuperpositionState sb = simplify(b, alpha_tol);

  auto find_match = [&](const CoherentComponent& c) -> const CoherentComponent* {
    for (const auto& o : sb.components)
      if (o.level == c.level && same_alpha(o, c, a.modes, alpha_tol)) return &o;
    return nullptr;
  };

  if (up_to_phase && !sa.components.empty()) {
    auto big = std::max_element(sa.components.begin(), sa.components.end(),
                                [](const auto& x, const auto& y) { return std::abs(x.coeff) < std::abs(y.coeff); });
    const CoherentComponent* m = find_match(*big);
    if (m == nullptr || std::abs(m->coeff) == 0.0) return std::abs(big->coeff) < tol;
    const cplx ratio = big->coeff / m->coeff;
    const cplx phase = ratio / std::abs(ratio);
    for (auto& c : sb.components) c.coeff *= phase;
  }

  for (const auto& c : sa.components) {
    const CoherentComponent* m = find_match(c);
    const cplx other_coeff = m ? m->coeff : cplx(0.0);
    if (std::abs(c.coeff - other_coeff) > tol) return false;
  }
  for (const auto& o : sb.components) {
    bool matched = std::any_of(sa.components.begin(), sa.components.end(), [&](const auto& c) {
      return c.level == o.level && same_alpha(c, o, a.modes, alpha_tol);
    });
    if (!matched && std::abs(o.coeff) > tol) return false;
  }
  return true;
}

double max_amplitude(const SuperpositionState& s) {
  double m = 0.0;
  for (const auto& c : s.components)
    for (int k = 0; k < s.modes; ++k) m = std::max(m, std::abs(c.alpha[static_cast<std::size_t>(k)]));
  return m;
}

double mean_phonon_number(const SuperpositionState& s) {
  cplx num = 0.0;
  for (const auto& a : s.components)
    for (const auto& b : s.components) {
      const cplx ov = component_overlap(a, b, s.modes);
      if (ov == cplx(0.0)) continue;
      cplx n = 0.0;
      for (int m = 0; m < s.modes; ++m)
        n += std::conj(a.alpha[static_cast<std::size_t>(m)]) * b.alpha[static_cast<std::size_t>(m)];
      num += ov * n;
    }
  return num.real() / norm_squared(s);
}

double mean_phonon_number(const FockState& s) {
  double num = 0.0;
  for (int l = 0; l < 2; ++l)
    for (std::size_t nx = 0; nx < s.dims[0]; ++nx)
      for (std::size_t ny = 0; ny < s.dims[1]; ++ny)
        num += static_cast<double>(nx + (s.modes == 2 ? ny : 0)) *
               std::norm(s.amplitude(static_cast<Level>(l), nx, ny));
  return num / norm_squared(s);
}

namespace {

void check_axis(const GridAxis& axis) {
  if (axis.values.size() < 2) throw ShapeError("grid axis '" + axis.name + "' needs at least 2 points");
  for (std::size_t i = 1; i < axis.values.size(); ++i)
    if (!(axis.values[i] > axis.values[i - 1]))
      throw ShapeError("grid axis '" + axis.name + "' is not strictly increasing");
}

double spacing(const GridAxis& axis) {
  return (axis.values.back() - axis.values.front()) / static_cast<double>(axis.values.size() - 1);
}

}  // namespace

double hermiticity_error(const DensityGrid& grid) {
  if (grid.values.rows() != grid.values.cols()) return INFINITY;
  return (grid.values - grid.values.adjoint()).cwiseAbs().maxCoeff();
}

void validate(const DensityGrid& grid) {
  check_axis(grid.rows);
  check_axis(grid.cols);
  if (static_cast<std::size_t>(grid.values.rows()) != grid.rows.values.size() ||
      static_cast<std::size_t>(grid.values.cols()) != grid.cols.values.size())
    throw ShapeError("grid matrix does not match axis lengths");
  if (!grid.values.allFinite()) throw ShapeError("grid contains non-finite values");
  if (grid.kind == GridKind::density_operator) {
    if (grid.rows.values != grid.cols.values)
      throw ShapeError("density-operator grid needs identical row and column axes");
    const double scale = std::max(1.0, grid.values.cwiseAbs().maxCoeff());
    if (hermiticity_error(grid) > 1e-10 * scale) throw ShapeError("density-operator grid is not Hermitian");
  }
}

double grid_trace(const DensityGrid& grid) {
  if (grid.kind == GridKind::density_operator)
    return grid.values.diagonal().real().sum() * spacing(grid.rows);
  return grid.values.real().sum() * spacing(grid.rows) * spacing(grid.cols);
}

}  // namespace ionkick
