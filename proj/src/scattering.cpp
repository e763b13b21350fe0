#include "fpchain/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fpchain {

WaveNumber::WaveNumber(double k) : k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    std::ostringstream os;
    os << "wave number must be finite and > 0, got " << k;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
}

const char* amplitude_name(Amplitude a) noexcept {
  switch (a) {
    case Amplitude::t: return "t";
    case Amplitude::l: return "l";
    case Amplitude::r: return "r";
  }
  return "?";
}

UnitarityResiduals unitarity_residuals(const ScatteringMatrix& s) noexcept {
  const double t2 = std::norm(s.t);
  return {std::abs(t2 + std::norm(s.l) - 1.0), std::abs(t2 + std::norm(s.r) - 1.0),
          std::abs(s.t * std::conj(s.r) + s.l * std::conj(s.t))};
}

double unitarity_defect(const ScatteringMatrix& s) noexcept {
  const auto u = unitarity_residuals(s);
  return std::max({u.column_l, u.column_r, u.orthogonality});
}

double wrap_phase(double phi) noexcept {
  double w = std::remainder(phi, 2.0 * pi);  // [-pi, pi]
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

std::optional<double> principal_phase(complex z, double floor) noexcept {
  if (!(std::abs(z) >= floor)) return std::nullopt;
  double a = std::arg(z);
  if (a <= -pi) a = pi;  // arg(-1 - 0i) = -pi
  return a;
}

PrincipalPhases principal_phases(const ScatteringMatrix& s, double floor) noexcept {
  return {principal_phase(s.t, floor), principal_phase(s.l, floor),
          principal_phase(s.r, floor)};
}

PhaseCurve::PhaseCurve(std::vector<double> grid, std::vector<double> values,
                       Amplitude label)
    : grid_(std::move(grid)), values_(std::move(values)), label_(label) {
  if (grid_.size() != values_.size())
    throw Error(ErrorKind::invalid_argument, "phase curve: grid and values differ in length");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1]))
      throw Error(ErrorKind::grid, "phase curve: grid must be strictly increasing");
    if (!(std::abs(values_[i] - values_[i - 1]) <= pi))
      throw Error(ErrorKind::grid,
                  "phase curve: adjacent phases differ by more than pi; grid too coarse");
  }
}

PhaseCurve unwrap(std::span<const PhaseSample> raw, Amplitude label) {
  std::vector<double> grid;
  std::vector<double> values;
  grid.reserve(raw.size());
  values.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i > 0 && !(raw[i].k > raw[i - 1].k))
      throw Error(ErrorKind::grid, "unwrap: grid must be strictly increasing");
    grid.push_back(raw[i].k);
    if (i == 0) {
      values.push_back(raw[i].phase);
      continue;
    }
    const double d = raw[i].phase - raw[i - 1].phase;
    const double step = wrap_phase(d);
    if (std::abs(std::abs(step) - pi) <= 1e-12) {
      std::ostringstream os;
      os << "unwrap: ambiguous branch between k=" << raw[i - 1].k << " and k=" << raw[i].k
         << " (phase jump of pi)";
      throw Error(ErrorKind::ambiguous_branch, os.str());
    }
    values.push_back(values.back() + step);
  }
  return PhaseCurve(std::move(grid), std::move(values), label);
}

PhaseCurve unwrap(const PhaseCurve& curve) {
  std::vector<PhaseSample> raw;
  raw.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i)
    raw.push_back({curve.grid()[i], curve.values()[i]});
  return unwrap(raw, curve.label());
}

double distance_to_half_pi_branch(double x) noexcept {
  return std::abs(std::remainder(x - 0.5 * pi, pi));
}

std::optional<double> phase_relation_residual(const ScatteringMatrix& s,
                                              double floor) noexcept {
  const auto p = principal_phases(s, floor);
  if (!p.t || !p.l || !p.r) return std::nullopt;
  return distance_to_half_pi_branch(0.5 * (*p.l + *p.r) - *p.t);
}

std::optional<double> symmetric_phase_residual(const ScatteringMatrix& s,
                                               double floor) noexcept {
  const auto p = principal_phases(s, floor);
  if (!p.t || !p.l) return std::nullopt;
  return distance_to_half_pi_branch(*p.l - *p.t);
}

}  // namespace fpchain
