#include "fpchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fpchain {

namespace {

constexpr double resonance_floor = 1e-14;
constexpr double edge_window = 1e-8;

complex checked_denominator(complex d, const char* where) {
  if (std::abs(d) < resonance_floor) {
    std::ostringstream os;
    os << where << ": |1 - l r| = " << std::abs(d)
       << " below 1e-14; inputs are not unitary S-matrices";
    throw Error(ErrorKind::resonance_divergence, os.str());
  }
  return d;
}

void check_same_k(const ScatteringMatrix& a, const ScatteringMatrix& b) {
  if (a.k.value() != b.k.value())
    throw Error(ErrorKind::invalid_argument, "compose: S-matrices at different wave numbers");
}

}  // namespace

ScatteringMatrix displace(const ScatteringMatrix& s, double a) {
  const complex phase = std::polar(1.0, 2.0 * s.k.value() * a);
  return {s.t, s.l * phase, s.r * std::conj(phase), s.k};
}

ScatteringMatrix compose(const ScatteringMatrix& left, const ScatteringMatrix& right) {
  check_same_k(left, right);
  const complex den = checked_denominator(1.0 - right.l * left.r, "compose");
  return {left.t * right.t / den, left.l + left.t * left.t * right.l / den,
          right.r + right.t * right.t * left.r / den, left.k};
}

ScaledComplex ScaledComplex::from(complex z) {
  ScaledComplex out{z, 0};
  out *= 1.0;
  return out;
}

ScaledComplex& ScaledComplex::operator*=(complex z) {
  mantissa *= z;
  const double m = std::max(std::abs(mantissa.real()), std::abs(mantissa.imag()));
  if (m != 0.0 && std::isfinite(m)) {
    int e = 0;
    std::frexp(m, &e);
    mantissa = {std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e)};
    exponent += e;
  }
  return *this;
}

complex ScaledComplex::value() const noexcept {
  const int e = static_cast<int>(std::clamp<long>(exponent, -100000, 100000));
  return {std::ldexp(mantissa.real(), e), std::ldexp(mantissa.imag(), e)};
}

double ScaledComplex::log_abs() const noexcept {
  return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

std::optional<double> ScaledComplex::phase() const noexcept {
  if (mantissa == complex{0.0, 0.0}) return std::nullopt;
  return principal_phase(mantissa, 0.0);
}

PrincipalPhases chain_phases(const ChainEntry& e, double floor) noexcept {
  auto p = principal_phases(e.s, floor);
  p.t = e.t.phase();
  return p;
}

ChainState chain_amplitudes(const Lattice& lattice, WaveNumber k) {
  const ScatteringMatrix cell = cell_smatrix(lattice.cell, k);
  ChainState state{lattice, k, {}};
  state.entries.reserve(static_cast<std::size_t>(lattice.n_cells));
  state.entries.push_back({cell, ScaledComplex::from(cell.t)});

  for (int n = 1; n < lattice.n_cells; ++n) {
    const auto& prev = state.entries.back();
    const complex phase = std::polar(1.0, 2.0 * k.value() * n * lattice.a);
    const complex l_next = cell.l * phase;  // l_{n+1}
    const complex r_next = cell.r * std::conj(phase);
    const complex den = checked_denominator(1.0 - l_next * prev.s.r, "chain_amplitudes");

    ScaledComplex t_scaled = prev.t;
    t_scaled *= cell.t / den;
    const complex tn = prev.s.t;
    ScatteringMatrix s{t_scaled.value(), prev.s.l + tn * tn * l_next / den,
                       r_next + cell.t * cell.t * prev.s.r / den, k};
    state.entries.push_back({s, t_scaled});
  }
  return state;
}

ChainState chain_amplitudes_addleft(const Lattice& lattice, WaveNumber k) {
  const ScatteringMatrix cell = cell_smatrix(lattice.cell, k);
  const complex shift = std::polar(1.0, 2.0 * k.value() * lattice.a);
  ChainState state{lattice, k, {}};
  state.entries.reserve(static_cast<std::size_t>(lattice.n_cells));
  state.entries.push_back({cell, ScaledComplex::from(cell.t)});

  for (int n = 1; n < lattice.n_cells; ++n) {
    const auto& prev = state.entries.back();
    // s^(n) moved one period to the right, then the cell at the origin added.
    const complex l_shifted = prev.s.l * shift;
    const complex r_shifted = prev.s.r * std::conj(shift);
    const complex den = checked_denominator(1.0 - l_shifted * cell.r, "chain_amplitudes_addleft");

    ScaledComplex t_scaled = prev.t;
    t_scaled *= cell.t / den;
    const complex tn = prev.s.t;
    ScatteringMatrix s{t_scaled.value(), cell.l + cell.t * cell.t * l_shifted / den,
                       r_shifted + tn * tn * cell.r / den, k};
    state.entries.push_back({s, t_scaled});
  }
  return state;
}

double bloch_parameter(const ScatteringMatrix& cell, double a) {
  const auto alpha_t = principal_phase(cell.t);
  if (!alpha_t)
    throw Error(ErrorKind::undefined_phase, "bloch_parameter: |t| below modulus floor");
  return std::cos(*alpha_t + cell.k.value() * a) / std::abs(cell.t);
}

double chebyshev_U(int n, double z) {
  if (n < 0) throw Error(ErrorKind::invalid_argument, "chebyshev_U: degree must be >= 0");
  if (std::abs(z - 1.0) < edge_window || std::abs(z + 1.0) < edge_window) {
    // Polynomial limit near z = +-1, where U_n(+-1) = (n + 1)(+-1)^n.
    double prev = 1.0;
    double cur = 2.0 * z;
    if (n == 0) return prev;
    for (int j = 1; j < n; ++j) {
      const double next = 2.0 * z * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  if (std::abs(z) < 1.0) {
    const double gamma = std::acos(z);
    return std::sin((n + 1) * gamma) / std::sin(gamma);
  }
  const double eta = std::acosh(std::abs(z));
  const double u = std::sinh((n + 1) * eta) / std::sinh(eta);
  return (z < 0.0 && (n % 2 == 1)) ? -u : u;
}

double chebyshev_transmission(const ScatteringMatrix& cell, double a, int n_cells) {
  if (n_cells < 1)
    throw Error(ErrorKind::invalid_argument, "chebyshev_transmission: N must be >= 1");
  const double z = bloch_parameter(cell, a);
  const double t2 = std::norm(cell.t);
  const double u = chebyshev_U(n_cells - 1, z);
  // |l|^2 in place of 1 - |t|^2 avoids cancellation for nearly transparent cells.
  return 1.0 / (1.0 + u * u * std::norm(cell.l) / t2);
}

}  // namespace fpchain
