#pragma once

// Composition algebra for chains of identical, equally spaced cells.

#include <optional>
#include <vector>

#include "fpchain/cells.hpp"
#include "fpchain/scattering.hpp"

namespace fpchain {

// Rigid translation V(x) -> V(x - a): t unchanged, l -> l e^{2ika},
// r -> r e^{-2ika}.
ScatteringMatrix displace(const ScatteringMatrix& s, double a);

// S-matrix of two systems in global coordinates, `left` entirely to the left
// of `right`. Geometric series over internal bounces summed in closed form.
ScatteringMatrix compose(const ScatteringMatrix& left, const ScatteringMatrix& right);

// mantissa * 2^exponent. Carries t^(N) through the deep gap where |t^(N)|
// underflows a double but its phase is still needed.
struct ScaledComplex {
  complex mantissa{1.0, 0.0};
  long exponent = 0;

  static ScaledComplex from(complex z);
  ScaledComplex& operator*=(complex z);

  complex value() const noexcept;
  double log_abs() const noexcept;  // natural log of the modulus
  std::optional<double> phase() const noexcept;
};

struct ChainEntry {
  ScatteringMatrix s;  // s^(n); s.t may have underflowed to zero
  ScaledComplex t;     // t^(n) without underflow
};

struct ChainState {
  Lattice lattice;
  WaveNumber k;
  std::vector<ChainEntry> entries;  // entries[n - 1] holds s^(n)

  const ChainEntry& at(int n) const { return entries.at(static_cast<std::size_t>(n - 1)); }
  int size() const noexcept { return static_cast<int>(entries.size()); }
};

// Phases of s^(n); alpha_t is taken from the scaled amplitude.
PrincipalPhases chain_phases(const ChainEntry& e, double floor = default_modulus_floor) noexcept;

// Cells added on the right: t^(N+1), l^(N+1), r^(N+1) from s^(N) and the
// cell's origin amplitudes with position phase e^{2ikNa}.
ChainState chain_amplitudes(const Lattice& lattice, WaveNumber k);

// Cells added on the left of a chain shifted by a; independent route to r^(N).
ChainState chain_amplitudes_addleft(const Lattice& lattice, WaveNumber k);

// z = cos(alpha_t + k a) / |t|
double bloch_parameter(const ScatteringMatrix& cell, double a);

// Chebyshev polynomial of the second kind.
double chebyshev_U(int n, double z);

// |t^(N)|^2 = 1 / (1 + U_{N-1}(z)^2 (1 - |t|^2) / |t|^2)
double chebyshev_transmission(const ScatteringMatrix& cell, double a, int n_cells);

}  // namespace fpchain
