#pragma once

// Amplitudes, unitarity checks and phase bookkeeping for one-dimensional
// scattering in natural units (hbar = m = 1, so E = k^2/2 and v = k).

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fpchain/error.hpp"

namespace fpchain {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Below this modulus an amplitude has no usable phase.
inline constexpr double default_modulus_floor = 1e-300;

class WaveNumber {
 public:
  explicit WaveNumber(double k);

  double value() const noexcept { return k_; }
  double energy() const noexcept { return 0.5 * k_ * k_; }
  double velocity() const noexcept { return k_; }

 private:
  double k_;
};

// On-shell S-matrix
//
//     | t  r |
//     | l  t |
//
// t: transmission, l: reflection from the left, r: reflection from the right.
struct ScatteringMatrix {
  complex t{1.0, 0.0};
  complex l{0.0, 0.0};
  complex r{0.0, 0.0};
  WaveNumber k;

  static ScatteringMatrix identity(WaveNumber k) { return {1.0, 0.0, 0.0, k}; }
};

enum class Amplitude { t, l, r };

const char* amplitude_name(Amplitude a) noexcept;

struct UnitarityResiduals {
  double column_l;       // ||t|^2 + |l|^2 - 1|
  double column_r;       // ||t|^2 + |r|^2 - 1|
  double orthogonality;  // |t conj(r) + l conj(t)|
};

UnitarityResiduals unitarity_residuals(const ScatteringMatrix& s) noexcept;

// Largest of the three unitarity residuals:
//   ||t|^2 + |l|^2 - 1|, ||t|^2 + |r|^2 - 1|, |t conj(r) + l conj(t)|.
double unitarity_defect(const ScatteringMatrix& s) noexcept;

// Principal argument in (-pi, pi], or nullopt when |z| < floor.
std::optional<double> principal_phase(complex z,
                                      double floor = default_modulus_floor) noexcept;

struct PrincipalPhases {
  std::optional<double> t;
  std::optional<double> l;
  std::optional<double> r;
};

PrincipalPhases principal_phases(const ScatteringMatrix& s,
                                 double floor = default_modulus_floor) noexcept;

// Maps any angle into (-pi, pi].
double wrap_phase(double phi) noexcept;

// Unwrapped phase of one amplitude sampled along a strictly increasing
// k-grid. Adjacent values differ by less than pi.
class PhaseCurve {
 public:
  PhaseCurve(std::vector<double> grid, std::vector<double> values, Amplitude label);

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  Amplitude label() const noexcept { return label_; }
  std::size_t size() const noexcept { return grid_.size(); }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  Amplitude label_;
};

struct PhaseSample {
  double k;
  double phase;
};

// Nearest-branch continuity unwrapping. Throws ErrorKind::ambiguous_branch if
// an adjacent raw difference is pi within 1e-12, ErrorKind::grid if the grid is
// not strictly increasing.
PhaseCurve unwrap(std::span<const PhaseSample> raw, Amplitude label = Amplitude::t);
PhaseCurve unwrap(const PhaseCurve& curve);

// Distance of (alpha_l + alpha_r)/2 - alpha_t from the nearest pi/2 + n pi.
// nullopt if any amplitude is below the floor.
std::optional<double> phase_relation_residual(const ScatteringMatrix& s,
                                              double floor = default_modulus_floor) noexcept;

// Distance of alpha_l - alpha_t from the nearest pi/2 + n pi (parity-symmetric
// potentials only).
std::optional<double> symmetric_phase_residual(const ScatteringMatrix& s,
                                               double floor = default_modulus_floor) noexcept;

// Distance of x from the nearest pi/2 + n pi.
double distance_to_half_pi_branch(double x) noexcept;

}  // namespace fpchain
