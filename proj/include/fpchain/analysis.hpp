#pragma once

// Quantities derived from chain amplitudes: phase time-delays, traversal
// times, band classification, large-N phase asymptotics and Gaussian
// wave-packet averages.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpchain/chain.hpp"

namespace fpchain {

struct FiniteDifference {
  double step = 1e-4;  // k-spacing of the stencil
};

// Central difference at h and 2h combined by one Richardson step (the
// 5-point stencil).
std::string describe(const FiniteDifference& fd);

struct PhaseCurves {
  std::optional<PhaseCurve> t;
  std::optional<PhaseCurve> l;
  std::optional<PhaseCurve> r;
};

struct DelayRecord {
  WaveNumber k;
  std::optional<double> tau_t;
  std::optional<double> tau_l;
  std::optional<double> tau_r;
  std::string method;
};

// d(phase)/dk at grid point k; k needs two uniformly spaced neighbours on
// each side.
double phase_derivative(const PhaseCurve& curve, double k);

// tau = (1/v) d(alpha)/dk with v = k. Missing curves give missing delays.
DelayRecord time_delays(const PhaseCurves& curves, WaveNumber k);

using PhaseSource = std::function<PrincipalPhases(WaveNumber)>;

// Samples the source on the 5-point stencil around k and unwraps each curve.
// Curves with an undefined phase anywhere on the stencil are left empty.
PhaseCurves stencil_curves(const PhaseSource& source, WaveNumber k, const FiniteDifference& fd);

// Delays of a single cell moved to `offset`.
DelayRecord cell_delays(const PotentialCell& cell, WaveNumber k, double offset = 0.0,
                        const FiniteDifference& fd = {});

// Delays of the full N-cell chain of `lattice`.
DelayRecord chain_delays(const Lattice& lattice, WaveNumber k, const FiniteDifference& fd = {});

struct HartmanRecord {
  int n_cells;
  double tau_t;
  double traversal;  // n a / v + tau_t
  double k;
  double a;
};

HartmanRecord traversal_time(int n_cells, double a, WaveNumber k, double tau_t);

enum class BandClass { gap, band, edge };

const char* band_class_name(BandClass c) noexcept;

struct BandVerdict {
  WaveNumber k;
  double z;
  BandClass cls;
  double edge_tolerance;
};

inline constexpr double default_edge_tolerance = 1e-9;

BandVerdict band_classify(const ScatteringMatrix& cell, double a,
                          double tol = default_edge_tolerance);

struct HartmanScan {
  BandVerdict verdict;
  std::vector<HartmanRecord> records;  // n = 1..n_max
  std::string warning;                 // non-empty when k is not in a gap
};

HartmanScan hartman_scan(const PotentialCell& cell, double a, WaveNumber k, int n_max,
                         const FiniteDifference& fd = {},
                         double tol = default_edge_tolerance);

struct AsymptoticFit {
  double alpha = 0.0;  // alpha_r^(n) + 2 n k a -> alpha
  double beta = 0.0;   // alpha_t^(n) + n k a -> beta
  double slope_r = 0.0;
  double slope_t = 0.0;
  double residual = 0.0;
  int n_min = 0;
  int n_max = 0;
  complex l_limit{};            // l^(n_max)
  double l_modulus_defect = 0;  // ||l^(n_max)| - 1|
  double step_defect_r = 0;     // max |alpha_r^(n+1) - alpha_r^(n) + 2ka| (mod 2 pi)
  double beta_relation_residual = 0;  // (alpha + alpha_l)/2 - beta vs pi/2 mod pi
};

// Fits the upper half of the chain. Refuses Band-classified k and chains
// shorter than 16 cells.
AsymptoticFit asymptotic_phase_fit(const ChainState& chain, double tol = default_edge_tolerance);

// Gaussian-weighted trapezoid average of `transmission` over
// [k0 - 5 sigma, k0 + 5 sigma].
double wavepacket_average(std::span<const double> k, std::span<const double> transmission,
                          double k0, double sigma);

struct PacketScan {
  std::vector<double> k;                     // sample grid
  std::vector<double> averaged;              // index n - 1
  std::vector<double> pointwise;             // |t^(n)(k0)|^2, index n - 1
};

// Averages |t^(n)|^2 from the recurrence for n = 1..n_max on `samples`
// uniformly spaced points across the packet window.
PacketScan packet_scan(const PotentialCell& cell, double a, double k0, double sigma, int n_max,
                       int samples = 4001);

}  // namespace fpchain
