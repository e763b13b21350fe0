#include "fpchain/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fpchain {

namespace {

constexpr int stencil_half = 2;

std::optional<double> derivative_or_none(const std::optional<PhaseCurve>& curve, double k) {
  if (!curve) return std::nullopt;
  return phase_derivative(*curve, k);
}

std::optional<PhaseCurve> build_curve(const std::vector<double>& grid,
                                      const std::vector<std::optional<double>>& raw,
                                      Amplitude label) {
  std::vector<PhaseSample> samples;
  samples.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!raw[i]) return std::nullopt;
    samples.push_back({grid[i], *raw[i]});
  }
  auto curve = unwrap(samples, label);
  // Adjacent stencil points must be well inside one branch.
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (std::abs(curve.values()[i] - curve.values()[i - 1]) > 0.5 * pi) {
      std::ostringstream os;
      os << "phase of " << amplitude_name(label) << " moves by more than pi/2 between k="
         << grid[i - 1] << " and k=" << grid[i] << "; reduce the finite-difference step";
      throw Error(ErrorKind::undefined_phase, os.str());
    }
  }
  return curve;
}

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::vector<double> unwrap_sequence(const std::vector<double>& raw) {
  std::vector<double> out;
  out.reserve(raw.size());
  for (double v : raw) {
    if (out.empty()) {
      out.push_back(v);
    } else {
      out.push_back(out.back() + wrap_phase(v - out.back()));
    }
  }
  return out;
}

struct ConstantFit {
  double value;
  double rms;
};

ConstantFit fit_constant(const std::vector<double>& y) {
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(y.size()))};
}

}  // namespace

std::string describe(const FiniteDifference& fd) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "central+richardson(h=%.17g)", fd.step);
  return buf;
}

double phase_derivative(const PhaseCurve& curve, double k) {
  const auto grid = curve.grid();
  const auto values = curve.values();
  const auto it = std::lower_bound(grid.begin(), grid.end(), k);
  const double match_tol = 1e-12 * std::max(1.0, std::abs(k));
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i > 0 && (i == grid.size() || std::abs(grid[i - 1] - k) < std::abs(grid[i] - k))) --i;
  if (grid.empty() || std::abs(grid[i] - k) > match_tol)
    throw Error(ErrorKind::grid, "phase_derivative: k is not a grid point of the curve");
  if (i < stencil_half || i + stencil_half >= grid.size())
    throw Error(ErrorKind::grid,
                "phase_derivative: k needs two grid neighbours on each side (edge of grid)");

  const double h = grid[i + 1] - grid[i];
  for (std::size_t j = i - 2; j < i + 2; ++j) {
    if (std::abs((grid[j + 1] - grid[j]) - h) > 1e-6 * h)
      throw Error(ErrorKind::grid, "phase_derivative: stencil spacing is not uniform");
  }
  const double d1 = (values[i + 1] - values[i - 1]) / (2.0 * h);
  const double d2 = (values[i + 2] - values[i - 2]) / (4.0 * h);
  return (4.0 * d1 - d2) / 3.0;
}

DelayRecord time_delays(const PhaseCurves& curves, WaveNumber k) {
  const double v = k.velocity();
  auto tau = [&](const std::optional<PhaseCurve>& c) -> std::optional<double> {
    const auto d = derivative_or_none(c, k.value());
    if (!d) return std::nullopt;
    return (1.0 / v) * *d;
  };
  return {k, tau(curves.t), tau(curves.l), tau(curves.r), "central+richardson"};
}

PhaseCurves stencil_curves(const PhaseSource& source, WaveNumber k, const FiniteDifference& fd) {
  if (!(fd.step > 0.0))
    throw Error(ErrorKind::invalid_argument, "finite-difference step must be > 0");
  std::vector<double> grid;
  std::vector<std::optional<double>> at, al, ar;
  for (int j = -stencil_half; j <= stencil_half; ++j) {
    const double kj = k.value() + j * fd.step;
    grid.push_back(kj);
    const auto p = source(WaveNumber(kj));
    at.push_back(p.t);
    al.push_back(p.l);
    ar.push_back(p.r);
  }
  return {build_curve(grid, at, Amplitude::t), build_curve(grid, al, Amplitude::l),
          build_curve(grid, ar, Amplitude::r)};
}

DelayRecord cell_delays(const PotentialCell& cell, WaveNumber k, double offset,
                        const FiniteDifference& fd) {
  const auto source = [&](WaveNumber kk) {
    return principal_phases(displace(cell_smatrix(cell, kk), offset));
  };
  auto rec = time_delays(stencil_curves(source, k, fd), k);
  rec.method = describe(fd);
  return rec;
}

DelayRecord chain_delays(const Lattice& lattice, WaveNumber k, const FiniteDifference& fd) {
  const auto source = [&](WaveNumber kk) {
    const auto state = chain_amplitudes(lattice, kk);
    return chain_phases(state.entries.back());
  };
  auto rec = time_delays(stencil_curves(source, k, fd), k);
  rec.method = describe(fd);
  return rec;
}

HartmanRecord traversal_time(int n_cells, double a, WaveNumber k, double tau_t) {
  return {n_cells, tau_t, n_cells * a / k.velocity() + tau_t, k.value(), a};
}

const char* band_class_name(BandClass c) noexcept {
  switch (c) {
    case BandClass::gap: return "Gap";
    case BandClass::band: return "Band";
    case BandClass::edge: return "Edge";
  }
  return "?";
}

BandVerdict band_classify(const ScatteringMatrix& cell, double a, double tol) {
  const double z = bloch_parameter(cell, a);
  const double dz = std::abs(z) - 1.0;
  BandClass cls = BandClass::band;
  if (std::abs(dz) <= tol) {
    cls = BandClass::edge;
  } else if (dz > tol) {
    cls = BandClass::gap;
  }
  return {cell.k, z, cls, tol};
}

HartmanScan hartman_scan(const PotentialCell& cell, double a, WaveNumber k, int n_max,
                         const FiniteDifference& fd, double tol) {
  if (n_max < 1) throw Error(ErrorKind::invalid_argument, "hartman_scan: N_max must be >= 1");
  const Lattice lattice(cell, a, n_max);
  HartmanScan scan{band_classify(cell_smatrix(cell, k), a, tol), {}, {}};
  if (scan.verdict.cls != BandClass::gap) {
    scan.warning = std::string("k is not in a gap (") + band_class_name(scan.verdict.cls) +
                   "); traversal time does not saturate";
  }

  // One chain per stencil point supplies every n at once.
  std::vector<ChainState> chains;
  std::vector<double> grid;
  for (int j = -stencil_half; j <= stencil_half; ++j) {
    const double kj = k.value() + j * fd.step;
    grid.push_back(kj);
    chains.push_back(chain_amplitudes(lattice, WaveNumber(kj)));
  }

  scan.records.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    std::vector<std::optional<double>> raw;
    for (const auto& c : chains) raw.push_back(c.at(n).t.phase());
    const auto curve = build_curve(grid, raw, Amplitude::t);
    if (!curve) throw Error(ErrorKind::undefined_phase, "hartman_scan: t^(n) vanished");
    const double tau = phase_derivative(*curve, k.value()) / k.velocity();
    scan.records.push_back(traversal_time(n, a, k, tau));
  }
  return scan;
}

AsymptoticFit asymptotic_phase_fit(const ChainState& chain, double tol) {
  const int n_max = chain.size();
  if (n_max < 16)
    throw Error(ErrorKind::invalid_argument, "asymptotic_phase_fit: needs at least 16 cells");
  const double a = chain.lattice.a;
  const double ka = chain.k.value() * a;
  const auto verdict = band_classify(chain.at(1).s, a, tol);
  if (verdict.cls == BandClass::band)
    throw Error(ErrorKind::band,
                "asymptotic_phase_fit: k lies in an allowed band; phases oscillate without limit");

  AsymptoticFit fit;
  fit.n_min = n_max / 2 + 1;
  fit.n_max = n_max;

  std::vector<double> ns, ar, at, ar_shifted, at_shifted;
  for (int n = fit.n_min; n <= n_max; ++n) {
    const auto p = chain_phases(chain.at(n));
    if (!p.r || !p.t)
      throw Error(ErrorKind::undefined_phase, "asymptotic_phase_fit: amplitude below floor");
    ns.push_back(n);
    ar.push_back(*p.r);
    at.push_back(*p.t);
    ar_shifted.push_back(wrap_phase(*p.r + 2.0 * n * ka));
    at_shifted.push_back(wrap_phase(*p.t + n * ka));
  }

  const auto fr = fit_constant(unwrap_sequence(ar_shifted));
  const auto ft = fit_constant(unwrap_sequence(at_shifted));
  fit.alpha = wrap_phase(fr.value);
  fit.beta = wrap_phase(ft.value);
  fit.residual = std::max(fr.rms, ft.rms);
  fit.slope_r = ls_slope(ns, unwrap_sequence(ar));
  fit.slope_t = ls_slope(ns, unwrap_sequence(at));

  for (std::size_t i = 1; i < ar.size(); ++i)
    fit.step_defect_r = std::max(fit.step_defect_r, std::abs(wrap_phase(ar[i] - ar[i - 1] + 2.0 * ka)));

  fit.l_limit = chain.at(n_max).s.l;
  fit.l_modulus_defect = std::abs(std::abs(fit.l_limit) - 1.0);
  const auto alpha_l = principal_phase(fit.l_limit);
  if (!alpha_l) throw Error(ErrorKind::undefined_phase, "asymptotic_phase_fit: l vanished");
  fit.beta_relation_residual = distance_to_half_pi_branch(0.5 * (fit.alpha + *alpha_l) - fit.beta);
  return fit;
}

double wavepacket_average(std::span<const double> k, std::span<const double> transmission,
                          double k0, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_argument, "wavepacket_average: sigma must be > 0");
  if (k.size() != transmission.size() || k.size() < 2)
    throw Error(ErrorKind::invalid_argument, "wavepacket_average: need matching samples (>= 2)");
  for (std::size_t i = 1; i < k.size(); ++i)
    if (!(k[i] > k[i - 1]))
      throw Error(ErrorKind::grid, "wavepacket_average: k samples must be strictly increasing");
  const double lo = k0 - 5.0 * sigma;
  const double hi = k0 + 5.0 * sigma;
  const double slack = 1e-12 * std::max(1.0, std::abs(k0));
  if (k.front() > lo + slack || k.back() < hi - slack)
    throw Error(ErrorKind::coverage,
                "wavepacket_average: samples do not cover [k0 - 5 sigma, k0 + 5 sigma]");

  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (k[i] < lo - slack || k[i - 1] > hi + slack) continue;
    const double h = k[i] - k[i - 1];
    const auto weight = [&](double kk) {
      const double x = (kk - k0) / sigma;
      return std::exp(-0.5 * x * x);
    };
    const double w0 = weight(k[i - 1]);
    const double w1 = weight(k[i]);
    num += 0.5 * h * (w0 * transmission[i - 1] + w1 * transmission[i]);
    den += 0.5 * h * (w0 + w1);
  }
  return num / den;
}

PacketScan packet_scan(const PotentialCell& cell, double a, double k0, double sigma, int n_max,
                       int samples) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_argument, "packet_scan: sigma must be > 0");
  if (samples < 3) throw Error(ErrorKind::invalid_argument, "packet_scan: need >= 3 samples");
  if (!(k0 - 5.0 * sigma > 0.0))
    throw Error(ErrorKind::invalid_argument, "packet_scan: packet window reaches k <= 0");
  const Lattice lattice(cell, a, n_max);

  PacketScan out;
  const double lo = k0 - 5.0 * sigma;
  const double h = 10.0 * sigma / (samples - 1);
  out.k.resize(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) out.k[static_cast<std::size_t>(i)] = lo + i * h;
  out.k.back() = k0 + 5.0 * sigma;

  // by_n[n - 1][i] = |t^(n)(k_i)|^2
  std::vector<std::vector<double>> by_n(static_cast<std::size_t>(n_max),
                                        std::vector<double>(out.k.size()));
  for (std::size_t i = 0; i < out.k.size(); ++i) {
    const auto state = chain_amplitudes(lattice, WaveNumber(out.k[i]));
    for (int n = 1; n <= n_max; ++n)
      by_n[static_cast<std::size_t>(n - 1)][i] = std::norm(state.at(n).s.t);
  }
  const auto centre = chain_amplitudes(lattice, WaveNumber(k0));
  for (int n = 1; n <= n_max; ++n) {
    out.averaged.push_back(wavepacket_average(out.k, by_n[static_cast<std::size_t>(n - 1)], k0, sigma));
    out.pointwise.push_back(std::norm(centre.at(n).s.t));
  }
  return out;
}

}  // namespace fpchain
