#include "fpchain/cells.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "fpchain/chain.hpp"

namespace fpchain {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad_cell(const std::string& msg) {
  throw Error(ErrorKind::invalid_argument, "cell: " + msg);
}

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) bad_cell(std::string(what) + " must be finite");
}

// cos(q w) and sin(q w)/q for q^2 = q2, exact at q2 = 0 (linear solution).
struct SlabFunctions {
  double c;
  double s;
};

SlabFunctions slab_functions(double q2, double w) {
  if (q2 > 0.0) {
    const double q = std::sqrt(q2);
    return {std::cos(q * w), std::sin(q * w) / q};
  }
  if (q2 < 0.0) {
    const double kappa = std::sqrt(-q2);
    return {std::cosh(kappa * w), std::sinh(kappa * w) / kappa};
  }
  return {1.0, w};
}

// Barrier of height V0 on [0, w] in vacuum.
ScatteringMatrix barrier_smatrix(double V0, double w, WaveNumber wk) {
  const double k = wk.value();
  const double q2 = k * k - 2.0 * V0;
  const auto [c, s] = slab_functions(q2, w);
  const complex i{0.0, 1.0};
  const complex denom = c - i * ((k * k + q2) * s / (2.0 * k));
  const complex t = std::exp(-i * (k * w)) / denom;
  const complex l = -i * (V0 * s / k) / denom;
  const complex r = l * std::exp(-2.0 * i * (k * w));
  return {t, l, r, wk};
}

ScatteringMatrix delta_smatrix(double g, WaveNumber wk) {
  const double k = wk.value();
  const complex i{0.0, 1.0};
  const complex denom{k, g};
  const complex t = k / denom;
  const complex l = -i * g / denom;
  return {t, l, l, wk};
}

// Real 2x2 acting on (psi, psi').
using Real2x2 = std::array<double, 4>;

Real2x2 mul(const Real2x2& a, const Real2x2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Real2x2 slab_propagator(double height, double w, double k) {
  const double q2 = k * k - 2.0 * height;
  const auto [c, s] = slab_functions(q2, w);
  return {c, s, -q2 * s, c};
}

// Converts a (psi, psi') propagator across [0, W] into plane-wave form.
TransferMatrix to_plane_wave(const Real2x2& p, double W, WaveNumber wk) {
  const double k = wk.value();
  const complex i{0.0, 1.0};
  const complex ik = i * k;
  // Q(0): (A, B) -> (psi, psi') at x = 0.
  const complex q0[4] = {1.0, 1.0, ik, -ik};
  // Q(W)^{-1}: (psi, psi') at x = W -> (C, D).
  const complex em = std::exp(-ik * W);
  const complex ep = std::exp(ik * W);
  const complex qinv[4] = {0.5 * em, 0.5 * em / ik, 0.5 * ep, -0.5 * ep / ik};
  complex pq[4];
  pq[0] = p[0] * q0[0] + p[1] * q0[2];
  pq[1] = p[0] * q0[1] + p[1] * q0[3];
  pq[2] = p[2] * q0[0] + p[3] * q0[2];
  pq[3] = p[2] * q0[1] + p[3] * q0[3];
  TransferMatrix m{qinv[0] * pq[0] + qinv[1] * pq[2], qinv[0] * pq[1] + qinv[1] * pq[3],
                   qinv[2] * pq[0] + qinv[3] * pq[2], qinv[2] * pq[1] + qinv[3] * pq[3], wk};
  return m;
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(std::string_view text, const char* what) {
  const std::string s(text);
  if (s.empty()) bad_cell(std::string("missing value for ") + what);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    bad_cell(std::string("cannot parse ") + what + " from '" + s + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

PotentialCell::PotentialCell(Shape shape) : shape_(std::move(shape)) {
  support_width_ = std::visit(
      overloaded{
          [](const DeltaSpike& d) {
            check_finite(d.g, "delta strength g");
            return 0.0;
          },
          [](const RectBarrier& b) {
            check_finite(b.V0, "barrier height V0");
            if (!(b.w > 0.0) || !std::isfinite(b.w)) bad_cell("barrier width w must be > 0");
            return b.w;
          },
          [](const PiecewiseConstant& p) {
            if (p.segments.empty()) bad_cell("piecewise profile needs at least one segment");
            double total = 0.0;
            for (const auto& seg : p.segments) {
              check_finite(seg.height, "segment height");
              if (!(seg.width > 0.0) || !std::isfinite(seg.width))
                bad_cell("segment widths must be > 0");
              total += seg.width;
            }
            return total;
          },
      },
      shape_);
}

bool PotentialCell::parity_symmetric() const {
  return std::visit(overloaded{
                        [](const DeltaSpike&) { return true; },
                        [](const RectBarrier&) { return true; },
                        [](const PiecewiseConstant& p) {
                          const auto& s = p.segments;
                          for (std::size_t i = 0, j = s.size() - 1; i < j; ++i, --j)
                            if (s[i].width != s[j].width || s[i].height != s[j].height)
                              return false;
                          return true;
                        },
                    },
                    shape_);
}

std::string PotentialCell::describe() const {
  return std::visit(overloaded{
                        [](const DeltaSpike& d) { return "delta:g=" + fmt_double(d.g); },
                        [](const RectBarrier& b) {
                          return "barrier:V0=" + fmt_double(b.V0) + ",w=" + fmt_double(b.w);
                        },
                        [](const PiecewiseConstant& p) {
                          std::string out = "piecewise:";
                          for (std::size_t i = 0; i < p.segments.size(); ++i) {
                            if (i) out += ',';
                            out += fmt_double(p.segments[i].width) + ":" +
                                   fmt_double(p.segments[i].height);
                          }
                          return out;
                        },
                    },
                    shape_);
}

PotentialCell parse_cell(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    bad_cell("expected '<shape>:<parameters>', got '" + std::string(text) + "'");
  const auto kind = text.substr(0, colon);
  const auto params = text.substr(colon + 1);

  if (kind == "delta" || kind == "barrier") {
    double g = NAN, V0 = NAN, w = NAN;
    for (auto item : split(params, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        bad_cell("expected key=value, got '" + std::string(item) + "'");
      const auto key = item.substr(0, eq);
      const auto val = item.substr(eq + 1);
      if (kind == "delta" && key == "g") {
        g = parse_number(val, "g");
      } else if (kind == "barrier" && key == "V0") {
        V0 = parse_number(val, "V0");
      } else if (kind == "barrier" && key == "w") {
        w = parse_number(val, "w");
      } else {
        bad_cell("unknown parameter '" + std::string(key) + "' for " + std::string(kind));
      }
    }
    if (kind == "delta") {
      if (std::isnan(g)) bad_cell("delta requires g");
      return PotentialCell(DeltaSpike{g});
    }
    if (std::isnan(V0) || std::isnan(w)) bad_cell("barrier requires V0 and w");
    return PotentialCell(RectBarrier{V0, w});
  }
  if (kind == "piecewise") {
    PiecewiseConstant p;
    for (auto item : split(params, ',')) {
      const auto sep = item.find(':');
      if (sep == std::string_view::npos)
        bad_cell("expected width:height, got '" + std::string(item) + "'");
      p.segments.push_back(
          {parse_number(item.substr(0, sep), "width"), parse_number(item.substr(sep + 1), "height")});
    }
    return PotentialCell(std::move(p));
  }
  bad_cell("unknown shape '" + std::string(kind) + "' (expected delta, barrier or piecewise)");
}

Lattice::Lattice(PotentialCell c, double period, int n) : cell(std::move(c)), a(period), n_cells(n) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw Error(ErrorKind::invalid_argument, "lattice: period a must be > 0");
  if (a < cell.support_width())
    throw Error(ErrorKind::invalid_argument,
                "lattice: period a must be >= cell support width (cells may not overlap)");
  if (n < 1) throw Error(ErrorKind::invalid_argument, "lattice: cell count N must be >= 1");
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix& b) const {
  return {m11 * b.m11 + m12 * b.m21, m11 * b.m12 + m12 * b.m22,
          m21 * b.m11 + m22 * b.m21, m21 * b.m12 + m22 * b.m22, k};
}

double transfer_defect(const TransferMatrix& m) noexcept {
  return std::max({std::abs(m.det() - 1.0), std::abs(m.m22 - std::conj(m.m11)),
                   std::abs(m.m21 - std::conj(m.m12))});
}

ScatteringMatrix cell_smatrix(const PotentialCell& cell, WaveNumber k) {
  return std::visit(overloaded{
                        [&](const DeltaSpike& d) { return delta_smatrix(d.g, k); },
                        [&](const RectBarrier& b) { return barrier_smatrix(b.V0, b.w, k); },
                        [&](const PiecewiseConstant& p) {
                          auto acc = ScatteringMatrix::identity(k);
                          double x = 0.0;
                          for (const auto& seg : p.segments) {
                            acc = compose(acc, displace(barrier_smatrix(seg.height, seg.width, k), x));
                            x += seg.width;
                          }
                          return acc;
                        },
                    },
                    cell.shape());
}

TransferMatrix transfer_oracle(const PotentialCell& cell, WaveNumber k) {
  return std::visit(overloaded{
                        [&](const DeltaSpike& d) {
                          return to_plane_wave({1.0, 0.0, 2.0 * d.g, 1.0}, 0.0, k);
                        },
                        [&](const RectBarrier& b) {
                          return to_plane_wave(slab_propagator(b.V0, b.w, k.value()), b.w, k);
                        },
                        [&](const PiecewiseConstant& p) {
                          Real2x2 acc{1.0, 0.0, 0.0, 1.0};
                          for (const auto& seg : p.segments)
                            acc = mul(slab_propagator(seg.height, seg.width, k.value()), acc);
                          return to_plane_wave(acc, cell.support_width(), k);
                        },
                    },
                    cell.shape());
}

TransferMatrix displace(const TransferMatrix& m, double a) {
  const complex phase = std::polar(1.0, 2.0 * m.k.value() * a);
  return {m.m11, m.m12 / phase, m.m21 * phase, m.m22, m.k};
}

ScatteringMatrix transfer_to_smatrix(const TransferMatrix& m) {
  if (!(std::abs(m.m22) >= default_modulus_floor))
    throw Error(ErrorKind::singular_conversion,
                "transfer_to_smatrix: |m22| below floor (inaccessible resonance)");
  return {1.0 / m.m22, -m.m21 / m.m22, m.m12 / m.m22, m.k};
}

TransferMatrix smatrix_to_transfer(const ScatteringMatrix& s) {
  if (!(std::abs(s.t) >= default_modulus_floor))
    throw Error(ErrorKind::singular_conversion,
                "smatrix_to_transfer: |t| below floor; use S-matrix composition instead");
  return {s.t - s.r * s.l / s.t, s.r / s.t, -s.l / s.t, 1.0 / s.t, s.k};
}

}  // namespace fpchain
