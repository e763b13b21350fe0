#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fpchain/scattering.hpp"

namespace fpchain {

struct DeltaSpike {
  double g = 0.0;  // V(x) = g * delta(x)
};

struct RectBarrier {
  double V0 = 0.0;  // negative for a well
  double w = 0.0;
};

struct Segment {
  double width = 0.0;
  double height = 0.0;
};

struct PiecewiseConstant {
  std::vector<Segment> segments;
};

// One unit cell. Its support starts at x = 0.
class PotentialCell {
 public:
  using Shape = std::variant<DeltaSpike, RectBarrier, PiecewiseConstant>;

  explicit PotentialCell(Shape shape);

  static PotentialCell free() { return PotentialCell(DeltaSpike{0.0}); }

  const Shape& shape() const noexcept { return shape_; }
  double support_width() const noexcept { return support_width_; }

  // True when V(x) is symmetric about the middle of the support.
  bool parity_symmetric() const;

  // Canonical text form, e.g. "delta:g=1", "barrier:V0=2,w=1",
  // "piecewise:0.5:1,0.5:-1".
  std::string describe() const;

 private:
  Shape shape_;
  double support_width_ = 0.0;
};

// Parses the text form accepted by describe(). Throws invalid_argument.
PotentialCell parse_cell(std::string_view text);

struct Lattice {
  Lattice(PotentialCell cell, double a, int n_cells);

  PotentialCell cell;
  double a;
  int n_cells;
};

// Maps left-side plane-wave coefficients (A, B) of A e^{ikx} + B e^{-ikx} to
// the right-side ones.
struct TransferMatrix {
  complex m11{1.0, 0.0};
  complex m12{0.0, 0.0};
  complex m21{0.0, 0.0};
  complex m22{1.0, 0.0};
  WaveNumber k;

  complex det() const noexcept { return m11 * m22 - m12 * m21; }
  TransferMatrix operator*(const TransferMatrix& rhs) const;
};

// max(|det - 1|, |m22 - conj(m11)|, |m21 - conj(m12)|)
double transfer_defect(const TransferMatrix& m) noexcept;

// Closed-form amplitudes of the cell placed at the origin. PiecewiseConstant
// profiles are assembled from closed-form barrier slabs with S-matrix
// composition.
ScatteringMatrix cell_smatrix(const PotentialCell& cell, WaveNumber k);

// Independent route: exact products of interface and propagation matrices.
TransferMatrix transfer_oracle(const PotentialCell& cell, WaveNumber k);

TransferMatrix displace(const TransferMatrix& m, double a);

ScatteringMatrix transfer_to_smatrix(const TransferMatrix& m);
TransferMatrix smatrix_to_transfer(const ScatteringMatrix& s);

}  // namespace fpchain
