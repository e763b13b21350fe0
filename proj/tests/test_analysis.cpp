#include <cmath>
#include <vector>

#include "doctest.h"
#include "fpchain/analysis.hpp"
#include "oracle.hpp"

using namespace fpchain;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no fpchain::Error thrown");
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST_CASE("single delta transmission delay matches the analytic form") {
  const PotentialCell cell(DeltaSpike{1.0});
  for (double k : {0.2, 0.5, 1.0, 2.0, 5.0, 9.0}) {
    const auto d = cell_delays(cell, WaveNumber(k));
    REQUIRE(d.tau_t);
    const double ref = oracle::delta_tau_t(1.0, k);
    CHECK(std::abs(*d.tau_t - ref) < 1e-6 * std::abs(ref));
  }
  CHECK(*cell_delays(cell, WaveNumber(1.0)).tau_t == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("halving the finite-difference step cuts the error at least fourfold") {
  const PotentialCell cell(DeltaSpike{1.0});
  const double ref = oracle::delta_tau_t(1.0, 1.0);
  const double e1 = std::abs(*cell_delays(cell, WaveNumber(1.0), 0.0, {0.1}).tau_t - ref);
  const double e2 = std::abs(*cell_delays(cell, WaveNumber(1.0), 0.0, {0.05}).tau_t - ref);
  CHECK(e1 > 0.0);
  CHECK(e1 / e2 >= 4.0);
}

TEST_CASE("displacement shifts the reflection delays by +-2a/v") {
  const PotentialCell cell(RectBarrier{2.0, 0.5});
  for (double k : {0.6, 1.0, 2.4}) {
    const WaveNumber wk(k);
    const auto base = cell_delays(cell, wk);
    const auto moved = cell_delays(cell, wk, 0.75);
    CHECK(std::abs(*moved.tau_l - *base.tau_l - 2 * 0.75 / k) < 1e-6);
    CHECK(std::abs(*moved.tau_r - *base.tau_r + 2 * 0.75 / k) < 1e-6);
    CHECK(std::abs(*moved.tau_t - *base.tau_t) < 1e-9);
  }
}

TEST_CASE("free cell has no delays beyond transmission") {
  const auto d = cell_delays(PotentialCell::free(), WaveNumber(1.0));
  REQUIRE(d.tau_t);
  CHECK(*d.tau_t == 0.0);
  CHECK_FALSE(d.tau_l);
  CHECK_FALSE(d.tau_r);
  CHECK_FALSE(d.method.empty());
}

TEST_CASE("phase_derivative validates the stencil") {
  const PhaseCurve c({1.0, 1.1, 1.2, 1.3, 1.4}, {0.0, 0.1, 0.2, 0.3, 0.4}, Amplitude::t);
  CHECK(phase_derivative(c, 1.2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kind_of([&] { phase_derivative(c, 1.1); }) == ErrorKind::grid);
  CHECK(kind_of([&] { phase_derivative(c, 1.25); }) == ErrorKind::grid);
  const PhaseCurve uneven({1.0, 1.1, 1.2, 1.35, 1.4}, {0, 0, 0, 0, 0}, Amplitude::t);
  CHECK(kind_of([&] { phase_derivative(uneven, 1.2); }) == ErrorKind::grid);
  CHECK(kind_of([] { cell_delays(PotentialCell::free(), WaveNumber(1.0), 0.0, {0.0}); }) ==
        ErrorKind::invalid_argument);
}

TEST_CASE("band classification") {
  const auto at = [](double k) {
    return band_classify(cell_smatrix(PotentialCell(DeltaSpike{5.0}), WaveNumber(k)), 1.0).cls;
  };
  CHECK(at(1.0) == BandClass::gap);
  CHECK(at(2.9) == BandClass::band);
  CHECK(at(pi) == BandClass::edge);
  CHECK(at(3.5) == BandClass::gap);
  CHECK(std::string(band_class_name(BandClass::edge)) == "Edge");
  CHECK(std::string(band_class_name(BandClass::gap)) == "Gap");
  CHECK(std::string(band_class_name(BandClass::band)) == "Band");
  CHECK(band_classify(cell_smatrix(PotentialCell::free(), WaveNumber(1.0)), 1.0).cls ==
        BandClass::band);
}

TEST_CASE("Hartman scan: free cell traversal is plain flight") {
  const auto scan = hartman_scan(PotentialCell::free(), 1.0, WaveNumber(2.0), 8);
  CHECK_FALSE(scan.warning.empty());
  for (const auto& r : scan.records) CHECK(r.traversal == doctest::Approx(r.n_cells * 1.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("Hartman scan saturates in a gap and warns in a band") {
  const PotentialCell cell(DeltaSpike{5.0});
  const auto gap = hartman_scan(cell, 1.0, WaveNumber(1.0), 32);
  CHECK(gap.warning.empty());
  CHECK(gap.verdict.cls == BandClass::gap);
  REQUIRE(gap.records.size() == 32);
  CHECK(std::abs(gap.records[31].traversal - gap.records[30].traversal) < 1e-3);
  for (std::size_t i = 1; i < gap.records.size(); ++i)
    CHECK(gap.records[i].traversal / (i + 1) < gap.records[i - 1].traversal / i);

  const auto band = hartman_scan(cell, 1.0, WaveNumber(2.9), 8);
  CHECK_FALSE(band.warning.empty());
}

TEST_CASE("asymptotic phase fit in a gap") {
  const auto chain = chain_amplitudes(Lattice(PotentialCell(DeltaSpike{5.0}), 1.0, 64), WaveNumber(1.0));
  const auto fit = asymptotic_phase_fit(chain);
  CHECK(fit.slope_r == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(fit.slope_t == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(fit.residual < 1e-6);
  CHECK(fit.l_modulus_defect < 1e-10);
  CHECK(fit.beta_relation_residual < 1e-6);
  CHECK(fit.n_min == 33);
  CHECK(fit.n_max == 64);
}

TEST_CASE("asymptotic phase fit refuses band points and short chains") {
  const auto band = chain_amplitudes(Lattice(PotentialCell(DeltaSpike{5.0}), 1.0, 64), WaveNumber(2.9));
  CHECK(kind_of([&] { asymptotic_phase_fit(band); }) == ErrorKind::band);
  const auto short_chain =
      chain_amplitudes(Lattice(PotentialCell(DeltaSpike{5.0}), 1.0, 8), WaveNumber(1.0));
  CHECK(kind_of([&] { asymptotic_phase_fit(short_chain); }) == ErrorKind::invalid_argument);
}

TEST_CASE("composite chains satisfy the phase relation") {
  const PotentialCell cell(PiecewiseConstant{{{0.2, 1.5}, {0.3, -0.5}}});
  for (double k : {0.4, 1.1, 2.3, 5.0}) {
    const auto chain = chain_amplitudes(Lattice(cell, 0.9, 40), WaveNumber(k));
    for (int n = 1; n <= 40; ++n) {
      const auto res = phase_relation_residual(chain.at(n).s);
      if (res) CHECK(*res < 1e-9);
    }
  }
}

TEST_CASE("wave-packet average") {
  std::vector<double> ks, ones;
  for (int i = 0; i <= 200; ++i) {
    ks.push_back(0.9 + 0.2 * i / 200.0);
    ones.push_back(1.0);
  }
  CHECK(wavepacket_average(ks, ones, 1.0, 0.02) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kind_of([&] { wavepacket_average(ks, ones, 1.0, 0.05); }) == ErrorKind::coverage);
  CHECK(kind_of([&] { wavepacket_average(ks, ones, 1.0, 0.0); }) == ErrorKind::invalid_argument);

  const auto free_scan = packet_scan(PotentialCell::free(), 1.0, 2.0, 0.02, 16, 401);
  for (double v : free_scan.averaged) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const auto gap_scan = packet_scan(PotentialCell(DeltaSpike{5.0}), 1.0, 1.0, 0.02, 64, 401);
  CHECK(gap_scan.averaged[63] < 1e-6);
  CHECK(gap_scan.pointwise[0] == doctest::Approx(std::norm(cell_smatrix(PotentialCell(DeltaSpike{5.0}), WaveNumber(1.0)).t)));
}

TEST_CASE("traversal time is flight time plus delay") {
  CHECK(traversal_time(4, 1.5, WaveNumber(2.0), 0.0).traversal == 3.0);
  CHECK(traversal_time(4, 1.5, WaveNumber(2.0), -3.0).traversal == 0.0);
}

TEST_CASE("gap-point traversal time: below free flight, geometric saturation") {
  const auto scan = hartman_scan(PotentialCell(DeltaSpike{5.0}), 1.0, WaveNumber(1.0), 32);
  const auto& rec = scan.records;
  CHECK(rec[19].traversal < 20.0);
  // Increments shrink until they reach the finite-difference rounding floor.
  const double floor = 1e-9;
  for (std::size_t n = 4; n + 1 < rec.size(); ++n) {
    const double inc = std::abs(rec[n].traversal - rec[n - 1].traversal);
    const double prev = std::abs(rec[n - 1].traversal - rec[n - 2].traversal);
    if (prev > floor) CHECK(inc < prev);
    else CHECK(inc < floor);
  }
}

TEST_CASE("gap transmission decreases monotonically with N") {
  for (double k : {0.5, 1.0, 1.8, 3.6}) {
    const auto s = cell_smatrix(PotentialCell(DeltaSpike{5.0}), WaveNumber(k));
    REQUIRE(band_classify(s, 1.0).cls == BandClass::gap);
    const auto chain = chain_amplitudes(Lattice(PotentialCell(DeltaSpike{5.0}), 1.0, 64), WaveNumber(k));
    for (int n = 2; n <= 64; ++n) CHECK(chain.at(n).t.log_abs() < chain.at(n - 1).t.log_abs());
  }
}

TEST_CASE("reflection phase steps converge in the gap") {
  const auto chain = chain_amplitudes(Lattice(PotentialCell(DeltaSpike{5.0}), 1.0, 64), WaveNumber(1.0));
  CHECK(asymptotic_phase_fit(chain).step_defect_r < 1e-10);
}
