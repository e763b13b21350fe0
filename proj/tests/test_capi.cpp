// Exercises the shared library through its C interface only.
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "fpchain/fpchain.h"

namespace {

struct CellHandle {
  fpc_cell* p = nullptr;
  ~CellHandle() { fpc_cell_destroy(p); }
};
struct ChainHandle {
  fpc_chain* p = nullptr;
  ~ChainHandle() { fpc_chain_destroy(p); }
};

double norm_t(const fpc_smatrix& s) { return s.t_re * s.t_re + s.t_im * s.t_im; }

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(fpc_version()) == "0.1.0");
  CHECK(std::string(fpc_status_name(FPC_OK)) == "ok");
  CHECK(std::string(fpc_status_name(FPC_ERR_BAND)).size() > 0);
}

TEST_CASE("cell creation and errors") {
  CellHandle c;
  REQUIRE(fpc_cell_parse("delta:g=1", &c.p) == FPC_OK);
  fpc_smatrix s;
  REQUIRE(fpc_cell_smatrix(c.p, 1.0, &s) == FPC_OK);
  CHECK(norm_t(s) == doctest::Approx(0.5).epsilon(1e-15));

  fpc_cell* bad = nullptr;
  CHECK(fpc_cell_parse("bogus", &bad) == FPC_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::string(fpc_last_error()).find("bogus") != std::string::npos);
  CHECK(fpc_cell_parse(nullptr, &bad) == FPC_ERR_INVALID_ARGUMENT);
  CHECK(fpc_cell_smatrix(c.p, 0.0, &s) == FPC_ERR_INVALID_ARGUMENT);
  CHECK(fpc_cell_smatrix(nullptr, 1.0, &s) == FPC_ERR_INVALID_ARGUMENT);
  CHECK(fpc_cell_create_barrier(1.0, -1.0, &bad) == FPC_ERR_INVALID_ARGUMENT);
  fpc_cell_destroy(nullptr);
}

TEST_CASE("describe reports the required size") {
  CellHandle c;
  const double w[] = {0.5, 0.25};
  const double h[] = {1.0, -2.0};
  REQUIRE(fpc_cell_create_piecewise(w, h, 2, &c.p) == FPC_OK);
  size_t need = 0;
  REQUIRE(fpc_cell_describe(c.p, nullptr, 0, &need) == FPC_OK);
  CHECK(need == std::strlen("piecewise:0.5:1,0.25:-2"));
  std::vector<char> buf(need + 1);
  REQUIRE(fpc_cell_describe(c.p, buf.data(), buf.size(), &need) == FPC_OK);
  CHECK(std::string(buf.data()) == "piecewise:0.5:1,0.25:-2");
  char small[4];
  REQUIRE(fpc_cell_describe(c.p, small, sizeof small, &need) == FPC_OK);
  CHECK(std::string(small) == "pie");
  double width = 0;
  fpc_cell_support_width(c.p, &width);
  CHECK(width == 0.75);
}

TEST_CASE("closed form and oracle routes agree") {
  CellHandle c;
  REQUIRE(fpc_cell_create_barrier(2.0, 0.5, &c.p) == FPC_OK);
  for (double k : {0.3, 1.0, 4.0}) {
    fpc_smatrix a, b;
    REQUIRE(fpc_cell_smatrix(c.p, k, &a) == FPC_OK);
    REQUIRE(fpc_cell_smatrix_oracle(c.p, k, &b) == FPC_OK);
    CHECK(std::abs(a.t_re - b.t_re) < 1e-12);
    CHECK(std::abs(a.l_im - b.l_im) < 1e-12);
    double d = 1;
    fpc_unitarity_defect(&a, &d);
    CHECK(d < 1e-14);
  }
}

TEST_CASE("displace and compose") {
  CellHandle c;
  REQUIRE(fpc_cell_create_delta(1.0, &c.p) == FPC_OK);
  fpc_smatrix s, moved, back, both;
  fpc_cell_smatrix(c.p, 1.3, &s);
  REQUIRE(fpc_displace(&s, 0.7, &moved) == FPC_OK);
  REQUIRE(fpc_displace(&moved, -0.7, &back) == FPC_OK);
  CHECK(std::abs(back.l_re - s.l_re) < 1e-15);
  CHECK(moved.t_re == s.t_re);
  REQUIRE(fpc_compose(&s, &moved, &both) == FPC_OK);

  ChainHandle ch;
  REQUIRE(fpc_chain_compute(c.p, 0.7, 2, 1.3, &ch.p) == FPC_OK);
  fpc_smatrix two;
  REQUIRE(fpc_chain_entry(ch.p, 2, &two) == FPC_OK);
  CHECK(std::abs(two.r_im - both.r_im) < 1e-13);

  fpc_smatrix other = s;
  other.k = 2.0;
  CHECK(fpc_compose(&s, &other, &both) == FPC_ERR_INVALID_ARGUMENT);
  const fpc_smatrix mirror_l{1.0, 0, 0, 0, 0, 1, 0};
  const fpc_smatrix mirror_r{1.0, 0, 0, 1, 0, 0, 0};
  CHECK(fpc_compose(&mirror_l, &mirror_r, &both) == FPC_ERR_RESONANCE);
}

TEST_CASE("phases and the phase relation") {
  const fpc_smatrix id{1.0, 1, 0, 0, 0, 0, 0};
  fpc_phases p;
  REQUIRE(fpc_principal_phases(&id, &p) == FPC_OK);
  CHECK(p.has_t == 1);
  CHECK(p.has_l == 0);
  double res = 0;
  CHECK(fpc_phase_relation_residual(&id, &res) == FPC_ERR_UNDEFINED_PHASE);
}

TEST_CASE("chains") {
  CellHandle c;
  REQUIRE(fpc_cell_create_delta(5.0, &c.p) == FPC_OK);
  ChainHandle right, left;
  REQUIRE(fpc_chain_compute(c.p, 1.0, 64, 1.0, &right.p) == FPC_OK);
  REQUIRE(fpc_chain_compute_addleft(c.p, 1.0, 64, 1.0, &left.p) == FPC_OK);
  int n = 0;
  fpc_chain_size(right.p, &n);
  CHECK(n == 64);
  double log_t = 0, cheb = 0;
  REQUIRE(fpc_chain_log_abs_t(right.p, 64, &log_t) == FPC_OK);
  REQUIRE(fpc_chebyshev_transmission(c.p, 1.0, 64, 1.0, &cheb) == FPC_OK);
  CHECK(std::exp(2 * log_t) == doctest::Approx(cheb).epsilon(1e-10));
  fpc_smatrix a, b;
  fpc_chain_entry(right.p, 20, &a);
  fpc_chain_entry(left.p, 20, &b);
  CHECK(std::abs(a.r_re - b.r_re) < 1e-10);
  CHECK(fpc_chain_entry(right.p, 0, &a) == FPC_ERR_INVALID_ARGUMENT);
  CHECK(fpc_chain_entry(right.p, 65, &a) == FPC_ERR_INVALID_ARGUMENT);
  fpc_chain* bad = nullptr;
  CHECK(fpc_chain_compute(c.p, 1.0, 0, 1.0, &bad) == FPC_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
}

TEST_CASE("bands, Chebyshev and delays") {
  CellHandle c;
  REQUIRE(fpc_cell_create_delta(5.0, &c.p) == FPC_OK);
  double z = 0, u = 0;
  REQUIRE(fpc_bloch_parameter(c.p, 1.0, 1.0, &z) == FPC_OK);
  CHECK(z == doctest::Approx(4.7476572299076222507).epsilon(1e-14));
  REQUIRE(fpc_chebyshev_u(3, 1.0, &u) == FPC_OK);
  CHECK(u == doctest::Approx(4.0));
  CHECK(fpc_chebyshev_u(-1, 1.0, &u) == FPC_ERR_INVALID_ARGUMENT);
  fpc_band_verdict v;
  REQUIRE(fpc_band_classify(c.p, 1.0, 1.0, 0.0, &v) == FPC_OK);
  CHECK(v.cls == FPC_GAP);
  CHECK(v.edge_tolerance == 1e-9);
  fpc_band_classify(c.p, 1.0, M_PI, 0.0, &v);
  CHECK(v.cls == FPC_EDGE);

  CellHandle d;
  fpc_cell_create_delta(1.0, &d.p);
  fpc_delays base, moved;
  REQUIRE(fpc_time_delays(d.p, 1.0, 1, 1.0, 0.0, 0.0, &base) == FPC_OK);
  CHECK(base.tau_t == doctest::Approx(0.5).epsilon(1e-9));
  REQUIRE(fpc_time_delays(d.p, 1.0, 1, 1.0, 1.0, 0.0, &moved) == FPC_OK);
  CHECK(std::abs(moved.tau_l - base.tau_l - 2.0) < 1e-6);
  CHECK(std::abs(moved.tau_r - base.tau_r + 2.0) < 1e-6);
}

TEST_CASE("Hartman scan, fit and packets") {
  CellHandle c;
  REQUIRE(fpc_cell_create_delta(5.0, &c.p) == FPC_OK);
  std::vector<fpc_hartman_record> rec(32);
  int in_gap = 0;
  REQUIRE(fpc_hartman_scan(c.p, 1.0, 1.0, 32, 0.0, 0.0, rec.data(), &in_gap) == FPC_OK);
  CHECK(in_gap == 1);
  CHECK(std::abs(rec[31].traversal - rec[30].traversal) < 1e-3);

  fpc_asymptotic_fit fit;
  REQUIRE(fpc_fit_asymptotics(c.p, 1.0, 1.0, 64, 0.0, &fit) == FPC_OK);
  CHECK(fit.slope_r == doctest::Approx(-2.0));
  CHECK(fpc_fit_asymptotics(c.p, 1.0, 2.9, 64, 0.0, &fit) == FPC_ERR_BAND);

  std::vector<double> avg(16), pw(16);
  REQUIRE(fpc_packet_scan(c.p, 1.0, 1.0, 0.02, 16, 401, avg.data(), pw.data()) == FPC_OK);
  CHECK(avg[15] < 1e-6);
  const double ks[] = {0.9, 1.0, 1.1};
  const double ts[] = {1.0, 1.0, 1.0};
  double out = 0;
  CHECK(fpc_wavepacket_average(ks, ts, 3, 1.0, 0.05, &out) == FPC_ERR_COVERAGE);
  const double unsorted[] = {0.9, 1.1, 1.0};
  CHECK(fpc_wavepacket_average(unsorted, ts, 3, 1.0, 0.01, &out) == FPC_ERR_GRID);
}
