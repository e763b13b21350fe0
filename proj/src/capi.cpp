// extern "C" surface over the C++ core. Exceptions stop here and become
// status codes plus a thread-local message.

#include "fpchain/fpchain.h"

#include <cstring>
#include <new>
#include <string>

#include "fpchain/analysis.hpp"
#include "fpchain/chain.hpp"
#include "fpchain/version.hpp"

struct fpc_cell {
  fpchain::PotentialCell cell;
};

struct fpc_chain {
  fpchain::ChainState state;
};

namespace {

thread_local std::string last_error;

fpc_status to_status(fpchain::ErrorKind kind) {
  using fpchain::ErrorKind;
  switch (kind) {
    case ErrorKind::invalid_argument: return FPC_ERR_INVALID_ARGUMENT;
    case ErrorKind::undefined_phase: return FPC_ERR_UNDEFINED_PHASE;
    case ErrorKind::ambiguous_branch: return FPC_ERR_AMBIGUOUS_BRANCH;
    case ErrorKind::singular_conversion: return FPC_ERR_SINGULAR;
    case ErrorKind::resonance_divergence: return FPC_ERR_RESONANCE;
    case ErrorKind::grid: return FPC_ERR_GRID;
    case ErrorKind::coverage: return FPC_ERR_COVERAGE;
    case ErrorKind::band: return FPC_ERR_BAND;
  }
  return FPC_ERR_INTERNAL;
}

template <class F>
fpc_status guarded(F&& body) noexcept {
  try {
    body();
    last_error.clear();
    return FPC_OK;
  } catch (const fpchain::Error& e) {
    last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FPC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FPC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return FPC_ERR_INTERNAL;
  }
}

template <class... Ptrs>
void require(const Ptrs*... ptrs) {
  if (((ptrs == nullptr) || ...))
    throw fpchain::Error(fpchain::ErrorKind::invalid_argument, "null pointer argument");
}

fpchain::ScatteringMatrix from_c(const fpc_smatrix& s) {
  return {{s.t_re, s.t_im}, {s.l_re, s.l_im}, {s.r_re, s.r_im}, fpchain::WaveNumber(s.k)};
}

fpc_smatrix to_c(const fpchain::ScatteringMatrix& s) {
  return {s.k.value(), s.t.real(), s.t.imag(), s.l.real(), s.l.imag(), s.r.real(), s.r.imag()};
}

fpc_phases to_c(const fpchain::PrincipalPhases& p) {
  return {p.t.value_or(0.0), p.l.value_or(0.0), p.r.value_or(0.0),
          p.t.has_value(), p.l.has_value(), p.r.has_value()};
}

fpchain::FiniteDifference fd_from(double step) {
  fpchain::FiniteDifference fd;
  if (step > 0.0) fd.step = step;
  return fd;
}

double tol_or_default(double tol) {
  return tol > 0.0 ? tol : fpchain::default_edge_tolerance;
}

const fpchain::ChainEntry& entry(const fpc_chain* chain, int n) {
  if (n < 1 || n > chain->state.size())
    throw fpchain::Error(fpchain::ErrorKind::invalid_argument, "chain index out of range");
  return chain->state.at(n);
}

fpc_status make_cell(fpchain::PotentialCell::Shape shape, fpc_cell** out) {
  return guarded([&] {
    require(out);
    *out = new fpc_cell{fpchain::PotentialCell(std::move(shape))};
  });
}

}  // namespace

extern "C" {

const char* fpc_version(void) { return fpchain::version; }

const char* fpc_last_error(void) { return last_error.c_str(); }

const char* fpc_status_name(fpc_status status) {
  switch (status) {
    case FPC_OK: return "ok";
    case FPC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FPC_ERR_UNDEFINED_PHASE: return "undefined phase";
    case FPC_ERR_AMBIGUOUS_BRANCH: return "ambiguous branch";
    case FPC_ERR_SINGULAR: return "singular conversion";
    case FPC_ERR_RESONANCE: return "resonance divergence";
    case FPC_ERR_GRID: return "grid error";
    case FPC_ERR_COVERAGE: return "coverage error";
    case FPC_ERR_BAND: return "allowed band";
    case FPC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

fpc_status fpc_cell_parse(const char* text, fpc_cell** out) {
  return guarded([&] {
    require(text, out);
    *out = new fpc_cell{fpchain::parse_cell(text)};
  });
}

fpc_status fpc_cell_create_delta(double g, fpc_cell** out) {
  return make_cell(fpchain::DeltaSpike{g}, out);
}

fpc_status fpc_cell_create_barrier(double V0, double w, fpc_cell** out) {
  return make_cell(fpchain::RectBarrier{V0, w}, out);
}

fpc_status fpc_cell_create_piecewise(const double* widths, const double* heights, size_t count,
                                     fpc_cell** out) {
  return guarded([&] {
    require(widths, heights, out);
    fpchain::PiecewiseConstant p;
    for (size_t i = 0; i < count; ++i) p.segments.push_back({widths[i], heights[i]});
    *out = new fpc_cell{fpchain::PotentialCell(std::move(p))};
  });
}

void fpc_cell_destroy(fpc_cell* cell) { delete cell; }

fpc_status fpc_cell_support_width(const fpc_cell* cell, double* out) {
  return guarded([&] {
    require(cell, out);
    *out = cell->cell.support_width();
  });
}

fpc_status fpc_cell_describe(const fpc_cell* cell, char* buffer, size_t capacity,
                             size_t* required) {
  return guarded([&] {
    require(cell);
    const std::string text = cell->cell.describe();
    if (required) *required = text.size();
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

fpc_status fpc_cell_smatrix(const fpc_cell* cell, double k, fpc_smatrix* out) {
  return guarded([&] {
    require(cell, out);
    *out = to_c(fpchain::cell_smatrix(cell->cell, fpchain::WaveNumber(k)));
  });
}

fpc_status fpc_cell_smatrix_oracle(const fpc_cell* cell, double k, fpc_smatrix* out) {
  return guarded([&] {
    require(cell, out);
    *out = to_c(fpchain::transfer_to_smatrix(
        fpchain::transfer_oracle(cell->cell, fpchain::WaveNumber(k))));
  });
}

fpc_status fpc_displace(const fpc_smatrix* s, double a, fpc_smatrix* out) {
  return guarded([&] {
    require(s, out);
    *out = to_c(fpchain::displace(from_c(*s), a));
  });
}

fpc_status fpc_compose(const fpc_smatrix* left, const fpc_smatrix* right, fpc_smatrix* out) {
  return guarded([&] {
    require(left, right, out);
    *out = to_c(fpchain::compose(from_c(*left), from_c(*right)));
  });
}

fpc_status fpc_unitarity_defect(const fpc_smatrix* s, double* out) {
  return guarded([&] {
    require(s, out);
    *out = fpchain::unitarity_defect(from_c(*s));
  });
}

fpc_status fpc_principal_phases(const fpc_smatrix* s, fpc_phases* out) {
  return guarded([&] {
    require(s, out);
    *out = to_c(fpchain::principal_phases(from_c(*s)));
  });
}

fpc_status fpc_phase_relation_residual(const fpc_smatrix* s, double* out) {
  return guarded([&] {
    require(s, out);
    const auto res = fpchain::phase_relation_residual(from_c(*s));
    if (!res)
      throw fpchain::Error(fpchain::ErrorKind::undefined_phase,
                           "phase relation: an amplitude is below the modulus floor");
    *out = *res;
  });
}

fpc_status fpc_chain_compute(const fpc_cell* cell, double a, int n_cells, double k,
                             fpc_chain** out) {
  return guarded([&] {
    require(cell, out);
    const fpchain::Lattice lattice(cell->cell, a, n_cells);
    *out = new fpc_chain{fpchain::chain_amplitudes(lattice, fpchain::WaveNumber(k))};
  });
}

fpc_status fpc_chain_compute_addleft(const fpc_cell* cell, double a, int n_cells, double k,
                                     fpc_chain** out) {
  return guarded([&] {
    require(cell, out);
    const fpchain::Lattice lattice(cell->cell, a, n_cells);
    *out = new fpc_chain{fpchain::chain_amplitudes_addleft(lattice, fpchain::WaveNumber(k))};
  });
}

void fpc_chain_destroy(fpc_chain* chain) { delete chain; }

fpc_status fpc_chain_size(const fpc_chain* chain, int* out) {
  return guarded([&] {
    require(chain, out);
    *out = chain->state.size();
  });
}

fpc_status fpc_chain_entry(const fpc_chain* chain, int n, fpc_smatrix* out) {
  return guarded([&] {
    require(chain, out);
    *out = to_c(entry(chain, n).s);
  });
}

fpc_status fpc_chain_phases(const fpc_chain* chain, int n, fpc_phases* out) {
  return guarded([&] {
    require(chain, out);
    *out = to_c(fpchain::chain_phases(entry(chain, n)));
  });
}

fpc_status fpc_chain_log_abs_t(const fpc_chain* chain, int n, double* out) {
  return guarded([&] {
    require(chain, out);
    *out = entry(chain, n).t.log_abs();
  });
}

fpc_status fpc_bloch_parameter(const fpc_cell* cell, double a, double k, double* out) {
  return guarded([&] {
    require(cell, out);
    *out = fpchain::bloch_parameter(fpchain::cell_smatrix(cell->cell, fpchain::WaveNumber(k)), a);
  });
}

fpc_status fpc_chebyshev_u(int n, double z, double* out) {
  return guarded([&] {
    require(out);
    *out = fpchain::chebyshev_U(n, z);
  });
}

fpc_status fpc_chebyshev_transmission(const fpc_cell* cell, double a, int n_cells, double k,
                                      double* out) {
  return guarded([&] {
    require(cell, out);
    *out = fpchain::chebyshev_transmission(
        fpchain::cell_smatrix(cell->cell, fpchain::WaveNumber(k)), a, n_cells);
  });
}

fpc_status fpc_band_classify(const fpc_cell* cell, double a, double k, double tol,
                             fpc_band_verdict* out) {
  return guarded([&] {
    require(cell, out);
    const auto v = fpchain::band_classify(
        fpchain::cell_smatrix(cell->cell, fpchain::WaveNumber(k)), a, tol_or_default(tol));
    fpc_band_class cls = FPC_BAND;
    if (v.cls == fpchain::BandClass::gap) cls = FPC_GAP;
    if (v.cls == fpchain::BandClass::edge) cls = FPC_EDGE;
    *out = {v.k.value(), v.z, cls, v.edge_tolerance};
  });
}

fpc_status fpc_time_delays(const fpc_cell* cell, double a, int n_cells, double k, double offset,
                           double fd_step, fpc_delays* out) {
  return guarded([&] {
    require(cell, out);
    const fpchain::WaveNumber wk(k);
    const auto fd = fd_from(fd_step);
    fpchain::DelayRecord rec = [&] {
      if (n_cells == 1) return fpchain::cell_delays(cell->cell, wk, offset, fd);
      const fpchain::Lattice lattice(cell->cell, a, n_cells);
      const auto source = [&](fpchain::WaveNumber kk) {
        auto s = fpchain::chain_amplitudes(lattice, kk).entries.back();
        s.s = fpchain::displace(s.s, offset);
        return fpchain::chain_phases(s);
      };
      return fpchain::time_delays(fpchain::stencil_curves(source, wk, fd), wk);
    }();
    *out = {rec.tau_t.value_or(0.0), rec.tau_l.value_or(0.0), rec.tau_r.value_or(0.0),
            rec.tau_t.has_value(), rec.tau_l.has_value(), rec.tau_r.has_value()};
  });
}

fpc_status fpc_hartman_scan(const fpc_cell* cell, double a, double k, int n_max, double fd_step,
                            double tol, fpc_hartman_record* records, int* in_gap) {
  return guarded([&] {
    require(cell, records);
    const auto scan = fpchain::hartman_scan(cell->cell, a, fpchain::WaveNumber(k), n_max,
                                            fd_from(fd_step), tol_or_default(tol));
    for (std::size_t i = 0; i < scan.records.size(); ++i)
      records[i] = {scan.records[i].n_cells, scan.records[i].tau_t, scan.records[i].traversal};
    if (in_gap) *in_gap = scan.verdict.cls == fpchain::BandClass::gap;
  });
}

fpc_status fpc_fit_asymptotics(const fpc_cell* cell, double a, double k, int n_max, double tol,
                              fpc_asymptotic_fit* out) {
  return guarded([&] {
    require(cell, out);
    const fpchain::Lattice lattice(cell->cell, a, n_max);
    const auto fit = fpchain::asymptotic_phase_fit(
        fpchain::chain_amplitudes(lattice, fpchain::WaveNumber(k)), tol_or_default(tol));
    *out = {fit.alpha,     fit.beta,  fit.slope_r,          fit.slope_t,
            fit.residual,  fit.n_min, fit.n_max,            fit.l_modulus_defect,
            fit.step_defect_r, fit.beta_relation_residual};
  });
}

fpc_status fpc_wavepacket_average(const double* k, const double* transmission, size_t count,
                                  double k0, double sigma, double* out) {
  return guarded([&] {
    require(k, transmission, out);
    *out = fpchain::wavepacket_average({k, count}, {transmission, count}, k0, sigma);
  });
}

fpc_status fpc_packet_scan(const fpc_cell* cell, double a, double k0, double sigma, int n_max,
                           int samples, double* averaged, double* pointwise) {
  return guarded([&] {
    require(cell, averaged, pointwise);
    const auto scan =
        fpchain::packet_scan(cell->cell, a, k0, sigma, n_max, samples > 0 ? samples : 4001);
    std::copy(scan.averaged.begin(), scan.averaged.end(), averaged);
    std::copy(scan.pointwise.begin(), scan.pointwise.end(), pointwise);
  });
}

}  // extern "C"
