#include "commands.hpp"

#include <cmath>
#include <memory>
#include <optional>

#include "fpchain/fpchain.h"

namespace fpchain::cli {

namespace {

struct CellDeleter {
  void operator()(fpc_cell* c) const { fpc_cell_destroy(c); }
};
struct ChainDeleter {
  void operator()(fpc_chain* c) const { fpc_chain_destroy(c); }
};
using Cell = std::unique_ptr<fpc_cell, CellDeleter>;
using Chain = std::unique_ptr<fpc_chain, ChainDeleter>;

void check(fpc_status st, const std::string& what) {
  if (st == FPC_OK) return;
  throw ComputationError(what + ": " + fpc_status_name(st) + ": " + fpc_last_error(),
                         st == FPC_ERR_INVALID_ARGUMENT);
}

Cell make_cell(const std::string& text) {
  fpc_cell* raw = nullptr;
  check(fpc_cell_parse(text.c_str(), &raw), "cell");
  return Cell(raw);
}

Chain make_chain(const fpc_cell* cell, double a, int n, double k) {
  fpc_chain* raw = nullptr;
  check(fpc_chain_compute(cell, a, n, k, &raw), "chain");
  return Chain(raw);
}

Value phase_value(double v, int has) { return has ? Value(v) : Value(std::monostate{}); }

double norm_t(const fpc_smatrix& s) { return s.t_re * s.t_re + s.t_im * s.t_im; }

double defect(const fpc_smatrix& s) {
  double d = 0.0;
  check(fpc_unitarity_defect(&s, &d), "unitarity");
  return d;
}

std::string fmt(double x) { return format_double(x); }

RunResult run_cell(const ExperimentConfig& cfg) {
  const Cell cell = make_cell(cfg.cell);
  RunResult out;
  out.table.columns = {"k",    "t_re", "t_im",    "l_re",    "l_im",    "r_re",
                       "r_im", "T",    "alpha_t", "alpha_l", "alpha_r", "unitarity_defect"};
  for (double k : cfg.grid->points()) {
    fpc_smatrix s;
    check(fpc_cell_smatrix(cell.get(), k, &s), "cell_smatrix");
    fpc_phases p;
    check(fpc_principal_phases(&s, &p), "phases");
    const double d = defect(s);
    if (d > unitarity_threshold)
      out.violations.push_back("k=" + fmt(k) + ": unitarity defect " + fmt(d));
    out.table.add_row({k, s.t_re, s.t_im, s.l_re, s.l_im, s.r_re, s.r_im, norm_t(s),
                       phase_value(p.alpha_t, p.has_t), phase_value(p.alpha_l, p.has_l),
                       phase_value(p.alpha_r, p.has_r), d});
  }
  return out;
}

void chain_row(RunResult& out, const fpc_cell* cell, const fpc_chain* chain, double a, int n,
               double k) {
  fpc_smatrix s;
  check(fpc_chain_entry(chain, n, &s), "chain entry");
  fpc_phases p;
  check(fpc_chain_phases(chain, n, &p), "chain phases");
  double log_t = 0.0;
  check(fpc_chain_log_abs_t(chain, n, &log_t), "chain log|t|");
  double cheb = 0.0;
  check(fpc_chebyshev_transmission(cell, a, n, k, &cheb), "chebyshev transmission");
  const double rec = norm_t(s);
  const double diff = std::abs(rec - cheb);
  const double d = defect(s);
  const std::string where = "N=" + std::to_string(n) + " k=" + fmt(k);
  if (d > unitarity_threshold) out.violations.push_back(where + ": unitarity defect " + fmt(d));
  if (!(diff <= dual_path_threshold))
    out.violations.push_back(where + ": recurrence and Chebyshev differ by " + fmt(diff));
  out.table.add_row({static_cast<long long>(n), k, rec, cheb, diff,
                     phase_value(p.alpha_t, p.has_t), phase_value(p.alpha_l, p.has_l),
                     phase_value(p.alpha_r, p.has_r), log_t, d});
}

RunResult run_chain(const ExperimentConfig& cfg) {
  const Cell cell = make_cell(cfg.cell);
  RunResult out;
  out.table.columns = {"N",       "k",       "T_recurrence", "T_chebyshev", "abs_diff", "alpha_t",
                       "alpha_l", "alpha_r", "log_abs_t",    "unitarity_defect"};
  if (cfg.k) {
    const Chain chain = make_chain(cell.get(), cfg.period, cfg.n_max, *cfg.k);
    for (int n = 1; n <= cfg.n_max; ++n) chain_row(out, cell.get(), chain.get(), cfg.period, n, *cfg.k);
  } else {
    for (double k : cfg.grid->points()) {
      const Chain chain = make_chain(cell.get(), cfg.period, cfg.n_cells, k);
      chain_row(out, cell.get(), chain.get(), cfg.period, cfg.n_cells, k);
    }
  }
  return out;
}

const char* class_name(fpc_band_class c) {
  switch (c) {
    case FPC_GAP: return "Gap";
    case FPC_EDGE: return "Edge";
    case FPC_BAND: return "Band";
  }
  return "?";
}

RunResult run_bands(const ExperimentConfig& cfg) {
  const Cell cell = make_cell(cfg.cell);
  RunResult out;
  out.table.columns = {"k", "z", "abs_z", "verdict", "T_N_max"};
  for (double k : cfg.grid->points()) {
    fpc_band_verdict v;
    check(fpc_band_classify(cell.get(), cfg.period, k, cfg.tol_edge, &v), "band_classify");
    const Chain chain = make_chain(cell.get(), cfg.period, cfg.n_max, k);
    fpc_smatrix s;
    check(fpc_chain_entry(chain.get(), cfg.n_max, &s), "chain entry");
    out.table.add_row({k, v.z, std::abs(v.z), std::string(class_name(v.cls)), norm_t(s)});
  }
  return out;
}

RunResult run_hartman(const ExperimentConfig& cfg) {
  const Cell cell = make_cell(cfg.cell);
  RunResult out;
  std::vector<fpc_hartman_record> records(static_cast<std::size_t>(cfg.n_max));
  int in_gap = 0;
  check(fpc_hartman_scan(cell.get(), cfg.period, *cfg.k, cfg.n_max, cfg.fd_step, cfg.tol_edge,
                         records.data(), &in_gap),
        "hartman_scan");
  std::string warning;
  if (!in_gap) {
    warning = "k is not in a gap: traversal time grows with N (no saturation)";
    out.warnings.push_back(warning);
  }
  out.table.columns = {"N", "k", "tau_t", "T_t", "free_flight", "T_over_free", "increment",
                       "warning"};
  const double v = *cfg.k;
  std::optional<double> prev;
  for (const auto& r : records) {
    const double free_flight = r.n_cells * cfg.period / v;
    const Value inc = prev ? Value(r.traversal - *prev) : Value(std::monostate{});
    out.table.add_row({static_cast<long long>(r.n_cells), *cfg.k, r.tau_t, r.traversal,
                       free_flight, r.traversal / free_flight, inc, warning});
    prev = r.traversal;
  }
  return out;
}

RunResult run_delay(const ExperimentConfig& cfg) {
  const Cell cell = make_cell(cfg.cell);
  RunResult out;
  const bool pair = cfg.displacement != 0.0;
  out.table.columns = {"k", "tau_t", "tau_l", "tau_r"};
  if (pair) {
    for (const char* c : {"tau_t_displaced", "tau_l_displaced", "tau_r_displaced", "dtau_t",
                          "dtau_l", "dtau_r", "expected_dtau_l", "expected_dtau_r"})
      out.table.columns.emplace_back(c);
  }
  auto opt = [](double v, int has) { return has ? Value(v) : Value(std::monostate{}); };
  auto diff = [](double a, int ha, double b, int hb) {
    return (ha && hb) ? Value(b - a) : Value(std::monostate{});
  };
  for (double k : cfg.grid->points()) {
    fpc_delays base;
    check(fpc_time_delays(cell.get(), cfg.period, cfg.n_cells, k, 0.0, cfg.fd_step, &base),
          "time_delays");
    std::vector<Value> row = {k, opt(base.tau_t, base.has_t), opt(base.tau_l, base.has_l),
                              opt(base.tau_r, base.has_r)};
    if (pair) {
      fpc_delays moved;
      check(fpc_time_delays(cell.get(), cfg.period, cfg.n_cells, k, cfg.displacement,
                            cfg.fd_step, &moved),
            "time_delays (displaced)");
      const double expected = 2.0 * cfg.displacement / k;
      row.insert(row.end(),
                 {opt(moved.tau_t, moved.has_t), opt(moved.tau_l, moved.has_l),
                  opt(moved.tau_r, moved.has_r), diff(base.tau_t, base.has_t, moved.tau_t, moved.has_t),
                  diff(base.tau_l, base.has_l, moved.tau_l, moved.has_l),
                  diff(base.tau_r, base.has_r, moved.tau_r, moved.has_r), expected, -expected});
    }
    out.table.add_row(std::move(row));
  }
  return out;
}

RunResult run_packet(const ExperimentConfig& cfg) {
  const Cell cell = make_cell(cfg.cell);
  RunResult out;
  std::vector<double> averaged(static_cast<std::size_t>(cfg.n_max));
  std::vector<double> pointwise(averaged.size());
  check(fpc_packet_scan(cell.get(), cfg.period, *cfg.k, cfg.sigma, cfg.n_max, cfg.samples,
                        averaged.data(), pointwise.data()),
        "packet_scan");
  out.table.columns = {"N", "k0", "sigma", "averaged", "pointwise"};
  for (int n = cfg.n_step; n <= cfg.n_max; n += cfg.n_step) {
    const auto i = static_cast<std::size_t>(n - 1);
    out.table.add_row({static_cast<long long>(n), *cfg.k, cfg.sigma, averaged[i], pointwise[i]});
  }
  return out;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  if (cfg.command == "cell") return run_cell(cfg);
  if (cfg.command == "chain") return run_chain(cfg);
  if (cfg.command == "bands") return run_bands(cfg);
  if (cfg.command == "hartman") return run_hartman(cfg);
  if (cfg.command == "delay") return run_delay(cfg);
  if (cfg.command == "packet") return run_packet(cfg);
  throw ComputationError("unknown command '" + cfg.command + "'", true);
}

}  // namespace fpchain::cli
