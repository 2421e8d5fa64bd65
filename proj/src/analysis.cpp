#include "elastmix/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "elastmix/error.hpp"

namespace elastmix {

namespace {

struct LinearFit {
  double omega = 0.0;
  double C = 0.0;
  double residual = 0.0;
};

// Closed-form least squares for y ~ omega + C x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  LinearFit f;
  f.C = sxx > 0.0 ? sxy / sxx : 0.0;
  f.omega = ym - f.C * xm;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = (y[i] - ym) - f.C * (x[i] - xm);
    f.residual += r * r;
  }
  return f;
}

}  // namespace

FitResult fit_order(std::span<const double> h, std::span<const double> omega) {
  if (h.size() != omega.size())
    throw Error(ErrorCode::DimensionMismatch, "fit_order: h and omega lengths differ");
  if (h.size() < 3) throw Error(ErrorCode::InvalidArgument, "fit_order needs at least three levels");
  for (double v : h)
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "fit_order: mesh sizes must be positive");

  // Coarse to fine.
  std::vector<std::size_t> idx(h.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return h[a] > h[b]; });

  FitResult res;
  double prev_diff = 0.0;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    const double d = omega[idx[i]] - omega[idx[i - 1]];
    if (d != 0.0 && prev_diff != 0.0 && (d > 0.0) != (prev_diff > 0.0)) res.non_monotone = true;
    if (d != 0.0) prev_diff = d;
  }

  std::vector<double> hs, ws;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double w = omega[idx[i]];
    if (i > 0 && std::abs(w - omega[idx[i - 1]]) < kSaturationStep * std::abs(w)) continue;
    hs.push_back(h[idx[i]]);
    ws.push_back(w);
  }
  res.levels_used = static_cast<int>(hs.size());
  const double finest = omega[idx.back()];
  if (hs.size() < 3) {
    res.saturated = true;
    res.omega_extr = finest;
    res.residual = 0.0;
    return res;
  }

  const double hmax = hs.front();
  std::vector<double> x(hs.size());
  auto objective = [&](double alpha) {
    for (std::size_t i = 0; i < hs.size(); ++i) x[i] = std::pow(hs[i] / hmax, alpha);
    return linear_fit(x, ws).residual;
  };

  constexpr int kScan = 776;  // step 0.01 over [0.25, 8]
  double best_alpha = kAlphaMin, best = objective(kAlphaMin);
  for (int i = 1; i < kScan; ++i) {
    const double a = kAlphaMin + (kAlphaMax - kAlphaMin) * i / (kScan - 1);
    const double f = objective(a);
    if (f < best) {
      best = f;
      best_alpha = a;
    }
  }
  const double step = (kAlphaMax - kAlphaMin) / (kScan - 1);
  double lo = std::max(kAlphaMin, best_alpha - step);
  double hi = std::min(kAlphaMax, best_alpha + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = objective(d);
    }
  }
  double alpha = 0.5 * (lo + hi);
  if (objective(best_alpha) < objective(alpha)) alpha = best_alpha;

  for (std::size_t i = 0; i < hs.size(); ++i) x[i] = std::pow(hs[i] / hmax, alpha);
  const LinearFit lf = linear_fit(x, ws);
  res.alpha = alpha;
  res.omega_extr = lf.omega;
  res.C = lf.C / std::pow(hmax, alpha);
  res.residual = lf.residual;
  if (std::abs(finest - res.omega_extr) < kSaturationError * std::abs(res.omega_extr))
    res.saturated = true;
  return res;
}

std::vector<std::vector<double>> match_modes(const std::vector<std::vector<double>>& levels,
                                             int nev) {
  if (nev < 1) throw Error(ErrorCode::InvalidArgument, "match_modes: nev must be positive");
  std::vector<std::vector<double>> modes(nev, std::vector<double>(levels.size()));
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (static_cast<int>(levels[l].size()) < nev)
      throw Error(ErrorCode::InsufficientModes,
                  "level " + std::to_string(l) + " has " + std::to_string(levels[l].size()) +
                      " modes, " + std::to_string(nev) + " requested");
    std::vector<double> sorted(levels[l].begin(), levels[l].end());
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < nev; ++i) modes[i][l] = sorted[i];
  }
  return modes;
}

std::vector<std::vector<double>> match_modes(const std::vector<EigenSolution>& levels, int nev) {
  std::vector<std::vector<double>> freqs;
  freqs.reserve(levels.size());
  for (const auto& s : levels) freqs.push_back(s.frequencies);
  return match_modes(freqs, nev);
}

void StudyConfig::validate() const {
  if (Ns.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "a study needs at least three refinement levels");
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 1) throw Error(ErrorCode::InvalidArgument, "refinement levels must be >= 1");
    if (i > 0 && Ns[i] <= Ns[i - 1])
      throw Error(ErrorCode::InvalidArgument, "refinement levels must be strictly increasing");
  }
  if (nus.empty() || ks.empty()) throw Error(ErrorCode::InvalidArgument, "empty nu or k list");
  for (double nu : nus) (void)build_lame(E, nu);
  for (int k : ks)
    if (k < 0 || k > kMaxOrder)
      throw Error(ErrorCode::Unsupported, "polynomial order " + std::to_string(k) + " is not supported");
  if (nev < 1) throw Error(ErrorCode::InvalidArgument, "nev must be positive");
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
  if (domain.kind == DomainKind::Imported)
    throw Error(ErrorCode::Unsupported, "studies need a generated domain (square, lshape, disk)");
}

void fit_block(StudyBlock& block) {
  for (auto& m : block.modes) {
    m.fit = fit_order(block.h, m.omega);
    m.rel_err.resize(m.omega.size());
    for (std::size_t l = 0; l < m.omega.size(); ++l)
      m.rel_err[l] = std::abs(m.omega[l] - m.fit.omega_extr) / std::abs(m.fit.omega_extr);
  }
}

ConvergenceReport run_study(const StudyConfig& config) {
  config.validate();
  std::vector<std::shared_ptr<const Mesh>> meshes;
  for (int N : config.Ns) meshes.push_back(std::make_shared<const Mesh>(generate_mesh(config.domain, N)));

  struct Cell {
    std::size_t nu_i, k_i, n_i;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < config.nus.size(); ++a)
    for (std::size_t b = 0; b < config.ks.size(); ++b)
      for (std::size_t c = 0; c < config.Ns.size(); ++c) cells.push_back({a, b, c});

  std::vector<std::vector<double>> freqs(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const auto& cell = cells[i];
      const double nu = config.nus[cell.nu_i];
      const int k = config.ks[cell.k_i];
      const int N = config.Ns[cell.n_i];
      try {
        const auto material = build_lame(config.E, nu);
        freqs[i] = solve_material(meshes[cell.n_i], k, material, config.nev, config.shift,
                                  config.arnoldi)
                       .frequencies;
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "(nu=" << nu << ", k=" << k << ", N=" << N << "): " << e.what();
        errors[i] = std::make_exception_ptr(Error(e.code(), msg.str()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::min<int>(config.workers, static_cast<int>(cells.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ConvergenceReport report;
  report.config = config;
  std::size_t i = 0;
  for (double nu : config.nus) {
    for (int k : config.ks) {
      StudyBlock block;
      block.nu = nu;
      block.k = k;
      block.N = config.Ns;
      std::vector<std::vector<double>> levels;
      for (std::size_t c = 0; c < config.Ns.size(); ++c, ++i) {
        block.h.push_back(meshes[c]->h());
        levels.push_back(freqs[i]);
      }
      const auto seqs = match_modes(levels, config.nev);
      for (int m = 0; m < config.nev; ++m) {
        ModeReport mr;
        mr.mode = m + 1;
        mr.omega = seqs[m];
        block.modes.push_back(std::move(mr));
      }
      fit_block(block);
      report.blocks.push_back(std::move(block));
    }
  }
  return report;
}

std::vector<ErrorRow> relative_errors(const ConvergenceReport& report, double regularity) {
  std::vector<ErrorRow> rows;
  for (const auto& b : report.blocks) {
    const double slope = 2.0 * std::min(regularity, static_cast<double>(b.k + 1));
    std::size_t finest = 0;
    for (std::size_t l = 1; l < b.h.size(); ++l)
      if (b.h[l] < b.h[finest]) finest = l;
    for (const auto& m : b.modes) {
      if (!(std::abs(m.fit.omega_extr) > 0.0))
        throw Error(ErrorCode::InvalidArgument, "relative_errors: zero extrapolated frequency");
      const double e_fine = std::abs(m.omega[finest] - m.fit.omega_extr) / std::abs(m.fit.omega_extr);
      for (std::size_t l = 0; l < b.h.size(); ++l) {
        ErrorRow r;
        r.nu = b.nu;
        r.k = b.k;
        r.mode = m.mode;
        r.N = b.N[l];
        r.h = b.h[l];
        r.rel_err = std::abs(m.omega[l] - m.fit.omega_extr) / std::abs(m.fit.omega_extr);
        r.slope = slope;
        r.reference = e_fine * std::pow(b.h[l] / b.h[finest], slope);
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::string format_block(const StudyBlock& block) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "nu = %g, k = %d\n", block.nu, block.k);
  out << buf << "mode";
  for (int N : block.N) {
    std::snprintf(buf, sizeof buf, " %10s", ("N=" + std::to_string(N)).c_str());
    out << buf;
  }
  out << "   alpha  omega_extr\n";
  for (const auto& m : block.modes) {
    std::snprintf(buf, sizeof buf, "%4d", m.mode);
    out << buf;
    for (double w : m.omega) {
      std::snprintf(buf, sizeof buf, " %10.5f", w);
      out << buf;
    }
    if (m.fit.saturated && std::isnan(m.fit.alpha))
      std::snprintf(buf, sizeof buf, "   (sat) %11.5f", m.fit.omega_extr);
    else
      std::snprintf(buf, sizeof buf, " %7.2f%s %10.5f", m.fit.alpha, m.fit.saturated ? "*" : " ",
                    m.fit.omega_extr);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace elastmix
