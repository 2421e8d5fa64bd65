#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "elastmix/mesh.hpp"
#include "elastmix/spectral.hpp"

namespace elastmix {

/// Least-squares fit of omega_h ~ omega + C h^alpha.
struct FitResult {
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double omega_extr = std::numeric_limits<double>::quiet_NaN();
  double C = 0.0;
  double residual = 0.0;  // sum of squared misfits at the optimum
  int levels_used = 0;
  bool saturated = false;     // data at round-off distance from the limit
  bool non_monotone = false;  // successive differences change sign
};

inline constexpr double kAlphaMin = 0.25;
inline constexpr double kAlphaMax = 8.0;
/// Levels closer than this (relative) to their predecessor are dropped.
inline constexpr double kSaturationStep = 1e-9;
/// |omega_h - omega_extr| / omega_extr below this flags saturation.
inline constexpr double kSaturationError = 1e-8;

/// For each alpha the pair (omega, C) is solved in closed form; alpha
/// itself is located by a scan of [0.25, 8] refined with golden-section
/// search. Needs at least three levels (h descending or ascending).
FitResult fit_order(std::span<const double> h, std::span<const double> omega);

/// Per-mode sequences [mode][level] built from ascending frequencies. Within
/// a cluster of repeated values the order is canonicalised by sorting.
std::vector<std::vector<double>> match_modes(const std::vector<std::vector<double>>& levels,
                                             int nev);
std::vector<std::vector<double>> match_modes(const std::vector<EigenSolution>& levels, int nev);

struct StudyConfig {
  DomainSpec domain;
  std::vector<double> nus{0.35};
  double E = 1.0;
  std::vector<int> ks{0};
  std::vector<int> Ns{10, 20, 30, 40};
  int nev = 4;
  double shift = 0.0;
  int workers = 1;
  ArnoldiOptions arnoldi;

  /// Throws Error(InvalidArgument) on any violated precondition.
  void validate() const;
};

struct ModeReport {
  int mode = 0;  // 1-based
  std::vector<double> omega;  // one per level
  FitResult fit;
  std::vector<double> rel_err;
};

struct StudyBlock {
  double nu = 0.0;
  int k = 0;
  std::vector<int> N;
  std::vector<double> h;
  std::vector<ModeReport> modes;
};

struct ConvergenceReport {
  StudyConfig config;
  std::vector<StudyBlock> blocks;
};

/// Fits every mode sequence of a block and fills in relative errors.
void fit_block(StudyBlock& block);

/// mesh -> assemble -> solve -> match -> fit for every (nu, k); failures are
/// rethrown with the (nu, k, N) cell in the message. Independent solves are
/// spread over `config.workers` threads.
ConvergenceReport run_study(const StudyConfig& config);

struct ErrorRow {
  double nu = 0.0;
  int k = 0;
  int mode = 0;
  int N = 0;
  double h = 0.0;
  double rel_err = 0.0;
  double reference = 0.0;  // e_finest * (h / h_finest)^slope
  double slope = 0.0;
};

/// e = |omega_h - omega_extr| / |omega_extr| per mode and level, with a
/// reference line of slope 2 min{s, k+1} anchored at the finest level.
std::vector<ErrorRow> relative_errors(const ConvergenceReport& report,
                                      double regularity = std::numeric_limits<double>::infinity());

/// Fixed-width text table of one block.
std::string format_block(const StudyBlock& block);

}  // namespace elastmix
