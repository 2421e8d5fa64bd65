#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "elastmix/analysis.hpp"
#include "elastmix/error.hpp"
#include "elastmix/mesh.hpp"
#include "elastmix/spectral.hpp"

namespace elastmix {

enum class Command { Solve, Study, ExportMesh, DumpMatrices };

std::string to_string(Command c);
Command parse_command(const std::string& name);

struct RunConfig {
  Command command = Command::Solve;
  DomainSpec domain;
  std::vector<double> nus{0.35};
  double E = 1.0;
  std::vector<int> ks{0};
  std::vector<int> Ns{10};
  int nev = 4;
  double shift = 0.0;
  std::filesystem::path output_dir = ".";
  std::vector<std::string> formats;  // empty picks the per-command default
  int workers = 1;
  ArnoldiOptions arnoldi;

  /// Checks everything the selected command needs before any compute.
  void validate() const;
  /// Formats after defaulting: solve -> json, study -> csv + json.
  std::vector<std::string> resolved_formats() const;
  bool wants(const std::string& format) const;
  /// Resolved config as compact JSON; embedded in every output file.
  std::string to_json() const;
  StudyConfig study_config() const;
};

inline constexpr const char* kWorkersEnv = "ELASTMIX_WORKERS";

/// Worker count from ELASTMIX_WORKERS, or `fallback` when unset.
int workers_from_env(int fallback = 1);

struct SolveOutcome {
  EigenSolution solution;
  std::shared_ptr<const Mesh> mesh;
  bool limit = false;
  std::vector<std::filesystem::path> files;
};

/// solve.json with eigenvalues and frequencies, plus mode_<i>.vtk when vtk
/// output is requested. nu = 0.5 runs the limit pipeline.
SolveOutcome cmd_solve(const RunConfig& config);

struct StudyOutcome {
  ConvergenceReport report;
  std::vector<std::filesystem::path> files;
};

/// study.csv / study.json; the text tables go to `log` when given.
StudyOutcome cmd_study(const RunConfig& config, std::ostream* log = nullptr);

/// mesh.txt in the ASCII mesh format.
std::vector<std::filesystem::path> cmd_export_mesh(const RunConfig& config);

/// A.mtx (symmetric), B.mtx, M.mtx (symmetric) and c.mtx.
std::vector<std::filesystem::path> cmd_dump_matrices(const RunConfig& config);

/// {"error": code, "message": ...} on one line.
std::string error_record(ErrorCode code, const std::string& message);
/// 2 for configuration and input errors, 1 for failures during compute.
int exit_code(ErrorCode code);

}  // namespace elastmix
