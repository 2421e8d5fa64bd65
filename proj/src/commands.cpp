#include "elastmix/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "elastmix/assembly.hpp"
#include "elastmix/material.hpp"
#include "elastmix/matrix_market.hpp"
#include "elastmix/reference_element.hpp"
#include "elastmix/report_io.hpp"
#include "elastmix/vtk.hpp"

namespace elastmix {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kFormats{"csv", "json", "vtk"};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

std::shared_ptr<const Mesh> make_mesh(const RunConfig& c) {
  if (c.domain.kind == DomainKind::Imported)
    return std::make_shared<const Mesh>(import_mesh(c.domain.file));
  return std::make_shared<const Mesh>(generate_mesh(c.domain, c.Ns.front()));
}

void require_single(const RunConfig& c) {
  const std::string name = to_string(c.command);
  if (c.nus.size() != 1) throw Error(ErrorCode::InvalidArgument, name + " takes a single --nu");
  if (c.ks.size() != 1) throw Error(ErrorCode::InvalidArgument, name + " takes a single --k");
  if (c.Ns.size() != 1) throw Error(ErrorCode::InvalidArgument, name + " takes a single --N");
}

void check_order(int k) {
  if (k < 0 || k > kMaxOrder)
    throw Error(ErrorCode::Unsupported, "polynomial order " + std::to_string(k) + " is not supported");
}

ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Study: return "study";
    case Command::ExportMesh: return "export-mesh";
    case Command::DumpMatrices: return "dump-matrices";
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (auto c : {Command::Solve, Command::Study, Command::ExportMesh, Command::DumpMatrices})
    if (to_string(c) == name) return c;
  throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + name + "'");
}

void RunConfig::validate() const {
  for (const auto& f : formats)
    if (std::find(kFormats.begin(), kFormats.end(), f) == kFormats.end())
      throw Error(ErrorCode::InvalidArgument, "unknown output format '" + f + "'");
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
  if (domain.kind == DomainKind::Imported && domain.file.empty())
    throw Error(ErrorCode::InvalidArgument, "imported domain needs a mesh file");
  if (command == Command::Study) {
    study_config().validate();
    return;
  }
  require_single(*this);
  if (domain.kind != DomainKind::Imported && Ns.front() < 1)
    throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  if (command == Command::ExportMesh) return;
  (void)build_lame(E, nus.front());
  check_order(ks.front());
  if (command == Command::Solve) {
    if (nev < 1) throw Error(ErrorCode::InvalidArgument, "nev must be positive");
    if (!std::isfinite(shift)) throw Error(ErrorCode::InvalidArgument, "shift must be finite");
  }
}

std::vector<std::string> RunConfig::resolved_formats() const {
  if (!formats.empty()) return formats;
  if (command == Command::Study) return {"csv", "json"};
  return {"json"};
}

bool RunConfig::wants(const std::string& format) const {
  const auto f = resolved_formats();
  return std::find(f.begin(), f.end(), format) != f.end();
}

std::string RunConfig::to_json() const {
  ordered_json j;
  j["command"] = to_string(command);
  j["domain"] = to_string(domain.kind);
  if (domain.kind == DomainKind::Imported) j["mesh_file"] = domain.file.string();
  j["nu"] = nus;
  j["E"] = E;
  j["k"] = ks;
  j["N"] = Ns;
  j["nev"] = nev;
  j["shift"] = shift;
  j["formats"] = resolved_formats();
  j["subspace"] = arnoldi.subspace;
  j["tolerance"] = arnoldi.tolerance;
  j["max_restarts"] = arnoldi.max_restarts;
  j["seed"] = arnoldi.seed;
  return j.dump();
}

StudyConfig RunConfig::study_config() const {
  StudyConfig s;
  s.domain = domain;
  s.nus = nus;
  s.E = E;
  s.ks = ks;
  s.Ns = Ns;
  s.nev = nev;
  s.shift = shift;
  s.workers = workers;
  s.arnoldi = arnoldi;
  return s;
}

int workers_from_env(int fallback) {
  const char* v = std::getenv(kWorkersEnv);
  if (!v || !*v) return fallback;
  int n = 0;
  const char* end = v + std::char_traits<char>::length(v);
  const auto r = std::from_chars(v, end, n);
  if (r.ec != std::errc() || r.ptr != end || n < 1)
    throw Error(ErrorCode::InvalidArgument,
                std::string(kWorkersEnv) + " must be a positive integer, got '" + v + "'");
  return n;
}

SolveOutcome cmd_solve(const RunConfig& config) {
  if (config.command != Command::Solve)
    throw Error(ErrorCode::InvalidArgument, "cmd_solve needs the solve command");
  config.validate();
  const auto material = build_lame(config.E, config.nus.front());
  const int k = config.ks.front();

  SolveOutcome out;
  out.mesh = make_mesh(config);
  out.limit = material.limit;
  out.solution = material.limit ? solve_limit_eigen(out.mesh, k, material.mu, config.nev,
                                                    config.shift, config.arnoldi)
                                : solve_material(out.mesh, k, material, config.nev, config.shift,
                                                 config.arnoldi);
  const auto& sol = out.solution;

  prepare_output_dir(config.output_dir);
  if (config.wants("json")) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = ordered_json::parse(config.to_json());
    j["pipeline"] = material.limit ? "limit" : "finite";
    j["material"] = {{"E", material.E},
                     {"nu", material.nu},
                     {"lambda", finite_or_null(material.lambda)},
                     {"mu", material.mu}};
    j["mesh"] = {{"vertices", out.mesh->num_vertices()},
                 {"cells", out.mesh->num_cells()},
                 {"edges", out.mesh->num_edges()},
                 {"h", out.mesh->h()}};
    j["dofs"] = {{"rho", sol.rho.rows()}, {"u", sol.u.rows()}};
    j["eigenvalues"] = sol.eigenvalues;
    j["frequencies"] = sol.frequencies;
    j["residuals"] = sol.residuals;
    j["cluster"] = sol.cluster;
    const auto path = config.output_dir / "solve.json";
    auto f = open_output(path);
    f << j.dump(2) << '\n';
    out.files.push_back(path);
  }
  if (config.wants("vtk")) {
    for (std::size_t i = 0; i < sol.size(); ++i) {
      const auto path = config.output_dir / ("mode_" + std::to_string(i + 1) + ".vtk");
      // Legacy titles are one line of at most 256 characters.
      const std::string title =
          "elastmix mode " + std::to_string(i + 1) + " omega=" + format_double(sol.frequencies[i]) +
          " domain=" + to_string(config.domain.kind) + " nu=" + format_double(material.nu) +
          " E=" + format_double(material.E) + " k=" + std::to_string(k) +
          " N=" + std::to_string(config.Ns.front()) + " nev=" + std::to_string(config.nev) +
          " shift=" + format_double(config.shift) + " seed=" + std::to_string(config.arnoldi.seed);
      write_vtk(path, *out.mesh, k, sol.u.col(static_cast<Eigen::Index>(i)), title);
      out.files.push_back(path);
    }
  }
  return out;
}

StudyOutcome cmd_study(const RunConfig& config, std::ostream* log) {
  if (config.command != Command::Study)
    throw Error(ErrorCode::InvalidArgument, "cmd_study needs the study command");
  config.validate();
  StudyOutcome out;
  out.report = run_study(config.study_config());
  prepare_output_dir(config.output_dir);
  if (log)
    for (const auto& b : out.report.blocks) *log << format_block(b) << '\n';
  if (config.wants("csv")) {
    const auto path = config.output_dir / "study.csv";
    auto f = open_output(path);
    write_report_csv(f, out.report);
    out.files.push_back(path);
  }
  if (config.wants("json")) {
    const auto path = config.output_dir / "study.json";
    auto f = open_output(path);
    write_report_json(f, out.report);
    out.files.push_back(path);
  }
  return out;
}

std::vector<std::filesystem::path> cmd_export_mesh(const RunConfig& config) {
  if (config.command != Command::ExportMesh)
    throw Error(ErrorCode::InvalidArgument, "cmd_export_mesh needs the export-mesh command");
  config.validate();
  const auto mesh = make_mesh(config);
  prepare_output_dir(config.output_dir);
  const auto path = config.output_dir / "mesh.txt";
  export_mesh(path, *mesh, "config " + config.to_json());
  return {path};
}

std::vector<std::filesystem::path> cmd_dump_matrices(const RunConfig& config) {
  if (config.command != Command::DumpMatrices)
    throw Error(ErrorCode::InvalidArgument, "cmd_dump_matrices needs the dump-matrices command");
  config.validate();
  const auto mesh = make_mesh(config);
  const auto sys = assemble_system(mesh, config.ks.front(), build_lame(config.E, config.nus.front()));
  prepare_output_dir(config.output_dir);
  const std::string comment = "config " + config.to_json();
  const auto dir = config.output_dir;
  write_matrix_market(dir / "A.mtx", sys.A, true, comment);
  write_matrix_market(dir / "B.mtx", sys.B, false, comment);
  write_matrix_market(dir / "M.mtx", sys.M, true, comment);
  write_matrix_market(dir / "c.mtx", sys.c, comment);
  return {dir / "A.mtx", dir / "B.mtx", dir / "M.mtx", dir / "c.mtx"};
}

std::string error_record(ErrorCode code, const std::string& message) {
  ordered_json j;
  j["error"] = to_string(code);
  j["message"] = message;
  return j.dump();
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Unsupported:
    case ErrorCode::ParseError:
    case ErrorCode::NonConforming:
    case ErrorCode::InvertedCell:
    case ErrorCode::DegenerateCell:
    case ErrorCode::IoError:
      return 2;
    default:
      return 1;
  }
}

}  // namespace elastmix
