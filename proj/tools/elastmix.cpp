#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elastmix/commands.hpp"

using namespace elastmix;

namespace {

struct Flags {
  std::string domain;
  std::string mesh_file;
  std::vector<double> nus{0.35};
  double E = 1.0;
  std::vector<int> ks{0};
  std::vector<int> Ns;
  int nev = 4;
  double shift = 0.0;
  std::string output = ".";
  std::vector<std::string> formats;
  int workers = 0;
  int subspace = 0;
  double tolerance = 1e-12;
  std::uint64_t seed = ArnoldiOptions{}.seed;
};

void add_common(CLI::App* cmd, Flags& f, bool lists) {
  cmd->add_option("--domain", f.domain, "square | lshape | disk | imported (default square)");
  cmd->add_option("--mesh", f.mesh_file, "mesh file; implies --domain imported");
  if (lists) {
    cmd->add_option("--nu", f.nus, "Poisson ratio(s), comma separated")->delimiter(',');
    cmd->add_option("--k", f.ks, "polynomial order(s), comma separated")->delimiter(',');
    cmd->add_option("--N", f.Ns, "refinement levels, comma separated")->delimiter(',');
  } else {
    cmd->add_option("--nu", f.nus, "Poisson ratio")->expected(1);
    cmd->add_option("--k", f.ks, "polynomial order")->expected(1);
    cmd->add_option("--N", f.Ns, "refinement level")->expected(1);
  }
  cmd->add_option("--E", f.E, "Young modulus")->capture_default_str();
  cmd->add_option("--output,-o", f.output, "output directory")->capture_default_str();
}

void add_solver(CLI::App* cmd, Flags& f) {
  cmd->add_option("--nev", f.nev, "number of eigenpairs")->capture_default_str();
  cmd->add_option("--shift", f.shift, "spectral shift on kappa")->capture_default_str();
  cmd->add_option("--subspace", f.subspace, "Krylov subspace size (0 = auto)");
  cmd->add_option("--tol", f.tolerance, "relative residual tolerance")->capture_default_str();
  cmd->add_option("--seed", f.seed, "start vector seed");
  cmd->add_option("--format", f.formats, "csv, json, vtk (comma separated)")->delimiter(',');
}

RunConfig to_config(Command cmd, const Flags& f) {
  RunConfig c;
  c.command = cmd;
  if (!f.mesh_file.empty()) {
    if (!f.domain.empty() && f.domain != "imported")
      throw Error(ErrorCode::InvalidArgument, "--mesh cannot be combined with --domain " + f.domain);
    c.domain = DomainSpec::imported(f.mesh_file);
  } else if (f.domain == "imported") {
    throw Error(ErrorCode::InvalidArgument, "--domain imported needs --mesh");
  } else {
    c.domain = {parse_domain_kind(f.domain.empty() ? "square" : f.domain), {}};
  }
  c.nus = f.nus;
  c.E = f.E;
  c.ks = f.ks;
  if (!f.Ns.empty())
    c.Ns = f.Ns;
  else if (cmd == Command::Study)
    c.Ns = {10, 20, 30, 40};
  else
    c.Ns = {10};
  c.nev = f.nev;
  c.shift = f.shift;
  c.output_dir = f.output;
  c.formats = f.formats;
  c.workers = f.workers > 0 ? f.workers : workers_from_env(1);
  c.arnoldi.subspace = f.subspace;
  c.arnoldi.tolerance = f.tolerance;
  c.arnoldi.seed = f.seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite element eigensolver for plane linear elasticity"};
  app.require_subcommand(1);
  Flags f;
  auto* solve = app.add_subcommand("solve", "lowest frequencies on one mesh");
  add_common(solve, f, false);
  add_solver(solve, f);
  auto* study = app.add_subcommand("study", "convergence study over a list of meshes");
  add_common(study, f, true);
  add_solver(study, f);
  study->add_option("--workers", f.workers, "parallel solves (default $ELASTMIX_WORKERS or 1)");
  auto* mesh = app.add_subcommand("export-mesh", "write the mesh in ASCII format");
  add_common(mesh, f, false);
  auto* dump = app.add_subcommand("dump-matrices", "write A, B, M, c as Matrix Market files");
  add_common(dump, f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_record(ErrorCode::InvalidArgument, e.what()) << '\n';
    return 2;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const auto cmd = parse_command(sub->get_name());
    const auto config = to_config(cmd, f);
    config.validate();
    std::vector<std::filesystem::path> files;
    switch (cmd) {
      case Command::Solve: {
        const auto out = cmd_solve(config);
        for (std::size_t i = 0; i < out.solution.size(); ++i)
          std::cout << "omega_" << i + 1 << " = " << out.solution.frequencies[i] << '\n';
        files = out.files;
        break;
      }
      case Command::Study:
        files = cmd_study(config, &std::cout).files;
        break;
      case Command::ExportMesh:
        files = cmd_export_mesh(config);
        break;
      case Command::DumpMatrices:
        files = cmd_dump_matrices(config);
        break;
    }
    for (const auto& p : files) std::cout << "wrote " << p.string() << '\n';
  } catch (const Error& e) {
    std::cerr << error_record(e.code(), e.what()) << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << error_record(ErrorCode::InvalidArgument, e.what()) << '\n';
    return 1;
  }
  return 0;
}
