#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "elastmix/assembly.hpp"
#include "elastmix/matrix_market.hpp"
#include "elastmix/mesh.hpp"

using namespace elastmix;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("elastmix_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int status = -1;
  std::string out, err;
};

Run run(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(ELASTMIX_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("solve writes frequencies") {
  const auto dir = scratch("solve");
  const auto r = run("solve --domain square --nu 0.35 --k 0 --N 40 --nev 4 -o " + (dir / "o").string(), dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("omega_1 = 4.19038") != std::string::npos);
  const auto j = load(dir / "o" / "solve.json");
  CHECK(j["schema_version"] == 1);
  CHECK(j["pipeline"] == "finite");
  CHECK(j["config"]["domain"] == "square");
  CHECK(j["config"]["N"] == json({40}));
  CHECK(std::abs(j["frequencies"][0].get<double>() - 4.19038) < 1.5e-5);
  CHECK(j["frequencies"].size() == 4);
  CHECK(j["cluster"] == json({0, 0, 1, 2}));
}

TEST_CASE("nu = 1/2 runs the limit pipeline") {
  const auto dir = scratch("limit");
  const auto r = run("solve --domain square --nu 0.5 --k 0 --N 40 -o " + (dir / "o").string(), dir);
  REQUIRE(r.status == 0);
  const auto j = load(dir / "o" / "solve.json");
  CHECK(j["pipeline"] == "limit");
  CHECK(j["material"]["lambda"].is_null());
  CHECK(std::abs(j["frequencies"][0].get<double>() - 4.17650) < 1.5e-5);
}

TEST_CASE("invalid input is rejected before any work") {
  const auto dir = scratch("invalid");
  auto r = run("solve --domain square --nu 0.6 -o " + (dir / "o").string(), dir);
  CHECK(r.status == 2);
  CHECK(json::parse(r.err)["error"] == "invalid_argument");
  CHECK_FALSE(fs::exists(dir / "o"));

  r = run("study --domain square --N 10,20 -o " + (dir / "s").string(), dir);
  CHECK(r.status == 2);
  CHECK(json::parse(r.err)["error"] == "invalid_argument");
  CHECK_FALSE(fs::exists(dir / "s"));

  CHECK(run("solve --domain hexagon -o " + (dir / "h").string(), dir).status == 2);
  CHECK(run("solve --k 3 -o " + (dir / "k").string(), dir).status == 2);
  CHECK(run("frobnicate", dir).status == 2);
  CHECK(run("solve --domain square --mesh " + (dir / "m.txt").string(), dir).status == 2);
  CHECK(run("solve --domain imported -o " + (dir / "i").string(), dir).status == 2);
  r = run("solve --mesh " + (dir / "missing.txt").string() + " -o " + (dir / "m").string(), dir);
  CHECK(r.status == 2);
  CHECK(json::parse(r.err)["error"] == "io_error");
}

TEST_CASE("study output is reproducible") {
  const auto dir = scratch("study");
  const std::string args = "study --domain square --nu 0.35,0.5 --k 0,1 --N 4,6,8 --nev 3 -o ";
  REQUIRE(run(args + (dir / "a").string(), dir).status == 0);
  REQUIRE(run(args + (dir / "b").string() + " --workers 3", dir).status == 0);
  for (const char* f : {"study.csv", "study.json"}) {
    CAPTURE(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto csv = slurp(dir / "a" / "study.csv");
  CHECK(csv.rfind("# schema_version=1\n# config={", 0) == 0);
  const auto j = load(dir / "a" / "study.json");
  CHECK(j["blocks"].size() == 4);
  CHECK(j["config"]["nu"] == json({0.35, 0.5}));
}

TEST_CASE("l-shape study reports the singular first mode") {
  const auto dir = scratch("lshape");
  REQUIRE(run("study --domain lshape --nu 0.5 --k 0 --N 10,20,30,40 -o " + dir.string(), dir).status == 0);
  const auto alpha = load(dir / "study.json")["blocks"][0]["modes"][0]["alpha"].get<double>();
  CHECK(alpha == doctest::Approx(1.14).epsilon(0.06));
}

TEST_CASE("disk study is capped at second order") {
  const auto dir = scratch("disk");
  REQUIRE(run("study --domain disk --nu 0.35 --k 1 --N 10,20,30,40 -o " + dir.string(), dir).status == 0);
  for (const auto& m : load(dir / "study.json")["blocks"][0]["modes"]) {
    CAPTURE(m["mode"].get<int>());
    CHECK(m["alpha"].get<double>() == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("mesh export round trip") {
  const auto dir = scratch("mesh");
  REQUIRE(run("export-mesh --domain lshape --N 3 -o " + dir.string(), dir).status == 0);
  const auto m = import_mesh(dir / "mesh.txt");
  const auto ref = generate_mesh(DomainSpec::l_shape(), 3);
  CHECK(m.cells() == ref.cells());
  CHECK(m.vertices() == ref.vertices());

  const auto again = scratch("mesh_solve");
  REQUIRE(run("solve --mesh " + (dir / "mesh.txt").string() + " --nu 0.5 --k 0 -o " + again.string(), again).status == 0);
  const auto j = load(again / "solve.json");
  CHECK(j["config"]["domain"] == "imported");
  CHECK(j["mesh"]["cells"] == ref.num_cells());
}

TEST_CASE("matrix dumps match the assembled blocks") {
  const auto dir = scratch("dump");
  REQUIRE(run("dump-matrices --domain square --N 2 --k 1 --nu 0.35 -o " + dir.string(), dir).status == 0);
  const auto mesh = generate_mesh(DomainSpec::unit_square(), 2);
  const auto mat = build_lame(1.0, 0.35);
  const auto read = [&](const char* f) {
    std::ifstream in(dir / f);
    return Eigen::MatrixXd(read_matrix_market(in));
  };
  CHECK(read("A.mtx") == Eigen::MatrixXd(assemble_a_deviatoric(mesh, 1, mat)));
  CHECK(read("B.mtx") == Eigen::MatrixXd(assemble_b(mesh, 1)));
  CHECK(read("M.mtx") == Eigen::MatrixXd(assemble_mass(mesh, 1)));
  CHECK(Eigen::VectorXd(read("c.mtx").col(0)) == trace_constraint(mesh, 1));
  CHECK(slurp(dir / "A.mtx").find("%%MatrixMarket matrix coordinate real symmetric\n%") == 0);
}

TEST_CASE("vtk export") {
  const auto dir = scratch("vtk");
  REQUIRE(run("solve --domain disk --N 3 --nu 0.3 --nev 2 --format json,vtk -o " + dir.string(), dir).status == 0);
  const auto v = slurp(dir / "mode_1.vtk");
  CHECK(v.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(v.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(v.find("POINTS 49 double") != std::string::npos);
  CHECK(v.find("VECTORS u double") != std::string::npos);
  CHECK(fs::exists(dir / "mode_2.vtk"));
}
