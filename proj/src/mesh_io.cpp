#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "elastmix/error.hpp"
#include "elastmix/mesh.hpp"

namespace elastmix {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "mesh line " + std::to_string(line) + ": " + msg);
}

std::string next_line(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '#') return line;
  }
  parse_fail(line_no, "unexpected end of file");
}

std::size_t read_count(std::istream& in, int& line_no, const std::string& keyword) {
  std::istringstream ss(next_line(in, line_no));
  std::string word;
  long long count = -1;
  if (!(ss >> word >> count) || word != keyword || count < 0)
    parse_fail(line_no, "expected '" + keyword + " <count>'");
  return static_cast<std::size_t>(count);
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  int line_no = 0;
  {
    std::istringstream ss(next_line(in, line_no));
    std::string a, b, c;
    if (!(ss >> a >> b >> c) || a != "mesh" || b != "2" || c != "tri")
      parse_fail(line_no, "expected header 'mesh 2 tri'");
  }
  const std::size_t nv = read_count(in, line_no, "vertices");
  std::vector<Point> vertices;
  vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    std::istringstream ss(next_line(in, line_no));
    double x = 0.0, y = 0.0;
    std::string extra;
    if (!(ss >> x >> y) || (ss >> extra)) parse_fail(line_no, "expected 'x y'");
    vertices.emplace_back(x, y);
  }
  const std::size_t nc = read_count(in, line_no, "cells");
  std::vector<std::array<int, 3>> cells;
  cells.reserve(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    std::istringstream ss(next_line(in, line_no));
    long long a = 0, b = 0, c = 0;
    std::string extra;
    if (!(ss >> a >> b >> c) || (ss >> extra)) parse_fail(line_no, "expected 'i j k'");
    cells.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
  }
  return Mesh(std::move(vertices), std::move(cells));
}

Mesh import_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open mesh file " + path.string());
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh, const std::string& comment) {
  out << "mesh 2 tri\n";
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  out << "vertices " << mesh.num_vertices() << '\n';
  // Shortest round-trip representation keeps export -> import bit-exact.
  char buf[64];
  for (const auto& v : mesh.vertices()) {
    for (int d = 0; d < 2; ++d) {
      auto res = std::to_chars(buf, buf + sizeof buf, v[d]);
      out.write(buf, res.ptr - buf);
      out << (d == 0 ? ' ' : '\n');
    }
  }
  out << "cells " << mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells()) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

void export_mesh(const std::filesystem::path& path, const Mesh& mesh, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write mesh file " + path.string());
  write_mesh(out, mesh, comment);
}

}  // namespace elastmix
