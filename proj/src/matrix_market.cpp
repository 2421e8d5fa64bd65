#include "elastmix/matrix_market.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "elastmix/error.hpp"

namespace elastmix {

namespace {

void put_double(std::ostream& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

void put_comment(std::ostream& out, const std::string& comment) {
  if (comment.empty()) return;
  std::istringstream lines(comment);
  std::string line;
  while (std::getline(lines, line)) out << "% " << line << '\n';
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseMatrix& m, bool symmetric,
                         const std::string& comment) {
  std::vector<std::tuple<int, int, double>> entries;
  for (int col = 0; col < m.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
      if (!symmetric || it.row() >= it.col()) entries.emplace_back(it.row(), it.col(), it.value());
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  put_comment(out, comment);
  out << m.rows() << ' ' << m.cols() << ' ' << entries.size() << '\n';
  for (const auto& [i, j, v] : entries) {
    out << i + 1 << ' ' << j + 1 << ' ';
    put_double(out, v);
    out << '\n';
  }
}

void write_matrix_market(std::ostream& out, const Eigen::VectorXd& v, const std::string& comment) {
  int nnz = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) nnz += v[i] != 0.0;
  out << "%%MatrixMarket matrix coordinate real general\n";
  put_comment(out, comment);
  out << v.size() << " 1 " << nnz << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    out << i + 1 << " 1 ";
    put_double(out, v[i]);
    out << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m, bool symmetric,
                         const std::string& comment) {
  auto out = open_out(path);
  write_matrix_market(out, m, symmetric, comment);
}

void write_matrix_market(const std::filesystem::path& path, const Eigen::VectorXd& v,
                         const std::string& comment) {
  auto out = open_out(path);
  write_matrix_market(out, v, comment);
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate real", 0) != 0)
    throw Error(ErrorCode::ParseError, "not a coordinate real MatrixMarket stream");
  const bool symmetric = line.find("symmetric") != std::string::npos;
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream header(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(header >> rows >> cols >> nnz)) throw Error(ErrorCode::ParseError, "bad MatrixMarket size line");
  std::vector<Eigen::Triplet<double, int>> trips;
  for (long e = 0; e < nnz; ++e) {
    long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw Error(ErrorCode::ParseError, "truncated MatrixMarket entries");
    trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetric && i != j) trips.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
  }
  SparseMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace elastmix
