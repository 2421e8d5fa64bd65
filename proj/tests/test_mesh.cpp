#include <doctest.h>

#include <cmath>
#include <sstream>

#include "elastmix/error.hpp"
#include "elastmix/mesh.hpp"

using namespace elastmix;

namespace {

void check_invariants(const Mesh& m) {
  for (std::size_t c = 0; c < m.num_cells(); ++c) CHECK(m.cell_area(c) > 0.0);
  CHECK(2 * m.num_edges() == 3 * m.num_cells() + m.num_boundary_edges());
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    CHECK(m.edges()[e][0] < m.edges()[e][1]);
    CHECK((m.edge_cells()[e][1] < 0) == static_cast<bool>(m.boundary_edge()[e]));
  }
  CHECK(m.min_angle_degrees() >= 20.0);
}

int expect_code(const std::string& text) {
  std::istringstream in(text);
  try {
    read_mesh(in);
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return -1;
}

}  // namespace

TEST_CASE("square counts") {
  const auto m1 = generate_mesh(DomainSpec::unit_square(), 1);
  CHECK(m1.num_vertices() == 4);
  CHECK(m1.num_cells() == 2);
  CHECK(m1.num_edges() == 5);
  const auto m2 = generate_mesh(DomainSpec::unit_square(), 2);
  CHECK(m2.num_vertices() == 9);
  CHECK(m2.num_cells() == 8);
  CHECK(m2.num_edges() == 16);
  for (int N : {3, 7, 12}) {
    const auto m = generate_mesh(DomainSpec::unit_square(), N);
    CHECK(m.num_cells() == static_cast<std::size_t>(2 * N * N));
    CHECK(m.num_vertices() == static_cast<std::size_t>((N + 1) * (N + 1)));
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("l-shape counts") {
  const auto m = generate_mesh(DomainSpec::l_shape(), 2);
  CHECK(m.num_cells() == 24);
  CHECK(m.total_area() == doctest::Approx(3.0).epsilon(1e-14));
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const auto p = m.cell_points(c);
    const Point g = (p[0] + p[1] + p[2]) / 3.0;
    CHECK_FALSE((g.x() < 0.0 && g.y() < 0.0));
  }
}

TEST_CASE("disk boundary lies on the circle") {
  for (int N : {1, 4, 9}) {
    const auto m = generate_mesh(DomainSpec::disk(), N);
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      if (!m.boundary_edge()[e]) continue;
      for (int v : m.edges()[e]) CHECK(std::abs(m.vertices()[v].norm() - 1.0) < 1e-15);
    }
    CHECK(m.num_cells() == static_cast<std::size_t>(8 * N * N));
  }
}

TEST_CASE("generated meshes are valid and regular") {
  for (auto spec : {DomainSpec::unit_square(), DomainSpec::l_shape(), DomainSpec::disk()}) {
    double lo = 1e300, hi = 0.0;
    for (int N = 2; N <= 64; N *= 2) {
      CAPTURE(N);
      const auto m = generate_mesh(spec, N);
      check_invariants(m);
      lo = std::min(lo, m.h() * N);
      hi = std::max(hi, m.h() * N);
    }
    CHECK(hi / lo < 1.5);
  }
}

TEST_CASE("cell edge signs follow the global orientation") {
  const auto m = generate_mesh(DomainSpec::l_shape(), 3);
  for (std::size_t c = 0; c < m.num_cells(); ++c)
    for (int i = 0; i < 3; ++i) {
      const int a = m.cells()[c][(i + 1) % 3], b = m.cells()[c][(i + 2) % 3];
      const auto& e = m.edges()[m.cell_edges()[c][i]];
      CHECK(e == std::array<int, 2>{std::min(a, b), std::max(a, b)});
      CHECK(m.edge_signs()[c][i] == (a < b ? 1 : -1));
    }
}

TEST_CASE("bad refinement is rejected") {
  CHECK_THROWS_AS(generate_mesh(DomainSpec::unit_square(), 0), Error);
  CHECK_THROWS_AS(generate_mesh(DomainSpec::disk(), -2), Error);
  CHECK_THROWS_AS(generate_mesh(DomainSpec::imported("/nonexistent/mesh.txt"), 1), Error);
  CHECK_THROWS_AS(parse_domain_kind("triangle"), Error);
  CHECK(parse_domain_kind("lshape") == DomainKind::LShape);
}

TEST_CASE("export and import round trip") {
  const auto m = generate_mesh(DomainSpec::unit_square(), 2);
  std::stringstream buf;
  write_mesh(buf, m, "square N=2");
  const auto back = read_mesh(buf);
  CHECK(back.cells() == m.cells());
  CHECK(back.edges() == m.edges());
  CHECK(back.vertices() == m.vertices());

  std::stringstream again;
  write_mesh(again, back, "square N=2");
  std::stringstream first;
  write_mesh(first, m, "square N=2");
  CHECK(again.str() == first.str());
}

TEST_CASE("import errors") {
  const std::string head = "mesh 2 tri\nvertices 4\n0 0\n1 0\n1 1\n0 1\n";
  CHECK(expect_code(head + "cells 3\n0 1 2\n0 2 3\n0 1 2\n") ==
        static_cast<int>(ErrorCode::NonConforming));
  CHECK(expect_code(head + "cells 2\n0 2 1\n0 2 3\n") == static_cast<int>(ErrorCode::InvertedCell));
  CHECK(expect_code(head + "cells 2\n0 1 2\n0 2\n") == static_cast<int>(ErrorCode::ParseError));
  CHECK(expect_code("mesh 3 tet\n") == static_cast<int>(ErrorCode::ParseError));
  CHECK(expect_code(head + "cells 1\n0 1 7\n") == static_cast<int>(ErrorCode::InvalidArgument));
}
