#include "elastmix/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

#include "elastmix/error.hpp"

namespace elastmix {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

std::uint64_t edge_key(int lo, int hi) {
  return (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
}

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::UnitSquare: return "square";
    case DomainKind::LShape: return "lshape";
    case DomainKind::Disk: return "disk";
    case DomainKind::Imported: return "imported";
  }
  return "unknown";
}

DomainKind parse_domain_kind(const std::string& name) {
  if (name == "square" || name == "UnitSquare") return DomainKind::UnitSquare;
  if (name == "lshape" || name == "LShape") return DomainKind::LShape;
  if (name == "disk" || name == "circle" || name == "Disk") return DomainKind::Disk;
  if (name == "imported" || name == "Imported") return DomainKind::Imported;
  throw Error(ErrorCode::Unsupported, "unsupported domain kind '" + name + "'");
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
           int refinement)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), refinement_(refinement) {
  if (cells_.empty()) throw Error(ErrorCode::InvalidArgument, "mesh has no cells");
  if (refinement_ < 1) throw Error(ErrorCode::InvalidArgument, "refinement must be >= 1");
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& t = cells_[c];
    for (int v : t) {
      if (v < 0 || v >= nv)
        throw Error(ErrorCode::InvalidArgument,
                    "cell " + std::to_string(c) + " references vertex " + std::to_string(v));
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw Error(ErrorCode::DegenerateCell,
                  "cell " + std::to_string(c) + " repeats a vertex");
    const double diam = cell_diameter(c);
    const double area = cell_area(c);
    if (std::abs(area) < 1e-14 * diam * diam)
      throw Error(ErrorCode::DegenerateCell, "cell " + std::to_string(c) + " is degenerate");
    if (area < 0.0)
      throw Error(ErrorCode::InvertedCell,
                  "cell " + std::to_string(c) + " is clockwise (negative signed area)");
    h_ = std::max(h_, diam);
  }
  build_topology();
  check_hanging_nodes();
}

void Mesh::build_topology() {
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(cells_.size() * 2);
  cell_edges_.assign(cells_.size(), {});
  edge_signs_.assign(cells_.size(), {});
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& t = cells_[c];
    for (int i = 0; i < 3; ++i) {
      const int p = t[(i + 1) % 3];
      const int q = t[(i + 2) % 3];
      const int lo = std::min(p, q);
      const int hi = std::max(p, q);
      const int sign = p < q ? 1 : -1;
      auto [it, inserted] = lookup.try_emplace(edge_key(lo, hi), static_cast<int>(edges_.size()));
      const int e = it->second;
      if (inserted) {
        edges_.push_back({lo, hi});
        edge_cells_.push_back({static_cast<int>(c), -1});
      } else {
        auto& adj = edge_cells_[e];
        if (adj[1] != -1)
          throw Error(ErrorCode::NonConforming,
                      "edge (" + std::to_string(lo) + "," + std::to_string(hi) +
                          ") is shared by more than two cells");
        const int other = adj[0];
        int other_sign = 0;
        for (int j = 0; j < 3; ++j)
          if (cell_edges_[other][j] == e) other_sign = edge_signs_[other][j];
        if (other_sign == sign)
          throw Error(ErrorCode::NonConforming,
                      "cells " + std::to_string(other) + " and " + std::to_string(c) +
                          " overlap along edge (" + std::to_string(lo) + "," +
                          std::to_string(hi) + ")");
        adj[1] = static_cast<int>(c);
      }
      cell_edges_[c][i] = e;
      edge_signs_[c][i] = sign;
    }
  }
  boundary_edge_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) boundary_edge_[e] = edge_cells_[e][1] == -1;
}

void Mesh::check_hanging_nodes() const {
  // Bucket vertices on a uniform grid, then test every boundary edge
  // against the vertices near it. A vertex strictly inside a boundary edge
  // means a neighbouring cell is split there.
  Point lo = vertices_.front(), hi = vertices_.front();
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double cell = std::max(h_, 1e-300);
  const int nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / cell)));
  const int ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / cell)));
  auto bucket_of = [&](const Point& p) {
    const int ix = std::clamp(static_cast<int>((p.x() - lo.x()) / cell), 0, nx - 1);
    const int iy = std::clamp(static_cast<int>((p.y() - lo.y()) / cell), 0, ny - 1);
    return std::array<int, 2>{ix, iy};
  };
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(nx) * ny);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const auto b = bucket_of(vertices_[v]);
    buckets[static_cast<std::size_t>(b[1]) * nx + b[0]].push_back(static_cast<int>(v));
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!boundary_edge_[e]) continue;
    const Point& a = vertices_[edges_[e][0]];
    const Point& b = vertices_[edges_[e][1]];
    const double len = (b - a).norm();
    const auto b0 = bucket_of(a.cwiseMin(b));
    const auto b1 = bucket_of(a.cwiseMax(b));
    for (int iy = b0[1]; iy <= b1[1]; ++iy) {
      for (int ix = b0[0]; ix <= b1[0]; ++ix) {
        for (int v : buckets[static_cast<std::size_t>(iy) * nx + ix]) {
          if (v == edges_[e][0] || v == edges_[e][1]) continue;
          const Point& p = vertices_[v];
          const double t = (p - a).dot(b - a) / (len * len);
          if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
          const double dist = std::abs(2.0 * signed_area(a, b, p)) / len;
          if (dist < 1e-12 * len)
            throw Error(ErrorCode::NonConforming,
                        "hanging node " + std::to_string(v) + " on edge (" +
                            std::to_string(edges_[e][0]) + "," +
                            std::to_string(edges_[e][1]) + ")");
        }
      }
    }
  }
}

std::size_t Mesh::num_boundary_edges() const {
  return static_cast<std::size_t>(std::count(boundary_edge_.begin(), boundary_edge_.end(), true));
}

double Mesh::cell_area(std::size_t c) const {
  const auto& t = cells_[c];
  return signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
}

double Mesh::cell_diameter(std::size_t c) const {
  const auto p = cell_points(c);
  return std::max({(p[1] - p[0]).norm(), (p[2] - p[1]).norm(), (p[0] - p[2]).norm()});
}

double Mesh::min_angle_degrees() const {
  double worst = 180.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto p = cell_points(c);
    for (int i = 0; i < 3; ++i) {
      const Point u = p[(i + 1) % 3] - p[i];
      const Point v = p[(i + 2) % 3] - p[i];
      const double cosang = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
      worst = std::min(worst, std::acos(cosang) * 180.0 / std::numbers::pi);
    }
  }
  return worst;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) a += cell_area(c);
  return a;
}

namespace {

// Cells of an nx-by-ny grid of squares; keep(ix, iy) filters squares.
template <class Keep>
Mesh grid_mesh(double x0, double y0, int per_unit, int nx, int ny, int refinement, Keep keep) {
  std::vector<int> index((nx + 1) * (ny + 1), -1);
  auto vid = [&](int ix, int iy) -> int& { return index[iy * (nx + 1) + ix]; };
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      if (keep(ix, iy))
        for (int dy = 0; dy <= 1; ++dy)
          for (int dx = 0; dx <= 1; ++dx) vid(ix + dx, iy + dy) = 0;

  std::vector<Point> vertices;
  for (int iy = 0; iy <= ny; ++iy) {
    for (int ix = 0; ix <= nx; ++ix) {
      if (vid(ix, iy) < 0) continue;
      vid(ix, iy) = static_cast<int>(vertices.size());
      vertices.emplace_back(x0 + static_cast<double>(ix) / per_unit,
                            y0 + static_cast<double>(iy) / per_unit);
    }
  }
  std::vector<std::array<int, 3>> cells;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (!keep(ix, iy)) continue;
      const int v00 = vid(ix, iy), v10 = vid(ix + 1, iy);
      const int v01 = vid(ix, iy + 1), v11 = vid(ix + 1, iy + 1);
      const bool rising = kGridDiagonal == GridDiagonal::Rising ||
                          (kGridDiagonal == GridDiagonal::Alternating && (ix + iy) % 2 == 0);
      if (rising) {
        cells.push_back({v00, v10, v11});
        cells.push_back({v00, v11, v01});
      } else {
        cells.push_back({v00, v10, v01});
        cells.push_back({v10, v11, v01});
      }
    }
  }
  return Mesh(std::move(vertices), std::move(cells), refinement);
}

Mesh disk_mesh(int N) {
  std::vector<Point> vertices;
  vertices.emplace_back(0.0, 0.0);
  auto ring_offset = [](int j) { return j == 0 ? 0 : 1 + 4 * j * (j - 1); };
  auto ring_size = [](int j) { return j == 0 ? 1 : 8 * j; };
  for (int j = 1; j <= N; ++j) {
    const int n = ring_size(j);
    const double r = j == N ? 1.0 : static_cast<double>(j) / N;
    for (int m = 0; m < n; ++m) {
      const double ang = 2.0 * std::numbers::pi * m / n;
      vertices.emplace_back(r * std::cos(ang), r * std::sin(ang));
    }
  }
  std::vector<std::array<int, 3>> cells;
  for (int m = 0; m < 8; ++m) cells.push_back({0, 1 + m, 1 + (m + 1) % 8});
  for (int j = 2; j <= N; ++j) {
    const int nin = ring_size(j - 1), nout = ring_size(j);
    const int oin = ring_offset(j - 1), oout = ring_offset(j);
    auto in = [&](int a) { return oin + a % nin; };
    auto out = [&](int b) { return oout + b % nout; };
    // Merge the two rings by angle; (b+1)/nout <= (a+1)/nin decides which
    // ring advances, compared exactly in integers.
    int a = 0, b = 0;
    while (a < nin || b < nout) {
      const bool advance_outer =
          a == nin || (b < nout && static_cast<long>(b + 1) * nin <= static_cast<long>(a + 1) * nout);
      if (advance_outer) {
        cells.push_back({in(a), out(b), out(b + 1)});
        ++b;
      } else {
        cells.push_back({in(a), out(b), in(a + 1)});
        ++a;
      }
    }
  }
  return Mesh(std::move(vertices), std::move(cells), N);
}

}  // namespace

Mesh generate_mesh(const DomainSpec& spec, int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "refinement N must be >= 1");
  switch (spec.kind) {
    case DomainKind::UnitSquare:
      return grid_mesh(0.0, 0.0, N, N, N, N, [](int, int) { return true; });
    case DomainKind::LShape:
      return grid_mesh(-1.0, -1.0, N, 2 * N, 2 * N, N,
                       [N](int ix, int iy) { return ix >= N || iy >= N; });
    case DomainKind::Disk:
      return disk_mesh(N);
    case DomainKind::Imported:
      break;
  }
  throw Error(ErrorCode::Unsupported,
              "generate_mesh does not support domain kind '" + to_string(spec.kind) + "'");
}

}  // namespace elastmix
