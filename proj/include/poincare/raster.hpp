#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "poincare/domain_spec.hpp"
#include "poincare/types.hpp"

namespace poincare {

enum class CellState : std::uint8_t { Exterior = 0, Interior = 1, BoundaryAdjacent = 2 };

// Uniform-grid inner approximation of one fiber. A cell is interior when its
// center satisfies the formula; boundary-adjacent cells are interior cells
// with at least one face neighbor that is not interior (grid edge included).
// Cells are stored x-fastest.
struct RasterDomain {
  int dim = 0;
  double h = 0.0;
  Point origin{0.0, 0.0, 0.0};  // lower corner of cell (0,0,0)
  std::array<int, 3> counts{1, 1, 1};
  ParamVector t;
  std::uint64_t id = 0;  // identifies the raster operators and fields were built on

  std::vector<CellState> state;
  std::vector<std::int32_t> interior_id;    // per cell; -1 when not interior
  std::vector<std::size_t> interior_cells;  // interior id -> cell index

  bool empty() const { return interior_cells.empty(); }
  std::size_t cell_count() const { return state.size(); }
  std::size_t interior_count() const { return interior_cells.size(); }
  bool is_interior(std::size_t cell) const { return state[cell] != CellState::Exterior; }

  std::size_t index(const std::array<int, 3>& ijk) const {
    return static_cast<std::size_t>(ijk[0]) +
           static_cast<std::size_t>(counts[0]) * (static_cast<std::size_t>(ijk[1]) + static_cast<std::size_t>(counts[1]) * ijk[2]);
  }
  std::array<int, 3> coords(std::size_t cell) const {
    std::array<int, 3> c{0, 0, 0};
    c[0] = static_cast<int>(cell % counts[0]);
    cell /= counts[0];
    c[1] = static_cast<int>(cell % counts[1]);
    c[2] = static_cast<int>(cell / counts[1]);
    return c;
  }
  bool in_grid(const std::array<int, 3>& ijk) const {
    for (int a = 0; a < 3; ++a)
      if (ijk[a] < 0 || ijk[a] >= counts[a]) return false;
    return true;
  }
  Point center(const std::array<int, 3>& ijk) const {
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) p[a] = origin[a] + (ijk[a] + 0.5) * h;
    return p;
  }
  Point center(std::size_t cell) const { return center(coords(cell)); }
  // True when neighbor ijk + offset*e_axis is an interior cell.
  bool interior_neighbor(const std::array<int, 3>& ijk, int axis, int offset) const {
    auto n = ijk;
    n[axis] += offset;
    return in_grid(n) && is_interior(index(n));
  }
};

// Rasterizes Omega_t with h = (longest box side) / resolution. An empty
// interior is returned as data (raster.empty()), not an error.
RasterDomain rasterize(const DomainSpec& spec, const ParamVector& t, int resolution);

// (interior cell count) * h^n.
double volume(const RasterDomain& raster);

// Longest run of consecutive interior cells along an axis, times h.
double thickness_discrete(const RasterDomain& raster, int axis);

// Number of face-connected components of interior cells whose centers lie in
// the open ball B(x, eps). Requires eps >= 3h.
int local_components(const RasterDomain& raster, const Point& x, double eps);

// 8-bit binary graymap (interior 255, boundary-adjacent 128, exterior 0),
// top row = largest y. 2D rasters only.
void write_pgm(const RasterDomain& raster, const std::filesystem::path& path);

// Flat uint8 mask (CellState values, x-fastest) plus a JSON sidecar with
// dims, h, origin and t.
void write_mask(const RasterDomain& raster, const std::filesystem::path& bin_path, const std::filesystem::path& json_path);

// Flat little-endian float64 values per grid cell (zero off the interior)
// with the same sidecar layout; used for eigenvector dumps.
void write_cell_values(const RasterDomain& raster, std::span<const double> interior_values,
                       const std::filesystem::path& bin_path, const std::filesystem::path& json_path);

}  // namespace poincare
