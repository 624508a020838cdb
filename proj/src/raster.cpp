#include "poincare/raster.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>

#include <json.hpp>

#include "poincare/error.hpp"

namespace poincare {

namespace {

std::atomic<std::uint64_t> next_raster_id{1};

nlohmann::ordered_json sidecar(const RasterDomain& r, const char* dtype) {
  nlohmann::ordered_json j;
  j["dim"] = r.dim;
  j["dims"] = std::vector<int>(r.counts.begin(), r.counts.begin() + r.dim);
  j["h"] = r.h;
  j["origin"] = std::vector<double>(r.origin.begin(), r.origin.begin() + r.dim);
  j["t"] = r.t;
  j["layout"] = "x-fastest";
  j["dtype"] = dtype;
  return j;
}

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace

RasterDomain rasterize(const DomainSpec& spec, const ParamVector& t, int resolution) {
  if (resolution < 4) throw std::invalid_argument("raster resolution must be at least 4");
  const Fiber fiber(spec, t);
  RasterDomain r;
  r.dim = spec.ambient_dim;
  r.t = t;
  r.id = next_raster_id.fetch_add(1);
  double longest = 0.0;
  for (const auto& b : spec.bounding_box) longest = std::max(longest, b.width());
  r.h = longest / resolution;
  for (int a = 0; a < r.dim; ++a) {
    const auto& b = spec.bounding_box[a];
    r.origin[a] = b.lo;
    r.counts[a] = std::max(1, static_cast<int>(std::ceil(b.width() / r.h - 1e-9)));
  }
  const std::size_t total = static_cast<std::size_t>(r.counts[0]) * r.counts[1] * r.counts[2];
  r.state.assign(total, CellState::Exterior);
  r.interior_id.assign(total, -1);
  for (std::size_t c = 0; c < total; ++c) {
    const Point p = r.center(c);
    if (!fiber.in_box(p)) continue;
    if (fiber.contains(p)) r.state[c] = CellState::Interior;
  }
  for (std::size_t c = 0; c < total; ++c) {
    if (r.state[c] == CellState::Exterior) continue;
    r.interior_id[c] = static_cast<std::int32_t>(r.interior_cells.size());
    r.interior_cells.push_back(c);
    const auto ijk = r.coords(c);
    for (int a = 0; a < r.dim; ++a) {
      if (!r.interior_neighbor(ijk, a, -1) || !r.interior_neighbor(ijk, a, +1)) {
        r.state[c] = CellState::BoundaryAdjacent;
        break;
      }
    }
  }
  return r;
}

double volume(const RasterDomain& raster) {
  return static_cast<double>(raster.interior_count()) * std::pow(raster.h, raster.dim);
}

double thickness_discrete(const RasterDomain& raster, int axis) {
  if (axis < 0 || axis >= raster.dim) throw std::invalid_argument("axis out of range");
  int best = 0;
  for (std::size_t c : raster.interior_cells) {
    auto ijk = raster.coords(c);
    if (raster.interior_neighbor(ijk, axis, -1)) continue;  // not a run start
    int run = 0;
    while (raster.in_grid(ijk) && raster.is_interior(raster.index(ijk))) {
      ++run;
      ++ijk[axis];
    }
    best = std::max(best, run);
  }
  return best * raster.h;
}

int local_components(const RasterDomain& raster, const Point& x, double eps) {
  if (!(eps >= 3.0 * raster.h * (1.0 - 1e-12))) throw std::invalid_argument("local_components needs eps >= 3h");
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};
  for (int a = 0; a < raster.dim; ++a) {
    lo[a] = std::max(0, static_cast<int>(std::floor((x[a] - eps - raster.origin[a]) / raster.h)) - 1);
    hi[a] = std::min(raster.counts[a] - 1, static_cast<int>(std::ceil((x[a] + eps - raster.origin[a]) / raster.h)) + 1);
    if (lo[a] > hi[a]) return 0;
  }
  auto in_ball = [&](const std::array<int, 3>& ijk) {
    if (!raster.in_grid(ijk) || !raster.is_interior(raster.index(ijk))) return false;
    const Point c = raster.center(ijk);
    double d2 = 0.0;
    for (int a = 0; a < raster.dim; ++a) d2 += (c[a] - x[a]) * (c[a] - x[a]);
    return d2 < eps * eps;
  };
  std::vector<char> seen(raster.cell_count(), 0);
  int components = 0;
  std::array<int, 3> ijk{0, 0, 0};
  for (ijk[2] = lo[2]; ijk[2] <= hi[2]; ++ijk[2]) {
    for (ijk[1] = lo[1]; ijk[1] <= hi[1]; ++ijk[1]) {
      for (ijk[0] = lo[0]; ijk[0] <= hi[0]; ++ijk[0]) {
        if (!in_ball(ijk) || seen[raster.index(ijk)]) continue;
        ++components;
        std::deque<std::array<int, 3>> queue{ijk};
        seen[raster.index(ijk)] = 1;
        while (!queue.empty()) {
          auto cur = queue.front();
          queue.pop_front();
          for (int a = 0; a < raster.dim; ++a) {
            for (int off : {-1, 1}) {
              auto n = cur;
              n[a] += off;
              if (!in_ball(n) || seen[raster.index(n)]) continue;
              seen[raster.index(n)] = 1;
              queue.push_back(n);
            }
          }
        }
      }
    }
  }
  return components;
}

void write_pgm(const RasterDomain& raster, const std::filesystem::path& path) {
  if (raster.dim != 2) throw std::invalid_argument("graymap export needs a 2D raster");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << raster.counts[0] << " " << raster.counts[1] << "\n255\n";
  std::vector<unsigned char> row(raster.counts[0]);
  for (int j = raster.counts[1] - 1; j >= 0; --j) {
    for (int i = 0; i < raster.counts[0]; ++i) {
      switch (raster.state[raster.index({i, j, 0})]) {
        case CellState::Exterior: row[i] = 0; break;
        case CellState::Interior: row[i] = 255; break;
        case CellState::BoundaryAdjacent: row[i] = 128; break;
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

void write_mask(const RasterDomain& raster, const std::filesystem::path& bin_path, const std::filesystem::path& json_path) {
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + bin_path.string());
  static_assert(sizeof(CellState) == 1);
  out.write(reinterpret_cast<const char*>(raster.state.data()), static_cast<std::streamsize>(raster.state.size()));
  auto j = sidecar(raster, "uint8");
  j["values"] = {{"exterior", 0}, {"interior", 1}, {"boundary_adjacent", 2}};
  write_json(j, json_path);
}

void write_cell_values(const RasterDomain& raster, std::span<const double> interior_values,
                       const std::filesystem::path& bin_path, const std::filesystem::path& json_path) {
  if (interior_values.size() != raster.interior_count()) throw RasterMismatch("field size does not match raster");
  static_assert(std::endian::native == std::endian::little, "float64 dumps assume a little-endian host");
  std::vector<double> full(raster.cell_count(), 0.0);
  for (std::size_t k = 0; k < interior_values.size(); ++k) full[raster.interior_cells[k]] = interior_values[k];
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + bin_path.string());
  out.write(reinterpret_cast<const char*>(full.data()), static_cast<std::streamsize>(full.size() * sizeof(double)));
  write_json(sidecar(raster, "float64"), json_path);
}

}  // namespace poincare
