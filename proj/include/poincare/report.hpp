#pragma once

#include <filesystem>
#include <ostream>

#include <json.hpp>

#include "poincare/cells.hpp"
#include "poincare/domain_spec.hpp"
#include "poincare/error.hpp"
#include "poincare/harness.hpp"
#include "poincare/raster.hpp"
#include "poincare/sobolev.hpp"
#include "poincare/tangent.hpp"
#include "poincare/thickness.hpp"
#include "poincare/trace.hpp"

namespace poincare {

using Json = nlohmann::ordered_json;

// Finite doubles as numbers; infinities and NaN as the strings "inf",
// "-inf" and "nan" so they survive a round trip.
Json number(double v);

Json to_json(const Direction& d);
Json to_json(const Error& e);
Json to_json(const BoxAudit& audit);
Json to_json(const RasterDomain& raster);  // summary, no mask
Json to_json(const ThicknessResult& r);
Json to_json(const PoincareEstimate& e);  // minimizer omitted
Json to_json(const CheckRecord& r);
Json to_json(const MarginReport& r);
Json to_json(const CellComplex2D& complex);
Json to_json(const TraceReport& r);
Json to_json(const FiberRecord& r);
Json to_json(const SweepReport& r);
Json to_json(const LemmaResult& r);
Json to_json(const UniformTrend& r);

// One row per fiber: parameters, then the record's scalar fields.
void write_fibers_csv(const SweepReport& report, std::ostream& out);

// Two-column files: t vs C_p and t vs C_p / vol^{1/n} (first parameter;
// the fiber index when the family has no parameter).
void write_plot_constant(const SweepReport& report, std::ostream& out);
void write_plot_ratio(const SweepReport& report, std::ostream& out);

void write_json_file(const Json& j, const std::filesystem::path& path);

}  // namespace poincare
