#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "profbench/ingest.hpp"
#include "profbench/nested.hpp"
#include "profbench/profile_curve.hpp"
#include "profbench/ratios.hpp"

namespace profbench {

// Named curves to export or plot. `rM`, when known, separates failure
// breakpoints from finite ratios.
struct CurveSet {
  std::vector<std::string> labels;
  std::vector<ProfileCurved> curves;
  std::optional<double> rM;
};

// Wave-1 profiles of every rated solver.
CurveSet classic_curves(const RatioMatrixd& r);
CurveSet overall_curves(const NestedResultd& result);

// CSV: `tau,<label>...`, one row per merged breakpoint, values right-continuous.
// JSON: curves as {"solver","tau","count","denominator","value"} objects.
std::string export_curves(const CurveSet& curves, Format format);

// CSV holds the overall curves; JSON mirrors the whole result.
std::string export_curves(const NestedResultd& result, Format format);

// Reads the JSON written by either export_curves overload (the overall
// curves, for a nested result).
CurveSet import_curves_json(std::string_view json);

struct AutoFraction {
  double fraction = 0.6;
};

struct PlotSpec {
  bool logScale = false;  // base-2 tau axis
  std::variant<double, AutoFraction> tauMax = AutoFraction{};
  int width = 640;
  int height = 420;
  std::string title = "Performance profile";
  std::string xLabel = "tau";
  std::string yLabel = "rho(tau)";
};

// Largest breakpoint strictly below r_M (or the largest breakpoint when r_M
// is unknown).
double max_finite_ratio(const CurveSet& curves);

// Right end of the tau axis for this plot.
double resolve_tau_max(const CurveSet& curves, const PlotSpec& spec);

// Standalone SVG 1.1 document with one step polyline per curve and a legend.
std::string render_svg(const CurveSet& curves, const PlotSpec& spec);

}  // namespace profbench
