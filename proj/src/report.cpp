#include "profbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <json.hpp>

#include "profbench/error.hpp"

namespace profbench {
namespace {

using ojson = nlohmann::ordered_json;

ojson curve_json(const std::string& label, const ProfileCurved& c) {
  ojson j;
  j["solver"] = label;
  j["tau"] = std::vector<double>(c.taus().begin(), c.taus().end());
  j["count"] = std::vector<Count>(c.counts().begin(), c.counts().end());
  j["denominator"] = c.denominator();
  std::vector<double> values;
  for (Index i = 0; i < c.size(); ++i) values.push_back(c.value(i));
  j["value"] = values;
  return j;
}

ProfileCurved curve_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("tau") || !j.contains("count") || !j.contains("denominator")) {
    throw Error(ErrorKind::FormatError, "curve object needs tau, count and denominator");
  }
  const auto taus = j["tau"].get<std::vector<double>>();
  const auto counts = j["count"].get<std::vector<Count>>();
  return ProfileCurved(Eigen::Map<const Vector<double>>(taus.data(), Index(taus.size())),
                       Eigen::Map<const CountVector>(counts.data(), Index(counts.size())),
                       j["denominator"].get<Count>());
}

ojson curves_json(const std::vector<std::string>& labels, const std::vector<ProfileCurved>& curves) {
  auto arr = ojson::array();
  for (std::size_t i = 0; i < curves.size(); ++i) arr.push_back(curve_json(labels[i], curves[i]));
  return arr;
}

std::string rule_name(SelectionRule rule) { return rule == SelectionRule::Wins ? "wins" : "mean"; }

std::string tie_name(const TieBreak& t) {
  return t.kind == TieBreak::Kind::FirstIndex ? "first" : "seed:" + std::to_string(t.seed);
}

std::string curves_csv(const CurveSet& set) {
  std::string out = "tau";
  for (const auto& l : set.labels) out += "," + l;
  out += '\n';
  for (double tau : merged_breakpoints<double>(set.curves)) {
    out += format_number(tau);
    for (const auto& c : set.curves) out += "," + format_number(c(tau));
    out += '\n';
  }
  return out;
}

std::string fixed(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr const char* kDashes[] = {"", "6,3", "2,2", "8,3,2,3"};

}  // namespace

CurveSet classic_curves(const RatioMatrixd& r) {
  CurveSet set;
  set.rM = r.rM;
  for (Index s = 0; s < r.num_solvers(); ++s) {
    if (!r.is_rated(s)) continue;
    set.labels.push_back(r.solvers[std::size_t(s)]);
    set.curves.push_back(compute_profile(r, s));
  }
  return set;
}

CurveSet overall_curves(const NestedResultd& result) {
  return CurveSet{result.solvers(), result.overall, result.rM};
}

std::string export_curves(const CurveSet& curves, Format format) {
  if (curves.curves.empty()) throw Error(ErrorKind::EmptyCurves, "nothing to export");
  if (curves.labels.size() != curves.curves.size()) {
    throw Error(ErrorKind::ShapeError, "curve labels and curves differ in count");
  }
  if (format == Format::Csv) return curves_csv(curves);
  ojson doc;
  if (curves.rM) doc["rM"] = *curves.rM;
  doc["curves"] = curves_json(curves.labels, curves.curves);
  return doc.dump() + "\n";
}

std::string export_curves(const NestedResultd& result, Format format) {
  if (format == Format::Csv) return export_curves(overall_curves(result), format);

  const auto& cfg = result.config;
  ojson config;
  if (cfg.rM) {
    config["rM"] = *cfg.rM;
  } else {
    config["rM"] = "auto";
  }
  config["rule"] = rule_name(cfg.rule);
  config["tieBreak"] = tie_name(cfg.tieBreak);
  if (cfg.waves) {
    config["waves"] = *cfg.waves;
  } else {
    config["waves"] = "all";
  }
  config["reportingTau"] = cfg.reportingTau;

  ojson doc;
  doc["solvers"] = result.solvers();
  doc["problems"] = result.problems();
  doc["config"] = config;
  doc["rM"] = result.rM;
  doc["k"] = result.k;
  doc["eliminated"] = labels_of(result.solvers(), result.eliminated);
  doc["ranking"] = labels_of(result.solvers(), result.ranking);
  doc["rankingConvention"] =
      "elimination order, then remaining solvers by overall rho at reportingTau (descending)";

  auto waves = ojson::array();
  for (std::size_t i = 0; i < result.waves.size(); ++i) {
    const auto& w = result.waves[i];
    ojson wave;
    std::vector<Index> active;
    for (Index s = 0; s < w.num_solvers(); ++s) {
      if (w.active[s]) active.push_back(s);
    }
    wave["active"] = labels_of(w.solvers, active);
    auto ratios = ojson::array();
    for (Index p = 0; p < w.num_problems(); ++p) {
      auto row = ojson::array();
      for (Index s = 0; s < w.num_solvers(); ++s) {
        if (w.rated[s]) {
          row.push_back(w.ratios(p, s));
        } else {
          row.push_back(nullptr);
        }
      }
      ratios.push_back(std::move(row));
    }
    wave["ratios"] = std::move(ratios);
    wave["profiles"] = curves_json(w.solvers, result.waveProfiles[i]);
    waves.push_back(std::move(wave));
  }
  doc["waves"] = std::move(waves);
  doc["overall"] = curves_json(result.solvers(), result.overall);
  return doc.dump(1) + "\n";
}

CurveSet import_curves_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json.begin(), json.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::FormatError, e.what());
  }
  const char* key = doc.contains("overall") ? "overall" : "curves";
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw Error(ErrorKind::FormatError, "expected a 'curves' or 'overall' array");
  }
  CurveSet set;
  try {
    if (doc.contains("rM") && doc["rM"].is_number()) set.rM = doc["rM"].get<double>();
    for (const auto& c : doc[key]) {
      set.labels.push_back(c.at("solver").get<std::string>());
      set.curves.push_back(curve_from_json(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::FormatError, e.what());
  }
  return set;
}

double max_finite_ratio(const CurveSet& set) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : set.curves) {
    for (double t : c.taus()) {
      if (!set.rM || t < *set.rM) best = std::max(best, t);
    }
  }
  return best;
}

namespace {

double domain_start(const CurveSet& set) {
  double start = std::numeric_limits<double>::infinity();
  for (const auto& c : set.curves) start = std::min(start, c.domain_start());
  return start;
}

double domain_end(const CurveSet& set) {
  double end = -std::numeric_limits<double>::infinity();
  for (const auto& c : set.curves) {
    if (!c.empty()) end = std::max(end, c.taus()[c.size() - 1]);
  }
  return end;
}

void require_plottable(const CurveSet& set, const PlotSpec& spec) {
  if (set.curves.empty()) throw Error(ErrorKind::EmptyCurves, "no curves to plot");
  if (set.labels.size() != set.curves.size()) {
    throw Error(ErrorKind::ShapeError, "curve labels and curves differ in count");
  }
  if (!std::isfinite(domain_start(set))) throw Error(ErrorKind::EmptyCurves, "all curves are empty");
  if (spec.width <= 0 || spec.height <= 0) throw Error(ErrorKind::InvalidConfig, "plot size must be positive");
  if (const auto* f = std::get_if<AutoFraction>(&spec.tauMax)) {
    if (!(f->fraction > 0 && f->fraction <= 1)) {
      throw Error(ErrorKind::InvalidConfig, "tau-max fraction must lie in (0, 1]");
    }
  }
  if (spec.logScale) {
    for (const auto& c : set.curves) {
      if (!c.empty() && !(c.domain_start() > 0)) {
        throw Error(ErrorKind::NonPositiveTauOnLogScale, "breakpoint tau <= 0 on a log2 axis");
      }
    }
  }
}

}  // namespace

double resolve_tau_max(const CurveSet& set, const PlotSpec& spec) {
  require_plottable(set, spec);
  const double start = domain_start(set);
  if (const auto* explicit_max = std::get_if<double>(&spec.tauMax)) {
    if (!std::isfinite(*explicit_max) || !(*explicit_max > start)) {
      throw Error(ErrorKind::InvalidConfig, "tau-max must exceed the domain start " + format_number(start));
    }
    return *explicit_max;
  }
  const double fraction = std::get<AutoFraction>(spec.tauMax).fraction;
  const double scaled = fraction * max_finite_ratio(set);
  if (scaled > start) return scaled;
  // Degenerate range: fall back to the full breakpoint range, then to a
  // doubling of the start.
  const double end = domain_end(set);
  return end > start ? end : 2 * start;
}

std::string render_svg(const CurveSet& set, const PlotSpec& spec) {
  const double tau_hi = resolve_tau_max(set, spec);
  const double tau_lo = domain_start(set);

  const auto axis = [&](double tau) { return spec.logScale ? std::log2(tau) : tau; };
  const double x_lo = axis(tau_lo);
  const double x_hi = axis(tau_hi);

  const double left = 60, right = 140, top = 40, bottom = 50;
  const double plot_w = std::max(1.0, spec.width - left - right);
  const double plot_h = std::max(1.0, spec.height - top - bottom);
  const auto px = [&](double tau) { return left + (axis(tau) - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double rho) { return top + (1.0 - rho) * plot_h; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(left + plot_w / 2) + "\" y=\"" + fixed(top / 2 + 5) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(spec.title) +
         "</text>\n";

  // Frame and grid.
  svg += "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(plot_w) +
         "\" height=\"" + fixed(plot_h) + "\"/>\n";
  svg += "</g>\n<g id=\"ticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double rho = i / 4.0;
    const std::string y = fixed(py(rho));
    svg += "<line x1=\"" + fixed(left - 4) + "\" y1=\"" + y + "\" x2=\"" + fixed(left) + "\" y2=\"" + y +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(py(rho) + 3) + "\" text-anchor=\"end\">" +
           tick_label(rho) + "</text>\n";
  }
  std::vector<double> xticks;
  if (spec.logScale) {
    for (double e = std::ceil(x_lo); e <= x_hi; e += 1) xticks.push_back(std::exp2(e));
  }
  if (xticks.size() < 2) {
    xticks.clear();
    for (int i = 0; i <= 4; ++i) {
      const double x = x_lo + (x_hi - x_lo) * i / 4.0;
      xticks.push_back(spec.logScale ? std::exp2(x) : x);
    }
  }
  for (double tau : xticks) {
    const std::string x = fixed(px(tau));
    const std::string y0 = fixed(top + plot_h);
    svg += "<line x1=\"" + x + "\" y1=\"" + y0 + "\" x2=\"" + x + "\" y2=\"" + fixed(top + plot_h + 4) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + fixed(top + plot_h + 16) + "\" text-anchor=\"middle\">" +
           tick_label(tau) + "</text>\n";
  }
  svg += "</g>\n";
  const std::string x_title = spec.logScale ? "log2(" + spec.xLabel + ")" : spec.xLabel;
  svg += "<text x=\"" + fixed(left + plot_w / 2) + "\" y=\"" + fixed(spec.height - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(x_title) +
         "</text>\n";
  svg += "<text x=\"14\" y=\"" + fixed(top + plot_h / 2) + "\" text-anchor=\"middle\" " +
         "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 " + fixed(top + plot_h / 2) +
         ")\">" + xml_escape(spec.yLabel) + "</text>\n";

  // Curves: horizontal run then vertical jump at each breakpoint in range,
  // ending with a horizontal run to tau_hi.
  svg += "<g id=\"curves\" fill=\"none\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < set.curves.size(); ++i) {
    const auto& c = set.curves[i];
    const std::string color = kPalette[i % std::size(kPalette)];
    const std::string dash = kDashes[(i / std::size(kPalette)) % std::size(kDashes)];
    std::string points;
    const auto add = [&](double tau, double rho) {
      if (!points.empty()) points += ' ';
      points += fixed(px(tau)) + "," + fixed(py(rho));
    };
    double level = c(tau_lo);
    add(tau_lo, level);
    for (Index b = 0; b < c.size(); ++b) {
      const double tau = c.tau(b);
      if (!(tau > tau_lo)) continue;
      if (tau > tau_hi) break;
      add(tau, level);
      level = c.value(b);
      add(tau, level);
    }
    add(tau_hi, level);
    svg += "<polyline stroke=\"" + color + "\"" +
           (dash[0] ? std::string(" stroke-dasharray=\"") + dash + "\"" : std::string()) + " points=\"" +
           points + "\"><title>" + xml_escape(set.labels[i]) + "</title></polyline>\n";
  }
  svg += "</g>\n";

  // Legend.
  const double lx = left + plot_w + 12;
  svg += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect x=\"" + fixed(lx - 4) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(right - 16) +
         "\" height=\"" + fixed(16.0 * set.curves.size() + 8) + "\" fill=\"white\" stroke=\"#888888\"/>\n";
  for (std::size_t i = 0; i < set.curves.size(); ++i) {
    const double y = top + 14 + 16.0 * i;
    const std::string color = kPalette[i % std::size(kPalette)];
    const std::string dash = kDashes[(i / std::size(kPalette)) % std::size(kDashes)];
    svg += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(y - 4) + "\" x2=\"" + fixed(lx + 20) + "\" y2=\"" +
           fixed(y - 4) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
           (dash[0] ? std::string(" stroke-dasharray=\"") + dash + "\"" : std::string()) + "/>\n";
    svg += "<text x=\"" + fixed(lx + 26) + "\" y=\"" + fixed(y) + "\">" + xml_escape(set.labels[i]) +
           "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace profbench
