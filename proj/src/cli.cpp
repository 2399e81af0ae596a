#include "profbench/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "profbench/adversarial.hpp"
#include "profbench/error.hpp"
#include "profbench/ingest.hpp"
#include "profbench/nested.hpp"
#include "profbench/ratios.hpp"
#include "profbench/report.hpp"

namespace profbench::cli {
namespace {

// Bad flag value; reported with exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_real(const std::string& flag, const std::string& text) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw UsageError(flag + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& flag, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(flag + ": expected an integer, got '" + text + "'");
  }
  return v;
}

// Raw flag text shared by the profile-computing subcommands.
struct ProfileFlags {
  std::string waves = "all";
  std::string rule = "wins";
  std::string rm = "auto";
  std::string tie = "first";
  std::optional<std::string> tau;
};

struct IoFlags {
  std::string input = "-";
  std::string inputFormat;
  std::string output;
  std::string format;
};

void add_profile_flags(CLI::App* cmd, ProfileFlags& f, bool nested) {
  if (nested) {
    cmd->add_option("--waves", f.waves, "number of waves k, or 'all' for n_s - 1");
    cmd->add_option("--rule", f.rule, "best-solver rule: wins | mean");
    cmd->add_option("--tie", f.tie, "tie-break: first | seed:N");
  }
  cmd->add_option("--rm", f.rm, "failure ratio r_M: VALUE | auto");
  cmd->add_option("--tau", f.tau, "reporting tau");
}

void add_io_flags(CLI::App* cmd, IoFlags& f, bool takes_input) {
  if (takes_input) {
    cmd->add_option("input", f.input, "timing table (CSV or JSON); '-' reads stdin");
    cmd->add_option("--input-format", f.inputFormat, "csv | json (default: by extension)");
  }
  cmd->add_option("-o,--output", f.output, "output file (default: stdout)");
  cmd->add_option("--format", f.format, "output format");
}

ProfileConfigd to_config(const ProfileFlags& f) {
  ProfileConfigd cfg;
  if (f.waves != "all") {
    const long long k = parse_int("--waves", f.waves);
    if (k < 1) throw UsageError("--waves: must be 'all' or a positive integer");
    cfg.waves = static_cast<Index>(k);
  }
  if (f.rule == "wins") {
    cfg.rule = SelectionRule::Wins;
  } else if (f.rule == "mean") {
    cfg.rule = SelectionRule::MeanRatio;
  } else {
    throw UsageError("--rule: expected 'wins' or 'mean', got '" + f.rule + "'");
  }
  if (f.rm != "auto") {
    const double rm = parse_real("--rm", f.rm);
    if (!(rm > 0)) throw UsageError("--rm: must be positive");
    cfg.rM = rm;
  }
  if (f.tie == "first") {
    cfg.tieBreak = TieBreak::first_index();
  } else if (f.tie.rfind("seed:", 0) == 0) {
    const long long seed = parse_int("--tie", f.tie.substr(5));
    if (seed < 0) throw UsageError("--tie: seed must be non-negative");
    cfg.tieBreak = TieBreak::seeded(static_cast<std::uint64_t>(seed));
  } else {
    throw UsageError("--tie: expected 'first' or 'seed:N', got '" + f.tie + "'");
  }
  if (f.tau) cfg.reportingTau = parse_real("--tau", *f.tau);
  return cfg;
}

Format output_format(const IoFlags& f, Format fallback) {
  if (!f.format.empty()) {
    try {
      return parse_format(f.format);
    } catch (const Error&) {
      throw UsageError("--format: expected 'csv' or 'json', got '" + f.format + "'");
    }
  }
  return f.output.empty() ? fallback : format_from_path(f.output);
}

Format input_format(const IoFlags& f) {
  if (!f.inputFormat.empty()) {
    try {
      return parse_format(f.inputFormat);
    } catch (const Error&) {
      throw UsageError("--input-format: expected 'csv' or 'json', got '" + f.inputFormat + "'");
    }
  }
  return f.input == "-" ? Format::Csv : format_from_path(f.input);
}

TimingMatrixd read_input(const IoFlags& f, Format fmt, std::istream& in) {
  if (f.input == "-") return parse_timings(in, fmt);
  std::ifstream file(f.input, std::ios::binary);
  if (!file) throw Error(ErrorKind::FormatError, "cannot open '" + f.input + "'");
  return parse_timings(file, fmt);
}

void write_output(const IoFlags& f, const std::string& text, std::ostream& out) {
  if (f.output.empty() || f.output == "-") {
    out << text;
    return;
  }
  std::ofstream file(f.output, std::ios::binary);
  if (!file || !(file << text)) throw Error(ErrorKind::FormatError, "cannot write '" + f.output + "'");
}

std::string join(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) out += (out.empty() ? "" : " ") + l;
  return out;
}

std::string flip_text(const FlipReport& r, Format fmt) {
  const auto names = [&](const std::vector<Index>& order) { return labels_of(r.solvers, order); };
  if (fmt == Format::Json) {
    nlohmann::ordered_json j;
    j["classicFull"] = names(r.classicFull);
    j["classicBest"] = r.solvers[std::size_t(r.classicBest)];
    j["classicReduced"] = names(r.classicReduced);
    j["flipped"] = r.flipped;
    j["nestedRanking"] = names(r.nestedRanking);
    j["nestedReduced"] = names(r.nestedReduced);
    j["nestedStable"] = r.nestedStable;
    return j.dump() + "\n";
  }
  std::string out;
  out += "classic_full: " + join(names(r.classicFull)) + "\n";
  out += "classic_best: " + r.solvers[std::size_t(r.classicBest)] + "\n";
  out += "classic_reduced: " + join(names(r.classicReduced)) + "\n";
  out += std::string("flipped: ") + (r.flipped ? "true" : "false") + "\n";
  out += "nested_ranking: " + join(names(r.nestedRanking)) + "\n";
  out += "nested_reduced: " + join(names(r.nestedReduced)) + "\n";
  out += std::string("nested_stable: ") + (r.nestedStable ? "true" : "false") + "\n";
  return out;
}

std::string rank_table(const NestedResultd& result, bool color) {
  const auto& solvers = result.solvers();
  const double tau = result.config.reportingTau;
  std::size_t width = 6;
  for (const auto& s : solvers) width = std::max(width, s.size());
  const auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  const std::string bold = color ? "\x1b[1m" : "";
  const std::string reset = color ? "\x1b[0m" : "";
  const std::string rho_head = "rho(" + format_number(tau) + ")";

  std::string out = bold + pad("rank", 6) + pad("solver", width + 2) + pad(rho_head, 22) + "basis" + reset + "\n";
  for (std::size_t i = 0; i < result.ranking.size(); ++i) {
    const Index s = result.ranking[i];
    const std::string basis = i < result.eliminated.size()
                                  ? "eliminated as best in wave " + std::to_string(i + 1)
                                  : "ordered by overall rho at tau (convention)";
    out += pad(std::to_string(i + 1), 6) + pad(solvers[std::size_t(s)], width + 2) +
           pad(format_number(result.overall[std::size_t(s)](tau)), 22) + basis + "\n";
  }
  return out;
}

std::vector<Index> parse_sizes(const std::string& text) {
  std::vector<Index> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long long v = parse_int("--sizes", item);
    if (v < 1) throw UsageError("--sizes: partition sizes must be positive");
    sizes.push_back(static_cast<Index>(v));
  }
  if (sizes.empty()) throw UsageError("--sizes: expected a comma-separated list");
  return sizes;
}

PlotSpec to_plot_spec(bool log2, const std::string& tau_max, int width, int height, const std::string& title) {
  PlotSpec spec;
  spec.logScale = log2;
  spec.width = width;
  spec.height = height;
  if (!title.empty()) spec.title = title;
  if (tau_max.rfind("frac:", 0) == 0) {
    const double f = parse_real("--tau-max", tau_max.substr(5));
    if (!(f > 0 && f <= 1)) throw UsageError("--tau-max: fraction must lie in (0, 1]");
    spec.tauMax = AutoFraction{f};
  } else {
    spec.tauMax = parse_real("--tau-max", tau_max);
  }
  if (width <= 0 || height <= 0) throw UsageError("--width/--height: must be positive");
  return spec;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
        bool color) {
  CLI::App app{"Classic and nested performance profiles for solver benchmarks", "profbench"};
  app.require_subcommand(1, 1);

  ProfileFlags pf;
  IoFlags io;

  auto* profile = app.add_subcommand("profile", "classic performance profiles (csv | json)");
  add_profile_flags(profile, pf, false);
  add_io_flags(profile, io, true);

  auto* nested = app.add_subcommand("nested", "nested performance profiles (json | csv)");
  add_profile_flags(nested, pf, true);
  add_io_flags(nested, io, true);

  auto* rank = app.add_subcommand("rank", "ranking table with overall rho at --tau");
  add_profile_flags(rank, pf, true);
  add_io_flags(rank, io, true);

  long long n_solvers = 0;
  std::string sizes;
  double base = 1.0;
  auto* gen = app.add_subcommand("gen", "write an adversarial timing table");
  gen->add_option("--solvers", n_solvers, "number of solvers (>= 3)")->required();
  gen->add_option("--sizes", sizes, "partition sizes a,b,c,...");
  gen->add_option("--base", base, "time scale");
  add_io_flags(gen, io, false);

  auto* flipcheck = app.add_subcommand("flipcheck", "detect a ranking flip after removing the best solver");
  add_profile_flags(flipcheck, pf, true);
  add_io_flags(flipcheck, io, true);

  bool log2 = false;
  std::string tau_max = "frac:0.6";
  std::string which = "nested";
  int width = 640;
  int height = 420;
  std::string title;
  auto* plot = app.add_subcommand("plot", "render profiles as SVG");
  add_profile_flags(plot, pf, true);
  add_io_flags(plot, io, true);
  plot->add_flag("--log2", log2, "log2 tau axis");
  plot->add_option("--tau-max", tau_max, "axis end: VALUE | frac:F (F x max finite ratio)");
  plot->add_option("--which", which, "classic | nested");
  plot->add_option("--width", width, "pixels");
  plot->add_option("--height", height, "pixels");
  plot->add_option("--title", title, "plot title");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run 'profbench --help' for usage\n";
    return kUsageError;
  }

  try {
    // Validate every flag before touching input.
    const ProfileConfigd cfg = to_config(pf);

    if (*gen) {
      if (n_solvers < 3) throw UsageError("--solvers: need at least 3");
      const auto n = static_cast<Index>(n_solvers);
      AdversarialSpec spec = sizes.empty() ? default_spec(n) : AdversarialSpec{n, parse_sizes(sizes), 1.0};
      spec.timeBase = base;
      const Format fmt = output_format(io, Format::Csv);
      write_output(io, write_timings(generate(spec), fmt), out);
      return kOk;
    }

    std::optional<PlotSpec> plot_spec;
    if (*plot) {
      if (which != "classic" && which != "nested") {
        throw UsageError("--which: expected 'classic' or 'nested', got '" + which + "'");
      }
      plot_spec = to_plot_spec(log2, tau_max, width, height, title);
    }
    const Format in_fmt = input_format(io);

    if (*profile) {
      const Format fmt = output_format(io, Format::Csv);
      const auto m = read_input(io, in_fmt, in);
      const auto curves = classic_curves(compute_ratios(m, cfg.rM));
      if (!pf.tau) {
        write_output(io, export_curves(curves, fmt), out);
        return kOk;
      }
      const double tau = cfg.reportingTau;
      std::string text;
      if (fmt == Format::Csv) {
        text = "tau";
        for (const auto& l : curves.labels) text += "," + l;
        text += "\n" + format_number(tau);
        for (const auto& c : curves.curves) text += "," + format_number(c(tau));
        text += "\n";
      } else {
        nlohmann::ordered_json j;
        j["tau"] = tau;
        for (std::size_t i = 0; i < curves.curves.size(); ++i) j["values"][curves.labels[i]] = curves.curves[i](tau);
        text = j.dump() + "\n";
      }
      write_output(io, text, out);
      return kOk;
    }

    if (*nested) {
      const Format fmt = output_format(io, Format::Json);
      const auto m = read_input(io, in_fmt, in);
      write_output(io, export_curves(nested_profiles(m, cfg), fmt), out);
      return kOk;
    }

    if (*rank) {
      const auto m = read_input(io, in_fmt, in);
      const bool styled = color && std::getenv("PROFBENCH_NO_COLOR") == nullptr;
      write_output(io, rank_table(nested_profiles(m, cfg), styled), out);
      return kOk;
    }

    if (*flipcheck) {
      Format fmt = Format::Csv;  // text
      if (!io.format.empty()) {
        if (io.format == "json") {
          fmt = Format::Json;
        } else if (io.format != "text") {
          throw UsageError("--format: expected 'text' or 'json', got '" + io.format + "'");
        }
      }
      const auto m = read_input(io, in_fmt, in);
      write_output(io, flip_text(check_flip(m, cfg), fmt), out);
      return kOk;
    }

    if (*plot) {
      const auto m = read_input(io, in_fmt, in);
      const CurveSet curves =
          which == "classic" ? classic_curves(compute_ratios(m, cfg.rM)) : overall_curves(nested_profiles(m, cfg));
      write_output(io, render_svg(curves, *plot_spec), out);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace profbench::cli
