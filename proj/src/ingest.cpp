#include "profbench/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "profbench/error.hpp"

namespace profbench {
namespace {

using Cell = std::optional<double>;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool is_failure_token(std::string_view token) {
  const std::string t = lower(token);
  return t.empty() || t == "fail" || t == "nan";
}

double checked_time(double value, Location where) {
  if (!std::isfinite(value) || !(value > 0)) {
    throw Error(ErrorKind::InvalidTime, "time must be finite and > 0", where);
  }
  return value;
}

Cell parse_cell(std::string_view raw, Location where) {
  std::string_view token = trim(raw);
  if (is_failure_token(token)) return std::nullopt;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw Error(ErrorKind::InvalidTime, "time out of range", where);
  }
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorKind::FormatError, "cannot parse '" + std::string(raw) + "' as a time", where);
  }
  return checked_time(value, where);
}

struct Field {
  std::string text;
  bool quoted = false;
};

// Splits one CSV record. Double-quoted fields may contain commas and doubled
// quotes; quoted fields must not span lines.
std::vector<Field> split_record(std::string_view line, std::size_t row) {
  std::vector<Field> fields(1);
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    Field& f = fields.back();
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          f.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        f.text += c;
      }
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c == '"' && trim(f.text).empty()) {
      f.text.clear();
      f.quoted = true;
      in_quotes = true;
    } else {
      f.text += c;
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::FormatError, "unterminated quoted field", Location{row, fields.size()});
  }
  return fields;
}

std::string label_of(const Field& f) { return f.quoted ? f.text : std::string(trim(f.text)); }

void require_unique_labels(const std::vector<std::string>& labels, bool by_column, std::size_t fixed,
                           std::size_t offset) {
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = seen.emplace(labels[i], i);
    if (!fresh) {
      const Location where = by_column ? Location{fixed, i + offset} : Location{i + offset, fixed};
      throw Error(ErrorKind::DuplicateLabel, "label '" + labels[i] + "' repeated", where);
    }
  }
}

TimingMatrixd parse_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string> problems;
  std::vector<std::string> solvers;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::size_t> problem_rows;
  std::size_t row = 0;
  bool have_header = false;

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }

    auto fields = split_record(line, row);
    if (!have_header) {
      if (fields.size() < 2) {
        throw Error(ErrorKind::ShapeError, "header needs a problem column and at least one solver",
                    Location{row, 1});
      }
      for (std::size_t c = 1; c < fields.size(); ++c) solvers.push_back(label_of(fields[c]));
      require_unique_labels(solvers, true, row, 2);
      have_header = true;
    } else {
      if (fields.size() != solvers.size() + 1) {
        throw Error(ErrorKind::ShapeError,
                    "expected " + std::to_string(solvers.size() + 1) + " fields, found " +
                        std::to_string(fields.size()),
                    Location{row, fields.size()});
      }
      problems.push_back(label_of(fields[0]));
      problem_rows.push_back(row);
      std::vector<Cell> cells;
      for (std::size_t c = 1; c < fields.size(); ++c) {
        cells.push_back(parse_cell(fields[c].text, Location{row, c + 1}));
      }
      rows.push_back(std::move(cells));
    }
    if (end == text.size()) break;
  }
  if (!have_header) throw Error(ErrorKind::ShapeError, "empty input: no header row");
  if (problems.empty()) throw Error(ErrorKind::ShapeError, "no problem rows", Location{row, 1});
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (!seen.emplace(problems[i], i).second) {
      throw Error(ErrorKind::DuplicateLabel, "problem label '" + problems[i] + "' repeated",
                  Location{problem_rows[i], 1});
    }
  }
  return TimingMatrixd::from_rows(std::move(problems), std::move(solvers), rows);
}

std::vector<std::string> string_array(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw Error(ErrorKind::FormatError, std::string("missing array '") + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& v : doc[key]) {
    if (!v.is_string()) throw Error(ErrorKind::FormatError, std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

TimingMatrixd parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::FormatError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::FormatError, "top-level value must be an object");
  auto problems = string_array(doc, "problems");
  auto solvers = string_array(doc, "solvers");
  require_unique_labels(problems, false, 1, 1);
  require_unique_labels(solvers, true, 1, 1);
  if (!doc.contains("times") || !doc["times"].is_array()) {
    throw Error(ErrorKind::FormatError, "missing array 'times'");
  }
  const auto& times = doc["times"];
  if (times.size() != problems.size()) {
    throw Error(ErrorKind::ShapeError, "'times' has " + std::to_string(times.size()) + " rows for " +
                                           std::to_string(problems.size()) + " problems");
  }
  std::vector<std::vector<Cell>> rows;
  for (std::size_t p = 0; p < times.size(); ++p) {
    const auto& row = times[p];
    if (!row.is_array() || row.size() != solvers.size()) {
      throw Error(ErrorKind::ShapeError, "row length does not match solver count", Location{p + 1, 0});
    }
    std::vector<Cell> cells;
    for (std::size_t s = 0; s < row.size(); ++s) {
      const Location where{p + 1, s + 1};
      const auto& v = row[s];
      if (v.is_number()) {
        cells.push_back(checked_time(v.get<double>(), where));
      } else if (v.is_null() || (v.is_string() && is_failure_token(trim(v.get<std::string>())))) {
        cells.push_back(std::nullopt);
      } else {
        throw Error(ErrorKind::FormatError, "cell must be a number or \"fail\"", where);
      }
    }
    rows.push_back(std::move(cells));
  }
  return TimingMatrixd::from_rows(std::move(problems), std::move(solvers), rows);
}

std::string csv_label(const std::string& label) {
  if (label.find_first_of("\r\n") != std::string::npos) {
    throw Error(ErrorKind::FormatError, "CSV labels cannot contain line breaks");
  }
  const bool plain = label.find_first_of(",\"") == std::string::npos && trim(label) == label &&
                     !label.empty();
  if (plain) return label;
  std::string out = "\"";
  for (char c : label) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string write_csv(const TimingMatrixd& m) {
  std::string out = "problem";
  for (const auto& s : m.solvers()) out += "," + csv_label(s);
  out += '\n';
  for (Index p = 0; p < m.num_problems(); ++p) {
    out += csv_label(m.problems()[std::size_t(p)]);
    for (Index s = 0; s < m.num_solvers(); ++s) {
      out += ',';
      out += m.failed(p, s) ? std::string("fail") : format_number(m.time(p, s));
    }
    out += '\n';
  }
  return out;
}

std::string write_json(const TimingMatrixd& m) {
  nlohmann::ordered_json doc;
  doc["problems"] = m.problems();
  doc["solvers"] = m.solvers();
  auto times = nlohmann::ordered_json::array();
  for (Index p = 0; p < m.num_problems(); ++p) {
    auto row = nlohmann::ordered_json::array();
    for (Index s = 0; s < m.num_solvers(); ++s) {
      if (m.failed(p, s)) {
        row.push_back("fail");
      } else {
        row.push_back(m.time(p, s));
      }
    }
    times.push_back(std::move(row));
  }
  doc["times"] = std::move(times);
  return doc.dump() + "\n";
}

}  // namespace

Format parse_format(std::string_view name) {
  const std::string n = lower(name);
  if (n == "csv") return Format::Csv;
  if (n == "json") return Format::Json;
  throw Error(ErrorKind::FormatError, "unknown format '" + std::string(name) + "'");
}

Format format_from_path(std::string_view path) {
  const std::string p = lower(path);
  return p.size() >= 5 && p.substr(p.size() - 5) == ".json" ? Format::Json : Format::Csv;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

TimingMatrixd parse_timings(std::string_view source, Format format) {
  return format == Format::Json ? parse_json(source) : parse_csv(source);
}

TimingMatrixd parse_timings(std::istream& in, Format format) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_timings(text, format);
}

std::string write_timings(const TimingMatrixd& m, Format format) {
  return format == Format::Json ? write_json(m) : write_csv(m);
}

}  // namespace profbench
