#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "profbench/timing_matrix.hpp"

namespace profbench {

enum class Format { Csv, Json };

// "csv" or "json", case-insensitive; anything else is a FormatError.
Format parse_format(std::string_view name);

// Format implied by a file name's extension; CSV unless it ends in ".json".
Format format_from_path(std::string_view path);

// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

// CSV:  problem,<solver1>,...,<solverN>
//       <problem>,<cell>,...          cell = decimal | fail | nan | empty
// JSON: {"problems":[...],"solvers":[...],"times":[[...], ...]}
//       with numbers or "fail" in the row-major times array.
//
// Errors carry 1-based (row, col) locations; for CSV row 1 is the header and
// column 1 holds problem labels.
TimingMatrixd parse_timings(std::string_view source, Format format);
TimingMatrixd parse_timings(std::istream& in, Format format);

std::string write_timings(const TimingMatrixd& m, Format format);

}  // namespace profbench
