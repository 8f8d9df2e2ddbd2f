#pragma once

// Orderings and file formats for operators, states and grids.
//
// JSON documents carry "schema": 1 and the frame header (d, n, poly, basis).
// Doubles are written in shortest round-trip form, so export followed by
// import reproduces every value bit for bit.

#include <filesystem>
#include <string>
#include <vector>

#include "qps/quasidist.hpp"

namespace qps {

inline constexpr int kSchemaVersion = 1;

/// Display order of the field elements along a grid axis.
struct Ordering {
  std::string name;                   // "lex", "dlog" or "file:<path>"
  std::vector<FieldElement> elements; // a permutation of the field
};

/// Frame order: lexicographic coordinate tuples in the frame basis.
Ordering lex_ordering(const Frame& frame);
/// 0, s^0, s^1, ..., s^(q-2).
Ordering dlog_ordering(const Frame& frame);
/// Element labels separated by whitespace or commas; must be a permutation.
Ordering parse_ordering(const Frame& frame, std::string_view text, std::string name);
Ordering load_ordering(const Frame& frame, const std::filesystem::path& path);
/// "lex", "dlog", or a path to an ordering file.
Ordering make_ordering(const Frame& frame, const std::string& selector);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

std::string operator_to_json(const Operator& op);
Operator operator_from_json(const std::string& text);
std::string operator_to_csv(const Operator& op);
Operator operator_from_csv(const std::string& text, const FramePtr& frame);

std::string state_to_json(const StateVector& state);
/// Rebuilds the frame from the header and revalidates the norm.
StateVector state_from_json(const std::string& text);

std::string grid_to_json(const QuasiDistGrid& grid, const Ordering& ordering);
std::string grid_to_csv(const QuasiDistGrid& grid, const Ordering& ordering);

/// Values of a grid file in file order, row-major, with the axis labels.
struct GridFile {
  int d = 0;
  int n = 0;
  std::string poly;
  std::vector<std::string> basis;
  std::string ordering;
  int s = 0;
  std::string normalization;
  std::vector<std::string> labels;
  std::vector<double> real;
  std::vector<double> imag;  // empty for CSV
};

GridFile grid_from_json(const std::string& text);
GridFile grid_from_csv(const std::string& text);

/// Frame described by a file header.
FramePtr frame_from_header(int d, int n, const std::string& poly, const std::vector<std::string>& basis);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qps
