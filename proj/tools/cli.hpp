#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qps/io.hpp"

namespace qps::cli {

struct RunConfig {
  std::string command;            // field | state | grid | verify
  int d = 0;
  int n = 1;
  std::string poly;               // empty: default polynomial
  std::string basis = "selfdual"; // polynomial | normal | selfdual | "s^1,s^3,..."
  std::string ordering = "lex";   // lex | dlog | path to an ordering file
  int s = 0;
  std::string point;              // "mu,nu" element labels
  std::string squeeze;            // element label
  std::string state = "reference"; // reference | mixed | path to a state file
  std::string preset;             // fig1 | fig2 | fig3
  std::string format = "json";    // json | csv
  std::string out;                // empty: stdout
  std::vector<int> dims;          // verify: extra single-qudit dimensions
  double tol_scale = 1.0;         // verify: multiplies every tolerance
  bool cross_check = false;       // grid: compare with the large-d closed form

  bool operator==(const RunConfig&) const = default;
};

/// Parses argv-style arguments (without the program name). Throws
/// InvalidArgument with the usage message on malformed input.
RunConfig parse_args(const std::vector<std::string>& args);
/// Arguments that parse back to the same config.
std::vector<std::string> to_args(const RunConfig& cfg);
std::string to_text(const RunConfig& cfg);

/// Applies preset values (figure parameters) to the config.
RunConfig resolve_preset(RunConfig cfg);

/// Directory holding shipped data files (QPS_DATA_DIR overrides).
std::string data_dir();

FramePtr build_frame(const RunConfig& cfg);

struct GridOutput {
  QuasiDistGrid grid;
  Ordering ordering;
};

/// The grid a `grid` invocation writes, before serialization.
GridOutput build_grid(const RunConfig& cfg);
StateVector build_state(const RunConfig& cfg, const FramePtr& frame);

int cmd_field(const RunConfig& cfg, std::ostream& out);
int cmd_state(const RunConfig& cfg, std::ostream& out);
/// Diagnostics (cross-check, verify summary) go to `err`.
int cmd_grid(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on cfg.command; errors are reported on `err` with exit code 1.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qps::cli
