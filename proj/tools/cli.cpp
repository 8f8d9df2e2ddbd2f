#include "cli.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qps/error.hpp"
#include "qps/verify.hpp"

#ifndef QPS_DATA_DIR
#define QPS_DATA_DIR "data"
#endif

namespace qps::cli {

namespace {

void add_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--d", cfg.d, "prime characteristic");
  app.add_option("--n", cfg.n, "number of qudits (extension degree)");
  app.add_option("--poly", cfg.poly, "defining polynomial, e.g. x^3+2x^2+1");
  app.add_option("--basis", cfg.basis, "polynomial | normal | selfdual | comma-separated elements");
  app.add_option("--ordering", cfg.ordering, "lex | dlog | path to an ordering file");
  app.add_option("--s", cfg.s, "ordering parameter: -1 (Q), 0 (W), 1 (P)")->check(CLI::Range(-1, 1));
  app.add_option("--point", cfg.point, "phase-space point \"mu,nu\"");
  app.add_option("--squeeze", cfg.squeeze, "squeeze element, e.g. s^7");
  app.add_option("--state", cfg.state, "reference | mixed | path to a state file");
  app.add_option("--preset", cfg.preset, "fig1 | fig2 | fig3")->check(CLI::IsMember({"", "fig1", "fig2", "fig3"}));
  app.add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "output path (default: stdout)");
  app.add_option("--dims", cfg.dims, "verify: extra single-qudit dimensions")->delimiter(',');
  app.add_option("--tol-scale", cfg.tol_scale, "verify: tolerance multiplier");
  app.add_flag("--cross-check", cfg.cross_check, "grid: compare with the large-d closed form");
}

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

PhasePoint parse_point(const FieldContext& f, const std::string& text) {
  const auto parts = split_top_level(text);
  if (parts.size() != 2) throw Error(ErrorCode::ParseError, "point must be \"mu,nu\", got \"" + text + "\"");
  return {f.parse(parts[0]), f.parse(parts[1])};
}

std::optional<Polynomial> parse_poly(const RunConfig& cfg) {
  if (cfg.poly.empty()) return std::nullopt;
  return Polynomial::parse(cfg.poly, cfg.d);
}

std::string sigma_relation(const FieldContext& f) {
  if (f.n() == 1) return "s = " + std::to_string(f.sigma().index());
  // s^n written in {1, s, ..., s^(n-1)}
  const auto c = expand(f, f.power_of_sigma(f.n()), polynomial_basis(f));
  std::string rhs;
  for (int k = f.n() - 1; k >= 0; --k) {
    if (c[k] == 0) continue;
    if (!rhs.empty()) rhs += "+";
    std::string term = k == 0 ? "1" : (k == 1 ? "s" : "s^" + std::to_string(k));
    rhs += (c[k] == 1 ? term : (k == 0 ? std::to_string(c[k]) : std::to_string(c[k]) + term));
  }
  return "s^" + std::to_string(f.n()) + " = " + (rhs.empty() ? "0" : rhs);
}

std::string basis_text(const FieldContext& f, const Basis& b) {
  std::string out = "{";
  for (std::size_t i = 0; i < b.size(); ++i) out += (i ? ", " : "") + f.label(b.elements[i]);
  return out + "}";
}

bool state_is_file(const RunConfig& cfg) {
  return !cfg.state.empty() && cfg.state != "reference" && cfg.state != "mixed";
}

// A state file supplies its own frame when no field is requested.
FramePtr frame_for(const RunConfig& cfg) {
  if (cfg.d == 0 && state_is_file(cfg)) return state_from_json(read_file(cfg.state)).frame();
  return build_frame(cfg);
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
    out << "wrote " << cfg.out << "\n";
  }
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  if (args.empty()) throw Error(ErrorCode::InvalidArgument, "missing command (field | state | grid | verify)");
  RunConfig cfg;
  cfg.command = args.front();
  if (cfg.command != "field" && cfg.command != "state" && cfg.command != "grid" && cfg.command != "verify")
    throw Error(ErrorCode::InvalidArgument, "unknown command " + cfg.command);
  CLI::App app{"qps " + cfg.command};
  add_options(app, cfg);
  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::InvalidArgument, e.what());
  }
  return cfg;
}

std::vector<std::string> to_args(const RunConfig& cfg) {
  std::vector<std::string> a{cfg.command};
  auto opt = [&a](const char* name, const std::string& value) {
    if (!value.empty()) a.push_back(std::string(name) + "=" + value);
  };
  opt("--d", std::to_string(cfg.d));
  opt("--n", std::to_string(cfg.n));
  opt("--poly", cfg.poly);
  opt("--basis", cfg.basis);
  opt("--ordering", cfg.ordering);
  opt("--s", std::to_string(cfg.s));
  opt("--point", cfg.point);
  opt("--squeeze", cfg.squeeze);
  opt("--state", cfg.state);
  opt("--preset", cfg.preset);
  opt("--format", cfg.format);
  opt("--out", cfg.out);
  std::string dims;
  for (int d : cfg.dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
  opt("--dims", dims);
  opt("--tol-scale", format_double(cfg.tol_scale));
  if (cfg.cross_check) a.push_back("--cross-check");
  return a;
}

std::string to_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& a : to_args(cfg)) out += (out.empty() ? "" : " ") + a;
  return out;
}

std::string data_dir() {
  if (const char* env = std::getenv("QPS_DATA_DIR")) return env;
  return QPS_DATA_DIR;
}

RunConfig resolve_preset(RunConfig cfg) {
  if (cfg.preset.empty()) return cfg;
  if (cfg.preset == "fig1") {
    cfg.d = 31;
    cfg.n = 1;
    cfg.poly.clear();
    cfg.basis = "selfdual";
    cfg.ordering = "lex";
    cfg.s = -1;
    cfg.state = "reference";
    cfg.squeeze.clear();
    cfg.point.clear();
  } else if (cfg.preset == "fig2" || cfg.preset == "fig3") {
    cfg.d = 3;
    cfg.n = 3;
    cfg.poly = "x^3+2x^2+1";
    cfg.basis = "s^1,s^3,s^9";
    cfg.ordering = data_dir() + "/fig2_axis_order.txt";
    cfg.state = "reference";
    cfg.point.clear();
    cfg.s = cfg.preset == "fig2" ? -1 : 0;
    cfg.squeeze = cfg.preset == "fig2" ? "" : "s^7";
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown preset " + cfg.preset);
  }
  return cfg;
}

FramePtr build_frame(const RunConfig& cfg) {
  auto ctx = FieldContext::make(cfg.d, cfg.n, parse_poly(cfg));
  if (cfg.basis.empty() || cfg.basis == "selfdual") return Frame::canonical(ctx);
  if (cfg.basis == "polynomial") return Frame::with_basis(ctx, polynomial_basis(*ctx));
  if (cfg.basis == "normal") return Frame::with_basis(ctx, normal_basis(*ctx));
  std::vector<FieldElement> elems;
  for (const auto& label : split_top_level(cfg.basis)) elems.push_back(ctx->parse(label));
  return Frame::with_basis(ctx, make_basis(*ctx, std::move(elems)));
}

StateVector build_state(const RunConfig& cfg, const FramePtr& frame) {
  const auto& f = frame->field();
  if (cfg.state.empty() || cfg.state == "reference") {
    const auto ref = reference_for(frame);
    const FieldElement s = cfg.squeeze.empty() ? f.one() : f.parse(cfg.squeeze);
    const PhasePoint p = cfg.point.empty() ? PhasePoint{f.zero(), f.zero()} : parse_point(f, cfg.point);
    return squeezed_state(ref, s, p);
  }
  if (cfg.state == "mixed") throw Error(ErrorCode::InvalidArgument, "the mixed state has no state vector");
  StateVector loaded = state_from_json(read_file(cfg.state));
  if (!loaded.frame()->same_as(*frame))
    throw Error(ErrorCode::ContextMismatch, "state file frame differs from the requested one");
  const auto& lf = loaded.frame()->field();
  if (!cfg.squeeze.empty()) loaded = apply(squeeze_operator(loaded.frame(), lf.parse(cfg.squeeze)), loaded);
  if (!cfg.point.empty()) loaded = apply(displacement(loaded.frame(), parse_point(lf, cfg.point)), loaded);
  return loaded;
}

GridOutput build_grid(const RunConfig& input) {
  const RunConfig cfg = resolve_preset(input);
  const auto frame = frame_for(cfg);
  const auto ref = reference_for(frame);
  Matrix rho;
  if (cfg.state == "mixed") {
    rho = Matrix::Identity(frame->dim(), frame->dim()) / static_cast<double>(frame->dim());
  } else {
    rho = build_state(cfg, frame).density();
  }
  return {quasidist(rho, ref, SOrder(cfg.s)), make_ordering(*frame, cfg.ordering)};
}

int cmd_field(const RunConfig& cfg, std::ostream& out) {
  auto ctx = FieldContext::make(cfg.d, cfg.n, parse_poly(cfg));
  const auto& f = *ctx;
  out << "field GF(" << f.order() << ") = GF(" << f.d() << "^" << f.n() << ")\n";
  out << "polynomial " << f.polynomial().to_string() << "\n";
  out << "primitive element s, " << sigma_relation(f) << "\n";
  for (const auto& w : f.warnings()) out << "warning: " << w << "\n";
  const Basis b = find_selfdual_basis(f);
  if (b.kind == BasisKind::Selfdual) {
    out << "selfdual basis " << basis_text(f, b) << "\n";
  } else {
    out << "no selfdual basis; almost-selfdual " << basis_text(f, b) << "\n";
  }
  out << "gram matrix\n";
  for (const auto& row : gram_matrix(f, b)) {
    out << " ";
    for (int v : row) out << " " << v;
    out << "\n";
  }
  return 0;
}

int cmd_state(const RunConfig& cfg, std::ostream& out) {
  const auto frame = frame_for(cfg);
  emit(cfg, out, state_to_json(build_state(cfg, frame)));
  return 0;
}

int cmd_grid(const RunConfig& input, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_preset(input);
  const auto g = build_grid(cfg);
  emit(cfg, out, cfg.format == "csv" ? grid_to_csv(g.grid, g.ordering) : grid_to_json(g.grid, g.ordering));
  if (cfg.cross_check) {
    const auto& f = g.grid.frame->field();
    if (f.n() != 1 || f.d() == 2 || cfg.s != 0 || cfg.state != "reference" || !cfg.squeeze.empty() || !cfg.point.empty())
      throw Error(ErrorCode::InvalidArgument, "cross-check applies to W of the single-qudit reference state");
    const auto closed = wigner_reference_closed_form(f.d(), theta_params(f.d()).K);
    double diff = 0.0;
    for (std::size_t i = 0; i < closed.size(); ++i) diff = std::max(diff, std::abs(closed[i] - g.grid.values[i].real()));
    err << "cross-check: max |closed form - W| = " << diff << "\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  VerifyOptions opts;
  opts.extra_dims = cfg.dims;
  opts.tol_scale = cfg.tol_scale;
  VerifyReport report = run_verify(opts);
  if (state_is_file(cfg)) {
    CheckResult r{"input.state_file " + cfg.state, true, 0.0, 0.0, ""};
    try {
      const auto s = state_from_json(read_file(cfg.state));
      r.detail = "dimension " + std::to_string(s.dim());
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    report.checks.push_back(std::move(r));
  }
  emit(cfg, out, report.to_json());
  const auto failures = report.failures();
  err << report.checks.size() - failures.size() << "/" << report.checks.size() << " checks passed\n";
  for (const auto& name : failures) err << "FAILED " << name << "\n";
  return failures.empty() ? 0 : 1;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "field") return cmd_field(cfg, out);
    if (cfg.command == "state") return cmd_state(cfg, out);
    if (cfg.command == "grid") return cmd_grid(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    err << "error: unknown command " << cfg.command << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace qps::cli
