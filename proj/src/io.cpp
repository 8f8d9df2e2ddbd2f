#include "qps/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qps/error.hpp"

namespace qps {

using nlohmann::json;

namespace {

std::vector<std::string> basis_labels(const Frame& frame) {
  std::vector<std::string> out;
  for (auto e : frame.basis().elements) out.push_back(frame.field().label(e));
  return out;
}

json header(const Frame& frame) {
  const auto& f = frame.field();
  return json{{"schema", kSchemaVersion},
              {"d", f.d()},
              {"n", f.n()},
              {"poly", f.polynomial().to_string()},
              {"basis", basis_labels(frame)},
              {"basis_kind", std::string(to_string(frame.basis().kind))}};
}

json conventions(const Frame& frame) {
  return json{{"displacement", "phase * U_nu * V_mu"},
              {"phase", frame.field().d() == 2 ? "i^(sum_j m_j n_j), selfdual coordinates" : "chi(2^-1 mu nu)"},
              {"squeeze", "S|l> = |s l>"},
              {"layout", "first coordinate most significant"}};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

void check_schema(const json& doc, const char* kind) {
  if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != kSchemaVersion)
    throw Error(ErrorCode::SchemaError, "missing or unsupported schema version");
  if (!doc.contains("kind") || doc["kind"] != kind)
    throw Error(ErrorCode::SchemaError, std::string("expected a ") + kind + " document");
  for (const char* key : {"d", "n", "poly", "basis"})
    if (!doc.contains(key)) throw Error(ErrorCode::SchemaError, std::string("missing field ") + key);
}

FramePtr frame_from_doc(const json& doc) {
  try {
    return frame_from_header(doc.at("d").get<int>(), doc.at("n").get<int>(), doc.at("poly").get<std::string>(),
                             doc.at("basis").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// "# key=value,key=value"; basis entries are ';'-separated.
std::string csv_header(const Frame& frame, const std::vector<std::pair<std::string, std::string>>& extra) {
  const auto& f = frame.field();
  std::string basis;
  for (const auto& l : basis_labels(frame)) basis += (basis.empty() ? "" : ";") + l;
  std::string out = "# schema=" + std::to_string(kSchemaVersion) + ",d=" + std::to_string(f.d()) +
                    ",n=" + std::to_string(f.n()) + ",poly=" + f.polynomial().to_string() + ",basis=" + basis;
  for (const auto& [k, v] : extra) out += "," + k + "=" + v;
  return out + "\n";
}

std::vector<std::pair<std::string, std::string>> parse_csv_header(const std::string& line) {
  if (line.rfind("# ", 0) != 0) throw Error(ErrorCode::SchemaError, "missing CSV header line");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : split(std::string_view(line).substr(2), ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::SchemaError, "bad header entry " + item);
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

std::string header_value(const std::vector<std::pair<std::string, std::string>>& h, const std::string& key) {
  for (const auto& [k, v] : h)
    if (k == key) return v;
  throw Error(ErrorCode::SchemaError, "missing header field " + key);
}

int parse_int(const std::string& text) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw Error(ErrorCode::ParseError, "bad integer " + text);
  return v;
}

FramePtr frame_from_csv_header(const std::vector<std::pair<std::string, std::string>>& h) {
  if (header_value(h, "schema") != std::to_string(kSchemaVersion))
    throw Error(ErrorCode::SchemaError, "unsupported schema version");
  return frame_from_header(parse_int(header_value(h, "d")), parse_int(header_value(h, "n")), header_value(h, "poly"),
                           split(header_value(h, "basis"), ';'));
}

}  // namespace

// ---------------------------------------------------------------------------
// Orderings

Ordering lex_ordering(const Frame& frame) {
  Ordering o{"lex", {}};
  for (std::size_t i = 0; i < frame.dim(); ++i) o.elements.push_back(frame.element_at(i));
  return o;
}

Ordering dlog_ordering(const Frame& frame) {
  const auto& f = frame.field();
  Ordering o{"dlog", {f.zero()}};
  for (std::uint32_t k = 0; k + 1 < f.order(); ++k) o.elements.push_back(f.power_of_sigma(k));
  return o;
}

Ordering parse_ordering(const Frame& frame, std::string_view text, std::string name) {
  const auto& f = frame.field();
  Ordering o{std::move(name), {}};
  std::string token;
  auto flush = [&] {
    if (!token.empty()) o.elements.push_back(f.parse(token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  std::vector<bool> seen(f.order(), false);
  for (auto e : o.elements) {
    if (seen[e.index()]) throw Error(ErrorCode::InvalidArgument, "ordering repeats " + f.label(e));
    seen[e.index()] = true;
  }
  if (o.elements.size() != f.order())
    throw Error(ErrorCode::InvalidArgument, "ordering must list all " + std::to_string(f.order()) + " elements");
  return o;
}

Ordering load_ordering(const Frame& frame, const std::filesystem::path& path) {
  return parse_ordering(frame, read_file(path), "file:" + path.filename().string());
}

Ordering make_ordering(const Frame& frame, const std::string& selector) {
  if (selector.empty() || selector == "lex") return lex_ordering(frame);
  if (selector == "dlog") return dlog_ordering(frame);
  const std::string path = selector.rfind("file:", 0) == 0 ? selector.substr(5) : selector;
  return load_ordering(frame, path);
}

// ---------------------------------------------------------------------------
// Numbers

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cannot format number");
  return {buf, ptr};
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::ParseError, "bad number \"" + std::string(text) + "\"");
  return v;
}

FramePtr frame_from_header(int d, int n, const std::string& poly, const std::vector<std::string>& basis) {
  auto ctx = FieldContext::make(d, n, Polynomial::parse(poly, d));
  std::vector<FieldElement> elems;
  for (const auto& l : basis) elems.push_back(ctx->parse(l));
  return Frame::with_basis(ctx, make_basis(*ctx, std::move(elems)));
}

// ---------------------------------------------------------------------------
// Operators

std::string operator_to_json(const Operator& op) {
  if (!op.frame) throw Error(ErrorCode::InvalidArgument, "operator export needs a frame");
  json doc = header(*op.frame);
  doc["kind"] = "operator";
  doc["conventions"] = conventions(*op.frame);
  doc["dim"] = op.dim();
  doc["unitary"] = op.unitary;
  doc["hermitian"] = op.hermitian;
  std::vector<double> entries;
  entries.reserve(2 * op.matrix.size());
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
      entries.push_back(op.matrix(i, j).real());
      entries.push_back(op.matrix(i, j).imag());
    }
  doc["entries"] = std::move(entries);
  return doc.dump() + "\n";
}

Operator operator_from_json(const std::string& text) {
  const json doc = parse_json(text);
  check_schema(doc, "operator");
  auto frame = frame_from_doc(doc);
  const auto q = static_cast<Eigen::Index>(frame->dim());
  const auto entries = doc.at("entries").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(entries.size()) != 2 * q * q)
    throw Error(ErrorCode::SchemaError, "entry count differs from dim^2");
  Matrix m(q, q);
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) m(i, j) = {entries[2 * (i * q + j)], entries[2 * (i * q + j) + 1]};
  Operator op{std::move(m), frame, doc.value("unitary", false), doc.value("hermitian", false)};
  if (!op.has_valid_tags()) throw Error(ErrorCode::NotUnitary, "imported operator violates its tags");
  return op;
}

std::string operator_to_csv(const Operator& op) {
  if (!op.frame) throw Error(ErrorCode::InvalidArgument, "operator export needs a frame");
  std::string out = csv_header(*op.frame, {{"layout", "re;im interleaved row-major"}});
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
      if (j) out += ',';
      out += format_double(op.matrix(i, j).real()) + "," + format_double(op.matrix(i, j).imag());
    }
    out += '\n';
  }
  return out;
}

Operator operator_from_csv(const std::string& text, const FramePtr& frame) {
  const auto ls = lines(text);
  if (ls.empty()) throw Error(ErrorCode::SchemaError, "empty CSV");
  FramePtr f = frame ? frame : frame_from_csv_header(parse_csv_header(ls[0]));
  const auto q = static_cast<Eigen::Index>(f->dim());
  if (static_cast<Eigen::Index>(ls.size()) != q + 1) throw Error(ErrorCode::SchemaError, "row count differs from dim");
  Matrix m(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const auto cells = split(ls[i + 1], ',');
    if (static_cast<Eigen::Index>(cells.size()) != 2 * q) throw Error(ErrorCode::SchemaError, "column count differs");
    for (Eigen::Index j = 0; j < q; ++j) m(i, j) = {parse_double(cells[2 * j]), parse_double(cells[2 * j + 1])};
  }
  return {std::move(m), f, false, false};
}

// ---------------------------------------------------------------------------
// States

std::string state_to_json(const StateVector& state) {
  json doc = header(*state.frame());
  doc["kind"] = "state";
  doc["ordering"] = "lex";
  json amps = json::array();
  for (Eigen::Index i = 0; i < state.amps().size(); ++i)
    amps.push_back({state.amps()(i).real(), state.amps()(i).imag()});
  doc["amps"] = std::move(amps);
  doc["flags"] = state.flags();
  return doc.dump() + "\n";
}

StateVector state_from_json(const std::string& text) {
  const json doc = parse_json(text);
  check_schema(doc, "state");
  if (doc.value("ordering", "lex") != "lex") throw Error(ErrorCode::SchemaError, "state amplitudes must be in lex order");
  auto frame = frame_from_doc(doc);
  const auto& amps = doc.at("amps");
  if (!amps.is_array() || amps.size() != frame->dim())
    throw Error(ErrorCode::SchemaError, "amplitude count differs from dimension");
  Vector v(static_cast<Eigen::Index>(frame->dim()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!amps[i].is_array() || amps[i].size() != 2) throw Error(ErrorCode::SchemaError, "amplitudes are [re, im] pairs");
    v(static_cast<Eigen::Index>(i)) = {amps[i][0].get<double>(), amps[i][1].get<double>()};
  }
  StateVector state(frame, std::move(v));
  if (doc.contains("flags"))
    for (const auto& flag : doc["flags"]) state.add_flag(flag.get<std::string>());
  return state;
}

// ---------------------------------------------------------------------------
// Grids

namespace {

const char* normalization_name(Normalization n) { return n == Normalization::Raw ? "raw" : "unit-sum"; }

}  // namespace

std::string grid_to_json(const QuasiDistGrid& grid, const Ordering& ordering) {
  const auto& f = grid.frame->field();
  json doc = header(*grid.frame);
  doc["kind"] = "grid";
  doc["ordering"] = ordering.name;
  doc["s"] = grid.s.value();
  doc["normalization"] = normalization_name(grid.normalization);
  std::vector<std::string> labels;
  for (auto e : ordering.elements) labels.push_back(f.label(e));
  doc["labels"] = labels;
  json re = json::array(), im = json::array();
  for (auto mu : ordering.elements) {
    std::vector<double> rr, ii;
    for (auto nu : ordering.elements) {
      rr.push_back(grid.at(mu, nu).real());
      ii.push_back(grid.at(mu, nu).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  doc["values"] = std::move(re);
  doc["imag"] = std::move(im);
  return doc.dump() + "\n";
}

std::string grid_to_csv(const QuasiDistGrid& grid, const Ordering& ordering) {
  const auto& f = grid.frame->field();
  std::string out = csv_header(*grid.frame, {{"ordering", ordering.name},
                                             {"s", std::to_string(grid.s.value())},
                                             {"normalization", normalization_name(grid.normalization)}});
  out += "mu\\nu";
  for (auto nu : ordering.elements) out += "," + f.label(nu);
  out += '\n';
  for (auto mu : ordering.elements) {
    out += f.label(mu);
    for (auto nu : ordering.elements) out += "," + format_double(grid.at(mu, nu).real());
    out += '\n';
  }
  return out;
}

GridFile grid_from_json(const std::string& text) {
  const json doc = parse_json(text);
  check_schema(doc, "grid");
  GridFile g;
  try {
    g.d = doc.at("d").get<int>();
    g.n = doc.at("n").get<int>();
    g.poly = doc.at("poly").get<std::string>();
    g.basis = doc.at("basis").get<std::vector<std::string>>();
    g.ordering = doc.at("ordering").get<std::string>();
    g.s = doc.at("s").get<int>();
    g.normalization = doc.at("normalization").get<std::string>();
    g.labels = doc.at("labels").get<std::vector<std::string>>();
    for (const auto& row : doc.at("values"))
      for (const auto& v : row) g.real.push_back(v.get<double>());
    for (const auto& row : doc.at("imag"))
      for (const auto& v : row) g.imag.push_back(v.get<double>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  const std::size_t q = g.labels.size();
  if (g.real.size() != q * q || g.imag.size() != q * q) throw Error(ErrorCode::SchemaError, "grid is not square");
  return g;
}

GridFile grid_from_csv(const std::string& text) {
  const auto ls = lines(text);
  if (ls.size() < 2) throw Error(ErrorCode::SchemaError, "grid CSV too short");
  const auto h = parse_csv_header(ls[0]);
  GridFile g;
  if (header_value(h, "schema") != std::to_string(kSchemaVersion))
    throw Error(ErrorCode::SchemaError, "unsupported schema version");
  g.d = parse_int(header_value(h, "d"));
  g.n = parse_int(header_value(h, "n"));
  g.poly = header_value(h, "poly");
  g.basis = split(header_value(h, "basis"), ';');
  g.ordering = header_value(h, "ordering");
  g.s = parse_int(header_value(h, "s"));
  g.normalization = header_value(h, "normalization");
  auto head = split(ls[1], ',');
  g.labels.assign(head.begin() + 1, head.end());
  const std::size_t q = g.labels.size();
  if (ls.size() != q + 2) throw Error(ErrorCode::SchemaError, "row count differs from label count");
  for (std::size_t i = 0; i < q; ++i) {
    const auto cells = split(ls[i + 2], ',');
    if (cells.size() != q + 1 || cells[0] != g.labels[i]) throw Error(ErrorCode::SchemaError, "malformed grid row");
    for (std::size_t j = 1; j <= q; ++j) g.real.push_back(parse_double(cells[j]));
  }
  return g;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

}  // namespace qps
