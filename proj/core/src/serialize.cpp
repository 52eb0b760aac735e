#include "tracelab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tcl::io {
namespace {

using nlohmann::json;

std::string printf_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

std::string format_double(double v) { return printf_double("%.17g", v); }

std::string format_hex(double v) { return printf_double("%a", v); }

double parse_hex_or_decimal(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || end != begin + text.size())
    throw std::invalid_argument("parse_hex_or_decimal: bad number: " + text);
  return v;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::object;
  return v;
}
JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::array;
  return v;
}
JsonValue JsonValue::str(std::string s) {
  JsonValue v;
  v.kind_ = Kind::string;
  v.text_ = std::move(s);
  return v;
}
JsonValue JsonValue::num(double d) {
  JsonValue v;
  v.kind_ = Kind::number;
  v.number_ = d;
  return v;
}
JsonValue JsonValue::integer(std::int64_t i) {
  JsonValue v;
  v.kind_ = Kind::integer;
  v.integer_ = i;
  return v;
}
JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.kind_ = Kind::boolean;
  v.bool_ = b;
  return v;
}
JsonValue JsonValue::raw(std::string preformatted) {
  JsonValue v;
  v.kind_ = Kind::raw;
  v.text_ = std::move(preformatted);
  return v;
}
JsonValue JsonValue::null() { return JsonValue(); }

JsonValue& JsonValue::push(JsonValue v) {
  if (kind_ != Kind::array)
    throw std::logic_error("JsonValue::push on non-array");
  items_.push_back(std::move(v));
  return *this;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  if (kind_ != Kind::object)
    throw std::logic_error("JsonValue::set on non-object");
  members_.emplace_back(key, std::move(v));
  return *this;
}

void JsonValue::dump_into(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) *
                            static_cast<std::size_t>(depth + 1),
                        ' ');
  const std::string close_pad(
      static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth), ' ');
  switch (kind_) {
    case Kind::null:
      out += "null";
      break;
    case Kind::boolean:
      out += bool_ ? "true" : "false";
      break;
    case Kind::integer:
      out += std::to_string(integer_);
      break;
    case Kind::number:
      if (std::isfinite(number_))
        out += format_double(number_);
      else
        out += json_escape(format_double(number_));
      break;
    case Kind::string:
      out += json_escape(text_);
      break;
    case Kind::raw:
      out += text_;
      break;
    case Kind::array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].dump_into(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ",";
        out += "\n";
      }
      out += close_pad + "]";
      break;
    }
    case Kind::object: {
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad + json_escape(members_[i].first) + ": ";
        members_[i].second.dump_into(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ",";
        out += "\n";
      }
      out += close_pad + "}";
      break;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  dump_into(out, indent, 0);
  out += "\n";
  return out;
}

JsonValue matrix_json(const Matrix& m) {
  JsonValue obj = JsonValue::object();
  obj.set("rows", JsonValue::integer(m.rows()));
  obj.set("cols", JsonValue::integer(m.cols()));
  JsonValue entries = JsonValue::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      JsonValue pair = JsonValue::array();
      pair.push(JsonValue::str(format_hex(m(i, j).real())));
      pair.push(JsonValue::str(format_hex(m(i, j).imag())));
      entries.push(std::move(pair));
    }
  }
  obj.set("entries", std::move(entries));
  return obj;
}

namespace {

Matrix matrix_from_parsed(const json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("matrix_from_json: bad dimensions");
  const json& entries = j.at("entries");
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_json: entry count mismatch");
  Matrix m(rows, cols);
  Eigen::Index flat = 0;
  for (const json& pair : entries) {
    const double re = parse_hex_or_decimal(pair.at(0).get<std::string>());
    const double im = parse_hex_or_decimal(pair.at(1).get<std::string>());
    m(flat / cols, flat % cols) = Complex(re, im);
    ++flat;
  }
  return m;
}

probes::Witness witness_from_parsed(const json& j) {
  probes::Witness w;
  for (const json& m : j.at("left")) w.left.push_back(matrix_from_parsed(m));
  for (const json& m : j.at("right")) w.right.push_back(matrix_from_parsed(m));
  if (j.contains("context"))
    for (const json& m : j.at("context"))
      w.context.push_back(matrix_from_parsed(m));
  w.lambda = parse_hex_or_decimal(j.at("lambda").get<std::string>());
  w.margin = j.at("margin").get<double>();
  w.trial = j.at("trial").get<int>();
  return w;
}

}  // namespace

Matrix matrix_from_json_text(const std::string& json_text) {
  return matrix_from_parsed(json::parse(json_text));
}

probes::Witness witness_from_json_text(const std::string& json_text) {
  return witness_from_parsed(json::parse(json_text));
}

JsonValue witness_json(const probes::Witness& w) {
  JsonValue obj = JsonValue::object();
  obj.set("lambda", JsonValue::str(format_hex(w.lambda)));
  obj.set("margin", JsonValue::num(w.margin));
  obj.set("trial", JsonValue::integer(w.trial));
  JsonValue left = JsonValue::array();
  for (const Matrix& m : w.left) left.push(matrix_json(m));
  obj.set("left", std::move(left));
  JsonValue right = JsonValue::array();
  for (const Matrix& m : w.right) right.push(matrix_json(m));
  obj.set("right", std::move(right));
  if (!w.context.empty()) {
    JsonValue ctx = JsonValue::array();
    for (const Matrix& m : w.context) ctx.push(matrix_json(m));
    obj.set("context", std::move(ctx));
  }
  return obj;
}

JsonValue verdict_json(const probes::ConvexityVerdict& v) {
  JsonValue obj = JsonValue::object();
  obj.set("violated", JsonValue::boolean(v.violated));
  obj.set("worst_margin", JsonValue::num(v.worst_margin));
  obj.set("trials_run", JsonValue::integer(v.trials_run));
  if (v.witness) obj.set("witness", witness_json(*v.witness));
  return obj;
}

JsonValue region_verdict_json(const regions::RegionVerdict& v) {
  JsonValue obj = JsonValue::object();
  obj.set("status", JsonValue::str(regions::status_name(v.status)));
  obj.set("justification", JsonValue::str(v.justification));
  return obj;
}

namespace {

JsonValue axis_json(const std::vector<double>& xs) {
  JsonValue arr = JsonValue::array();
  for (const double x : xs) arr.push(JsonValue::num(x));
  return arr;
}

JsonValue probe_config_json(const probes::ProbeConfig& cfg) {
  JsonValue obj = JsonValue::object();
  obj.set("dim", JsonValue::integer(cfg.dim));
  obj.set("trials", JsonValue::integer(cfg.trials));
  obj.set("seed", JsonValue::integer(static_cast<std::int64_t>(cfg.seed)));
  obj.set("tol_rel", JsonValue::num(cfg.tol_rel));
  obj.set("lambdas", axis_json(cfg.lambdas));
  obj.set("cond_cap", JsonValue::num(cfg.cond_cap));
  obj.set("refine", JsonValue::boolean(cfg.refine));
  obj.set("refine_sweeps", JsonValue::integer(cfg.refine_sweeps));
  return obj;
}

std::string witness_id(const probes::RegionRow& row, bool convex_side) {
  return "w" + std::to_string(row.index) + (convex_side ? "c" : "v");
}

}  // namespace

std::string region_report_json(const probes::RegionReport& report) {
  JsonValue root = JsonValue::object();
  root.set("schema", JsonValue::str("tracelab-scan-v1"));
  JsonValue grid = JsonValue::object();
  grid.set("p", axis_json(report.grid.p));
  grid.set("q", axis_json(report.grid.q));
  grid.set("s", axis_json(report.grid.s));
  root.set("grid", std::move(grid));
  root.set("config", probe_config_json(report.config));

  const probes::ScanSummary sum = report.summary();
  JsonValue summary = JsonValue::object();
  summary.set("points", JsonValue::integer(sum.points));
  summary.set("proven_convex_violated",
              JsonValue::integer(sum.proven_convex_violated));
  summary.set("proven_concave_violated",
              JsonValue::integer(sum.proven_concave_violated));
  summary.set("witnesses", JsonValue::integer(sum.witnesses));
  summary.set("errors", JsonValue::integer(sum.errors));
  root.set("summary", std::move(summary));

  JsonValue rows = JsonValue::array();
  for (const probes::RegionRow& row : report.rows) {
    JsonValue r = JsonValue::object();
    r.set("index", JsonValue::integer(static_cast<std::int64_t>(row.index)));
    r.set("p", JsonValue::num(row.p));
    r.set("q", JsonValue::num(row.q));
    r.set("s", JsonValue::num(row.s));
    if (!row.error.empty()) {
      r.set("error", JsonValue::str(row.error));
      rows.push(std::move(r));
      continue;
    }
    r.set("convexity", region_verdict_json(row.convexity));
    r.set("concavity", region_verdict_json(row.concavity));
    JsonValue cv = verdict_json(row.convex_probe);
    if (row.convex_probe.witness)
      cv.set("witness_id", JsonValue::str(witness_id(row, true)));
    r.set("convex_probe", std::move(cv));
    JsonValue cc = verdict_json(row.concave_probe);
    if (row.concave_probe.witness)
      cc.set("witness_id", JsonValue::str(witness_id(row, false)));
    r.set("concave_probe", std::move(cc));
    rows.push(std::move(r));
  }
  root.set("rows", std::move(rows));
  return root.dump();
}

std::string region_report_csv(const probes::RegionReport& report) {
  std::string out;
  out += "# tracelab-scan-v1\n";
  out +=
      "# columns: p,q,s,status_convex,status_concave,margin_convex,"
      "margin_concave,witness_id,error\n";
  out +=
      "p,q,s,status_convex,status_concave,margin_convex,margin_concave,"
      "witness_id,error\n";
  for (const probes::RegionRow& row : report.rows) {
    out += format_double(row.p) + "," + format_double(row.q) + "," +
           format_double(row.s) + ",";
    if (!row.error.empty()) {
      std::string err = row.error;
      for (char& c : err)
        if (c == ',' || c == '\n') c = ';';
      out += ",,,,," + err + "\n";
      continue;
    }
    out += std::string(regions::status_name(row.convexity.status)) + ",";
    out += std::string(regions::status_name(row.concavity.status)) + ",";
    out += format_double(row.convex_probe.worst_margin) + ",";
    out += format_double(row.concave_probe.worst_margin) + ",";
    std::string ids;
    if (row.convex_probe.witness) ids += witness_id(row, true);
    if (row.concave_probe.witness) {
      if (!ids.empty()) ids += ";";
      ids += witness_id(row, false);
    }
    out += ids + ",\n";
  }
  return out;
}

std::string dpi_report_json(const channels::DpiReport& report) {
  JsonValue root = JsonValue::object();
  root.set("schema", JsonValue::str("tracelab-dpi-v1"));
  JsonValue cfg = JsonValue::object();
  cfg.set("dim", JsonValue::integer(report.config.dim));
  cfg.set("env_dim", JsonValue::integer(report.config.env_dim));
  cfg.set("trials", JsonValue::integer(report.config.trials));
  cfg.set("seed",
          JsonValue::integer(static_cast<std::int64_t>(report.config.seed)));
  cfg.set("cond_cap", JsonValue::num(report.config.cond_cap));
  root.set("config", std::move(cfg));
  root.set("proven_violations", JsonValue::integer(report.proven_violations()));

  JsonValue rows = JsonValue::array();
  for (const channels::DpiRow& row : report.rows) {
    JsonValue r = JsonValue::object();
    r.set("alpha", JsonValue::num(row.alpha));
    r.set("z", JsonValue::num(row.z));
    if (!row.error.empty()) {
      r.set("error", JsonValue::str(row.error));
      rows.push(std::move(r));
      continue;
    }
    r.set("trials", JsonValue::integer(row.trials));
    r.set("violations", JsonValue::integer(row.violations));
    r.set("worst_margin", JsonValue::num(row.worst_margin));
    r.set("proven_region", JsonValue::boolean(row.proven_region));
    r.set("region_tag", JsonValue::str(row.region_tag));
    rows.push(std::move(r));
  }
  root.set("rows", std::move(rows));
  return root.dump();
}

std::string dpi_report_csv(const channels::DpiReport& report) {
  std::string out;
  out += "# tracelab-dpi-v1\n";
  out +=
      "# columns: alpha,z,trials,violations,worst_margin,proven_region,"
      "region_tag,error\n";
  out += "alpha,z,trials,violations,worst_margin,proven_region,region_tag,error\n";
  for (const channels::DpiRow& row : report.rows) {
    out += format_double(row.alpha) + "," + format_double(row.z) + ",";
    if (!row.error.empty()) {
      std::string err = row.error;
      for (char& c : err)
        if (c == ',' || c == '\n') c = ';';
      out += ",,,,," + err + "\n";
      continue;
    }
    out += std::to_string(row.trials) + "," + std::to_string(row.violations) +
           "," + format_double(row.worst_margin) + "," +
           (row.proven_region ? "true" : "false") + "," + row.region_tag +
           ",\n";
  }
  return out;
}

std::string counterexample_json(
    const std::string& name, const counterexamples::CounterexampleResult& r) {
  JsonValue root = JsonValue::object();
  root.set("schema", JsonValue::str("tracelab-counterexample-v1"));
  root.set("name", JsonValue::str(name));
  root.set("margin", JsonValue::num(r.margin));
  if (r.limit_parameter)
    root.set("limit_parameter", JsonValue::num(*r.limit_parameter));
  JsonValue cons = JsonValue::object();
  for (const auto& [label, m] : r.construction) cons.set(label, matrix_json(m));
  root.set("construction", std::move(cons));
  JsonValue scalars = JsonValue::object();
  for (const auto& [label, v] : r.scalars) scalars.set(label, JsonValue::num(v));
  root.set("scalars", std::move(scalars));
  return root.dump();
}

std::string dilation_report_json(
    const counterexamples::DilationReport& report) {
  JsonValue root = JsonValue::object();
  root.set("schema", JsonValue::str("tracelab-dilation-v1"));
  root.set("target", JsonValue::num(report.target));
  root.set("rescale_factor", JsonValue::num(report.rescale_factor));
  root.set("final_rel_gap", JsonValue::num(report.final_rel_gap));
  root.set("monotone", JsonValue::boolean(report.monotone));
  root.set("slow_convergence", JsonValue::boolean(report.slow_convergence));
  JsonValue steps = JsonValue::array();
  for (const counterexamples::DilationStep& s : report.steps) {
    JsonValue step = JsonValue::object();
    step.set("t", JsonValue::num(s.t));
    step.set("value", JsonValue::num(s.value));
    step.set("rel_gap", JsonValue::num(s.rel_gap));
    steps.push(std::move(step));
  }
  root.set("steps", std::move(steps));
  return root.dump();
}

std::string psi_equivalence_json(const probes::PsiEquivalenceReport& rep) {
  JsonValue root = JsonValue::object();
  root.set("schema", JsonValue::str("tracelab-psi-equivalence-v1"));
  root.set("base", verdict_json(rep.base));
  root.set("unitary", verdict_json(rep.unitary));
  root.set("contraction", verdict_json(rep.contraction));
  root.set("embedded", verdict_json(rep.embedded));
  root.set("worst_unitary_residual", JsonValue::num(rep.worst_unitary_residual));
  root.set("worst_embedding_residual",
           JsonValue::num(rep.worst_embedding_residual));
  root.set("consistent", JsonValue::boolean(rep.consistent));
  root.set("trials_run", JsonValue::integer(rep.trials_run));
  return root.dump();
}

}  // namespace tcl::io
