#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/channels.hpp"
#include "tracelab/counterexamples.hpp"
#include "tracelab/probes.hpp"

namespace tcl::io {

// Shortest text that still round-trips: %.17g. Used for every floating
// value in reports so reruns produce byte-identical files.
std::string format_double(double v);
// Hex float (%a): bit-exact round trip through strtod. Used for matrices.
std::string format_hex(double v);
double parse_hex_or_decimal(const std::string& text);

// Minimal ordered JSON document builder. Emission is fully deterministic:
// object keys keep insertion order, doubles print via format_double, and
// non-finite doubles degrade to strings. Parsing is not this type's job.
class JsonValue {
 public:
  static JsonValue object();
  static JsonValue array();
  static JsonValue str(std::string s);
  static JsonValue num(double v);
  static JsonValue integer(std::int64_t v);
  static JsonValue boolean(bool b);
  static JsonValue raw(std::string preformatted);  // inserted verbatim
  static JsonValue null();

  JsonValue& push(JsonValue v);                    // arrays
  JsonValue& set(const std::string& key, JsonValue v);  // objects

  [[nodiscard]] std::string dump(int indent = 2) const;

 private:
  JsonValue() = default;
  enum class Kind { object, array, string, number, integer, boolean, raw, null };
  Kind kind_ = Kind::null;
  std::string text_;
  double number_ = 0.0;
  std::int64_t integer_ = 0;
  bool bool_ = false;
  std::vector<std::pair<std::string, JsonValue>> members_;
  std::vector<JsonValue> items_;

  void dump_into(std::string& out, int indent, int depth) const;
};

std::string json_escape(const std::string& s);

// Matrices serialize as row-major [re, im] hex pairs.
JsonValue matrix_json(const Matrix& m);
Matrix matrix_from_json_text(const std::string& json_text);

JsonValue witness_json(const probes::Witness& w);
probes::Witness witness_from_json_text(const std::string& json_text);

JsonValue verdict_json(const probes::ConvexityVerdict& v);
JsonValue region_verdict_json(const regions::RegionVerdict& v);

std::string region_report_json(const probes::RegionReport& report);
std::string region_report_csv(const probes::RegionReport& report);

std::string dpi_report_json(const channels::DpiReport& report);
std::string dpi_report_csv(const channels::DpiReport& report);

std::string counterexample_json(const std::string& name,
                                const counterexamples::CounterexampleResult& r);
std::string dilation_report_json(
    const counterexamples::DilationReport& report);

std::string psi_equivalence_json(const probes::PsiEquivalenceReport& rep);

}  // namespace tcl::io
