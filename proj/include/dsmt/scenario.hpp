#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dsmt/errors.hpp"
#include "dsmt/imprecise.hpp"
#include "dsmt/lattice.hpp"

namespace dsmt {

enum class SourceKind { precise, imprecise, qualitative };

std::string_view to_string(SourceKind kind);
std::optional<SourceKind> parse_source_kind(std::string_view text);

struct ModelSpec {
  ModelKind kind = ModelKind::free;
  std::vector<std::string> constraints;
  bool operator==(const ModelSpec&) const = default;
};

// A scalar written either as a JSON number or as a string, kept as text so
// that decimals and labels survive a round trip unchanged.
struct ScalarText {
  std::string text;
  bool is_number = false;
  bool operator==(const ScalarText&) const = default;
};

struct SourceSpec {
  std::string name;
  SourceKind kind = SourceKind::precise;
  int scale = 0;  // interior label count m, qualitative sources only
  std::optional<ModelSpec> model;
  std::vector<std::pair<std::string, ScalarText>> masses;
  bool operator==(const SourceSpec&) const = default;
};

struct StepSpec {
  std::string op;
  std::vector<std::string> inputs;
  std::string as;
  std::optional<ModelSpec> model;
  std::optional<ScalarText> epsilon;
  std::optional<std::string> event;
  std::optional<std::string> expect_error;
  bool operator==(const StepSpec&) const = default;
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<std::string> frame;
  ModelSpec model;
  Semantics semantics = Semantics::hyper;
  std::vector<SourceSpec> sources;
  std::vector<StepSpec> pipeline;
  bool operator==(const Scenario&) const = default;
};

// Syntax errors throw ParseError with the line and column of the offending
// character; everything else found wrong is collected into one ValidationError.
Scenario parse_scenario(std::string_view text);
std::string serialize(const Scenario& s);

Frame build_frame(const Scenario& s);
Model build_model(const Frame& frame, const ModelSpec& spec);

enum class StepCategory { fusion, transform, condition };
std::optional<StepCategory> step_category(std::string_view op);

// Doubles print with 6 decimals in tables and in full in JSON; sets likewise.
using ReportValue = std::variant<double, std::string, bool, SubunitSet>;

struct ReportRow {
  std::string element;
  std::vector<ReportValue> values;
};

struct StepReport {
  int index = 0;
  std::string op;
  std::string name;
  std::vector<std::string> inputs;
  std::string table;  // "masses", "probabilities", "belief", or empty
  std::vector<std::string> columns;
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, ReportValue>> summary;
};

struct Report {
  std::string scenario;
  std::vector<StepReport> steps;
};

class StepError : public Error {
 public:
  StepError(const Error& cause, int step, const std::string& op);
  int step() const noexcept { return step_; }

 private:
  int step_;
};

struct RunOptions {
  std::vector<StepCategory> categories{StepCategory::fusion, StepCategory::transform,
                                       StepCategory::condition};
  Execution exec = Execution::parallel;
};

Report run(const Scenario& s, const RunOptions& options = {});

std::string format_table(const Report& r);
std::string format_json(const Report& r);

}  // namespace dsmt
