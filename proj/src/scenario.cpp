#include "dsmt/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "json.hpp"

#include "dsmt/bba.hpp"
#include "dsmt/conditioning.hpp"
#include "dsmt/qlabels.hpp"
#include "dsmt/rules.hpp"
#include "dsmt/transforms.hpp"

namespace dsmt {
namespace {

using json = nlohmann::ordered_json;
using Value = std::variant<MassFunction, ImpreciseMass, QualMass>;

constexpr std::string_view kRuleOps[] = {"conjunctive", "dsmc",         "dsmh", "dempster", "smets",
                                         "yager",       "dubois_prade", "pcr5", "pcr6"};
constexpr std::string_view kSingleInputOps[] = {"belief", "admissibility", "betp",
                                                "dsmp",   "scr",           "bcr17"};

bool is_rule_op(std::string_view op) {
  return std::find(std::begin(kRuleOps), std::end(kRuleOps), op) != std::end(kRuleOps);
}

bool produces_value(std::string_view op) { return is_rule_op(op) || op == "scr" || op == "bcr17"; }

bool is_single_input_op(std::string_view op) {
  return std::find(std::begin(kSingleInputOps), std::end(kSingleInputOps), op) !=
         std::end(kSingleInputOps);
}

class Violations {
 public:
  void add(const std::string& path, const std::string& what) { list_.push_back(path + ": " + what); }
  bool empty() const { return list_.empty(); }
  void check() const {
    if (list_.empty()) return;
    std::string msg = std::to_string(list_.size()) + " problem(s) in scenario";
    for (const auto& item : list_) msg += "\n  " + item;
    fail(ErrorCode::validation_error, msg);
  }

 private:
  std::vector<std::string> list_;
};

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  const std::size_t stop = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      ++column;
    }
  }
  return {line, column};
}

std::optional<ErrorCode> error_by_name(std::string_view name) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::invalid_argument); ++c) {
    if (error_name(static_cast<ErrorCode>(c)) == name) return static_cast<ErrorCode>(c);
  }
  return std::nullopt;
}

std::optional<ScalarText> scalar_of(const json& j) {
  if (j.is_number()) return ScalarText{j.dump(), true};
  if (j.is_string()) return ScalarText{j.get<std::string>(), false};
  return std::nullopt;
}

json to_json(const ScalarText& s) { return s.is_number ? json::parse(s.text) : json(s.text); }

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& path, Violations& v) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      v.add(path, "unknown key '" + key + "'");
    }
  }
}

std::optional<std::string> string_field(const json& j, const char* key, const std::string& path,
                                        Violations& v) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (!it->is_string()) {
    v.add(path + "." + key, "expected a string");
    return std::nullopt;
  }
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& j, const std::string& path, Violations& v) {
  std::vector<std::string> out;
  if (!j.is_array()) {
    v.add(path, "expected a list of strings");
    return out;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_string()) {
      out.push_back(j[i].get<std::string>());
    } else {
      v.add(path + "[" + std::to_string(i) + "]", "expected a string");
    }
  }
  return out;
}

std::optional<ModelSpec> model_of(const json& j, const std::string& path, Violations& v) {
  ModelSpec spec;
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object()) {
    check_keys(j, {"kind", "constraints"}, path, v);
    auto k = string_field(j, "kind", path, v);
    if (!k) {
      v.add(path, "missing 'kind'");
      return std::nullopt;
    }
    kind = *k;
    if (j.contains("constraints")) spec.constraints = string_list(j["constraints"], path + ".constraints", v);
  } else {
    v.add(path, "expected a model kind or an object with 'kind' and 'constraints'");
    return std::nullopt;
  }
  auto parsed = parse_model_kind(kind);
  if (!parsed) {
    v.add(path + ".kind", "unknown model kind '" + kind + "'");
    return std::nullopt;
  }
  spec.kind = *parsed;
  return spec;
}

json model_to_json(const ModelSpec& m) {
  if (m.constraints.empty()) return json(std::string(to_string(m.kind)));
  json j = json::object();
  j["kind"] = std::string(to_string(m.kind));
  j["constraints"] = m.constraints;
  return j;
}

SourceSpec source_of(const json& j, const std::string& path, Violations& v) {
  SourceSpec src;
  if (!j.is_object()) {
    v.add(path, "expected an object");
    return src;
  }
  check_keys(j, {"name", "kind", "scale", "model", "masses"}, path, v);
  if (auto name = string_field(j, "name", path, v)) {
    src.name = *name;
  } else {
    v.add(path, "missing 'name'");
  }
  if (auto kind = string_field(j, "kind", path, v)) {
    if (auto k = parse_source_kind(*kind)) {
      src.kind = *k;
    } else {
      v.add(path + ".kind", "unknown source kind '" + *kind + "'");
    }
  }
  if (j.contains("scale")) {
    if (j["scale"].is_number_integer()) {
      src.scale = j["scale"].get<int>();
    } else {
      v.add(path + ".scale", "expected an integer");
    }
  }
  if (src.kind == SourceKind::qualitative && src.scale < 1) {
    v.add(path + ".scale", "qualitative sources need an interior label count m >= 1");
  }
  if (j.contains("model")) src.model = model_of(j["model"], path + ".model", v);
  if (!j.contains("masses") || !j["masses"].is_object()) {
    v.add(path + ".masses", "expected an object mapping expressions to values");
    return src;
  }
  for (const auto& [expr, value] : j["masses"].items()) {
    if (auto s = scalar_of(value)) {
      src.masses.emplace_back(expr, *s);
    } else {
      v.add(path + ".masses." + expr, "expected a number or a string");
    }
  }
  return src;
}

StepSpec step_of(const json& j, const std::string& path, Violations& v) {
  StepSpec step;
  if (!j.is_object()) {
    v.add(path, "expected an object");
    return step;
  }
  check_keys(j, {"op", "inputs", "input", "as", "model", "epsilon", "event", "expect_error"}, path, v);
  if (auto op = string_field(j, "op", path, v)) {
    step.op = *op;
  } else {
    v.add(path, "missing 'op'");
  }
  if (j.contains("inputs") && j.contains("input")) v.add(path, "give either 'input' or 'inputs'");
  if (j.contains("inputs")) step.inputs = string_list(j["inputs"], path + ".inputs", v);
  if (auto input = string_field(j, "input", path, v)) step.inputs = {*input};
  if (auto as = string_field(j, "as", path, v)) step.as = *as;
  if (j.contains("model")) step.model = model_of(j["model"], path + ".model", v);
  if (j.contains("epsilon")) {
    step.epsilon = scalar_of(j["epsilon"]);
    if (!step.epsilon) v.add(path + ".epsilon", "expected a number or a string");
  }
  step.event = string_field(j, "event", path, v);
  step.expect_error = string_field(j, "expect_error", path, v);
  return step;
}

double parse_mass_number(const std::string& text) {
  std::string_view body = text;
  while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
  while (!body.empty() && body.back() == ' ') body.remove_suffix(1);
  if (body.find('/') != std::string_view::npos) return to_double(parse_rational(body));
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
  if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
    fail(ErrorCode::validation_error, "'" + text + "' is not a number");
  }
  return out;
}

Rational parse_epsilon(const ScalarText& eps) { return parse_rational(eps.text); }

struct Workspace {
  Frame frame;
  Model model;
  Semantics semantics = Semantics::hyper;
  std::map<std::string, Value> values;
  std::vector<std::string> sources;
};

Value load_source(const SourceSpec& src, const Workspace& ws) {
  const Model model = src.model ? build_model(ws.frame, *src.model) : ws.model;
  switch (src.kind) {
    case SourceKind::precise: {
      FocalMap focal;
      for (const auto& [expr, value] : src.masses) {
        const VennMask key = to_mask(expr, ws.frame, model, ws.semantics);
        focal[key] += parse_mass_number(value.text);
      }
      return MassFunction::checked(ws.frame, model, focal);
    }
    case SourceKind::imprecise: {
      ImpreciseFocalMap focal;
      for (const auto& [expr, value] : src.masses) {
        const VennMask key = to_mask(expr, ws.frame, model, ws.semantics);
        if (key.is_empty()) {
          fail(ErrorCode::validation_error, "'" + expr + "' is empty under the source's model");
        }
        SubunitSet set = value.is_number ? SubunitSet::point(parse_mass_number(value.text))
                                         : SubunitSet::parse(value.text);
        auto it = focal.find(key);
        focal[key] = it == focal.end() ? set : set_add(it->second, set);
      }
      ImpreciseMass m(ws.frame, model, focal);
      if (!m.diagnostics().empty()) fail(ErrorCode::validation_error, m.diagnostics().front());
      if (!is_admissible(m)) {
        fail(ErrorCode::inadmissible_source,
             "no selection of the mass sets sums to 1 (total " + total_mass(m).to_string() + ")");
      }
      return m;
    }
    case SourceKind::qualitative: {
      const LabelScale scale(src.scale);
      LabelMap focal;
      for (const auto& [expr, value] : src.masses) {
        const VennMask key = to_mask(expr, ws.frame, model, ws.semantics);
        focal[key] += Label::parse(value.text, scale).index();
      }
      return QualMass::checked(ws.frame, model, scale, focal);
    }
  }
  fail(ErrorCode::invalid_argument, "unknown source kind");
}

std::string default_name(const StepSpec& step, int index) {
  return step.as.empty() ? "step" + std::to_string(index) : step.as;
}

// Rule steps default to every source; single-input steps to the latest result,
// or the first source when nothing has run yet.
std::vector<std::string> resolve_inputs(const StepSpec& step, const std::vector<std::string>& sources,
                                        const std::optional<std::string>& latest) {
  if (!step.inputs.empty()) return step.inputs;
  if (is_rule_op(step.op)) return sources;
  if (latest) return {*latest};
  if (!sources.empty()) return {sources.front()};
  return {};
}

Workspace prepare(const Scenario& s, Violations& v) {
  Workspace ws;
  ws.semantics = s.semantics;
  try {
    ws.frame = build_frame(s);
  } catch (const Error& e) {
    v.add("frame", e.what());
    return ws;
  }
  try {
    ws.model = build_model(ws.frame, s.model);
  } catch (const Error& e) {
    v.add("model", e.what());
    ws.model = Model::free(ws.frame.size());
  }
  if (s.sources.empty()) v.add("sources", "at least one source is required");
  for (std::size_t i = 0; i < s.sources.size(); ++i) {
    const auto& src = s.sources[i];
    const std::string path = "sources[" + std::to_string(i) + "] '" + src.name + "'";
    if (ws.values.count(src.name)) {
      v.add(path, "duplicate source name");
      continue;
    }
    try {
      ws.values.emplace(src.name, load_source(src, ws));
      ws.sources.push_back(src.name);
    } catch (const Error& e) {
      v.add(path, e.what());
    }
  }
  return ws;
}

void check_pipeline(const Scenario& s, const Workspace& ws, Violations& v) {
  std::set<std::string> known(ws.sources.begin(), ws.sources.end());
  for (const auto& src : s.sources) known.insert(src.name);
  std::optional<std::string> latest;
  for (std::size_t i = 0; i < s.pipeline.size(); ++i) {
    const StepSpec& step = s.pipeline[i];
    const std::string path = "pipeline[" + std::to_string(i) + "] '" + step.op + "'";
    if (!step_category(step.op)) v.add(path, "unknown op '" + step.op + "'");
    const auto inputs = resolve_inputs(step, s.sources.empty() ? std::vector<std::string>{} : ws.sources, latest);
    if (inputs.empty()) v.add(path, "no inputs");
    if (is_single_input_op(step.op) && inputs.size() > 1) v.add(path, "takes a single input");
    for (const auto& name : inputs) {
      if (!known.count(name)) v.add(path, "unknown input '" + name + "'");
    }
    if (step.model && ws.frame.size() > 0) {
      try {
        build_model(ws.frame, *step.model);
      } catch (const Error& e) {
        v.add(path + ".model", e.what());
      }
    }
    if (step.epsilon) {
      try {
        if (parse_epsilon(*step.epsilon) < 0) v.add(path + ".epsilon", "must be non-negative");
      } catch (const Error& e) {
        v.add(path + ".epsilon", e.what());
      }
    }
    if (step.op == "scr" || step.op == "bcr17") {
      if (!step.event) v.add(path, "missing 'event'");
    }
    if (step.event && ws.frame.size() > 0) {
      try {
        parse_expression(*step.event, ws.frame);
      } catch (const Error& e) {
        v.add(path + ".event", e.what());
      }
    }
    if (step.expect_error && !error_by_name(*step.expect_error)) {
      v.add(path + ".expect_error", "unknown error name '" + *step.expect_error + "'");
    }
    if (!step.expect_error && produces_value(step.op)) {
      latest = default_name(step, static_cast<int>(i) + 1);
      known.insert(*latest);
    }
  }
}

// ---- step execution ----

StepReport masses_report(const MassFunction& m) {
  StepReport r;
  r.table = "masses";
  r.columns = {"m"};
  for (const auto& [key, value] : m.focal()) {
    r.rows.push_back({render(key, m.frame(), m.model()), {value}});
  }
  return r;
}

StepReport masses_report(const ImpreciseMass& m) {
  StepReport r;
  r.table = "masses";
  r.columns = {"m"};
  for (const auto& [key, set] : m.focal()) {
    r.rows.push_back({render(key, m.frame(), m.model()), {set}});
  }
  return r;
}

StepReport masses_report(const QualMass& m) {
  StepReport r;
  r.table = "masses";
  r.columns = {"label", "rounded"};
  for (const auto& [key, index] : m.focal()) {
    const Label l = m.label(key);
    r.rows.push_back({render(key, m.frame(), m.model()), {l.to_string(), l.rounded()}});
  }
  return r;
}

template <class T>
std::vector<T> inputs_of(const std::vector<const Value*>& in, std::string_view what) {
  std::vector<T> out;
  for (const Value* v : in) {
    if (!std::holds_alternative<T>(*v)) {
      fail(ErrorCode::invalid_argument, "inputs of " + std::string(what) + " mix source kinds");
    }
    out.push_back(std::get<T>(*v));
  }
  return out;
}

void require_two(std::size_t n, std::string_view op) {
  if (n < 2) fail(ErrorCode::fewer_than_two_sources, std::string(op) + " needs two sources");
  if (n > 2) fail(ErrorCode::invalid_argument, std::string(op) + " combines exactly two sources");
}

[[noreturn]] void undefined_for(std::string_view op, std::string_view kind) {
  fail(ErrorCode::invalid_argument, std::string(op) + " is not defined for " + std::string(kind) + " sources");
}

std::pair<StepReport, Value> run_precise_rule(const StepSpec& step, const std::vector<MassFunction>& ms,
                                              const Model& model, Execution exec) {
  const std::span<const MassFunction> span(ms);
  const std::string& op = step.op;
  if (op == "conjunctive") {
    const ConjunctiveResult r = conjunctive(span, model, exec);
    const MassFunction joint(ms.front().frame(), Model::free(model.atoms()), r.joint());
    StepReport rep = masses_report(joint);
    rep.summary.emplace_back("conflict", r.conflict());
    return {rep, joint};
  }
  MassFunction out;
  if (op == "dsmc") {
    out = dsmc(span, exec);
  } else if (op == "dsmh") {
    out = dsmh(span, model, exec);
  } else if (op == "dempster") {
    out = dempster(span, model);
  } else if (op == "smets") {
    out = smets(span, model);
  } else if (op == "yager") {
    out = yager(span, model);
  } else if (op == "dubois_prade") {
    require_two(ms.size(), op);
    out = dubois_prade(ms[0], ms[1], model);
  } else if (op == "pcr5") {
    require_two(ms.size(), op);
    out = pcr5(ms[0], ms[1], model);
  } else {
    out = pcr6(span, model, exec);
  }
  StepReport rep = masses_report(out);
  if (op != "dsmc") rep.summary.emplace_back("conflict", conjunctive(span, model, exec).conflict());
  return {rep, out};
}

std::pair<StepReport, Value> run_imprecise_rule(const StepSpec& step,
                                                const std::vector<ImpreciseMass>& ms,
                                                const Model& model) {
  ImpreciseMass out;
  if (step.op == "dsmc") {
    out = imprecise_dsmc(ms);
  } else if (step.op == "dsmh") {
    out = imprecise_dsmh(ms, model);
  } else {
    undefined_for(step.op, "imprecise");
  }
  StepReport rep = masses_report(out);
  rep.summary.emplace_back("total", total_mass(out));
  if (!out.diagnostics().empty()) {
    std::string text;
    for (const auto& d : out.diagnostics()) text += (text.empty() ? "" : "; ") + d;
    rep.summary.emplace_back("warning", text);
  }
  return {rep, out};
}

std::pair<StepReport, Value> run_qualitative_rule(const StepSpec& step, const std::vector<QualMass>& ms,
                                                  const Model& model) {
  if (step.op == "conjunctive") {
    const QcrResult r = qcr(ms, model);
    StepReport rep = masses_report(r.joint);
    rep.summary.emplace_back("conflict", r.conflict.to_string());
    return {rep, r.joint};
  }
  QualMass out;
  if (step.op == "dsmc") {
    out = qdsmc(ms);
  } else if (step.op == "dsmh") {
    out = qdsmh(ms, model);
  } else if (step.op == "pcr5") {
    require_two(ms.size(), step.op);
    out = qpcr5(ms[0], ms[1], model);
  } else {
    undefined_for(step.op, "qualitative");
  }
  StepReport rep = masses_report(out);
  rep.summary.emplace_back("total", out.total().to_string());
  return {rep, out};
}

StepReport probability_report(const ProbabilityMap& p) {
  StepReport r;
  r.table = "probabilities";
  r.columns = {"P"};
  for (const auto& [cell, value] : p.cells()) {
    r.rows.push_back({render(cell, p.frame(), p.model()), {value}});
  }
  r.summary.emplace_back("entropy", shannon_entropy(p));
  r.summary.emplace_back("pic", pic(p));
  return r;
}

struct StepContext {
  const Workspace& ws;
  Execution exec;
};

std::pair<StepReport, std::optional<Value>> execute(const StepSpec& step,
                                                    const std::vector<const Value*>& in,
                                                    const StepContext& ctx) {
  const Workspace& ws = ctx.ws;
  auto model_for = [&](const Model& own) { return step.model ? build_model(ws.frame, *step.model) : own; };
  const Value& first = *in.front();

  if (is_rule_op(step.op)) {
    const Model model = model_for(ws.model);
    if (std::holds_alternative<MassFunction>(first)) {
      return run_precise_rule(step, inputs_of<MassFunction>(in, step.op), model, ctx.exec);
    }
    if (std::holds_alternative<ImpreciseMass>(first)) {
      return run_imprecise_rule(step, inputs_of<ImpreciseMass>(in, step.op), model);
    }
    return run_qualitative_rule(step, inputs_of<QualMass>(in, step.op), model);
  }

  if (step.op == "admissibility") {
    StepReport rep;
    if (const auto* m = std::get_if<ImpreciseMass>(&first)) {
      rep = masses_report(*m);
      rep.summary.emplace_back("total", total_mass(*m));
      rep.summary.emplace_back("admissible", is_admissible(*m));
    } else if (const auto* q = std::get_if<QualMass>(&first)) {
      rep = masses_report(*q);
      rep.summary.emplace_back("total", q->total().to_string());
      rep.summary.emplace_back("admissible", q->normalized());
    } else {
      const auto& p = std::get<MassFunction>(first);
      rep = masses_report(p);
      rep.summary.emplace_back("total", p.total());
      rep.summary.emplace_back("admissible", validate(p).ok());
    }
    return {rep, std::nullopt};
  }

  if (step.op == "belief") {
    const auto* m = std::get_if<MassFunction>(&first);
    if (!m) undefined_for(step.op, std::holds_alternative<QualMass>(first) ? "qualitative" : "imprecise");
    StepReport rep;
    rep.table = "belief";
    rep.columns = {"Bel", "Pl"};
    std::vector<VennMask> targets;
    if (step.event) {
      targets.push_back(to_mask(*step.event, ws.frame, m->model(), ws.semantics));
    } else {
      for (const auto& [key, value] : m->focal()) targets.push_back(key);
    }
    for (const auto& a : targets) {
      rep.rows.push_back({render(a, ws.frame, m->model()), {belief(*m, a), plausibility(*m, a)}});
    }
    return {rep, std::nullopt};
  }

  if (step.op == "betp" || step.op == "dsmp") {
    if (const auto* q = std::get_if<QualMass>(&first)) {
      if (step.op == "betp") undefined_for(step.op, "qualitative");
      const Rational eps = step.epsilon ? parse_epsilon(*step.epsilon) : Rational(1, 1000);
      const QualProbability p = qdsmp(*q, model_for(q->model()), eps);
      StepReport rep;
      rep.table = "probabilities";
      rep.columns = {"label", "rounded"};
      for (const auto& [cell, index] : p.cells) {
        const Label l = p.of_cell(cell);
        rep.rows.push_back({render(cell, p.frame, p.model), {l.to_string(), l.rounded()}});
      }
      rep.summary.emplace_back("epsilon", format_rational(eps));
      rep.summary.emplace_back("qpic", qpic(p).to_string());
      return {rep, std::nullopt};
    }
    const auto* m = std::get_if<MassFunction>(&first);
    if (!m) undefined_for(step.op, "imprecise");
    const Model model = model_for(m->model());
    const double eps = step.epsilon ? to_double(parse_epsilon(*step.epsilon)) : kDefaultEpsilon;
    const ProbabilityMap p = step.op == "betp" ? betp(*m, model) : dsmp(*m, model, eps);
    StepReport rep = probability_report(p);
    if (step.op == "dsmp") rep.summary.insert(rep.summary.begin(), {"epsilon", eps});
    if (step.event) {
      const VennMask a = to_mask(*step.event, ws.frame, model, ws.semantics);
      rep.summary.emplace_back("P(" + render(a, ws.frame, model) + ")", p.of(a));
    }
    return {rep, std::nullopt};
  }

  // scr / bcr17
  if (const auto* q = std::get_if<QualMass>(&first)) {
    if (step.op != "bcr17") undefined_for(step.op, "qualitative");
    const Model model = model_for(q->model());
    const QualMass out = qbcr17(*q, to_mask(*step.event, ws.frame, model, ws.semantics), model);
    StepReport rep = masses_report(out);
    rep.summary.emplace_back("total", out.total().to_string());
    return {rep, out};
  }
  const auto* m = std::get_if<MassFunction>(&first);
  if (!m) undefined_for(step.op, "imprecise");
  const Model model = model_for(m->model());
  const VennMask a = to_mask(*step.event, ws.frame, model, ws.semantics);
  const MassFunction out = step.op == "scr" ? scr(*m, a, model) : bcr17(*m, a, model);
  return {masses_report(out), out};
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::precise: return "precise";
    case SourceKind::imprecise: return "imprecise";
    case SourceKind::qualitative: return "qualitative";
  }
  return "precise";
}

std::optional<SourceKind> parse_source_kind(std::string_view text) {
  if (text == "precise") return SourceKind::precise;
  if (text == "imprecise") return SourceKind::imprecise;
  if (text == "qualitative") return SourceKind::qualitative;
  return std::nullopt;
}

std::optional<StepCategory> step_category(std::string_view op) {
  if (is_rule_op(op) || op == "belief" || op == "admissibility") return StepCategory::fusion;
  if (op == "betp" || op == "dsmp") return StepCategory::transform;
  if (op == "scr" || op == "bcr17") return StepCategory::condition;
  return std::nullopt;
}

StepError::StepError(const Error& cause, int step, const std::string& op)
    : Error(cause.code(), "step " + std::to_string(step) + " (" + op + "): " + cause.what()),
      step_(step) {}

Frame build_frame(const Scenario& s) {
  if (s.frame.empty()) fail(ErrorCode::validation_error, "the frame has no atoms");
  if (static_cast<int>(s.frame.size()) > kMaxAtoms) {
    fail(ErrorCode::frame_too_large, "at most " + std::to_string(kMaxAtoms) + " atoms are supported");
  }
  return Frame(s.frame);
}

Model build_model(const Frame& frame, const ModelSpec& spec) {
  const Model base = spec.kind == ModelKind::shafer ? Model::shafer(frame.size()) : Model::free(frame.size());
  std::vector<Expression> exprs;
  for (const auto& c : spec.constraints) exprs.push_back(parse_expression(c, frame));
  return Model::with_constraints(frame, base, exprs);
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string msg = e.what();
    // Keep nlohmann's description, drop its own position prefix.
    if (auto pos = msg.find(": ", msg.find("parse error")); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ParseError("ParseError: line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + msg,
                     line, column);
  }

  Violations v;
  Scenario s;
  if (!doc.is_object()) {
    v.add("scenario", "expected an object at the top level");
    v.check();
  }
  check_keys(doc, {"name", "description", "frame", "model", "semantics", "sources", "pipeline"},
             "scenario", v);
  if (auto name = string_field(doc, "name", "scenario", v)) s.name = *name;
  if (auto d = string_field(doc, "description", "scenario", v)) s.description = *d;
  if (doc.contains("frame")) {
    s.frame = string_list(doc["frame"], "frame", v);
    if (doc["frame"].is_array() && s.frame.empty()) v.add("frame", "must name at least one atom");
  } else {
    v.add("frame", "missing");
  }
  if (doc.contains("model")) {
    if (auto m = model_of(doc["model"], "model", v)) s.model = *m;
  }
  if (auto sem = string_field(doc, "semantics", "scenario", v)) {
    if (auto parsed = parse_semantics(*sem)) {
      s.semantics = *parsed;
    } else {
      v.add("semantics", "unknown semantics '" + *sem + "'");
    }
  }
  if (doc.contains("sources") && doc["sources"].is_array()) {
    for (std::size_t i = 0; i < doc["sources"].size(); ++i) {
      s.sources.push_back(source_of(doc["sources"][i], "sources[" + std::to_string(i) + "]", v));
    }
  } else {
    v.add("sources", "expected a list");
  }
  if (doc.contains("pipeline")) {
    if (doc["pipeline"].is_array()) {
      for (std::size_t i = 0; i < doc["pipeline"].size(); ++i) {
        s.pipeline.push_back(step_of(doc["pipeline"][i], "pipeline[" + std::to_string(i) + "]", v));
      }
    } else {
      v.add("pipeline", "expected a list");
    }
  }
  v.check();

  const Workspace ws = prepare(s, v);
  check_pipeline(s, ws, v);
  v.check();
  return s;
}

std::string serialize(const Scenario& s) {
  json doc = json::object();
  if (!s.name.empty()) doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  doc["frame"] = s.frame;
  doc["model"] = model_to_json(s.model);
  if (s.semantics != Semantics::hyper) doc["semantics"] = std::string(to_string(s.semantics));
  doc["sources"] = json::array();
  for (const auto& src : s.sources) {
    json j = json::object();
    j["name"] = src.name;
    j["kind"] = std::string(to_string(src.kind));
    if (src.kind == SourceKind::qualitative || src.scale != 0) j["scale"] = src.scale;
    if (src.model) j["model"] = model_to_json(*src.model);
    json masses = json::object();
    for (const auto& [expr, value] : src.masses) masses[expr] = to_json(value);
    j["masses"] = masses;
    doc["sources"].push_back(j);
  }
  doc["pipeline"] = json::array();
  for (const auto& step : s.pipeline) {
    json j = json::object();
    j["op"] = step.op;
    if (!step.inputs.empty()) j["inputs"] = step.inputs;
    if (!step.as.empty()) j["as"] = step.as;
    if (step.model) j["model"] = model_to_json(*step.model);
    if (step.epsilon) j["epsilon"] = to_json(*step.epsilon);
    if (step.event) j["event"] = *step.event;
    if (step.expect_error) j["expect_error"] = *step.expect_error;
    doc["pipeline"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

Report run(const Scenario& s, const RunOptions& options) {
  Violations v;
  Workspace ws = prepare(s, v);
  v.check();

  Report report;
  report.scenario = s.name;
  const StepContext ctx{ws, options.exec};
  std::optional<std::string> latest;
  for (std::size_t i = 0; i < s.pipeline.size(); ++i) {
    const StepSpec& step = s.pipeline[i];
    const int index = static_cast<int>(i) + 1;
    const auto category = step_category(step.op);
    if (!category) {
      throw StepError(Error(ErrorCode::invalid_argument, "unknown op '" + step.op + "'"), index, step.op);
    }
    if (std::find(options.categories.begin(), options.categories.end(), *category) ==
        options.categories.end()) {
      continue;
    }

    const auto names = resolve_inputs(step, ws.sources, latest);
    std::vector<const Value*> in;
    for (const auto& name : names) {
      auto it = ws.values.find(name);
      if (it == ws.values.end()) {
        throw StepError(Error(ErrorCode::validation_error, "unknown input '" + name + "'"), index, step.op);
      }
      in.push_back(&it->second);
    }
    if (in.empty()) throw StepError(Error(ErrorCode::validation_error, "no inputs"), index, step.op);

    StepReport rep;
    std::optional<Value> out;
    bool failed = false;
    try {
      std::tie(rep, out) = execute(step, in, ctx);
    } catch (const Error& e) {
      failed = true;
      if (!step.expect_error || *step.expect_error != error_name(e.code())) throw StepError(e, index, step.op);
      rep = StepReport{};
      rep.summary.emplace_back("error", std::string(error_name(e.code())));
      if (const auto* ne = dynamic_cast<const NonExistentialInputError*>(&e)) {
        rep.summary.emplace_back("lost_mass", ne->lost_mass());
        rep.summary.emplace_back("retained_mass", ne->retained_mass());
      }
    }
    if (step.expect_error && !failed) {
      throw StepError(Error(ErrorCode::invalid_argument,
                            "expected " + *step.expect_error + " but the step succeeded"),
                      index, step.op);
    }
    rep.index = index;
    rep.op = step.op;
    rep.inputs = names;
    if (out) {
      rep.name = default_name(step, index);
      ws.values.insert_or_assign(rep.name, std::move(*out));
      latest = rep.name;
    }
    report.steps.push_back(std::move(rep));
  }
  return report;
}

}  // namespace dsmt
