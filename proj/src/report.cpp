#include <algorithm>
#include <cstdio>

#include "json.hpp"

#include "dsmt/scenario.hpp"

namespace dsmt {
namespace {

using json = nlohmann::ordered_json;

std::string fixed6(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string cell_text(const ReportValue& v) {
  struct {
    std::string operator()(double d) const { return fixed6(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(bool b) const { return b ? "yes" : "no"; }
    std::string operator()(const SubunitSet& s) const { return s.to_string(6); }
  } visit;
  return std::visit(visit, v);
}

json cell_json(const ReportValue& v) {
  struct {
    json operator()(double d) const { return d == 0.0 ? json(0.0) : json(d); }
    json operator()(const std::string& s) const { return s; }
    json operator()(bool b) const { return b; }
    json operator()(const SubunitSet& s) const { return s.to_string(-1); }
  } visit;
  return std::visit(visit, v);
}

// Code points, so that "∅" and "∩" line up.
std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string pad(const std::string& s, std::size_t width) {
  const std::size_t n = display_width(s);
  return n >= width ? s : s + std::string(width - n, ' ');
}

std::string step_header(const StepReport& step) {
  std::string line = "step " + std::to_string(step.index) + ": " + step.op + "(";
  for (std::size_t i = 0; i < step.inputs.size(); ++i) {
    if (i) line += ", ";
    line += step.inputs[i];
  }
  line += ")";
  if (!step.name.empty()) line += " -> " + step.name;
  return line;
}

}  // namespace

std::string format_table(const Report& r) {
  std::string out;
  if (!r.scenario.empty()) out += "scenario: " + r.scenario + "\n";
  for (const auto& step : r.steps) {
    out += "\n" + step_header(step) + "\n";

    std::size_t key_width = 7;  // "element"
    for (const auto& row : step.rows) key_width = std::max(key_width, display_width(row.element));
    for (const auto& [key, value] : step.summary) key_width = std::max(key_width, display_width(key));

    std::vector<std::size_t> widths;
    for (std::size_t c = 0; c < step.columns.size(); ++c) {
      std::size_t w = display_width(step.columns[c]);
      for (const auto& row : step.rows) w = std::max(w, display_width(cell_text(row.values[c])));
      widths.push_back(w);
    }

    if (!step.rows.empty()) {
      std::string header = "  " + pad("element", key_width);
      for (std::size_t c = 0; c < step.columns.size(); ++c) header += "  " + pad(step.columns[c], widths[c]);
      while (!header.empty() && header.back() == ' ') header.pop_back();
      out += header + "\n";
      for (const auto& row : step.rows) {
        std::string line = "  " + pad(row.element, key_width);
        for (std::size_t c = 0; c < row.values.size(); ++c) {
          line += "  " + pad(cell_text(row.values[c]), widths[c]);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
      }
    }
    for (const auto& [key, value] : step.summary) {
      out += "  " + pad(key, key_width) + "  " + cell_text(value) + "\n";
    }
  }
  return out;
}

std::string format_json(const Report& r) {
  json doc = json::object();
  doc["scenario"] = r.scenario;
  doc["steps"] = json::array();
  for (const auto& step : r.steps) {
    json j = json::object();
    j["step"] = step.index;
    j["op"] = step.op;
    j["inputs"] = step.inputs;
    if (!step.name.empty()) j["as"] = step.name;
    if (!step.table.empty()) {
      json table = json::object();
      for (const auto& row : step.rows) {
        if (step.columns.size() == 1) {
          table[row.element] = cell_json(row.values.front());
        } else {
          json cols = json::object();
          for (std::size_t c = 0; c < step.columns.size(); ++c) cols[step.columns[c]] = cell_json(row.values[c]);
          table[row.element] = cols;
        }
      }
      j[step.table] = table;
    }
    for (const auto& [key, value] : step.summary) j[key] = cell_json(value);
    doc["steps"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

}  // namespace dsmt
