// dsmt: run scenario files through the fusion, transform and conditioning
// pipelines, or list the elements of a lattice.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsmt/lattice.hpp"
#include "dsmt/scenario.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitComputation = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) dsmt::fail(dsmt::ErrorCode::validation_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int report_error(const dsmt::Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  return dsmt::is_validation_error(e.code()) ? kExitValidation : kExitComputation;
}

int run_scenario(const std::string& path, const std::string& format, bool serial,
                 std::vector<dsmt::StepCategory> categories) {
  const dsmt::Scenario s = dsmt::parse_scenario(read_file(path));
  dsmt::RunOptions options;
  options.categories = std::move(categories);
  options.exec = serial ? dsmt::Execution::serial : dsmt::Execution::parallel;
  const dsmt::Report r = dsmt::run(s, options);
  std::cout << (format == "json" ? dsmt::format_json(r) : dsmt::format_table(r));
  return 0;
}

struct LatticeArgs {
  int atoms = 3;
  std::string model = "free";
  std::string semantics = "hyper";
  std::vector<std::string> constraints;
  std::vector<std::string> names;
};

int run_lattice(const LatticeArgs& args, const std::string& format) {
  using namespace dsmt;
  if (args.atoms < 1 || args.atoms > kMaxAtoms) {
    fail(ErrorCode::frame_too_large, "--atoms must be between 1 and " + std::to_string(kMaxAtoms));
  }
  const Frame frame = args.names.empty() ? Frame::numbered(args.atoms) : Frame(args.names);
  if (frame.size() != args.atoms) fail(ErrorCode::validation_error, "--names must list --atoms names");
  const auto kind = parse_model_kind(args.model);
  if (!kind) fail(ErrorCode::validation_error, "unknown model kind '" + args.model + "'");
  const auto semantics = parse_semantics(args.semantics);
  if (!semantics) fail(ErrorCode::validation_error, "unknown semantics '" + args.semantics + "'");

  const Model model = build_model(frame, ModelSpec{*kind, args.constraints});
  const std::vector<VennMask> elements = enumerate_lattice(frame, model, *semantics);

  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["atoms"] = frame.atoms();
    doc["model"] = std::string(to_string(model.kind()));
    doc["semantics"] = std::string(to_string(*semantics));
    doc["cardinality"] = elements.size();
    doc["elements"] = nlohmann::ordered_json::array();
    for (const auto& e : elements) {
      nlohmann::ordered_json j;
      j["element"] = render(e, frame, model);
      j["dsm_cardinal"] = dsm_cardinality(e, model);
      doc["elements"].push_back(j);
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  std::cout << "lattice: " << frame.size() << " atoms, " << to_string(model.kind()) << " model, "
            << to_string(*semantics) << " semantics, " << elements.size() << " elements\n";
  std::size_t width = 7;
  std::vector<std::string> rendered;
  for (const auto& e : elements) {
    rendered.push_back(render(e, frame, model));
    std::size_t n = 0;
    for (unsigned char c : rendered.back()) n += (c & 0xC0) != 0x80;
    width = std::max(width, n);
  }
  std::cout << "  " << std::left << "#     element" << std::string(width - 7, ' ') << "  C_M\n";
  for (std::size_t i = 0; i < elements.size(); ++i) {
    std::string idx = std::to_string(i);
    idx.resize(6, ' ');
    std::size_t n = 0;
    for (unsigned char c : rendered[i]) n += (c & 0xC0) != 0x80;
    std::cout << "  " << idx << rendered[i] << std::string(width - n, ' ') << "  "
              << dsm_cardinality(elements[i], model) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fusion of belief assignments under free, hybrid and Shafer models"};
  app.require_subcommand(1);

  std::string format = "table";
  std::string path;
  bool serial = false;

  auto add_scenario_command = [&](const std::string& name, const std::string& help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("scenario", path, "Scenario file (JSON)")->required();
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));
    cmd->add_flag("--serial", serial, "Use the serial kernels");
    return cmd;
  };
  auto* fuse = add_scenario_command("fuse", "Run the combination steps of a scenario");
  auto* transform = add_scenario_command("transform", "Run combination and transform steps");
  auto* condition = add_scenario_command("condition", "Run combination and conditioning steps");
  auto* all = add_scenario_command("run", "Run every step of a scenario");

  auto* check = app.add_subcommand("check", "Validate a scenario and print it in normal form");
  check->add_option("scenario", path, "Scenario file (JSON)")->required();

  LatticeArgs largs;
  auto* lattice = app.add_subcommand("lattice", "List the elements of a lattice");
  lattice->add_option("--atoms", largs.atoms, "Number of atoms")->required();
  lattice->add_option("--model", largs.model, "free, shafer or hybrid")
      ->check(CLI::IsMember({"free", "shafer", "hybrid"}));
  lattice->add_option("--semantics", largs.semantics, "power, hyper or super")
      ->check(CLI::IsMember({"power", "hyper", "super"}));
  lattice->add_option("--constraint", largs.constraints, "Expression forced empty (repeatable)");
  lattice->add_option("--names", largs.names, "Atom names")->delimiter(',');
  lattice->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  using dsmt::StepCategory;
  try {
    if (*fuse) return run_scenario(path, format, serial, {StepCategory::fusion});
    if (*transform) {
      return run_scenario(path, format, serial, {StepCategory::fusion, StepCategory::transform});
    }
    if (*condition) {
      return run_scenario(path, format, serial, {StepCategory::fusion, StepCategory::condition});
    }
    if (*all) {
      return run_scenario(path, format, serial,
                          {StepCategory::fusion, StepCategory::transform, StepCategory::condition});
    }
    if (*check) {
      std::cout << dsmt::serialize(dsmt::parse_scenario(read_file(path)));
      return 0;
    }
    if (*lattice) return run_lattice(largs, format);
  } catch (const dsmt::Error& e) {
    return report_error(e);
  }
  return 0;
}
