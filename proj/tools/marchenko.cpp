#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "marchenko/io.hpp"

namespace {

using nlohmann::json;
using namespace marchenko;

json read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what()).with_pointer("");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct reflectionless Jacobi and Schrodinger operators from a measure"};
  app.set_version_flag("--version", "marchenko 1.0");

  std::string command, preset, input, out;
  std::optional<int> order, grid;
  std::optional<double> eta, xmax, step, epsilon, mass;

  app.add_option("command", command, "check | jacobi | schrodinger | verify | example")->required();
  app.add_option("preset", preset, "Preset for `example`: free | delta1 | soliton | delta0");
  app.add_option("--input", input, "Job or measure JSON file");
  app.add_option("--out", out, "Directory for CSV/JSON artifacts");
  app.add_option("--order", order, "Window half-width / moment order N");
  app.add_option("--eta", eta, "Smallest distance to the real axis");
  app.add_option("--grid", grid, "Number of grid points");
  app.add_option("--xmax", xmax, "Half-width of the x interval");
  app.add_option("--step", step, "Integration step");
  app.add_option("--epsilon", epsilon, "Soliton parameter in (0, 1)");
  app.add_option("--mass", mass, "Mass of the delta0 preset");

  CLI11_PARSE(app, argc, argv);

  try {
    json doc = input.empty() ? json::object() : read_document(input);
    if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "expected a JSON object").with_pointer("");
    doc["command"] = command;
    if (!preset.empty()) doc["name"] = preset;
    if (order) doc["N"] = *order;
    if (eta) doc["eta"] = *eta;
    if (grid) doc["grid"] = *grid;
    if (xmax) doc["x_max"] = *xmax;
    if (step) doc["step"] = *step;
    if (epsilon) doc["epsilon"] = *epsilon;
    if (mass) doc["mass"] = *mass;
    if (!out.empty()) doc["out"] = out;

    const Job job = parse_input(doc);
    const RunResult result = run(job);
    if (!job.out.empty()) {
      for (const Artifact& a : result.artifacts) emit(a, job.out);
      emit({"summary.json", to_json_text(result.summary)}, job.out);
    }
    std::cout << to_json_text(result.summary);
    return result.exit_code;
  } catch (const Error& e) {
    std::cerr << error_json(e).dump() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}
