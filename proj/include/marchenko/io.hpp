#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marchenko/jacobi.hpp"
#include "marchenko/measure.hpp"
#include "marchenko/schrodinger.hpp"

namespace marchenko {

enum class Command { check, jacobi, schrodinger, verify, example };

std::string_view to_string(Command c);

enum class Preset { free, delta1, soliton, delta0 };

std::string_view to_string(Preset p);

struct Job {
  Command command = Command::check;

  // Measure jobs.
  SettingKind setting = SettingKind::jacobi;
  double R = 2.0;
  Measure measure;

  // Example jobs.
  Preset preset = Preset::free;
  double epsilon = 0.25;
  double mass = 1.0;

  int N = 40;
  double eta = 1e-4;
  int grid = 512;
  double x_max = 0.0;  // defaults to 0.8 / R
  double step = 0.0;   // defaults to 1 / (20 R)
  std::string out;     // output directory; empty means stdout only
};

bool operator==(const Job& a, const Job& b);

// Parses and validates a job document. Errors carry a JSON pointer.
Job parse_input(std::string_view json_text);
Job parse_input(const nlohmann::json& doc);
inline Job parse_input(const char* json_text) { return parse_input(std::string_view(json_text)); }
inline Job parse_input(const std::string& json_text) { return parse_input(std::string_view(json_text)); }

// Canonical document for a job; parse_input inverts it.
nlohmann::json job_to_json(const Job& job);

// Measure, setting and default parameters of a named preset.
Job preset_job(Preset preset, double epsilon = 0.25, double mass = 1.0);

struct Artifact {
  std::string name;
  std::string content;
};

struct RunResult {
  int exit_code = 0;  // 0 pass, 2 admissibility failure
  nlohmann::json summary;
  std::vector<Artifact> artifacts;
};

RunResult run(const Job& job);

// Deterministic serializations: 17 significant digits, LF line endings,
// sorted JSON keys.
std::string to_csv(const JacobiWindow& J);
std::string to_csv(const PotentialTrace& trace);
std::string to_json_text(const nlohmann::json& j);
nlohmann::json to_json(const AdmissibilityReport& rep, bool with_samples = true);

// Writes the artifact into `dir` (created if missing).
void emit(const Artifact& artifact, const std::string& dir);

nlohmann::json error_json(const Error& e);

// Exit status for a failure: 2 for admissibility, 1 otherwise.
int exit_code_for(const Error& e);

}  // namespace marchenko
