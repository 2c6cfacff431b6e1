// Command-line front end: validate scenario files, run simulations, and
// summarize traces.
//
// Exit codes: 0 success, 1 validation failure, 2 input/runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <gridtrust/gridtrust.hpp>

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kError = 2;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw gridtrust::GridError(gridtrust::Errc::IoError, "cannot open " + path);
  }
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw gridtrust::GridError(gridtrust::Errc::ParseError, path + ": " + e.what());
  }
}

// Applies one `--set path=value` override to the raw scenario document. The
// path is dot-separated; numeric segments index into arrays. The value is
// parsed as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& doc, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw gridtrust::GridError(gridtrust::Errc::ValidationFailed,
                               "--set expects key=value, got '" + spec + "'");
  }
  std::string path = spec.substr(0, eq);
  std::string raw = spec.substr(eq + 1);

  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  nlohmann::json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = path.find('.', pos);
    std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (key.empty()) {
      throw gridtrust::GridError(gridtrust::Errc::ValidationFailed,
                                 "--set: empty segment in '" + path + "'");
    }
    bool is_index = !key.empty() && key.find_first_not_of("0123456789") == std::string::npos;
    if (dot == std::string::npos) {
      if (is_index && node->is_array()) {
        std::size_t i = std::stoul(key);
        if (i >= node->size()) {
          throw gridtrust::GridError(gridtrust::Errc::ValidationFailed,
                                     "--set: index " + key + " out of range");
        }
        (*node)[i] = value;
      } else {
        (*node)[key] = value;
      }
      return;
    }
    if (is_index && node->is_array()) {
      std::size_t i = std::stoul(key);
      if (i >= node->size()) {
        throw gridtrust::GridError(gridtrust::Errc::ValidationFailed,
                                   "--set: index " + key + " out of range");
      }
      node = &(*node)[i];
    } else {
      node = &(*node)[key];
    }
    pos = dot + 1;
  }
}

int cmd_validate(const std::string& path) {
  nlohmann::json doc = read_json(path);
  gridtrust::ScenarioLoad load = gridtrust::load_scenario(doc);
  auto semantic = gridtrust::validate(load.scenario);
  load.violations.insert(load.violations.end(), semantic.begin(), semantic.end());
  if (load.violations.empty()) {
    std::cout << path << ": ok\n";
    return kOk;
  }
  for (const auto& v : load.violations) std::cout << path << ": " << v << "\n";
  std::cout << load.violations.size() << " violation(s)\n";
  return kInvalid;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw gridtrust::GridError(gridtrust::Errc::IoError, "cannot write " + path.string());
  }
  out << content;
}

int cmd_run(const std::string& path, const std::vector<std::string>& overrides,
            std::optional<std::uint64_t> seed, const std::string& out_dir) {
  nlohmann::json doc = read_json(path);
  for (const auto& o : overrides) apply_override(doc, o);
  if (seed) doc["seed"] = *seed;

  gridtrust::ScenarioLoad load = gridtrust::load_scenario(doc);
  std::set<std::string> seen(load.violations.begin(), load.violations.end());
  for (auto& v : gridtrust::validate(load.scenario)) {
    if (seen.insert(v).second) load.violations.push_back(std::move(v));
  }
  if (!load.violations.empty()) {
    for (const auto& v : load.violations) std::cerr << path << ": " << v << "\n";
    return kInvalid;
  }

  gridtrust::Platform platform(load.scenario);
  platform.run();
  gridtrust::RunSummary summary = platform.summary();

  const gridtrust::Counters& c = summary.counters;
  std::ostringstream text;
  text << "seed " << load.scenario.seed << ", duration "
       << gridtrust::format_real(load.scenario.duration) << "\n";
  text << "feedback: " << c.feedback_received << " received, " << c.feedback_discarded
       << " discarded, " << summary.pending_feedback << " pending\n";
  text << "trust updates: " << c.trust_updates << " (+" << c.sweep_updates << " monitoring)\n";
  text << "elections: " << c.elections << "\n";
  text << gridtrust::render_report(platform.trace().rows());
  std::string summary_text = text.str();

  // All artifacts are produced only after the run finished, so a failed run
  // leaves no partial output behind.
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    write_file(dir / "trace.csv", platform.trace().to_csv());
    std::string log;
    for (const auto& line : platform.trace().log_lines()) log += line + "\n";
    write_file(dir / "run.log", log);
    write_file(dir / "journal.txt", platform.hub().journal().dump());
    write_file(dir / "summary.txt", summary_text);
  }

  std::cout << summary_text;
  if (!summary.conservation_errors.empty()) {
    for (const auto& e : summary.conservation_errors) {
      std::cerr << "accounting violation: " << e << "\n";
    }
    return kError;
  }
  if (!out_dir.empty()) std::cout << "artifacts written to " << out_dir << "\n";
  return kOk;
}

int cmd_report(const std::string& path, double window) {
  std::vector<gridtrust::TraceRow> rows = gridtrust::parse_trace_file(path);
  std::cout << gridtrust::render_report(rows, window);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level grid trust management simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file, report every violation");
  validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  std::string run_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run a scenario and print a summary");
  run->add_option("scenario", run_path, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--set", overrides, "Override a scenario value, e.g. config.lambda=0.2");
  run->add_option("--out", out_dir, "Directory for trace.csv, run.log and journal.txt");

  std::string trace_path;
  double window = 10.0;
  auto* report = app.add_subcommand("report", "Summarize a trace CSV");
  report->add_option("trace", trace_path, "Trace CSV produced by run --out")->required();
  report->add_option("--window", window, "Allocation share window width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  try {
    if (validate->parsed()) return cmd_validate(scenario_path);
    if (run->parsed()) return cmd_run(run_path, overrides, seed, out_dir);
    if (report->parsed()) return cmd_report(trace_path, window);
  } catch (const gridtrust::GridError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
