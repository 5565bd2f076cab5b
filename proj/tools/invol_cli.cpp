// Command-line verifier: runs configured property suites over a
// (field, type, degree) grid, replays recorded failures, and pretty-prints
// serialized instances. Exit codes: 0 all checks passed (or nothing to do),
// 1 at least one failure (or a replayed failure reproduced), 2 configuration
// or input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "invol/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invol::config_error("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_verify(const std::string& config_path, bool seed_given,
               uint64_t seed_value, const std::string& report_path) {
  invol::SuiteConfig cfg = invol::parse_config(read_file(config_path));
  if (seed_given) cfg.seed = seed_value;
  invol::RunReport rep = invol::run_suites(cfg);
  std::string text = rep.document.dump(2) + "\n";
  std::cout << text;
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw invol::config_error("cannot write file '" + report_path + "'");
    out << text;
  }
  return rep.total_failures == 0 ? 0 : 1;
}

int run_replay(const std::string& failure_path) {
  invol::json doc = invol::json::parse(read_file(failure_path));
  std::vector<invol::json> failures;
  if (doc.is_object() && doc.contains("suites")) {
    for (const auto& [name, entry] : doc.at("suites").items()) {
      (void)name;
      for (const auto& f : entry.at("failures")) failures.push_back(f);
    }
  } else if (doc.is_array()) {
    for (const auto& f : doc) failures.push_back(f);
  } else {
    failures.push_back(doc);
  }
  if (failures.empty()) {
    std::cout << "no failures to replay\n";
    return 0;
  }
  bool any = false;
  for (const auto& f : failures) {
    std::string detail;
    bool reproduced = invol::replay_failure(f, &detail);
    std::cout << (reproduced ? "reproduced" : "did not reproduce") << ": suite "
              << f.at("suite").get<std::string>() << ", index "
              << f.at("index").get<uint64_t>();
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    any = any || reproduced;
  }
  return any ? 1 : 0;
}

int run_show(const std::string& instance_path) {
  invol::json doc = invol::json::parse(read_file(instance_path));
  std::cout << invol::show_instance(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"algebra-with-involution property verifier"};
  app.require_subcommand(1);

  std::string config_path, report_path, failure_path, instance_path;
  uint64_t seed_value = 0;

  CLI::App* verify = app.add_subcommand("verify", "run the configured suites");
  verify->add_option("--config", config_path, "configuration file")->required();
  CLI::Option* seed_opt =
      verify->add_option("--seed", seed_value, "override the configured seed");
  verify->add_option("--report", report_path, "also write the report here");

  CLI::App* replay = app.add_subcommand("replay", "re-run a recorded failure");
  replay->add_option("--failure", failure_path, "failure or report JSON file")
      ->required();

  CLI::App* show =
      app.add_subcommand("show", "pretty-print a serialized instance");
  show->add_option("--instance", instance_path, "instance JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed())
      return run_verify(config_path, seed_opt->count() > 0, seed_value,
                        report_path);
    if (replay->parsed()) return run_replay(failure_path);
    return run_show(instance_path);
  } catch (const invol::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
