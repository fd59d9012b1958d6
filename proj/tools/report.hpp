#pragma once

#include <chrono>
#include <string>

#include "json.hpp"

namespace cli {

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kResource = 3, kSolver = 4 };

// RunReport: one JSON object per invocation, written to stdout.
class RunReport {
 public:
  explicit RunReport(std::string subcommand);

  void add_input(const std::string& bytes);   // folded into inputDigest
  nlohmann::json& parameters() { return parameters_; }
  nlohmann::json& result() { return result_; }
  nlohmann::json& diagnostics() { return diagnostics_; }
  void set_error(const std::string& kind, const std::string& message);

  // Floats are rounded to 12 significant digits.
  nlohmann::json to_json() const;

 private:
  std::string subcommand_;
  std::string digest_input_;
  bool has_input_ = false;
  nlohmann::json parameters_ = nlohmann::json::object();
  nlohmann::json result_ = nullptr;
  nlohmann::json diagnostics_ = nlohmann::json::object();
  nlohmann::json error_ = nullptr;
  std::chrono::steady_clock::time_point start_;
};

std::string sha256_hex(const std::string& bytes);
double round_significant(double v, int digits = 12);
void round_floats(nlohmann::json& j);
std::string read_file(const std::string& path);

}  // namespace cli
