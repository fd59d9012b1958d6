#include "report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thetabody/errors.hpp"

#ifndef THETABODY_VERSION
#define THETABODY_VERSION "0.0.0"
#endif

namespace cli {

RunReport::RunReport(std::string subcommand)
    : subcommand_(std::move(subcommand)), start_(std::chrono::steady_clock::now()) {}

void RunReport::add_input(const std::string& bytes) {
  // Length prefix keeps ("ab","c") and ("a","bc") apart.
  digest_input_ += std::to_string(bytes.size()) + ":" + bytes;
  has_input_ = true;
}

void RunReport::set_error(const std::string& kind, const std::string& message) {
  error_ = {{"kind", kind}, {"message", message}};
}

nlohmann::json RunReport::to_json() const {
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json j = {{"tool", "thetabody"},
                      {"version", THETABODY_VERSION},
                      {"subcommand", subcommand_},
                      {"inputDigest", has_input_ ? nlohmann::json("sha256:" + sha256_hex(digest_input_))
                                                 : nlohmann::json(nullptr)},
                      {"parameters", parameters_},
                      {"result", result_},
                      {"diagnostics", diagnostics_},
                      {"error", error_},
                      {"wallTimeSeconds", wall}};
  round_floats(j);
  return j;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

double round_significant(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

void round_floats(nlohmann::json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    j = std::isfinite(v) ? nlohmann::json(round_significant(v)) : nlohmann::json(nullptr);
  } else if (j.is_structured()) {
    for (auto& child : j) round_floats(child);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw thetabody::InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cli
