/* Copyright 2026 The qmsim Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#ifndef QMSIM_TOOLS_RUN_OUTPUT_HPP_
#define QMSIM_TOOLS_RUN_OUTPUT_HPP_

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmsim/error.hpp"

namespace qmsim::cli {

inline constexpr const char* kVersion = "1.0.0";

#ifndef QMSIM_GIT_DESCRIBE
#define QMSIM_GIT_DESCRIBE "unknown"
#endif

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Files of one CLI run. Every file lands in the manifest with its checksum;
// discard() removes everything written so far.
class RunOutput {
 public:
  RunOutput(std::filesystem::path dir, std::string subcommand, nlohmann::json config)
      : dir_(std::move(dir)), subcommand_(std::move(subcommand)), config_(std::move(config)), started_(utc_now()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw InvalidInput("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
    out << content;
    out.close();
    written_.push_back(path);
    files_.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }

  void write_json(const std::string& name, const nlohmann::json& j) { write(name, j.dump(2) + "\n"); }

  void finish(const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json manifest{{"tool", "qmsim"},
                            {"version", kVersion},
                            {"git_describe", QMSIM_GIT_DESCRIBE},
                            {"subcommand", subcommand_},
                            {"config", config_},
                            {"started_at", started_},
                            {"finished_at", utc_now()},
                            {"files", files_}};
    for (auto it = extra.begin(); it != extra.end(); ++it) manifest[it.key()] = it.value();
    const auto path = dir_ / "manifest.json";
    std::ofstream out(path);
    out << manifest.dump(2) << "\n";
    written_.push_back(path);
  }

  void discard() noexcept {
    for (const auto& p : written_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
    written_.clear();
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string subcommand_;
  nlohmann::json config_;
  std::string started_;
  std::vector<std::filesystem::path> written_;
  nlohmann::json files_ = nlohmann::json::array();
};

}  // namespace qmsim::cli

#endif  // QMSIM_TOOLS_RUN_OUTPUT_HPP_
