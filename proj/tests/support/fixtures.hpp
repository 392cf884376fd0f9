#pragma once

// Shared test helpers: data files, scratch directories, byte patterns.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xdgdl/model.hpp"

namespace xdgdl_test {

std::filesystem::path data_file(const std::string& name);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
xdgdl::Document load_document(const std::string& data_name);

// Distinct, non-periodic content so misplaced bytes are caught.
std::vector<std::byte> byte_pattern(std::size_t n, std::uint32_t seed = 1);

// The config shipped in data/, with every path moved under `root`.
std::string rewritten_config(const std::filesystem::path& root);

class scratch_dir {
 public:
  explicit scratch_dir(const std::string& tag);
  ~scratch_dir();
  scratch_dir(const scratch_dir&) = delete;
  scratch_dir& operator=(const scratch_dir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Sets an environment variable for the lifetime of the object.
class env_override {
 public:
  env_override(const char* name, const std::string& value);
  ~env_override();
  env_override(const env_override&) = delete;
  env_override& operator=(const env_override&) = delete;

 private:
  std::string name_;
  std::optional<std::string> saved_;
};

}  // namespace xdgdl_test
