#include "fixtures.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#ifndef XDGDL_TEST_DATA_DIR
#error "XDGDL_TEST_DATA_DIR must be defined"
#endif

namespace fs = std::filesystem;

namespace xdgdl_test {

fs::path data_file(const std::string& name) { return fs::path(XDGDL_TEST_DATA_DIR) / name; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

xdgdl::Document load_document(const std::string& data_name) {
  return xdgdl::parse_document(read_text(data_file(data_name)));
}

std::vector<std::byte> byte_pattern(std::size_t n, std::uint32_t seed) {
  std::vector<std::byte> out(n);
  std::uint32_t x = seed * 2654435761u + 12345u;
  for (std::size_t i = 0; i < n; ++i) {
    x ^= x << 13;
    x ^= x >> 17;
    x ^= x << 5;
    out[i] = static_cast<std::byte>((x >> 8) ^ static_cast<std::uint32_t>(i));
  }
  return out;
}

std::string rewritten_config(const fs::path& root) {
  std::string text = read_text(data_file("ViPIOS.conf"));
  const std::string home = "/home/felder";
  std::string out;
  std::size_t at = 0;
  for (std::size_t hit; (hit = text.find(home, at)) != std::string::npos; at = hit + home.size()) {
    out += text.substr(at, hit - at) + root.string();
  }
  return out + text.substr(at);
}

scratch_dir::scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("xdgdl_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

scratch_dir::~scratch_dir() {
  std::error_code ignored;
  fs::remove_all(path_, ignored);
}

env_override::env_override(const char* name, const std::string& value) : name_(name) {
  if (const char* old = std::getenv(name)) saved_ = old;
  ::setenv(name, value.c_str(), 1);
}

env_override::~env_override() {
  if (saved_) {
    ::setenv(name_.c_str(), saved_->c_str(), 1);
  } else {
    ::unsetenv(name_.c_str());
  }
}

}  // namespace xdgdl_test
