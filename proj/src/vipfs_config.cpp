#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "xdgdl/errors.hpp"
#include "xdgdl/vipfs_config.hpp"

namespace xdgdl {

namespace {

struct Token {
  std::string text;
  bool quoted = false;
  std::size_t line = 0;
  std::size_t column = 0;

  std::string where() const {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
  }
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1, column = 1;
  std::size_t i = 0;
  auto step = [&] {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++i;
  };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      step();
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = column;
    if (text[i] == '"') {
      tok.quoted = true;
      step();
      std::size_t start = i;
      while (i < text.size() && text[i] != '"' && text[i] != '\n') step();
      if (i >= text.size() || text[i] != '"') {
        throw Error(ErrorCode::InvalidValue, "unterminated quoted value at " + tok.where());
      }
      tok.text = std::string(text.substr(start, i - start));
      step();
    } else {
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) step();
      tok.text = std::string(text.substr(start, i - start));
    }
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

constexpr std::array<std::string_view, 6> kKeys = {
    "MAX_APP", "MAX_SRV_FILE", "DATA_BUFLEN", "SRV_GROUP_NAME", "SRVR_DEVICE_LIST", "VIP_DIR"};

bool is_key(const Token& tok) {
  return !tok.quoted && std::find(kKeys.begin(), kKeys.end(), tok.text) != kKeys.end();
}

bool looks_like_key(const Token& tok) {
  return !tok.quoted && !tok.text.empty() &&
         std::all_of(tok.text.begin(), tok.text.end(), [](char c) {
           return std::isupper(static_cast<unsigned char>(c)) ||
                  std::isdigit(static_cast<unsigned char>(c)) || c == '_';
         });
}

std::uint64_t parse_count(const Token& key, const Token* value, bool allow_zero) {
  if (!value || value->quoted) {
    throw Error(ErrorCode::InvalidValue, key.text + " at " + key.where() + " needs an integer value");
  }
  std::uint64_t n = 0;
  const auto& s = value->text;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || (n == 0 && !allow_zero)) {
    throw Error(ErrorCode::InvalidValue, key.text + " value '" + s + "' at " + value->where() +
                                             " is not a " +
                                             (allow_zero ? "nonnegative" : "positive") +
                                             " integer");
  }
  return n;
}

std::string quote(const std::string& value) {
  if (value.find('"') != std::string::npos || value.find('\n') != std::string::npos) {
    throw Error(ErrorCode::InvalidValue, "value cannot be quoted: " + value);
  }
  return "\"" + value + "\"";
}

}  // namespace

VipfsConfig parse_config(std::string_view text) {
  std::vector<Token> tokens = tokenize(text);
  VipfsConfig cfg;
  std::vector<std::string_view> seen;
  bool after_device_list = false;
  std::size_t i = 0;
  auto value_at = [&](std::size_t k) -> const Token* { return k < tokens.size() ? &tokens[k] : nullptr; };

  while (i < tokens.size()) {
    const Token& key = tokens[i];
    if (!is_key(key)) {
      if (after_device_list && !looks_like_key(key)) {
        throw Error(ErrorCode::DeviceCountMismatch,
                    "SRVR_DEVICE_LIST declares " + std::to_string(cfg.device_paths.size()) +
                        " devices but '" + key.text + "' at " + key.where() + " follows the list");
      }
      throw Error(ErrorCode::UnknownKey, "unknown token '" + key.text + "' at " + key.where());
    }
    if (std::find(seen.begin(), seen.end(), key.text) != seen.end()) {
      throw Error(ErrorCode::DuplicateKey, key.text + " repeated at " + key.where());
    }
    seen.push_back(*std::find(kKeys.begin(), kKeys.end(), key.text));
    after_device_list = false;
    const Token* value = value_at(i + 1);

    if (key.text == "MAX_APP") {
      cfg.max_app = parse_count(key, value, false);
      i += 2;
    } else if (key.text == "MAX_SRV_FILE") {
      cfg.max_srv_file = parse_count(key, value, false);
      i += 2;
    } else if (key.text == "DATA_BUFLEN") {
      cfg.data_buflen = parse_count(key, value, false);
      i += 2;
    } else if (key.text == "SRV_GROUP_NAME" || key.text == "VIP_DIR") {
      if (!value || is_key(*value)) {
        throw Error(ErrorCode::InvalidValue, key.text + " at " + key.where() + " needs a value");
      }
      (key.text == "VIP_DIR" ? cfg.vip_dir : cfg.srv_group_name) = value->text;
      i += 2;
    } else {  // SRVR_DEVICE_LIST
      std::uint64_t n = parse_count(key, value, true);
      i += 2;
      for (std::uint64_t k = 0; k < n; ++k, ++i) {
        const Token* path = value_at(i);
        if (!path || is_key(*path)) {
          throw Error(ErrorCode::DeviceCountMismatch,
                      "SRVR_DEVICE_LIST at " + key.where() + " declares " + std::to_string(n) +
                          " devices but lists " + std::to_string(k) +
                          (path ? " before " + path->text + " at " + path->where() : std::string()));
        }
        cfg.device_paths.push_back(path->text);
      }
      after_device_list = true;
    }
  }
  for (std::string_view k : kKeys) {
    if (std::find(seen.begin(), seen.end(), k) == seen.end()) {
      throw Error(ErrorCode::MissingKey, std::string(k));
    }
  }
  return cfg;
}

std::string serialize_config(const VipfsConfig& cfg) {
  std::ostringstream out;
  out << "MAX_APP " << cfg.max_app << " MAX_SRV_FILE " << cfg.max_srv_file << " DATA_BUFLEN "
      << cfg.data_buflen << '\n'
      << "SRV_GROUP_NAME " << quote(cfg.srv_group_name) << " SRVR_DEVICE_LIST "
      << cfg.device_paths.size() << '\n';
  for (const auto& path : cfg.device_paths) {
    bool plain = !path.empty() && path.front() != '"' &&
                 std::find(kKeys.begin(), kKeys.end(), path) == kKeys.end() &&
                 std::none_of(path.begin(), path.end(),
                              [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    out << (plain ? path : quote(path)) << '\n';
  }
  out << "VIP_DIR " << quote(cfg.vip_dir) << '\n';
  return out.str();
}

VipfsConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace xdgdl
