#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "xdgdl/gridstore.hpp"

namespace fs = std::filesystem;

namespace xdgdl {

namespace {

[[noreturn]] void io_failure(const std::string& what, const fs::path& path) {
  throw Error(ErrorCode::IoFailure, what + ": " + path.string());
}

void write_atomic(const fs::path& path, std::span<const std::byte> bytes) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) io_failure("cannot create", tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      io_failure("write failed", tmp);
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    io_failure("cannot commit", path);
  }
}

void write_text_atomic(const fs::path& path, std::string_view text) {
  write_atomic(path, std::as_bytes(std::span(text.data(), text.size())));
}

std::optional<ByteVector> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string s = buffer.str();
  ByteVector out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), [](char c) { return std::byte(c); });
  return out;
}

std::optional<std::string> read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void check_name(std::string_view name) {
  if (name.empty() || name == "." || name == ".." || name.find('/') != std::string_view::npos ||
      name.starts_with(".vd.")) {
    throw Error(ErrorCode::InvalidValue, "'" + std::string(name) + "' is not a storable file name");
  }
}

// Manifest device order -> layout device.
std::vector<const GridDevice*> bind_devices(const GridLayout& layout, const Document& manifest,
                                            std::vector<std::string>* warnings) {
  std::vector<const GridDevice*> bound;
  std::size_t needed = device_count(manifest);
  if (needed > layout.devices.size()) {
    throw Error(ErrorCode::DeviceCountMismatch,
                "manifest lists " + std::to_string(needed) + " devices, store has " +
                    std::to_string(layout.devices.size()));
  }
  std::size_t i = 0;
  for (const auto& server : manifest.island.servers) {
    for (const auto& device : server.devices) {
      const GridDevice& target = layout.devices[i++];
      if (warnings && device.device_id != target.device_id) {
        warnings->push_back("manifest device " + server.host + ":" + device.device_id +
                            " stored on " + target.directory.string());
      }
      bound.push_back(&target);
    }
  }
  return bound;
}

}  // namespace

std::string simulated_host(std::size_t index) { return "server" + std::to_string(index + 1); }

GridLayout init_store(const VipfsConfig& cfg) {
  if (cfg.device_paths.empty()) {
    throw Error(ErrorCode::EmptyDeviceList, "configuration lists no device");
  }
  GridLayout layout;
  layout.root = cfg.vip_dir;
  std::vector<fs::path> seen;
  auto ensure_dir = [](const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) io_failure("cannot create directory", dir);
  };
  ensure_dir(layout.root);
  for (std::size_t i = 0; i < cfg.device_paths.size(); ++i) {
    fs::path dir = fs::path(cfg.device_paths[i]);
    ensure_dir(dir);
    fs::path canonical = fs::weakly_canonical(dir);
    if (std::find(seen.begin(), seen.end(), canonical) != seen.end()) {
      io_failure("device directory listed twice", dir);
    }
    seen.push_back(canonical);
    layout.devices.push_back({cfg.srv_group_name, simulated_host(i), cfg.device_paths[i], dir});
  }
  return layout;
}

fs::path manifest_path(const GridLayout& layout, std::string_view name) {
  return layout.root / (".vd." + std::string(name));
}

fs::path size_path(const GridLayout& layout, std::string_view name) {
  return layout.root / (".vd." + std::string(name) + ".size");
}

fs::path stub_path(const GridLayout& layout, std::string_view name) {
  return layout.root / std::string(name);
}

fs::path fragment_path(const GridDevice& device, std::string_view timestamp) {
  return device.directory / (std::string(timestamp) + ".frag");
}

StoredFile put_file(const GridLayout& layout, std::string_view name,
                    std::span<const std::byte> data, const Document& manifest,
                    const std::optional<std::string>& manifest_text) {
  check_name(name);
  ValidationReport report = validate_document(manifest);
  if (!report.ok()) throw ValidationError(std::move(report));

  StoredFile stored;
  stored.name = std::string(name);
  stored.timestamp_id = manifest.timestamp;
  stored.manifest = manifest;
  stored.file_size = data.size();

  DistributionMap map = build_distribution_map(manifest, data.size());
  std::vector<Fragment> fragments = scatter(data, map);
  std::vector<const GridDevice*> devices = bind_devices(layout, manifest, &stored.warnings);

  for (const auto& device : layout.devices) {
    if (fs::exists(fragment_path(device, stored.timestamp_id))) {
      throw Error(ErrorCode::DuplicateTimestamp,
                  "fragment " + fragment_path(device, stored.timestamp_id).string() + " exists");
    }
  }
  fs::path vd = manifest_path(layout, name);
  bool have_manifest = fs::exists(vd);
  if (have_manifest) {
    auto existing = read_text(vd);
    bool same = false;
    try {
      same = existing && parse_document(*existing) == manifest;
    } catch (const Error&) {
      same = false;
    }
    if (!same) {
      throw Error(ErrorCode::ManifestConflict, vd.string() + " describes a different distribution");
    }
  }

  std::vector<fs::path> committed;
  bool wrote_manifest = false;
  bool wrote_size = false;
  try {
    for (std::size_t i = 0; i < fragments.size(); ++i) {
      fs::path path = fragment_path(*devices[i], stored.timestamp_id);
      write_atomic(path, fragments[i].payload);
      committed.push_back(path);
    }
    if (!have_manifest) {
      write_text_atomic(vd, manifest_text ? *manifest_text : serialize_document(manifest));
      wrote_manifest = true;
    }
    write_text_atomic(size_path(layout, name), std::to_string(data.size()) + "\n");
    wrote_size = true;
    write_atomic(stub_path(layout, name), {});
  } catch (...) {
    std::error_code ignored;
    for (const auto& path : committed) fs::remove(path, ignored);
    if (wrote_manifest) fs::remove(vd, ignored);
    if (wrote_size) fs::remove(size_path(layout, name), ignored);
    throw;
  }
  stored.fragment_paths = std::move(committed);
  return stored;
}

ByteVector get_file(const GridLayout& layout, std::string_view name) {
  check_name(name);
  fs::path vd = manifest_path(layout, name);
  auto manifest_text = read_text(vd);
  if (!manifest_text) throw Error(ErrorCode::MissingManifest, "no manifest " + vd.string());
  if (!fs::exists(stub_path(layout, name))) {
    throw Error(ErrorCode::MissingManifest, "no stub " + stub_path(layout, name).string());
  }
  auto size_text = read_text(size_path(layout, name));
  Bytes file_size = 0;
  {
    std::string s = size_text.value_or("");
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), file_size);
    if (!size_text || s.empty() || ec != std::errc() || end != s.data() + s.size()) {
      throw Error(ErrorCode::MissingManifest, "unreadable size file " + size_path(layout, name).string());
    }
  }

  Document manifest = parse_document(*manifest_text);
  DistributionMap map = build_distribution_map(manifest, file_size);
  std::vector<const GridDevice*> devices = bind_devices(layout, manifest, nullptr);
  std::vector<Fragment> fragments;
  for (std::size_t i = 0; i < map.entries.size(); ++i) {
    fs::path path = fragment_path(*devices[i], manifest.timestamp);
    auto payload = read_bytes(path);
    if (!payload) {
      throw Error(ErrorCode::MissingFragment,
                  "fragment of " + map.entries[i].device.qualified() + " missing: " + path.string());
    }
    fragments.push_back({map.entries[i].device, std::move(*payload)});
  }
  return gather(fragments, map);
}

std::vector<std::string> list_files(const GridLayout& layout) {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(layout.root, ec)) {
    std::string name = entry.path().filename().string();
    if (name.starts_with(".") || !entry.is_regular_file()) continue;
    if (fs::exists(manifest_path(layout, name))) names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace xdgdl
