#pragma once

// Simulated datagrid on the local filesystem.  Every configured device path
// stands for one server's device.  On-disk layout:
//
//   <device_dir>/<timestamp>.frag    raw fragment bytes
//   <vip_dir>/<name>                 0-byte stub
//   <vip_dir>/.vd.<name>             xDGDL manifest
//   <vip_dir>/.vd.<name>.size        logical size, ASCII decimal + newline

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xdgdl/model.hpp"
#include "xdgdl/scatter_gather.hpp"
#include "xdgdl/vipfs_config.hpp"

namespace xdgdl {

struct GridDevice {
  std::string island;
  std::string host;
  std::string device_id;
  std::filesystem::path directory;
};

struct GridLayout {
  std::filesystem::path root;  // the VIP_DIR
  std::vector<GridDevice> devices;
};

struct StoredFile {
  std::string name;
  std::string timestamp_id;
  Document manifest;
  Bytes file_size = 0;
  std::vector<std::filesystem::path> fragment_paths;  // manifest device order
  std::vector<std::string> warnings;
};

// Host label used for the i-th configured device (0-based).
std::string simulated_host(std::size_t index);

// Creates VIP_DIR and the device directories; idempotent.  Throws
// Error(EmptyDeviceList) or Error(IoFailure).
GridLayout init_store(const VipfsConfig& cfg);

std::filesystem::path manifest_path(const GridLayout& layout, std::string_view name);
std::filesystem::path size_path(const GridLayout& layout, std::string_view name);
std::filesystem::path stub_path(const GridLayout& layout, std::string_view name);
std::filesystem::path fragment_path(const GridDevice& device, std::string_view timestamp);

// Manifest devices bind to layout devices by position.  When
// `manifest_text` is given it is stored verbatim as the sidecar.
StoredFile put_file(const GridLayout& layout, std::string_view name,
                    std::span<const std::byte> data, const Document& manifest,
                    const std::optional<std::string>& manifest_text = std::nullopt);

ByteVector get_file(const GridLayout& layout, std::string_view name);

// Names with both a stub and a manifest, sorted.
std::vector<std::string> list_files(const GridLayout& layout);

}  // namespace xdgdl
