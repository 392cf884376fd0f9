#pragma once

// ViPIOS.conf: whitespace separated KEY VALUE tokens, e.g.
//
//   MAX_APP 5 MAX_SRV_FILE 32 DATA_BUFLEN 4096
//   SRV_GROUP_NAME "vipios_server" SRVR_DEVICE_LIST 3
//   /home/felder/ViPIOS/dev1/
//   /home/felder/ViPIOS/dev2/
//   /home/felder/ViPIOS/dev3/
//   VIP_DIR "/home/felder/vipios"
//
// SRVR_DEVICE_LIST n is followed by exactly n path tokens.  All six keys
// are required; MAX_APP and MAX_SRV_FILE are parsed but have no effect.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xdgdl {

struct VipfsConfig {
  std::uint64_t max_app = 1;
  std::uint64_t max_srv_file = 1;
  std::uint64_t data_buflen = 1;
  std::string srv_group_name;
  std::vector<std::string> device_paths;
  std::string vip_dir;
  bool operator==(const VipfsConfig&) const = default;
};

// Throws Error with MissingKey, UnknownKey, DuplicateKey,
// DeviceCountMismatch or InvalidValue; messages carry line and column.
VipfsConfig parse_config(std::string_view text);

// Canonical token order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const VipfsConfig& cfg);

VipfsConfig load_config(const std::filesystem::path& path);

}  // namespace xdgdl
