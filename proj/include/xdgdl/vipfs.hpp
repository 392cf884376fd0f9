#pragma once

// ViPFS-style workflow: sidecar discovery, the cyclic default
// distribution, and copy in/out of the simulated grid store.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xdgdl/gridstore.hpp"
#include "xdgdl/model.hpp"
#include "xdgdl/vipfs_config.hpp"

namespace xdgdl {

inline constexpr std::string_view kSidecarPrefix = ".vd.";

struct SidecarLookup {
  std::filesystem::path path;
  std::optional<Document> document;  // set only for a valid descriptor
  std::string text;                  // raw sidecar contents when readable
  std::string diagnostic;            // why document is empty, or warnings
};

// Never throws for sidecar content; absence or invalidity is reported in
// the diagnostic.
SidecarLookup locate_sidecar(const std::filesystem::path& data_path);

// Round-robin over all configured devices in DATA_BUFLEN chunks.
Document default_descriptor(const VipfsConfig& cfg, Bytes file_size, std::string_view timestamp);

// File name coerced into an XML ID usable as TIMESTAMP.
std::string timestamp_for(std::string_view file_name);

struct CopyInResult {
  StoredFile stored;
  bool used_sidecar = false;
  std::vector<std::string> diagnostics;
};

// Stores `src` under its file name.  Throws NotAPartitionError for a
// sidecar whose views do not partition the file; every other sidecar
// problem falls back to default_descriptor.
CopyInResult cp_in(const VipfsConfig& cfg, const std::filesystem::path& src);

// Writes the stored bytes of `name` to `dst` (or dst/name when dst is a
// directory) and returns the written path.
std::filesystem::path cp_out(const VipfsConfig& cfg, std::string_view name,
                             const std::filesystem::path& dst);

// Reads the config named by VIP_CONF.  A VIP_DIR environment value that
// disagrees with the config is reported in `warnings`; the config wins.
VipfsConfig config_from_environment(std::vector<std::string>& warnings);

// CLI exit status: 2 validation, 3 partition, 4 I/O.
int exit_status(ErrorCode code);

}  // namespace xdgdl
