#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "xdgdl/vipfs.hpp"

namespace fs = std::filesystem;

namespace xdgdl {

namespace {

std::optional<std::string> slurp(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Int as_int(Bytes value) {
  if (value > static_cast<Bytes>(std::numeric_limits<Int>::max())) {
    throw Error(ErrorCode::ArithmeticOverflow, "distribution parameter exceeds 63 bits");
  }
  return static_cast<Int>(value);
}

}  // namespace

SidecarLookup locate_sidecar(const fs::path& data_path) {
  SidecarLookup result;
  result.path = data_path.parent_path() / (std::string(kSidecarPrefix) + data_path.filename().string());
  auto text = slurp(result.path);
  if (!text) {
    result.diagnostic = "no sidecar " + result.path.string();
    return result;
  }
  result.text = std::move(*text);
  Document doc;
  try {
    doc = parse_document(result.text);
  } catch (const ValidationError& e) {
    result.diagnostic = "invalid sidecar " + result.path.string() + ":\n" + e.report().to_string();
    return result;
  } catch (const Error& e) {
    result.diagnostic = "unreadable sidecar " + result.path.string() + ": " + e.what();
    return result;
  }
  ValidationReport report = validate_document(doc);
  if (!report.ok()) {
    result.diagnostic = "invalid sidecar " + result.path.string() + ":\n" + report.to_string();
    return result;
  }
  result.diagnostic = report.to_string();
  result.document = std::move(doc);
  return result;
}

std::string timestamp_for(std::string_view file_name) {
  std::string id;
  for (char c : file_name) {
    auto u = static_cast<unsigned char>(c);
    id += (u < 0x80 && (std::isalnum(u) || c == '_' || c == '-' || c == '.')) ? c : '_';
  }
  if (id.empty() || !(std::isalpha(static_cast<unsigned char>(id.front())) || id.front() == '_')) {
    id.insert(id.begin(), '_');
  }
  return id;
}

Document default_descriptor(const VipfsConfig& cfg, Bytes /*file_size*/, std::string_view timestamp) {
  // the pattern is size independent: views tile and clip at end of file
  const Bytes devices = cfg.device_paths.size();
  const Bytes chunk = cfg.data_buflen;
  if (devices == 0) throw Error(ErrorCode::EmptyDeviceList, "configuration lists no device");
  if (chunk == 0) throw Error(ErrorCode::InvalidValue, "DATA_BUFLEN must be positive");

  Document doc;
  doc.version = "1.0";
  doc.timestamp = std::string(timestamp);
  TypeDecl bytes_type;
  bytes_type.members.emplace_back(EtypeDecl{"CHAR", 1, std::nullopt});
  doc.types.push_back(std::move(bytes_type));
  doc.island.name = cfg.srv_group_name.empty() ? "vipios" : cfg.srv_group_name;
  for (Bytes d = 0; d < devices; ++d) {
    ViewDecl view;
    view.skip_header = 0;
    view.skip = as_int(detail::checked_mul(devices - 1 - d, chunk));
    BlockDecl block;
    block.offset = as_int(detail::checked_mul(d, chunk));
    block.repeat = 1;
    block.count = as_int(chunk);
    block.stride = as_int(detail::checked_mul(devices - 1, chunk));
    view.blocks.push_back(std::move(block));

    ServerDecl server;
    server.host = simulated_host(d);
    server.devices.push_back(DeviceDecl{cfg.device_paths[d], std::move(view)});
    doc.island.servers.push_back(std::move(server));
  }
  return doc;
}

CopyInResult cp_in(const VipfsConfig& cfg, const fs::path& src) {
  auto content = slurp(src);
  if (!content) throw Error(ErrorCode::IoFailure, "cannot read " + src.string());
  std::span<const std::byte> data = std::as_bytes(std::span(content->data(), content->size()));
  GridLayout layout = init_store(cfg);
  const std::string name = src.filename().string();

  CopyInResult result;
  SidecarLookup sidecar = locate_sidecar(src);
  if (!sidecar.diagnostic.empty()) result.diagnostics.push_back(sidecar.diagnostic);

  if (sidecar.document) {
    const Document& doc = *sidecar.document;
    std::optional<DistributionMap> map;
    try {
      if (device_count(doc) > layout.devices.size()) {
        result.diagnostics.push_back("sidecar lists " + std::to_string(device_count(doc)) +
                                     " devices, store has " + std::to_string(layout.devices.size()) +
                                     "; using the cyclic default");
      } else {
        map = build_distribution_map(doc, data.size());
      }
    } catch (const Error& e) {
      result.diagnostics.push_back(std::string("sidecar unusable (") + e.what() +
                                   "); using the cyclic default");
    }
    if (map) {
      PartitionVerdict verdict = check_partition(*map);
      if (!verdict.exact()) throw NotAPartitionError(std::move(verdict));
      result.used_sidecar = true;
      result.stored = put_file(layout, name, data, doc, sidecar.text);
      return result;
    }
  }
  Document fallback = default_descriptor(cfg, data.size(), timestamp_for(name));
  result.stored = put_file(layout, name, data, fallback);
  return result;
}

fs::path cp_out(const VipfsConfig& cfg, std::string_view name, const fs::path& dst) {
  GridLayout layout = init_store(cfg);
  ByteVector bytes = get_file(layout, name);
  std::error_code ec;
  fs::path target = fs::is_directory(dst, ec) ? dst / std::string(name) : dst;
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + target.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw Error(ErrorCode::IoFailure, "write failed: " + target.string());
  return target;
}

VipfsConfig config_from_environment(std::vector<std::string>& warnings) {
  const char* conf = std::getenv("VIP_CONF");
  if (!conf || !*conf) throw Error(ErrorCode::IoFailure, "VIP_CONF is not set");
  VipfsConfig cfg = load_config(conf);
  const char* env_dir = std::getenv("VIP_DIR");
  if (env_dir && *env_dir && (fs::path(env_dir) / "").lexically_normal() != (fs::path(cfg.vip_dir) / "").lexically_normal()) {
    warnings.push_back(std::string("VIP_DIR=") + env_dir + " ignored; config names " + cfg.vip_dir);
  }
  return cfg;
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAPartition:
      return 3;
    case ErrorCode::IoFailure:
    case ErrorCode::MissingManifest:
    case ErrorCode::MissingFragment:
    case ErrorCode::LengthMismatch:
    case ErrorCode::SizeMismatch:
    case ErrorCode::DuplicateTimestamp:
    case ErrorCode::ManifestConflict:
      return 4;
    default:
      return 2;
  }
}

}  // namespace xdgdl
