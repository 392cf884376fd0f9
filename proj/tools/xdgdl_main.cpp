// xdgdl: descriptor utilities and a ViPFS-style copy workflow over a
// simulated grid store.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xdgdl/gridstore.hpp"
#include "xdgdl/model.hpp"
#include "xdgdl/scatter_gather.hpp"
#include "xdgdl/typesys.hpp"
#include "xdgdl/view_engine.hpp"
#include "xdgdl/vipfs.hpp"

namespace fs = std::filesystem;
using namespace xdgdl;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in || fs::is_directory(path)) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

Document load_descriptor(const fs::path& path) {
  Document doc = parse_document(read_file(path));
  ValidationReport report = validate_document(doc);
  if (!report.ok()) throw ValidationError(std::move(report));
  if (!report.empty()) std::cerr << report.to_string();
  return doc;
}

fs::path scattered_fragment(const fs::path& dir, const Document& doc, std::size_t index) {
  return dir / (doc.timestamp + "." + std::to_string(index) + ".frag");
}

std::vector<std::string> split_roster(const std::string& list) {
  std::vector<std::string> hosts;
  std::stringstream in(list);
  std::string host;
  while (std::getline(in, host, ',')) {
    if (!host.empty()) hosts.push_back(host);
  }
  return hosts;
}

int cmd_validate(const fs::path& desc) {
  Document doc = parse_document(read_file(desc));
  ValidationReport report = validate_document(doc);
  std::cout << report.to_string();
  if (!report.ok()) return 2;
  std::cout << desc.string() << ": valid\n";
  return 0;
}

int cmd_plan(const fs::path& desc, std::uint64_t size) {
  Document doc = load_descriptor(desc);
  DistributionMap map = build_distribution_map(doc, size);
  for (const auto& entry : map.entries) {
    std::cout << entry.device.qualified() << '\t' << format_extents(entry.extents) << '\n';
  }
  PartitionVerdict verdict = check_partition(map);
  std::cout << "partition: " << status_keyword(verdict.status) << '\n';
  if (verdict.exact()) return 0;
  std::string details = verdict.describe();
  auto first_break = details.find('\n');
  if (first_break != std::string::npos) std::cerr << details.substr(first_break + 1) << '\n';
  return 3;
}

int cmd_scatter(const fs::path& file, const fs::path& desc, const fs::path& out_dir) {
  Document doc = load_descriptor(desc);
  std::string data = read_file(file);
  DistributionMap map = build_distribution_map(doc, data.size());
  std::vector<Fragment> fragments = scatter(std::as_bytes(std::span(data.data(), data.size())), map);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string());
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    fs::path path = scattered_fragment(out_dir, doc, i);
    write_file(path, fragments[i].payload);
    std::cout << path.string() << '\t' << fragments[i].payload.size() << '\n';
  }
  return 0;
}

int cmd_gather(const fs::path& desc, const fs::path& frag_dir, std::uint64_t size,
               const fs::path& out) {
  Document doc = load_descriptor(desc);
  DistributionMap map = build_distribution_map(doc, size);
  std::vector<Fragment> fragments;
  for (std::size_t i = 0; i < map.entries.size(); ++i) {
    fs::path path = scattered_fragment(frag_dir, doc, i);
    if (!fs::exists(path)) {
      throw Error(ErrorCode::MissingFragment, map.entries[i].device.qualified() + ": " + path.string());
    }
    std::string payload = read_file(path);
    auto bytes = std::as_bytes(std::span(payload.data(), payload.size()));
    fragments.push_back({map.entries[i].device, ByteVector(bytes.begin(), bytes.end())});
  }
  ByteVector data = gather(fragments, map);
  write_file(out, data);
  return 0;
}

int cmd_cp_in(const fs::path& src) {
  std::vector<std::string> warnings;
  VipfsConfig cfg = config_from_environment(warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  CopyInResult result = cp_in(cfg, src);
  for (const auto& d : result.diagnostics) {
    if (!d.empty()) std::cerr << d << (d.back() == '\n' ? "" : "\n");
  }
  for (const auto& w : result.stored.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << result.stored.name << ": " << result.stored.file_size << " bytes on "
            << result.stored.fragment_paths.size() << " devices ("
            << (result.used_sidecar ? "sidecar" : "cyclic default") << ")\n";
  return 0;
}

int cmd_cp_out(const std::string& name, const fs::path& dst) {
  std::vector<std::string> warnings;
  VipfsConfig cfg = config_from_environment(warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  fs::path written = cp_out(cfg, name, dst);
  std::cout << written.string() << '\n';
  return 0;
}

int cmd_ls() {
  std::vector<std::string> warnings;
  VipfsConfig cfg = config_from_environment(warnings);
  GridLayout layout = init_store(cfg);
  for (const auto& name : list_files(layout)) std::cout << name << '\n';
  return 0;
}

int cmd_hpf_compile(const fs::path& desc, const std::string& servers, const std::string& array,
                    const std::string& device, const std::string& out) {
  Document source = load_descriptor(desc);
  Document compiled = compile_hpf_document(source, split_roster(servers), array, device);
  std::string text = serialize_document(compiled);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, std::as_bytes(std::span(text.data(), text.size())));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xDGDL descriptor toolkit and simulated ViPFS store"};
  app.require_subcommand(1);

  std::string desc, file, out, frags, name, dst, servers, array, device = "/dev/vda1";
  std::uint64_t size = 0;

  auto* validate = app.add_subcommand("validate", "Parse and validate a descriptor");
  validate->add_option("desc", desc, "descriptor XML")->required();

  auto* plan = app.add_subcommand("plan", "Print per-device extents for a file size");
  plan->add_option("desc", desc, "descriptor XML")->required();
  plan->add_option("--size", size, "logical file size in bytes")->required();

  auto* scatter_cmd = app.add_subcommand("scatter", "Split a file into per-device fragments");
  scatter_cmd->add_option("file", file, "input file")->required();
  scatter_cmd->add_option("desc", desc, "descriptor XML")->required();
  scatter_cmd->add_option("--out", out, "fragment directory")->required();

  auto* gather_cmd = app.add_subcommand("gather", "Reassemble fragments into a file");
  gather_cmd->add_option("desc", desc, "descriptor XML")->required();
  gather_cmd->add_option("--frags", frags, "fragment directory")->required();
  gather_cmd->add_option("--size", size, "logical file size in bytes")->required();
  gather_cmd->add_option("--out", out, "output file")->required();

  auto* cp_in_cmd = app.add_subcommand("cp-in", "Copy a file into the store (config from VIP_CONF)");
  cp_in_cmd->add_option("file", file, "file to store")->required();

  auto* cp_out_cmd = app.add_subcommand("cp-out", "Copy a stored file out of the store");
  cp_out_cmd->add_option("name", name, "stored file name")->required();
  cp_out_cmd->add_option("dst", dst, "destination file or directory")->required();

  auto* ls_cmd = app.add_subcommand("ls", "List stored files");

  auto* hpf = app.add_subcommand("hpf-compile", "Compile an ARRAY distribution into views");
  hpf->add_option("desc", desc, "descriptor XML with PROCESSORS and a distributed ARRAY")->required();
  hpf->add_option("--servers", servers, "comma separated host roster, one per target")->required();
  hpf->add_option("--array", array, "ARRAY NAME (default: first distributed ARRAY)");
  hpf->add_option("--device", device, "DEVICE_ID for every server")->capture_default_str();
  hpf->add_option("--out", out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help lands here too
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*validate) return cmd_validate(desc);
    if (*plan) return cmd_plan(desc, size);
    if (*scatter_cmd) return cmd_scatter(file, desc, out);
    if (*gather_cmd) return cmd_gather(desc, frags, size, out);
    if (*cp_in_cmd) return cmd_cp_in(file);
    if (*cp_out_cmd) return cmd_cp_out(name, dst);
    if (*ls_cmd) return cmd_ls();
    if (*hpf) return cmd_hpf_compile(desc, servers, array, device, out);
  } catch (const ValidationError& e) {
    std::cerr << e.report().to_string();
    return exit_status(e.code());
  } catch (const Error& e) {
    std::cerr << "xdgdl: " << e.what() << '\n';
    return exit_status(e.code());
  }
  return 1;
}
