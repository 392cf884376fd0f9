#include "element_path.hpp"
#include "xdgdl/model.hpp"

namespace xdgdl {

using detail::attribute_path;
using detail::child_path;

namespace {

class Validator {
 public:
  explicit Validator(const Document& doc) : doc_(doc), names_(declared_names(doc)) {}

  ValidationReport run() {
    const std::string path = "/PARSTORAGE";
    require_text(doc_.version, path, "VERSION");
    if (require_text(doc_.timestamp, path, "TIMESTAMP") && !is_xml_id(doc_.timestamp)) {
      error(rules::kIdSyntax, attribute_path(path, "TIMESTAMP"),
            "TIMESTAMP '" + doc_.timestamp + "' is not a valid XML ID");
    }
    for (std::size_t i = 0; i < doc_.processors.size(); ++i) {
      check_processors(doc_.processors[i], child_path(path, "PROCESSORS", i + 1));
    }
    if (doc_.types.empty()) {
      error(rules::kDocumentRequiresType, path, "PARSTORAGE requires TYPE+");
    }
    for (std::size_t i = 0; i < doc_.types.size(); ++i) {
      check_type(doc_.types[i], child_path(path, "TYPE", i + 1));
    }
    for (std::size_t i = 0; i < doc_.aligns.size(); ++i) {
      check_align(doc_.aligns[i], child_path(path, "ALIGN", i + 1));
    }
    check_island(doc_.island, child_path(path, "ISLAND"));
    return std::move(report_);
  }

 private:
  const Document& doc_;
  DeclaredNames names_;
  ValidationReport report_;

  void error(std::string_view rule, std::string path, std::string message) {
    report_.add(Severity::Error, rule, std::move(path), std::move(message));
  }

  bool require_text(const std::string& value, const std::string& path, std::string_view attr) {
    if (!value.empty()) return true;
    error(rules::kRequiredAttribute, attribute_path(path, attr),
          "attribute " + std::string(attr) + " must be present and nonempty");
    return false;
  }

  void nonnegative(Int value, const std::string& path, std::string_view attr) {
    if (value < 0) {
      error(rules::kNonnegative, attribute_path(path, attr),
            std::string(attr) + " must be >= 0, found " + std::to_string(value));
    }
  }

  void positive(Int value, const std::string& path, std::string_view attr) {
    if (value < 1) {
      error(rules::kPositive, attribute_path(path, attr),
            std::string(attr) + " must be >= 1, found " + std::to_string(value));
    }
  }

  void bounds(Int lower, Int upper, const std::string& path) {
    if (lower > upper) {
      error(rules::kBoundOrder, path,
            "LOWER " + std::to_string(lower) + " exceeds UPPER " + std::to_string(upper));
    }
  }

  void check_processors(const ProcessorsDecl& procs, const std::string& path) {
    require_text(procs.name, path, "NAME");
    if (procs.dims.empty()) {
      error(rules::kProcessorsRequiresDimension, path, "PROCESSORS requires PROC_DIMENSION+");
    }
    for (std::size_t i = 0; i < procs.dims.size(); ++i) {
      bounds(procs.dims[i].lower, procs.dims[i].upper,
             child_path(path, "PROC_DIMENSION", i + 1));
    }
  }

  void check_type(const TypeDecl& type, const std::string& path) {
    if (type.members.empty()) {
      error(rules::kTypeRequiresChild, path, "TYPE requires (ETYPE|ARRAY|TYPE)+");
    }
    std::size_t n_etype = 0, n_array = 0, n_type = 0;
    for (const auto& member : type.members) {
      if (const auto* etype = std::get_if<EtypeDecl>(&member)) {
        std::string p = child_path(path, "ETYPE", ++n_etype);
        require_text(etype->base, p, "TYPE");
        positive(etype->length, p, "LENGTH");
      } else if (const auto* array = std::get_if<ArrayDecl>(&member)) {
        check_array(*array, child_path(path, "ARRAY", ++n_array));
      } else {
        check_type(*std::get<Box<TypeDecl>>(member), child_path(path, "TYPE", ++n_type));
      }
    }
  }

  void check_array(const ArrayDecl& array, const std::string& path) {
    check_type(*array.element, child_path(path, "TYPE", 1));
    if (array.dims.empty()) {
      error(rules::kArrayRequiresDimension, path, "ARRAY requires at least one DIMENSION");
    }
    for (std::size_t i = 0; i < array.dims.size(); ++i) {
      const auto& dim = array.dims[i];
      std::string p = child_path(path, "DIMENSION", i + 1);
      bounds(dim.lower, dim.upper, p);
      positive(dim.dist_skalar, p, "DIST_SKALAR");
    }
    if (array.distribute_onto && !names_.processors.count(*array.distribute_onto)) {
      error(rules::kUnresolvedReference, attribute_path(path, "DISTRIBUTE_ONTO"),
            "DISTRIBUTE_ONTO names undeclared PROCESSORS '" + *array.distribute_onto + "'");
    }
  }

  bool resolves(const std::string& name) const {
    return names_.types.count(name) || names_.processors.count(name);
  }

  void check_align(const AlignDecl& align, const std::string& path) {
    if (require_text(align.what, path, "WHAT") && !resolves(align.what)) {
      error(rules::kUnresolvedReference, attribute_path(path, "WHAT"),
            "ALIGN WHAT names undeclared '" + align.what + "'");
    }
    if (require_text(align.with_target, path, "WITH") && !resolves(align.with_target)) {
      error(rules::kUnresolvedReference, attribute_path(path, "WITH"),
            "ALIGN WITH names undeclared '" + align.with_target + "'");
    }
  }

  void check_island(const IslandDecl& island, const std::string& path) {
    require_text(island.name, path, "NAME");
    if (island.servers.empty()) {
      report_.add(Severity::Warning, rules::kIslandWithoutServers, path,
                  "ISLAND has no SERVER; nothing can be stored");
    }
    for (std::size_t s = 0; s < island.servers.size(); ++s) {
      const auto& server = island.servers[s];
      std::string sp = child_path(path, "SERVER", s + 1);
      require_text(server.host, sp, "HOST");
      if (server.devices.empty()) {
        report_.add(Severity::Warning, rules::kServerWithoutDevices, sp, "SERVER has no DEVICE");
      }
      for (std::size_t d = 0; d < server.devices.size(); ++d) {
        const auto& device = server.devices[d];
        std::string dp = child_path(sp, "DEVICE", d + 1);
        require_text(device.device_id, dp, "DEVICE_ID");
        if (const auto* view = device.view()) check_view(*view, child_path(dp, "VIEW"));
      }
    }
  }

  void check_view(const ViewDecl& view, const std::string& path) {
    nonnegative(view.skip_header, path, "SKIP_HEADER");
    nonnegative(view.skip, path, "SKIP");
    if (view.blocks.empty()) {
      error(rules::kViewRequiresBlock, path, "VIEW requires BLOCK+");
    }
    for (std::size_t i = 0; i < view.blocks.size(); ++i) {
      const auto& block = view.blocks[i];
      std::string bp = child_path(path, "BLOCK", i + 1);
      nonnegative(block.offset, bp, "OFFSET");
      positive(block.repeat, bp, "REPEAT");
      positive(block.count, bp, "COUNT");
      nonnegative(block.stride, bp, "STRIDE");
      if (const auto* inner = block.nested_view()) check_view(*inner, child_path(bp, "VIEW"));
    }
  }
};

}  // namespace

ValidationReport validate_document(const Document& doc) { return Validator(doc).run(); }

}  // namespace xdgdl
