#include <algorithm>
#include <charconv>
#include <initializer_list>
#include <map>

#include "element_path.hpp"
#include "xdgdl/model.hpp"
#include "xdgdl/xml.hpp"

namespace xdgdl {

using detail::attribute_path;
using detail::child_path;

namespace {

std::string where(const xml::Element& e) {
  return " (line " + std::to_string(e.line) + ", column " + std::to_string(e.column) + ")";
}

// Base-10, optional leading '-', no '+', leading zeros allowed.
std::optional<Int> parse_integer(std::string_view text) {
  if (text.empty() || text.front() == '+') return std::nullopt;
  Int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 10);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

class DocumentBuilder {
 public:
  Document build(const xml::Element& root) {
    Document doc;
    const std::string path = "/PARSTORAGE";
    if (root.name != "PARSTORAGE") {
      report_.add(Severity::Error, rules::kRootElement, "/" + root.name,
                  "root element must be PARSTORAGE, found " + root.name);
      throw ValidationError(std::move(report_));
    }
    check_attributes(root, path, {"VERSION", "TIMESTAMP"});
    check_no_text(root, path);
    doc.version = required_text(root, path, "VERSION");
    doc.timestamp = required_text(root, path, "TIMESTAMP");

    // (PROCESSORS*, TYPE+, ALIGN*, ISLAND)
    static const std::map<std::string, int, std::less<>> kPhase = {
        {"PROCESSORS", 0}, {"TYPE", 1}, {"ALIGN", 2}, {"ISLAND", 3}};
    int phase = 0;
    bool have_island = false;
    for (const auto& child : root.children) {
      auto it = kPhase.find(child.name);
      if (it == kPhase.end()) {
        unknown_element(child, path);
        continue;
      }
      if (it->second < phase || (it->second == 3 && have_island)) {
        report_.add(Severity::Error, rules::kContentModel, child_path(path, child.name),
                    child.name + " out of order; PARSTORAGE content is "
                    "(PROCESSORS*,TYPE+,ALIGN*,ISLAND)" + where(child));
        continue;
      }
      phase = it->second;
      switch (phase) {
        case 0:
          doc.processors.push_back(
              build_processors(child, child_path(path, "PROCESSORS", doc.processors.size() + 1)));
          break;
        case 1:
          doc.types.push_back(build_type(child, child_path(path, "TYPE", doc.types.size() + 1)));
          break;
        case 2:
          doc.aligns.push_back(build_align(child, child_path(path, "ALIGN", doc.aligns.size() + 1)));
          break;
        default:
          doc.island = build_island(child, child_path(path, "ISLAND"));
          have_island = true;
      }
    }
    if (!have_island) {
      report_.add(Severity::Error, rules::kContentModel, path, "PARSTORAGE requires an ISLAND");
    }
    if (!report_.empty()) throw ValidationError(std::move(report_));
    return doc;
  }

 private:
  ValidationReport report_;

  void unknown_element(const xml::Element& e, const std::string& parent) {
    report_.add(Severity::Error, rules::kUnknownElement, child_path(parent, e.name),
                "element " + e.name + " is not allowed here" + where(e));
  }

  void check_attributes(const xml::Element& e, const std::string& path,
                        std::initializer_list<std::string_view> allowed) {
    for (const auto& attr : e.attributes) {
      if (std::find(allowed.begin(), allowed.end(), attr.name) == allowed.end()) {
        report_.add(Severity::Error, rules::kUnknownAttribute, attribute_path(path, attr.name),
                    "attribute " + attr.name + " is not declared for " + e.name + where(e));
      }
    }
  }

  void check_no_text(const xml::Element& e, const std::string& path) {
    if (e.has_significant_text()) {
      report_.add(Severity::Error, rules::kUnexpectedText, path,
                  e.name + " must not contain character data (line " +
                      std::to_string(e.text_line) + ", column " +
                      std::to_string(e.text_column) + ")");
    }
  }

  void check_empty(const xml::Element& e, const std::string& path) {
    check_no_text(e, path);
    for (const auto& child : e.children) {
      report_.add(Severity::Error, rules::kContentModel, child_path(path, child.name),
                  e.name + " is declared EMPTY" + where(child));
    }
  }

  std::string required_text(const xml::Element& e, const std::string& path, std::string_view name) {
    if (const auto* attr = e.find_attribute(name)) return attr->value;
    report_.add(Severity::Error, rules::kRequiredAttribute, attribute_path(path, name),
                e.name + " requires attribute " + std::string(name) + where(e));
    return {};
  }

  std::optional<std::string> optional_text(const xml::Element& e, std::string_view name) {
    if (const auto* attr = e.find_attribute(name)) return attr->value;
    return std::nullopt;
  }

  Int integer_value(const xml::Element& e, const xml::Attribute& attr, const std::string& path) {
    if (auto value = parse_integer(attr.value)) return *value;
    report_.add(Severity::Error, rules::kIntegerSyntax, attribute_path(path, attr.name),
                "attribute " + attr.name + " of " + e.name + " is not an integer: '" +
                    attr.value + "' (line " + std::to_string(attr.line) + ", column " +
                    std::to_string(attr.column) + ")");
    return 0;
  }

  Int required_int(const xml::Element& e, const std::string& path, std::string_view name) {
    if (const auto* attr = e.find_attribute(name)) return integer_value(e, *attr, path);
    report_.add(Severity::Error, rules::kRequiredAttribute, attribute_path(path, name),
                e.name + " requires attribute " + std::string(name) + where(e));
    return 0;
  }

  Int optional_int(const xml::Element& e, const std::string& path, std::string_view name,
                   Int fallback) {
    if (const auto* attr = e.find_attribute(name)) return integer_value(e, *attr, path);
    return fallback;
  }

  ProcessorsDecl build_processors(const xml::Element& e, const std::string& path) {
    ProcessorsDecl procs;
    check_attributes(e, path, {"NAME"});
    check_no_text(e, path);
    procs.name = required_text(e, path, "NAME");
    for (const auto& child : e.children) {
      if (child.name != "PROC_DIMENSION") {
        unknown_element(child, path);
        continue;
      }
      std::string dim_path = child_path(path, "PROC_DIMENSION", procs.dims.size() + 1);
      check_attributes(child, dim_path, {"LOWER", "UPPER"});
      check_empty(child, dim_path);
      ProcDimension dim;
      dim.lower = optional_int(child, dim_path, "LOWER", 1);
      dim.upper = required_int(child, dim_path, "UPPER");
      procs.dims.push_back(dim);
    }
    return procs;
  }

  TypeDecl build_type(const xml::Element& e, const std::string& path) {
    TypeDecl type;
    check_attributes(e, path, {"TYPENAME", "NAME"});
    check_no_text(e, path);
    type.name = optional_text(e, "NAME");
    type.type_name = optional_text(e, "TYPENAME");
    std::size_t n_etype = 0, n_array = 0, n_type = 0;
    for (const auto& child : e.children) {
      if (child.name == "ETYPE") {
        type.members.emplace_back(build_etype(child, child_path(path, "ETYPE", ++n_etype)));
      } else if (child.name == "ARRAY") {
        type.members.emplace_back(build_array(child, child_path(path, "ARRAY", ++n_array)));
      } else if (child.name == "TYPE") {
        type.members.emplace_back(
            Box<TypeDecl>(build_type(child, child_path(path, "TYPE", ++n_type))));
      } else {
        unknown_element(child, path);
      }
    }
    return type;
  }

  EtypeDecl build_etype(const xml::Element& e, const std::string& path) {
    EtypeDecl etype;
    check_attributes(e, path, {"TYPE", "LENGTH", "NAME"});
    check_empty(e, path);
    etype.base = required_text(e, path, "TYPE");
    etype.length = required_int(e, path, "LENGTH");
    etype.name = optional_text(e, "NAME");
    return etype;
  }

  ArrayDecl build_array(const xml::Element& e, const std::string& path) {
    ArrayDecl array;
    check_attributes(e, path, {"NAME", "MAJOR", "DISTRIBUTE_ONTO"});
    check_no_text(e, path);
    array.name = optional_text(e, "NAME");
    array.distribute_onto = optional_text(e, "DISTRIBUTE_ONTO");
    if (auto major = optional_text(e, "MAJOR")) {
      if (*major == "ROW") {
        array.major = Major::Row;
      } else if (*major == "COLUMN") {
        array.major = Major::Column;
      } else {
        report_.add(Severity::Error, rules::kEnumeratedValue, attribute_path(path, "MAJOR"),
                    "MAJOR must be ROW or COLUMN, found '" + *major + "'" + where(e));
      }
    }
    // (TYPE, DIMENSION)+ -- every TYPE names the element type, so repeats
    // must agree.  A TYPE followed by several DIMENSIONs is also accepted.
    std::optional<TypeDecl> element;
    bool last_was_type = false;
    std::size_t n_type = 0;
    for (const auto& child : e.children) {
      if (child.name == "TYPE") {
        std::string type_path = child_path(path, "TYPE", ++n_type);
        TypeDecl t = build_type(child, type_path);
        if (last_was_type) {
          report_.add(Severity::Error, rules::kContentModel, type_path,
                      "ARRAY content is (TYPE,DIMENSION)+" + where(child));
        }
        if (!element) {
          element = std::move(t);
        } else if (!(t == *element)) {
          report_.add(Severity::Error, rules::kContentModel, type_path,
                      "ARRAY element TYPEs disagree" + where(child));
        }
        last_was_type = true;
      } else if (child.name == "DIMENSION") {
        std::string dim_path = child_path(path, "DIMENSION", array.dims.size() + 1);
        if (!element) {
          report_.add(Severity::Error, rules::kContentModel, dim_path,
                      "DIMENSION before the element TYPE of ARRAY" + where(child));
        }
        array.dims.push_back(build_dimension(child, dim_path));
        last_was_type = false;
      } else {
        unknown_element(child, path);
      }
    }
    if (!element) {
      report_.add(Severity::Error, rules::kContentModel, path, "ARRAY requires an element TYPE" + where(e));
    } else {
      array.element = Box<TypeDecl>(std::move(*element));
    }
    if (last_was_type && !array.dims.empty()) {
      report_.add(Severity::Error, rules::kContentModel, path,
                  "ARRAY content must end with a DIMENSION" + where(e));
    }
    return array;
  }

  DimensionDecl build_dimension(const xml::Element& e, const std::string& path) {
    DimensionDecl dim;
    check_attributes(e, path, {"LOWER", "UPPER", "DISTRIBUTE", "DIST_SKALAR"});
    check_empty(e, path);
    dim.lower = optional_int(e, path, "LOWER", 1);
    dim.upper = required_int(e, path, "UPPER");
    dim.dist_skalar = optional_int(e, path, "DIST_SKALAR", 1);
    if (auto dist = optional_text(e, "DISTRIBUTE")) {
      if (*dist == "BLOCK") {
        dim.distribute = Distribution::Block;
      } else if (*dist == "CYCLIC") {
        dim.distribute = Distribution::Cyclic;
      } else if (*dist == "NO") {
        dim.distribute = Distribution::No;
      } else {
        report_.add(Severity::Error, rules::kEnumeratedValue, attribute_path(path, "DISTRIBUTE"),
                    "DISTRIBUTE must be BLOCK, CYCLIC or NO, found '" + *dist + "'" + where(e));
      }
    }
    return dim;
  }

  AlignDecl build_align(const xml::Element& e, const std::string& path) {
    check_attributes(e, path, {"WHAT", "WITH"});
    check_empty(e, path);
    AlignDecl align;
    align.what = required_text(e, path, "WHAT");
    align.with_target = required_text(e, path, "WITH");
    return align;
  }

  IslandDecl build_island(const xml::Element& e, const std::string& path) {
    IslandDecl island;
    check_attributes(e, path, {"NAME"});
    check_no_text(e, path);
    island.name = required_text(e, path, "NAME");
    for (const auto& child : e.children) {
      if (child.name != "SERVER") {
        unknown_element(child, path);
        continue;
      }
      island.servers.push_back(
          build_server(child, child_path(path, "SERVER", island.servers.size() + 1)));
    }
    return island;
  }

  ServerDecl build_server(const xml::Element& e, const std::string& path) {
    ServerDecl server;
    check_attributes(e, path, {"HOST"});
    check_no_text(e, path);
    server.host = required_text(e, path, "HOST");
    for (const auto& child : e.children) {
      if (child.name != "DEVICE") {
        unknown_element(child, path);
        continue;
      }
      server.devices.push_back(
          build_device(child, child_path(path, "DEVICE", server.devices.size() + 1)));
    }
    return server;
  }

  DeviceDecl build_device(const xml::Element& e, const std::string& path) {
    DeviceDecl device;
    check_attributes(e, path, {"DEVICE_ID"});
    check_no_text(e, path);
    device.device_id = required_text(e, path, "DEVICE_ID");
    std::size_t accessors = 0;
    for (const auto& child : e.children) {
      if (child.name == "VIEW") {
        device.access = build_view(child, child_path(path, "VIEW"));
        ++accessors;
      } else if (child.name == "NOVIEW") {
        check_attributes(child, child_path(path, "NOVIEW"), {});
        check_empty(child, child_path(path, "NOVIEW"));
        device.access = NoView{};
        ++accessors;
      } else {
        unknown_element(child, path);
      }
    }
    if (accessors != 1) {
      report_.add(Severity::Error, rules::kDeviceAccess, path,
                  "DEVICE requires exactly one VIEW or NOVIEW, found " +
                      std::to_string(accessors) + where(e));
    }
    return device;
  }

  ViewDecl build_view(const xml::Element& e, const std::string& path) {
    ViewDecl view;
    check_attributes(e, path, {"SKIP_HEADER", "SKIP"});
    check_no_text(e, path);
    view.skip_header = required_int(e, path, "SKIP_HEADER");
    view.skip = required_int(e, path, "SKIP");
    for (const auto& child : e.children) {
      if (child.name != "BLOCK") {
        unknown_element(child, path);
        continue;
      }
      view.blocks.push_back(build_block(child, child_path(path, "BLOCK", view.blocks.size() + 1)));
    }
    return view;
  }

  BlockDecl build_block(const xml::Element& e, const std::string& path) {
    BlockDecl block;
    check_attributes(e, path, {"OFFSET", "REPEAT", "COUNT", "STRIDE"});
    check_no_text(e, path);
    block.offset = required_int(e, path, "OFFSET");
    block.repeat = required_int(e, path, "REPEAT");
    block.count = required_int(e, path, "COUNT");
    block.stride = required_int(e, path, "STRIDE");
    std::size_t children = 0;
    for (const auto& child : e.children) {
      if (child.name == "BYTEBLOCK") {
        check_attributes(child, child_path(path, "BYTEBLOCK"), {});
        check_empty(child, child_path(path, "BYTEBLOCK"));
        block.child = ByteBlock{};
        ++children;
      } else if (child.name == "VIEW") {
        block.child = Box<ViewDecl>(build_view(child, child_path(path, "VIEW")));
        ++children;
      } else {
        unknown_element(child, path);
      }
    }
    if (children != 1) {
      report_.add(Severity::Error, rules::kBlockChild, path,
                  "BLOCK requires exactly one VIEW or BYTEBLOCK, found " +
                      std::to_string(children) + where(e));
    }
    return block;
  }
};

}  // namespace

Document parse_document(std::string_view xml_text) {
  xml::Document tree = xml::parse(xml_text);
  return DocumentBuilder().build(tree.root);
}

}  // namespace xdgdl
