#include <sstream>

#include "xdgdl/model.hpp"
#include "xdgdl/xml.hpp"

namespace xdgdl {

namespace {

class Writer {
 public:
  std::string write(const Document& doc) {
    out_ << "<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?>\n"
         << "<!DOCTYPE PARSTORAGE SYSTEM \"XDGDL.dtd\">\n";
    open("PARSTORAGE", {{"VERSION", doc.version}, {"TIMESTAMP", doc.timestamp}});
    for (const auto& procs : doc.processors) {
      open("PROCESSORS", {{"NAME", procs.name}});
      for (const auto& dim : procs.dims) {
        leaf("PROC_DIMENSION", {{"LOWER", num(dim.lower)}, {"UPPER", num(dim.upper)}});
      }
      close("PROCESSORS");
    }
    for (const auto& type : doc.types) write_type(type);
    for (const auto& align : doc.aligns) {
      leaf("ALIGN", {{"WHAT", align.what}, {"WITH", align.with_target}});
    }
    open("ISLAND", {{"NAME", doc.island.name}});
    for (const auto& server : doc.island.servers) {
      open("SERVER", {{"HOST", server.host}});
      for (const auto& device : server.devices) {
        open("DEVICE", {{"DEVICE_ID", device.device_id}});
        if (const auto* view = device.view()) {
          write_view(*view);
        } else {
          leaf("NOVIEW", {});
        }
        close("DEVICE");
      }
      close("SERVER");
    }
    close("ISLAND");
    close("PARSTORAGE");
    return out_.str();
  }

 private:
  using Attrs = std::vector<std::pair<const char*, std::string>>;

  std::ostringstream out_;
  int depth_ = 0;

  static std::string num(Int v) { return std::to_string(v); }

  void start_tag(const char* name, const Attrs& attrs) {
    out_ << std::string(2 * depth_, ' ') << '<' << name;
    for (const auto& [key, value] : attrs) {
      out_ << ' ' << key << "=\"" << xml::escape_attribute_latin1(value) << '"';
    }
  }

  void open(const char* name, const Attrs& attrs) {
    start_tag(name, attrs);
    out_ << ">\n";
    ++depth_;
  }

  void close(const char* name) {
    --depth_;
    out_ << std::string(2 * depth_, ' ') << "</" << name << ">\n";
  }

  void leaf(const char* name, const Attrs& attrs) {
    start_tag(name, attrs);
    out_ << "/>\n";
  }

  void write_type(const TypeDecl& type) {
    Attrs attrs;
    if (type.type_name) attrs.emplace_back("TYPENAME", *type.type_name);
    if (type.name) attrs.emplace_back("NAME", *type.name);
    open("TYPE", attrs);
    for (const auto& member : type.members) {
      if (const auto* etype = std::get_if<EtypeDecl>(&member)) {
        Attrs ea{{"TYPE", etype->base}, {"LENGTH", num(etype->length)}};
        if (etype->name) ea.emplace_back("NAME", *etype->name);
        leaf("ETYPE", ea);
      } else if (const auto* array = std::get_if<ArrayDecl>(&member)) {
        write_array(*array);
      } else {
        write_type(*std::get<Box<TypeDecl>>(member));
      }
    }
    close("TYPE");
  }

  void write_array(const ArrayDecl& array) {
    Attrs attrs;
    if (array.name) attrs.emplace_back("NAME", *array.name);
    attrs.emplace_back("MAJOR", array.major == Major::Row ? "ROW" : "COLUMN");
    if (array.distribute_onto) attrs.emplace_back("DISTRIBUTE_ONTO", *array.distribute_onto);
    open("ARRAY", attrs);
    // the content model is (TYPE, DIMENSION)+, so the element type is
    // repeated ahead of every dimension
    for (const auto& dim : array.dims) {
      write_type(*array.element);
      Attrs da{{"LOWER", num(dim.lower)}, {"UPPER", num(dim.upper)}};
      switch (dim.distribute) {
        case Distribution::Block: da.emplace_back("DISTRIBUTE", "BLOCK"); break;
        case Distribution::Cyclic: da.emplace_back("DISTRIBUTE", "CYCLIC"); break;
        case Distribution::No: da.emplace_back("DISTRIBUTE", "NO"); break;
        case Distribution::Unspecified: break;
      }
      da.emplace_back("DIST_SKALAR", num(dim.dist_skalar));
      leaf("DIMENSION", da);
    }
    close("ARRAY");
  }

  void write_view(const ViewDecl& view) {
    open("VIEW", {{"SKIP_HEADER", num(view.skip_header)}, {"SKIP", num(view.skip)}});
    for (const auto& block : view.blocks) {
      open("BLOCK", {{"OFFSET", num(block.offset)},
                     {"REPEAT", num(block.repeat)},
                     {"COUNT", num(block.count)},
                     {"STRIDE", num(block.stride)}});
      if (const auto* inner = block.nested_view()) {
        write_view(*inner);
      } else {
        leaf("BYTEBLOCK", {});
      }
      close("BLOCK");
    }
    close("VIEW");
  }
};

}  // namespace

std::string serialize_document(const Document& doc) {
  ValidationReport report = validate_document(doc);
  if (!report.ok()) {
    throw Error(ErrorCode::InvalidDocument, "cannot serialize an invalid document:\n" +
                                                report.to_string());
  }
  return Writer().write(doc);
}

}  // namespace xdgdl
