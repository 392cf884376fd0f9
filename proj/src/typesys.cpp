#include <type_traits>

#include "element_path.hpp"
#include "xdgdl/typesys.hpp"

namespace xdgdl {

using detail::as_bytes;
using detail::checked_add;
using detail::checked_mul;

SizeResult sizeof_type(const EtypeDecl& etype) {
  Bytes length = as_bytes(etype.length, "LENGTH");
  return {length, length, 1};
}

SizeResult sizeof_type(const ArrayDecl& array) {
  SizeResult element = sizeof_type(*array.element);
  Bytes count = 1;
  for (const auto& dim : array.dims) {
    if (dim.upper < dim.lower) {
      throw Error(ErrorCode::InvalidDocument, "DIMENSION LOWER exceeds UPPER");
    }
    Bytes extent = checked_add(static_cast<Bytes>(dim.upper - dim.lower), 1);
    count = checked_mul(count, extent);
  }
  return {checked_mul(element.total_bytes, count), element.total_bytes, count};
}

SizeResult sizeof_type(const TypeDecl& type) {
  if (type.members.size() == 1) {
    if (const auto* array = std::get_if<ArrayDecl>(&type.members.front())) {
      return sizeof_type(*array);
    }
  }
  Bytes total = 0;
  for (const auto& member : type.members) {
    Bytes part = std::visit(
        [](const auto& m) -> Bytes {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, Box<TypeDecl>>) {
            return sizeof_type(*m).total_bytes;
          } else {
            return sizeof_type(m).total_bytes;
          }
        },
        member);
    total = checked_add(total, part);
  }
  return {total, total, 1};
}

ValidationReport check_align_refs(const Document& doc) {
  ValidationReport report;
  DeclaredNames names = declared_names(doc);
  auto resolves = [&](const std::string& name) {
    return names.types.count(name) > 0 || names.processors.count(name) > 0;
  };
  for (std::size_t i = 0; i < doc.aligns.size(); ++i) {
    const auto& align = doc.aligns[i];
    std::string path = detail::child_path("/PARSTORAGE", "ALIGN", i + 1);
    if (!resolves(align.what)) {
      report.add(Severity::Error, rules::kUnresolvedReference, detail::attribute_path(path, "WHAT"),
                 "ALIGN WHAT names undeclared '" + align.what + "'");
    }
    if (!resolves(align.with_target)) {
      report.add(Severity::Error, rules::kUnresolvedReference, detail::attribute_path(path, "WITH"),
                 "ALIGN WITH names undeclared '" + align.with_target + "'");
    }
  }
  return report;
}

}  // namespace xdgdl
