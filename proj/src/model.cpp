#include <algorithm>
#include <cctype>
#include <sstream>

#include "xdgdl/model.hpp"

namespace xdgdl {

const ViewDecl* BlockDecl::nested_view() const {
  if (const auto* boxed = std::get_if<Box<ViewDecl>>(&child)) return &**boxed;
  return nullptr;
}

const ViewDecl* DeviceDecl::view() const { return std::get_if<ViewDecl>(&access); }

namespace {

void collect_type_names(const TypeDecl& type, std::set<std::string>& out,
                        std::vector<const ArrayDecl*>* arrays) {
  if (type.name) out.insert(*type.name);
  for (const auto& member : type.members) {
    if (const auto* etype = std::get_if<EtypeDecl>(&member)) {
      if (etype->name) out.insert(*etype->name);
    } else if (const auto* array = std::get_if<ArrayDecl>(&member)) {
      if (array->name) out.insert(*array->name);
      if (arrays) arrays->push_back(array);
      collect_type_names(*array->element, out, arrays);
    } else {
      collect_type_names(*std::get<Box<TypeDecl>>(member), out, arrays);
    }
  }
}

}  // namespace

DeclaredNames declared_names(const Document& doc) {
  DeclaredNames names;
  for (const auto& type : doc.types) collect_type_names(type, names.types, nullptr);
  for (const auto& procs : doc.processors) names.processors.insert(procs.name);
  return names;
}

std::vector<const ArrayDecl*> collect_arrays(const Document& doc) {
  std::vector<const ArrayDecl*> arrays;
  std::set<std::string> ignored;
  for (const auto& type : doc.types) collect_type_names(type, ignored, &arrays);
  return arrays;
}

std::size_t device_count(const Document& doc) {
  std::size_t n = 0;
  for (const auto& server : doc.island.servers) n += server.devices.size();
  return n;
}

bool is_xml_id(std::string_view text) {
  if (text.empty()) return false;
  auto start_ok = [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || u >= 0x80;
  };
  auto rest_ok = [&](char c) {
    auto u = static_cast<unsigned char>(c);
    return start_ok(c) || std::isdigit(u) || c == '-' || c == '.';
  };
  return start_ok(text.front()) && std::all_of(text.begin() + 1, text.end(), rest_ok);
}

bool ValidationReport::ok() const { return error_count() == 0; }

bool ValidationReport::has_rule(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(),
                    [](const Violation& v) { return v.severity == Severity::Error; }));
}

void ValidationReport::add(Severity severity, std::string_view rule, std::string path,
                           std::string message) {
  violations.push_back({severity, std::string(rule), std::move(path), std::move(message)});
}

void ValidationReport::append(const ValidationReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << (v.severity == Severity::Error ? "error" : "warning") << ": [" << v.rule << "] "
        << v.path << ": " << v.message << '\n';
  }
  return out.str();
}

ValidationError::ValidationError(ValidationReport report)
    : Error(ErrorCode::ValidationError,
            report.violations.empty() ? std::string("invalid document")
                                      : report.violations.front().path + ": " +
                                            report.violations.front().message),
      report_(std::move(report)) {}

}  // namespace xdgdl
