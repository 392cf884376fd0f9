#pragma once

// In-memory form of an xDGDL descriptor.  The structs mirror the element
// tree one-to-one; integers are kept signed so that out-of-range values
// survive parsing and can be reported by validate_document().

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "xdgdl/errors.hpp"

namespace xdgdl {

// Owning pointer with value semantics, used to break recursion in the
// element tree (BLOCK -> VIEW, ARRAY -> TYPE).
template <class T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&& other) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&& other) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

using Int = std::int64_t;

struct ProcDimension {
  Int lower = 1;
  Int upper = 1;
  bool operator==(const ProcDimension&) const = default;
};

struct ProcessorsDecl {
  std::string name;
  std::vector<ProcDimension> dims;
  bool operator==(const ProcessorsDecl&) const = default;
};

enum class Distribution { Unspecified, Block, Cyclic, No };
enum class Major { Row, Column };

struct DimensionDecl {
  Int lower = 1;
  Int upper = 1;
  Distribution distribute = Distribution::Unspecified;
  Int dist_skalar = 1;
  bool operator==(const DimensionDecl&) const = default;
};

struct EtypeDecl {
  std::string base;  // TYPE attribute, e.g. "CHAR"
  Int length = 1;
  std::optional<std::string> name;
  bool operator==(const EtypeDecl&) const = default;
};

struct TypeDecl;

struct ArrayDecl {
  std::optional<std::string> name;
  Major major = Major::Row;
  std::optional<std::string> distribute_onto;
  Box<TypeDecl> element;
  std::vector<DimensionDecl> dims;
  bool operator==(const ArrayDecl&) const = default;
};

using TypeMember = std::variant<EtypeDecl, ArrayDecl, Box<TypeDecl>>;

// A TYPE element: a (possibly singleton) compound of members.
struct TypeDecl {
  std::optional<std::string> name;
  std::optional<std::string> type_name;  // TYPENAME attribute
  std::vector<TypeMember> members;
  bool operator==(const TypeDecl&) const = default;
};

struct AlignDecl {
  std::string what;
  std::string with_target;
  bool operator==(const AlignDecl&) const = default;
};

struct ByteBlock {
  bool operator==(const ByteBlock&) const = default;
};

struct NoView {
  bool operator==(const NoView&) const = default;
};

struct ViewDecl;

struct BlockDecl {
  Int offset = 0;
  Int repeat = 1;
  Int count = 1;
  Int stride = 0;
  std::variant<ByteBlock, Box<ViewDecl>> child;
  bool operator==(const BlockDecl&) const = default;

  // nullptr for a BYTEBLOCK leaf
  const ViewDecl* nested_view() const;
};

struct ViewDecl {
  Int skip_header = 0;
  Int skip = 0;
  std::vector<BlockDecl> blocks;
  bool operator==(const ViewDecl&) const = default;
};

struct DeviceDecl {
  std::string device_id;
  std::variant<ViewDecl, NoView> access;
  bool operator==(const DeviceDecl&) const = default;

  // nullptr for NOVIEW
  const ViewDecl* view() const;
};

struct ServerDecl {
  std::string host;
  std::vector<DeviceDecl> devices;
  bool operator==(const ServerDecl&) const = default;
};

struct IslandDecl {
  std::string name;
  std::vector<ServerDecl> servers;
  bool operator==(const IslandDecl&) const = default;
};

struct Document {
  std::string version;
  std::string timestamp;
  std::vector<ProcessorsDecl> processors;
  std::vector<TypeDecl> types;
  std::vector<AlignDecl> aligns;
  IslandDecl island;
  bool operator==(const Document&) const = default;
};

// Names a document declares, for reference resolution.
struct DeclaredNames {
  std::set<std::string> types;       // TYPE, ETYPE and ARRAY NAMEs
  std::set<std::string> processors;  // PROCESSORS NAMEs
};

DeclaredNames declared_names(const Document& doc);

// Every ARRAY in document order, descending into nested TYPEs.
std::vector<const ArrayDecl*> collect_arrays(const Document& doc);

std::size_t device_count(const Document& doc);

// ---------------------------------------------------------------------------
// Validation

namespace rules {
inline constexpr std::string_view kRootElement = "root-element";
inline constexpr std::string_view kUnknownElement = "unknown-element";
inline constexpr std::string_view kUnknownAttribute = "unknown-attribute";
inline constexpr std::string_view kRequiredAttribute = "required-attribute";
inline constexpr std::string_view kContentModel = "content-model";
inline constexpr std::string_view kUnexpectedText = "unexpected-text";
inline constexpr std::string_view kIntegerSyntax = "integer-syntax";
inline constexpr std::string_view kEnumeratedValue = "enumerated-value";
inline constexpr std::string_view kDocumentRequiresType = "document-requires-type";
inline constexpr std::string_view kTypeRequiresChild = "type-requires-child";
inline constexpr std::string_view kArrayRequiresDimension = "array-requires-dimension";
inline constexpr std::string_view kProcessorsRequiresDimension = "processors-requires-dimension";
inline constexpr std::string_view kViewRequiresBlock = "view-requires-block";
inline constexpr std::string_view kDeviceAccess = "device-access";
inline constexpr std::string_view kBlockChild = "block-child";
inline constexpr std::string_view kUnresolvedReference = "unresolved-reference";
inline constexpr std::string_view kNonnegative = "nonnegative";
inline constexpr std::string_view kPositive = "positive";
inline constexpr std::string_view kBoundOrder = "bound-order";
inline constexpr std::string_view kIdSyntax = "id-syntax";
inline constexpr std::string_view kIslandWithoutServers = "island-without-servers";
inline constexpr std::string_view kServerWithoutDevices = "server-without-devices";
}  // namespace rules

enum class Severity { Error, Warning };

struct Violation {
  Severity severity = Severity::Error;
  std::string rule;
  std::string path;  // e.g. /PARSTORAGE/ISLAND/SERVER[2]/DEVICE[1]/VIEW
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  // true when there are no errors (warnings allowed)
  bool ok() const;
  bool empty() const { return violations.empty(); }
  bool has_rule(std::string_view rule) const;
  std::size_t error_count() const;
  void add(Severity severity, std::string_view rule, std::string path, std::string message);
  void append(const ValidationReport& other);
  std::string to_string() const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// Throws ParseError for malformed XML and ValidationError for content the
// model cannot represent (unknown names, missing required integers, bad
// nesting, non-integer numbers).
Document parse_document(std::string_view xml_text);

ValidationReport validate_document(const Document& doc);

// Throws Error(InvalidDocument) when validate_document reports errors.
std::string serialize_document(const Document& doc);

bool is_xml_id(std::string_view text);

}  // namespace xdgdl
