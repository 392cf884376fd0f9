#pragma once

// Type sizes, ALIGN reference checks, and the HPF-style distribution
// compiler that turns BLOCK/CYCLIC array distributions into views.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xdgdl/model.hpp"
#include "xdgdl/view_engine.hpp"

namespace xdgdl {

struct SizeResult {
  Bytes total_bytes = 0;
  Bytes element_bytes = 0;
  Bytes element_count = 1;
  bool operator==(const SizeResult&) const = default;
};

SizeResult sizeof_type(const EtypeDecl& etype);
SizeResult sizeof_type(const ArrayDecl& array);
// A TYPE element; an outermost homogeneous array reports its element
// size and count, anything else reports a single element.
SizeResult sizeof_type(const TypeDecl& type);

ValidationReport check_align_refs(const Document& doc);

using TargetIndex = std::uint32_t;

struct OwnerMap {
  std::string array_name;
  TargetIndex num_targets = 1;
  std::vector<TargetIndex> owner;  // linearized element index -> target
  // k when owner(i) == floor(i / k) mod num_targets over the whole array
  std::optional<Bytes> cyclic_unit;
  std::vector<std::string> warnings;
};

// owner(i) = floor(i / ceil(n / p))
TargetIndex block_owner(Bytes index, Bytes extent, TargetIndex targets);
// owner(i) = floor(i / k) mod p
TargetIndex cyclic_owner(Bytes index, Bytes unit, TargetIndex targets);

// Distributed dimensions map positionally onto processor dimensions;
// processor coordinates linearize row-major.  Throws
// Error(UnresolvedProcessors), Error(DimensionMismatch) or
// Error(Unsupported).
OwnerMap compile_hpf_mapping(const ArrayDecl& array, const ProcessorsDecl& procs);

// One view per target selecting exactly the bytes of its elements.
std::vector<ViewDecl> ownermap_to_views(const OwnerMap& owners, Bytes element_bytes);

// Builds a descriptor for the first distributed ARRAY (or the one named
// `array_name`) of `source`, one SERVER per roster host, each holding a
// single device `device_id`.  The roster must match the target count.
Document compile_hpf_document(const Document& source, const std::vector<std::string>& servers,
                              std::string_view array_name = {},
                              std::string_view device_id = "/dev/vda1");

}  // namespace xdgdl
