#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xdgdl/view_engine.hpp"

namespace xdgdl {

using ByteVector = std::vector<std::byte>;

// A device's share of a logical file: its selected bytes concatenated in
// ascending logical order, with no framing.
struct Fragment {
  DeviceRef device;
  ByteVector payload;
  bool operator==(const Fragment&) const = default;
};

// One fragment per map entry, empty ones included.  Throws
// NotAPartitionError or Error(SizeMismatch).
std::vector<Fragment> scatter(std::span<const std::byte> data, const DistributionMap& map);

// Inverse of scatter.  Fragments are matched to entries positionally when
// their device refs agree, otherwise by device ref.  Throws
// NotAPartitionError, Error(MissingFragment) or Error(LengthMismatch).
ByteVector gather(std::span<const Fragment> fragments, const DistributionMap& map);

}  // namespace xdgdl
