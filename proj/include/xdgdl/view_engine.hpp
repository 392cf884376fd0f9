#pragma once

// Evaluation of the VIEW/BLOCK algebra.
//
// A view is read as a cursor walking the logical file:
//   skip SKIP_HEADER bytes once, then repeat the period pattern forever:
//     for each BLOCK: skip OFFSET, then REPEAT takes of COUNT units with
//     STRIDE bytes between consecutive takes (not after the last one);
//     then skip SKIP.
// A unit is one byte under BYTEBLOCK, or one period of the nested VIEW, in
// which case the nested view is applied inside the take (its own header is
// skipped once per take).

#include <cstdint>
#include <string>
#include <vector>

#include "xdgdl/model.hpp"

namespace xdgdl {

using Bytes = std::uint64_t;

struct Extent {
  Bytes start = 0;
  Bytes length = 0;

  Bytes end() const { return start + length; }
  bool operator==(const Extent&) const = default;
};

using ExtentList = std::vector<Extent>;

struct DeviceRef {
  std::string island;
  std::string host;
  std::string device_id;

  std::string qualified() const { return island + "/" + host + "/" + device_id; }
  bool operator==(const DeviceRef&) const = default;
};

struct DistributionEntry {
  DeviceRef device;
  ExtentList extents;
  bool operator==(const DistributionEntry&) const = default;
};

struct DistributionMap {
  Bytes file_size = 0;
  std::vector<DistributionEntry> entries;
  bool operator==(const DistributionMap&) const = default;
};

enum class PartitionStatus { ExactPartition, HasGaps, HasOverlaps, GapsAndOverlaps };

struct Overlap {
  Extent extent;
  std::vector<std::string> claimants;  // qualified device names
  bool operator==(const Overlap&) const = default;
};

struct PartitionVerdict {
  PartitionStatus status = PartitionStatus::ExactPartition;
  ExtentList gaps;
  std::vector<Overlap> overlaps;

  bool exact() const { return status == PartitionStatus::ExactPartition; }
  std::string describe() const;
};

// "exact", "gaps", "overlaps" or "gaps+overlaps"
std::string status_keyword(PartitionStatus status);

class NotAPartitionError : public Error {
 public:
  explicit NotAPartitionError(PartitionVerdict verdict);
  const PartitionVerdict& verdict() const noexcept { return verdict_; }

 private:
  PartitionVerdict verdict_;
};

// Bytes spanned by one instance of the pattern, excluding SKIP_HEADER.
// Throws Error(ArithmeticOverflow) past 64 bits and Error(InvalidDocument)
// for parameters outside their ranges.
Bytes view_period(const ViewDecl& view);

// Bytes selected within one period.
Bytes selected_per_period(const ViewDecl& view);

// Sorted, merged extents the view selects within [0, region_size).
ExtentList enumerate_extents(const ViewDecl& view, Bytes region_size);

// Whether the view selects `byte_index`, by arithmetic on the pattern
// rather than by walking it.
bool member_oracle(const ViewDecl& view, Bytes byte_index);

// Throws Error(NoDevices) when the island holds no device.
DistributionMap build_distribution_map(const Document& doc, Bytes file_size);

PartitionVerdict check_partition(const DistributionMap& map);

// Sorts and merges touching/overlapping extents; drops empty ones.
ExtentList canonicalize(ExtentList extents);

Bytes total_length(const ExtentList& extents);

// "start:length,start:length,..."
std::string format_extents(const ExtentList& extents);

namespace detail {
// Checked arithmetic shared by the view walkers.
Bytes checked_add(Bytes a, Bytes b);
Bytes checked_mul(Bytes a, Bytes b);
Bytes as_bytes(Int value, const char* what);
}  // namespace detail

}  // namespace xdgdl
