#include <algorithm>
#include <cstring>

#include "xdgdl/scatter_gather.hpp"

namespace xdgdl {

namespace {

void require_partition(const DistributionMap& map) {
  PartitionVerdict verdict = check_partition(map);
  if (!verdict.exact()) throw NotAPartitionError(std::move(verdict));
}

}  // namespace

std::vector<Fragment> scatter(std::span<const std::byte> data, const DistributionMap& map) {
  if (data.size() != map.file_size) {
    throw Error(ErrorCode::SizeMismatch, "data holds " + std::to_string(data.size()) +
                                             " bytes, map describes " +
                                             std::to_string(map.file_size));
  }
  require_partition(map);
  std::vector<Fragment> fragments;
  fragments.reserve(map.entries.size());
  for (const auto& entry : map.entries) {
    Fragment fragment{entry.device, {}};
    fragment.payload.reserve(total_length(entry.extents));
    for (const auto& e : entry.extents) {
      auto first = data.begin() + static_cast<std::ptrdiff_t>(e.start);
      fragment.payload.insert(fragment.payload.end(), first,
                              first + static_cast<std::ptrdiff_t>(e.length));
    }
    fragments.push_back(std::move(fragment));
  }
  return fragments;
}

ByteVector gather(std::span<const Fragment> fragments, const DistributionMap& map) {
  require_partition(map);
  if (fragments.size() != map.entries.size()) {
    throw Error(ErrorCode::MissingFragment,
                "expected " + std::to_string(map.entries.size()) + " fragments, got " +
                    std::to_string(fragments.size()));
  }
  std::vector<bool> used(fragments.size(), false);
  ByteVector data(map.file_size);
  for (std::size_t i = 0; i < map.entries.size(); ++i) {
    const auto& entry = map.entries[i];
    std::size_t pick = fragments.size();
    if (!used[i] && fragments[i].device == entry.device) {
      pick = i;
    } else {
      for (std::size_t j = 0; j < fragments.size(); ++j) {
        if (!used[j] && fragments[j].device == entry.device) {
          pick = j;
          break;
        }
      }
    }
    if (pick == fragments.size()) {
      throw Error(ErrorCode::MissingFragment, "no fragment for " + entry.device.qualified());
    }
    used[pick] = true;
    const auto& payload = fragments[pick].payload;
    Bytes expected = total_length(entry.extents);
    if (payload.size() != expected) {
      throw Error(ErrorCode::LengthMismatch,
                  entry.device.qualified() + " fragment holds " + std::to_string(payload.size()) +
                      " bytes, expected " + std::to_string(expected));
    }
    Bytes consumed = 0;
    for (const auto& e : entry.extents) {
      std::memcpy(data.data() + e.start, payload.data() + consumed, e.length);
      consumed += e.length;
    }
  }
  return data;
}

}  // namespace xdgdl
