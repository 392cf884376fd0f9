#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "xdgdl/view_engine.hpp"

namespace xdgdl {

std::string status_keyword(PartitionStatus status) {
  switch (status) {
    case PartitionStatus::ExactPartition: return "exact";
    case PartitionStatus::HasGaps: return "gaps";
    case PartitionStatus::HasOverlaps: return "overlaps";
    case PartitionStatus::GapsAndOverlaps: return "gaps+overlaps";
  }
  return "unknown";
}

std::string PartitionVerdict::describe() const {
  std::ostringstream out;
  out << "partition: " << status_keyword(status);
  for (const auto& g : gaps) out << "\ngap " << g.start << ":" << g.length;
  for (const auto& o : overlaps) {
    out << "\noverlap " << o.extent.start << ":" << o.extent.length << " claimed by";
    for (const auto& c : o.claimants) out << ' ' << c;
  }
  return out.str();
}

NotAPartitionError::NotAPartitionError(PartitionVerdict verdict)
    : Error(ErrorCode::NotAPartition, verdict.describe()), verdict_(std::move(verdict)) {}

// Sweep over extent boundaries.  Bytes claimed past file_size are reported
// as overlaps as well: they cannot be placed and make the map unusable.
PartitionVerdict check_partition(const DistributionMap& map) {
  struct Event {
    Bytes at;
    int delta;
    std::size_t entry;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < map.entries.size(); ++i) {
    for (const auto& e : map.entries[i].extents) {
      if (e.length == 0) continue;
      events.push_back({e.start, +1, i});
      events.push_back({e.end(), -1, i});
    }
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.at < b.at; });

  PartitionVerdict verdict;
  std::map<std::size_t, int> active;  // entry -> number of open extents
  int depth = 0;
  Bytes cursor = 0;
  std::vector<std::set<std::size_t>> overlap_entries;

  auto emit_segment = [&](Bytes from, Bytes to) {
    if (depth == 0) {
      to = std::min(to, map.file_size);
      if (to <= from) return;
      if (!verdict.gaps.empty() && verdict.gaps.back().end() == from) {
        verdict.gaps.back().length += to - from;
      } else {
        verdict.gaps.push_back({from, to - from});
      }
      return;
    }
    if (depth == 1) from = std::max(from, map.file_size);
    if (to <= from) return;
    std::set<std::size_t> claimants;
    for (const auto& [entry, n] : active) claimants.insert(entry);
    if (!verdict.overlaps.empty() && verdict.overlaps.back().extent.end() == from &&
        overlap_entries.back() == claimants) {
      verdict.overlaps.back().extent.length += to - from;
    } else {
      verdict.overlaps.push_back({{from, to - from}, {}});
      overlap_entries.push_back(std::move(claimants));
    }
  };

  for (std::size_t k = 0; k < events.size();) {
    Bytes at = events[k].at;
    emit_segment(cursor, at);
    for (; k < events.size() && events[k].at == at; ++k) {
      depth += events[k].delta;
      active[events[k].entry] += events[k].delta;
    }
    std::erase_if(active, [](const auto& kv) { return kv.second == 0; });
    cursor = at;
  }
  emit_segment(cursor, std::max(cursor, map.file_size));
  for (std::size_t i = 0; i < verdict.overlaps.size(); ++i) {
    auto& names = verdict.overlaps[i].claimants;
    for (auto e : overlap_entries[i]) names.push_back(map.entries[e].device.qualified());
    std::sort(names.begin(), names.end());
  }

  bool gaps = !verdict.gaps.empty();
  bool overlaps = !verdict.overlaps.empty();
  verdict.status = gaps && overlaps ? PartitionStatus::GapsAndOverlaps
                   : gaps           ? PartitionStatus::HasGaps
                   : overlaps       ? PartitionStatus::HasOverlaps
                                    : PartitionStatus::ExactPartition;
  return verdict;
}

}  // namespace xdgdl
