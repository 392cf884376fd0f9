#include <algorithm>
#include <limits>

#include "xdgdl/view_engine.hpp"

namespace xdgdl {

namespace detail {

Bytes checked_add(Bytes a, Bytes b) {
  Bytes r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error(ErrorCode::ArithmeticOverflow, "byte count exceeds 64 bits");
  }
  return r;
}

Bytes checked_mul(Bytes a, Bytes b) {
  Bytes r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Error(ErrorCode::ArithmeticOverflow, "byte count exceeds 64 bits");
  }
  return r;
}

Bytes as_bytes(Int value, const char* what) {
  if (value < 0) {
    throw Error(ErrorCode::InvalidDocument,
                std::string(what) + " must be nonnegative, found " + std::to_string(value));
  }
  return static_cast<Bytes>(value);
}

}  // namespace detail

using detail::as_bytes;
using detail::checked_add;
using detail::checked_mul;

namespace {

Bytes saturating_add(Bytes a, Bytes b) {
  Bytes r;
  return __builtin_add_overflow(a, b, &r) ? std::numeric_limits<Bytes>::max() : r;
}

struct BlockShape {
  Bytes offset;
  Bytes repeat;
  Bytes stride;
  Bytes take;  // count * unit
  const ViewDecl* inner;
};

BlockShape shape_of(const BlockDecl& block) {
  BlockShape s{};
  s.offset = as_bytes(block.offset, "OFFSET");
  s.repeat = as_bytes(block.repeat, "REPEAT");
  s.stride = as_bytes(block.stride, "STRIDE");
  Bytes count = as_bytes(block.count, "COUNT");
  if (s.repeat == 0 || count == 0) {
    throw Error(ErrorCode::InvalidDocument, "BLOCK REPEAT and COUNT must be >= 1");
  }
  s.inner = block.nested_view();
  Bytes unit = s.inner ? view_period(*s.inner) : 1;
  s.take = checked_mul(count, unit);
  return s;
}

Bytes span_of(const BlockShape& s) {
  return checked_add(checked_add(s.offset, checked_mul(s.repeat, s.take)),
                     checked_mul(s.repeat - 1, s.stride));
}

void append_extent(ExtentList& out, Bytes start, Bytes end) {
  if (end <= start) return;
  if (!out.empty() && out.back().end() == start) {
    out.back().length += end - start;
  } else {
    out.push_back({start, end - start});
  }
}

// Walks the view's cursor from `base`, emitting selected bytes below `limit`.
void walk(const ViewDecl& view, Bytes base, Bytes limit, ExtentList& out) {
  if (view.blocks.empty()) throw Error(ErrorCode::InvalidDocument, "VIEW without BLOCK");
  std::vector<BlockShape> shapes;
  shapes.reserve(view.blocks.size());
  for (const auto& block : view.blocks) shapes.push_back(shape_of(block));
  const Bytes skip = as_bytes(view.skip, "SKIP");

  Bytes cursor = saturating_add(base, as_bytes(view.skip_header, "SKIP_HEADER"));
  while (cursor < limit) {
    for (const auto& s : shapes) {
      cursor = saturating_add(cursor, s.offset);
      for (Bytes r = 0; r < s.repeat; ++r) {
        if (cursor >= limit) return;
        Bytes take_end = std::min(saturating_add(cursor, s.take), limit);
        if (s.inner) {
          walk(*s.inner, cursor, take_end, out);
        } else {
          append_extent(out, cursor, take_end);
        }
        cursor = saturating_add(cursor, s.take);
        if (r + 1 < s.repeat) cursor = saturating_add(cursor, s.stride);
      }
    }
    cursor = saturating_add(cursor, skip);
  }
}

Bytes selected_in_prefix(const ViewDecl& view, Bytes n);

// Selected bytes among the first `n` bytes of one take of `s`.
Bytes take_prefix(const BlockShape& s, Bytes n) {
  n = std::min(n, s.take);
  return s.inner ? selected_in_prefix(*s.inner, n) : n;
}

// Selected bytes among indices [0, n) of the view, by arithmetic.
Bytes selected_in_prefix(const ViewDecl& view, Bytes n) {
  Bytes header = as_bytes(view.skip_header, "SKIP_HEADER");
  if (n <= header) return 0;
  n -= header;
  const Bytes period = view_period(view);
  const Bytes full = n / period;
  Bytes rem = n % period;
  Bytes in_rem = 0;
  Bytes per_period = 0;
  bool rem_done = false;
  for (const auto& block : view.blocks) {
    BlockShape s = shape_of(block);
    Bytes take_sel = take_prefix(s, s.take);
    Bytes block_sel = checked_mul(s.repeat, take_sel);
    per_period = checked_add(per_period, block_sel);
    if (rem_done) continue;
    Bytes span = span_of(s);
    if (rem >= span) {
      in_rem += block_sel;
      rem -= span;
      continue;
    }
    rem_done = true;
    if (rem <= s.offset) continue;
    Bytes into = rem - s.offset;
    Bytes slot = s.take + s.stride;
    in_rem += (into / slot) * take_sel + take_prefix(s, into % slot);
  }
  return checked_add(checked_mul(full, per_period), in_rem);
}

}  // namespace

Bytes view_period(const ViewDecl& view) {
  if (view.blocks.empty()) throw Error(ErrorCode::InvalidDocument, "VIEW without BLOCK");
  Bytes period = as_bytes(view.skip, "SKIP");
  for (const auto& block : view.blocks) period = checked_add(period, span_of(shape_of(block)));
  return period;
}

Bytes selected_per_period(const ViewDecl& view) {
  Bytes header = as_bytes(view.skip_header, "SKIP_HEADER");
  return selected_in_prefix(view, checked_add(header, view_period(view)));
}

ExtentList enumerate_extents(const ViewDecl& view, Bytes region_size) {
  ExtentList out;
  if (region_size == 0) return out;
  walk(view, 0, region_size, out);
  return out;
}

DistributionMap build_distribution_map(const Document& doc, Bytes file_size) {
  DistributionMap map;
  map.file_size = file_size;
  bool any_view = false;
  for (const auto& server : doc.island.servers) {
    for (const auto& device : server.devices) {
      DistributionEntry entry;
      entry.device = {doc.island.name, server.host, device.device_id};
      if (const auto* view = device.view()) {
        entry.extents = enumerate_extents(*view, file_size);
        any_view = true;
      }
      map.entries.push_back(std::move(entry));
    }
  }
  if (map.entries.empty()) {
    throw Error(ErrorCode::NoDevices, "island '" + doc.island.name + "' has no device");
  }
  // all NOVIEW: written sequentially to the first device of the first server
  if (!any_view && file_size > 0) map.entries.front().extents.push_back({0, file_size});
  return map;
}

ExtentList canonicalize(ExtentList extents) {
  std::sort(extents.begin(), extents.end(),
            [](const Extent& a, const Extent& b) { return a.start < b.start; });
  ExtentList out;
  for (const auto& e : extents) {
    if (e.length == 0) continue;
    if (!out.empty() && e.start <= out.back().end()) {
      out.back().length = std::max(out.back().end(), e.end()) - out.back().start;
    } else {
      out.push_back(e);
    }
  }
  return out;
}

Bytes total_length(const ExtentList& extents) {
  Bytes total = 0;
  for (const auto& e : extents) total = checked_add(total, e.length);
  return total;
}

std::string format_extents(const ExtentList& extents) {
  std::string out;
  for (const auto& e : extents) {
    if (!out.empty()) out += ',';
    out += std::to_string(e.start) + ":" + std::to_string(e.length);
  }
  return out;
}

}  // namespace xdgdl
