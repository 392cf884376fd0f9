#include <algorithm>
#include <limits>

#include "xdgdl/typesys.hpp"

namespace xdgdl {

using detail::checked_add;
using detail::checked_mul;

namespace {

// Upper bound on materialized owner tables.
constexpr Bytes kMaxElements = Bytes{1} << 28;

Bytes dimension_extent(Int lower, Int upper, const char* what) {
  if (upper < lower) {
    throw Error(ErrorCode::InvalidDocument, std::string(what) + " LOWER exceeds UPPER");
  }
  return checked_add(static_cast<Bytes>(upper - lower), 1);
}

bool is_distributed(const DimensionDecl& dim) {
  return dim.distribute == Distribution::Block || dim.distribute == Distribution::Cyclic;
}

}  // namespace

TargetIndex block_owner(Bytes index, Bytes extent, TargetIndex targets) {
  Bytes chunk = (extent + targets - 1) / targets;
  return static_cast<TargetIndex>(index / chunk);
}

TargetIndex cyclic_owner(Bytes index, Bytes unit, TargetIndex targets) {
  return static_cast<TargetIndex>((index / unit) % targets);
}

OwnerMap compile_hpf_mapping(const ArrayDecl& array, const ProcessorsDecl& procs) {
  const std::string label = array.name.value_or("<unnamed ARRAY>");
  if (!array.distribute_onto || *array.distribute_onto != procs.name) {
    throw Error(ErrorCode::UnresolvedProcessors,
                label + " is not distributed onto PROCESSORS '" + procs.name + "'");
  }
  if (procs.dims.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "PROCESSORS '" + procs.name + "' has no dimension");
  }
  if (array.dims.empty()) {
    throw Error(ErrorCode::DimensionMismatch, label + " has no dimension");
  }

  std::vector<Bytes> extents;
  Bytes elements = 1;
  for (const auto& dim : array.dims) {
    extents.push_back(dimension_extent(dim.lower, dim.upper, "DIMENSION"));
    elements = checked_mul(elements, extents.back());
  }
  std::vector<Bytes> proc_extents;
  Bytes targets = 1;
  for (const auto& dim : procs.dims) {
    proc_extents.push_back(dimension_extent(dim.lower, dim.upper, "PROC_DIMENSION"));
    targets = checked_mul(targets, proc_extents.back());
  }
  if (elements > kMaxElements || targets > std::numeric_limits<TargetIndex>::max()) {
    throw Error(ErrorCode::Unsupported, label + " is too large to tabulate");
  }

  // distributed array dim -> processor dim, positionally
  std::vector<std::size_t> distributed;
  for (std::size_t d = 0; d < array.dims.size(); ++d) {
    if (is_distributed(array.dims[d])) distributed.push_back(d);
  }
  if (distributed.size() > procs.dims.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                label + " distributes " + std::to_string(distributed.size()) +
                    " dimensions onto " + std::to_string(procs.dims.size()) +
                    " processor dimensions");
  }

  OwnerMap om;
  om.array_name = array.name.value_or("");
  om.num_targets = static_cast<TargetIndex>(targets);
  for (std::size_t d : distributed) {
    const auto& dim = array.dims[d];
    if (dim.distribute == Distribution::Block && dim.dist_skalar != 1) {
      om.warnings.push_back("DIST_SKALAR=" + std::to_string(dim.dist_skalar) +
                            " ignored for BLOCK dimension " + std::to_string(d + 1));
    }
    if (dim.dist_skalar < 1) {
      throw Error(ErrorCode::InvalidDocument, "DIST_SKALAR must be >= 1");
    }
  }

  const std::size_t rank = extents.size();
  std::vector<Bytes> index(rank, 0);
  std::vector<Bytes> coords(proc_extents.size(), 0);
  om.owner.resize(static_cast<std::size_t>(elements));
  for (Bytes linear = 0; linear < elements; ++linear) {
    // ROW: last dimension varies fastest; COLUMN: first one does
    Bytes rest = linear;
    for (std::size_t k = 0; k < rank; ++k) {
      std::size_t d = array.major == Major::Row ? rank - 1 - k : k;
      index[d] = rest % extents[d];
      rest /= extents[d];
    }
    std::fill(coords.begin(), coords.end(), 0);
    for (std::size_t j = 0; j < distributed.size(); ++j) {
      const auto& dim = array.dims[distributed[j]];
      auto p = static_cast<TargetIndex>(proc_extents[j]);
      Bytes i = index[distributed[j]];
      coords[j] = dim.distribute == Distribution::Block
                      ? block_owner(i, extents[distributed[j]], p)
                      : cyclic_owner(i, static_cast<Bytes>(dim.dist_skalar), p);
    }
    Bytes target = 0;
    for (std::size_t j = 0; j < coords.size(); ++j) target = target * proc_extents[j] + coords[j];
    om.owner[static_cast<std::size_t>(linear)] = static_cast<TargetIndex>(target);
  }

  if (distributed.size() == 1 && array.dims[distributed[0]].distribute == Distribution::Cyclic) {
    auto unit = static_cast<Bytes>(array.dims[distributed[0]].dist_skalar);
    bool periodic = true;
    for (Bytes i = 0; i < elements && periodic; ++i) {
      periodic = om.owner[static_cast<std::size_t>(i)] == cyclic_owner(i, unit, om.num_targets);
    }
    if (periodic) om.cyclic_unit = unit;
  }
  return om;
}

namespace {

BlockDecl byte_block(Bytes offset, Bytes count) {
  BlockDecl block;
  block.offset = static_cast<Int>(offset);
  block.count = static_cast<Int>(count);
  block.repeat = 1;
  block.stride = 0;
  return block;
}

// A view whose single period spans the whole array, one BLOCK per run of
// equally sized, equally spaced element runs.
ViewDecl runs_view(const OwnerMap& om, TargetIndex target, Bytes element_bytes) {
  const Bytes total = checked_mul(om.owner.size(), element_bytes);
  ViewDecl view;
  Bytes last_end = 0;
  std::size_t i = 0;
  while (i < om.owner.size()) {
    if (om.owner[i] != target) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < om.owner.size() && om.owner[j] == target) ++j;
    Bytes start = i * element_bytes;
    Bytes length = (j - i) * element_bytes;
    Bytes gap = start - last_end;
    if (!view.blocks.empty()) {
      auto& b = view.blocks.back();
      if (static_cast<Bytes>(b.count) == length && (b.repeat == 1 || static_cast<Bytes>(b.stride) == gap)) {
        b.stride = static_cast<Int>(gap);
        ++b.repeat;
        last_end = start + length;
        i = j;
        continue;
      }
    }
    view.blocks.push_back(byte_block(gap, length));
    last_end = start + length;
    i = j;
  }
  if (view.blocks.empty()) {
    // owns nothing: the only take lies past the end of the array
    view.skip_header = static_cast<Int>(total);
    view.blocks.push_back(byte_block(0, 1));
    return view;
  }
  view.skip = static_cast<Int>(total - last_end);
  return view;
}

}  // namespace

std::vector<ViewDecl> ownermap_to_views(const OwnerMap& om, Bytes element_bytes) {
  if (element_bytes == 0) throw Error(ErrorCode::InvalidDocument, "element size must be positive");
  std::vector<ViewDecl> views;
  views.reserve(om.num_targets);
  for (TargetIndex t = 0; t < om.num_targets; ++t) {
    if (om.cyclic_unit) {
      // period P*k*element_bytes, target t owns the t-th chunk of k elements
      Bytes chunk = checked_mul(*om.cyclic_unit, element_bytes);
      ViewDecl view;
      view.blocks.push_back(byte_block(checked_mul(t, chunk), chunk));
      view.skip = static_cast<Int>(checked_mul(om.num_targets - 1 - t, chunk));
      views.push_back(std::move(view));
    } else {
      views.push_back(runs_view(om, t, element_bytes));
    }
  }
  return views;
}

Document compile_hpf_document(const Document& source, const std::vector<std::string>& servers,
                              std::string_view array_name, std::string_view device_id) {
  const ArrayDecl* chosen = nullptr;
  for (const ArrayDecl* array : collect_arrays(source)) {
    bool named = array->name && *array->name == array_name;
    if (array_name.empty() ? array->distribute_onto.has_value() : named) {
      chosen = array;
      break;
    }
  }
  if (!chosen) {
    throw Error(ErrorCode::UnresolvedProcessors,
                array_name.empty() ? std::string("no ARRAY carries DISTRIBUTE_ONTO")
                                   : "no ARRAY named '" + std::string(array_name) + "'");
  }
  if (!chosen->distribute_onto) {
    throw Error(ErrorCode::UnresolvedProcessors, "ARRAY '" + std::string(array_name) +
                                                     "' has no DISTRIBUTE_ONTO");
  }
  auto procs = std::find_if(source.processors.begin(), source.processors.end(),
                            [&](const ProcessorsDecl& p) { return p.name == *chosen->distribute_onto; });
  if (procs == source.processors.end()) {
    throw Error(ErrorCode::UnresolvedProcessors,
                "PROCESSORS '" + *chosen->distribute_onto + "' is not declared");
  }

  OwnerMap om = compile_hpf_mapping(*chosen, *procs);
  if (servers.size() != om.num_targets) {
    throw Error(ErrorCode::DimensionMismatch,
                "roster names " + std::to_string(servers.size()) + " servers, mapping has " +
                    std::to_string(om.num_targets) + " targets");
  }
  std::vector<ViewDecl> views = ownermap_to_views(om, sizeof_type(*chosen).element_bytes);

  Document doc = source;
  doc.island.servers.clear();
  for (std::size_t t = 0; t < servers.size(); ++t) {
    ServerDecl server;
    server.host = servers[t];
    server.devices.push_back(DeviceDecl{std::string(device_id), std::move(views[t])});
    doc.island.servers.push_back(std::move(server));
  }
  return doc;
}

}  // namespace xdgdl
