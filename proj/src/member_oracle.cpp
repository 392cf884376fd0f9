// Point membership by modular arithmetic.  Kept apart from the cursor
// walker in view_engine.cpp so that each can be tested against the other.

#include "xdgdl/view_engine.hpp"

namespace xdgdl {

using detail::as_bytes;
using detail::checked_add;
using detail::checked_mul;

bool member_oracle(const ViewDecl& view, Bytes byte_index) {
  const Bytes header = as_bytes(view.skip_header, "SKIP_HEADER");
  if (byte_index < header) return false;
  Bytes rel = (byte_index - header) % view_period(view);

  for (const auto& block : view.blocks) {
    const ViewDecl* inner = block.nested_view();
    Bytes unit = inner ? view_period(*inner) : 1;
    Bytes take = checked_mul(as_bytes(block.count, "COUNT"), unit);
    Bytes offset = as_bytes(block.offset, "OFFSET");
    Bytes repeat = as_bytes(block.repeat, "REPEAT");
    Bytes stride = as_bytes(block.stride, "STRIDE");
    Bytes span = checked_add(checked_add(offset, checked_mul(repeat, take)),
                             checked_mul(repeat - 1, stride));
    if (rel >= span) {
      rel -= span;
      continue;
    }
    if (rel < offset) return false;
    Bytes in_takes = rel - offset;
    Bytes within_slot = in_takes % (take + stride);
    if (within_slot >= take) return false;  // in a stride gap
    return inner ? member_oracle(*inner, within_slot) : true;
  }
  return false;  // trailing SKIP
}

}  // namespace xdgdl
