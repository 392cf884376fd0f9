#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace xdgdl::detail {

// XPath-like location used in violation reports.  `position` is 1-based;
// 0 marks an element that occurs at most once under its parent.
inline std::string child_path(std::string_view parent, std::string_view name,
                              std::size_t position = 0) {
  std::string path(parent);
  path += '/';
  path += name;
  if (position != 0) path += "[" + std::to_string(position) + "]";
  return path;
}

inline std::string attribute_path(std::string_view element, std::string_view attr) {
  return std::string(element) + "/@" + std::string(attr);
}

}  // namespace xdgdl::detail
