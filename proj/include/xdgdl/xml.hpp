#pragma once

// Small non-validating XML 1.0 reader, enough for descriptor files:
// elements, attributes, character data, comments, processing instructions,
// CDATA sections and a skipped DOCTYPE.  Only the five predefined entities
// and numeric character references are expanded.  All strings handed back
// are UTF-8 regardless of the declared input encoding.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xdgdl::xml {

struct Attribute {
  std::string name;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Element {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<Element> children;
  std::string text;  // concatenated character data directly inside
  std::size_t line = 0;
  std::size_t column = 0;
  // position of the first non-whitespace character data, 0 when none
  std::size_t text_line = 0;
  std::size_t text_column = 0;

  const Attribute* find_attribute(std::string_view attr_name) const;
  bool has_significant_text() const { return text_line != 0; }
};

enum class Encoding { Utf8, Latin1 };

struct Document {
  Encoding encoding = Encoding::Utf8;
  std::optional<std::string> doctype_name;
  std::optional<std::string> doctype_system_id;
  Element root;
};

// Throws ParseError with 1-based line/column on malformed input.
Document parse(std::string_view text);

// Escapes a UTF-8 string for use inside a double-quoted attribute value of
// an ISO-8859-1 encoded document.  Code points above U+00FF become numeric
// character references.
std::string escape_attribute_latin1(std::string_view utf8);

// UTF-8 <-> ISO-8859-1 helpers.
std::string latin1_to_utf8(std::string_view latin1);
void append_utf8(std::string& out, char32_t code_point);

}  // namespace xdgdl::xml
