#include "xdgdl/xml.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>

#include "xdgdl/errors.hpp"

namespace xdgdl::xml {

const Attribute* Element::find_attribute(std::string_view attr_name) const {
  for (const auto& attr : attributes) {
    if (attr.name == attr_name) return &attr;
  }
  return nullptr;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string latin1_to_utf8(std::string_view latin1) {
  std::string out;
  out.reserve(latin1.size());
  for (char c : latin1) append_utf8(out, static_cast<unsigned char>(c));
  return out;
}

namespace {

// Decodes one UTF-8 sequence starting at s[i]; malformed bytes are taken
// as Latin-1 so escaping never loses data.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char lead = byte(i);
  std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
  if (len <= 1 || i + len > s.size()) {
    ++i;
    return lead;
  }
  char32_t cp = lead & (0x7F >> len);
  for (std::size_t k = 1; k < len; ++k) {
    if ((byte(i + k) & 0xC0) != 0x80) {
      ++i;
      return lead;
    }
    cp = (cp << 6) | (byte(i + k) & 0x3F);
  }
  i += len;
  return cp;
}

}  // namespace

std::string escape_attribute_latin1(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) {
    char32_t cp = next_code_point(utf8, i);
    switch (cp) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      // literal whitespace would be normalized away by a reader
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default:
        if (cp < 0x100) {
          out.push_back(static_cast<char>(cp));
        } else {
          out += "&#" + std::to_string(static_cast<std::uint32_t>(cp)) + ";";
        }
    }
  }
  return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return is_name_start(c) || std::isdigit(u) || c == '-' || c == '.';
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Document read_document() {
    Document doc;
    if (starts_with("\xEF\xBB\xBF")) advance(3);
    if (starts_with("<?xml") && pos_ + 5 < text_.size() && is_space(text_[pos_ + 5])) {
      read_declaration(doc);
    }
    bool have_root = false;
    for (;;) {
      skip_space();
      if (at_end()) break;
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<?")) {
        skip_processing_instruction();
      } else if (starts_with("<!DOCTYPE")) {
        if (have_root || doc.doctype_name) fail("misplaced DOCTYPE");
        read_doctype(doc);
      } else if (peek() == '<') {
        if (have_root) fail("content after the root element");
        doc.root = read_element();
        have_root = true;
      } else {
        fail("character data outside the root element");
      }
    }
    if (!have_root) fail("no root element");
    doc.encoding = encoding_;
    return doc;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  Encoding encoding_ = Encoding::Utf8;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool starts_with(std::string_view s) const {
    return text_.substr(pos_, s.size()) == s;
  }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && pos_ < text_.size(); ++k, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80 ||
                 encoding_ == Encoding::Latin1) {
        ++column_;
      }
    }
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    advance(s.size());
  }

  void skip_space() {
    while (!at_end() && is_space(peek())) advance();
  }

  std::string decode(std::string_view raw) const {
    return encoding_ == Encoding::Latin1 ? latin1_to_utf8(raw) : std::string(raw);
  }

  std::string read_name() {
    if (at_end() || !is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!at_end() && is_name_char(peek())) advance();
    return decode(text_.substr(start, pos_ - start));
  }

  // Skips to just past `terminator`, failing with `what` at EOF.
  std::string_view skip_until(std::string_view terminator, const char* what) {
    std::size_t found = text_.find(terminator, pos_);
    if (found == std::string_view::npos) {
      advance(text_.size() - pos_);
      fail(std::string("unterminated ") + what);
    }
    std::string_view body = text_.substr(pos_, found - pos_);
    advance(found - pos_ + terminator.size());
    return body;
  }

  void skip_comment() {
    advance(4);
    std::string_view body = skip_until("-->", "comment");
    if (body.find("--") != std::string_view::npos) fail("'--' inside comment");
  }

  void skip_processing_instruction() {
    advance(2);
    std::string target = read_name();
    if (iequals(target, "xml")) fail("XML declaration is only allowed at the start");
    skip_until("?>", "processing instruction");
  }

  void read_declaration(Document&) {
    advance(5);
    for (;;) {
      skip_space();
      if (starts_with("?>")) {
        advance(2);
        return;
      }
      std::string name = read_name();
      skip_space();
      expect("=");
      skip_space();
      std::string value = read_quoted_literal();
      if (name == "encoding") {
        if (iequals(value, "ISO-8859-1") || iequals(value, "ISO_8859-1") ||
            iequals(value, "latin1") || iequals(value, "l1")) {
          encoding_ = Encoding::Latin1;
        } else if (iequals(value, "UTF-8") || iequals(value, "US-ASCII") ||
                   iequals(value, "ASCII")) {
          encoding_ = Encoding::Utf8;
        } else {
          fail("unsupported encoding '" + value + "'");
        }
      } else if (name != "version" && name != "standalone") {
        fail("unknown XML declaration attribute '" + name + "'");
      }
    }
  }

  std::string read_quoted_literal() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected a quoted value");
    advance();
    std::size_t start = pos_;
    while (!at_end() && peek() != quote) advance();
    if (at_end()) fail("unterminated quoted value");
    std::string value(text_.substr(start, pos_ - start));
    advance();
    return value;
  }

  void read_doctype(Document& doc) {
    advance(9);
    if (!is_space(peek())) fail("expected whitespace after DOCTYPE");
    skip_space();
    doc.doctype_name = read_name();
    skip_space();
    if (starts_with("SYSTEM")) {
      advance(6);
      skip_space();
      doc.doctype_system_id = decode(read_quoted_literal());
    } else if (starts_with("PUBLIC")) {
      advance(6);
      skip_space();
      read_quoted_literal();
      skip_space();
      doc.doctype_system_id = decode(read_quoted_literal());
    }
    skip_space();
    if (peek() == '[') {
      // internal subset: skipped, honoring quotes and comments
      advance();
      while (!at_end() && peek() != ']') {
        if (starts_with("<!--")) {
          skip_comment();
        } else if (peek() == '"' || peek() == '\'') {
          read_quoted_literal();
        } else {
          advance();
        }
      }
      expect("]");
      skip_space();
    }
    expect(">");
  }

  void append_reference(std::string& out) {
    std::size_t semi = text_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("malformed entity reference");
    std::string_view ref = text_.substr(pos_ + 1, semi - pos_ - 1);
    if (ref == "lt") {
      out += '<';
    } else if (ref == "gt") {
      out += '>';
    } else if (ref == "amp") {
      out += '&';
    } else if (ref == "apos") {
      out += '\'';
    } else if (ref == "quot") {
      out += '"';
    } else if (!ref.empty() && ref[0] == '#') {
      std::string_view digits = ref.substr(1);
      int base = 10;
      if (!digits.empty() && digits[0] == 'x') {
        base = 16;
        digits.remove_prefix(1);
      }
      std::uint32_t cp = 0;
      auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, base);
      if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size() ||
          cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        fail("invalid character reference '&" + std::string(ref) + ";'");
      }
      append_utf8(out, cp);
    } else {
      fail("undefined entity '&" + std::string(ref) + ";'");
    }
    advance(semi - pos_ + 1);
  }

  std::string read_attribute_value() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected a quoted attribute value");
    advance();
    std::string value;
    std::size_t run_start = pos_;
    auto flush = [&] { value += decode(text_.substr(run_start, pos_ - run_start)); };
    for (;;) {
      if (at_end()) fail("unterminated attribute value");
      char c = peek();
      if (c == quote) {
        flush();
        advance();
        return value;
      }
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        flush();
        append_reference(value);
        run_start = pos_;
      } else if (c == '\t' || c == '\n' || c == '\r') {
        flush();
        value += ' ';
        advance();
        run_start = pos_;
      } else {
        advance();
      }
    }
  }

  Element read_element() {
    Element element;
    element.line = line_;
    element.column = column_;
    expect("<");
    element.name = read_name();
    for (;;) {
      bool had_space = !at_end() && is_space(peek());
      skip_space();
      if (starts_with("/>")) {
        advance(2);
        return element;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!had_space) fail("expected whitespace before attribute");
      Attribute attr;
      attr.line = line_;
      attr.column = column_;
      attr.name = read_name();
      if (element.find_attribute(attr.name)) fail("duplicate attribute '" + attr.name + "'");
      skip_space();
      expect("=");
      skip_space();
      attr.value = read_attribute_value();
      element.attributes.push_back(std::move(attr));
    }
    read_content(element);
    return element;
  }

  void note_text(Element& element, std::string_view chunk, std::size_t line, std::size_t column) {
    element.text += decode(chunk);
    if (element.text_line != 0) return;
    if (std::any_of(chunk.begin(), chunk.end(), [](char c) { return !is_space(c); })) {
      element.text_line = line;
      element.text_column = column;
    }
  }

  void read_content(Element& element) {
    for (;;) {
      if (at_end()) fail("unterminated element <" + element.name + ">");
      if (starts_with("</")) {
        advance(2);
        std::string closing = read_name();
        if (closing != element.name) {
          fail("mismatched closing tag </" + closing + ">, expected </" + element.name + ">");
        }
        skip_space();
        expect(">");
        return;
      }
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        std::size_t line = line_, column = column_;
        std::string_view body = skip_until("]]>", "CDATA section");
        note_text(element, body, line, column);
      } else if (starts_with("<?")) {
        skip_processing_instruction();
      } else if (peek() == '<') {
        element.children.push_back(read_element());
      } else {
        std::size_t line = line_, column = column_;
        std::string chunk;
        std::size_t run_start = pos_;
        while (!at_end() && peek() != '<') {
          if (peek() == '&') {
            chunk += text_.substr(run_start, pos_ - run_start);
            std::string expanded;
            append_reference(expanded);
            // expanded text is already UTF-8; keep it out of decode()
            note_text(element, chunk, line, column);
            chunk.clear();
            element.text += expanded;
            if (element.text_line == 0) {
              element.text_line = line;
              element.text_column = column;
            }
            run_start = pos_;
          } else {
            advance();
          }
        }
        chunk += text_.substr(run_start, pos_ - run_start);
        note_text(element, chunk, line, column);
      }
    }
  }
};

}  // namespace

Document parse(std::string_view text) { return Reader(text).read_document(); }

}  // namespace xdgdl::xml
