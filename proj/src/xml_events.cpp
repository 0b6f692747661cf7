#include "pomdebt/xml_events.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "pomdebt/error.hpp"

namespace pomdebt::xml {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_name_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

class Scanner {
 public:
  Scanner(std::string_view content, EventHandler& handler) : src_(content), handler_(handler) {}

  void run() {
    if (src_.substr(0, 3) == "\xEF\xBB\xBF") advance(3);
    bool seen_root = false;
    while (!at_end()) {
      if (peek() == '<') {
        if (starts_with("<!--")) {
          comment();
        } else if (starts_with("<?")) {
          processing_instruction();
        } else if (starts_with("<!DOCTYPE")) {
          if (seen_root) fail("DOCTYPE after root element");
          doctype();
        } else if (starts_with("<![CDATA[")) {
          fail("CDATA section outside root element");
        } else if (starts_with("</")) {
          fail("end tag without matching start tag");
        } else {
          if (seen_root) fail("document has more than one root element");
          seen_root = true;
          element_tree();
        }
      } else if (is_space(peek())) {
        advance(1);
      } else {
        fail("text outside root element");
      }
    }
    if (!seen_root) fail("no root element");
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++here_.line;
        here_.column = 1;
      } else {
        ++here_.column;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(here_.line, here_.column, what);
  }

  // Advances to just past `terminator`; returns the skipped body.
  std::string_view until(std::string_view terminator, const char* what) {
    const auto end = src_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    const auto body = src_.substr(pos_, end - pos_);
    advance(end - pos_ + terminator.size());
    return body;
  }

  void comment() {
    const Position start = here_;
    advance(4);
    // The end position is the '>' of "-->".
    const auto end = src_.find("-->", pos_);
    if (end == std::string_view::npos) fail("unterminated comment");
    const auto body = src_.substr(pos_, end - pos_);
    advance(body.size() + 2);
    const Position stop = here_;
    advance(1);
    handler_.on_comment(body, start, stop);
  }

  void processing_instruction() {
    advance(2);
    if (!is_name_start(peek())) fail("malformed processing instruction");
    until("?>", "processing instruction");
  }

  void doctype() {
    advance(9);
    int bracket = 0;
    while (!at_end()) {
      const char c = peek();
      if (c == '"' || c == '\'') {
        advance(1);
        until(std::string_view(&c, 1), "quoted literal in DOCTYPE");
        continue;
      }
      if (c == '[') ++bracket;
      if (c == ']') --bracket;
      if (c == '>' && bracket <= 0) {
        advance(1);
        return;
      }
      advance(1);
    }
    fail("unterminated DOCTYPE");
  }

  std::string_view name() {
    if (!is_name_start(peek())) fail("expected a name");
    const auto begin = pos_;
    while (!at_end() && is_name_char(peek())) advance(1);
    return src_.substr(begin, pos_ - begin);
  }

  void skip_space() {
    while (!at_end() && is_space(peek())) advance(1);
  }

  // Parses a start tag at '<'. Returns true if it was self-closing.
  bool start_tag(std::string_view& tag) {
    const Position at = here_;
    advance(1);
    tag = name();
    for (;;) {
      const bool had_space = is_space(peek());
      skip_space();
      if (at_end()) fail("unterminated start tag");
      if (peek() == '>') {
        advance(1);
        handler_.on_start_element(tag, at);
        return false;
      }
      if (starts_with("/>")) {
        advance(1);
        const Position close = here_;
        advance(1);
        handler_.on_start_element(tag, at);
        handler_.on_end_element(tag, close);
        return true;
      }
      if (!had_space) fail("expected whitespace before attribute");
      name();
      skip_space();
      if (peek() != '=') fail("expected '=' after attribute name");
      advance(1);
      skip_space();
      const char quote = peek();
      if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
      advance(1);
      while (!at_end() && peek() != quote) {
        if (peek() == '<') fail("'<' in attribute value");
        advance(1);
      }
      if (at_end()) fail("unterminated attribute value");
      advance(1);
    }
  }

  void reference() {
    // At '&'.
    advance(1);
    if (peek() == '#') {
      advance(1);
      bool hex = false;
      if (peek() == 'x') {
        hex = true;
        advance(1);
      }
      std::size_t digits = 0;
      while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                           (hex && std::isxdigit(static_cast<unsigned char>(peek()))))) {
        advance(1);
        ++digits;
      }
      if (digits == 0) fail("malformed character reference");
    } else {
      name();
    }
    if (peek() != ';') fail("unterminated entity reference");
    advance(1);
  }

  void element_tree() {
    std::vector<std::string_view> open;
    std::string_view tag;
    if (start_tag(tag)) return;
    open.push_back(tag);

    while (!open.empty()) {
      if (at_end()) fail("unclosed element <" + std::string(open.back()) + ">");
      if (peek() != '<') {
        const Position start = here_;
        const auto begin = pos_;
        while (!at_end() && peek() != '<') {
          if (peek() == '&') {
            reference();
          } else {
            advance(1);
          }
        }
        handler_.on_text(src_.substr(begin, pos_ - begin), start);
        continue;
      }
      if (starts_with("<!--")) {
        comment();
      } else if (starts_with("<![CDATA[")) {
        const Position start = here_;
        advance(9);
        handler_.on_cdata(until("]]>", "CDATA section"), start);
      } else if (starts_with("<?")) {
        processing_instruction();
      } else if (starts_with("<!")) {
        fail("unexpected markup declaration");
      } else if (starts_with("</")) {
        advance(2);
        const auto closing = name();
        skip_space();
        if (peek() != '>') fail("malformed end tag");
        if (closing != open.back()) {
          fail("mismatched end tag </" + std::string(closing) + ">, expected </" +
               std::string(open.back()) + ">");
        }
        const Position at = here_;
        advance(1);
        handler_.on_end_element(closing, at);
        open.pop_back();
      } else {
        if (!start_tag(tag)) open.push_back(tag);
      }
    }
  }

  std::string_view src_;
  EventHandler& handler_;
  std::size_t pos_ = 0;
  Position here_;
};

}  // namespace

void scan(std::string_view content, EventHandler& handler) {
  Scanner(content, handler).run();
}

}  // namespace pomdebt::xml
