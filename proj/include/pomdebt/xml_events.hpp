#pragma once

// Minimal pull-free XML event scanner, tailored to Maven build files.
//
// It checks well-formedness (tag nesting, a single root, quoted attributes,
// terminated comments/CDATA/PIs) and reports byte-exact comment bodies with
// 1-based line numbers. It does not validate names against the full XML
// grammar, expand entities, or process DTD internals.

#include <cstddef>
#include <functional>
#include <string_view>

namespace pomdebt::xml {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

class EventHandler {
 public:
  virtual ~EventHandler() = default;

  /// Start tag; for self-closing tags on_end_element follows immediately
  /// with the same position.
  virtual void on_start_element(std::string_view /*name*/, Position /*at*/) {}
  /// `at` is the position of the closing '>'.
  virtual void on_end_element(std::string_view /*name*/, Position /*at*/) {}
  /// `body` is exactly the text between "<!--" and "-->".
  virtual void on_comment(std::string_view /*body*/, Position /*start*/, Position /*end*/) {}
  virtual void on_text(std::string_view /*text*/, Position /*start*/) {}
  virtual void on_cdata(std::string_view /*body*/, Position /*start*/) {}
};

/// Scans `content` and dispatches events in document order.
/// Throws ParseError with the line/column of the first violation.
void scan(std::string_view content, EventHandler& handler);

}  // namespace pomdebt::xml
