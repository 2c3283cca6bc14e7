#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace omerdf::xml {

/// Element node of a parsed document. Character data directly inside the
/// element is concatenated into `text`; comments and processing
/// instructions are dropped.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
  std::size_t line = 0;

  /// Name without namespace prefix.
  std::string_view local_name() const;
  std::optional<std::string_view> attribute(std::string_view name) const;
  /// Children whose local name matches.
  std::vector<const Element*> children_named(std::string_view local) const;
  const Element* first_child(std::string_view local) const;
};

/// Parses a complete document and returns its root element. Rejects
/// mismatched tags, duplicate attributes, undefined entities, DOCTYPE
/// declarations and content after the root. Throws Error(MalformedXml)
/// with line/column.
Element parse_document(std::string_view text);

}  // namespace omerdf::xml
