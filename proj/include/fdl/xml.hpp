#pragma once

#include "fdl/diagnostics.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdl::xml {

// Small DOM for the factory-description dialects: elements, attributes and
// text content, with line/column tracking for diagnostics.  Comments,
// XML declarations and CDATA are consumed; namespaces are not interpreted.
struct Attribute {
    std::string name;
    std::string value;
    SourceLoc location;
};

struct Element {
    std::string name;
    std::vector<Attribute> attributes;
    std::vector<std::unique_ptr<Element>> children;
    std::string text; // concatenated character data, trimmed
    SourceLoc location;

    const Attribute* findAttribute(std::string_view name) const; // ASCII case-insensitive
    std::optional<std::string> attributeValue(std::string_view name) const;
    std::vector<const Element*> childrenNamed(std::string_view name) const;
    const Element* firstChild(std::string_view name) const;
};

struct ParseResult {
    std::unique_ptr<Element> root; // null on failure
    std::vector<Diagnostic> diagnostics;
};

ParseResult parseDocument(std::string_view input);

bool nameEquals(std::string_view a, std::string_view b); // ASCII case-insensitive
std::string escapeText(std::string_view raw);
std::string escapeAttribute(std::string_view raw);

} // namespace fdl::xml
