#include "fdl/xml.hpp"

#include <cctype>
#include <cstring>

namespace fdl::xml {

namespace {

    struct Cursor {
        std::string_view input;
        std::size_t pos = 0;
        int line = 1;
        int column = 1;

        bool atEnd() const { return pos >= input.size(); }
        char peek() const { return input[pos]; }
        bool startsWith(std::string_view s) const { return input.compare(pos, s.size(), s) == 0; }

        char advance()
        {
            char c = input[pos++];
            if (c == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            return c;
        }

        void advanceBy(std::size_t n)
        {
            for (std::size_t i = 0; i < n && !atEnd(); ++i)
                advance();
        }

        SourceLoc loc() const { return { line, column }; }
    };

    bool isNameStart(char c)
    {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
    }

    bool isNameChar(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' || c == '.';
    }

    bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

    class Parser {
    public:
        explicit Parser(std::string_view input)
            : cur_ { input }
        {
        }

        ParseResult run()
        {
            ParseResult result;
            skipProlog();
            if (cur_.atEnd() || cur_.peek() != '<') {
                fail("expected a root element");
            } else {
                result.root = parseElement();
            }
            if (result.root) {
                skipMisc();
                if (!cur_.atEnd())
                    fail("trailing content after the root element");
            }
            if (hasErrors(diags_))
                result.root.reset();
            result.diagnostics = std::move(diags_);
            return result;
        }

    private:
        Cursor cur_;
        std::vector<Diagnostic> diags_;
        int depth_ = 0;

        void fail(std::string message, std::optional<SourceLoc> at = std::nullopt)
        {
            diags_.push_back(Diagnostic::error("XmlSyntax", std::move(message), at.value_or(cur_.loc())));
        }

        void skipWhitespace()
        {
            while (!cur_.atEnd() && isSpace(cur_.peek()))
                cur_.advance();
        }

        // Comments, PIs and the XML declaration before/after the root.
        void skipMisc()
        {
            for (;;) {
                skipWhitespace();
                if (cur_.startsWith("<!--")) {
                    skipComment();
                } else if (cur_.startsWith("<?")) {
                    skipUntil("?>");
                } else {
                    return;
                }
            }
        }

        void skipProlog()
        {
            skipMisc();
            if (cur_.startsWith("<!DOCTYPE")) {
                skipUntil(">");
                skipMisc();
            }
        }

        void skipComment()
        {
            cur_.advanceBy(4);
            skipUntil("-->");
        }

        void skipUntil(std::string_view terminator)
        {
            while (!cur_.atEnd() && !cur_.startsWith(terminator))
                cur_.advance();
            if (cur_.atEnd())
                fail("unterminated markup");
            else
                cur_.advanceBy(terminator.size());
        }

        std::string parseName()
        {
            std::string name;
            if (cur_.atEnd() || !isNameStart(cur_.peek())) {
                fail("expected a name");
                return name;
            }
            while (!cur_.atEnd() && isNameChar(cur_.peek()))
                name += cur_.advance();
            return name;
        }

        std::string decodeEntities(std::string_view raw, SourceLoc at)
        {
            std::string out;
            out.reserve(raw.size());
            for (std::size_t i = 0; i < raw.size(); ++i) {
                if (raw[i] != '&') {
                    out += raw[i];
                    continue;
                }
                auto semi = raw.find(';', i);
                if (semi == std::string_view::npos) {
                    fail("unterminated entity reference", at);
                    out += raw[i];
                    continue;
                }
                std::string_view entity = raw.substr(i + 1, semi - i - 1);
                if (entity == "lt")
                    out += '<';
                else if (entity == "gt")
                    out += '>';
                else if (entity == "amp")
                    out += '&';
                else if (entity == "quot")
                    out += '"';
                else if (entity == "apos")
                    out += '\'';
                else if (!entity.empty() && entity[0] == '#') {
                    long v = 0;
                    bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
                    for (std::size_t k = hex ? 2 : 1; k < entity.size() && v <= 0x10FFFF; ++k) {
                        char c = entity[k];
                        int digit;
                        if (c >= '0' && c <= '9')
                            digit = c - '0';
                        else if (hex && c >= 'a' && c <= 'f')
                            digit = c - 'a' + 10;
                        else if (hex && c >= 'A' && c <= 'F')
                            digit = c - 'A' + 10;
                        else {
                            digit = -1;
                            break;
                        }
                        v = v * (hex ? 16 : 10) + digit;
                    }
                    if (v > 0xFF)
                        fail("character reference beyond the supported range", at);
                    else
                        out += static_cast<char>(v);
                } else {
                    fail("unknown entity '&" + std::string(entity) + ";'", at);
                }
                i = semi;
            }
            return out;
        }

        std::optional<Attribute> parseAttribute()
        {
            Attribute attr;
            attr.location = cur_.loc();
            attr.name = parseName();
            if (attr.name.empty())
                return std::nullopt;
            skipWhitespace();
            if (cur_.atEnd() || cur_.peek() != '=') {
                fail("expected '=' after attribute name", attr.location);
                return std::nullopt;
            }
            cur_.advance();
            skipWhitespace();
            if (cur_.atEnd() || (cur_.peek() != '"' && cur_.peek() != '\'')) {
                fail("expected a quoted attribute value", attr.location);
                return std::nullopt;
            }
            char quote = cur_.advance();
            std::string raw;
            while (!cur_.atEnd() && cur_.peek() != quote && cur_.peek() != '<')
                raw += cur_.advance();
            if (cur_.atEnd() || cur_.peek() != quote) {
                fail("unterminated attribute value", attr.location);
                return std::nullopt;
            }
            cur_.advance();
            attr.value = decodeEntities(raw, attr.location);
            return attr;
        }

        std::unique_ptr<Element> parseElement()
        {
            if (depth_ >= 512) {
                fail("elements nested too deeply");
                return nullptr;
            }
            ++depth_;
            auto element = parseElementAtDepth();
            --depth_;
            return element;
        }

        std::unique_ptr<Element> parseElementAtDepth()
        {
            SourceLoc open = cur_.loc();
            cur_.advance(); // '<'
            auto element = std::make_unique<Element>();
            element->location = open;
            element->name = parseName();
            if (element->name.empty())
                return nullptr;

            for (;;) {
                skipWhitespace();
                if (cur_.atEnd()) {
                    fail("unterminated start tag for '" + element->name + "'", open);
                    return nullptr;
                }
                if (cur_.peek() == '>') {
                    cur_.advance();
                    break;
                }
                if (cur_.startsWith("/>")) {
                    cur_.advanceBy(2);
                    return element;
                }
                auto attr = parseAttribute();
                if (!attr)
                    return nullptr;
                element->attributes.push_back(std::move(*attr));
            }

            // Content until the matching end tag.
            std::string text;
            for (;;) {
                if (cur_.atEnd()) {
                    fail("missing end tag for '" + element->name + "'", open);
                    return nullptr;
                }
                if (cur_.startsWith("<!--")) {
                    skipComment();
                    continue;
                }
                if (cur_.startsWith("<![CDATA[")) {
                    cur_.advanceBy(9);
                    while (!cur_.atEnd() && !cur_.startsWith("]]>"))
                        text += cur_.advance();
                    if (cur_.atEnd())
                        fail("unterminated CDATA section", open);
                    else
                        cur_.advanceBy(3);
                    continue;
                }
                if (cur_.startsWith("</")) {
                    SourceLoc closeLoc = cur_.loc();
                    cur_.advanceBy(2);
                    std::string closing = parseName();
                    skipWhitespace();
                    if (cur_.atEnd() || cur_.peek() != '>') {
                        fail("malformed end tag", closeLoc);
                        return nullptr;
                    }
                    cur_.advance();
                    if (closing != element->name) {
                        fail("end tag '</" + closing + ">' does not match '<" + element->name + ">'", closeLoc);
                        return nullptr;
                    }
                    break;
                }
                if (cur_.peek() == '<') {
                    auto child = parseElement();
                    if (!child)
                        return nullptr;
                    element->children.push_back(std::move(child));
                    continue;
                }
                SourceLoc textLoc = cur_.loc();
                std::string raw;
                while (!cur_.atEnd() && cur_.peek() != '<')
                    raw += cur_.advance();
                text += decodeEntities(raw, textLoc);
            }

            // Trim surrounding whitespace from character data.
            std::size_t b = 0, e = text.size();
            while (b < e && isSpace(text[b]))
                ++b;
            while (e > b && isSpace(text[e - 1]))
                --e;
            element->text = text.substr(b, e - b);
            return element;
        }
    };

} // namespace

bool nameEquals(std::string_view a, std::string_view b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

const Attribute* Element::findAttribute(std::string_view name) const
{
    for (const auto& a : attributes)
        if (nameEquals(a.name, name))
            return &a;
    return nullptr;
}

std::optional<std::string> Element::attributeValue(std::string_view name) const
{
    const Attribute* a = findAttribute(name);
    if (!a)
        return std::nullopt;
    return a->value;
}

std::vector<const Element*> Element::childrenNamed(std::string_view name) const
{
    std::vector<const Element*> out;
    for (const auto& c : children)
        if (nameEquals(c->name, name))
            out.push_back(c.get());
    return out;
}

const Element* Element::firstChild(std::string_view name) const
{
    for (const auto& c : children)
        if (nameEquals(c->name, name))
            return c.get();
    return nullptr;
}

ParseResult parseDocument(std::string_view input)
{
    return Parser(input).run();
}

std::string escapeText(std::string_view raw)
{
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string escapeAttribute(std::string_view raw)
{
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace fdl::xml
