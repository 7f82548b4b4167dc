#pragma once

#include <string>
#include <vector>

namespace fdl {

struct SourceLoc {
    int line = 0;
    int column = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceLoc location;

    static Diagnostic error(std::string code, std::string message, SourceLoc loc = {})
    {
        return { Severity::Error, std::move(code), std::move(message), loc };
    }
    static Diagnostic warning(std::string code, std::string message, SourceLoc loc = {})
    {
        return { Severity::Warning, std::move(code), std::move(message), loc };
    }
};

inline bool hasErrors(const std::vector<Diagnostic>& diags)
{
    for (const auto& d : diags)
        if (d.severity == Severity::Error)
            return true;
    return false;
}

// "file:line:col: severity[code]: message"
std::string renderDiagnostic(const Diagnostic& d, const std::string& file);

} // namespace fdl
