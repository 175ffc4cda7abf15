#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace archkit {

struct SourceSpan {
    std::string file;
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    int length = 0;

    bool operator==(const SourceSpan&) const = default;
};

enum class Severity { Error, Warning, Info };

inline const char* to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Info: return "info";
    }
    return "?";
}

struct Diagnostic {
    std::string code;
    Severity severity = Severity::Error;
    std::string message;
    SourceSpan span;
    std::vector<SourceSpan> related;

    bool operator==(const Diagnostic&) const = default;
};

// path:line:col: severity[CODE] message
inline std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    os << d.span.file << ':' << d.span.line << ':' << d.span.column << ": "
       << to_string(d.severity) << '[' << d.code << "] " << d.message;
    for (const auto& r : d.related) {
        os << "\n  " << r.file << ':' << r.line << ':' << r.column << ": related location";
    }
    return os.str();
}

// Canonical ordering used by every diagnostic-producing surface.
inline bool diagnostic_less(const Diagnostic& a, const Diagnostic& b) {
    if (a.span.file != b.span.file) return a.span.file < b.span.file;
    if (a.span.line != b.span.line) return a.span.line < b.span.line;
    if (a.span.column != b.span.column) return a.span.column < b.span.column;
    if (a.code != b.code) return a.code < b.code;
    return a.message < b.message;
}

inline void sort_diagnostics(std::vector<Diagnostic>& ds) {
    std::stable_sort(ds.begin(), ds.end(), diagnostic_less);
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
    return std::any_of(ds.begin(), ds.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace archkit
