#pragma once

#include <cctype>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "archkit/profile.hpp"

namespace archkit {

inline bool is_plain_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') continue;
        // '-' is allowed between alphanumeric runs (ids like SYS-REQ-001)
        if (c == '-' && i + 1 < s.size() &&
            (std::isalnum(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '_'))
            continue;
        return false;
    }
    return true;
}

inline std::string quote_name(const std::string& s) {
    if (is_plain_identifier(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

// Dotted path of names; names themselves never contain '.'.
struct QualifiedPath {
    std::vector<std::string> segments;

    bool empty() const { return segments.empty(); }
    std::string to_string() const {
        std::string out;
        for (size_t i = 0; i < segments.size(); ++i) {
            if (i) out += '.';
            out += quote_name(segments[i]);
        }
        return out;
    }
    // Unquoted plain form, for references inside link/report files.
    std::string plain() const {
        std::string out;
        for (size_t i = 0; i < segments.size(); ++i) {
            if (i) out += '.';
            out += segments[i];
        }
        return out;
    }

    auto operator<=>(const QualifiedPath&) const = default;
};

struct AppliedStereotype {
    std::string name;
    std::vector<std::pair<std::string, Value>> bindings;
    SourceSpan span;

    const Value* binding(const std::string& attr) const {
        for (const auto& [n, v] : bindings)
            if (n == attr) return &v;
        return nullptr;
    }

    bool operator==(const AppliedStereotype&) const = default;
};

// First binding of `attr` across a set of applied stereotypes.
inline const Value* binding_of(const std::vector<AppliedStereotype>& applied, const std::string& attr) {
    for (const auto& s : applied)
        if (const Value* v = s.binding(attr)) return v;
    return nullptr;
}

enum class PortDirection { In, Out, InOut };

inline const char* to_string(PortDirection d) {
    switch (d) {
        case PortDirection::In: return "in";
        case PortDirection::Out: return "out";
        case PortDirection::InOut: return "inout";
    }
    return "?";
}

struct ArchPort {
    std::string name;
    PortDirection direction = PortDirection::In;
    std::vector<AppliedStereotype> stereotypes;
    SourceSpan span;

    bool operator==(const ArchPort&) const = default;
};

struct ArchElement {
    std::string name;
    std::vector<AppliedStereotype> stereotypes;
    std::vector<ArchPort> ports;
    std::vector<ArchElement> children;
    SourceSpan span;

    const ArchPort* find_port(const std::string& n) const {
        for (const auto& p : ports)
            if (p.name == n) return &p;
        return nullptr;
    }
    const ArchElement* find_child(const std::string& n) const {
        for (const auto& c : children)
            if (c.name == n) return &c;
        return nullptr;
    }
    bool is_leaf() const { return children.empty(); }

    bool operator==(const ArchElement&) const = default;
};

struct ArchConnector {
    QualifiedPath source;  // element path + port name, model-relative
    QualifiedPath target;
    AppliedStereotype stereotype;
    SourceSpan span;

    bool operator==(const ArchConnector&) const = default;
};

enum class ModelKind { Functional, Physical };

inline const char* to_string(ModelKind k) {
    return k == ModelKind::Functional ? "functional" : "physical";
}

struct ArchModel {
    std::string name;
    ModelKind kind = ModelKind::Functional;
    std::string level = "L0";
    std::vector<std::string> used_profiles;
    std::vector<ArchElement> elements;
    std::vector<ArchConnector> connectors;
    SourceSpan span;

    bool operator==(const ArchModel&) const = default;
};

// Model-relative element lookup. Path excludes the model name.
inline const ArchElement* find_element(const ArchModel& model, const QualifiedPath& path) {
    if (path.empty()) return nullptr;
    const ArchElement* cur = nullptr;
    for (const auto& e : model.elements)
        if (e.name == path.segments[0]) cur = &e;
    for (size_t i = 1; cur && i < path.segments.size(); ++i) cur = cur->find_child(path.segments[i]);
    return cur;
}

struct PortRef {
    const ArchElement* element = nullptr;
    const ArchPort* port = nullptr;
    QualifiedPath element_path;  // model-relative

    explicit operator bool() const { return port != nullptr; }
};

// Resolves a model-relative path whose last segment is a port name.
inline PortRef find_port(const ArchModel& model, const QualifiedPath& path) {
    if (path.segments.size() < 2) return {};
    QualifiedPath elem_path{{path.segments.begin(), path.segments.end() - 1}};
    const ArchElement* e = find_element(model, elem_path);
    if (!e) return {};
    const ArchPort* p = e->find_port(path.segments.back());
    if (!p) return {};
    return {e, p, std::move(elem_path)};
}

template <typename Fn>
void for_each_element(const ArchModel& model, Fn&& fn) {
    std::function<void(const ArchElement&, QualifiedPath&)> walk = [&](const ArchElement& e, QualifiedPath& path) {
        path.segments.push_back(e.name);
        fn(e, static_cast<const QualifiedPath&>(path));
        for (const auto& c : e.children) walk(c, path);
        path.segments.pop_back();
    };
    QualifiedPath path;
    for (const auto& e : model.elements) walk(e, path);
}

struct Allocation {
    QualifiedPath functional_path;  // includes model name
    QualifiedPath physical_path;
    SourceSpan span;

    bool operator==(const Allocation&) const = default;
};

// ---- stereotype application -------------------------------------------------

struct ApplyResult {
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

// Applies an effective stereotype with bindings; fills defaults for missing
// optional attributes. Missing required attributes are left unset (rule
// P-ATTR-001 reports them later so authors can iterate).
inline ApplyResult apply_stereotype(std::vector<AppliedStereotype>& applied, BaseKind carrier_kind,
                                    const EffectiveStereotype& stereotype,
                                    std::vector<std::pair<std::string, Value>> bindings,
                                    const SourceSpan& span = {}) {
    ApplyResult result;
    if (stereotype.base_kind != carrier_kind) {
        result.diagnostics.push_back({"MODEL-001", Severity::Error,
                                      "stereotype '" + stereotype.name + "' applies to " +
                                          std::string(to_string(stereotype.base_kind)) + ", not " +
                                          to_string(carrier_kind),
                                      span});
        return result;
    }
    if (stereotype.abstract_) {
        result.diagnostics.push_back({"MODEL-002", Severity::Error,
                                      "abstract stereotype '" + stereotype.name + "' cannot be applied",
                                      span});
        return result;
    }
    AppliedStereotype a{stereotype.name, {}, span};
    for (auto& [name, value] : bindings) {
        const AttributeDef* def = stereotype.find_attribute(name);
        if (!def) {
            result.diagnostics.push_back({"MODEL-003", Severity::Error,
                                          "stereotype '" + stereotype.name + "' has no attribute '" + name + "'",
                                          span});
            continue;
        }
        if (auto err = check_value_kind(*def, value)) {
            result.diagnostics.push_back({"MODEL-004", Severity::Error, *err, span});
            continue;
        }
        a.bindings.emplace_back(name, std::move(value));
    }
    for (const auto& def : stereotype.attributes) {
        if (!a.binding(def.name) && def.default_value) a.bindings.emplace_back(def.name, *def.default_value);
    }
    if (result.ok()) applied.push_back(std::move(a));
    return result;
}

// ---- breakdown views ---------------------------------------------------------

enum class ViewKind { FunctionBreakdown, PhysicalActorsBreakdown };

struct ViewEntry {
    QualifiedPath path;  // model-relative
    int depth = 0;
    std::vector<std::string> stereotypes;
    std::vector<std::pair<std::string, Value>> attributes;
};

struct ViewTree {
    std::string model_name;
    ViewKind kind = ViewKind::FunctionBreakdown;
    std::vector<ViewEntry> entries;  // pre-order, declaration order
};

struct ViewResult {
    std::optional<ViewTree> tree;
    std::vector<Diagnostic> diagnostics;
};

inline ViewResult build_view(const ArchModel& model, ViewKind kind) {
    ViewResult result;
    bool matches = (kind == ViewKind::FunctionBreakdown && model.kind == ModelKind::Functional) ||
                   (kind == ViewKind::PhysicalActorsBreakdown && model.kind == ModelKind::Physical);
    if (!matches) {
        result.diagnostics.push_back({"MODEL-005", Severity::Error,
                                      "view kind does not match " + std::string(to_string(model.kind)) +
                                          " model '" + model.name + "'",
                                      model.span});
        return result;
    }
    ViewTree tree;
    tree.model_name = model.name;
    tree.kind = kind;
    for_each_element(model, [&](const ArchElement& e, const QualifiedPath& path) {
        ViewEntry entry;
        entry.path = path;
        entry.depth = static_cast<int>(path.segments.size()) - 1;
        for (const auto& s : e.stereotypes) {
            entry.stereotypes.push_back(s.name);
            for (const auto& b : s.bindings) entry.attributes.push_back(b);
        }
        tree.entries.push_back(std::move(entry));
    });
    result.tree = std::move(tree);
    return result;
}

}  // namespace archkit
