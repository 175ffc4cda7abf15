#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "archkit/diagnostics.hpp"

namespace archkit {

enum class ValueKind { String, Integer, Real, Boolean, Dal, Enum };

inline const char* to_string(ValueKind k) {
    switch (k) {
        case ValueKind::String: return "string";
        case ValueKind::Integer: return "integer";
        case ValueKind::Real: return "real";
        case ValueKind::Boolean: return "boolean";
        case ValueKind::Dal: return "dal";
        case ValueKind::Enum: return "enum";
    }
    return "?";
}

// Attribute value. Dal and Enum payloads are the literal spelling.
struct Value {
    ValueKind kind = ValueKind::String;
    std::variant<std::string, long long, double, bool> data;

    static Value string(std::string s) { return {ValueKind::String, std::move(s)}; }
    static Value integer(long long i) { return {ValueKind::Integer, i}; }
    static Value real(double r) { return {ValueKind::Real, r}; }
    static Value boolean(bool b) { return {ValueKind::Boolean, b}; }
    static Value dal(std::string level) { return {ValueKind::Dal, std::move(level)}; }
    static Value enum_literal(std::string lit) { return {ValueKind::Enum, std::move(lit)}; }

    const std::string& as_string() const { return std::get<std::string>(data); }

    bool operator==(const Value&) const = default;
};

inline bool is_dal_literal(const std::string& s) {
    return s.size() == 1 && s[0] >= 'A' && s[0] <= 'E';
}

struct AttributeDef {
    std::string name;
    ValueKind kind = ValueKind::String;
    std::vector<std::string> enum_literals;  // Enum only
    bool required = false;
    std::optional<Value> default_value;
    SourceSpan span;

    bool operator==(const AttributeDef&) const = default;
};

enum class BaseKind { Component, Port, Connector };

inline const char* to_string(BaseKind k) {
    switch (k) {
        case BaseKind::Component: return "component";
        case BaseKind::Port: return "port";
        case BaseKind::Connector: return "connector";
    }
    return "?";
}

struct Stereotype {
    std::string name;
    BaseKind base_kind = BaseKind::Component;
    std::optional<std::string> extends;
    bool abstract_ = false;
    bool bidirectional = false;  // ports: may be declared inout
    std::vector<AttributeDef> attributes;
    std::optional<std::string> endpoint_constraint;  // connectors
    SourceSpan span;

    bool operator==(const Stereotype&) const = default;
};

struct Profile {
    std::string name;
    std::vector<Stereotype> stereotypes;
    SourceSpan span;

    const Stereotype* find(const std::string& n) const {
        for (const auto& s : stereotypes)
            if (s.name == n) return &s;
        return nullptr;
    }

    bool operator==(const Profile&) const = default;
};

// Inheritance-flattened stereotype: attributes along the extends chain,
// root-first; endpoint constraint from the most-derived declaration.
struct EffectiveStereotype {
    std::string name;
    BaseKind base_kind = BaseKind::Component;
    bool abstract_ = false;
    bool bidirectional = false;
    std::vector<AttributeDef> attributes;
    std::optional<std::string> endpoint_constraint;

    const AttributeDef* find_attribute(const std::string& n) const {
        for (const auto& a : attributes)
            if (a.name == n) return &a;
        return nullptr;
    }
};

struct ResolveResult {
    std::optional<EffectiveStereotype> stereotype;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return stereotype.has_value(); }
};

inline ResolveResult resolve_effective_stereotype(const Profile& profile, const std::string& name) {
    ResolveResult result;
    const Stereotype* s = profile.find(name);
    if (!s) {
        result.diagnostics.push_back({"PROF-001", Severity::Error,
                                      "unknown stereotype '" + name + "' in profile '" + profile.name + "'",
                                      profile.span});
        return result;
    }
    // Walk to the root, collecting the chain.
    std::vector<const Stereotype*> chain{s};
    while (chain.back()->extends) {
        const Stereotype* parent = profile.find(*chain.back()->extends);
        if (!parent) {
            result.diagnostics.push_back({"PROF-002", Severity::Error,
                                          "stereotype '" + chain.back()->name + "' extends unknown stereotype '" +
                                              *chain.back()->extends + "'",
                                          chain.back()->span});
            return result;
        }
        for (const Stereotype* seen : chain) {
            if (seen == parent) {
                result.diagnostics.push_back({"PROF-003", Severity::Error,
                                              "inheritance cycle through stereotype '" + parent->name + "'",
                                              chain.back()->span});
                return result;
            }
        }
        if (parent->base_kind != s->base_kind) {
            result.diagnostics.push_back({"PROF-004", Severity::Error,
                                          "stereotype '" + chain.back()->name + "' (" +
                                              to_string(chain.back()->base_kind) + ") extends '" + parent->name +
                                              "' of different kind " + to_string(parent->base_kind),
                                          chain.back()->span});
            return result;
        }
        chain.push_back(parent);
    }

    EffectiveStereotype eff;
    eff.name = s->name;
    eff.base_kind = s->base_kind;
    eff.abstract_ = s->abstract_;
    // Root-first attribute order; redefinition along the chain is an error.
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const Stereotype* st = *it;
        if (st->bidirectional) eff.bidirectional = true;
        if (st->endpoint_constraint) eff.endpoint_constraint = st->endpoint_constraint;
        for (const auto& attr : st->attributes) {
            if (eff.find_attribute(attr.name)) {
                result.diagnostics.push_back({"PROF-005", Severity::Error,
                                              "attribute '" + attr.name + "' redefined in stereotype '" + st->name +
                                                  "' along the inheritance chain of '" + s->name + "'",
                                              attr.span});
                return result;
            }
            eff.attributes.push_back(attr);
        }
    }
    result.stereotype = std::move(eff);
    return result;
}

// Checks a literal against an attribute definition's value kind.
inline std::optional<std::string> check_value_kind(const AttributeDef& def, const Value& v) {
    if (def.kind == ValueKind::Integer && v.kind == ValueKind::Integer) return std::nullopt;
    if (def.kind == ValueKind::Real &&
        (v.kind == ValueKind::Real || v.kind == ValueKind::Integer))
        return std::nullopt;
    if (def.kind == ValueKind::Boolean && v.kind == ValueKind::Boolean) return std::nullopt;
    if (def.kind == ValueKind::String && v.kind == ValueKind::String) return std::nullopt;
    if (def.kind == ValueKind::Dal) {
        if ((v.kind == ValueKind::Dal || v.kind == ValueKind::String || v.kind == ValueKind::Enum) &&
            is_dal_literal(v.as_string()))
            return std::nullopt;
        return "attribute '" + def.name + "' expects a DAL literal A..E";
    }
    if (def.kind == ValueKind::Enum) {
        if (v.kind == ValueKind::Enum || v.kind == ValueKind::String) {
            const std::string& lit = v.as_string();
            for (const auto& l : def.enum_literals)
                if (l == lit) return std::nullopt;
            return "'" + lit + "' is not a literal of enum attribute '" + def.name + "'";
        }
    }
    return "attribute '" + def.name + "' expects a " + std::string(to_string(def.kind)) + " value";
}

// Validates a whole profile (invariants beyond what parsing enforces).
inline std::vector<Diagnostic> validate_profile(const Profile& profile) {
    std::vector<Diagnostic> out;
    std::map<std::string, const Stereotype*> seen;
    for (const auto& s : profile.stereotypes) {
        auto [it, inserted] = seen.emplace(s.name, &s);
        if (!inserted) {
            out.push_back({"PROF-006", Severity::Error,
                           "duplicate stereotype '" + s.name + "' in profile '" + profile.name + "'",
                           s.span,
                           {it->second->span}});
        }
        for (const auto& a : s.attributes) {
            if (a.default_value) {
                if (auto err = check_value_kind(a, *a.default_value)) {
                    out.push_back({"PROF-007", Severity::Error,
                                   "default value mismatch: " + *err, a.span});
                }
            }
        }
    }
    for (const auto& s : profile.stereotypes) {
        auto r = resolve_effective_stereotype(profile, s.name);
        for (auto& d : r.diagnostics) out.push_back(std::move(d));
    }
    sort_diagnostics(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace archkit
