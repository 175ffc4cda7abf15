#pragma once

#include <charconv>
#include <sstream>
#include <string>

#include "archkit/fha.hpp"
#include "archkit/fpm.hpp"
#include "archkit/model.hpp"
#include "archkit/parser.hpp"
#include "archkit/profile.hpp"
#include "archkit/requirements.hpp"

namespace archkit {

namespace detail {

inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, ptr);
    // Keep reals lexically distinct from integers.
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

inline std::string quote_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline std::string serialize_value(const Value& v) {
    switch (v.kind) {
        case ValueKind::String: return detail::quote_string(std::get<std::string>(v.data));
        case ValueKind::Integer: return std::to_string(std::get<long long>(v.data));
        case ValueKind::Real: return detail::format_real(std::get<double>(v.data));
        case ValueKind::Boolean: return std::get<bool>(v.data) ? "true" : "false";
        case ValueKind::Dal:
        case ValueKind::Enum: return std::get<std::string>(v.data);
    }
    return "";
}

// Plain rendering for reports: strings unquoted.
inline std::string value_display(const Value& v) {
    if (v.kind == ValueKind::String) return std::get<std::string>(v.data);
    return serialize_value(v);
}

// ---- profiles ------------------------------------------------------------------

inline std::string serialize_profile_file(const ProfileFile& file) {
    std::ostringstream os;
    bool first_profile = true;
    for (const auto& prof : file.profiles) {
        if (!first_profile) os << '\n';
        first_profile = false;
        os << "profile " << quote_name(prof.name) << " {\n";
        for (const auto& s : prof.stereotypes) {
            os << "  stereotype " << quote_name(s.name);
            if (s.abstract_) os << " abstract";
            if (s.extends) os << " extends " << quote_name(*s.extends);
            else os << " kind " << to_string(s.base_kind);
            if (s.bidirectional) os << " bidirectional";
            if (!s.attributes.empty() || s.endpoint_constraint) {
                os << " {\n";
                for (const auto& a : s.attributes) {
                    os << "    attr " << quote_name(a.name) << ": ";
                    if (a.kind == ValueKind::Enum) {
                        os << "enum(";
                        for (size_t i = 0; i < a.enum_literals.size(); ++i) {
                            if (i) os << ", ";
                            os << quote_name(a.enum_literals[i]);
                        }
                        os << ")";
                    } else {
                        os << to_string(a.kind);
                    }
                    if (!a.required) os << " optional";
                    if (a.default_value) os << " = " << serialize_value(*a.default_value);
                    os << '\n';
                }
                if (s.endpoint_constraint) os << "    endpoints " << quote_name(*s.endpoint_constraint) << '\n';
                os << "  }\n";
            } else {
                os << '\n';
            }
        }
        if (&prof == &file.profiles.back() && !file.rules.empty()) {
            os << "  rules {\n";
            for (const auto& r : file.rules) {
                os << "    rule " << quote_name(r.code) << " on " << quote_name(r.selector_stereotype) << ' ';
                switch (r.constraint) {
                    case CustomRuleSpec::Constraint::EndpointMustBe:
                        os << "endpoint_must_be(" << quote_name(r.param) << ")";
                        break;
                    case CustomRuleSpec::Constraint::AttributeRequired:
                        os << "attribute_required(" << quote_name(r.param) << ")";
                        break;
                    case CustomRuleSpec::Constraint::AttributeMatches:
                        os << "attribute_matches(" << quote_name(r.param) << ", "
                           << detail::quote_string(r.regex) << ")";
                        break;
                    case CustomRuleSpec::Constraint::MustHaveInboundLink:
                        os << "must_have_inbound_link(" << to_string(r.link_type) << ")";
                        break;
                    case CustomRuleSpec::Constraint::MustBeConnectedOrJustified:
                        os << "must_be_connected_or_justified";
                        break;
                }
                os << '\n';
            }
            os << "  }\n";
        }
        os << "}\n";
    }
    return os.str();
}

// ---- models --------------------------------------------------------------------

namespace detail {

inline void serialize_bindings(std::ostringstream& os, const std::vector<AppliedStereotype>& applied,
                               const std::string& indent) {
    for (const auto& s : applied)
        for (const auto& [name, value] : s.bindings)
            os << indent << "attr " << quote_name(name) << " = " << serialize_value(value) << '\n';
}

inline void serialize_stereotype_list(std::ostringstream& os, const std::vector<AppliedStereotype>& applied) {
    if (applied.empty()) return;
    os << " : ";
    for (size_t i = 0; i < applied.size(); ++i) {
        if (i) os << ", ";
        os << quote_name(applied[i].name);
    }
}

inline void serialize_element(std::ostringstream& os, const ArchElement& e, int depth) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    std::string inner = indent + "  ";
    os << indent << "component " << quote_name(e.name);
    serialize_stereotype_list(os, e.stereotypes);
    bool has_body = !e.ports.empty() || !e.children.empty();
    for (const auto& s : e.stereotypes)
        if (!s.bindings.empty()) has_body = true;
    if (!has_body) {
        os << '\n';
        return;
    }
    os << " {\n";
    serialize_bindings(os, e.stereotypes, inner);
    for (const auto& port : e.ports) {
        os << inner << "port " << quote_name(port.name) << ' ' << to_string(port.direction);
        serialize_stereotype_list(os, port.stereotypes);
        bool port_body = false;
        for (const auto& s : port.stereotypes)
            if (!s.bindings.empty()) port_body = true;
        if (port_body) {
            os << " {\n";
            serialize_bindings(os, port.stereotypes, inner + "  ");
            os << inner << "}\n";
        } else {
            os << '\n';
        }
    }
    for (const auto& child : e.children) serialize_element(os, child, depth + 1);
    os << indent << "}\n";
}

}  // namespace detail

inline std::string serialize_model(const ArchModel& model) {
    std::ostringstream os;
    os << "model " << quote_name(model.name) << " {\n";
    os << "  kind " << to_string(model.kind) << '\n';
    os << "  level " << quote_name(model.level) << '\n';
    if (!model.used_profiles.empty()) {
        os << "  uses ";
        for (size_t i = 0; i < model.used_profiles.size(); ++i) {
            if (i) os << ", ";
            os << quote_name(model.used_profiles[i]);
        }
        os << '\n';
    }
    for (const auto& e : model.elements) detail::serialize_element(os, e, 1);
    for (const auto& c : model.connectors) {
        os << "  connect " << c.source.to_string() << " -> " << c.target.to_string();
        if (!c.stereotype.name.empty()) {
            os << " : " << quote_name(c.stereotype.name);
            if (!c.stereotype.bindings.empty()) {
                os << " {\n";
                for (const auto& [name, value] : c.stereotype.bindings)
                    os << "    attr " << quote_name(name) << " = " << serialize_value(value) << '\n';
                os << "  }";
            }
        }
        os << '\n';
    }
    os << "}\n";
    return os.str();
}

// ---- requirements -----------------------------------------------------------------

inline std::string serialize_artifact_ref(const ArtifactRef& ref) {
    if (ref.is_path) return detail::quote_string(ref.text);
    return ref.text;
}

inline std::string serialize_requirements(const RequirementSet& set) {
    std::ostringstream os;
    for (const auto& r : set.requirements) {
        os << (r.type == ReqType::Assumption ? "assumption " : "requirement ") << quote_name(r.id)
           << " level " << quote_name(r.level);
        if (r.type != ReqType::Assumption) os << " type " << to_string(r.type);
        os << " {\n";
        os << "  text = " << detail::quote_string(r.text) << '\n';
        if (r.rationale) os << "  rationale = " << detail::quote_string(*r.rationale) << '\n';
        if (r.justification) os << "  justification = " << detail::quote_string(*r.justification) << '\n';
        if (r.min_cut_order) os << "  min_cut_order = " << *r.min_cut_order << '\n';
        os << "}\n";
    }
    for (const auto& l : set.links) {
        os << "link " << serialize_artifact_ref(l.source) << ' ' << to_string(l.type) << ' '
           << serialize_artifact_ref(l.target) << '\n';
    }
    return os.str();
}

// ---- FPM ---------------------------------------------------------------------------

namespace detail {

inline void serialize_fpm_expr(std::ostringstream& os, const FpmExpr& e, bool parenthesize) {
    switch (e.kind) {
        case FpmExpr::Kind::BasicEvent:
        case FpmExpr::Kind::FailureRef:
            os << e.path.to_string();
            return;
        case FpmExpr::Kind::InFailure:
            os << "in_failure(" << e.path.to_string() << ")";
            return;
        case FpmExpr::Kind::Gate: {
            if (parenthesize) os << '(';
            const char* sep = e.gate == GateKind::And ? " & " : " | ";
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) os << sep;
                const FpmExpr& child = *e.children[i];
                // Nested gates always get parens so same-kind nesting survives
                // the reparse instead of flattening.
                serialize_fpm_expr(os, child, child.kind == FpmExpr::Kind::Gate);
            }
            if (parenthesize) os << ')';
            return;
        }
    }
}

}  // namespace detail

inline std::string serialize_fpm_expr(const FpmExpr& e) {
    std::ostringstream os;
    detail::serialize_fpm_expr(os, e, false);
    return os.str();
}

inline std::string serialize_fpm(const Fpm& fpm) {
    std::ostringstream os;
    os << "fpm " << quote_name(fpm.name) << " for " << quote_name(fpm.model_name) << " {\n";
    for (const auto& c : fpm.components) {
        os << "  component " << c.path.to_string() << " {\n";
        for (const auto& p : c.ports) os << "    port " << quote_name(p.name) << ' ' << to_string(p.direction) << '\n';
        for (const auto& ev : c.basic_events) {
            os << "    basic_event " << quote_name(ev.name);
            if (ev.rate) os << " rate " << detail::format_real(*ev.rate);
            os << '\n';
        }
        for (const auto& of : c.out_failures) {
            os << "    out_failure ";
            if (of.port) os << quote_name(*of.port) << '.';
            os << quote_name(of.name) << " = " << serialize_fpm_expr(*of.expr) << '\n';
        }
        os << "  }\n";
    }
    for (const auto& e : fpm.edges) {
        os << "  edge " << e.source_component.to_string() << '.' << quote_name(e.source_port) << " -> "
           << e.target_component.to_string() << '.' << quote_name(e.target_port) << '\n';
    }
    for (const auto& t : fpm.top_events)
        os << "  top_event " << quote_name(t.name) << " = " << serialize_fpm_expr(*t.expr) << '\n';
    os << "}\n";
    return os.str();
}

// ---- structural equality (spans ignored) ---------------------------------------------

inline bool structurally_equal(const Value& a, const Value& b) { return a == b; }

inline bool structurally_equal(const AttributeDef& a, const AttributeDef& b) {
    return a.name == b.name && a.kind == b.kind && a.enum_literals == b.enum_literals &&
           a.required == b.required && a.default_value == b.default_value;
}

inline bool structurally_equal(const Stereotype& a, const Stereotype& b) {
    if (a.name != b.name || a.base_kind != b.base_kind || a.extends != b.extends ||
        a.abstract_ != b.abstract_ || a.bidirectional != b.bidirectional ||
        a.endpoint_constraint != b.endpoint_constraint || a.attributes.size() != b.attributes.size())
        return false;
    for (size_t i = 0; i < a.attributes.size(); ++i)
        if (!structurally_equal(a.attributes[i], b.attributes[i])) return false;
    return true;
}

inline bool structurally_equal(const Profile& a, const Profile& b) {
    if (a.name != b.name || a.stereotypes.size() != b.stereotypes.size()) return false;
    for (size_t i = 0; i < a.stereotypes.size(); ++i)
        if (!structurally_equal(a.stereotypes[i], b.stereotypes[i])) return false;
    return true;
}

inline bool structurally_equal(const AppliedStereotype& a, const AppliedStereotype& b) {
    return a.name == b.name && a.bindings == b.bindings;
}

inline bool structurally_equal(const ArchPort& a, const ArchPort& b) {
    if (a.name != b.name || a.direction != b.direction || a.stereotypes.size() != b.stereotypes.size())
        return false;
    for (size_t i = 0; i < a.stereotypes.size(); ++i)
        if (!structurally_equal(a.stereotypes[i], b.stereotypes[i])) return false;
    return true;
}

inline bool structurally_equal(const ArchElement& a, const ArchElement& b) {
    if (a.name != b.name || a.stereotypes.size() != b.stereotypes.size() || a.ports.size() != b.ports.size() ||
        a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.stereotypes.size(); ++i)
        if (!structurally_equal(a.stereotypes[i], b.stereotypes[i])) return false;
    for (size_t i = 0; i < a.ports.size(); ++i)
        if (!structurally_equal(a.ports[i], b.ports[i])) return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    return true;
}

inline bool structurally_equal(const ArchModel& a, const ArchModel& b) {
    if (a.name != b.name || a.kind != b.kind || a.level != b.level || a.used_profiles != b.used_profiles ||
        a.elements.size() != b.elements.size() || a.connectors.size() != b.connectors.size())
        return false;
    for (size_t i = 0; i < a.elements.size(); ++i)
        if (!structurally_equal(a.elements[i], b.elements[i])) return false;
    for (size_t i = 0; i < a.connectors.size(); ++i) {
        const auto& ca = a.connectors[i];
        const auto& cb = b.connectors[i];
        if (ca.source != cb.source || ca.target != cb.target ||
            !structurally_equal(ca.stereotype, cb.stereotype))
            return false;
    }
    return true;
}

inline bool structurally_equal(const Requirement& a, const Requirement& b) {
    return a.id == b.id && a.level == b.level && a.type == b.type && a.text == b.text &&
           a.rationale == b.rationale && a.justification == b.justification &&
           a.min_cut_order == b.min_cut_order;
}

inline bool structurally_equal(const TraceLink& a, const TraceLink& b) {
    return a.source.text == b.source.text && a.source.is_path == b.source.is_path &&
           a.target.text == b.target.text && a.target.is_path == b.target.is_path && a.type == b.type;
}

inline bool structurally_equal(const RequirementSet& a, const RequirementSet& b) {
    if (a.requirements.size() != b.requirements.size() || a.links.size() != b.links.size()) return false;
    for (size_t i = 0; i < a.requirements.size(); ++i)
        if (!structurally_equal(a.requirements[i], b.requirements[i])) return false;
    for (size_t i = 0; i < a.links.size(); ++i)
        if (!structurally_equal(a.links[i], b.links[i])) return false;
    return true;
}

inline bool structurally_equal(const FpmExpr& a, const FpmExpr& b) {
    if (a.kind != b.kind || a.path != b.path) return false;
    if (a.kind == FpmExpr::Kind::Gate) {
        if (a.gate != b.gate || a.children.size() != b.children.size()) return false;
        for (size_t i = 0; i < a.children.size(); ++i)
            if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

inline bool structurally_equal(const Fpm& a, const Fpm& b) {
    if (a.name != b.name || a.model_name != b.model_name || a.components.size() != b.components.size() ||
        a.edges != b.edges || a.top_events.size() != b.top_events.size())
        return false;
    for (size_t i = 0; i < a.components.size(); ++i) {
        const auto& ca = a.components[i];
        const auto& cb = b.components[i];
        if (ca.path != cb.path || ca.ports.size() != cb.ports.size() ||
            ca.basic_events.size() != cb.basic_events.size() ||
            ca.out_failures.size() != cb.out_failures.size())
            return false;
        for (size_t k = 0; k < ca.ports.size(); ++k)
            if (ca.ports[k].name != cb.ports[k].name || ca.ports[k].direction != cb.ports[k].direction)
                return false;
        for (size_t k = 0; k < ca.basic_events.size(); ++k)
            if (ca.basic_events[k].name != cb.basic_events[k].name ||
                ca.basic_events[k].rate != cb.basic_events[k].rate)
                return false;
        for (size_t k = 0; k < ca.out_failures.size(); ++k)
            if (ca.out_failures[k].port != cb.out_failures[k].port ||
                ca.out_failures[k].name != cb.out_failures[k].name ||
                !structurally_equal(*ca.out_failures[k].expr, *cb.out_failures[k].expr))
                return false;
    }
    for (size_t i = 0; i < a.top_events.size(); ++i)
        if (a.top_events[i].name != b.top_events[i].name ||
            !structurally_equal(*a.top_events[i].expr, *b.top_events[i].expr))
            return false;
    return true;
}

}  // namespace archkit
