#pragma once

#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "archkit/project.hpp"
#include "archkit/serialize.hpp"
#include "archkit/trace.hpp"

namespace archkit {

enum class RuleCategory { Process, Model };

inline const char* to_string(RuleCategory c) { return c == RuleCategory::Process ? "process" : "model"; }

struct Rule {
    std::string code;
    RuleCategory category = RuleCategory::Process;
    Severity default_severity = Severity::Error;
    std::string description;
    std::function<void(const Project&, std::vector<Diagnostic>&)> check;
};

struct RuleSelection {
    enum class Mode { All, Category, Codes };
    Mode mode = Mode::All;
    RuleCategory category = RuleCategory::Process;
    std::vector<std::string> codes;

    static RuleSelection all() { return {}; }
    static RuleSelection of_category(RuleCategory c) { return {Mode::Category, c, {}}; }
    static RuleSelection of_codes(std::vector<std::string> codes) {
        return {Mode::Codes, RuleCategory::Process, std::move(codes)};
    }
};

struct RuleRunResult {
    std::vector<Diagnostic> diagnostics;          // sorted by (file, line, column, code)
    std::map<std::string, int> per_rule_counts;   // every executed rule, zero included
    int error_count = 0;
    int warning_count = 0;
    bool selection_ok = true;                     // false on unknown rule code

    bool clean() const { return error_count == 0; }
};

// ---- helpers -------------------------------------------------------------------------

// Declaration lookup across every loaded profile.
inline const Stereotype* find_stereotype_decl(const Project& project, const std::string& name) {
    for (const auto& p : project.profiles)
        if (const Stereotype* s = p.find(name)) return s;
    return nullptr;
}

// True when `applied` names `target` or a stereotype that (transitively)
// extends it.
inline bool stereotype_is_a(const Project& project, const std::string& applied, const std::string& target) {
    std::string cur = applied;
    for (int guard = 0; guard < 64; ++guard) {
        if (cur == target) return true;
        const Stereotype* s = find_stereotype_decl(project, cur);
        if (!s || !s->extends) return false;
        cur = *s->extends;
    }
    return false;
}

inline bool carries_stereotype(const Project& project, const std::vector<AppliedStereotype>& applied,
                               const std::string& target) {
    for (const auto& s : applied)
        if (stereotype_is_a(project, s.name, target)) return true;
    return false;
}

namespace detail {

inline bool port_is_connected(const ArchModel& model, const QualifiedPath& elem_rel, const std::string& port) {
    for (const auto& c : model.connectors) {
        auto matches = [&](const QualifiedPath& end) {
            if (end.segments.size() != elem_rel.segments.size() + 1) return false;
            for (size_t i = 0; i < elem_rel.segments.size(); ++i)
                if (end.segments[i] != elem_rel.segments[i]) return false;
            return end.segments.back() == port;
        };
        if (matches(c.source) || matches(c.target)) return true;
    }
    return false;
}

// Union-find over "<model>.<element path>" keys; elements are unioned with
// their ancestors (containment implies co-location) and across connectors.
class ConnectivityIndex {
   public:
    explicit ConnectivityIndex(const ArchModel& model) {
        for_each_element(model, [&](const ArchElement&, const QualifiedPath& rel) {
            std::string key = make_key(model.name, rel);
            parent_.emplace(key, key);
            if (rel.segments.size() > 1) {
                QualifiedPath up{{rel.segments.begin(), rel.segments.end() - 1}};
                unite(key, make_key(model.name, up));
            }
        });
        for (const auto& c : model.connectors) {
            PortRef s = find_port(model, c.source);
            PortRef t = find_port(model, c.target);
            if (s && t) unite(make_key(model.name, s.element_path), make_key(model.name, t.element_path));
        }
    }

    static std::string make_key(const std::string& model_name, const QualifiedPath& rel) {
        return model_name + "." + rel.plain();
    }

    bool connected(const std::string& a, const std::string& b) {
        if (!parent_.count(a) || !parent_.count(b)) return false;
        return find(a) == find(b);
    }

   private:
    std::map<std::string, std::string> parent_;

    std::string find(const std::string& k) {
        std::string cur = k;
        while (parent_.at(cur) != cur) cur = parent_.at(cur);
        return cur;
    }
    void unite(const std::string& a, const std::string& b) {
        if (!parent_.count(a) || !parent_.count(b)) return;
        std::string ra = find(a), rb = find(b);
        if (ra != rb) parent_[ra] = rb;
    }
};

}  // namespace detail

// ---- built-in rules ---------------------------------------------------------------------

namespace builtin_rules {

inline void p_trace_001(const Project& project, std::vector<Diagnostic>& out) {
    for (const auto& model : project.models) {
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            if (!in_coverage_scope(model, e)) return;
            QualifiedPath full = qualify(model, rel);
            if (!has_inbound_link(project, full, LinkType::SatisfiedBy)) {
                out.push_back({"P-TRACE-001", Severity::Error,
                               "'" + full.plain() + "' has no inbound satisfied_by link", e.span});
            }
        });
    }
}

inline void p_name_001(const Project& project, std::vector<Diagnostic>& out) {
    for (const auto& [stereo, pattern] : project.manifest.nomenclature) {
        std::regex re;
        try {
            re = std::regex(pattern);
        } catch (const std::regex_error&) {
            out.push_back({"P-NAME-001", Severity::Error,
                           "invalid nomenclature regex for stereotype '" + stereo + "'", project.manifest.span});
            continue;
        }
        for (const auto& model : project.models) {
            for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
                if (!carries_stereotype(project, e.stereotypes, stereo)) return;
                if (!std::regex_match(e.name, re)) {
                    out.push_back({"P-NAME-001", Severity::Warning,
                                   "'" + qualify(model, rel).plain() + "' does not match the nomenclature '" +
                                       pattern + "' for stereotype '" + stereo + "'",
                                   e.span});
                }
            });
        }
    }
}

inline void p_attr_001(const Project& project, std::vector<Diagnostic>& out) {
    ProfileSet profiles = project.profile_set();
    auto check_applied = [&](const std::vector<AppliedStereotype>& applied, const std::string& what,
                             const SourceSpan& span) {
        for (const auto& a : applied) {
            auto eff = profiles.resolve(a.name);
            if (!eff) continue;
            for (const auto& def : eff->attributes) {
                if (def.required && !a.binding(def.name)) {
                    out.push_back({"P-ATTR-001", Severity::Error,
                                   what + " is missing required attribute '" + def.name + "' of stereotype '" +
                                       a.name + "'",
                                   span});
                }
            }
        }
    };
    for (const auto& model : project.models) {
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            QualifiedPath full = qualify(model, rel);
            check_applied(e.stereotypes, "'" + full.plain() + "'", e.span);
            for (const auto& p : e.ports)
                check_applied(p.stereotypes, "port '" + full.plain() + "." + p.name + "'", p.span);
        });
        for (const auto& c : model.connectors) {
            if (c.stereotype.name.empty()) continue;
            std::vector<AppliedStereotype> one{c.stereotype};
            check_applied(one, "connector '" + c.source.plain() + " -> " + c.target.plain() + "'", c.span);
        }
    }
}

inline void p_conn_001(const Project& project, std::vector<Diagnostic>& out) {
    for (const auto& model : project.models) {
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            for (const auto& p : e.ports) {
                if (detail::port_is_connected(model, rel, p.name)) continue;
                const Value* just = binding_of(p.stereotypes, "justification");
                if (just && !value_display(*just).empty()) continue;
                out.push_back({"P-CONN-001", Severity::Warning,
                               "port '" + qualify(model, rel).plain() + "." + p.name +
                                   "' is unconnected and carries no justification",
                               p.span});
            }
        });
    }
}

inline void p_alloc_001(const Project& project, std::vector<Diagnostic>& out) {
    bool physical_present = false;
    for (const auto& m : project.models)
        if (m.kind == ModelKind::Physical) physical_present = true;
    if (!physical_present) return;
    for (const auto& model : project.models) {
        if (model.kind != ModelKind::Functional) continue;
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            if (!has_stereotype(e.stereotypes, "AtomicFunction")) return;
            QualifiedPath full = qualify(model, rel);
            if (allocations_of_function(project, full).empty()) {
                out.push_back({"P-ALLOC-001", Severity::Error,
                               "function '" + full.plain() + "' is not allocated to any physical element",
                               e.span});
            }
        });
    }
}

// Shared by M-PORT-001 and the endpoint_must_be custom constraint.
inline void check_endpoints(const Project& project, const ArchModel& model, const ArchConnector& conn,
                            const std::string& constraint, const std::string& code,
                            std::vector<Diagnostic>& out) {
    PortRef src = find_port(model, conn.source);
    PortRef dst = find_port(model, conn.target);
    if (!src || !dst) return;  // load errors cover unresolved endpoints
    bool src_ok = carries_stereotype(project, src.port->stereotypes, constraint);
    bool dst_ok = carries_stereotype(project, dst.port->stereotypes, constraint);
    if (src_ok && dst_ok) return;
    Diagnostic d{code, Severity::Error,
                 "connector '" + conn.source.plain() + " -> " + conn.target.plain() + "' (" +
                     conn.stereotype.name + ") requires both endpoints to carry '" + constraint + "'",
                 conn.span};
    d.related.push_back(src.port->span);
    d.related.push_back(dst.port->span);
    out.push_back(std::move(d));
}

inline void m_port_001(const Project& project, std::vector<Diagnostic>& out) {
    ProfileSet profiles = project.profile_set();
    for (const auto& model : project.models) {
        for (const auto& conn : model.connectors) {
            if (conn.stereotype.name.empty()) continue;
            auto eff = profiles.resolve(conn.stereotype.name);
            if (!eff || !eff->endpoint_constraint) continue;
            check_endpoints(project, model, conn, *eff->endpoint_constraint, "M-PORT-001", out);
        }
    }
}

inline void m_dir_001(const Project& project, std::vector<Diagnostic>& out) {
    ProfileSet profiles = project.profile_set();
    for (const auto& model : project.models) {
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            for (const auto& p : e.ports) {
                if (p.direction != PortDirection::InOut) continue;
                bool bus = false;
                for (const auto& s : p.stereotypes) {
                    auto eff = profiles.resolve(s.name);
                    if (eff && eff->bidirectional) bus = true;
                }
                if (!bus) {
                    out.push_back({"M-DIR-001", Severity::Error,
                                   "port '" + qualify(model, rel).plain() + "." + p.name +
                                       "' is inout but carries no bus-class (bidirectional) stereotype",
                                   p.span});
                }
            }
        });
        for (const auto& conn : model.connectors) {
            PortRef src = find_port(model, conn.source);
            PortRef dst = find_port(model, conn.target);
            if (!src || !dst) continue;
            if (src.port->direction == PortDirection::In) {
                out.push_back({"M-DIR-001", Severity::Error,
                               "connector source '" + conn.source.plain() + "' is an in port", conn.span});
            }
            if (dst.port->direction == PortDirection::Out) {
                out.push_back({"M-DIR-001", Severity::Error,
                               "connector target '" + conn.target.plain() + "' is an out port", conn.span});
            }
        }
    }
}

inline void m_stereo_001(const Project& project, std::vector<Diagnostic>& out) {
    ProfileSet profiles = project.profile_set();
    auto count_concrete = [&](const std::vector<AppliedStereotype>& applied, const std::string& what,
                              const SourceSpan& span) {
        int concrete = 0;
        for (const auto& a : applied) {
            auto eff = profiles.resolve(a.name);
            if (eff && eff->abstract_) {
                out.push_back({"M-STEREO-001", Severity::Error,
                               what + " applies abstract stereotype '" + a.name + "'", span});
            } else {
                ++concrete;
            }
        }
        if (concrete != 1) {
            out.push_back({"M-STEREO-001", Severity::Error,
                           what + " must carry exactly one concrete stereotype (found " +
                               std::to_string(concrete) + ")",
                           span});
        }
    };
    for (const auto& model : project.models) {
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            QualifiedPath full = qualify(model, rel);
            count_concrete(e.stereotypes, "'" + full.plain() + "'", e.span);
            for (const auto& p : e.ports)
                count_concrete(p.stereotypes, "port '" + full.plain() + "." + p.name + "'", p.span);
        });
        for (const auto& conn : model.connectors) {
            std::vector<AppliedStereotype> one;
            if (!conn.stereotype.name.empty()) one.push_back(conn.stereotype);
            count_concrete(one, "connector '" + conn.source.plain() + " -> " + conn.target.plain() + "'",
                           conn.span);
        }
    }
}

inline void m_exch_001(const Project& project, std::vector<Diagnostic>& out) {
    // One connectivity index per physical model.
    std::map<std::string, detail::ConnectivityIndex> indices;
    for (const auto& m : project.models)
        if (m.kind == ModelKind::Physical) indices.emplace(m.name, detail::ConnectivityIndex(m));

    for (const auto& model : project.models) {
        if (model.kind != ModelKind::Functional) continue;
        for (const auto& conn : model.connectors) {
            PortRef src = find_port(model, conn.source);
            PortRef dst = find_port(model, conn.target);
            if (!src || !dst) continue;
            QualifiedPath src_full = qualify(model, src.element_path);
            QualifiedPath dst_full = qualify(model, dst.element_path);
            auto src_allocs = allocations_of_function(project, src_full);
            auto dst_allocs = allocations_of_function(project, dst_full);
            if (src_allocs.empty() || dst_allocs.empty()) continue;  // P-ALLOC-001 reports these
            bool realized = false;
            for (const auto* a : src_allocs) {
                for (const auto* b : dst_allocs) {
                    if (a->physical_path == b->physical_path) {
                        realized = true;
                        continue;
                    }
                    if (a->physical_path.segments[0] != b->physical_path.segments[0]) continue;
                    auto it = indices.find(a->physical_path.segments[0]);
                    if (it == indices.end()) continue;
                    QualifiedPath a_rel{{a->physical_path.segments.begin() + 1, a->physical_path.segments.end()}};
                    QualifiedPath b_rel{{b->physical_path.segments.begin() + 1, b->physical_path.segments.end()}};
                    if (it->second.connected(
                            detail::ConnectivityIndex::make_key(a->physical_path.segments[0], a_rel),
                            detail::ConnectivityIndex::make_key(b->physical_path.segments[0], b_rel)))
                        realized = true;
                }
            }
            if (!realized) {
                std::string label = conn.stereotype.name;
                if (const Value* v = conn.stereotype.binding("label")) label = value_display(*v);
                out.push_back({"M-EXCH-001", Severity::Error,
                               "functional exchange '" + label + "' (" + src_full.plain() + " -> " +
                                   dst_full.plain() +
                                   ") is not realized by any physical connector path between the allocated "
                                   "components",
                               conn.span});
            }
        }
    }
}

}  // namespace builtin_rules

// ---- engine ----------------------------------------------------------------------------

class RuleEngine {
   public:
    RuleEngine() {
        add({"P-TRACE-001", RuleCategory::Process, Severity::Error,
             "atomic functions and item components carry an inbound satisfied_by link",
             builtin_rules::p_trace_001});
        add({"P-NAME-001", RuleCategory::Process, Severity::Warning,
             "element names match the configured per-stereotype nomenclature", builtin_rules::p_name_001});
        add({"P-ATTR-001", RuleCategory::Process, Severity::Error,
             "required stereotype attributes are set", builtin_rules::p_attr_001});
        add({"P-CONN-001", RuleCategory::Process, Severity::Warning,
             "unconnected ports carry a justification", builtin_rules::p_conn_001});
        add({"P-ALLOC-001", RuleCategory::Process, Severity::Error,
             "every atomic function is allocated to a physical element", builtin_rules::p_alloc_001});
        add({"M-PORT-001", RuleCategory::Model, Severity::Error,
             "connector endpoints carry the connector's endpoint stereotype", builtin_rules::m_port_001});
        add({"M-DIR-001", RuleCategory::Model, Severity::Error,
             "directed connectors go out to in; inout only on bus-class ports", builtin_rules::m_dir_001});
        add({"M-STEREO-001", RuleCategory::Model, Severity::Error,
             "every component, port, and connector carries exactly one concrete stereotype",
             builtin_rules::m_stereo_001});
        add({"M-EXCH-001", RuleCategory::Model, Severity::Error,
             "functional exchanges across allocations are realized by physical connectors",
             builtin_rules::m_exch_001});
        // Derived-requirement and assumption audits run as process rules so a
        // single check pass covers them.
        add({"R-DRV-001", RuleCategory::Process, Severity::Error,
             "derived requirements are justified and linked to the physical architecture",
             [](const Project& p, std::vector<Diagnostic>& out) {
                 for (auto& d : audit_derived_and_assumptions(p))
                     if (d.code == "R-DRV-001") out.push_back(std::move(d));
             }});
        add({"R-ASM-001", RuleCategory::Process, Severity::Error, "assumptions carry a justification",
             [](const Project& p, std::vector<Diagnostic>& out) {
                 for (auto& d : audit_derived_and_assumptions(p))
                     if (d.code == "R-ASM-001") out.push_back(std::move(d));
             }});
        add({"R-VAL-001", RuleCategory::Process, Severity::Error,
             "derived requirements and assumptions carry validated_by test links",
             [](const Project& p, std::vector<Diagnostic>& out) {
                 for (auto& d : audit_derived_and_assumptions(p))
                     if (d.code == "R-VAL-001") out.push_back(std::move(d));
             }});
    }

    const Rule* find(const std::string& code) const {
        for (const auto& r : rules_)
            if (r.code == code) return &r;
        return nullptr;
    }

    struct RegisterResult {
        std::optional<std::string> code;
        std::vector<Diagnostic> diagnostics;
        bool ok() const { return code.has_value(); }
    };

    // Validates a declarative spec against the loaded profiles and installs it.
    RegisterResult register_custom_rule(const Project& project, const CustomRuleSpec& spec) {
        RegisterResult result;
        if (find(spec.code)) {
            result.diagnostics.push_back(
                {"RULE-001", Severity::Error, "duplicate rule code '" + spec.code + "'", spec.span});
            return result;
        }
        const Stereotype* selector = find_stereotype_decl(project, spec.selector_stereotype);
        if (!selector) {
            result.diagnostics.push_back({"RULE-002", Severity::Error,
                                          "rule '" + spec.code + "' selects unknown stereotype '" +
                                              spec.selector_stereotype + "'",
                                          spec.span});
            return result;
        }
        using C = CustomRuleSpec::Constraint;
        if (spec.constraint == C::EndpointMustBe && !find_stereotype_decl(project, spec.param)) {
            result.diagnostics.push_back({"RULE-002", Severity::Error,
                                          "rule '" + spec.code + "' references unknown stereotype '" +
                                              spec.param + "'",
                                          spec.span});
            return result;
        }
        if (spec.constraint == C::AttributeRequired || spec.constraint == C::AttributeMatches) {
            bool found = false;
            for (const auto& p : project.profiles) {
                if (!p.find(spec.selector_stereotype)) continue;
                auto eff = resolve_effective_stereotype(p, spec.selector_stereotype);
                if (eff.ok() && eff.stereotype->find_attribute(spec.param)) found = true;
            }
            if (!found) {
                result.diagnostics.push_back({"RULE-003", Severity::Error,
                                              "rule '" + spec.code + "': stereotype '" +
                                                  spec.selector_stereotype + "' has no attribute '" + spec.param +
                                                  "'",
                                              spec.span});
                return result;
            }
        }
        if (spec.constraint == C::AttributeMatches) {
            try {
                std::regex re(spec.regex);
            } catch (const std::regex_error&) {
                result.diagnostics.push_back({"RULE-004", Severity::Error,
                                              "rule '" + spec.code + "' has an invalid regex", spec.span});
                return result;
            }
        }
        add(make_custom_rule(spec));
        result.code = spec.code;
        return result;
    }

    // Installs every rules{} declaration carried by the project's profiles.
    std::vector<Diagnostic> register_project_rules(const Project& project) {
        std::vector<Diagnostic> out;
        for (const auto& spec : project.custom_rules) {
            auto r = register_custom_rule(project, spec);
            for (auto& d : r.diagnostics) out.push_back(std::move(d));
        }
        sort_diagnostics(out);
        return out;
    }

    RuleRunResult run(const Project& project, const RuleSelection& selection = RuleSelection::all()) const {
        RuleRunResult result;
        std::vector<const Rule*> selected;
        switch (selection.mode) {
            case RuleSelection::Mode::All:
                for (const auto& r : rules_) selected.push_back(&r);
                break;
            case RuleSelection::Mode::Category:
                for (const auto& r : rules_)
                    if (r.category == selection.category) selected.push_back(&r);
                break;
            case RuleSelection::Mode::Codes:
                for (const auto& code : selection.codes) {
                    const Rule* r = find(code);
                    if (!r) {
                        result.selection_ok = false;
                        result.diagnostics.push_back(
                            {"RULE-005", Severity::Error, "unknown rule code '" + code + "'", {}});
                        continue;
                    }
                    selected.push_back(r);
                }
                break;
        }
        for (const Rule* rule : selected) {
            std::vector<Diagnostic> findings;
            rule->check(project, findings);
            Severity severity = rule->default_severity;
            auto it = project.manifest.severity_overrides.find(rule->code);
            if (it != project.manifest.severity_overrides.end()) severity = it->second;
            for (auto& d : findings) {
                d.severity = severity;
                result.diagnostics.push_back(std::move(d));
            }
            result.per_rule_counts[rule->code] = static_cast<int>(findings.size());
        }
        sort_diagnostics(result.diagnostics);
        for (const auto& d : result.diagnostics) {
            if (d.severity == Severity::Error) ++result.error_count;
            if (d.severity == Severity::Warning) ++result.warning_count;
        }
        return result;
    }

    std::vector<Rule> const& rules() const { return rules_; }

   private:
    std::vector<Rule> rules_;

    void add(Rule r) { rules_.push_back(std::move(r)); }

    Rule make_custom_rule(const CustomRuleSpec& spec) {
        Rule rule;
        rule.code = spec.code;
        rule.category = RuleCategory::Model;
        rule.default_severity = Severity::Error;
        rule.description = "custom rule on stereotype '" + spec.selector_stereotype + "'";
        using C = CustomRuleSpec::Constraint;
        CustomRuleSpec s = spec;
        rule.check = [s](const Project& project, std::vector<Diagnostic>& out) {
            switch (s.constraint) {
                case C::EndpointMustBe:
                    for (const auto& model : project.models) {
                        for (const auto& conn : model.connectors) {
                            if (conn.stereotype.name.empty() ||
                                !stereotype_is_a(project, conn.stereotype.name, s.selector_stereotype))
                                continue;
                            builtin_rules::check_endpoints(project, model, conn, s.param, s.code, out);
                        }
                    }
                    break;
                case C::AttributeRequired:
                    for (const auto& model : project.models) {
                        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
                            if (!carries_stereotype(project, e.stereotypes, s.selector_stereotype)) return;
                            const Value* v = binding_of(e.stereotypes, s.param);
                            if (!v || value_display(*v).empty()) {
                                out.push_back({s.code, Severity::Error,
                                               "'" + qualify(model, rel).plain() + "' has no value for attribute '" +
                                                   s.param + "'",
                                               e.span});
                            }
                        });
                    }
                    break;
                case C::AttributeMatches: {
                    std::regex re(s.regex);
                    for (const auto& model : project.models) {
                        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
                            if (!carries_stereotype(project, e.stereotypes, s.selector_stereotype)) return;
                            const Value* v = binding_of(e.stereotypes, s.param);
                            if (v && !std::regex_match(value_display(*v), re)) {
                                out.push_back({s.code, Severity::Error,
                                               "'" + qualify(model, rel).plain() + "' attribute '" + s.param +
                                                   "' value '" + value_display(*v) + "' does not match '" +
                                                   s.regex + "'",
                                               e.span});
                            }
                        });
                    }
                    break;
                }
                case C::MustHaveInboundLink:
                    for (const auto& model : project.models) {
                        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
                            if (!carries_stereotype(project, e.stereotypes, s.selector_stereotype)) return;
                            QualifiedPath full = qualify(model, rel);
                            if (!has_inbound_link(project, full, s.link_type)) {
                                out.push_back({s.code, Severity::Error,
                                               "'" + full.plain() + "' has no inbound " +
                                                   to_string(s.link_type) + " link",
                                               e.span});
                            }
                        });
                    }
                    break;
                case C::MustBeConnectedOrJustified:
                    for (const auto& model : project.models) {
                        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
                            for (const auto& p : e.ports) {
                                if (!carries_stereotype(project, p.stereotypes, s.selector_stereotype)) continue;
                                if (detail::port_is_connected(model, rel, p.name)) continue;
                                const Value* just = binding_of(p.stereotypes, "justification");
                                if (just && !value_display(*just).empty()) continue;
                                out.push_back({s.code, Severity::Error,
                                               "port '" + qualify(model, rel).plain() + "." + p.name +
                                                   "' is unconnected and carries no justification",
                                               p.span});
                            }
                        });
                    }
                    break;
            }
        };
        return rule;
    }
};

// Convenience entry point: built-ins plus the project's declarative rules.
inline RuleRunResult run_rules(const Project& project, const RuleSelection& selection = RuleSelection::all()) {
    RuleEngine engine;
    std::vector<Diagnostic> reg = engine.register_project_rules(project);
    RuleRunResult result = engine.run(project, selection);
    for (auto& d : reg) result.diagnostics.push_back(std::move(d));
    sort_diagnostics(result.diagnostics);
    result.error_count = 0;
    result.warning_count = 0;
    for (const auto& d : result.diagnostics) {
        if (d.severity == Severity::Error) ++result.error_count;
        if (d.severity == Severity::Warning) ++result.warning_count;
    }
    return result;
}

}  // namespace archkit
