#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "archkit/cutsets.hpp"
#include "archkit/project.hpp"
#include "archkit/serialize.hpp"
#include "archkit/trace.hpp"

namespace archkit {

// ---- function list export -------------------------------------------------------
// The safety hand-off: every atomic function with its group, description, and
// current FDAL, in model declaration order.

struct FunctionListEntry {
    QualifiedPath path;  // model-qualified
    std::string name;
    std::string group;  // enclosing groups, outermost first; empty at top level
    std::string description;
    std::optional<std::string> fdal;
};

inline std::vector<FunctionListEntry> export_function_list(const Project& project) {
    std::vector<FunctionListEntry> out;
    for (const auto& model : project.models) {
        if (model.kind != ModelKind::Functional) continue;
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            if (!has_stereotype(e.stereotypes, "AtomicFunction")) return;
            FunctionListEntry entry;
            entry.path = qualify(model, rel);
            entry.name = e.name;
            if (rel.segments.size() > 1) {
                for (size_t i = 0; i + 1 < rel.segments.size(); ++i) {
                    if (i) entry.group += " / ";
                    entry.group += rel.segments[i];
                }
            }
            if (const Value* v = binding_of(e.stereotypes, "description")) entry.description = value_display(*v);
            if (const Value* v = binding_of(e.stereotypes, "fdal")) entry.fdal = value_display(*v);
            out.push_back(std::move(entry));
        });
    }
    return out;
}

inline std::string render_function_list(const std::vector<FunctionListEntry>& entries) {
    std::ostringstream os;
    os << "function list (" << entries.size() << " functions)\n";
    for (const auto& e : entries) {
        os << "- " << quote_name(e.name) << "\n";
        if (!e.group.empty()) os << "  group: " << e.group << "\n";
        os << "  path: " << e.path.plain() << "\n";
        if (!e.description.empty()) os << "  description: " << e.description << "\n";
        os << "  fdal: " << (e.fdal ? *e.fdal : "unassigned") << "\n";
    }
    return os.str();
}

// ---- cut-set order check ----------------------------------------------------------
// Every FPM top event claimed by a safety requirement must meet that
// requirement's minimum cut set order. Requirements without an explicit
// min_cut_order fall back to 2 when they carry a catastrophic classification:
// no single failure may cause a catastrophic condition.

struct TopEventCheck {
    std::string fpm_name;
    std::string top_event;
    std::vector<std::string> requirement_ids;  // validated_by sources
    std::optional<int> required_order;
    std::optional<int> achieved_order;  // smallest cut set order found
    bool checked = false;
};

struct SafetyCheckResult {
    std::vector<TopEventCheck> checks;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

inline SafetyCheckResult check_against_safety_requirements(const Project& project) {
    SafetyCheckResult result;
    for (const auto& fpm : project.fpms) {
        for (const auto& top : fpm.top_events) {
            TopEventCheck check;
            check.fpm_name = fpm.name;
            check.top_event = top.name;

            QualifiedPath top_path{{fpm.name, top.name}};
            std::optional<int> required;
            for (const auto& l : project.links) {
                if (l.type != LinkType::ValidatedBy || l.source.is_path) continue;
                if (!l.target.is_path || l.target.path != top_path) continue;
                const Requirement* r = project.find_requirement(l.source.text);
                if (!r) continue;
                check.requirement_ids.push_back(r->id);
                std::optional<int> this_req = r->min_cut_order;
                if (!this_req && r->classification == "catastrophic") this_req = 2;
                if (this_req && (!required || *this_req > *required)) required = this_req;
            }
            if (check.requirement_ids.empty()) {
                result.diagnostics.push_back({"SAFE-002", Severity::Info,
                                              "top event '" + fpm.name + "." + top.name +
                                                  "' has no linked safety requirement",
                                              top.span});
                result.checks.push_back(std::move(check));
                continue;
            }
            check.required_order = required;

            CutSetResult cuts = compute_cut_sets(fpm, top.name);
            for (auto& d : cuts.diagnostics) result.diagnostics.push_back(std::move(d));
            if (!cuts.ok()) {
                result.checks.push_back(std::move(check));
                continue;
            }
            check.checked = true;
            if (!cuts.cut_sets.empty()) check.achieved_order = cuts.cut_sets.front().order();
            if (required && check.achieved_order && *check.achieved_order < *required) {
                for (const auto& cs : cuts.cut_sets) {
                    if (cs.order() >= *required) break;
                    std::string events;
                    for (const auto& e : cs.events) {
                        if (!events.empty()) events += ", ";
                        events += e;
                    }
                    std::string kind = cs.order() == 1 ? "single-point failure" : "cut set below required order";
                    result.diagnostics.push_back({"SAFE-001", Severity::Error,
                                                  "top event '" + fpm.name + "." + top.name + "': " + kind +
                                                      " {" + events + "} violates minimum cut set order " +
                                                      std::to_string(*required) + " (required by " +
                                                      check.requirement_ids.front() + ")",
                                                  top.span});
                }
            }
            result.checks.push_back(std::move(check));
        }
    }
    sort_diagnostics(result.diagnostics);
    return result;
}

}  // namespace archkit
