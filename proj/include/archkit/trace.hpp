#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "archkit/project.hpp"

namespace archkit {

// ---- coverage scope ---------------------------------------------------------------

inline bool has_stereotype(const std::vector<AppliedStereotype>& applied, const std::string& name) {
    for (const auto& s : applied)
        if (s.name == name) return true;
    return false;
}

// Elements that must carry an inbound satisfied_by link: atomic functions,
// software/hardware items, and leaf LRUs.
inline bool in_coverage_scope(const ArchModel& model, const ArchElement& e) {
    if (model.kind == ModelKind::Functional) return has_stereotype(e.stereotypes, "AtomicFunction");
    if (has_stereotype(e.stereotypes, "Software_Item") || has_stereotype(e.stereotypes, "Hardware_Item"))
        return true;
    return has_stereotype(e.stereotypes, "LRU") && e.is_leaf();
}

inline bool has_inbound_link(const Project& project, const QualifiedPath& full_path, LinkType type) {
    for (const auto& l : project.links)
        if (l.type == type && l.target.is_path && l.target.path == full_path) return true;
    return false;
}

// ---- trace chains -----------------------------------------------------------------

struct ChainNode {
    bool is_requirement = false;
    std::string requirement_id;
    QualifiedPath path;  // model-qualified element path

    std::string display() const { return is_requirement ? requirement_id : path.plain(); }
    std::string key() const { return is_requirement ? "req:" + requirement_id : "path:" + path.plain(); }

    bool operator==(const ChainNode&) const = default;
};

enum class TraceDirection { Backward, Forward };

struct TraceChains {
    std::vector<std::vector<ChainNode>> chains;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

namespace detail {

// Upstream neighbours along the chain edges: refines climbs the requirement
// tree, satisfied_by steps from an element to its requirement, allocated_to
// steps from a physical element to the function (or from an item requirement
// to its element).
inline std::vector<ChainNode> chain_neighbours(const Project& project, const ChainNode& node, bool upstream) {
    std::vector<ChainNode> out;
    auto add_req = [&](const std::string& id) { out.push_back({true, id, {}}); };
    auto add_elem = [&](const QualifiedPath& p) { out.push_back({false, {}, p}); };

    for (const auto& l : project.links) {
        switch (l.type) {
            case LinkType::SatisfiedBy:
                // downstream: requirement -> element
                if (upstream) {
                    if (!node.is_requirement && l.target.is_path && l.target.path == node.path)
                        add_req(l.source.text);
                } else {
                    if (node.is_requirement && !l.source.is_path && l.source.text == node.requirement_id)
                        add_elem(l.target.path);
                }
                break;
            case LinkType::Refines:
                // downstream: higher requirement -> refining requirement
                if (upstream) {
                    if (node.is_requirement && !l.source.is_path && l.source.text == node.requirement_id)
                        add_req(l.target.text);
                } else {
                    if (node.is_requirement && !l.target.is_path && l.target.text == node.requirement_id)
                        add_req(l.source.text);
                }
                break;
            case LinkType::AllocatedTo:
                if (l.source.is_path) {
                    // downstream: functional element -> physical element
                    if (upstream) {
                        if (!node.is_requirement && l.target.path == node.path) add_elem(l.source.path);
                    } else {
                        if (!node.is_requirement && l.source.path == node.path) add_elem(l.target.path);
                    }
                } else {
                    // downstream: element -> requirement allocated to it
                    if (upstream) {
                        if (node.is_requirement && l.source.text == node.requirement_id)
                            add_elem(l.target.path);
                    } else {
                        if (!node.is_requirement && l.target.is_path && l.target.path == node.path)
                            add_req(l.source.text);
                    }
                }
                break;
            default:
                break;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ChainNode& a, const ChainNode& b) { return a.key() < b.key(); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

// Chains from the L0 roots down to the artifact (Backward) or from the
// artifact to the lowest level (Forward). Cycles are reported, not traversed.
inline TraceChains trace_chain(const Project& project, const ArtifactRef& ref,
                               TraceDirection direction = TraceDirection::Backward) {
    TraceChains out;
    ResolvedArtifact art = resolve_artifact(project, ref);
    if (!art) {
        out.diagnostics.push_back(
            {"TRACE-001", Severity::Error, "artifact '" + ref.text + "' does not resolve", {}});
        return out;
    }
    ChainNode start;
    if (art.kind == ResolvedArtifact::Kind::Requirement) {
        start.is_requirement = true;
        start.requirement_id = art.requirement->id;
    } else if (art.kind == ResolvedArtifact::Kind::Element) {
        start.path = art.path;
    } else {
        out.diagnostics.push_back({"TRACE-002", Severity::Error,
                                   "trace chains cover requirements and model elements, not '" + ref.text + "'",
                                   {}});
        return out;
    }

    bool upstream = direction == TraceDirection::Backward;
    std::vector<ChainNode> stack{start};
    std::set<std::string> on_path{start.key()};
    bool cycle = false;

    std::function<void(const ChainNode&)> dfs = [&](const ChainNode& node) {
        std::vector<ChainNode> next = detail::chain_neighbours(project, node, upstream);
        if (next.empty()) {
            std::vector<ChainNode> chain = stack;
            if (upstream) std::reverse(chain.begin(), chain.end());
            out.chains.push_back(std::move(chain));
            return;
        }
        for (const auto& n : next) {
            if (on_path.count(n.key())) {
                cycle = true;
                out.diagnostics.push_back({"TRACE-003", Severity::Error,
                                           "trace link cycle through '" + n.display() + "'", {}});
                continue;
            }
            stack.push_back(n);
            on_path.insert(n.key());
            dfs(n);
            on_path.erase(n.key());
            stack.pop_back();
        }
    };
    dfs(start);
    if (cycle) out.chains.clear();
    return out;
}

// ---- coverage -------------------------------------------------------------------------

inline CoverageReport coverage_report(const Project& project) {
    CoverageReport report;
    for (const auto& model : project.models) {
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            if (!in_coverage_scope(model, e)) return;
            ++report.coverage_scope_size;
            QualifiedPath full = qualify(model, rel);
            if (has_inbound_link(project, full, LinkType::SatisfiedBy))
                ++report.covered_elements;
            else
                report.uncovered_elements.push_back(std::move(full));
        });
    }
    report.requirement_count = static_cast<int>(project.requirements.size());
    for (const auto& r : project.requirements) {
        if (r.level == "item" || r.level == "test" || r.type == ReqType::Assumption) continue;
        bool downstream = false;
        for (const auto& l : project.links) {
            if (l.type == LinkType::SatisfiedBy && !l.source.is_path && l.source.text == r.id) downstream = true;
            if (l.type == LinkType::Refines && !l.target.is_path && l.target.text == r.id) downstream = true;
        }
        if (!downstream) report.dangling_requirements.push_back(r.id);
    }
    std::sort(report.uncovered_elements.begin(), report.uncovered_elements.end());
    std::sort(report.dangling_requirements.begin(), report.dangling_requirements.end());
    return report;
}

// ---- derived/assumption audit ------------------------------------------------------------

inline bool links_to_physical_artifact(const Project& project, const Requirement& r) {
    for (const auto& l : project.links) {
        if (l.source.is_path || l.source.text != r.id) continue;
        if (!l.target.is_path) continue;
        ResolvedArtifact t = resolve_artifact(project, l.target);
        if ((t.kind == ResolvedArtifact::Kind::Element || t.kind == ResolvedArtifact::Kind::Port) &&
            t.model->kind == ModelKind::Physical)
            return true;
    }
    return false;
}

inline std::vector<Diagnostic> audit_derived_and_assumptions(const Project& project) {
    std::vector<Diagnostic> out;
    for (const auto& r : project.requirements) {
        bool has_justified_by = false;
        bool has_validated_by = false;
        for (const auto& l : project.links) {
            if (l.source.is_path || l.source.text != r.id) continue;
            if (l.type == LinkType::JustifiedBy) has_justified_by = true;
            if (l.type == LinkType::ValidatedBy) has_validated_by = true;
        }
        if (r.type == ReqType::Derived) {
            if (!r.justification && !has_justified_by) {
                out.push_back({"R-DRV-001", Severity::Error,
                               "derived requirement '" + r.id + "' has no justification", r.span});
            }
            if (!links_to_physical_artifact(project, r)) {
                out.push_back({"R-DRV-001", Severity::Error,
                               "derived requirement '" + r.id +
                                   "' has no link to a physical-architecture artifact",
                               r.span});
            }
        }
        if (r.type == ReqType::Assumption && !r.justification) {
            out.push_back({"R-ASM-001", Severity::Error,
                           "assumption '" + r.id + "' has no justification", r.span});
        }
        if ((r.type == ReqType::Derived || r.type == ReqType::Assumption) && !has_validated_by) {
            out.push_back({"R-VAL-001", Severity::Error,
                           (r.type == ReqType::Derived ? std::string("derived requirement '")
                                                       : std::string("assumption '")) +
                               r.id + "' has no validated_by test link",
                           r.span});
        }
    }
    sort_diagnostics(out);
    return out;
}

}  // namespace archkit
