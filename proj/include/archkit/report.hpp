#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "archkit/project.hpp"
#include "archkit/serialize.hpp"
#include "archkit/trace.hpp"

namespace archkit {

// ---- objective compliance -----------------------------------------------------------
// The shipped ledger reconstructs the workflow's ARP4754A coverage claims:
// requirements-process objectives are fully represented, requirements
// completeness and the safety-process hand-off partially, and planning,
// configuration management, process assurance, and certification coordination
// are out of scope by design. Claimed levels are fixed; computed status is
// derived from the loaded project only.

enum class ComplianceLevel { Full, Partial, Omitted };
enum class ComplianceStatus { Substantiated, GapsFound, NotEvaluated };

inline const char* to_string(ComplianceLevel l) {
    switch (l) {
        case ComplianceLevel::Full: return "full";
        case ComplianceLevel::Partial: return "partial";
        case ComplianceLevel::Omitted: return "omitted";
    }
    return "?";
}

inline const char* to_string(ComplianceStatus s) {
    switch (s) {
        case ComplianceStatus::Substantiated: return "substantiated";
        case ComplianceStatus::GapsFound: return "gaps found";
        case ComplianceStatus::NotEvaluated: return "not_evaluated";
    }
    return "?";
}

struct ComplianceRow {
    std::string id;
    std::string title;
    ComplianceLevel level = ComplianceLevel::Full;
    ComplianceStatus status = ComplianceStatus::NotEvaluated;
    std::vector<std::string> evidence;
    std::vector<std::string> gaps;
};

struct ComplianceReport {
    std::string project_name;
    std::vector<ComplianceRow> rows;
};

namespace detail {

inline int count_atomic_functions(const Project& project, int* unlinked) {
    int total = 0;
    for (const auto& model : project.models) {
        if (model.kind != ModelKind::Functional) continue;
        for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
            if (!has_stereotype(e.stereotypes, "AtomicFunction")) return;
            ++total;
            if (unlinked && !has_inbound_link(project, qualify(model, rel), LinkType::SatisfiedBy)) ++*unlinked;
        });
    }
    return total;
}

}  // namespace detail

inline ComplianceReport compliance_report(const Project& project) {
    ComplianceReport report;
    report.project_name = project.name;
    auto add = [&](std::string id, std::string title, ComplianceLevel level) -> ComplianceRow& {
        report.rows.push_back({std::move(id), std::move(title), level});
        return report.rows.back();
    };
    auto finish = [](ComplianceRow& row) {
        row.status = row.gaps.empty() ? ComplianceStatus::Substantiated : ComplianceStatus::GapsFound;
    };

    CoverageReport coverage = coverage_report(project);
    std::vector<Diagnostic> audit = audit_derived_and_assumptions(project);

    {
        auto& row = add("2.1", "Aircraft and system functions are defined", ComplianceLevel::Full);
        int unlinked = 0;
        int functions = detail::count_atomic_functions(project, &unlinked);
        if (functions == 0)
            row.gaps.push_back("no atomic functions modelled");
        else
            row.evidence.push_back(std::to_string(functions) + " atomic functions in the functional architecture");
        if (unlinked > 0)
            row.gaps.push_back(std::to_string(unlinked) + " functions without an inbound satisfied_by link");
        finish(row);
    }
    {
        auto& row = add("2.2", "Functions are allocated to the system architecture", ComplianceLevel::Full);
        if (project.allocations.empty())
            row.gaps.push_back("no functional-to-physical allocations recorded");
        else
            row.evidence.push_back(std::to_string(project.allocations.size()) + " allocations recorded");
        int unallocated = 0;
        for (const auto& model : project.models) {
            if (model.kind != ModelKind::Functional) continue;
            for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
                if (has_stereotype(e.stereotypes, "AtomicFunction") &&
                    allocations_of_function(project, qualify(model, rel)).empty())
                    ++unallocated;
            });
        }
        if (unallocated > 0) row.gaps.push_back(std::to_string(unallocated) + " functions without an allocation");
        finish(row);
    }
    {
        auto& row = add("2.3", "System requirements are developed", ComplianceLevel::Full);
        int system_reqs = 0;
        for (const auto& r : project.requirements)
            if (r.level != "item" && r.level != "test" && r.type != ReqType::Assumption) ++system_reqs;
        if (system_reqs == 0)
            row.gaps.push_back("no system-level requirements captured");
        else
            row.evidence.push_back(std::to_string(system_reqs) + " system-level requirements captured");
        finish(row);
    }
    {
        auto& row = add("2.4", "Assumptions are captured with the requirements", ComplianceLevel::Full);
        int assumptions = 0;
        for (const auto& r : project.requirements)
            if (r.type == ReqType::Assumption) ++assumptions;
        if (assumptions == 0)
            row.gaps.push_back("no assumptions recorded");
        else
            row.evidence.push_back(std::to_string(assumptions) + " assumptions recorded");
        finish(row);
    }
    {
        auto& row = add("2.5", "The system architecture is defined", ComplianceLevel::Full);
        bool found = false;
        for (const auto& m : project.models)
            if (m.kind == ModelKind::Physical && !m.connectors.empty()) found = true;
        if (found)
            row.evidence.push_back("physical architecture with connectors is modelled");
        else
            row.gaps.push_back("no physical architecture with connectors");
        finish(row);
    }
    {
        auto& row = add("2.6", "Requirements are allocated to hardware and software items",
                        ComplianceLevel::Full);
        int item_reqs = 0;
        for (const auto& r : project.requirements)
            if (r.level == "item") ++item_reqs;
        if (item_reqs == 0)
            row.gaps.push_back("no item-level requirements captured");
        else
            row.evidence.push_back(std::to_string(item_reqs) + " item-level requirements captured");
        int uncovered_items = 0;
        for (const auto& model : project.models) {
            if (model.kind != ModelKind::Physical) continue;
            for_each_element(model, [&](const ArchElement& e, const QualifiedPath& rel) {
                if (in_coverage_scope(model, e) &&
                    !has_inbound_link(project, qualify(model, rel), LinkType::SatisfiedBy))
                    ++uncovered_items;
            });
        }
        if (uncovered_items > 0)
            row.gaps.push_back(std::to_string(uncovered_items) + " items without an inbound satisfied_by link");
        finish(row);
    }
    {
        auto& row = add("4.1", "Requirements are complete and correct", ComplianceLevel::Partial);
        row.evidence.push_back("conflict detection is limited to duplicate ids and trace-link cycles");
        if (!project.loaded_clean()) row.gaps.push_back("project loaded with errors");
        finish(row);
    }
    {
        auto& row = add("4.2", "Derived requirements are captured and justified", ComplianceLevel::Full);
        bool clean = true;
        for (const auto& d : audit)
            if (d.code == "R-DRV-001") clean = false;
        if (clean)
            row.evidence.push_back("derived-requirement audit is clean");
        else
            row.gaps.push_back("derived-requirement audit reports findings");
        finish(row);
    }
    {
        auto& row = add("4.3", "Assumptions are justified and validated", ComplianceLevel::Full);
        bool clean = true;
        for (const auto& d : audit)
            if (d.code == "R-ASM-001" || d.code == "R-VAL-001") clean = false;
        if (clean)
            row.evidence.push_back("assumption and validation audit is clean");
        else
            row.gaps.push_back("assumption or validation audit reports findings");
        finish(row);
    }
    {
        auto& row = add("4.4", "Requirements are traceable", ComplianceLevel::Full);
        if (coverage.uncovered_elements.empty() && coverage.dangling_requirements.empty()) {
            row.evidence.push_back("coverage is complete: " + std::to_string(coverage.covered_elements) + "/" +
                                   std::to_string(coverage.coverage_scope_size) + " elements covered");
        } else {
            if (!coverage.uncovered_elements.empty())
                row.gaps.push_back(std::to_string(coverage.uncovered_elements.size()) + " uncovered elements");
            if (!coverage.dangling_requirements.empty())
                row.gaps.push_back(std::to_string(coverage.dangling_requirements.size()) +
                                   " requirements without downstream trace");
        }
        finish(row);
    }
    {
        auto& row = add("5.1.1", "Functional hazard assessment results are integrated",
                        ComplianceLevel::Partial);
        if (project.fha_results.empty())
            row.gaps.push_back("no FHA results imported");
        else
            row.evidence.push_back(std::to_string(project.fha_results.size()) + " failure conditions imported");
        finish(row);
    }
    {
        auto& row = add("5.1.2", "Preliminary system safety assessment inputs are modelled",
                        ComplianceLevel::Partial);
        bool found = false;
        for (const auto& f : project.fpms)
            if (!f.top_events.empty()) found = true;
        if (found)
            row.evidence.push_back("fault propagation model with top events is present");
        else
            row.gaps.push_back("no fault propagation model with a top event");
        finish(row);
    }
    add("3.0", "Development planning", ComplianceLevel::Omitted);
    add("6.0", "Configuration management", ComplianceLevel::Omitted);
    add("7.0", "Process assurance", ComplianceLevel::Omitted);
    add("8.0", "Certification coordination", ComplianceLevel::Omitted);
    return report;
}

inline std::string render_compliance_text(const ComplianceReport& report) {
    std::ostringstream os;
    os << "objective compliance: " << report.project_name << "\n";
    for (const auto& row : report.rows) {
        os << row.id << " " << row.title << "\n";
        os << "  level: " << to_string(row.level) << "\n";
        if (row.level != ComplianceLevel::Omitted) os << "  status: " << to_string(row.status) << "\n";
        for (const auto& e : row.evidence) os << "  evidence: " << e << "\n";
        for (const auto& g : row.gaps) os << "  gap: " << g << "\n";
    }
    return os.str();
}

inline nlohmann::ordered_json compliance_to_json(const ComplianceReport& report) {
    nlohmann::ordered_json j;
    j["project"] = report.project_name;
    j["objectives"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json o;
        o["id"] = row.id;
        o["title"] = row.title;
        o["level"] = to_string(row.level);
        o["status"] = row.level == ComplianceLevel::Omitted ? "not_evaluated" : to_string(row.status);
        o["evidence"] = row.evidence;
        o["gaps"] = row.gaps;
        j["objectives"].push_back(std::move(o));
    }
    return j;
}

// ---- breakdown views ------------------------------------------------------------------

inline std::string render_breakdown_text(const ViewTree& tree) {
    std::ostringstream os;
    os << (tree.kind == ViewKind::FunctionBreakdown ? "function breakdown: " : "physical breakdown: ")
       << tree.model_name << "\n";
    for (const auto& e : tree.entries) {
        os << std::string(static_cast<size_t>(e.depth) * 2, ' ') << "- "
           << quote_name(e.path.segments.back());
        if (!e.stereotypes.empty()) {
            os << " <<";
            for (size_t i = 0; i < e.stereotypes.size(); ++i) {
                if (i) os << ", ";
                os << e.stereotypes[i];
            }
            os << ">>";
        }
        os << "\n";
        for (const auto& [name, value] : e.attributes)
            os << std::string(static_cast<size_t>(e.depth) * 2 + 2, ' ') << name << ": "
               << value_display(value) << "\n";
    }
    return os.str();
}

inline nlohmann::ordered_json breakdown_to_json(const ViewTree& tree) {
    nlohmann::ordered_json j;
    j["model"] = tree.model_name;
    j["view"] = tree.kind == ViewKind::FunctionBreakdown ? "function_breakdown" : "physical_breakdown";
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : tree.entries) {
        nlohmann::ordered_json o;
        o["path"] = e.path.plain();
        o["depth"] = e.depth;
        o["stereotypes"] = e.stereotypes;
        nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
        for (const auto& [name, value] : e.attributes) attrs[name] = value_display(value);
        o["attributes"] = std::move(attrs);
        j["entries"].push_back(std::move(o));
    }
    return j;
}

// ---- trace matrix ------------------------------------------------------------------------

struct TraceMatrixRow {
    std::string source;                                         // requirement id or element path
    std::map<LinkType, std::vector<std::string>> targets;       // per link type, sorted
};

struct TraceMatrix {
    std::vector<TraceMatrixRow> rows;  // requirements by id, then element sources by path
};

inline TraceMatrix trace_matrix(const Project& project) {
    std::map<std::string, TraceMatrixRow> req_rows;
    std::map<std::string, TraceMatrixRow> elem_rows;
    for (const auto& l : project.links) {
        std::string source = l.source.is_path ? l.source.path.plain() : l.source.text;
        auto& rows = l.source.is_path ? elem_rows : req_rows;
        TraceMatrixRow& row = rows[source];
        row.source = source;
        row.targets[l.type].push_back(l.target.is_path ? l.target.path.plain() : l.target.text);
    }
    TraceMatrix matrix;
    for (auto& [_, row] : req_rows) {
        for (auto& [type, targets] : row.targets) std::sort(targets.begin(), targets.end());
        matrix.rows.push_back(std::move(row));
    }
    for (auto& [_, row] : elem_rows) {
        for (auto& [type, targets] : row.targets) std::sort(targets.begin(), targets.end());
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    bool needs_quote = s.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quote) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline const LinkType kMatrixColumns[] = {LinkType::SatisfiedBy,  LinkType::Refines,
                                          LinkType::DerivesFrom,  LinkType::AllocatedTo,
                                          LinkType::ValidatedBy,  LinkType::JustifiedBy};

}  // namespace detail

inline std::string render_trace_matrix_csv(const TraceMatrix& matrix) {
    std::ostringstream os;
    os << "source";
    for (LinkType t : detail::kMatrixColumns) os << "," << to_string(t);
    os << "\r\n";
    for (const auto& row : matrix.rows) {
        os << detail::csv_field(row.source);
        for (LinkType t : detail::kMatrixColumns) {
            os << ",";
            auto it = row.targets.find(t);
            if (it == row.targets.end()) continue;
            std::string cell;
            for (size_t i = 0; i < it->second.size(); ++i) {
                if (i) cell += "; ";
                cell += it->second[i];
            }
            os << detail::csv_field(cell);
        }
        os << "\r\n";
    }
    return os.str();
}

inline nlohmann::ordered_json trace_matrix_to_json(const TraceMatrix& matrix) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : matrix.rows) {
        nlohmann::ordered_json o;
        o["source"] = row.source;
        for (LinkType t : detail::kMatrixColumns) {
            auto it = row.targets.find(t);
            o[to_string(t)] = it == row.targets.end() ? std::vector<std::string>{} : it->second;
        }
        j.push_back(std::move(o));
    }
    return j;
}

// ---- graph export ----------------------------------------------------------------------

namespace detail {

inline std::string dot_id(const QualifiedPath& p) {
    std::string out = "n";
    for (const auto& s : p.segments) {
        out += "_";
        for (char c : s)
            out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    }
    return out;
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline void dot_element(std::ostringstream& os, const ArchElement& e, QualifiedPath path, int indent) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (e.children.empty()) {
        os << pad << dot_id(path) << " [label=\"" << dot_escape(e.name) << "\"];\n";
        return;
    }
    os << pad << "subgraph cluster_" << dot_id(path) << " {\n";
    os << pad << "  label=\"" << dot_escape(e.name) << "\";\n";
    // anchor node so connectors can attach to the composite itself
    os << pad << "  " << dot_id(path) << " [label=\"" << dot_escape(e.name) << "\", shape=point];\n";
    for (const auto& c : e.children) {
        QualifiedPath child = path;
        child.segments.push_back(c.name);
        dot_element(os, c, child, indent + 1);
    }
    os << pad << "}\n";
}

}  // namespace detail

inline std::string render_dot(const ArchModel& model) {
    std::ostringstream os;
    os << "digraph " << model.name << " {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=box];\n";
    for (const auto& e : model.elements) detail::dot_element(os, e, QualifiedPath{{e.name}}, 1);
    for (const auto& conn : model.connectors) {
        PortRef src = find_port(model, conn.source);
        PortRef dst = find_port(model, conn.target);
        if (!src || !dst) continue;
        std::string label = conn.stereotype.name;
        if (const Value* v = conn.stereotype.binding("label")) label = value_display(*v);
        os << "  " << detail::dot_id(src.element_path) << " -> " << detail::dot_id(dst.element_path)
           << " [label=\"" << detail::dot_escape(label) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace archkit
