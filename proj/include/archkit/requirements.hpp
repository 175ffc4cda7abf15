#pragma once

#include <optional>
#include <string>
#include <vector>

#include "archkit/diagnostics.hpp"
#include "archkit/model.hpp"

namespace archkit {

enum class ReqType { Functional, Safety, Derived, Assumption, Interface, Performance };

inline const char* to_string(ReqType t) {
    switch (t) {
        case ReqType::Functional: return "functional";
        case ReqType::Safety: return "safety";
        case ReqType::Derived: return "derived";
        case ReqType::Assumption: return "assumption";
        case ReqType::Interface: return "interface";
        case ReqType::Performance: return "performance";
    }
    return "?";
}

inline std::optional<ReqType> req_type_from(const std::string& s) {
    if (s == "functional") return ReqType::Functional;
    if (s == "safety") return ReqType::Safety;
    if (s == "derived") return ReqType::Derived;
    if (s == "assumption") return ReqType::Assumption;
    if (s == "interface") return ReqType::Interface;
    if (s == "performance") return ReqType::Performance;
    return std::nullopt;
}

struct Requirement {
    std::string id;
    std::string level;  // aircraft | system | item | test | custom L-label
    ReqType type = ReqType::Functional;
    std::string text;
    std::optional<std::string> rationale;
    std::optional<std::string> justification;
    std::optional<int> min_cut_order;  // safety requirements only
    bool generated = false;            // true for FHA-import stubs
    std::optional<std::string> classification;  // carried on generated stubs
    SourceSpan span;

    bool operator==(const Requirement&) const = default;
};

enum class LinkType { SatisfiedBy, Refines, DerivesFrom, AllocatedTo, ValidatedBy, JustifiedBy };

inline const char* to_string(LinkType t) {
    switch (t) {
        case LinkType::SatisfiedBy: return "satisfied_by";
        case LinkType::Refines: return "refines";
        case LinkType::DerivesFrom: return "derives_from";
        case LinkType::AllocatedTo: return "allocated_to";
        case LinkType::ValidatedBy: return "validated_by";
        case LinkType::JustifiedBy: return "justified_by";
    }
    return "?";
}

inline std::optional<LinkType> link_type_from(const std::string& s) {
    if (s == "satisfied_by") return LinkType::SatisfiedBy;
    if (s == "refines") return LinkType::Refines;
    if (s == "derives_from") return LinkType::DerivesFrom;
    if (s == "allocated_to") return LinkType::AllocatedTo;
    if (s == "validated_by") return LinkType::ValidatedBy;
    if (s == "justified_by") return LinkType::JustifiedBy;
    return std::nullopt;
}

// An artifact reference is either a requirement id or a dotted qualified path
// (model element, port, or FPM top event). Stored textually until project
// assembly resolves it.
struct ArtifactRef {
    std::string text;          // as written
    bool is_path = false;      // quoted dotted path vs bare requirement id
    QualifiedPath path;        // filled when is_path

    bool operator==(const ArtifactRef&) const = default;
};

struct TraceLink {
    ArtifactRef source;
    ArtifactRef target;
    LinkType type = LinkType::SatisfiedBy;
    bool generated = false;  // FHA-import stub links
    SourceSpan span;

    bool operator==(const TraceLink&) const = default;
};

struct RequirementSet {
    std::vector<Requirement> requirements;
    std::vector<TraceLink> links;

    const Requirement* find(const std::string& id) const {
        for (const auto& r : requirements)
            if (r.id == id) return &r;
        return nullptr;
    }
};

struct CoverageReport {
    std::vector<QualifiedPath> uncovered_elements;   // model-qualified
    std::vector<std::string> dangling_requirements;  // requirement ids
    int covered_elements = 0;
    int coverage_scope_size = 0;
    int requirement_count = 0;
};

}  // namespace archkit
