#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "archkit/default_profiles.hpp"
#include "archkit/fha.hpp"
#include "archkit/fpm.hpp"
#include "archkit/model.hpp"
#include "archkit/parser.hpp"
#include "archkit/requirements.hpp"
#include "archkit/rule_spec.hpp"

namespace archkit {

// The loaded universe. Immutable once load_project returns; analyses share it
// read-only.
struct Project {
    std::string name;
    std::string level = "L0";
    std::filesystem::path root;
    ProjectManifest manifest;

    std::vector<Profile> profiles;
    std::vector<CustomRuleSpec> custom_rules;
    std::vector<ArchModel> models;
    std::vector<Requirement> requirements;
    std::vector<TraceLink> links;
    std::vector<Allocation> allocations;
    std::vector<Fpm> fpms;
    std::vector<FhaResult> fha_results;

    std::vector<Diagnostic> load_diagnostics;

    const ArchModel* find_model(const std::string& n) const {
        for (const auto& m : models)
            if (m.name == n) return &m;
        return nullptr;
    }
    const Requirement* find_requirement(const std::string& id) const {
        for (const auto& r : requirements)
            if (r.id == id) return &r;
        return nullptr;
    }
    const Fpm* find_fpm(const std::string& n) const {
        for (const auto& f : fpms)
            if (f.name == n) return &f;
        return nullptr;
    }
    const Profile* find_profile(const std::string& n) const {
        for (const auto& p : profiles)
            if (p.name == n) return &p;
        return nullptr;
    }

    ProfileSet profile_set() const {
        ProfileSet set;
        for (const auto& p : profiles) set.add(p);
        return set;
    }

    bool loaded_clean() const { return !has_errors(load_diagnostics); }
};

// ---- artifact resolution ------------------------------------------------------------

struct ResolvedArtifact {
    enum class Kind { Unresolved, Requirement, Element, Port, TopEvent };

    Kind kind = Kind::Unresolved;
    const Requirement* requirement = nullptr;
    const ArchModel* model = nullptr;
    const ArchElement* element = nullptr;
    const ArchPort* port = nullptr;
    const Fpm* fpm = nullptr;
    const TopEvent* top_event = nullptr;
    QualifiedPath path;  // model-qualified, for Element/Port

    explicit operator bool() const { return kind != Kind::Unresolved; }
};

inline ResolvedArtifact resolve_artifact(const Project& project, const ArtifactRef& ref) {
    ResolvedArtifact out;
    if (!ref.is_path) {
        if (const Requirement* r = project.find_requirement(ref.text)) {
            out.kind = ResolvedArtifact::Kind::Requirement;
            out.requirement = r;
        }
        return out;
    }
    const auto& segs = ref.path.segments;
    if (segs.size() < 2) return out;
    if (const ArchModel* model = project.find_model(segs[0])) {
        QualifiedPath rel{{segs.begin() + 1, segs.end()}};
        if (const ArchElement* e = find_element(*model, rel)) {
            out.kind = ResolvedArtifact::Kind::Element;
            out.model = model;
            out.element = e;
            out.path = ref.path;
            return out;
        }
        if (PortRef pr = find_port(*model, rel)) {
            out.kind = ResolvedArtifact::Kind::Port;
            out.model = model;
            out.element = pr.element;
            out.port = pr.port;
            out.path = ref.path;
            return out;
        }
        return out;
    }
    if (const Fpm* fpm = project.find_fpm(segs[0]); fpm && segs.size() == 2) {
        if (const TopEvent* te = fpm->find_top_event(segs[1])) {
            out.kind = ResolvedArtifact::Kind::TopEvent;
            out.fpm = fpm;
            out.top_event = te;
            out.path = ref.path;
        }
    }
    return out;
}

// Full model-qualified path of an element reached during traversal.
inline QualifiedPath qualify(const ArchModel& model, const QualifiedPath& relative) {
    QualifiedPath p;
    p.segments.push_back(model.name);
    p.segments.insert(p.segments.end(), relative.segments.begin(), relative.segments.end());
    return p;
}

// ---- allocations ----------------------------------------------------------------------

struct AllocateResult {
    std::optional<Allocation> allocation;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return allocation.has_value(); }
};

// Records a functional-to-physical allocation after validating both ends.
inline AllocateResult allocate(Project& project, const QualifiedPath& functional_path,
                               const QualifiedPath& physical_path, const SourceSpan& span = {}) {
    AllocateResult result;
    ArtifactRef src{functional_path.plain(), true, functional_path};
    ArtifactRef dst{physical_path.plain(), true, physical_path};
    ResolvedArtifact s = resolve_artifact(project, src);
    ResolvedArtifact t = resolve_artifact(project, dst);
    if (s.kind != ResolvedArtifact::Kind::Element) {
        result.diagnostics.push_back({"LOAD-003", Severity::Error,
                                      "allocation source '" + functional_path.plain() + "' does not resolve to an element",
                                      span});
        return result;
    }
    if (t.kind != ResolvedArtifact::Kind::Element) {
        result.diagnostics.push_back({"LOAD-003", Severity::Error,
                                      "allocation target '" + physical_path.plain() + "' does not resolve to an element",
                                      span});
        return result;
    }
    if (s.model->kind != ModelKind::Functional || t.model->kind != ModelKind::Physical) {
        result.diagnostics.push_back({"REQ-004", Severity::Error,
                                      "allocation must go from a functional element to a physical element",
                                      span});
        return result;
    }
    Allocation a{functional_path, physical_path, span};
    project.allocations.push_back(a);
    result.allocation = std::move(a);
    return result;
}

inline std::vector<const Allocation*> allocations_of_function(const Project& project,
                                                              const QualifiedPath& functional_path) {
    std::vector<const Allocation*> out;
    for (const auto& a : project.allocations)
        if (a.functional_path == functional_path) out.push_back(&a);
    return out;
}

inline std::vector<const Allocation*> allocations_to_physical(const Project& project,
                                                              const QualifiedPath& physical_path) {
    std::vector<const Allocation*> out;
    for (const auto& a : project.allocations)
        if (a.physical_path == physical_path) out.push_back(&a);
    return out;
}

// ---- FHA import -------------------------------------------------------------------------

struct FhaImportResult {
    int functions_updated = 0;
    std::vector<Requirement> generated_requirements;
    std::vector<TraceLink> generated_links;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

namespace detail {

inline ArchElement* find_element_mut(ArchModel& model, const QualifiedPath& path) {
    if (path.empty()) return nullptr;
    ArchElement* cur = nullptr;
    for (auto& e : model.elements)
        if (e.name == path.segments[0]) cur = &e;
    for (size_t i = 1; cur && i < path.segments.size(); ++i) {
        ArchElement* next = nullptr;
        for (auto& c : cur->children)
            if (c.name == path.segments[i]) next = &c;
        cur = next;
    }
    return cur;
}

inline void set_binding(std::vector<AppliedStereotype>& stereotypes, const std::string& attr, Value value) {
    if (stereotypes.empty()) return;
    for (auto& s : stereotypes) {
        for (auto& [name, v] : s.bindings) {
            if (name == attr) {
                v = std::move(value);
                return;
            }
        }
    }
    stereotypes.front().bindings.emplace_back(attr, std::move(value));
}

}  // namespace detail

// Applies one FHA results file: sets the FDAL attribute on each referenced
// function and produces one linked safety-requirement stub per failure
// condition. Caller decides whether stubs join the project (load path) or are
// emitted as files (CLI import).
inline FhaImportResult import_fha_results(Project& project, const FhaFile& fha) {
    FhaImportResult result;
    for (const auto& fc : fha.results) {
        char expected = fdal_for(fc.classification);
        if (fc.fdal && *fc.fdal != expected) {
            result.diagnostics.push_back(
                {"FHA-004", Severity::Error,
                 "failure condition '" + fc.id + "': classification " + to_string(fc.classification) +
                     " maps to FDAL " + std::string(1, expected) + ", file says " + std::string(1, *fc.fdal),
                 fc.span});
            continue;
        }
        ArtifactRef ref{fc.function_path.plain(), true, fc.function_path};
        ResolvedArtifact target = resolve_artifact(project, ref);
        if (target.kind != ResolvedArtifact::Kind::Element) {
            result.diagnostics.push_back({"FHA-005", Severity::Error,
                                          "failure condition '" + fc.id + "' references unknown function '" +
                                              fc.function_path.plain() + "'",
                                          fc.span});
            continue;
        }
        ArchModel* model = nullptr;
        for (auto& m : project.models)
            if (&m == target.model) model = &m;
        QualifiedPath rel{{fc.function_path.segments.begin() + 1, fc.function_path.segments.end()}};
        ArchElement* elem = model ? detail::find_element_mut(*model, rel) : nullptr;
        if (elem) detail::set_binding(elem->stereotypes, "fdal", Value::dal(std::string(1, expected)));
        ++result.functions_updated;

        std::string stub_id = "SAF-" + fc.id;
        if (project.find_requirement(stub_id)) {
            result.diagnostics.push_back({"FHA-006", Severity::Error,
                                          "generated safety requirement id '" + stub_id + "' already exists",
                                          fc.span});
            continue;
        }
        Requirement stub;
        stub.id = stub_id;
        stub.level = "system";
        stub.type = ReqType::Safety;
        stub.text = fc.condition;
        stub.rationale = fc.effect;
        stub.generated = true;
        stub.classification = to_string(fc.classification);
        stub.span = fc.span;
        result.generated_requirements.push_back(std::move(stub));

        TraceLink link;
        link.source = ArtifactRef{stub_id, false, {}};
        link.target = ref;
        link.type = LinkType::SatisfiedBy;
        link.generated = true;
        link.span = fc.span;
        result.generated_links.push_back(std::move(link));
    }
    return result;
}

// ---- link validation ---------------------------------------------------------------------

namespace detail {

inline std::optional<std::string> check_link_shape(const Project& project, const TraceLink& link,
                                                   const ResolvedArtifact& src, const ResolvedArtifact& dst) {
    using K = ResolvedArtifact::Kind;
    switch (link.type) {
        case LinkType::SatisfiedBy:
            if (src.kind != K::Requirement || dst.kind != K::Element)
                return "satisfied_by links a requirement to a model element";
            break;
        case LinkType::Refines:
            if (src.kind != K::Requirement || dst.kind != K::Requirement)
                return "refines links a requirement to a higher-level requirement";
            break;
        case LinkType::DerivesFrom:
            if (src.kind != K::Requirement || dst.kind != K::Element)
                return "derives_from links a requirement to a model element";
            break;
        case LinkType::AllocatedTo:
            if (dst.kind != K::Element)
                return "allocated_to targets a model element";
            if (src.kind == K::Element) {
                if (src.model->kind != ModelKind::Functional || dst.model->kind != ModelKind::Physical)
                    return "element allocation must go from a functional element to a physical element";
            } else if (src.kind != K::Requirement) {
                return "allocated_to sources a functional element or a requirement";
            }
            break;
        case LinkType::ValidatedBy:
            if (src.kind != K::Requirement || (dst.kind != K::Requirement && dst.kind != K::TopEvent))
                return "validated_by links a requirement to a test case or a top event";
            break;
        case LinkType::JustifiedBy:
            if (src.kind != K::Requirement || (dst.kind != K::Requirement && dst.kind != K::Element))
                return "justified_by links a requirement to a requirement or a model element";
            break;
    }
    (void)project;
    return std::nullopt;
}

}  // namespace detail

// ---- project loading ------------------------------------------------------------------------

struct LoadResult {
    std::optional<Project> project;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return project.has_value() && !has_errors(diagnostics); }
};

namespace detail {

inline std::optional<std::string> read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

// Loads a project from its manifest. Files that fail to parse are excluded
// wholesale; their diagnostics are kept. Cross-file references are resolved
// after every file is in; unresolved links are reported and dropped.
inline LoadResult load_project(const std::filesystem::path& manifest_path) {
    LoadResult out;
    auto manifest_text = detail::read_file(manifest_path);
    if (!manifest_text) {
        out.diagnostics.push_back({"LOAD-001", Severity::Error,
                                   "cannot read manifest '" + manifest_path.string() + "'",
                                   {manifest_path.filename().string(), 1, 1, 0}});
        return out;
    }
    ParsedManifest pm = parse_manifest(*manifest_text, manifest_path.filename().string());
    for (auto& d : pm.diagnostics) out.diagnostics.push_back(std::move(d));
    if (!pm.manifest) {
        sort_diagnostics(out.diagnostics);
        return out;
    }

    Project project;
    project.manifest = *pm.manifest;
    project.name = pm.manifest->project_name;
    project.level = pm.manifest->level;
    project.root = manifest_path.has_parent_path() ? manifest_path.parent_path() : ".";

    auto load_each = [&](const std::vector<std::string>& files, auto&& handler) {
        for (const auto& rel : files) {
            auto text = detail::read_file(project.root / rel);
            if (!text) {
                out.diagnostics.push_back(
                    {"LOAD-001", Severity::Error, "cannot read file '" + rel + "'", {rel, 1, 1, 0}});
                continue;
            }
            handler(*text, rel);
        }
    };

    load_each(project.manifest.profiles, [&](const std::string& text, const std::string& rel) {
        ParsedProfiles pp = parse_profile(text, rel);
        for (auto& d : pp.diagnostics) out.diagnostics.push_back(std::move(d));
        if (has_errors(pp.diagnostics)) return;
        for (auto& prof : pp.file.profiles) {
            if (project.find_profile(prof.name)) {
                out.diagnostics.push_back({"LOAD-002", Severity::Error,
                                           "duplicate profile '" + prof.name + "'", prof.span});
                continue;
            }
            project.profiles.push_back(std::move(prof));
        }
        for (auto& rule : pp.file.rules) project.custom_rules.push_back(std::move(rule));
    });

    ProfileSet profile_set = project.profile_set();
    load_each(project.manifest.models, [&](const std::string& text, const std::string& rel) {
        ParsedModel pmod = parse_model(text, rel, profile_set);
        for (auto& d : pmod.diagnostics) out.diagnostics.push_back(std::move(d));
        if (!pmod.ok()) return;
        if (project.find_model(pmod.model->name)) {
            out.diagnostics.push_back({"LOAD-002", Severity::Error,
                                       "duplicate model '" + pmod.model->name + "'", pmod.model->span});
            return;
        }
        project.models.push_back(std::move(*pmod.model));
    });

    auto load_reqs = [&](const std::string& text, const std::string& rel) {
        ParsedRequirements pr = parse_requirements(text, rel);
        for (auto& d : pr.diagnostics) out.diagnostics.push_back(std::move(d));
        if (!pr.ok()) return;
        for (auto& r : pr.set.requirements) {
            if (project.find_requirement(r.id)) {
                out.diagnostics.push_back(
                    {"REQ-001", Severity::Error, "duplicate requirement id '" + r.id + "'", r.span});
                continue;
            }
            project.requirements.push_back(std::move(r));
        }
        for (auto& l : pr.set.links) project.links.push_back(std::move(l));
    };
    load_each(project.manifest.requirements, load_reqs);
    load_each(project.manifest.links, load_reqs);

    load_each(project.manifest.fpm, [&](const std::string& text, const std::string& rel) {
        ParsedFpm pf = parse_fpm(text, rel);
        for (auto& d : pf.diagnostics) out.diagnostics.push_back(std::move(d));
        if (!pf.ok()) return;
        const ArchModel* model = project.find_model(pf.fpm->model_name);
        if (!model) {
            out.diagnostics.push_back({"FPM-005", Severity::Error,
                                       "FPM '" + pf.fpm->name + "' references unknown model '" +
                                           pf.fpm->model_name + "'",
                                       pf.fpm->span});
            return;
        }
        // The analysed structure is always derived from the current model;
        // the file's structure is the last synchronized snapshot.
        SyncResult sync = sync_fpm(*pf.fpm, *model);
        if (!sync.report.empty()) {
            out.diagnostics.push_back({"FPM-004", Severity::Warning,
                                       "FPM '" + pf.fpm->name + "' is out of sync with model '" + model->name +
                                           "'; run fpm sync",
                                       pf.fpm->span});
        }
        project.fpms.push_back(std::move(sync.fpm));
    });

    load_each(project.manifest.fha_results, [&](const std::string& text, const std::string& rel) {
        ParsedFha pf = parse_fha(text, rel);
        for (auto& d : pf.diagnostics) out.diagnostics.push_back(std::move(d));
        if (!pf.ok()) return;
        FhaImportResult import = import_fha_results(project, *pf.fha);
        for (auto& d : import.diagnostics) out.diagnostics.push_back(std::move(d));
        for (auto& r : import.generated_requirements) project.requirements.push_back(std::move(r));
        for (auto& l : import.generated_links) project.links.push_back(std::move(l));
        for (auto& fc : pf.fha->results) project.fha_results.push_back(std::move(fc));
    });

    // Cross-file resolution: every link end must resolve and respect the link
    // type's domain and range. Failing links are dropped so nothing dangles.
    std::vector<TraceLink> kept;
    for (auto& link : project.links) {
        ResolvedArtifact src = resolve_artifact(project, link.source);
        ResolvedArtifact dst = resolve_artifact(project, link.target);
        if (!src) {
            out.diagnostics.push_back({"LOAD-003", Severity::Error,
                                       "link source '" + link.source.text + "' does not resolve", link.span});
            continue;
        }
        if (!dst) {
            out.diagnostics.push_back({"LOAD-003", Severity::Error,
                                       "link target '" + link.target.text + "' does not resolve", link.span});
            continue;
        }
        if (auto err = detail::check_link_shape(project, link, src, dst)) {
            out.diagnostics.push_back({"REQ-003", Severity::Error, *err, link.span});
            continue;
        }
        if (link.type == LinkType::AllocatedTo && src.kind == ResolvedArtifact::Kind::Element)
            project.allocations.push_back({src.path, dst.path, link.span});
        kept.push_back(std::move(link));
    }
    project.links = std::move(kept);

    sort_diagnostics(out.diagnostics);
    project.load_diagnostics = out.diagnostics;
    out.project = std::move(project);
    return out;
}

}  // namespace archkit
