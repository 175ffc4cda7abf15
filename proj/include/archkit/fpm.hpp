#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "archkit/diagnostics.hpp"
#include "archkit/model.hpp"

namespace archkit {

// ---- failure-logic expressions -----------------------------------------------
// The language is monotone by construction: AND/OR gates over basic events,
// locally defined out-failures, and failures arriving at in-ports.

enum class GateKind { And, Or };

struct FpmExpr;
using FpmExprPtr = std::shared_ptr<const FpmExpr>;

struct FpmExpr {
    enum class Kind { BasicEvent, FailureRef, InFailure, Gate };

    Kind kind = Kind::BasicEvent;
    // BasicEvent: name is the local event name.
    // FailureRef: path to an out-failure or basic event; local refs have one
    //   segment ("name") or two ("port", "name"); top-event refs are prefixed
    //   with the component path.
    // InFailure: path is {port, failure-name} on the owning component.
    QualifiedPath path;
    GateKind gate = GateKind::And;
    std::vector<FpmExprPtr> children;
    SourceSpan span;

    static FpmExprPtr basic_event(std::string name, SourceSpan sp = {}) {
        auto e = std::make_shared<FpmExpr>();
        e->kind = Kind::BasicEvent;
        e->path.segments = {std::move(name)};
        e->span = sp;
        return e;
    }
    static FpmExprPtr failure_ref(QualifiedPath p, SourceSpan sp = {}) {
        auto e = std::make_shared<FpmExpr>();
        e->kind = Kind::FailureRef;
        e->path = std::move(p);
        e->span = sp;
        return e;
    }
    static FpmExprPtr in_failure(std::string port, std::string failure, SourceSpan sp = {}) {
        auto e = std::make_shared<FpmExpr>();
        e->kind = Kind::InFailure;
        e->path.segments = {std::move(port), std::move(failure)};
        e->span = sp;
        return e;
    }
    static FpmExprPtr make_gate(GateKind k, std::vector<FpmExprPtr> kids, SourceSpan sp = {}) {
        auto e = std::make_shared<FpmExpr>();
        e->kind = Kind::Gate;
        e->gate = k;
        e->children = std::move(kids);
        e->span = sp;
        return e;
    }
};

struct BasicEvent {
    std::string name;
    std::optional<double> rate;  // per flight hour; carried, not analysed
    SourceSpan span;
};

struct OutFailure {
    std::optional<std::string> port;  // empty: component-level failure
    std::string name;
    FpmExprPtr expr;
    SourceSpan span;

    std::string display_name() const { return port ? *port + "." + name : name; }
};

struct FpmPort {
    std::string name;
    PortDirection direction = PortDirection::In;
};

struct FpmComponent {
    QualifiedPath path;  // model-relative element path
    std::vector<FpmPort> ports;
    std::vector<BasicEvent> basic_events;
    std::vector<OutFailure> out_failures;
    SourceSpan span;

    const BasicEvent* find_event(const std::string& n) const {
        for (const auto& e : basic_events)
            if (e.name == n) return &e;
        return nullptr;
    }
    const FpmPort* find_port(const std::string& n) const {
        for (const auto& p : ports)
            if (p.name == n) return &p;
        return nullptr;
    }
};

// Propagation edge mirroring one physical connector: component path + port on
// each side.
struct FpmEdge {
    QualifiedPath source_component;
    std::string source_port;
    QualifiedPath target_component;
    std::string target_port;

    bool operator==(const FpmEdge&) const = default;
};

struct TopEvent {
    std::string name;
    FpmExprPtr expr;  // FailureRefs are component-qualified
    SourceSpan span;
};

struct Fpm {
    std::string name;
    std::string model_name;
    std::vector<FpmComponent> components;
    std::vector<FpmEdge> edges;
    std::vector<TopEvent> top_events;
    SourceSpan span;

    const FpmComponent* find_component(const QualifiedPath& p) const {
        for (const auto& c : components)
            if (c.path == p) return &c;
        return nullptr;
    }
    FpmComponent* find_component(const QualifiedPath& p) {
        for (auto& c : components)
            if (c.path == p) return &c;
        return nullptr;
    }
    const TopEvent* find_top_event(const std::string& n) const {
        for (const auto& t : top_events)
            if (t.name == n) return &t;
        return nullptr;
    }
};

// ---- structure derivation ----------------------------------------------------

// FPM components are the physical elements that carry ports or are leaves:
// bus or relay units with child items keep their own failure logic while the
// items appear as components of their own.
inline bool is_fpm_component(const ArchElement& e) { return !e.ports.empty() || e.is_leaf(); }

// Builds the structural skeleton of an FPM from a physical model: components,
// their ports, and one propagation edge per connector. No failure logic.
inline Fpm build_fpm(const ArchModel& model, std::string fpm_name = {}) {
    Fpm fpm;
    fpm.name = fpm_name.empty() ? model.name + "Fpm" : std::move(fpm_name);
    fpm.model_name = model.name;
    for_each_element(model, [&](const ArchElement& e, const QualifiedPath& path) {
        if (!is_fpm_component(e)) return;
        FpmComponent c;
        c.path = path;
        for (const auto& p : e.ports) c.ports.push_back({p.name, p.direction});
        fpm.components.push_back(std::move(c));
    });
    for (const auto& conn : model.connectors) {
        PortRef src = find_port(model, conn.source);
        PortRef dst = find_port(model, conn.target);
        if (!src || !dst) continue;  // unresolved connectors are parse/load errors
        fpm.edges.push_back({src.element_path, src.port->name, dst.element_path, dst.port->name});
    }
    return fpm;
}

// ---- synchronization -----------------------------------------------------------

struct OrphanedAnnotation {
    QualifiedPath component;
    std::string description;
    SourceSpan span;
};

struct SyncReport {
    std::vector<QualifiedPath> added_components;
    std::vector<QualifiedPath> removed_components;
    std::vector<std::pair<QualifiedPath, std::string>> added_ports;
    std::vector<std::pair<QualifiedPath, std::string>> removed_ports;
    std::vector<FpmEdge> added_edges;
    std::vector<FpmEdge> removed_edges;
    std::vector<OrphanedAnnotation> orphans;

    bool empty() const {
        return added_components.empty() && removed_components.empty() && added_ports.empty() &&
               removed_ports.empty() && added_edges.empty() && removed_edges.empty() && orphans.empty();
    }
};

struct SyncResult {
    Fpm fpm;
    SyncReport report;
    std::vector<Diagnostic> diagnostics;
};

namespace detail {
// True when every failure reference inside expr still has an anchor.
inline bool expr_anchored(const FpmExpr& expr, const FpmComponent& comp) {
    switch (expr.kind) {
        case FpmExpr::Kind::BasicEvent:
            return comp.find_event(expr.path.segments[0]) != nullptr;
        case FpmExpr::Kind::InFailure:
            return comp.find_port(expr.path.segments[0]) != nullptr;
        case FpmExpr::Kind::FailureRef:
            // local out-failure or basic-event reference; port-qualified form
            // requires the port to survive
            if (expr.path.segments.size() == 2) return comp.find_port(expr.path.segments[0]) != nullptr;
            return true;
        case FpmExpr::Kind::Gate:
            for (const auto& c : expr.children)
                if (!expr_anchored(*c, comp)) return false;
            return true;
    }
    return true;
}
}  // namespace detail

// Aligns an FPM with the current physical model: structure is replaced by the
// freshly derived skeleton, surviving annotations are carried over, orphaned
// failure logic is reported and excluded from the result.
inline SyncResult sync_fpm(const Fpm& fpm, const ArchModel& model) {
    SyncResult result;
    if (fpm.model_name != model.name) {
        result.fpm = fpm;
        result.diagnostics.push_back({"FPM-001", Severity::Error,
                                      "FPM '" + fpm.name + "' was built for model '" + fpm.model_name +
                                          "', not '" + model.name + "'",
                                      fpm.span});
        return result;
    }
    Fpm next = build_fpm(model, fpm.name);
    next.span = fpm.span;
    next.top_events = fpm.top_events;

    for (const auto& old_comp : fpm.components) {
        FpmComponent* new_comp = next.find_component(old_comp.path);
        if (!new_comp) {
            result.report.removed_components.push_back(old_comp.path);
            for (const auto& ev : old_comp.basic_events)
                result.report.orphans.push_back({old_comp.path, "basic_event " + ev.name, ev.span});
            for (const auto& of : old_comp.out_failures)
                result.report.orphans.push_back({old_comp.path, "out_failure " + of.display_name(), of.span});
            continue;
        }
        for (const auto& old_port : old_comp.ports)
            if (!new_comp->find_port(old_port.name))
                result.report.removed_ports.emplace_back(old_comp.path, old_port.name);
        new_comp->basic_events = old_comp.basic_events;
        for (const auto& of : old_comp.out_failures) {
            bool port_ok = !of.port || new_comp->find_port(*of.port) != nullptr;
            if (port_ok && detail::expr_anchored(*of.expr, *new_comp)) {
                new_comp->out_failures.push_back(of);
            } else {
                result.report.orphans.push_back({old_comp.path, "out_failure " + of.display_name(), of.span});
            }
        }
    }
    for (const auto& comp : next.components)
        if (!fpm.find_component(comp.path)) result.report.added_components.push_back(comp.path);
    for (const auto& comp : next.components) {
        const FpmComponent* old_comp = fpm.find_component(comp.path);
        if (!old_comp) continue;
        for (const auto& p : comp.ports)
            if (!old_comp->find_port(p.name)) result.report.added_ports.emplace_back(comp.path, p.name);
    }
    auto edge_in = [](const FpmEdge& e, const std::vector<FpmEdge>& es) {
        return std::find(es.begin(), es.end(), e) != es.end();
    };
    for (const auto& e : next.edges)
        if (!edge_in(e, fpm.edges)) result.report.added_edges.push_back(e);
    for (const auto& e : fpm.edges)
        if (!edge_in(e, next.edges)) result.report.removed_edges.push_back(e);

    result.fpm = std::move(next);
    return result;
}

}  // namespace archkit
