#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "archkit/fpm.hpp"

namespace archkit {

// ---- resolved failure logic ---------------------------------------------------
// Resolution flattens cross-component references: every leaf is either a
// component-qualified basic event or the constant False left behind by an
// in-port nothing propagates into.

struct ResolvedExpr {
    enum class Kind { Event, False, And, Or };
    Kind kind = Kind::False;
    std::string event;  // "<component path>.<basic event>"
    std::vector<ResolvedExpr> children;

    static ResolvedExpr make_event(std::string e) { return {Kind::Event, std::move(e), {}}; }
    static ResolvedExpr make_false() { return {}; }
    static ResolvedExpr make_gate(Kind k, std::vector<ResolvedExpr> kids) { return {k, {}, std::move(kids)}; }
};

struct CutSet {
    std::vector<std::string> events;  // sorted, component-qualified
    int order() const { return static_cast<int>(events.size()); }
    bool operator==(const CutSet&) const = default;
};

struct CutSetResult {
    std::string top_event;
    std::vector<CutSet> cut_sets;  // by order, then lexicographic
    bool truncated = false;        // cut sets above max_order were dropped
    std::optional<int> max_order;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return !has_errors(diagnostics); }
};

namespace detail {

class FpmResolver {
   public:
    FpmResolver(const Fpm& fpm, std::vector<Diagnostic>& diags) : fpm_(fpm), diags_(diags) {}

    ResolvedExpr resolve_top(const FpmExpr& expr) { return resolve(expr, nullptr); }

    ResolvedExpr resolve_failure(const FpmComponent& comp, const OutFailure& failure) {
        std::string key = comp.path.plain() + "|" + failure.display_name();
        if (std::find(stack_.begin(), stack_.end(), key) != stack_.end()) {
            error("CUT-002", "failure logic cycle through '" + comp.path.plain() + "." +
                                 failure.display_name() + "'",
                  failure.span);
            return ResolvedExpr::make_false();
        }
        stack_.push_back(key);
        ResolvedExpr out = resolve(*failure.expr, &comp);
        stack_.pop_back();
        return out;
    }

   private:
    const Fpm& fpm_;
    std::vector<Diagnostic>& diags_;
    std::vector<std::string> stack_;

    void error(const std::string& code, const std::string& msg, const SourceSpan& span) {
        diags_.push_back({code, Severity::Error, msg, span});
    }

    const OutFailure* find_out_failure(const FpmComponent& comp, const std::optional<std::string>& port,
                                       const std::string& name) const {
        for (const auto& of : comp.out_failures)
            if (of.port == port && of.name == name) return &of;
        return nullptr;
    }

    ResolvedExpr resolve(const FpmExpr& expr, const FpmComponent* comp) {
        switch (expr.kind) {
            case FpmExpr::Kind::Gate: {
                std::vector<ResolvedExpr> kids;
                kids.reserve(expr.children.size());
                for (const auto& c : expr.children) kids.push_back(resolve(*c, comp));
                return ResolvedExpr::make_gate(
                    expr.gate == GateKind::And ? ResolvedExpr::Kind::And : ResolvedExpr::Kind::Or,
                    std::move(kids));
            }
            case FpmExpr::Kind::BasicEvent: {
                const std::string& name = expr.path.segments[0];
                if (comp && comp->find_event(name))
                    return ResolvedExpr::make_event(comp->path.plain() + "." + name);
                error("CUT-003", "unknown basic event '" + name + "'", expr.span);
                return ResolvedExpr::make_false();
            }
            case FpmExpr::Kind::InFailure: {
                if (!comp) {
                    error("CUT-003", "in_failure is only valid inside a component", expr.span);
                    return ResolvedExpr::make_false();
                }
                return resolve_in_failure(*comp, expr);
            }
            case FpmExpr::Kind::FailureRef:
                return comp ? resolve_local_ref(*comp, expr) : resolve_qualified_ref(expr);
        }
        return ResolvedExpr::make_false();
    }

    ResolvedExpr resolve_local_ref(const FpmComponent& comp, const FpmExpr& expr) {
        const auto& segs = expr.path.segments;
        if (segs.size() == 1) {
            if (comp.find_event(segs[0])) return ResolvedExpr::make_event(comp.path.plain() + "." + segs[0]);
            if (const OutFailure* of = find_out_failure(comp, std::nullopt, segs[0]))
                return resolve_failure(comp, *of);
        } else if (segs.size() == 2) {
            if (const OutFailure* of = find_out_failure(comp, segs[0], segs[1]))
                return resolve_failure(comp, *of);
        }
        error("CUT-003",
              "'" + expr.path.plain() + "' names no basic event or out_failure of '" + comp.path.plain() + "'",
              expr.span);
        return ResolvedExpr::make_false();
    }

    // Top-event references: the longest component-path prefix wins, the rest
    // is an out-failure (optionally port-qualified) or basic-event name.
    ResolvedExpr resolve_qualified_ref(const FpmExpr& expr) {
        const auto& segs = expr.path.segments;
        for (size_t k = segs.size() - 1; k >= 1; --k) {
            QualifiedPath prefix{{segs.begin(), segs.begin() + k}};
            const FpmComponent* comp = fpm_.find_component(prefix);
            if (!comp) continue;
            if (segs.size() - k == 1) {
                if (comp->find_event(segs[k]))
                    return ResolvedExpr::make_event(comp->path.plain() + "." + segs[k]);
                if (const OutFailure* of = find_out_failure(*comp, std::nullopt, segs[k]))
                    return resolve_failure(*comp, *of);
            } else if (segs.size() - k == 2) {
                if (const OutFailure* of = find_out_failure(*comp, segs[k], segs[k + 1]))
                    return resolve_failure(*comp, *of);
            }
            break;
        }
        error("CUT-003", "'" + expr.path.plain() + "' does not resolve to a component failure", expr.span);
        return ResolvedExpr::make_false();
    }

    // A failure arriving at an in-port is the OR of every matching out-failure
    // at the far side of the port's edges. Edges are undirected here so inout
    // bus ports propagate both ways. No binding means nothing arrives: False.
    ResolvedExpr resolve_in_failure(const FpmComponent& comp, const FpmExpr& expr) {
        const std::string& port = expr.path.segments[0];
        const std::string& failure = expr.path.segments[1];
        if (!comp.find_port(port)) {
            error("CUT-003", "'" + comp.path.plain() + "' has no port '" + port + "'", expr.span);
            return ResolvedExpr::make_false();
        }
        std::vector<ResolvedExpr> sources;
        for (const auto& e : fpm_.edges) {
            const QualifiedPath* other_comp = nullptr;
            const std::string* other_port = nullptr;
            if (e.target_component == comp.path && e.target_port == port) {
                other_comp = &e.source_component;
                other_port = &e.source_port;
            } else if (e.source_component == comp.path && e.source_port == port) {
                other_comp = &e.target_component;
                other_port = &e.target_port;
            } else {
                continue;
            }
            const FpmComponent* far = fpm_.find_component(*other_comp);
            if (!far) continue;
            if (const OutFailure* of = find_out_failure(*far, *other_port, failure))
                sources.push_back(resolve_failure(*far, *of));
        }
        if (sources.empty()) return ResolvedExpr::make_false();
        if (sources.size() == 1) return sources[0];
        return ResolvedExpr::make_gate(ResolvedExpr::Kind::Or, std::move(sources));
    }
};

using EventSet = std::set<std::string>;

// Drops duplicates and any set that is a superset of another (absorption).
inline std::vector<EventSet> minimize(std::vector<EventSet> sets) {
    std::sort(sets.begin(), sets.end(), [](const EventSet& a, const EventSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<EventSet> out;
    for (const auto& s : sets) {
        bool absorbed = false;
        for (const auto& kept : out) {
            if (std::includes(s.begin(), s.end(), kept.begin(), kept.end())) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed) out.push_back(s);
    }
    return out;
}

// MOCUS-style top-down expansion: OR splits rows, AND multiplies them, with
// idempotence from the set representation and absorption after each gate.
inline std::vector<EventSet> expand(const ResolvedExpr& expr) {
    switch (expr.kind) {
        case ResolvedExpr::Kind::Event:
            return {{expr.event}};
        case ResolvedExpr::Kind::False:
            return {};
        case ResolvedExpr::Kind::Or: {
            std::vector<EventSet> out;
            for (const auto& c : expr.children) {
                std::vector<EventSet> sub = expand(c);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return minimize(std::move(out));
        }
        case ResolvedExpr::Kind::And: {
            std::vector<EventSet> out{{}};
            for (const auto& c : expr.children) {
                std::vector<EventSet> sub = expand(c);
                std::vector<EventSet> next;
                for (const auto& row : out) {
                    for (const auto& s : sub) {
                        EventSet merged = row;
                        merged.insert(s.begin(), s.end());
                        next.push_back(std::move(merged));
                    }
                }
                out = minimize(std::move(next));
                if (out.empty()) return out;  // a False branch kills the product
            }
            return out;
        }
    }
    return {};
}

}  // namespace detail

// Minimal cut sets of one top event. Results are deterministic: by order,
// then lexicographic over the qualified event names.
inline CutSetResult compute_cut_sets(const Fpm& fpm, const std::string& top_event,
                                     std::optional<int> max_order = std::nullopt) {
    CutSetResult result;
    result.top_event = top_event;
    result.max_order = max_order;
    const TopEvent* top = fpm.find_top_event(top_event);
    if (!top) {
        result.diagnostics.push_back({"CUT-001", Severity::Error,
                                      "FPM '" + fpm.name + "' has no top event '" + top_event + "'", fpm.span});
        return result;
    }
    detail::FpmResolver resolver(fpm, result.diagnostics);
    ResolvedExpr resolved = resolver.resolve_top(*top->expr);
    if (has_errors(result.diagnostics)) return result;

    std::vector<detail::EventSet> sets = detail::expand(resolved);
    for (auto& s : sets) {
        if (max_order && static_cast<int>(s.size()) > *max_order) {
            result.truncated = true;
            continue;
        }
        result.cut_sets.push_back({{s.begin(), s.end()}});
    }
    std::sort(result.cut_sets.begin(), result.cut_sets.end(), [](const CutSet& a, const CutSet& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.events < b.events;
    });
    return result;
}

}  // namespace archkit
