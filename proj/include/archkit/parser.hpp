#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "archkit/fha.hpp"
#include "archkit/fpm.hpp"
#include "archkit/lexer.hpp"
#include "archkit/model.hpp"
#include "archkit/profile.hpp"
#include "archkit/requirements.hpp"
#include "archkit/rule_spec.hpp"

namespace archkit {

// ---- parse results -------------------------------------------------------------

struct ProfileFile {
    std::vector<Profile> profiles;
    std::vector<CustomRuleSpec> rules;
};

struct ParsedProfiles {
    ProfileFile file;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

struct ParsedModel {
    std::optional<ArchModel> model;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

struct ParsedRequirements {
    RequirementSet set;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return !has_errors(diagnostics); }
};

struct ParsedFpm {
    std::optional<Fpm> fpm;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return fpm.has_value() && !has_errors(diagnostics); }
};

struct ParsedFha {
    std::optional<FhaFile> fha;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return fha.has_value() && !has_errors(diagnostics); }
};

struct ProjectManifest {
    std::string project_name;
    std::string level = "L0";
    std::vector<std::string> profiles;
    std::vector<std::string> models;
    std::vector<std::string> requirements;
    std::vector<std::string> links;
    std::vector<std::string> fpm;
    std::vector<std::string> fha_results;
    std::map<std::string, Severity> severity_overrides;       // rule code -> severity
    std::map<std::string, std::string> nomenclature;          // stereotype -> regex
    SourceSpan span;
};

struct ParsedManifest {
    std::optional<ProjectManifest> manifest;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return manifest.has_value() && !has_errors(diagnostics); }
};

// A stereotype catalog spanning several profiles, resolved in `uses` order.
class ProfileSet {
   public:
    void add(const Profile& p) { profiles_.push_back(&p); }

    const Profile* profile(const std::string& name) const {
        for (const Profile* p : profiles_)
            if (p->name == name) return p;
        return nullptr;
    }

    // First match across the registered profiles.
    std::optional<EffectiveStereotype> resolve(const std::string& stereotype) const {
        for (const Profile* p : profiles_) {
            if (p->find(stereotype)) {
                auto r = resolve_effective_stereotype(*p, stereotype);
                if (r.ok()) return r.stereotype;
                return std::nullopt;
            }
        }
        return std::nullopt;
    }

    bool has(const std::string& stereotype) const {
        for (const Profile* p : profiles_)
            if (p->find(stereotype)) return true;
        return false;
    }

   private:
    std::vector<const Profile*> profiles_;
};

// ---- parser ---------------------------------------------------------------------

namespace detail {

class Parser {
   public:
    Parser(std::string_view text, const std::string& path) : path_(path) {
        LexResult lr = lex(text, path);
        tokens_ = std::move(lr.tokens);
        diagnostics_ = std::move(lr.diagnostics);
    }

    std::vector<Diagnostic> take_diagnostics() {
        sort_diagnostics(diagnostics_);
        return std::move(diagnostics_);
    }

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at_end() const { return peek().is(TokenKind::End); }

    bool accept(TokenKind k) {
        if (peek().is(k)) {
            next();
            return true;
        }
        return false;
    }
    bool accept_ident(std::string_view word) {
        if (peek().is_ident(word)) {
            next();
            return true;
        }
        return false;
    }

    void error(std::string code, std::string message, SourceSpan span) {
        diagnostics_.push_back({std::move(code), Severity::Error, std::move(message), std::move(span)});
    }
    void error_here(std::string message) { error("PARSE-003", std::move(message), peek().span); }

    bool expect(TokenKind k, const std::string& what) {
        if (accept(k)) return true;
        error_here("expected " + what);
        return false;
    }

    // A name is an identifier or a quoted string (spaces, slashes).
    std::optional<std::string> accept_name() {
        if (peek().is(TokenKind::Ident) || peek().is(TokenKind::String)) return next().text;
        return std::nullopt;
    }
    std::string expect_name(const std::string& what) {
        if (auto n = accept_name()) return *n;
        error_here("expected " + what);
        return {};
    }

    // Dotted sequence of names.
    std::optional<QualifiedPath> accept_path() {
        QualifiedPath p;
        auto first = accept_name();
        if (!first) return std::nullopt;
        p.segments.push_back(*first);
        while (peek().is(TokenKind::Dot)) {
            next();
            auto seg = accept_name();
            if (!seg) {
                error_here("expected path segment after '.'");
                return p;
            }
            p.segments.push_back(*seg);
        }
        return p;
    }

    // Skips tokens until one of the sync keywords at the current brace depth,
    // or a closing brace that leaves the current block. Error recovery keeps
    // independent statements independently diagnosable.
    void synchronize(std::initializer_list<std::string_view> keywords) {
        int depth = 0;
        while (!at_end()) {
            const Token& t = peek();
            if (t.is(TokenKind::LBrace)) {
                ++depth;
            } else if (t.is(TokenKind::RBrace)) {
                if (depth == 0) return;
                --depth;
            } else if (depth == 0 && t.is(TokenKind::Ident)) {
                for (auto kw : keywords)
                    if (t.text == kw) return;
            }
            next();
        }
    }

    // Literal value as written; kind coercion against a definition happens at
    // the call site.
    std::optional<Value> accept_literal() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::String: return Value::string(next().text);
            case TokenKind::Integer: return Value::integer(next().int_value);
            case TokenKind::Real: return Value::real(next().real_value);
            case TokenKind::Ident:
                if (t.text == "true") {
                    next();
                    return Value::boolean(true);
                }
                if (t.text == "false") {
                    next();
                    return Value::boolean(false);
                }
                // Bare identifier: DAL level or enum literal.
                if (is_dal_literal(t.text)) return Value::dal(next().text);
                return Value::enum_literal(next().text);
            default: return std::nullopt;
        }
    }

    const std::string& path() const { return path_; }

   private:
    std::string path_;
    std::vector<Token> tokens_;
    std::vector<Diagnostic> diagnostics_;
    size_t pos_ = 0;
};

inline std::optional<Severity> severity_from(const std::string& s) {
    if (s == "error") return Severity::Error;
    if (s == "warning") return Severity::Warning;
    if (s == "info") return Severity::Info;
    return std::nullopt;
}

}  // namespace detail

// ---- profile files (.prof) ------------------------------------------------------

namespace detail {

inline std::optional<AttributeDef> parse_attr_def(Parser& p) {
    // attr name : kind [required|optional] [= default]
    AttributeDef def;
    def.span = p.peek().span;
    def.name = p.expect_name("attribute name");
    def.required = true;
    if (!p.expect(TokenKind::Colon, "':' after attribute name")) return std::nullopt;
    const Token& kind_tok = p.peek();
    if (!kind_tok.is(TokenKind::Ident)) {
        p.error_here("expected attribute value kind");
        return std::nullopt;
    }
    std::string kind = p.next().text;
    if (kind == "string") def.kind = ValueKind::String;
    else if (kind == "integer") def.kind = ValueKind::Integer;
    else if (kind == "real") def.kind = ValueKind::Real;
    else if (kind == "boolean") def.kind = ValueKind::Boolean;
    else if (kind == "dal") def.kind = ValueKind::Dal;
    else if (kind == "enum") {
        def.kind = ValueKind::Enum;
        if (!p.expect(TokenKind::LParen, "'(' with enum literals")) return std::nullopt;
        do {
            def.enum_literals.push_back(p.expect_name("enum literal"));
        } while (p.accept(TokenKind::Comma));
        p.expect(TokenKind::RParen, "')'");
    } else {
        p.error("PARSE-004", "unknown attribute kind '" + kind + "'", kind_tok.span);
        return std::nullopt;
    }
    for (;;) {
        if (p.accept_ident("optional")) def.required = false;
        else if (p.accept_ident("required")) def.required = true;
        else break;
    }
    if (p.accept(TokenKind::Equal)) {
        auto v = p.accept_literal();
        if (!v) {
            p.error_here("expected default value");
            return std::nullopt;
        }
        if (def.kind == ValueKind::Dal && v->kind == ValueKind::Enum) v->kind = ValueKind::Dal;
        def.default_value = std::move(v);
    }
    return def;
}

inline std::optional<Stereotype> parse_stereotype(Parser& p, bool& kind_was_declared) {
    Stereotype s;
    s.span = p.peek().span;
    s.name = p.expect_name("stereotype name");
    bool kind_declared = false;
    for (;;) {
        if (p.accept_ident("abstract")) {
            s.abstract_ = true;
        } else if (p.accept_ident("bidirectional")) {
            s.bidirectional = true;
        } else if (p.accept_ident("kind")) {
            const Token& t = p.peek();
            if (t.is_ident("component")) s.base_kind = BaseKind::Component;
            else if (t.is_ident("port")) s.base_kind = BaseKind::Port;
            else if (t.is_ident("connector")) s.base_kind = BaseKind::Connector;
            else {
                p.error_here("expected component, port, or connector");
                return std::nullopt;
            }
            p.next();
            kind_declared = true;
        } else if (p.accept_ident("extends")) {
            s.extends = p.expect_name("parent stereotype name");
        } else {
            break;
        }
    }
    if (!kind_declared && !s.extends) {
        p.error("PARSE-005", "stereotype '" + s.name + "' needs 'kind' or 'extends'", s.span);
    }
    kind_was_declared = kind_declared;
    if (p.accept(TokenKind::LBrace)) {
        while (!p.accept(TokenKind::RBrace)) {
            if (p.at_end()) {
                p.error_here("unterminated stereotype body");
                break;
            }
            if (p.accept_ident("attr")) {
                if (auto def = parse_attr_def(p)) s.attributes.push_back(std::move(*def));
                else p.synchronize({"attr", "endpoints", "stereotype"});
            } else if (p.accept_ident("endpoints")) {
                s.endpoint_constraint = p.expect_name("endpoint stereotype name");
            } else {
                p.error_here("expected attr or endpoints");
                p.synchronize({"attr", "endpoints", "stereotype"});
            }
        }
    }
    return s;
}

inline std::optional<CustomRuleSpec> parse_rule_spec(Parser& p) {
    // rule CODE on Stereotype constraint
    CustomRuleSpec spec;
    spec.span = p.peek().span;
    spec.code = p.expect_name("rule code");
    if (!p.accept_ident("on")) {
        p.error_here("expected 'on' and a selector stereotype");
        return std::nullopt;
    }
    spec.selector_stereotype = p.expect_name("selector stereotype");
    const Token& c = p.peek();
    if (!c.is(TokenKind::Ident)) {
        p.error_here("expected rule constraint");
        return std::nullopt;
    }
    std::string kind = p.next().text;
    auto one_param = [&]() -> std::optional<std::string> {
        if (!p.expect(TokenKind::LParen, "'('")) return std::nullopt;
        std::string v = p.expect_name("parameter");
        p.expect(TokenKind::RParen, "')'");
        return v;
    };
    if (kind == "endpoint_must_be") {
        spec.constraint = CustomRuleSpec::Constraint::EndpointMustBe;
        auto v = one_param();
        if (!v) return std::nullopt;
        spec.param = *v;
    } else if (kind == "attribute_required") {
        spec.constraint = CustomRuleSpec::Constraint::AttributeRequired;
        auto v = one_param();
        if (!v) return std::nullopt;
        spec.param = *v;
    } else if (kind == "attribute_matches") {
        spec.constraint = CustomRuleSpec::Constraint::AttributeMatches;
        if (!p.expect(TokenKind::LParen, "'('")) return std::nullopt;
        spec.param = p.expect_name("attribute name");
        p.expect(TokenKind::Comma, "','");
        if (!p.peek().is(TokenKind::String)) {
            p.error_here("expected regex string");
            return std::nullopt;
        }
        spec.regex = p.next().text;
        p.expect(TokenKind::RParen, "')'");
    } else if (kind == "must_have_inbound_link") {
        spec.constraint = CustomRuleSpec::Constraint::MustHaveInboundLink;
        auto v = one_param();
        if (!v) return std::nullopt;
        auto lt = link_type_from(*v);
        if (!lt) {
            p.error("PARSE-006", "unknown link type '" + *v + "'", c.span);
            return std::nullopt;
        }
        spec.link_type = *lt;
    } else if (kind == "must_be_connected_or_justified") {
        spec.constraint = CustomRuleSpec::Constraint::MustBeConnectedOrJustified;
    } else {
        p.error("PARSE-007", "unknown rule constraint '" + kind + "'", c.span);
        return std::nullopt;
    }
    return spec;
}

}  // namespace detail

inline ParsedProfiles parse_profile(std::string_view text, const std::string& path) {
    detail::Parser p(text, path);
    ParsedProfiles out;
    while (!p.at_end()) {
        if (p.accept_ident("profile")) {
            Profile prof;
            std::set<std::string> declared_kind;
            prof.span = p.peek().span;
            prof.name = p.expect_name("profile name");
            if (!p.expect(TokenKind::LBrace, "'{'")) {
                p.synchronize({"profile"});
                continue;
            }
            while (!p.accept(TokenKind::RBrace)) {
                if (p.at_end()) {
                    p.error_here("unterminated profile body");
                    break;
                }
                if (p.accept_ident("stereotype")) {
                    bool kind_declared = false;
                    if (auto s = detail::parse_stereotype(p, kind_declared)) {
                        if (kind_declared) declared_kind.insert(s->name);
                        prof.stereotypes.push_back(std::move(*s));
                    } else {
                        p.synchronize({"stereotype", "rules"});
                    }
                } else if (p.accept_ident("rules")) {
                    if (p.expect(TokenKind::LBrace, "'{'")) {
                        while (!p.accept(TokenKind::RBrace)) {
                            if (p.at_end()) {
                                p.error_here("unterminated rules body");
                                break;
                            }
                            if (p.accept_ident("rule")) {
                                if (auto r = detail::parse_rule_spec(p)) out.file.rules.push_back(std::move(*r));
                                else p.synchronize({"rule"});
                            } else {
                                p.error_here("expected rule");
                                p.synchronize({"rule"});
                            }
                        }
                    }
                } else {
                    p.error_here("expected stereotype or rules");
                    p.synchronize({"stereotype", "rules"});
                }
            }
            // Base kinds declared via 'extends' follow the parent chain; an
            // explicit 'kind' wins so mismatches surface in resolution.
            for (auto& s : prof.stereotypes) {
                if (!s.extends || declared_kind.count(s.name)) continue;
                const Stereotype* cur = &s;
                int guard = 0;
                while (cur->extends && guard++ < 64) {
                    const Stereotype* parent = prof.find(*cur->extends);
                    if (!parent) break;
                    cur = parent;
                }
                if (cur != &s && !cur->extends) s.base_kind = cur->base_kind;
            }
            out.file.profiles.push_back(std::move(prof));
        } else {
            p.error_here("expected profile");
            p.synchronize({"profile"});
        }
    }
    out.diagnostics = p.take_diagnostics();
    for (const auto& prof : out.file.profiles)
        for (auto& d : validate_profile(prof)) out.diagnostics.push_back(std::move(d));
    sort_diagnostics(out.diagnostics);
    return out;
}

// ---- architecture models (.arch) -------------------------------------------------

namespace detail {

struct ModelParseCtx {
    Parser& p;
    const ProfileSet& profiles;
    ArchModel& model;
};

// Splits collected attr statements across the applied stereotypes: a binding
// goes to the first stereotype whose effective attribute set declares it.
inline void attach_stereotypes(ModelParseCtx& ctx, BaseKind carrier_kind,
                               std::vector<AppliedStereotype>& applied_out,
                               const std::vector<std::pair<std::string, SourceSpan>>& names,
                               std::vector<std::tuple<std::string, Value, SourceSpan>>& bindings) {
    struct Resolved {
        std::string name;
        SourceSpan span;
        EffectiveStereotype eff;
    };
    std::vector<Resolved> resolved;
    for (const auto& [name, span] : names) {
        auto eff = ctx.profiles.resolve(name);
        if (!eff) {
            ctx.p.error("MODEL-006", "unknown stereotype '" + name + "'", span);
            continue;
        }
        if (eff->base_kind != carrier_kind) {
            ctx.p.error("MODEL-001",
                        "stereotype '" + name + "' applies to " + std::string(to_string(eff->base_kind)) +
                            ", not " + to_string(carrier_kind),
                        span);
            continue;
        }
        resolved.push_back({name, span, std::move(*eff)});
    }
    for (auto& r : resolved) applied_out.push_back({r.name, {}, r.span});
    for (auto& [name, value, span] : bindings) {
        bool placed = false;
        for (size_t k = 0; k < resolved.size(); ++k) {
            const AttributeDef* def = resolved[k].eff.find_attribute(name);
            if (!def) continue;
            Value v = value;
            if (def->kind == ValueKind::Dal && (v.kind == ValueKind::Enum || v.kind == ValueKind::String))
                v = Value::dal(v.as_string());
            if (auto err = check_value_kind(*def, v)) {
                ctx.p.error("MODEL-004", *err, span);
            } else {
                applied_out[k].bindings.emplace_back(name, std::move(v));
            }
            placed = true;
            break;
        }
        if (!placed && !resolved.empty()) {
            ctx.p.error("MODEL-003", "no applied stereotype declares attribute '" + name + "'", span);
        }
    }
    // Defaults for attributes left unset.
    for (size_t k = 0; k < resolved.size(); ++k) {
        for (const auto& def : resolved[k].eff.attributes) {
            if (!applied_out[k].binding(def.name) && def.default_value)
                applied_out[k].bindings.emplace_back(def.name, *def.default_value);
        }
    }
}

inline std::vector<std::pair<std::string, SourceSpan>> parse_stereotype_list(Parser& p) {
    std::vector<std::pair<std::string, SourceSpan>> names;
    if (p.accept(TokenKind::Colon)) {
        do {
            SourceSpan span = p.peek().span;
            names.emplace_back(p.expect_name("stereotype name"), span);
        } while (p.accept(TokenKind::Comma));
    }
    return names;
}

inline std::optional<ArchElement> parse_component(ModelParseCtx& ctx);

inline std::optional<ArchPort> parse_port(ModelParseCtx& ctx) {
    Parser& p = ctx.p;
    ArchPort port;
    port.span = p.peek().span;
    port.name = p.expect_name("port name");
    const Token& dir = p.peek();
    if (dir.is_ident("in")) port.direction = PortDirection::In;
    else if (dir.is_ident("out")) port.direction = PortDirection::Out;
    else if (dir.is_ident("inout")) port.direction = PortDirection::InOut;
    else {
        p.error_here("expected port direction in, out, or inout");
        return std::nullopt;
    }
    p.next();
    auto names = parse_stereotype_list(p);
    std::vector<std::tuple<std::string, Value, SourceSpan>> bindings;
    if (p.accept(TokenKind::LBrace)) {
        while (!p.accept(TokenKind::RBrace)) {
            if (p.at_end()) {
                p.error_here("unterminated port body");
                break;
            }
            if (p.accept_ident("attr")) {
                SourceSpan span = p.peek().span;
                std::string name = p.expect_name("attribute name");
                p.expect(TokenKind::Equal, "'='");
                auto v = p.accept_literal();
                if (v) bindings.emplace_back(std::move(name), std::move(*v), span);
                else p.error_here("expected attribute value");
            } else {
                p.error_here("expected attr");
                p.synchronize({"attr"});
            }
        }
    }
    attach_stereotypes(ctx, BaseKind::Port, port.stereotypes, names, bindings);
    return port;
}

inline std::optional<ArchElement> parse_component(ModelParseCtx& ctx) {
    Parser& p = ctx.p;
    ArchElement elem;
    elem.span = p.peek().span;
    elem.name = p.expect_name("component name");
    auto names = parse_stereotype_list(p);
    std::vector<std::tuple<std::string, Value, SourceSpan>> bindings;
    if (p.accept(TokenKind::LBrace)) {
        while (!p.accept(TokenKind::RBrace)) {
            if (p.at_end()) {
                p.error_here("unterminated component body");
                break;
            }
            if (p.accept_ident("attr")) {
                SourceSpan span = p.peek().span;
                std::string name = p.expect_name("attribute name");
                p.expect(TokenKind::Equal, "'='");
                auto v = p.accept_literal();
                if (v) bindings.emplace_back(std::move(name), std::move(*v), span);
                else p.error_here("expected attribute value");
            } else if (p.accept_ident("port")) {
                if (auto port = parse_port(ctx)) {
                    if (elem.find_port(port->name)) {
                        p.error("MODEL-007", "duplicate port '" + port->name + "'", port->span);
                    } else {
                        elem.ports.push_back(std::move(*port));
                    }
                } else {
                    p.synchronize({"attr", "port", "component"});
                }
            } else if (p.accept_ident("component")) {
                if (auto child = parse_component(ctx)) {
                    if (elem.find_child(child->name)) {
                        p.error("MODEL-008", "duplicate sibling component '" + child->name + "'", child->span);
                    } else {
                        elem.children.push_back(std::move(*child));
                    }
                } else {
                    p.synchronize({"attr", "port", "component"});
                }
            } else {
                p.error_here("expected attr, port, or component");
                p.synchronize({"attr", "port", "component"});
            }
        }
    }
    attach_stereotypes(ctx, BaseKind::Component, elem.stereotypes, names, bindings);
    return elem;
}

}  // namespace detail

inline ParsedModel parse_model(std::string_view text, const std::string& path, const ProfileSet& profiles) {
    detail::Parser p(text, path);
    ParsedModel out;
    if (!p.accept_ident("model")) {
        p.error_here("expected model");
        out.diagnostics = p.take_diagnostics();
        return out;
    }
    ArchModel model;
    model.span = p.peek().span;
    model.name = p.expect_name("model name");

    // Profiles actually visible to this model: resolution respects `uses`.
    ProfileSet visible;
    detail::ModelParseCtx ctx{p, visible, model};

    if (!p.expect(TokenKind::LBrace, "'{'")) {
        out.diagnostics = p.take_diagnostics();
        return out;
    }
    while (!p.accept(TokenKind::RBrace)) {
        if (p.at_end()) {
            p.error_here("unterminated model body");
            break;
        }
        if (p.accept_ident("kind")) {
            const Token& t = p.peek();
            if (t.is_ident("functional")) model.kind = ModelKind::Functional;
            else if (t.is_ident("physical")) model.kind = ModelKind::Physical;
            else {
                p.error_here("expected functional or physical");
                continue;
            }
            p.next();
        } else if (p.accept_ident("level")) {
            model.level = p.expect_name("level label");
        } else if (p.accept_ident("uses")) {
            do {
                std::string name = p.expect_name("profile name");
                const Profile* prof = profiles.profile(name);
                if (!prof) {
                    p.error("MODEL-009", "model uses unknown profile '" + name + "'", p.peek().span);
                } else {
                    model.used_profiles.push_back(name);
                    visible.add(*prof);
                }
            } while (p.accept(TokenKind::Comma));
        } else if (p.accept_ident("component")) {
            if (auto elem = detail::parse_component(ctx)) {
                bool dup = false;
                for (const auto& e : model.elements)
                    if (e.name == elem->name) dup = true;
                if (dup)
                    p.error("MODEL-008", "duplicate sibling component '" + elem->name + "'", elem->span);
                else
                    model.elements.push_back(std::move(*elem));
            } else {
                p.synchronize({"component", "connect"});
            }
        } else if (p.accept_ident("connect")) {
            ArchConnector conn;
            conn.span = p.peek().span;
            auto src = p.accept_path();
            if (!src) {
                p.error_here("expected source port path");
                p.synchronize({"component", "connect"});
                continue;
            }
            conn.source = std::move(*src);
            if (!p.expect(TokenKind::Arrow, "'->'")) {
                p.synchronize({"component", "connect"});
                continue;
            }
            auto dst = p.accept_path();
            if (!dst) {
                p.error_here("expected target port path");
                p.synchronize({"component", "connect"});
                continue;
            }
            conn.target = std::move(*dst);
            std::vector<std::pair<std::string, SourceSpan>> names = detail::parse_stereotype_list(p);
            std::vector<std::tuple<std::string, Value, SourceSpan>> bindings;
            if (p.accept(TokenKind::LBrace)) {
                while (!p.accept(TokenKind::RBrace)) {
                    if (p.at_end()) break;
                    if (p.accept_ident("attr")) {
                        SourceSpan span = p.peek().span;
                        std::string name = p.expect_name("attribute name");
                        p.expect(TokenKind::Equal, "'='");
                        auto v = p.accept_literal();
                        if (v) bindings.emplace_back(std::move(name), std::move(*v), span);
                    } else {
                        p.error_here("expected attr");
                        p.synchronize({"attr"});
                    }
                }
            }
            std::vector<AppliedStereotype> applied;
            detail::attach_stereotypes(ctx, BaseKind::Connector, applied, names, bindings);
            if (!applied.empty()) conn.stereotype = std::move(applied.front());
            model.connectors.push_back(std::move(conn));
        } else {
            p.error_here("expected kind, level, uses, component, or connect");
            p.synchronize({"kind", "level", "uses", "component", "connect"});
        }
    }
    if (!p.at_end()) p.error_here("unexpected content after model body");

    // Connector endpoints must resolve inside this model.
    for (const auto& conn : model.connectors) {
        if (!find_port(model, conn.source))
            p.error("MODEL-010", "connector source '" + conn.source.to_string() + "' does not resolve to a port",
                    conn.span);
        if (!find_port(model, conn.target))
            p.error("MODEL-011", "connector target '" + conn.target.to_string() + "' does not resolve to a port",
                    conn.span);
    }

    out.model = std::move(model);
    out.diagnostics = p.take_diagnostics();
    return out;
}

// ---- requirements and links (.req) ------------------------------------------------

inline ParsedRequirements parse_requirements(std::string_view text, const std::string& path) {
    detail::Parser p(text, path);
    ParsedRequirements out;
    auto parse_ref = [&]() -> std::optional<ArtifactRef> {
        const Token& t = p.peek();
        if (t.is(TokenKind::Ident)) {
            ArtifactRef ref;
            ref.text = p.next().text;
            ref.is_path = false;
            return ref;
        }
        if (t.is(TokenKind::String)) {
            ArtifactRef ref;
            ref.text = p.next().text;
            ref.is_path = true;
            // Names never contain '.', so splitting the quoted text is lossless.
            std::string seg;
            for (char c : ref.text) {
                if (c == '.') {
                    ref.path.segments.push_back(seg);
                    seg.clear();
                } else {
                    seg += c;
                }
            }
            ref.path.segments.push_back(seg);
            return ref;
        }
        return std::nullopt;
    };

    while (!p.at_end()) {
        bool is_assumption = false;
        if (p.accept_ident("requirement") || (is_assumption = p.accept_ident("assumption"))) {
            Requirement r;
            r.span = p.peek().span;
            r.id = p.expect_name("requirement id");
            if (is_assumption) r.type = ReqType::Assumption;
            for (;;) {
                if (p.accept_ident("level")) {
                    r.level = p.expect_name("level label");
                } else if (p.accept_ident("type")) {
                    std::string t = p.expect_name("requirement type");
                    auto rt = req_type_from(t);
                    if (!rt) p.error("PARSE-008", "unknown requirement type '" + t + "'", r.span);
                    else r.type = *rt;
                } else {
                    break;
                }
            }
            if (p.accept(TokenKind::LBrace)) {
                while (!p.accept(TokenKind::RBrace)) {
                    if (p.at_end()) {
                        p.error_here("unterminated requirement body");
                        break;
                    }
                    const Token& f = p.peek();
                    if (!f.is(TokenKind::Ident)) {
                        p.error_here("expected requirement field");
                        p.synchronize({"requirement", "assumption", "link"});
                        break;
                    }
                    std::string field = p.next().text;
                    if (!p.expect(TokenKind::Equal, "'='")) continue;
                    if (field == "min_cut_order") {
                        if (p.peek().is(TokenKind::Integer)) r.min_cut_order = static_cast<int>(p.next().int_value);
                        else p.error_here("expected integer");
                        continue;
                    }
                    if (!p.peek().is(TokenKind::String)) {
                        p.error_here("expected string value");
                        continue;
                    }
                    std::string value = p.next().text;
                    if (field == "text") r.text = std::move(value);
                    else if (field == "rationale") r.rationale = std::move(value);
                    else if (field == "justification") r.justification = std::move(value);
                    else p.error("PARSE-009", "unknown requirement field '" + field + "'", f.span);
                }
            }
            if (out.set.find(r.id)) {
                p.error("REQ-001", "duplicate requirement id '" + r.id + "'", r.span);
            } else {
                out.set.requirements.push_back(std::move(r));
            }
        } else if (p.accept_ident("link")) {
            TraceLink link;
            link.span = p.peek().span;
            auto src = parse_ref();
            if (!src) {
                p.error_here("expected link source");
                p.synchronize({"requirement", "assumption", "link"});
                continue;
            }
            link.source = std::move(*src);
            const Token& lt = p.peek();
            if (!lt.is(TokenKind::Ident)) {
                p.error_here("expected link type");
                p.synchronize({"requirement", "assumption", "link"});
                continue;
            }
            std::string type_word = p.next().text;
            auto type = link_type_from(type_word);
            if (!type) {
                p.error("REQ-002", "unknown link type '" + type_word + "'", lt.span);
                p.synchronize({"requirement", "assumption", "link"});
                continue;
            }
            link.type = *type;
            auto dst = parse_ref();
            if (!dst) {
                p.error_here("expected link target");
                p.synchronize({"requirement", "assumption", "link"});
                continue;
            }
            link.target = std::move(*dst);
            out.set.links.push_back(std::move(link));
        } else {
            p.error_here("expected requirement, assumption, or link");
            p.synchronize({"requirement", "assumption", "link"});
        }
    }
    out.diagnostics = p.take_diagnostics();
    return out;
}

// ---- fault propagation models (.fpm) ----------------------------------------------

namespace detail {

inline FpmExprPtr parse_fpm_expr(Parser& p);

inline FpmExprPtr parse_fpm_factor(Parser& p) {
    SourceSpan span = p.peek().span;
    if (p.accept(TokenKind::LParen)) {
        FpmExprPtr e = parse_fpm_expr(p);
        p.expect(TokenKind::RParen, "')'");
        return e;
    }
    if (p.peek().is_ident("in_failure")) {
        p.next();
        if (!p.expect(TokenKind::LParen, "'('")) return nullptr;
        auto path = p.accept_path();
        p.expect(TokenKind::RParen, "')'");
        if (!path || path->segments.size() != 2) {
            p.error("FPM-002", "in_failure expects port.failure", span);
            return nullptr;
        }
        return FpmExpr::in_failure(path->segments[0], path->segments[1], span);
    }
    auto path = p.accept_path();
    if (!path) {
        p.error_here("expected failure expression");
        return nullptr;
    }
    return FpmExpr::failure_ref(std::move(*path), span);
}

inline FpmExprPtr parse_fpm_term(Parser& p) {
    SourceSpan span = p.peek().span;
    FpmExprPtr first = parse_fpm_factor(p);
    if (!first) return nullptr;
    std::vector<FpmExprPtr> kids{first};
    while (p.accept(TokenKind::Amp)) {
        FpmExprPtr next = parse_fpm_factor(p);
        if (!next) return nullptr;
        kids.push_back(next);
    }
    if (kids.size() == 1) return kids[0];
    return FpmExpr::make_gate(GateKind::And, std::move(kids), span);
}

inline FpmExprPtr parse_fpm_expr(Parser& p) {
    SourceSpan span = p.peek().span;
    FpmExprPtr first = parse_fpm_term(p);
    if (!first) return nullptr;
    std::vector<FpmExprPtr> kids{first};
    while (p.accept(TokenKind::Pipe)) {
        FpmExprPtr next = parse_fpm_term(p);
        if (!next) return nullptr;
        kids.push_back(next);
    }
    if (kids.size() == 1) return kids[0];
    return FpmExpr::make_gate(GateKind::Or, std::move(kids), span);
}

}  // namespace detail

inline ParsedFpm parse_fpm(std::string_view text, const std::string& path) {
    detail::Parser p(text, path);
    ParsedFpm out;
    if (!p.accept_ident("fpm")) {
        p.error_here("expected fpm");
        out.diagnostics = p.take_diagnostics();
        return out;
    }
    Fpm fpm;
    fpm.span = p.peek().span;
    fpm.name = p.expect_name("fpm name");
    if (p.accept_ident("for")) fpm.model_name = p.expect_name("model name");
    else p.error_here("expected 'for' and the physical model name");
    if (!p.expect(TokenKind::LBrace, "'{'")) {
        out.diagnostics = p.take_diagnostics();
        return out;
    }
    while (!p.accept(TokenKind::RBrace)) {
        if (p.at_end()) {
            p.error_here("unterminated fpm body");
            break;
        }
        if (p.accept_ident("component")) {
            FpmComponent comp;
            comp.span = p.peek().span;
            auto cpath = p.accept_path();
            if (!cpath) {
                p.error_here("expected component path");
                p.synchronize({"component", "edge", "top_event"});
                continue;
            }
            comp.path = std::move(*cpath);
            if (p.expect(TokenKind::LBrace, "'{'")) {
                while (!p.accept(TokenKind::RBrace)) {
                    if (p.at_end()) {
                        p.error_here("unterminated fpm component body");
                        break;
                    }
                    if (p.accept_ident("port")) {
                        FpmPort port;
                        port.name = p.expect_name("port name");
                        const Token& d = p.peek();
                        if (d.is_ident("in")) port.direction = PortDirection::In;
                        else if (d.is_ident("out")) port.direction = PortDirection::Out;
                        else if (d.is_ident("inout")) port.direction = PortDirection::InOut;
                        else {
                            p.error_here("expected port direction");
                            continue;
                        }
                        p.next();
                        comp.ports.push_back(std::move(port));
                    } else if (p.accept_ident("basic_event")) {
                        BasicEvent ev;
                        ev.span = p.peek().span;
                        ev.name = p.expect_name("basic event name");
                        if (p.accept_ident("rate")) {
                            const Token& r = p.peek();
                            if (r.is(TokenKind::Real)) ev.rate = p.next().real_value;
                            else if (r.is(TokenKind::Integer)) ev.rate = static_cast<double>(p.next().int_value);
                            else p.error_here("expected failure rate");
                        }
                        comp.basic_events.push_back(std::move(ev));
                    } else if (p.accept_ident("out_failure")) {
                        OutFailure of;
                        of.span = p.peek().span;
                        auto fpath = p.accept_path();
                        if (!fpath || fpath->segments.size() > 2) {
                            p.error("FPM-003", "out_failure expects name or port.name", of.span);
                            p.synchronize({"port", "basic_event", "out_failure"});
                            continue;
                        }
                        if (fpath->segments.size() == 2) {
                            of.port = fpath->segments[0];
                            of.name = fpath->segments[1];
                        } else {
                            of.name = fpath->segments[0];
                        }
                        if (!p.expect(TokenKind::Equal, "'='")) continue;
                        of.expr = detail::parse_fpm_expr(p);
                        if (of.expr) comp.out_failures.push_back(std::move(of));
                        else p.synchronize({"port", "basic_event", "out_failure"});
                    } else {
                        p.error_here("expected port, basic_event, or out_failure");
                        p.synchronize({"port", "basic_event", "out_failure"});
                    }
                }
            }
            fpm.components.push_back(std::move(comp));
        } else if (p.accept_ident("edge")) {
            auto src = p.accept_path();
            if (!src || src->segments.size() < 2) {
                p.error_here("expected edge source component.port");
                p.synchronize({"component", "edge", "top_event"});
                continue;
            }
            if (!p.expect(TokenKind::Arrow, "'->'")) {
                p.synchronize({"component", "edge", "top_event"});
                continue;
            }
            auto dst = p.accept_path();
            if (!dst || dst->segments.size() < 2) {
                p.error_here("expected edge target component.port");
                p.synchronize({"component", "edge", "top_event"});
                continue;
            }
            FpmEdge edge;
            edge.source_port = src->segments.back();
            src->segments.pop_back();
            edge.source_component = std::move(*src);
            edge.target_port = dst->segments.back();
            dst->segments.pop_back();
            edge.target_component = std::move(*dst);
            fpm.edges.push_back(std::move(edge));
        } else if (p.accept_ident("top_event")) {
            TopEvent te;
            te.span = p.peek().span;
            te.name = p.expect_name("top event name");
            if (!p.expect(TokenKind::Equal, "'='")) {
                p.synchronize({"component", "edge", "top_event"});
                continue;
            }
            te.expr = detail::parse_fpm_expr(p);
            if (te.expr) fpm.top_events.push_back(std::move(te));
            else p.synchronize({"component", "edge", "top_event"});
        } else {
            p.error_here("expected component, edge, or top_event");
            p.synchronize({"component", "edge", "top_event"});
        }
    }
    out.fpm = std::move(fpm);
    out.diagnostics = p.take_diagnostics();
    return out;
}

// ---- FHA results (.fha) -------------------------------------------------------------

inline ParsedFha parse_fha(std::string_view text, const std::string& path) {
    detail::Parser p(text, path);
    ParsedFha out;
    if (!p.accept_ident("fha")) {
        p.error_here("expected fha");
        out.diagnostics = p.take_diagnostics();
        return out;
    }
    FhaFile fha;
    fha.span = p.peek().span;
    if (p.accept_ident("for")) fha.model_name = p.expect_name("model name");
    else p.error_here("expected 'for' and the functional model name");
    if (!p.expect(TokenKind::LBrace, "'{'")) {
        out.diagnostics = p.take_diagnostics();
        return out;
    }
    while (!p.accept(TokenKind::RBrace)) {
        if (p.at_end()) {
            p.error_here("unterminated fha body");
            break;
        }
        if (!p.accept_ident("failure_condition")) {
            p.error_here("expected failure_condition");
            p.synchronize({"failure_condition"});
            continue;
        }
        FhaResult res;
        res.span = p.peek().span;
        res.id = p.expect_name("failure condition id");
        if (!p.expect(TokenKind::LBrace, "'{'")) {
            p.synchronize({"failure_condition"});
            continue;
        }
        while (!p.accept(TokenKind::RBrace)) {
            if (p.at_end()) {
                p.error_here("unterminated failure_condition body");
                break;
            }
            const Token& f = p.peek();
            if (!f.is(TokenKind::Ident)) {
                p.error_here("expected failure condition field");
                break;
            }
            std::string field = p.next().text;
            if (!p.expect(TokenKind::Equal, "'='")) continue;
            if (field == "function") {
                if (p.peek().is(TokenKind::String)) {
                    std::string raw = p.next().text;
                    std::string seg;
                    for (char c : raw) {
                        if (c == '.') {
                            res.function_path.segments.push_back(seg);
                            seg.clear();
                        } else {
                            seg += c;
                        }
                    }
                    res.function_path.segments.push_back(seg);
                } else {
                    p.error_here("expected quoted function path");
                }
            } else if (field == "condition" || field == "effect") {
                if (p.peek().is(TokenKind::String)) {
                    std::string v = p.next().text;
                    (field == "condition" ? res.condition : res.effect) = std::move(v);
                } else {
                    p.error_here("expected string");
                }
            } else if (field == "classification") {
                std::string word = p.expect_name("classification");
                auto c = classification_from(word);
                if (!c) p.error("FHA-001", "unknown classification '" + word + "'", f.span);
                else res.classification = *c;
            } else if (field == "fdal") {
                std::string word = p.expect_name("fdal level");
                if (word.size() == 1 && word[0] >= 'A' && word[0] <= 'E') res.fdal = word[0];
                else p.error("FHA-002", "fdal must be A..E", f.span);
            } else {
                p.error("FHA-003", "unknown failure condition field '" + field + "'", f.span);
            }
        }
        fha.results.push_back(std::move(res));
    }
    out.fha = std::move(fha);
    out.diagnostics = p.take_diagnostics();
    return out;
}

// ---- project manifest ----------------------------------------------------------------

inline ParsedManifest parse_manifest(std::string_view text, const std::string& path) {
    detail::Parser p(text, path);
    ParsedManifest out;
    if (!p.accept_ident("project")) {
        p.error_here("expected project");
        out.diagnostics = p.take_diagnostics();
        return out;
    }
    ProjectManifest m;
    m.span = p.peek().span;
    m.project_name = p.expect_name("project name");
    if (!p.expect(TokenKind::LBrace, "'{'")) {
        out.diagnostics = p.take_diagnostics();
        return out;
    }
    auto parse_list = [&](std::vector<std::string>& dst) {
        if (!p.expect(TokenKind::LBracket, "'['")) return;
        if (p.accept(TokenKind::RBracket)) return;
        do {
            if (p.peek().is(TokenKind::String)) dst.push_back(p.next().text);
            else {
                p.error_here("expected file path string");
                break;
            }
        } while (p.accept(TokenKind::Comma));
        p.expect(TokenKind::RBracket, "']'");
    };
    while (!p.accept(TokenKind::RBrace)) {
        if (p.at_end()) {
            p.error_here("unterminated project body");
            break;
        }
        if (p.accept_ident("level")) m.level = p.expect_name("level label");
        else if (p.accept_ident("profiles")) parse_list(m.profiles);
        else if (p.accept_ident("models")) parse_list(m.models);
        else if (p.accept_ident("requirements")) parse_list(m.requirements);
        else if (p.accept_ident("links")) parse_list(m.links);
        else if (p.accept_ident("fpm")) parse_list(m.fpm);
        else if (p.accept_ident("fha_results")) parse_list(m.fha_results);
        else if (p.accept_ident("severity")) {
            SourceSpan span = p.peek().span;
            std::string code = p.expect_name("rule code");
            p.expect(TokenKind::Equal, "'='");
            std::string word = p.expect_name("severity");
            auto sev = detail::severity_from(word);
            if (!sev) p.error("PARSE-010", "unknown severity '" + word + "'", span);
            else m.severity_overrides[code] = *sev;
        } else if (p.accept_ident("nomenclature")) {
            std::string stereo = p.expect_name("stereotype name");
            p.expect(TokenKind::Equal, "'='");
            if (p.peek().is(TokenKind::String)) m.nomenclature[stereo] = p.next().text;
            else p.error_here("expected regex string");
        } else {
            p.error_here("unknown manifest entry");
            p.synchronize({"level", "profiles", "models", "requirements", "links", "fpm", "fha_results",
                           "severity", "nomenclature"});
        }
    }
    out.manifest = std::move(m);
    out.diagnostics = p.take_diagnostics();
    return out;
}

}  // namespace archkit
