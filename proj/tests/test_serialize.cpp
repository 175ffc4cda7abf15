#include "test_support.hpp"

using namespace archkit;
using testsup::Rng;

namespace {

const char* kSyllables[] = {"alpha", "brake", "cmd", "delta", "eng", "flap", "gear", "hyd",
                            "imu", "jet", "krl", "lift", "mon", "nav", "out", "pwr"};

std::string gen_name(Rng& rng, bool allow_space = true) {
    std::string n = kSyllables[rng.below(16)];
    n[0] = static_cast<char>(n[0] - 'a' + 'A');
    int extra = rng.below(3);
    for (int i = 0; i < extra; ++i) {
        if (allow_space && rng.chance(20)) n += ' ';
        else if (rng.chance(30)) n += '-';
        else n += '_';
        n += kSyllables[rng.below(16)];
    }
    n += std::to_string(rng.below(100));
    return n;
}

Value gen_value(Rng& rng, const AttributeDef& def) {
    switch (def.kind) {
        case ValueKind::String: return Value::string(gen_name(rng));
        case ValueKind::Integer: return Value::integer(rng.below(1000) - 500);
        case ValueKind::Real:
            if (rng.chance(30)) return Value::integer(rng.below(100));
            return Value::real(static_cast<double>(rng.below(100000)) / 977.0);
        case ValueKind::Boolean: return Value::boolean(rng.chance(50));
        case ValueKind::Dal: return Value::dal(std::string(1, static_cast<char>('A' + rng.below(5))));
        case ValueKind::Enum: return Value::enum_literal(def.enum_literals[rng.below(static_cast<int>(def.enum_literals.size()))]);
    }
    return Value::string("x");
}

ProfileFile gen_profile_file(Rng& rng) {
    ProfileFile file;
    Profile prof;
    prof.name = gen_name(rng);
    int count = 1 + rng.below(5);
    int attr_counter = 0;
    for (int i = 0; i < count; ++i) {
        Stereotype s;
        s.name = "S" + std::to_string(i) + "_" + gen_name(rng, false);
        BaseKind kind = static_cast<BaseKind>(rng.below(3));
        // Extend an earlier stereotype of the same kind when one exists.
        std::vector<int> candidates;
        for (int k = 0; k < i; ++k)
            if (prof.stereotypes[static_cast<size_t>(k)].base_kind == kind) candidates.push_back(k);
        if (!candidates.empty() && rng.chance(40)) {
            const Stereotype& base = prof.stereotypes[static_cast<size_t>(candidates[rng.below(static_cast<int>(candidates.size()))])];
            s.extends = base.name;
            s.base_kind = base.base_kind;
        } else {
            s.base_kind = kind;
        }
        s.abstract_ = rng.chance(20);
        if (s.base_kind == BaseKind::Port && rng.chance(30)) s.bidirectional = true;
        if (s.base_kind == BaseKind::Connector && rng.chance(30))
            s.endpoint_constraint = "S_" + gen_name(rng, false);
        int attrs = rng.below(4);
        for (int a = 0; a < attrs; ++a) {
            AttributeDef def;
            def.name = "attr" + std::to_string(attr_counter++);
            def.kind = static_cast<ValueKind>(rng.below(6));
            if (def.kind == ValueKind::Enum) {
                int lits = 1 + rng.below(3);
                for (int l = 0; l < lits; ++l) def.enum_literals.push_back("lit" + std::to_string(l) + "_" + std::to_string(rng.below(50)));
            }
            def.required = rng.chance(60);
            if (rng.chance(40)) def.default_value = gen_value(rng, def);
            s.attributes.push_back(std::move(def));
        }
        prof.stereotypes.push_back(std::move(s));
    }
    file.profiles.push_back(std::move(prof));
    return file;
}

// Fixed profile for model generation so every generated model is well formed.
const char* kModelGenProfile = R"(profile Gen {
  stereotype Box kind component {
    attr description: string
    attr weight: real optional
    attr count: integer optional
    attr armed: boolean optional
  }
  stereotype Pin kind port {
    attr signal: string optional
  }
  stereotype Duplex kind port bidirectional
  stereotype Wire kind connector {
    attr label: string optional
  }
})";

struct PortSite {
    QualifiedPath element;
    std::string port;
};

void gen_element(Rng& rng, ArchElement& e, int depth, int& counter, QualifiedPath prefix,
                 std::vector<PortSite>& sites) {
    e.name = "E" + std::to_string(counter++) + "_" + gen_name(rng, false);
    prefix.segments.push_back(e.name);
    AppliedStereotype st;
    st.name = "Box";
    st.bindings.emplace_back("description", Value::string(gen_name(rng)));
    if (rng.chance(40)) st.bindings.emplace_back("weight", Value::real(static_cast<double>(rng.below(5000)) / 31.0));
    if (rng.chance(30)) st.bindings.emplace_back("count", Value::integer(rng.below(20)));
    if (rng.chance(20)) st.bindings.emplace_back("armed", Value::boolean(rng.chance(50)));
    e.stereotypes.push_back(std::move(st));
    int ports = rng.below(3);
    for (int i = 0; i < ports; ++i) {
        ArchPort p;
        p.name = "P" + std::to_string(counter++);
        bool duplex = rng.chance(25);
        p.direction = duplex ? PortDirection::InOut
                             : (rng.chance(50) ? PortDirection::In : PortDirection::Out);
        AppliedStereotype ps;
        ps.name = duplex ? "Duplex" : "Pin";
        if (!duplex && rng.chance(40)) ps.bindings.emplace_back("signal", Value::string(gen_name(rng)));
        p.stereotypes.push_back(std::move(ps));
        sites.push_back({prefix, p.name});
        e.ports.push_back(std::move(p));
    }
    if (depth < 2) {
        int kids = rng.below(3);
        for (int i = 0; i < kids; ++i) {
            ArchElement child;
            gen_element(rng, child, depth + 1, counter, prefix, sites);
            e.children.push_back(std::move(child));
        }
    }
}

ArchModel gen_model(Rng& rng) {
    ArchModel m;
    m.name = "M" + gen_name(rng, false);
    m.kind = ModelKind::Physical;
    m.level = "L" + std::to_string(rng.below(4));
    m.used_profiles = {"Gen"};
    int counter = 0;
    std::vector<PortSite> sites;
    int roots = 1 + rng.below(3);
    for (int i = 0; i < roots; ++i) {
        ArchElement e;
        gen_element(rng, e, 0, counter, {}, sites);
        m.elements.push_back(std::move(e));
    }
    if (sites.size() >= 2) {
        int conns = rng.below(static_cast<int>(sites.size()));
        for (int i = 0; i < conns; ++i) {
            const PortSite& a = sites[static_cast<size_t>(rng.below(static_cast<int>(sites.size())))];
            const PortSite& b = sites[static_cast<size_t>(rng.below(static_cast<int>(sites.size())))];
            ArchConnector c;
            c.source = a.element;
            c.source.segments.push_back(a.port);
            c.target = b.element;
            c.target.segments.push_back(b.port);
            c.stereotype.name = "Wire";
            if (rng.chance(40)) c.stereotype.bindings.emplace_back("label", Value::string(gen_name(rng)));
            m.connectors.push_back(std::move(c));
        }
    }
    return m;
}

RequirementSet gen_requirements(Rng& rng) {
    RequirementSet set;
    const char* levels[] = {"aircraft", "system", "item", "test"};
    int count = 1 + rng.below(6);
    for (int i = 0; i < count; ++i) {
        Requirement r;
        r.id = "R-" + std::to_string(i) + "-" + std::to_string(rng.below(100));
        r.level = levels[rng.below(4)];
        r.type = static_cast<ReqType>(rng.below(6));
        r.text = gen_name(rng) + " shall " + gen_name(rng) + " with \"quotes\" and \\slashes";
        if (rng.chance(40)) r.rationale = gen_name(rng);
        if (r.type == ReqType::Derived || r.type == ReqType::Assumption || rng.chance(20))
            r.justification = gen_name(rng);
        if (r.type == ReqType::Safety && rng.chance(50)) r.min_cut_order = 1 + rng.below(4);
        set.requirements.push_back(std::move(r));
    }
    int links = rng.below(6);
    for (int i = 0; i < links; ++i) {
        TraceLink l;
        l.source.text = set.requirements[static_cast<size_t>(rng.below(count))].id;
        l.type = static_cast<LinkType>(rng.below(6));
        if (rng.chance(50)) {
            l.target.is_path = true;
            QualifiedPath p;
            p.segments = {"M" + std::to_string(rng.below(5)), gen_name(rng), gen_name(rng)};
            l.target.path = p;
            l.target.text = p.plain();
        } else {
            l.target.text = set.requirements[static_cast<size_t>(rng.below(count))].id;
        }
        set.links.push_back(std::move(l));
    }
    return set;
}

FpmExprPtr gen_fpm_expr(Rng& rng, int depth) {
    if (depth >= 3 || rng.chance(45)) {
        switch (rng.below(3)) {
            case 0: return FpmExpr::failure_ref(QualifiedPath{{"ev" + std::to_string(rng.below(8))}});
            case 1:
                return FpmExpr::failure_ref(
                    QualifiedPath{{"P" + std::to_string(rng.below(4)), "f" + std::to_string(rng.below(4))}});
            default:
                return FpmExpr::in_failure("P" + std::to_string(rng.below(4)), "f" + std::to_string(rng.below(4)));
        }
    }
    int kids = 2 + rng.below(2);
    std::vector<FpmExprPtr> children;
    for (int i = 0; i < kids; ++i) children.push_back(gen_fpm_expr(rng, depth + 1));
    return FpmExpr::make_gate(rng.chance(50) ? GateKind::And : GateKind::Or, std::move(children));
}

Fpm gen_fpm(Rng& rng) {
    Fpm fpm;
    fpm.name = "F" + gen_name(rng, false);
    fpm.model_name = "M" + gen_name(rng, false);
    int comps = 1 + rng.below(4);
    for (int i = 0; i < comps; ++i) {
        FpmComponent c;
        c.path.segments.push_back("C" + std::to_string(i));
        if (rng.chance(40)) c.path.segments.push_back("Sub " + std::to_string(rng.below(4)));
        int ports = rng.below(4);
        for (int k = 0; k < ports; ++k)
            c.ports.push_back({"P" + std::to_string(k), rng.chance(50) ? PortDirection::In : PortDirection::Out});
        int events = rng.below(3);
        for (int k = 0; k < events; ++k) {
            BasicEvent ev;
            ev.name = "ev" + std::to_string(k);
            if (rng.chance(60)) ev.rate = static_cast<double>(1 + rng.below(99)) * 1e-7;
            c.basic_events.push_back(std::move(ev));
        }
        int fails = rng.below(3);
        for (int k = 0; k < fails; ++k) {
            OutFailure of;
            if (!c.ports.empty() && rng.chance(50)) of.port = c.ports[static_cast<size_t>(rng.below(ports))].name;
            of.name = "f" + std::to_string(k);
            of.expr = gen_fpm_expr(rng, 0);
            c.out_failures.push_back(std::move(of));
        }
        fpm.components.push_back(std::move(c));
    }
    int edges = rng.below(4);
    for (int i = 0; i < edges; ++i) {
        const FpmComponent& a = fpm.components[static_cast<size_t>(rng.below(comps))];
        const FpmComponent& b = fpm.components[static_cast<size_t>(rng.below(comps))];
        if (a.ports.empty() || b.ports.empty()) continue;
        fpm.edges.push_back({a.path, a.ports[static_cast<size_t>(rng.below(static_cast<int>(a.ports.size())))].name,
                             b.path, b.ports[static_cast<size_t>(rng.below(static_cast<int>(b.ports.size())))].name});
    }
    int tops = rng.below(3);
    for (int i = 0; i < tops; ++i) {
        TopEvent t;
        t.name = "Top" + std::to_string(i);
        QualifiedPath p = fpm.components[static_cast<size_t>(rng.below(comps))].path;
        p.segments.push_back("f0");
        t.expr = FpmExpr::failure_ref(std::move(p));
        fpm.top_events.push_back(std::move(t));
    }
    return fpm;
}

}  // namespace

TEST_CASE("profile serialization round-trips on generated inputs") {
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed * 0x2545f4914f6cdd1dull);
        ProfileFile gen = gen_profile_file(rng);
        std::string text1 = serialize_profile_file(gen);
        INFO("seed " << seed << "\n" << text1);
        ParsedProfiles first = parse_profile(text1, "gen.prof");
        REQUIRE(first.ok());
        std::string text2 = serialize_profile_file(first.file);
        ParsedProfiles second = parse_profile(text2, "gen.prof");
        REQUIRE(second.ok());
        REQUIRE(first.file.profiles.size() == second.file.profiles.size());
        for (size_t i = 0; i < first.file.profiles.size(); ++i)
            REQUIRE(structurally_equal(first.file.profiles[i], second.file.profiles[i]));
        REQUIRE(text1 == text2);
    }
}

TEST_CASE("model serialization round-trips on generated inputs") {
    ParsedProfiles pp = parse_profile(kModelGenProfile, "gen.prof");
    REQUIRE(pp.ok());
    ProfileSet profiles;
    for (const auto& p : pp.file.profiles) profiles.add(p);
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed * 0x9e3779b97f4a7c15ull);
        ArchModel gen = gen_model(rng);
        std::string text1 = serialize_model(gen);
        INFO("seed " << seed << "\n" << text1);
        ParsedModel first = parse_model(text1, "gen.arch", profiles);
        REQUIRE(first.ok());
        std::string text2 = serialize_model(*first.model);
        ParsedModel second = parse_model(text2, "gen.arch", profiles);
        REQUIRE(second.ok());
        REQUIRE(structurally_equal(*first.model, *second.model));
        REQUIRE(text1 == text2);
    }
}

TEST_CASE("requirement serialization round-trips on generated inputs") {
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed * 0xd1342543de82ef95ull);
        RequirementSet gen = gen_requirements(rng);
        std::string text1 = serialize_requirements(gen);
        INFO("seed " << seed << "\n" << text1);
        ParsedRequirements first = parse_requirements(text1, "gen.req");
        REQUIRE(first.ok());
        REQUIRE(structurally_equal(gen, first.set));
        std::string text2 = serialize_requirements(first.set);
        REQUIRE(text1 == text2);
    }
}

TEST_CASE("fpm serialization round-trips on generated inputs") {
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed * 0xaf251af3b0f025b5ull);
        Fpm gen = gen_fpm(rng);
        std::string text1 = serialize_fpm(gen);
        INFO("seed " << seed << "\n" << text1);
        ParsedFpm first = parse_fpm(text1, "gen.fpm");
        REQUIRE(first.ok());
        REQUIRE(structurally_equal(gen, *first.fpm));
        std::string text2 = serialize_fpm(*first.fpm);
        REQUIRE(text1 == text2);
    }
}

TEST_CASE("value serialization keeps reals and integers distinct") {
    CHECK(serialize_value(Value::real(3.0)) == "3.0");
    CHECK(serialize_value(Value::integer(3)) == "3");
    CHECK(serialize_value(Value::string("a \"b\" \\c")) == "\"a \\\"b\\\" \\\\c\"");
    CHECK(value_display(Value::string("plain")) == "plain");
    CHECK(serialize_value(Value::dal("B")) == "B");
}
