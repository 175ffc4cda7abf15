#include "test_support.hpp"

using namespace archkit;

namespace {

ProfileSet default_profiles(std::vector<Profile>& storage) {
    ParsedProfiles func = parse_profile(kFunctionalProfileText, "functional.prof");
    ParsedProfiles phys = parse_profile(kPhysicalProfileText, "physical.prof");
    REQUIRE(func.ok());
    REQUIRE(phys.ok());
    for (auto& p : func.file.profiles) storage.push_back(std::move(p));
    for (auto& p : phys.file.profiles) storage.push_back(std::move(p));
    ProfileSet set;
    for (const auto& p : storage) set.add(p);
    return set;
}

}  // namespace

TEST_CASE("lexer tracks positions, strings, numbers, and dashed identifiers") {
    LexResult lr = lex("SYS-REQ-001 \"a b\" 3.5e-2 42 -> . { }", "t");
    REQUIRE(lr.diagnostics.empty());
    REQUIRE(lr.tokens.size() >= 8);
    CHECK(lr.tokens[0].kind == TokenKind::Ident);
    CHECK(lr.tokens[0].text == "SYS-REQ-001");
    CHECK(lr.tokens[1].kind == TokenKind::String);
    CHECK(lr.tokens[1].text == "a b");
    CHECK(lr.tokens[2].kind == TokenKind::Real);
    CHECK(lr.tokens[2].real_value == Catch::Approx(0.035));
    CHECK(lr.tokens[3].kind == TokenKind::Integer);
    CHECK(lr.tokens[4].kind == TokenKind::Arrow);
    CHECK(lr.tokens[0].span.line == 1);
    CHECK(lr.tokens[0].span.column == 1);
    CHECK(lr.tokens[1].span.column == 13);
}

TEST_CASE("lexer reports unterminated strings and stray characters") {
    LexResult bad = lex("component @", "t");
    REQUIRE_FALSE(bad.diagnostics.empty());
    CHECK(bad.diagnostics.front().code == "PARSE-001");

    LexResult open = lex("attr x = \"oops", "t");
    REQUIRE_FALSE(open.diagnostics.empty());
    CHECK(open.diagnostics.front().code == "PARSE-002");
}

TEST_CASE("model parsing builds the hierarchy with stereotype bindings") {
    std::vector<Profile> storage;
    ProfileSet profiles = default_profiles(storage);
    ParsedModel pm = parse_model(R"(model M {
      kind physical
      level L1
      uses Physical
      component Box: LRU {
        attr description = "box"
        port P1 out : DiscretePort
        component Inner: Software_Item {
          attr description = "logic"
          attr idal = B
        }
      }
    })", "m.arch", profiles);
    REQUIRE(pm.ok());
    const ArchModel& m = *pm.model;
    CHECK(m.kind == ModelKind::Physical);
    CHECK(m.level == "L1");
    REQUIRE(m.elements.size() == 1);
    const ArchElement& box = m.elements[0];
    CHECK(box.stereotypes[0].name == "LRU");
    CHECK(value_display(*box.stereotypes[0].binding("description")) == "box");
    REQUIRE(box.ports.size() == 1);
    CHECK(box.ports[0].direction == PortDirection::Out);
    REQUIRE(box.children.size() == 1);
    const Value* idal = box.children[0].stereotypes[0].binding("idal");
    REQUIRE(idal != nullptr);
    CHECK(idal->kind == ValueKind::Dal);
    CHECK(value_display(*idal) == "B");
}

TEST_CASE("model parsing flags unknown stereotypes, kinds, and endpoints") {
    std::vector<Profile> storage;
    ProfileSet profiles = default_profiles(storage);
    ParsedModel pm = parse_model(R"(model M {
      kind physical
      uses Physical
      component A: Ghost
      component B: DiscretePort
      component C: LRU {
        attr description = "c"
      }
      connect C.Nope -> A.Also : DiscreteLink
    })", "m.arch", profiles);
    REQUIRE_FALSE(pm.ok());
    std::vector<std::string> codes;
    for (const auto& d : pm.diagnostics) codes.push_back(d.code);
    CHECK(std::count(codes.begin(), codes.end(), "MODEL-006") == 1);
    CHECK(std::count(codes.begin(), codes.end(), "MODEL-001") == 1);
    CHECK(std::count(codes.begin(), codes.end(), "MODEL-010") == 1);
    CHECK(std::count(codes.begin(), codes.end(), "MODEL-011") == 1);
}

TEST_CASE("parser recovers and keeps reporting after each error") {
    std::vector<Profile> storage;
    ProfileSet profiles = default_profiles(storage);
    // Three independent mistakes; recovery must surface all of them.
    ParsedModel pm = parse_model(R"(model M {
      kind physical
      uses Physical
      component A: Ghost1 {
        attr description = "a"
      }
      component B: Ghost2 {
        attr description = "b"
      }
      component C: Ghost3 {
        attr description = "c"
      }
    })", "m.arch", profiles);
    int errors = 0;
    for (const auto& d : pm.diagnostics)
        if (d.severity == Severity::Error) ++errors;
    CHECK(errors >= 3);
}

TEST_CASE("diagnostics format and sort deterministically") {
    Diagnostic a{"B-CODE", Severity::Error, "later", {"f.arch", 2, 1, 0}};
    Diagnostic b{"A-CODE", Severity::Warning, "earlier", {"f.arch", 1, 5, 0}};
    Diagnostic c{"A-CODE", Severity::Error, "same spot", {"f.arch", 2, 1, 0}};
    std::vector<Diagnostic> all{a, b, c};
    sort_diagnostics(all);
    CHECK(all[0].code == "A-CODE");
    CHECK(all[0].span.line == 1);
    CHECK(all[1].code == "A-CODE");
    CHECK(all[2].code == "B-CODE");
    CHECK(format_diagnostic(b) == "f.arch:1:5: warning[A-CODE] earlier");
}

TEST_CASE("requirement files parse ids, fields, and links") {
    ParsedRequirements pr = parse_requirements(R"(requirement SYS-REQ-001 level system type functional {
      text = "do the thing"
      rationale = "because"
    }
    assumption ASM-9 level system {
      text = "assumed"
      justification = "given"
    }
    requirement SAFE-1 level system type safety {
      text = "no single failure"
      min_cut_order = 2
    }
    link SYS-REQ-001 satisfied_by "M.Part A.Sub"
    link ASM-9 validated_by SAFE-1
    )", "r.req");
    REQUIRE(pr.ok());
    REQUIRE(pr.set.requirements.size() == 3);
    CHECK(pr.set.requirements[0].id == "SYS-REQ-001");
    CHECK(pr.set.requirements[1].type == ReqType::Assumption);
    CHECK(pr.set.requirements[2].min_cut_order == 2);
    REQUIRE(pr.set.links.size() == 2);
    CHECK(pr.set.links[0].target.is_path);
    REQUIRE(pr.set.links[0].target.path.segments.size() == 3);
    CHECK(pr.set.links[0].target.path.segments[1] == "Part A");
    CHECK_FALSE(pr.set.links[1].target.is_path);
}

TEST_CASE("requirement files reject duplicates and unknown link types") {
    ParsedRequirements pr = parse_requirements(R"(requirement R-1 level system { text = "a" }
    requirement R-1 level system { text = "b" }
    link R-1 blesses R-1
    )", "r.req");
    REQUIRE_FALSE(pr.ok());
    std::vector<std::string> codes;
    for (const auto& d : pr.diagnostics) codes.push_back(d.code);
    CHECK(std::count(codes.begin(), codes.end(), "REQ-001") == 1);
    CHECK(std::count(codes.begin(), codes.end(), "REQ-002") == 1);
}

TEST_CASE("fpm files parse gates with precedence and parentheses") {
    ParsedFpm pf = parse_fpm(R"(fpm F for M {
      component A {
        port P in
        basic_event e1
        basic_event e2 rate 2.5e-6
        out_failure bad = e1 & e2 | in_failure(P.gone)
        out_failure P.worse = (e1 | e2) & e1
      }
      top_event Top = A.bad
    })", "f.fpm");
    REQUIRE(pf.ok());
    const FpmComponent& a = pf.fpm->components[0];
    REQUIRE(a.out_failures.size() == 2);
    // '&' binds tighter than '|'
    const FpmExpr& bad = *a.out_failures[0].expr;
    REQUIRE(bad.kind == FpmExpr::Kind::Gate);
    CHECK(bad.gate == GateKind::Or);
    REQUIRE(bad.children.size() == 2);
    CHECK(bad.children[0]->gate == GateKind::And);
    CHECK(bad.children[1]->kind == FpmExpr::Kind::InFailure);
    const FpmExpr& worse = *a.out_failures[1].expr;
    CHECK(worse.gate == GateKind::And);
    CHECK(worse.children[0]->gate == GateKind::Or);
    CHECK(a.basic_events[1].rate == Catch::Approx(2.5e-6));
}

TEST_CASE("fha files parse failure conditions") {
    ParsedFha pf = parse_fha(R"(fha for Func {
      failure_condition FC-002 {
        function = "Func.Group.Leaf Fn"
        condition = "loss of function"
        effect = "bad day"
        classification = hazardous
      }
    })", "f.fha");
    REQUIRE(pf.ok());
    REQUIRE(pf.fha->results.size() == 1);
    const FhaResult& r = pf.fha->results[0];
    CHECK(r.id == "FC-002");
    CHECK(r.classification == Classification::Hazardous);
    CHECK_FALSE(r.fdal.has_value());
    REQUIRE(r.function_path.segments.size() == 3);
    CHECK(r.function_path.segments[2] == "Leaf Fn");
}

TEST_CASE("manifest parses file lists, overrides, and nomenclature") {
    ParsedManifest pm = parse_manifest(R"(project "P Q" {
      level L2
      profiles ["a.prof"]
      models ["m1.arch", "m2.arch"]
      requirements []
      severity P-CONN-001 = error
      nomenclature LRU = "^[A-Z]+$"
    })", "project.manifest");
    REQUIRE(pm.ok());
    CHECK(pm.manifest->project_name == "P Q");
    CHECK(pm.manifest->level == "L2");
    CHECK(pm.manifest->models.size() == 2);
    CHECK(pm.manifest->severity_overrides.at("P-CONN-001") == Severity::Error);
    CHECK(pm.manifest->nomenclature.at("LRU") == "^[A-Z]+$");
}
