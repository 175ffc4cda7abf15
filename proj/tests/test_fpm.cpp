#include "test_support.hpp"

using namespace archkit;
using testsup::ScratchProject;

namespace {

struct Loaded {
    ArchModel model;
    Fpm fpm;
};

Loaded load_fixture_pair() {
    ParsedProfiles phys = parse_profile(kPhysicalProfileText, "physical.prof");
    REQUIRE(phys.ok());
    ProfileSet profiles;
    for (const auto& p : phys.file.profiles) profiles.add(p);
    ParsedModel pm = parse_model(testsup::read_file(testsup::autopilot_dir() / "physical.arch"),
                                 "physical.arch", profiles);
    REQUIRE(pm.ok());
    ParsedFpm pf = parse_fpm(testsup::read_file(testsup::autopilot_dir() / "autopilot.fpm"),
                             "autopilot.fpm");
    REQUIRE(pf.ok());
    return {std::move(*pm.model), std::move(*pf.fpm)};
}

ArchElement* find_mut(ArchModel& m, const std::string& name) {
    for (auto& e : m.elements)
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace

TEST_CASE("build_fpm derives components, ports, and edges from the model") {
    Loaded fx = load_fixture_pair();
    Fpm built = build_fpm(fx.model);
    CHECK(built.name == "PhysFpm");
    CHECK(built.model_name == "Phys");
    REQUIRE(built.components.size() == 5);
    CHECK(built.components[0].path.plain() == "FCC_01");
    CHECK(built.components[1].path.plain() == "AP_Disconnect");
    CHECK(built.components[2].path.plain() == "AP_Disconnect.AP_Disconnect_SW");
    CHECK(built.components[3].path.plain() == "AP_Disconnect.AP_Disconnect_HW");
    CHECK(built.components[4].path.plain() == "Servo_Actuator");
    REQUIRE(built.components[1].ports.size() == 3);
    CHECK(built.components[1].ports[0].name == "DIS_In_04");
    CHECK(built.components[1].ports[1].direction == PortDirection::InOut);
    REQUIRE(built.edges.size() == 3);
    CHECK(built.edges[0] == FpmEdge{{{"FCC_01"}}, "DIS_Out_01", {{"AP_Disconnect"}}, "DIS_In_04"});
    CHECK(built.top_events.empty());

    Fpm named = build_fpm(fx.model, "CustomName");
    CHECK(named.name == "CustomName");
}

TEST_CASE("sync against an unchanged model is a no-op") {
    Loaded fx = load_fixture_pair();
    SyncResult sync = sync_fpm(fx.fpm, fx.model);
    CHECK(sync.diagnostics.empty());
    CHECK(sync.report.empty());
    CHECK(serialize_fpm(sync.fpm) == serialize_fpm(fx.fpm));

    SyncResult again = sync_fpm(sync.fpm, fx.model);
    CHECK(again.report.empty());
    CHECK(serialize_fpm(again.fpm) == serialize_fpm(sync.fpm));
}

TEST_CASE("sync adopts new structure while keeping annotations") {
    Loaded fx = load_fixture_pair();
    ArchElement* fcc = find_mut(fx.model, "FCC_01");
    REQUIRE(fcc != nullptr);
    ArchPort spare;
    spare.name = "SPARE_01";
    spare.direction = PortDirection::Out;
    fcc->ports.push_back(spare);

    SyncResult sync = sync_fpm(fx.fpm, fx.model);
    REQUIRE_FALSE(sync.report.empty());
    REQUIRE(sync.report.added_ports.size() == 1);
    CHECK(sync.report.added_ports[0].first.plain() == "FCC_01");
    CHECK(sync.report.added_ports[0].second == "SPARE_01");
    CHECK(sync.report.orphans.empty());
    CHECK(sync.report.removed_components.empty());

    const FpmComponent* c = sync.fpm.find_component({{"FCC_01"}});
    REQUIRE(c != nullptr);
    CHECK(c->find_port("SPARE_01") != nullptr);
    CHECK(c->find_event("cmd_channel_fails") != nullptr);
    REQUIRE(c->out_failures.size() == 1);
    CHECK(c->out_failures[0].display_name() == "DIS_Out_01.no_disengage_cmd");
    REQUIRE(sync.fpm.top_events.size() == 1);
    CHECK(sync.fpm.top_events[0].name == "InabilityToDisengage");

    // A second pass over the updated snapshot reports nothing.
    SyncResult again = sync_fpm(sync.fpm, fx.model);
    CHECK(again.report.empty());
}

TEST_CASE("sync orphans failure logic anchored to removed ports") {
    Loaded fx = load_fixture_pair();
    ArchElement* fcc = find_mut(fx.model, "FCC_01");
    REQUIRE(fcc != nullptr);
    fcc->ports.erase(fcc->ports.begin());  // DIS_Out_01
    fx.model.connectors.erase(fx.model.connectors.begin());

    SyncResult sync = sync_fpm(fx.fpm, fx.model);
    REQUIRE(sync.report.removed_ports.size() == 1);
    CHECK(sync.report.removed_ports[0].second == "DIS_Out_01");
    REQUIRE(sync.report.removed_edges.size() == 1);
    REQUIRE(sync.report.orphans.size() == 1);
    CHECK(sync.report.orphans[0].component.plain() == "FCC_01");
    CHECK(sync.report.orphans[0].description == "out_failure DIS_Out_01.no_disengage_cmd");

    const FpmComponent* c = sync.fpm.find_component({{"FCC_01"}});
    REQUIRE(c != nullptr);
    CHECK(c->out_failures.empty());
    CHECK(c->find_event("cmd_channel_fails") != nullptr);  // events survive
}

TEST_CASE("sync orphans expressions that reference removed in-ports") {
    Loaded fx = load_fixture_pair();
    ArchElement* apd = find_mut(fx.model, "AP_Disconnect");
    REQUIRE(apd != nullptr);
    apd->ports.erase(apd->ports.begin());  // DIS_In_04
    fx.model.connectors.erase(fx.model.connectors.begin());

    SyncResult sync = sync_fpm(fx.fpm, fx.model);
    bool orphaned = false;
    for (const auto& o : sync.report.orphans)
        if (o.description == "out_failure no_disengage") orphaned = true;
    CHECK(orphaned);
    const FpmComponent* c = sync.fpm.find_component({{"AP_Disconnect"}});
    REQUIRE(c != nullptr);
    CHECK(c->out_failures.empty());
    CHECK(c->basic_events.size() == 2);
}

TEST_CASE("sync reports removed components and drops their logic") {
    Loaded fx = load_fixture_pair();
    fx.model.elements.pop_back();  // Servo_Actuator
    fx.model.connectors.pop_back();

    SyncResult sync = sync_fpm(fx.fpm, fx.model);
    REQUIRE(sync.report.removed_components.size() == 1);
    CHECK(sync.report.removed_components[0].plain() == "Servo_Actuator");
    REQUIRE(sync.report.removed_edges.size() == 1);
    CHECK(sync.fpm.find_component({{"Servo_Actuator"}}) == nullptr);
}

TEST_CASE("sync refuses a model the fpm was not built for") {
    Loaded fx = load_fixture_pair();
    fx.model.name = "Other";
    SyncResult sync = sync_fpm(fx.fpm, fx.model);
    REQUIRE_FALSE(sync.diagnostics.empty());
    CHECK(sync.diagnostics[0].code == "FPM-001");
}

TEST_CASE("loading warns when the fpm snapshot is stale") {
    ScratchProject scratch;
    scratch.replace("physical.arch", "port DIS_Out_01 out : DiscretePort",
                    "port DIS_Out_01 out : DiscretePort\n    port SPARE_01 out : DiscretePort { attr justification = \"growth\" }");
    LoadResult lr = load_project(scratch.manifest());
    REQUIRE(lr.ok());
    bool stale = false;
    for (const auto& d : lr.diagnostics)
        if (d.code == "FPM-004" && d.severity == Severity::Warning) stale = true;
    CHECK(stale);
    // The analysed structure is the fresh one regardless of the snapshot.
    const Fpm* fpm = lr.project->find_fpm("AutopilotFpm");
    REQUIRE(fpm != nullptr);
    const FpmComponent* c = fpm->find_component({{"FCC_01"}});
    REQUIRE(c != nullptr);
    CHECK(c->find_port("SPARE_01") != nullptr);
}

TEST_CASE("loading rejects an fpm for an unknown model") {
    ScratchProject scratch;
    scratch.replace("autopilot.fpm", "fpm AutopilotFpm for Phys", "fpm AutopilotFpm for Ghost");
    LoadResult lr = load_project(scratch.manifest());
    REQUIRE_FALSE(lr.ok());
    bool found = false;
    for (const auto& d : lr.diagnostics)
        if (d.code == "FPM-005") found = true;
    CHECK(found);
}
