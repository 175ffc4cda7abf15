// archkit: command-line front end for the architecture toolkit.
//
// Exit codes: 0 success, 1 error-severity findings, 2 parse/load failure,
// 3 usage error. Diagnostics go to stderr; artifacts go to stdout with
// --stdout, otherwise into <project root>/out/.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "archkit/archkit.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitLoadFailure = 2;
constexpr int kExitUsage = 3;

struct Options {
    std::string project;
    std::string format = "text";
    bool to_stdout = false;
};

void print_diagnostics(const std::vector<archkit::Diagnostic>& diags) {
    for (const auto& d : diags) std::cerr << archkit::format_diagnostic(d) << "\n";
}

std::optional<fs::path> find_manifest(const Options& opts) {
    if (!opts.project.empty()) {
        fs::path p = opts.project;
        if (fs::is_directory(p)) p /= "project.manifest";
        if (fs::exists(p)) return p;
        std::cerr << "archkit: no manifest at '" << opts.project << "'\n";
        return std::nullopt;
    }
    fs::path dir = fs::current_path();
    while (true) {
        fs::path candidate = dir / "project.manifest";
        if (fs::exists(candidate)) return candidate;
        if (dir == dir.root_path()) break;
        dir = dir.parent_path();
    }
    std::cerr << "archkit: no project.manifest found here or above; use --project\n";
    return std::nullopt;
}

std::optional<archkit::Project> load(const Options& opts, int& exit_code) {
    auto manifest = find_manifest(opts);
    if (!manifest) {
        exit_code = kExitLoadFailure;
        return std::nullopt;
    }
    archkit::LoadResult result = archkit::load_project(*manifest);
    if (!result.ok()) {
        print_diagnostics(result.diagnostics);
        exit_code = kExitLoadFailure;
        return std::nullopt;
    }
    return std::move(*result.project);
}

// Artifact sink honoring --stdout vs out/.
int emit(const Options& opts, const archkit::Project& project, const std::string& filename,
         const std::string& content) {
    if (opts.to_stdout) {
        std::cout << content;
        return kExitOk;
    }
    fs::path out_dir = project.root / "out";
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    fs::path target = out_dir / filename;
    std::ofstream os(target, std::ios::binary);
    if (!os) {
        std::cerr << "archkit: cannot write '" << target.string() << "'\n";
        return kExitLoadFailure;
    }
    os << content;
    std::cout << "wrote " << (fs::path("out") / filename).generic_string() << "\n";
    return kExitOk;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---- subcommands ----------------------------------------------------------------

int cmd_new(const std::string& dir) {
    fs::path root = dir.empty() ? fs::current_path() : fs::path(dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    const std::pair<const char*, std::string_view> files[] = {
        {"project.manifest", archkit::kScaffoldManifestText},
        {"functional.prof", archkit::kFunctionalProfileText},
        {"physical.prof", archkit::kPhysicalProfileText},
        {"functional.arch", archkit::kScaffoldFunctionalModelText},
        {"physical.arch", archkit::kScaffoldPhysicalModelText},
        {"requirements.req", archkit::kScaffoldRequirementsText},
    };
    for (const auto& [name, content] : files) {
        fs::path target = root / name;
        if (fs::exists(target)) {
            std::cout << "kept " << name << "\n";
            continue;
        }
        std::ofstream os(target, std::ios::binary);
        if (!os) {
            std::cerr << "archkit: cannot write '" << target.string() << "'\n";
            return kExitLoadFailure;
        }
        os << content;
        std::cout << "created " << name << "\n";
    }
    return kExitOk;
}

std::optional<archkit::RuleSelection> parse_rule_selection(const std::string& spec) {
    if (spec.empty() || spec == "all") return archkit::RuleSelection::all();
    if (spec == "process") return archkit::RuleSelection::of_category(archkit::RuleCategory::Process);
    if (spec == "model") return archkit::RuleSelection::of_category(archkit::RuleCategory::Model);
    std::vector<std::string> codes;
    std::string cur;
    for (char c : spec + ",") {
        if (c == ',') {
            if (!cur.empty()) codes.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (codes.empty()) return std::nullopt;
    return archkit::RuleSelection::of_codes(std::move(codes));
}

int cmd_check(const Options& opts, const std::string& rules_spec) {
    auto selection = parse_rule_selection(rules_spec);
    if (!selection) {
        std::cerr << "archkit: bad --rules selection '" << rules_spec << "'\n";
        return kExitUsage;
    }
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;

    archkit::RuleRunResult rules = archkit::run_rules(*project, *selection);
    archkit::SafetyCheckResult safety;
    if (selection->mode == archkit::RuleSelection::Mode::All)
        safety = archkit::check_against_safety_requirements(*project);

    std::vector<archkit::Diagnostic> all = project->load_diagnostics;
    all.insert(all.end(), rules.diagnostics.begin(), rules.diagnostics.end());
    all.insert(all.end(), safety.diagnostics.begin(), safety.diagnostics.end());
    archkit::sort_diagnostics(all);
    print_diagnostics(all);

    int errors = 0, warnings = 0;
    for (const auto& d : all) {
        if (d.severity == archkit::Severity::Error) ++errors;
        if (d.severity == archkit::Severity::Warning) ++warnings;
    }
    if (opts.format == "json") {
        ordered_json j;
        j["project"] = project->name;
        j["errors"] = errors;
        j["warnings"] = warnings;
        j["findings"] = ordered_json::array();
        for (const auto& d : all) {
            ordered_json f;
            f["code"] = d.code;
            f["severity"] = archkit::to_string(d.severity);
            f["message"] = d.message;
            f["file"] = d.span.file;
            f["line"] = d.span.line;
            f["column"] = d.span.column;
            j["findings"].push_back(std::move(f));
        }
        std::cout << json_text(j);
    } else {
        std::cout << "check: " << errors << " errors, " << warnings << " warnings\n";
    }
    if (!rules.selection_ok) return kExitUsage;
    return errors > 0 ? kExitFindings : kExitOk;
}

archkit::ArtifactRef make_ref(const std::string& text) {
    archkit::ArtifactRef ref;
    ref.text = text;
    if (text.find('.') != std::string::npos) {
        ref.is_path = true;
        std::string cur;
        for (char c : text + ".") {
            if (c == '.') {
                ref.path.segments.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
    }
    return ref;
}

int cmd_trace(const Options& opts, const std::string& artifact, const std::string& direction) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    archkit::TraceDirection dir =
        direction == "forward" ? archkit::TraceDirection::Forward : archkit::TraceDirection::Backward;
    archkit::TraceChains chains = archkit::trace_chain(*project, make_ref(artifact), dir);
    print_diagnostics(chains.diagnostics);
    if (opts.format == "json") {
        ordered_json j;
        j["artifact"] = artifact;
        j["direction"] = direction;
        j["chains"] = ordered_json::array();
        for (const auto& chain : chains.chains) {
            ordered_json arr = ordered_json::array();
            for (const auto& node : chain) arr.push_back(node.display());
            j["chains"].push_back(std::move(arr));
        }
        std::cout << json_text(j);
    } else {
        for (const auto& chain : chains.chains) {
            for (size_t i = 0; i < chain.size(); ++i) {
                if (i) std::cout << " -> ";
                std::cout << chain[i].display();
            }
            std::cout << "\n";
        }
    }
    return chains.ok() ? kExitOk : kExitFindings;
}

int cmd_coverage(const Options& opts) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    archkit::CoverageReport report = archkit::coverage_report(*project);
    if (opts.format == "json") {
        ordered_json j;
        j["covered"] = report.covered_elements;
        j["scope"] = report.coverage_scope_size;
        j["requirements"] = report.requirement_count;
        j["uncovered_elements"] = ordered_json::array();
        for (const auto& p : report.uncovered_elements) j["uncovered_elements"].push_back(p.plain());
        j["dangling_requirements"] = report.dangling_requirements;
        std::cout << json_text(j);
    } else {
        std::cout << "coverage: " << report.covered_elements << "/" << report.coverage_scope_size
                  << " elements covered, " << report.requirement_count << " requirements\n";
        for (const auto& p : report.uncovered_elements) std::cout << "uncovered: " << p.plain() << "\n";
        for (const auto& r : report.dangling_requirements) std::cout << "dangling: " << r << "\n";
    }
    return kExitOk;
}

int cmd_fha_export(const Options& opts) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    auto entries = archkit::export_function_list(*project);
    if (opts.format == "json") {
        ordered_json j = ordered_json::array();
        for (const auto& e : entries) {
            ordered_json o;
            o["name"] = e.name;
            o["path"] = e.path.plain();
            o["group"] = e.group;
            o["description"] = e.description;
            o["fdal"] = e.fdal ? ordered_json(*e.fdal) : ordered_json(nullptr);
            j.push_back(std::move(o));
        }
        return emit(opts, *project, "function_list.json", json_text(j));
    }
    return emit(opts, *project, "function_list.txt", archkit::render_function_list(entries));
}

int cmd_fha_import(const Options& opts, const std::string& file) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    auto text = archkit::detail::read_file(file);
    if (!text) {
        std::cerr << "archkit: cannot read '" << file << "'\n";
        return kExitLoadFailure;
    }
    archkit::ParsedFha parsed = archkit::parse_fha(*text, file);
    if (!parsed.fha) {
        print_diagnostics(parsed.diagnostics);
        return kExitLoadFailure;
    }
    archkit::FhaImportResult result = archkit::import_fha_results(*project, *parsed.fha);
    print_diagnostics(result.diagnostics);
    if (!result.ok()) return kExitFindings;

    archkit::RequirementSet generated;
    generated.requirements = result.generated_requirements;
    generated.links = result.generated_links;
    std::string content = archkit::serialize_requirements(generated);
    int rc = emit(opts, *project, "generated_safety.req", content);
    if (rc != kExitOk) return rc;
    std::cout << "fha import: " << result.functions_updated << " functions updated, "
              << result.generated_requirements.size() << " safety requirement stubs\n";
    return kExitOk;
}

int cmd_fpm_build(const Options& opts, const std::string& model_name, const std::string& fpm_name) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    const archkit::ArchModel* model = project->find_model(model_name);
    if (!model) {
        std::cerr << "archkit: no model '" << model_name << "'\n";
        return kExitFindings;
    }
    if (model->kind != archkit::ModelKind::Physical) {
        std::cerr << "archkit: FPMs are built from physical models; '" << model_name << "' is functional\n";
        return kExitFindings;
    }
    archkit::Fpm fpm = archkit::build_fpm(*model, fpm_name);
    return emit(opts, *project, fpm.name + ".fpm", archkit::serialize_fpm(fpm));
}

int cmd_fpm_sync(const Options& opts) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    bool findings = false;
    for (size_t i = 0; i < project->fpms.size(); ++i) {
        const archkit::Fpm& fpm = project->fpms[i];
        const archkit::ArchModel* model = project->find_model(fpm.model_name);
        if (!model) {
            std::cerr << "archkit: FPM '" << fpm.name << "' references unknown model '" << fpm.model_name
                      << "'\n";
            findings = true;
            continue;
        }
        archkit::SyncResult result = archkit::sync_fpm(fpm, *model);
        print_diagnostics(result.diagnostics);
        if (archkit::has_errors(result.diagnostics)) {
            findings = true;
            continue;
        }
        const auto& r = result.report;
        std::cout << "sync " << fpm.name << ": " << r.added_components.size() << " components added, "
                  << r.removed_components.size() << " removed, " << r.added_ports.size() << " ports added, "
                  << r.removed_ports.size() << " removed, " << r.added_edges.size() << " edges added, "
                  << r.removed_edges.size() << " removed\n";
        for (const auto& o : r.orphans)
            std::cout << "orphaned: " << o.component.plain() << " " << o.description << "\n";
        std::string filename = i < project->manifest.fpm.size()
                                   ? fs::path(project->manifest.fpm[i]).filename().string()
                                   : fpm.name + ".fpm";
        int rc = emit(opts, *project, filename, archkit::serialize_fpm(result.fpm));
        if (rc != kExitOk) return rc;
    }
    return findings ? kExitFindings : kExitOk;
}

int cmd_fpm_cutsets(const Options& opts, const std::string& top, int max_order) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;

    // Accept "FPM.TopEvent" or a bare top-event name unique across FPMs.
    const archkit::Fpm* fpm = nullptr;
    std::string top_name = top;
    auto dot = top.find('.');
    if (dot != std::string::npos) {
        fpm = project->find_fpm(top.substr(0, dot));
        top_name = top.substr(dot + 1);
    } else {
        for (const auto& f : project->fpms)
            if (f.find_top_event(top)) fpm = &f;
    }
    if (!fpm) {
        std::cerr << "archkit: no FPM defines top event '" << top << "'\n";
        return kExitFindings;
    }
    std::optional<int> limit;
    if (max_order > 0) limit = max_order;
    archkit::CutSetResult result = archkit::compute_cut_sets(*fpm, top_name, limit);
    print_diagnostics(result.diagnostics);
    if (!result.ok()) return kExitFindings;

    if (opts.format == "json") {
        ordered_json j;
        j["fpm"] = fpm->name;
        j["top_event"] = result.top_event;
        j["truncated"] = result.truncated;
        j["cut_sets"] = ordered_json::array();
        for (const auto& cs : result.cut_sets) j["cut_sets"].push_back(cs.events);
        std::cout << json_text(j);
    } else {
        std::cout << "cut sets for " << fpm->name << "." << result.top_event << " (" << result.cut_sets.size()
                  << ")\n";
        for (const auto& cs : result.cut_sets) {
            std::cout << "order " << cs.order() << ": {";
            for (size_t i = 0; i < cs.events.size(); ++i) {
                if (i) std::cout << ", ";
                std::cout << cs.events[i];
            }
            std::cout << "}\n";
        }
        if (result.truncated) std::cout << "(truncated at order " << *result.max_order << ")\n";
    }
    return kExitOk;
}

int cmd_report_compliance(const Options& opts) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    archkit::ComplianceReport report = archkit::compliance_report(*project);
    if (opts.format == "json")
        return emit(opts, *project, "compliance.json", json_text(archkit::compliance_to_json(report)));
    return emit(opts, *project, "compliance.txt", archkit::render_compliance_text(report));
}

int cmd_report_breakdown(const Options& opts, const std::string& model_name) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    int rc = kExitOk;
    bool any = false;
    for (const auto& model : project->models) {
        if (!model_name.empty() && model.name != model_name) continue;
        any = true;
        archkit::ViewKind kind = model.kind == archkit::ModelKind::Functional
                                     ? archkit::ViewKind::FunctionBreakdown
                                     : archkit::ViewKind::PhysicalActorsBreakdown;
        archkit::ViewResult view = archkit::build_view(model, kind);
        if (!view.tree) {
            print_diagnostics(view.diagnostics);
            rc = kExitFindings;
            continue;
        }
        std::string ext = opts.format == "json" ? ".json" : ".txt";
        std::string content = opts.format == "json" ? json_text(archkit::breakdown_to_json(*view.tree))
                                                    : archkit::render_breakdown_text(*view.tree);
        int one = emit(opts, *project, "breakdown_" + model.name + ext, content);
        if (one != kExitOk) rc = one;
    }
    if (!any) {
        std::cerr << "archkit: no model '" << model_name << "'\n";
        return kExitFindings;
    }
    return rc;
}

int cmd_report_matrix(const Options& opts) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    archkit::TraceMatrix matrix = archkit::trace_matrix(*project);
    if (opts.format == "json")
        return emit(opts, *project, "trace_matrix.json", json_text(archkit::trace_matrix_to_json(matrix)));
    return emit(opts, *project, "trace_matrix.csv", archkit::render_trace_matrix_csv(matrix));
}

int cmd_report_dot(const Options& opts, const std::string& model_name) {
    int code = kExitOk;
    auto project = load(opts, code);
    if (!project) return code;
    int rc = kExitOk;
    bool any = false;
    for (const auto& model : project->models) {
        if (!model_name.empty() && model.name != model_name) continue;
        any = true;
        int one = emit(opts, *project, model.name + ".dot", archkit::render_dot(model));
        if (one != kExitOk) rc = one;
    }
    if (!any) {
        std::cerr << "archkit: no model '" << model_name << "'\n";
        return kExitFindings;
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"archkit: text-first architecture and safety workflow toolkit"};
    app.require_subcommand(1);

    Options opts;
    app.add_option("--project", opts.project, "Path to project.manifest or its directory");
    app.add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--stdout", opts.to_stdout, "Write artifacts to stdout instead of out/");

    std::string new_dir;
    CLI::App* sub_new = app.add_subcommand("new", "Scaffold a project");
    sub_new->add_option("dir", new_dir, "Target directory (default: current)");

    std::string rules_spec = "all";
    CLI::App* sub_check = app.add_subcommand("check", "Validate the project");
    sub_check->add_option("--rules", rules_spec, "Rule selection: all, process, model, or code[,code...]");

    std::string trace_artifact, trace_direction = "backward";
    CLI::App* sub_trace = app.add_subcommand("trace", "Show trace chains for an artifact");
    sub_trace->add_option("artifact", trace_artifact, "Requirement id or model-qualified path")->required();
    sub_trace->add_option("--direction", trace_direction, "Chain direction")
        ->check(CLI::IsMember({"backward", "forward"}));

    CLI::App* sub_coverage = app.add_subcommand("coverage", "Requirement coverage summary");

    CLI::App* sub_fha = app.add_subcommand("fha", "Safety interface: function list and FHA results");
    sub_fha->require_subcommand(1);
    CLI::App* sub_fha_export = sub_fha->add_subcommand("export", "Export the function list");
    std::string fha_file;
    CLI::App* sub_fha_import = sub_fha->add_subcommand("import", "Import FHA results");
    sub_fha_import->add_option("file", fha_file, "FHA results file")->required();

    CLI::App* sub_fpm = app.add_subcommand("fpm", "Fault propagation models");
    sub_fpm->require_subcommand(1);
    std::string fpm_model, fpm_name;
    CLI::App* sub_fpm_build = sub_fpm->add_subcommand("build", "Derive an FPM skeleton from a physical model");
    sub_fpm_build->add_option("model", fpm_model, "Physical model name")->required();
    sub_fpm_build->add_option("--name", fpm_name, "FPM name (default: <model>Fpm)");
    CLI::App* sub_fpm_sync = sub_fpm->add_subcommand("sync", "Synchronize FPMs with their models");
    std::string cutsets_top;
    int max_order = 0;
    CLI::App* sub_fpm_cutsets = sub_fpm->add_subcommand("cutsets", "Minimal cut sets of a top event");
    sub_fpm_cutsets->add_option("top", cutsets_top, "Top event name or FPM.TopEvent")->required();
    sub_fpm_cutsets->add_option("--max-order", max_order, "Drop cut sets above this order");

    CLI::App* sub_report = app.add_subcommand("report", "Reports and exports");
    sub_report->require_subcommand(1);
    CLI::App* sub_rep_compliance = sub_report->add_subcommand("compliance", "Objective compliance report");
    std::string breakdown_model, dot_model;
    CLI::App* sub_rep_breakdown = sub_report->add_subcommand("breakdown", "Hierarchy breakdown views");
    sub_rep_breakdown->add_option("model", breakdown_model, "Model name (default: all)");
    CLI::App* sub_rep_matrix = sub_report->add_subcommand("matrix", "Trace matrix (CSV or JSON)");
    CLI::App* sub_rep_dot = sub_report->add_subcommand("dot", "Graphviz export");
    sub_rep_dot->add_option("model", dot_model, "Model name (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (sub_new->parsed()) return cmd_new(new_dir);
    if (sub_check->parsed()) return cmd_check(opts, rules_spec);
    if (sub_trace->parsed()) return cmd_trace(opts, trace_artifact, trace_direction);
    if (sub_coverage->parsed()) return cmd_coverage(opts);
    if (sub_fha->parsed()) {
        if (sub_fha_export->parsed()) return cmd_fha_export(opts);
        if (sub_fha_import->parsed()) return cmd_fha_import(opts, fha_file);
    }
    if (sub_fpm->parsed()) {
        if (sub_fpm_build->parsed()) return cmd_fpm_build(opts, fpm_model, fpm_name);
        if (sub_fpm_sync->parsed()) return cmd_fpm_sync(opts);
        if (sub_fpm_cutsets->parsed()) return cmd_fpm_cutsets(opts, cutsets_top, max_order);
    }
    if (sub_report->parsed()) {
        if (sub_rep_compliance->parsed()) return cmd_report_compliance(opts);
        if (sub_rep_breakdown->parsed()) return cmd_report_breakdown(opts, breakdown_model);
        if (sub_rep_matrix->parsed()) return cmd_report_matrix(opts);
        if (sub_rep_dot->parsed()) return cmd_report_dot(opts, dot_model);
    }
    return kExitUsage;
}
