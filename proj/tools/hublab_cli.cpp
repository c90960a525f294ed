// Command-line front end. Talks to the library exclusively through hublab.h.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hublab/hublab.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct GraphDel {
    void operator()(hublab_graph* g) const { hublab_graph_free(g); }
};
struct FamilyDel {
    void operator()(hublab_family* f) const { hublab_family_free(f); }
};
struct LabelsDel {
    void operator()(hublab_labels* l) const { hublab_labels_free(l); }
};
using GraphPtr = std::unique_ptr<hublab_graph, GraphDel>;
using FamilyPtr = std::unique_ptr<hublab_family, FamilyDel>;
using LabelsPtr = std::unique_ptr<hublab_labels, LabelsDel>;

// Library failure carrying the exit code it maps to.
struct Failure {
    int code;
    std::string message;
};

int exit_code_for(hublab_status s)
{
    switch (s) {
    case HUBLAB_OK:
        return kExitOk;
    case HUBLAB_ERR_INVALID_ARGUMENT:
    case HUBLAB_ERR_IO:
    case HUBLAB_ERR_PARSE:
        return kExitUsage;
    default:
        return kExitFailed;
    }
}

void check(hublab_status s)
{
    if (s != HUBLAB_OK)
        throw Failure{exit_code_for(s), std::string(hublab_status_string(s)) + ": " + hublab_last_error()};
}

std::string take(char* s)
{
    std::string out = s ? s : "";
    hublab_string_free(s);
    return out;
}

struct Globals {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::uint64_t vertex_cap = 5'000'000;
    std::string format = "json";

    hublab_options options() const { return {threads, vertex_cap, 0}; }
    json to_json() const { return {{"seed", seed}, {"threads", threads}, {"vertex_cap", vertex_cap}, {"format", format}}; }
};

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw Failure{kExitUsage, "cannot write " + path};
}

// Reports gain the global flags under config.cli so a rerun can be reconstructed.
std::string finish(const std::string& report, const Globals& g)
{
    json j = json::parse(report);
    j["config"]["cli"] = g.to_json();
    return j.dump(2) + "\n";
}

std::string flat_csv(const json& j)
{
    std::ostringstream os;
    os << "key,value\n";
    const json flat = j.flatten();
    for (const auto& [k, v] : flat.items())
        os << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    return os.str();
}

void print(const std::string& report_json, const Globals& g)
{
    if (g.format == "csv")
        std::cout << flat_csv(json::parse(report_json));
    else
        std::cout << report_json;
}

GraphPtr load_graph(const std::string& path)
{
    hublab_graph* g = nullptr;
    check(hublab_graph_load(path.c_str(), &g));
    return GraphPtr(g);
}

LabelsPtr load_labels(const std::string& path)
{
    hublab_labels* l = nullptr;
    check(hublab_labels_load(path.c_str(), &l));
    return LabelsPtr(l);
}

FamilyPtr load_family(const std::string& graph, const std::string& meta)
{
    hublab_family* f = nullptr;
    check(hublab_family_load(graph.c_str(), meta.c_str(), &f));
    return FamilyPtr(f);
}

std::string default_meta(const std::string& graph, const std::string& meta)
{
    return meta.empty() ? graph + ".meta.json" : meta;
}

int parse_kind(const std::string& k)
{
    if (k == "H")
        return HUBLAB_FAMILY_H;
    if (k == "G")
        return HUBLAB_FAMILY_G;
    return HUBLAB_FAMILY_GPRIME;
}

int parse_reduce(const std::string& r)
{
    if (r == "always")
        return HUBLAB_REDUCE_ALWAYS;
    if (r == "never")
        return HUBLAB_REDUCE_NEVER;
    return HUBLAB_REDUCE_AUTO;
}

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty())
            out.push_back(line);
    return out;
}

std::vector<std::string> split_commas(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

json transcript_rows(const std::string& csv)
{
    const auto lines = split_lines(csv);
    json rows = json::array();
    if (lines.empty())
        return rows;
    const auto header = split_commas(lines[0]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_commas(lines[i]);
        json row = json::object();
        for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) {
            const std::string& c = cells[k];
            const bool numeric = !c.empty() && c.find_first_not_of("-0123456789") == std::string::npos;
            row[header[k]] = numeric ? json::parse(c) : json(c);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string bench_csv(const json& report)
{
    std::ostringstream os;
    os << "D,avg_hub_size,total_size,S,sum_Q,sum_Q_fallback,sum_R,sum_F,ledger_total,ledger_bound,valid,wall_ms\n";
    const auto& rows = report["result"]["rows"];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto& l = r["stages"]["size_ledger"];
        os << r["D"] << ',' << r["avg_hub_size"] << ',' << r["total_size"] << ',' << r["stages"]["S"] << ','
           << l["sum_Q"] << ',' << l["sum_Q_fallback"] << ',' << l["sum_R"] << ',' << l["sum_F"] << ','
           << l["total"] << ',' << l["bound"] << ',' << (r["valid"].get<bool>() ? 1 : 0) << ','
           << report["timing"][i]["wall_ms"] << '\n';
    }
    return os.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hub labeling construction, verification and lower-bound experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Seed for randomized stages")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
    app.add_option("--vertex-cap", g.vertex_cap, "Refuse to generate graphs with more vertices")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    int exit_code = kExitOk;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a family instance");
    std::string gen_kind, gen_remove, gen_out, gen_meta;
    unsigned gen_b = 1, gen_ell = 1;
    gen->add_option("--kind", gen_kind)->required()->check(CLI::IsMember({"H", "G", "Gprime"}));
    gen->add_option("--b", gen_b)->required()->check(CLI::Range(1u, 20u));
    gen->add_option("--ell", gen_ell)->required()->check(CLI::PositiveNumber);
    gen->add_option("--remove-file", gen_remove, "Level-ell coordinate vectors to delete (Gprime)")
        ->check(CLI::ExistingFile);
    gen->add_option("--out", gen_out)->required();
    gen->add_option("--meta", gen_meta, "Metadata path (default: OUT.meta.json)");
    gen->callback([&] {
        const hublab_options o = g.options();
        hublab_family* raw = nullptr;
        check(hublab_family_generate(parse_kind(gen_kind), gen_b, gen_ell, gen_remove.empty() ? nullptr : gen_remove.c_str(),
                                     &o, &raw));
        FamilyPtr f(raw);
        const std::string meta = default_meta(gen_out, gen_meta);
        check(hublab_family_save(f.get(), gen_out.c_str(), meta.c_str()));
        hublab_graph* graw = nullptr;
        check(hublab_family_graph(f.get(), &graw));
        GraphPtr gp(graw);
        json rep = {{"schema", 1},
                    {"command", "gen"},
                    {"config",
                     {{"kind", gen_kind}, {"b", gen_b}, {"ell", gen_ell}, {"remove_file", gen_remove}, {"out", gen_out},
                      {"meta", meta}}},
                    {"result", {{"n", hublab_graph_num_vertices(gp.get())}, {"m", hublab_graph_num_edges(gp.get())}}}};
        print(finish(rep.dump(), g), g);
    });

    // build
    auto* build = app.add_subcommand("build", "Construct a hub labeling for a sparse graph");
    std::string build_graph, build_out, build_report, build_reduce = "auto";
    std::uint32_t build_D = 0, build_resamples = 32;
    build->add_option("--graph", build_graph)->required()->check(CLI::ExistingFile);
    build->add_option("--D", build_D, "Threshold (0 selects the default)")->capture_default_str();
    build->add_option("--max-resamples", build_resamples)->check(CLI::PositiveNumber)->capture_default_str();
    build->add_option("--reduce", build_reduce, "Degree reduction")
        ->check(CLI::IsMember({"auto", "always", "never"}))
        ->capture_default_str();
    build->add_option("--out", build_out)->required();
    build->add_option("--report", build_report, "Write the JSON report here");
    build->callback([&] {
        GraphPtr gp = load_graph(build_graph);
        const hublab_options o = g.options();
        const hublab_build_config c{build_D, g.seed, build_resamples, parse_reduce(build_reduce)};
        hublab_labels* raw = nullptr;
        char* rep = nullptr;
        check(hublab_build(gp.get(), &c, &o, &raw, &rep));
        LabelsPtr l(raw);
        const std::string report = finish(take(rep), g);
        check(hublab_labels_save(l.get(), build_out.c_str()));
        if (!build_report.empty())
            write_file(build_report, report);
        print(report, g);
    });

    // verify
    auto* verify = app.add_subcommand("verify", "Check that labels cover every pair");
    std::string verify_graph, verify_labels;
    verify->add_option("--graph", verify_graph)->required()->check(CLI::ExistingFile);
    verify->add_option("--labels", verify_labels)->required()->check(CLI::ExistingFile);
    verify->callback([&] {
        GraphPtr gp = load_graph(verify_graph);
        LabelsPtr l = load_labels(verify_labels);
        const hublab_options o = g.options();
        char* rep = nullptr;
        int valid = 0;
        check(hublab_verify(gp.get(), l.get(), &o, &rep, &valid));
        print(finish(take(rep), g), g);
        if (!valid)
            exit_code = kExitFailed;
    });

    // closure
    auto* closure = app.add_subcommand("closure", "Monotone closure of a labeling");
    std::string closure_graph, closure_labels, closure_out;
    closure->add_option("--graph", closure_graph)->required()->check(CLI::ExistingFile);
    closure->add_option("--labels", closure_labels)->required()->check(CLI::ExistingFile);
    closure->add_option("--out", closure_out)->required();
    closure->callback([&] {
        GraphPtr gp = load_graph(closure_graph);
        LabelsPtr l = load_labels(closure_labels);
        hublab_labels* raw = nullptr;
        check(hublab_closure(gp.get(), l.get(), &raw));
        LabelsPtr c(raw);
        check(hublab_labels_save(c.get(), closure_out.c_str()));
        char* rep = nullptr;
        check(hublab_labels_stats(c.get(), &rep));
        json j = json::parse(take(rep));
        j["command"] = "closure";
        j["config"] = {{"graph", closure_graph}, {"labels", closure_labels}, {"out", closure_out}};
        j["result"]["input_total_size"] = hublab_labels_total_size(l.get());
        print(finish(j.dump(), g), g);
    });

    // stats
    auto* stats = app.add_subcommand("stats", "Summary statistics of a label file");
    std::string stats_labels;
    stats->add_option("--labels", stats_labels)->required()->check(CLI::ExistingFile);
    stats->callback([&] {
        LabelsPtr l = load_labels(stats_labels);
        char* rep = nullptr;
        check(hublab_labels_stats(l.get(), &rep));
        json j = json::parse(take(rep));
        j["config"] = {{"labels", stats_labels}};
        print(finish(j.dump(), g), g);
    });

    // audit
    auto* audit = app.add_subcommand("audit", "Structural audits of family instances");
    audit->require_subcommand(1);
    auto* lemma = audit->add_subcommand("lemma1", "Unique midpoint shortest paths");
    std::string lemma_graph, lemma_meta;
    std::uint64_t lemma_sample = 0;
    lemma->add_option("--graph", lemma_graph)->required()->check(CLI::ExistingFile);
    lemma->add_option("--meta", lemma_meta, "Metadata path (default: GRAPH.meta.json)");
    lemma->add_option("--sample", lemma_sample, "Number of sampled pairs (0 = exhaustive)")->capture_default_str();
    lemma->callback([&] {
        FamilyPtr f = load_family(lemma_graph, default_meta(lemma_graph, lemma_meta));
        char* rep = nullptr;
        int pass = 0;
        check(hublab_audit_lemma1(f.get(), lemma_sample, g.seed, &rep, &pass));
        print(finish(take(rep), g), g);
        if (!pass)
            exit_code = kExitFailed;
    });
    auto* counting = audit->add_subcommand("counting", "Closure counting bound");
    std::string counting_graph, counting_meta, counting_labels;
    counting->add_option("--graph", counting_graph)->required()->check(CLI::ExistingFile);
    counting->add_option("--meta", counting_meta, "Metadata path (default: GRAPH.meta.json)");
    counting->add_option("--labels", counting_labels)->required()->check(CLI::ExistingFile);
    counting->callback([&] {
        FamilyPtr f = load_family(counting_graph, default_meta(counting_graph, counting_meta));
        LabelsPtr l = load_labels(counting_labels);
        const hublab_options o = g.options();
        char* rep = nullptr;
        int pass = 0;
        check(hublab_audit_counting(f.get(), l.get(), &o, &rep, &pass));
        print(finish(take(rep), g), g);
        if (!pass)
            exit_code = kExitFailed;
    });

    // sumindex
    auto* sumindex = app.add_subcommand("sumindex", "Simulate the Sum-Index protocol");
    unsigned si_b = 1, si_ell = 1;
    std::string si_bits, si_mode = "oracle", si_transcript;
    std::uint64_t si_a = 0, si_bidx = 0;
    std::uint32_t si_D = 0;
    bool si_sweep = false;
    sumindex->add_option("--b", si_b)->required()->check(CLI::Range(1u, 20u));
    sumindex->add_option("--ell", si_ell)->required()->check(CLI::PositiveNumber);
    sumindex->add_option("--bits", si_bits)->required();
    auto* opt_a = sumindex->add_option("--a", si_a);
    auto* opt_bi = sumindex->add_option("--b-index", si_bidx);
    auto* opt_sweep = sumindex->add_flag("--sweep", si_sweep, "Run every (a, b) pair");
    opt_a->needs(opt_bi)->excludes(opt_sweep);
    opt_bi->needs(opt_a)->excludes(opt_sweep);
    sumindex->add_option("--mode", si_mode)->check(CLI::IsMember({"oracle", "hub"}))->capture_default_str();
    sumindex->add_option("--D", si_D, "Hub-mode threshold (0 selects the default)")->capture_default_str();
    sumindex->add_option("--transcript", si_transcript, "Also write the transcript CSV here");
    sumindex->callback([&] {
        if (!si_sweep && opt_a->count() == 0)
            throw CLI::RequiredError("--a and --b-index, or --sweep");
        const hublab_options o = g.options();
        const hublab_build_config c{si_D, g.seed, 0, HUBLAB_REDUCE_NEVER};
        char* csv = nullptr;
        char* summary = nullptr;
        int ok = 0;
        check(hublab_sumindex(si_b, si_ell, si_bits.c_str(), si_a, si_bidx, si_sweep ? 1 : 0,
                              si_mode == "hub" ? HUBLAB_MODE_HUB : HUBLAB_MODE_ORACLE, &c, &o, &csv, &summary, &ok));
        const std::string transcript = take(csv);
        const std::string report = finish(take(summary), g);
        if (!si_transcript.empty())
            write_file(si_transcript, transcript);
        if (g.format == "csv") {
            std::cout << transcript << '\n' << flat_csv(json::parse(report));
        } else {
            json j = json::parse(report);
            j["result"]["transcript"] = transcript_rows(transcript);
            std::cout << j.dump(2) << '\n';
        }
        if (!ok)
            exit_code = kExitFailed;
    });

    // bench
    auto* bench = app.add_subcommand("bench", "Label size across thresholds");
    std::string bench_graph, bench_report;
    std::vector<std::uint32_t> bench_D{2};
    std::uint32_t bench_resamples = 32;
    bench->add_option("--graph", bench_graph)->required()->check(CLI::ExistingFile);
    bench->add_option("--D", bench_D, "Comma-separated thresholds")->delimiter(',')->check(CLI::PositiveNumber);
    bench->add_option("--max-resamples", bench_resamples)->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--report", bench_report, "Write the JSON report here");
    bench->callback([&] {
        GraphPtr gp = load_graph(bench_graph);
        const hublab_options o = g.options();
        char* rep = nullptr;
        check(hublab_bench(gp.get(), bench_D.data(), bench_D.size(), g.seed, bench_resamples, &o, &rep));
        const std::string report = finish(take(rep), g);
        if (!bench_report.empty())
            write_file(bench_report, report);
        if (g.format == "csv")
            std::cout << bench_csv(json::parse(report));
        else
            std::cout << report;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n";
        const CLI::App* sub = &app;
        while (!sub->get_subcommands().empty())
            sub = sub->get_subcommands().front();
        std::cerr << sub->help();
        return kExitUsage;
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return exit_code;
}
