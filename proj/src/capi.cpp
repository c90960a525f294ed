#include "hublab/hublab.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "hublab/audit.hpp"
#include "hublab/builder.hpp"
#include "hublab/error.hpp"
#include "hublab/family.hpp"
#include "hublab/io.hpp"
#include "hublab/labeling.hpp"
#include "hublab/reports.hpp"
#include "hublab/sumindex.hpp"

struct hublab_graph {
    hublab::WeightedGraph g;
};

struct hublab_family {
    hublab::FamilyInstance inst;
};

struct hublab_labels {
    hublab::HubLabeling hl;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

hublab_status fail(hublab_status s, const char* what)
{
    g_last_error = what;
    return s;
}

template <class Fn>
hublab_status guarded(Fn&& fn) noexcept
{
    try {
        g_last_error.clear();
        fn();
        return HUBLAB_OK;
    } catch (const hublab::InvalidArgument& e) {
        return fail(HUBLAB_ERR_INVALID_ARGUMENT, e.what());
    } catch (const hublab::ParseError& e) {
        return fail(HUBLAB_ERR_PARSE, e.what());
    } catch (const hublab::IoError& e) {
        return fail(HUBLAB_ERR_IO, e.what());
    } catch (const hublab::ResourceError& e) {
        return fail(HUBLAB_ERR_RESOURCE, e.what());
    } catch (const hublab::OverflowError& e) {
        return fail(HUBLAB_ERR_OVERFLOW, e.what());
    } catch (const hublab::ResampleExhausted& e) {
        return fail(HUBLAB_ERR_RESAMPLE_EXHAUSTED, e.what());
    } catch (const hublab::VerificationError& e) {
        return fail(HUBLAB_ERR_VERIFICATION, e.what());
    } catch (const hublab::InvariantViolation& e) {
        return fail(HUBLAB_ERR_INVARIANT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(HUBLAB_ERR_RESOURCE, "out of memory");
    } catch (const std::exception& e) {
        return fail(HUBLAB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(HUBLAB_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* what)
{
    if (!ok)
        throw hublab::InvalidArgument(what);
}

char* dup_string(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void emit(char** out, const std::string& s)
{
    if (out)
        *out = dup_string(s);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Resolved {
    unsigned threads = 1;
    std::size_t vertex_cap = hublab::FamilyLimits{}.max_vertices;
    std::size_t distance_cap = hublab::AllPairsOptions{}.max_entries;

    hublab::AllPairsOptions all_pairs() const { return {threads, distance_cap}; }
    hublab::FamilyLimits limits() const { return {vertex_cap}; }
    json to_json() const
    {
        return {{"threads", threads}, {"vertex_cap", vertex_cap}, {"distance_cap", distance_cap}};
    }
};

Resolved resolve(const hublab_options* o)
{
    Resolved r;
    if (!o)
        return r;
    if (o->threads)
        r.threads = o->threads;
    if (o->vertex_cap)
        r.vertex_cap = static_cast<std::size_t>(o->vertex_cap);
    if (o->distance_cap)
        r.distance_cap = static_cast<std::size_t>(o->distance_cap);
    return r;
}

hublab::ReduceMode reduce_mode(int m)
{
    switch (m) {
    case HUBLAB_REDUCE_AUTO:
        return hublab::ReduceMode::Auto;
    case HUBLAB_REDUCE_ALWAYS:
        return hublab::ReduceMode::Always;
    case HUBLAB_REDUCE_NEVER:
        return hublab::ReduceMode::Never;
    }
    throw hublab::InvalidArgument("unknown reduce mode " + std::to_string(m));
}

const char* reduce_name(hublab::ReduceMode m)
{
    switch (m) {
    case hublab::ReduceMode::Auto:
        return "auto";
    case hublab::ReduceMode::Always:
        return "always";
    case hublab::ReduceMode::Never:
        return "never";
    }
    return "?";
}

hublab::BuilderConfig builder_config(const hublab_build_config* c, unsigned threads)
{
    hublab::BuilderConfig cfg;
    cfg.threads = threads;
    if (c) {
        cfg.D = c->threshold;
        cfg.seed = c->seed;
        if (c->max_resamples)
            cfg.max_resamples = c->max_resamples;
    }
    return cfg;
}

json graph_summary(const hublab::WeightedGraph& g)
{
    return {{"n", g.num_vertices()}, {"m", g.num_edges()}, {"max_degree", g.max_degree()}};
}

} // namespace

extern "C" {

const char* hublab_version(void) { return "0.1.0"; }

const char* hublab_last_error(void) { return g_last_error.c_str(); }

const char* hublab_status_string(hublab_status status)
{
    switch (status) {
    case HUBLAB_OK:
        return "ok";
    case HUBLAB_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case HUBLAB_ERR_IO:
        return "i/o error";
    case HUBLAB_ERR_PARSE:
        return "parse error";
    case HUBLAB_ERR_RESOURCE:
        return "resource limit exceeded";
    case HUBLAB_ERR_RESAMPLE_EXHAUSTED:
        return "resampling exhausted";
    case HUBLAB_ERR_VERIFICATION:
        return "verification failed";
    case HUBLAB_ERR_INVARIANT:
        return "invariant violated";
    case HUBLAB_ERR_OVERFLOW:
        return "overflow";
    case HUBLAB_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void hublab_string_free(char* s) { std::free(s); }

hublab_status hublab_graph_create(size_t n, const uint32_t* us, const uint32_t* vs, const int64_t* ws, size_t m,
                                  hublab_graph** out)
{
    return guarded([&] {
        require(out != nullptr, "null output handle");
        require(m == 0 || (us && vs), "null edge arrays");
        std::vector<hublab::Edge> edges(m);
        for (size_t i = 0; i < m; ++i)
            edges[i] = {us[i], vs[i], ws ? ws[i] : 1};
        *out = new hublab_graph{hublab::WeightedGraph(n, std::move(edges))};
    });
}

hublab_status hublab_graph_load(const char* path, hublab_graph** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        *out = new hublab_graph{hublab::read_graph_file(path)};
    });
}

hublab_status hublab_graph_save(const hublab_graph* g, const char* path)
{
    return guarded([&] {
        require(g && path, "null argument");
        hublab::write_graph_file(path, g->g);
    });
}

size_t hublab_graph_num_vertices(const hublab_graph* g) { return g ? g->g.num_vertices() : 0; }
size_t hublab_graph_num_edges(const hublab_graph* g) { return g ? g->g.num_edges() : 0; }
size_t hublab_graph_max_degree(const hublab_graph* g) { return g ? g->g.max_degree() : 0; }

hublab_status hublab_graph_distance(const hublab_graph* g, uint32_t u, uint32_t v, int64_t* out)
{
    return guarded([&] {
        require(g && out, "null argument");
        require(u < g->g.num_vertices() && v < g->g.num_vertices(), "vertex out of range");
        *out = hublab::distances_from(g->g, u)[v];
    });
}

void hublab_graph_free(hublab_graph* g) { delete g; }

hublab_status hublab_family_generate(int kind, uint32_t b, uint32_t ell, const char* remove_file,
                                     const hublab_options* opts, hublab_family** out)
{
    return guarded([&] {
        require(out != nullptr, "null output handle");
        require(kind == HUBLAB_FAMILY_H || kind == HUBLAB_FAMILY_G || kind == HUBLAB_FAMILY_GPRIME,
                "unknown family kind");
        const bool has_removals = remove_file && *remove_file;
        require(!has_removals || kind == HUBLAB_FAMILY_GPRIME, "a remove file requires kind Gprime");
        const Resolved r = resolve(opts);
        const hublab::FamilyParams p{b, ell};
        p.validate();
        hublab::FamilyInstance h = hublab::build_H(p, r.limits());
        if (kind == HUBLAB_FAMILY_H) {
            *out = new hublab_family{std::move(h)};
            return;
        }
        hublab::FamilyInstance g = hublab::expand_to_G(h, r.limits());
        if (kind == HUBLAB_FAMILY_G) {
            *out = new hublab_family{std::move(g)};
            return;
        }
        std::set<std::vector<unsigned>> drop;
        if (has_removals) {
            for (auto& c : hublab::read_coord_list_file(remove_file, ell)) {
                for (unsigned x : c)
                    require(x < p.side(), "remove-file coordinate out of range");
                drop.insert(std::move(c));
            }
        }
        *out = new hublab_family{hublab::delete_level_mid(g, [&](std::span<const unsigned> c) {
            return drop.count(std::vector<unsigned>(c.begin(), c.end())) == 0;
        })};
    });
}

hublab_status hublab_family_load(const char* graph_path, const char* meta_path, hublab_family** out)
{
    return guarded([&] {
        require(graph_path && meta_path && out, "null argument");
        *out = new hublab_family{hublab::read_family_files(graph_path, meta_path)};
    });
}

hublab_status hublab_family_save(const hublab_family* f, const char* graph_path, const char* meta_path)
{
    return guarded([&] {
        require(f && graph_path && meta_path, "null argument");
        hublab::write_family_files(graph_path, meta_path, f->inst);
    });
}

hublab_status hublab_family_graph(const hublab_family* f, hublab_graph** out)
{
    return guarded([&] {
        require(f && out, "null argument");
        *out = new hublab_graph{f->inst.graph};
    });
}

hublab_status hublab_family_vertex(const hublab_family* f, uint32_t level, const uint32_t* coords, uint32_t* out)
{
    return guarded([&] {
        require(f && coords && out, "null argument");
        hublab::LevelCoord c{level, std::vector<unsigned>(coords, coords + f->inst.params.ell)};
        *out = f->inst.id_of(c);
    });
}

void hublab_family_free(hublab_family* f) { delete f; }

hublab_status hublab_labels_load(const char* path, hublab_labels** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        *out = new hublab_labels{hublab::read_labels_file(path)};
    });
}

hublab_status hublab_labels_save(const hublab_labels* l, const char* path)
{
    return guarded([&] {
        require(l && path, "null argument");
        hublab::write_labels_file(path, l->hl);
    });
}

size_t hublab_labels_num_vertices(const hublab_labels* l) { return l ? l->hl.num_vertices() : 0; }
uint64_t hublab_labels_total_size(const hublab_labels* l) { return l ? l->hl.total_size() : 0; }

int64_t hublab_labels_query(const hublab_labels* l, uint32_t u, uint32_t v)
{
    if (!l || u >= l->hl.num_vertices() || v >= l->hl.num_vertices())
        return hublab::kUnreachable;
    return l->hl.query(u, v);
}

hublab_status hublab_labels_stats(const hublab_labels* l, char** report_json)
{
    return guarded([&] {
        require(l != nullptr, "null argument");
        emit(report_json, dump(hublab::make_report("stats", json::object(), hublab::label_stats_json(l->hl))));
    });
}

hublab_status hublab_labels_baseline(const hublab_graph* g, const hublab_options* opts, hublab_labels** out)
{
    return guarded([&] {
        require(g && out, "null argument");
        const Resolved r = resolve(opts);
        *out = new hublab_labels{hublab::baseline_full(hublab::all_pairs(g->g, r.all_pairs()))};
    });
}

void hublab_labels_free(hublab_labels* l) { delete l; }

hublab_status hublab_verify(const hublab_graph* g, const hublab_labels* l, const hublab_options* opts,
                            char** report_json, int* valid)
{
    return guarded([&] {
        require(g && l, "null argument");
        require(l->hl.num_vertices() == g->g.num_vertices(), "labels and graph disagree on vertex count");
        const Resolved r = resolve(opts);
        const hublab::CoverReport rep = hublab::verify_cover(l->hl, hublab::all_pairs(g->g, r.all_pairs()), r.threads);
        if (valid)
            *valid = rep.valid ? 1 : 0;
        json cfg = r.to_json();
        cfg["graph"] = graph_summary(g->g);
        emit(report_json, dump(hublab::make_report("verify", std::move(cfg), hublab::to_json(rep))));
    });
}

hublab_status hublab_closure(const hublab_graph* g, const hublab_labels* l, hublab_labels** out)
{
    return guarded([&] {
        require(g && l && out, "null argument");
        require(l->hl.num_vertices() == g->g.num_vertices(), "labels and graph disagree on vertex count");
        *out = new hublab_labels{hublab::monotone_closure(l->hl, g->g)};
    });
}

hublab_status hublab_build(const hublab_graph* g, const hublab_build_config* cfg, const hublab_options* opts,
                           hublab_labels** out, char** report_json)
{
    return guarded([&] {
        require(g && out, "null argument");
        const Resolved r = resolve(opts);
        const hublab::BuilderConfig bc = builder_config(cfg, r.threads);
        hublab::PipelineOptions po;
        po.reduce = reduce_mode(cfg ? cfg->reduce_mode : HUBLAB_REDUCE_AUTO);
        po.all_pairs = r.all_pairs();
        hublab::PipelineResult res = hublab::run_pipeline(g->g, bc, po);
        json c = r.to_json();
        c["graph"] = graph_summary(g->g);
        c["D"] = res.artifacts.D;
        c["D_requested"] = bc.D;
        c["seed"] = bc.seed;
        c["max_resamples"] = bc.max_resamples;
        c["reduce"] = reduce_name(po.reduce);
        emit(report_json, dump(hublab::make_report("build", std::move(c), hublab::to_json(res))));
        *out = new hublab_labels{std::move(res.labeling)};
    });
}

hublab_status hublab_bench(const hublab_graph* g, const uint32_t* thresholds, size_t count, uint64_t seed,
                           uint32_t max_resamples, const hublab_options* opts, char** report_json)
{
    return guarded([&] {
        require(g && (thresholds || count == 0), "null argument");
        require(count > 0, "empty threshold range");
        const Resolved r = resolve(opts);
        json rows = json::array();
        json timing = json::array();
        json ds = json::array();
        for (size_t i = 0; i < count; ++i) {
            require(thresholds[i] >= 1, "threshold must be positive");
            hublab::BuilderConfig bc;
            bc.D = thresholds[i];
            bc.seed = seed;
            bc.threads = r.threads;
            if (max_resamples)
                bc.max_resamples = max_resamples;
            hublab::PipelineOptions po;
            po.all_pairs = r.all_pairs();
            const auto t0 = std::chrono::steady_clock::now();
            const hublab::PipelineResult res = hublab::run_pipeline(g->g, bc, po);
            const auto t1 = std::chrono::steady_clock::now();
            json row = hublab::to_json(res);
            row["D"] = bc.D;
            row["avg_hub_size"] = res.cover.avg_hub_size();
            row["total_size"] = res.cover.total_size;
            row["valid"] = res.cover.valid;
            rows.push_back(std::move(row));
            timing.push_back({{"D", bc.D}, {"wall_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}});
            ds.push_back(bc.D);
        }
        json c = r.to_json();
        c["graph"] = graph_summary(g->g);
        c["D_range"] = std::move(ds);
        c["seed"] = seed;
        c["max_resamples"] = max_resamples ? max_resamples : hublab::BuilderConfig{}.max_resamples;
        json report = hublab::make_report("bench", std::move(c), {{"rows", std::move(rows)}});
        report["timing"] = std::move(timing);
        emit(report_json, dump(report));
    });
}

hublab_status hublab_audit_lemma1(const hublab_family* f, uint64_t sample, uint64_t seed, char** report_json,
                                  int* pass)
{
    return guarded([&] {
        require(f != nullptr, "null argument");
        hublab::AuditMode mode;
        if (sample)
            mode.sample = sample;
        mode.seed = seed;
        const hublab::TripletReport rep = hublab::audit_lemma1(f->inst, mode);
        if (pass)
            *pass = rep.passed() ? 1 : 0;
        json c = {{"kind", hublab::to_string(f->inst.kind)},
                  {"b", f->inst.params.b},
                  {"ell", f->inst.params.ell},
                  {"sample", sample},
                  {"seed", seed}};
        emit(report_json, dump(hublab::make_report("audit lemma1", std::move(c), hublab::to_json(rep))));
    });
}

hublab_status hublab_audit_counting(const hublab_family* f, const hublab_labels* l, const hublab_options* opts,
                                    char** report_json, int* pass)
{
    return guarded([&] {
        require(f && l, "null argument");
        const Resolved r = resolve(opts);
        const hublab::CountingReport rep = hublab::audit_counting(f->inst, l->hl, r.all_pairs());
        if (pass)
            *pass = rep.pass ? 1 : 0;
        json c = r.to_json();
        c["kind"] = hublab::to_string(f->inst.kind);
        c["b"] = f->inst.params.b;
        c["ell"] = f->inst.params.ell;
        emit(report_json, dump(hublab::make_report("audit counting", std::move(c), hublab::to_json(rep))));
    });
}

hublab_status hublab_sumindex(uint32_t b, uint32_t ell, const char* bits, uint64_t a, uint64_t b_index, int sweep,
                              int mode, const hublab_build_config* hub_cfg, const hublab_options* opts,
                              char** transcript_csv, char** summary_json, int* all_correct)
{
    return guarded([&] {
        require(bits != nullptr, "null bit string");
        require(mode == HUBLAB_MODE_ORACLE || mode == HUBLAB_MODE_HUB, "unknown labeling mode");
        const Resolved r = resolve(opts);
        const hublab::FamilyParams p{b, ell};
        hublab::SumIndexInstance inst = hublab::make_sumindex_instance(p, bits);
        const std::uint64_t m = inst.m();
        if (!sweep)
            require(a < m && b_index < m, "index out of range");
        hublab::ProtocolOptions po;
        po.mode = mode == HUBLAB_MODE_HUB ? hublab::LabelingMode::Hub : hublab::LabelingMode::Oracle;
        po.hub_config = builder_config(hub_cfg, r.threads);
        po.all_pairs = r.all_pairs();
        po.limits = r.limits();
        hublab::SumIndexSession session(std::move(inst), po);

        std::ostringstream csv;
        csv << hublab::transcript_csv_header() << '\n';
        std::uint64_t runs = 0;
        std::uint64_t correct = 0;
        auto one = [&](std::uint64_t x, std::uint64_t y) {
            const hublab::SumIndexTranscript t = session.run(x, y);
            csv << hublab::transcript_csv_row(t) << '\n';
            ++runs;
            correct += t.decoded == t.expected;
        };
        if (sweep) {
            for (std::uint64_t x = 0; x < m; ++x)
                for (std::uint64_t y = 0; y < m; ++y)
                    one(x, y);
        } else {
            one(a, b_index);
        }
        if (all_correct)
            *all_correct = runs == correct ? 1 : 0;

        json c = r.to_json();
        c["b"] = b;
        c["ell"] = ell;
        c["bits"] = bits;
        c["mode"] = hublab::to_string(po.mode);
        if (sweep) {
            c["sweep"] = true;
        } else {
            c["a"] = a;
            c["b_index"] = b_index;
        }
        if (po.mode == hublab::LabelingMode::Hub) {
            c["D"] = po.hub_config.D;
            c["seed"] = po.hub_config.seed;
            c["max_resamples"] = po.hub_config.max_resamples;
        }
        json res = {{"m", m},
                    {"runs", runs},
                    {"correct", correct},
                    {"all_correct", runs == correct},
                    {"graph", graph_summary(session.graph().graph)},
                    {"message_size", hublab::to_json(session.message_size())}};
        emit(transcript_csv, csv.str());
        emit(summary_json, dump(hublab::make_report("sumindex", std::move(c), std::move(res))));
    });
}

} // extern "C"
