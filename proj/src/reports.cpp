#include "hublab/reports.hpp"

#include <map>
#include <sstream>

namespace hublab {

using nlohmann::json;

namespace {

std::string coords_string(const std::vector<unsigned>& c)
{
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i)
            s += ' ';
        s += std::to_string(c[i]);
    }
    return s + ")";
}

json triplet_json(const Triplet& t) { return {{"x", t.x}, {"y", t.y}, {"z", t.z}}; }

} // namespace

json to_json(const CoverReport& r)
{
    json uncovered = json::array();
    for (const auto& [u, v] : r.uncovered)
        uncovered.push_back({u, v});
    return {
        {"valid", r.valid},
        {"n", r.n},
        {"pairs_checked", r.pairs_checked},
        {"uncovered_count", r.uncovered_count},
        {"uncovered", std::move(uncovered)},
        {"uncovered_truncated", r.uncovered_count > r.uncovered.size()},
        {"total_size", r.total_size},
        {"max_hub_size", r.max_hub_size},
        {"avg_hub_size", {{"num", r.total_size}, {"den", r.n}, {"value", r.avg_hub_size()}}},
        {"bit_estimate", r.bit_estimate},
        {"diameter", r.diameter},
        {"distance_mismatches", r.distance_mismatches},
    };
}

json label_stats_json(const HubLabeling& hl)
{
    std::size_t min_size = hl.num_vertices() ? hl.hubs(0).size() : 0;
    Dist max_dist = 0;
    for (Vertex v = 0; v < hl.num_vertices(); ++v) {
        min_size = std::min(min_size, hl.hubs(v).size());
        for (const auto& e : hl.hubs(v))
            max_dist = std::max(max_dist, e.dist);
    }
    const std::uint64_t n = hl.num_vertices();
    const std::uint64_t total = hl.total_size();
    return {
        {"n", n},
        {"total_size", total},
        {"avg_hub_size", {{"num", total}, {"den", n}, {"value", n ? static_cast<double>(total) / n : 0.0}}},
        {"max_hub_size", hl.max_size()},
        {"min_hub_size", min_size},
        {"max_stored_dist", max_dist},
        // Stored distances bound the diameter from below; this is the label-only estimate.
        {"bit_estimate", label_bits(total, n, max_dist)},
    };
}

json to_json(const SizeLedger& l)
{
    return {
        {"n", l.n},
        {"cover_set", l.cover_set},
        {"sum_Q", l.sum_Q},
        {"sum_Q_fallback", l.sum_Q_fallback},
        {"sum_R", l.sum_R},
        {"sum_F", l.sum_F},
        {"sum_NF", l.sum_NF},
        {"max_degree", l.max_degree},
        {"total", l.total},
        {"bound", l.bound},
        {"holds", l.holds()},
    };
}

json to_json(const BuilderArtifacts& a)
{
    std::map<std::uint64_t, std::uint64_t> hist;
    for (const auto& b : a.matching.buckets)
        ++hist[b.matched];
    json histogram = json::array();
    for (const auto& [size, count] : hist)
        histogram.push_back({{"matching_size", size}, {"buckets", count}});
    return {
        {"D", a.D},
        {"pairs", {{"reachable", a.reachable_pairs}, {"large", a.large_pairs}, {"small", a.small_pairs}}},
        {"S", a.cover.S.size()},
        {"cover_stage", {{"attempts", a.cover.attempts}, {"skipped", a.cover.skipped}, {"sum_Q", a.cover.sum_Q}}},
        {"coloring_stage", {{"attempts", a.coloring.attempts}, {"sum_R", a.coloring.sum_R}}},
        {"matching_stage",
         {{"buckets", a.matching.buckets.size()},
          {"bucket_edges", a.matching.bucket_edges},
          {"matched_edges", a.matching.matched_edges},
          {"sum_F", a.matching.sum_F},
          {"induced_checks", a.matching.induced_checks},
          {"induced_violations", 0},
          {"matching_size_histogram", std::move(histogram)}}},
        {"size_ledger", to_json(a.ledger)},
    };
}

json to_json(const PipelineResult& r)
{
    json j = {
        {"stages", to_json(r.artifacts)},
        {"cover", to_json(r.cover)},
    };
    if (r.reduction) {
        j["reduction"] = {
            {"applied", true},
            {"degree_cap", r.reduction->degree_cap},
            {"split_vertices", r.reduction->split_vertices},
            {"vertices", r.reduction->graph.num_vertices()},
            {"edges", r.reduction->graph.num_edges()},
        };
    } else {
        j["reduction"] = {{"applied", false}};
    }
    return j;
}

json to_json(const TripletReport& r)
{
    json failures = json::array();
    for (const auto& f : r.failures) {
        json t = triplet_json(f.triplet);
        t["reason"] = f.reason;
        failures.push_back(std::move(t));
    }
    return {
        {"total_triplets", r.total},
        {"checked", r.checked},
        {"sampled", r.sampled},
        {"sampled_fraction", r.total ? static_cast<double>(r.checked) / static_cast<double>(r.total) : 0.0},
        {"unique_ok", r.unique_ok},
        {"midpoint_ok", r.midpoint_ok},
        {"length_ok", r.length_ok},
        {"failures", std::move(failures)},
        {"pass", r.passed()},
    };
}

json to_json(const CountingReport& r)
{
    json failures = json::array();
    for (const auto& t : r.membership_failures)
        failures.push_back(triplet_json(t));
    return {
        {"lhs_closure_total", r.lhs},
        {"rhs_bound", r.rhs},
        {"triplets", r.triplets},
        {"membership_ok", r.membership_ok},
        {"membership_failures", std::move(failures)},
        {"cover", to_json(r.cover)},
        {"pass", r.pass},
    };
}

json to_json(const MessageSize& m)
{
    return {{"max_label_bits", m.max_label_bits}, {"avg_label_bits", m.avg_label_bits}, {"index_bits", m.index_bits}};
}

std::string transcript_csv_header()
{
    return "a,b,alice_vertex,bob_vertex,alice_label_bits,bob_label_bits,measured_dist,d_min,decoded,expected";
}

std::string transcript_csv_row(const SumIndexTranscript& t)
{
    std::ostringstream os;
    os << t.a << ',' << t.b << ",\"0 " << coords_string(t.alice_vertex.coords) << "\",\"" << t.bob_vertex.level << ' '
       << coords_string(t.bob_vertex.coords) << "\"," << t.alice_label_bits << ',' << t.bob_label_bits << ','
       << t.measured_dist << ',' << t.d_min << ',' << int(t.decoded) << ',' << int(t.expected);
    return os.str();
}

json make_report(const std::string& command, json config, json result)
{
    return {{"schema", kReportSchema}, {"command", command}, {"config", std::move(config)}, {"result", std::move(result)}};
}

} // namespace hublab
