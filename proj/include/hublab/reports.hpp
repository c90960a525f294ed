#ifndef HUBLAB_REPORTS_HPP_
#define HUBLAB_REPORTS_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "hublab/audit.hpp"
#include "hublab/builder.hpp"
#include "hublab/labeling.hpp"
#include "hublab/sumindex.hpp"

namespace hublab {

inline constexpr int kReportSchema = 1;

nlohmann::json to_json(const CoverReport& r);
nlohmann::json label_stats_json(const HubLabeling& hl);
nlohmann::json to_json(const SizeLedger& l);
nlohmann::json to_json(const BuilderArtifacts& a);
nlohmann::json to_json(const PipelineResult& r);
nlohmann::json to_json(const TripletReport& r);
nlohmann::json to_json(const CountingReport& r);
nlohmann::json to_json(const MessageSize& m);

std::string transcript_csv_header();
std::string transcript_csv_row(const SumIndexTranscript& t);

// {"schema": 1, "command": ..., "config": ..., "result": ...}
nlohmann::json make_report(const std::string& command, nlohmann::json config, nlohmann::json result);

} // namespace hublab

#endif // HUBLAB_REPORTS_HPP_
