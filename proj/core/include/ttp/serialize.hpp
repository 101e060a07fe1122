#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttp/pipeline.hpp"
#include "ttp/simulation.hpp"

namespace ttp {

void to_json(nlohmann::json& j, const KernelSpec& v);
void from_json(const nlohmann::json& j, KernelSpec& v);
void to_json(nlohmann::json& j, const FusionConfig& v);
void from_json(const nlohmann::json& j, FusionConfig& v);
void to_json(nlohmann::json& j, const FusionOutcome& v);
void from_json(const nlohmann::json& j, FusionOutcome& v);
void to_json(nlohmann::json& j, const CausalityConfig& v);
void from_json(const nlohmann::json& j, CausalityConfig& v);
void to_json(nlohmann::json& j, const CausalityOutcome& v);
void from_json(const nlohmann::json& j, CausalityOutcome& v);
void to_json(nlohmann::json& j, const DiagnosticsReport& v);
void from_json(const nlohmann::json& j, DiagnosticsReport& v);
void to_json(nlohmann::json& j, const TTPConfig& v);
void from_json(const nlohmann::json& j, TTPConfig& v);
void to_json(nlohmann::json& j, const SeedRecord& v);
void from_json(const nlohmann::json& j, SeedRecord& v);
void to_json(nlohmann::json& j, const TTPReport& v);
void from_json(const nlohmann::json& j, TTPReport& v);
void to_json(nlohmann::json& j, const Scenario& v);
void from_json(const nlohmann::json& j, Scenario& v);
void to_json(nlohmann::json& j, const MethodRate& v);
void from_json(const nlohmann::json& j, MethodRate& v);
/// wall_time is left out so that reruns serialize identically.
void to_json(nlohmann::json& j, const CampaignResult& v);
void from_json(const nlohmann::json& j, CampaignResult& v);
void to_json(nlohmann::json& j, const NullQuantileRow& v);
void from_json(const nlohmann::json& j, NullQuantileRow& v);
void to_json(nlohmann::json& j, const NullMethodSummary& v);
void from_json(const nlohmann::json& j, NullMethodSummary& v);
void to_json(nlohmann::json& j, const NullStudyResult& v);
void from_json(const nlohmann::json& j, NullStudyResult& v);

/// Tab-separated companions, one header line then one row per record.
std::string report_table(const TTPReport& report);
std::string campaign_table(const std::vector<CampaignResult>& cells);
std::string null_study_table(const std::vector<NullStudyResult>& cells);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace ttp
