#pragma once
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mvgb/bounds.hpp"
#include "mvgb/experiments.hpp"

namespace mvgb {

using nlohmann::json;

// Distribution files: {"axes": [{"name", "size"}], "probs": [...]} with probs
// row-major over the listed axis order. Readers validate shape and
// normalization (normalize = true accepts unnormalized weights).
json to_json(const JointDistribution& dist);
JointDistribution distribution_from_json(const json& j, bool renormalize = false);

json to_json(const MultiViewDataset& data);
MultiViewDataset dataset_from_json(const json& j);

json to_json(const GenerativeModel& model);
GenerativeModel model_from_json(const json& j);

json to_json(const RepresentationFunction& rep);
RepresentationFunction representation_from_json(const json& j);

// InfoProfile JSON carries every field; unset optionals serialize as null.
json to_json(const InfoProfile& profile);
InfoProfile profile_from_json(const json& j);

json to_json(const LossEnvelope& env);
LossEnvelope envelope_from_json(const json& j);

// BoundParams plus the loss envelope travel together in one params document.
json params_to_json(const BoundParams& params, const LossEnvelope& env);
std::pair<BoundParams, LossEnvelope> params_from_json(const json& j);

json to_json(const BoundBreakdown& breakdown);
// Aligned text rendering; values printed with 6 decimals (nats).
void print_breakdown(const BoundBreakdown& breakdown, std::ostream& out, bool bits);

json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const json& j);

// Study artifacts: one CSV row per record, a JSON summary, and optional
// two-column plot files.
void write_report_csv(const StudyReport& report, const std::string& path);
json report_summary_json(const StudyReport& report, const ExperimentConfig& config);
void write_plot_series(const StudyReport& report, const std::string& dir);

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

}  // namespace mvgb
