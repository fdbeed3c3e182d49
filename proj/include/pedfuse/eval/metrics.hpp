#pragma once

#include <array>
#include <string>
#include <vector>

#include "pedfuse/data/pipeline.hpp"
#include "pedfuse/data/split.hpp"
#include "pedfuse/model/fusion.hpp"

namespace pedfuse::eval {

/// Root of the mean squared Euclidean displacement over all N x 10 predicted
/// points, in meters.
double rmse(const std::vector<model::Forecast>& preds,
            const std::vector<std::array<Vec2, data::kFutureSteps>>& targets);

/// Mean Euclidean displacement at each forecast step across samples.
std::array<double, data::kFutureSteps> per_horizon_displacement(
    const std::vector<model::Forecast>& preds,
    const std::vector<std::array<Vec2, data::kFutureSteps>>& targets);

struct MethodMetrics {
  std::string method;                                    // row label
  std::string inputs;                                    // human description
  double rmse_m = 0.0;
  std::array<double, data::kFutureSteps> per_step_m{};   // mean displacement
  std::string checkpoint_id;                             // e.g. file stem
};

struct MetricsReport {
  std::string corpus_id;
  std::size_t sample_count = 0;
  std::vector<MethodMetrics> rows;  // baseline, method1, method2 order
};

/// One trained model plus the split manifest it was trained under.
struct MethodArtifacts {
  model::ModelParameters params;
  std::vector<data::GroupAssignment> manifest;
  std::string checkpoint_id;
};

/// Evaluates the three cue configurations on one shared test set. The split
/// manifests must agree exactly; a mismatch means the models were trained on
/// different data partitions and their errors are not comparable.
MetricsReport compare_methods(const std::vector<data::TrajectorySample>& test_set,
                              const MethodArtifacts& baseline, const MethodArtifacts& method1,
                              const MethodArtifacts& method2, const std::string& corpus_id);

// Report renderers: an aligned plain-text table and tab-separated values for
// machines. Both are deterministic functions of the report alone.
std::string render_report_text(const MetricsReport& report);
std::string render_report_tsv(const MetricsReport& report);
std::string render_horizon_tsv(const MetricsReport& report);

}  // namespace pedfuse::eval
