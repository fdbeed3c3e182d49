#include "pedfuse/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/numio.hpp"

namespace pedfuse::eval {

namespace {

void check_shapes(std::size_t preds, std::size_t targets) {
  if (preds == 0) throw std::invalid_argument("rmse: need at least one sample");
  if (preds != targets) {
    throw std::invalid_argument("rmse: " + std::to_string(preds) + " predictions vs " +
                                std::to_string(targets) + " targets");
  }
}

std::string cues_description(model::CueConfig cues) {
  std::string s = "pedestrian track";
  if (cues.use_vehicle) s += " + vehicle track";
  if (cues.use_head) s += " + head orientation";
  return s;
}

MethodMetrics evaluate_method(const std::string& slot,
                              const std::vector<data::TrajectorySample>& test_set,
                              const MethodArtifacts& artifacts) {
  std::vector<model::Forecast> preds;
  std::vector<std::array<Vec2, data::kFutureSteps>> targets;
  preds.reserve(test_set.size());
  targets.reserve(test_set.size());
  for (const auto& sample : test_set) {
    preds.push_back(model::predict(sample, artifacts.params));
    targets.push_back(sample.ped_future);
  }
  MethodMetrics m;
  m.method = slot;
  m.inputs = cues_description(artifacts.params.cues);
  m.rmse_m = rmse(preds, targets);
  m.per_step_m = per_horizon_displacement(preds, targets);
  m.checkpoint_id = artifacts.checkpoint_id;
  return m;
}

}  // namespace

double rmse(const std::vector<model::Forecast>& preds,
            const std::vector<std::array<Vec2, data::kFutureSteps>>& targets) {
  check_shapes(preds.size(), targets.size());
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t k = 0; k < data::kFutureSteps; ++k) {
      sum_sq += squared_norm(preds[i].positions[k] - targets[i][k]);
    }
  }
  return std::sqrt(sum_sq / (static_cast<double>(preds.size()) * data::kFutureSteps));
}

std::array<double, data::kFutureSteps> per_horizon_displacement(
    const std::vector<model::Forecast>& preds,
    const std::vector<std::array<Vec2, data::kFutureSteps>>& targets) {
  check_shapes(preds.size(), targets.size());
  std::array<double, data::kFutureSteps> out{};
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t k = 0; k < data::kFutureSteps; ++k) {
      out[k] += norm(preds[i].positions[k] - targets[i][k]);
    }
  }
  for (double& v : out) v /= static_cast<double>(preds.size());
  return out;
}

MetricsReport compare_methods(const std::vector<data::TrajectorySample>& test_set,
                              const MethodArtifacts& baseline, const MethodArtifacts& method1,
                              const MethodArtifacts& method2, const std::string& corpus_id) {
  if (test_set.empty()) throw std::invalid_argument("compare_methods: empty test set");
  if (baseline.manifest != method1.manifest || baseline.manifest != method2.manifest) {
    throw DataError(
        "compare_methods: split manifests disagree between checkpoints; the models were "
        "trained on different data partitions");
  }
  MetricsReport report;
  report.corpus_id = corpus_id;
  report.sample_count = test_set.size();
  report.rows.push_back(evaluate_method("baseline", test_set, baseline));
  report.rows.push_back(evaluate_method("method1", test_set, method1));
  report.rows.push_back(evaluate_method("method2", test_set, method2));
  return report;
}

std::string render_report_text(const MetricsReport& report) {
  std::size_t method_w = 6, inputs_w = 6;
  for (const MethodMetrics& row : report.rows) {
    method_w = std::max(method_w, row.method.size());
    inputs_w = std::max(inputs_w, row.inputs.size());
  }
  const auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w - s.size() + 2, ' ');
  };
  std::string out = "# corpus: " + report.corpus_id + "\n";
  out += "# test samples: " + std::to_string(report.sample_count) + "\n";
  out += pad("method", method_w) + pad("inputs", inputs_w) + "RMSE (m)\n";
  for (const MethodMetrics& row : report.rows) {
    out += pad(row.method, method_w) + pad(row.inputs, inputs_w) +
           numio::format_fixed(row.rmse_m, 6) + "\n";
  }
  return out;
}

std::string render_report_tsv(const MetricsReport& report) {
  std::string out = "method\tinputs\trmse_m\tcheckpoint\tcorpus\ttest_samples\n";
  for (const MethodMetrics& row : report.rows) {
    out += row.method + "\t" + row.inputs + "\t" + numio::format_double(row.rmse_m) + "\t" +
           row.checkpoint_id + "\t" + report.corpus_id + "\t" +
           std::to_string(report.sample_count) + "\n";
  }
  return out;
}

std::string render_horizon_tsv(const MetricsReport& report) {
  std::string out = "step\tseconds";
  for (const MethodMetrics& row : report.rows) out += "\t" + row.method + "_m";
  out += "\n";
  for (std::size_t k = 0; k < data::kFutureSteps; ++k) {
    out += std::to_string(k + 1) + "\t" +
           numio::format_fixed(static_cast<double>(k + 1) * data::kStepSeconds, 1);
    for (const MethodMetrics& row : report.rows) {
      out += "\t" + numio::format_double(row.per_step_m[k]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace pedfuse::eval
