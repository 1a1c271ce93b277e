#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rriqa/dataset.hpp"
#include "rriqa/logistic.hpp"
#include "rriqa/metric.hpp"

namespace rriqa {

struct EvaluationConfig {
  ColorSpace space = ColorSpace::cielab;
  DistanceKind distance = DistanceKind::kld;
  PyramidConfig cfg;
  MetricOptions metric;
  bool per_type_fit = false;  ///< refit the logistic inside every distortion type
  std::uint64_t seed = 0;
};

/// Correlations over one group of samples. type 0 stands for "all".
/// plcc compares the fitted prediction with MOS; srcc is |SRCC(Q, MOS)|
/// since Q grows with distortion while MOS falls. NaN when undefined.
struct CorrelationRow {
  int type = 0;
  std::size_t n = 0;
  double plcc = 0.0;
  double srcc = 0.0;
};

struct SampleOutcome {
  LabeledSample sample;
  double d_total = 0.0;
  double q = 0.0;
};

struct SampleFailure {
  LabeledSample sample;
  std::string message;
};

struct EvaluationReport {
  EvaluationConfig config;
  std::vector<CorrelationRow> per_type;  ///< ascending type
  CorrelationRow overall;
  LogisticFit fit;
  std::vector<SampleOutcome> outcomes;  ///< manifest order, successes only
  std::vector<SampleFailure> failures;
  std::vector<std::string> notes;
};

/// Scores every sample against its (cached) reference features and runs the
/// regression protocol. Per-sample failures are collected; throws
/// DegenerateDataError when the global fit is impossible (e.g. all Q equal).
EvaluationReport evaluate(const std::vector<LabeledSample>& samples,
                          const EvaluationConfig& config);

std::string report_to_text(const EvaluationReport& report);
/// Columns type,n,plcc,srcc; one row per type and a final "all" row.
std::string report_to_csv(const EvaluationReport& report);

}  // namespace rriqa
