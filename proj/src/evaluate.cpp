#include "rriqa/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <optional>

#include "rriqa/correlation.hpp"
#include "rriqa/error.hpp"
#include "rriqa/image_io.hpp"

namespace rriqa {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (const std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t cache_key(std::span<const std::uint8_t> bytes, const EvaluationConfig& config) {
  const std::uint8_t tail[] = {static_cast<std::uint8_t>(config.space),
                               static_cast<std::uint8_t>(config.cfg.scales),
                               static_cast<std::uint8_t>(config.cfg.orientations)};
  return fnv1a(tail, fnv1a(bytes));
}

std::string message_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& x) {
    return x.what();
  } catch (...) {
    return "unknown error";
  }
}

double safe(double (*corr)(std::span<const double>, std::span<const double>),
            std::span<const double> a, std::span<const double> b) {
  try {
    return corr(a, b);
  } catch (const Error&) {
    return kNaN;
  }
}

CorrelationRow correlate(int type, const std::vector<double>& q, const std::vector<double>& mos,
                         const LogisticFit& fit) {
  CorrelationRow row;
  row.type = type;
  row.n = q.size();
  if (q.size() < 2) {
    row.plcc = row.srcc = kNaN;
    return row;
  }
  row.plcc = safe(plcc, fit.predict(q), mos);
  row.srcc = std::abs(safe(srcc, q, mos));
  return row;
}

}  // namespace

EvaluationReport evaluate(const std::vector<LabeledSample>& samples,
                          const EvaluationConfig& config) {
  config.cfg.validate();
  EvaluationReport report;
  report.config = config;

  // Reference features, computed once per distinct reference content.
  std::vector<std::filesystem::path> refs;
  std::map<std::filesystem::path, std::size_t> ref_index;
  for (const LabeledSample& s : samples) {
    if (ref_index.emplace(s.reference_path, refs.size()).second) refs.push_back(s.reference_path);
  }
  std::vector<std::uint64_t> keys(refs.size());
  std::vector<std::vector<std::uint8_t>> ref_bytes(refs.size());
  std::vector<std::string> ref_errors(refs.size());
  for (std::size_t r = 0; r < refs.size(); ++r) {
    try {
      ref_bytes[r] = read_file(refs[r]);
      keys[r] = cache_key(ref_bytes[r], config);
    } catch (const std::exception& e) {
      ref_errors[r] = e.what();
    }
  }
  std::map<std::uint64_t, std::size_t> first_with_key;
  std::vector<std::size_t> owner(refs.size());
  for (std::size_t r = 0; r < refs.size(); ++r) {
    owner[r] = ref_errors[r].empty() ? first_with_key.emplace(keys[r], r).first->second : r;
  }

  std::vector<std::optional<FeatureSet>> ref_features(refs.size());
  const long ref_count = static_cast<long>(refs.size());
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < ref_count; ++r) {
    const auto i = static_cast<std::size_t>(r);
    if (owner[i] != i || !ref_errors[i].empty()) continue;
    try {
      const ColorImage img = decode_image(ref_bytes[i]);
      ref_features[i] = extract_features(img, config.space, config.cfg, config.metric.estimation);
    } catch (...) {
      ref_errors[i] = refs[i].string() + ": " + message_of(std::current_exception());
    }
  }

  // Distorted images.
  const long n = static_cast<long>(samples.size());
  std::vector<std::optional<QualityResult>> results(samples.size());
  std::vector<std::string> errors(samples.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const std::size_t r = owner[ref_index.at(samples[i].reference_path)];
    if (!ref_features[r]) {
      errors[i] = "reference failed: " + ref_errors[r];
      continue;
    }
    try {
      const ColorImage img = read_image(samples[i].distorted_path);
      results[i] = score(*ref_features[r], img, config.distance, config.metric);
    } catch (...) {
      errors[i] = message_of(std::current_exception());
    }
  }

  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (results[i]) {
      report.outcomes.push_back({samples[i], results[i]->d_total, results[i]->q});
    } else {
      report.failures.push_back({samples[i], errors[i]});
    }
  }

  std::vector<double> q, mos;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const SampleOutcome& o : report.outcomes) {
    q.push_back(o.q);
    mos.push_back(o.sample.mos);
    auto& g = groups[o.sample.distortion_type];
    g.first.push_back(o.q);
    g.second.push_back(o.sample.mos);
  }
  LogisticFitOptions fit_options;
  fit_options.seed = config.seed;
  report.fit = fit_logistic(q, mos, fit_options);
  report.overall = correlate(0, q, mos, report.fit);

  for (const auto& [type, g] : groups) {
    LogisticFit fit = report.fit;
    if (config.per_type_fit) {
      try {
        fit = fit_logistic(g.first, g.second, fit_options);
      } catch (const Error& e) {
        report.notes.push_back("type " + std::to_string(type) +
                               ": global fit reused (" + e.what() + ")");
      }
    }
    report.per_type.push_back(correlate(type, g.first, g.second, fit));
  }
  if (!report.failures.empty()) {
    report.notes.push_back(std::to_string(report.failures.size()) + " of " +
                           std::to_string(samples.size()) + " samples failed");
  }
  return report;
}

std::string report_to_text(const EvaluationReport& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line,
                "color_space %s\ndistance %s\nscales %d\norientations %d\nd0 %.17g\n"
                "logistic_fit %s\n",
                std::string(to_string(r.config.space)).c_str(),
                std::string(to_string(r.config.distance)).c_str(), r.config.cfg.scales,
                r.config.cfg.orientations, r.config.metric.d0,
                r.config.per_type_fit ? "per_type" : "global");
  out += line;
  std::snprintf(line, sizeof line, "fit b1..b5 %.10g %.10g %.10g %.10g %.10g residual %.10g%s\n",
                r.fit.b[0], r.fit.b[1], r.fit.b[2], r.fit.b[3], r.fit.b[4], r.fit.residual,
                r.fit.converged ? "" : " (not converged)");
  out += line;
  out += "\n  type      n    plcc    srcc\n";
  const auto row = [&](const std::string& label, const CorrelationRow& c) {
    std::snprintf(line, sizeof line, "%6s %6zu  %6.4f  %6.4f\n", label.c_str(), c.n, c.plcc,
                  c.srcc);
    out += line;
  };
  for (const CorrelationRow& c : r.per_type) row(std::to_string(c.type), c);
  row("all", r.overall);
  if (!r.failures.empty()) {
    out += "\nfailures:\n";
    for (const SampleFailure& f : r.failures) {
      out += "  " + f.sample.distorted_path.string() + ": " + f.message + "\n";
    }
  }
  for (const std::string& note : r.notes) out += "note: " + note + "\n";
  return out;
}

std::string report_to_csv(const EvaluationReport& r) {
  std::string out = "type,n,plcc,srcc\n";
  char line[128];
  const auto row = [&](const std::string& label, const CorrelationRow& c) {
    std::snprintf(line, sizeof line, "%s,%zu,%.17g,%.17g\n", label.c_str(), c.n, c.plcc, c.srcc);
    out += line;
  };
  for (const CorrelationRow& c : r.per_type) row(std::to_string(c.type), c);
  row("all", r.overall);
  return out;
}

}  // namespace rriqa
