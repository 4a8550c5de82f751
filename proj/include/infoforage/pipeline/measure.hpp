#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "infoforage/lexical.hpp"
#include "infoforage/parallel.hpp"
#include "infoforage/pipeline/records.hpp"
#include "infoforage/text.hpp"

namespace infoforage::pipeline {

struct MeasureOptions {
  MeasureConfig config;
  std::size_t threads = 1;
};

struct SkippedRow {
  std::string source_id;
  std::string path;
  std::string reason;  // "too_short", "empty", "unreadable: ...", ...
};

struct MeasureReport {
  std::vector<MeasureRecord> records;  // manifest order
  std::vector<SkippedRow> skipped;     // manifest order
  std::size_t failed = 0;              // rows skipped for errors (not too_short/empty)
};

/// clean -> truncate -> measure for one manifest row.
[[nodiscard]] inline MeasureRecord measure_text(std::string_view raw, const ManifestRow& row,
                                                const MeasureConfig& config,
                                                std::optional<std::string>* skip_reason = nullptr) {
  TextSample sample = clean_and_tokenize(raw, row.profile);
  sample.year = row.year;
  sample.category = row.category;
  sample.source_id = row.source_id;
  const auto truncated = truncate_last(sample, config.sample_size);
  if (!truncated) {
    if (skip_reason) *skip_reason = "too_short";
    return {};
  }
  const LexicalMeasures m = compute_measures(truncated->tokens);
  MeasureRecord r;
  r.source_id = row.source_id;
  r.year = row.year;
  r.category = row.category;
  r.n_tokens = m.n_tokens;
  r.word_entropy_bits = m.word_entropy_bits;
  r.type_token_ratio = m.type_token_ratio;
  r.zipf_exponent = m.zipf_exponent;
  r.zipf_loglik = m.zipf_loglik;
  r.tool_version = std::string(kToolVersion);
  r.config_hash = config.hash();
  return r;
}

/// Rows are processed in parallel; results keep manifest order regardless of
/// scheduling.
[[nodiscard]] inline MeasureReport run_measure(const std::vector<ManifestRow>& rows,
                                               const MeasureOptions& opts = {}) {
  struct Outcome {
    std::optional<MeasureRecord> record;
    std::string reason;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(rows.size());

  parallel_for(rows.size(), opts.threads, [&](std::size_t i) {
    auto& out = outcomes[i];
    std::string raw;
    try {
      raw = read_file(rows[i].path);
    } catch (const std::exception& e) {
      out.reason = std::string("unreadable: ") + e.what();
      out.failed = true;
      return;
    }
    try {
      std::optional<std::string> skip;
      MeasureRecord rec = measure_text(raw, rows[i], opts.config, &skip);
      if (skip) {
        out.reason = *skip;
      } else {
        out.record = std::move(rec);
      }
    } catch (const EmptySampleError&) {
      out.reason = "empty";
    } catch (const std::exception& e) {
      out.reason = std::string("error: ") + e.what();
      out.failed = true;
    }
  });

  MeasureReport report;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (outcomes[i].record) {
      report.records.push_back(std::move(*outcomes[i].record));
    } else {
      report.skipped.push_back({rows[i].source_id, rows[i].path, outcomes[i].reason});
      if (outcomes[i].failed) ++report.failed;
    }
  }
  return report;
}

}  // namespace infoforage::pipeline
