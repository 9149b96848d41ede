#pragma once

#include <string>
#include <vector>

#include "exeos/pipeline/runner.hpp"

namespace exeos::pipeline {

// Serialization used by the record store and the report tool.
std::string record_to_json(const RunRecord& record);
Result<RunRecord, PipelineError> record_from_json(const std::string& text);

// Append-only store: one JSON document per (problem, variant, run) cell plus
// an index. Writes are atomic (temp file + rename), so an interrupted bench
// leaves only complete records and resumes where it stopped.
class RecordStore {
 public:
  explicit RecordStore(std::string dir);

  static std::string cell_key(const std::string& problem,
                              const std::string& variant, int run_index);

  bool has(const std::string& key) const;
  Result<RunRecord, PipelineError> load(const std::string& key) const;
  Result<bool, PipelineError> save(const RunRecord& record);  // true = written

  // All records in the store, sorted by (problem, variant, run).
  Result<std::vector<RunRecord>, PipelineError> collect() const;
  // Rewrites index.json from the store contents; returns the record count.
  Result<std::size_t, PipelineError> write_index() const;

  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
};

struct BenchOptions {
  int jobs = 1;          // worker threads; 1 keeps execution order deterministic
  bool resume = true;    // skip cells whose record file already exists
};

// Runs every (bundle, variant, run) cell of the matrix, persisting records
// incrementally. Gateway failures are encoded as runtime-error records with
// an empty spec attempt, so a flaky backend cannot abort a long bench.
// Returns all records sorted by (problem, variant, run).
Result<std::vector<RunRecord>, PipelineError> bench(
    const std::vector<ProblemBundle>& bundles,
    const std::vector<VariantConfig>& matrix, RecordStore& store,
    const PipelineEnv& env = {}, const BenchOptions& options = {});

}  // namespace exeos::pipeline
