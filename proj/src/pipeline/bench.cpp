#include "exeos/pipeline/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace exeos::pipeline {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::optional<OutcomeClass> parse_outcome(const std::string& s) {
  if (s == "solved") return OutcomeClass::Solved;
  if (s == "compile-error") return OutcomeClass::CompileError;
  if (s == "runtime-error") return OutcomeClass::RuntimeError;
  return std::nullopt;
}

PipelineError io_error(std::string message) {
  return PipelineError{PipelineError::Kind::Io, std::move(message)};
}

}  // namespace

std::string record_to_json(const RunRecord& record) {
  Json doc;
  doc["problem"] = record.problem_id;
  doc["variant"] = record.variant;
  doc["run"] = record.run_index;
  if (record.structured_problem)
    doc["structured"] = llm::render_structured(*record.structured_problem);
  Json history = Json::array();
  for (const auto& attempt : record.spec_history) {
    Json item;
    item["spec"] = attempt.spec;
    item["outcome"] = std::string(to_string(attempt.outcome));
    item["detail"] = attempt.detail;
    history.push_back(std::move(item));
  }
  doc["spec_history"] = std::move(history);
  doc["final"] = std::string(to_string(record.final_class));
  doc["final_detail"] = record.final_detail;
  doc["refinements"] = record.refinement_count;
  if (record.objective) doc["objective"] = *record.objective;
  doc["wall_time_ms"] = record.wall_time_ms;
  Json transcript = Json::array();
  for (const auto& entry : record.transcript) {
    Json item;
    item["step"] = entry.step;
    item["prompt"] = entry.prompt_digest;
    item["response"] = entry.response_digest;
    transcript.push_back(std::move(item));
  }
  doc["transcript"] = std::move(transcript);
  return doc.dump(2) + "\n";
}

Result<RunRecord, PipelineError> record_from_json(const std::string& text) {
  auto fail = [](std::string msg) {
    return PipelineError{PipelineError::Kind::Io,
                         "record document: " + std::move(msg)};
  };
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) return fail("not valid JSON");
  for (const char* key :
       {"problem", "variant", "run", "spec_history", "final", "final_detail",
        "refinements", "wall_time_ms", "transcript"})
    if (!doc.contains(key)) return fail(std::string("missing `") + key + "`");

  RunRecord record;
  if (!doc["problem"].is_string() || !doc["variant"].is_string() ||
      !doc["run"].is_number_integer())
    return fail("bad cell key fields");
  record.problem_id = doc["problem"].get<std::string>();
  record.variant = doc["variant"].get<std::string>();
  record.run_index = doc["run"].get<int>();

  if (doc.contains("structured")) {
    auto sp = llm::parse_structured(doc["structured"].get<std::string>());
    if (!sp) return fail("unparsable structured block");
    record.structured_problem = *sp;
  }
  if (!doc["spec_history"].is_array()) return fail("spec_history not a list");
  for (const auto& item : doc["spec_history"]) {
    if (!item.is_object() || !item.contains("spec") ||
        !item.contains("outcome") || !item.contains("detail"))
      return fail("bad spec_history entry");
    auto outcome = parse_outcome(item["outcome"].get<std::string>());
    if (!outcome) return fail("unknown outcome class in spec_history");
    record.spec_history.push_back({item["spec"].get<std::string>(), *outcome,
                                   item["detail"].get<std::string>()});
  }
  auto final_class = parse_outcome(doc["final"].get<std::string>());
  if (!final_class) return fail("unknown final outcome class");
  record.final_class = *final_class;
  record.final_detail = doc["final_detail"].get<std::string>();
  record.refinement_count = doc["refinements"].get<int>();
  if (doc.contains("objective"))
    record.objective = doc["objective"].get<double>();
  if ((record.final_class == OutcomeClass::Solved) != record.objective.has_value())
    return fail("objective must be present exactly for solved records");
  record.wall_time_ms = doc["wall_time_ms"].get<double>();
  for (const auto& item : doc["transcript"]) {
    if (!item.is_object() || !item.contains("step") ||
        !item.contains("prompt") || !item.contains("response"))
      return fail("bad transcript entry");
    record.transcript.push_back({item["step"].get<std::string>(),
                                 item["prompt"].get<std::string>(),
                                 item["response"].get<std::string>()});
  }
  return record;
}

RecordStore::RecordStore(std::string dir) : dir_(std::move(dir)) {}

std::string RecordStore::cell_key(const std::string& problem,
                                  const std::string& variant, int run_index) {
  return problem + "__" + variant + "__run" + std::to_string(run_index);
}

bool RecordStore::has(const std::string& key) const {
  std::error_code ec;
  return fs::is_regular_file(fs::path(dir_) / (key + ".json"), ec);
}

Result<RunRecord, PipelineError> RecordStore::load(const std::string& key) const {
  std::ifstream in(fs::path(dir_) / (key + ".json"), std::ios::binary);
  if (!in) return io_error("cannot read record " + key);
  std::ostringstream buf;
  buf << in.rdbuf();
  return record_from_json(buf.str());
}

Result<bool, PipelineError> RecordStore::save(const RunRecord& record) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  std::string key = cell_key(record.problem_id, record.variant,
                             record.run_index);
  fs::path final_path = fs::path(dir_) / (key + ".json");
  if (fs::exists(final_path, ec)) return false;

  // Atomic publish: a record file either exists complete or not at all.
  fs::path tmp_path = fs::path(dir_) / (key + ".json.tmp");
  {
    std::ofstream out(tmp_path, std::ios::binary);
    if (!out) return io_error("cannot write " + tmp_path.string());
    out << record_to_json(record);
    if (!out.good()) return io_error("short write to " + tmp_path.string());
  }
  fs::rename(tmp_path, final_path, ec);
  if (ec) return io_error("cannot publish " + final_path.string());
  return true;
}

Result<std::vector<RunRecord>, PipelineError> RecordStore::collect() const {
  std::vector<RunRecord> records;
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) return io_error(dir_ + " does not exist");
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json")
      continue;
    if (entry.path().filename() == "index.json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto record = record_from_json(buf.str());
    if (!record)
      return io_error(entry.path().string() + ": " +
                      record.error().message);
    records.push_back(std::move(*record));
  }
  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              if (a.problem_id != b.problem_id) return a.problem_id < b.problem_id;
              if (a.variant != b.variant) return a.variant < b.variant;
              return a.run_index < b.run_index;
            });
  return records;
}

Result<std::size_t, PipelineError> RecordStore::write_index() const {
  auto records = collect();
  if (!records) return records.error();
  Json index;
  index["records"] = Json::array();
  for (const auto& record : *records) {
    std::string key = cell_key(record.problem_id, record.variant,
                               record.run_index);
    Json item;
    item["problem"] = record.problem_id;
    item["variant"] = record.variant;
    item["run"] = record.run_index;
    item["final"] = std::string(to_string(record.final_class));
    item["file"] = key + ".json";
    index["records"].push_back(std::move(item));
  }
  fs::path tmp_path = fs::path(dir_) / "index.json.tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary);
    if (!out) return io_error("cannot write " + tmp_path.string());
    out << index.dump(2) << "\n";
  }
  std::error_code ec;
  fs::rename(tmp_path, fs::path(dir_) / "index.json", ec);
  if (ec) return io_error("cannot publish index.json");
  return records->size();
}

namespace {

// A cell that failed before producing any spec still yields a record, so a
// flaky backend cannot silently shrink the denominator.
RunRecord failure_record(const ProblemBundle& bundle, const VariantConfig& cfg,
                         int run_index, const PipelineError& error) {
  RunRecord record;
  record.problem_id = bundle.id;
  record.variant = cfg.label;
  record.run_index = run_index;
  record.final_class = OutcomeClass::RuntimeError;
  record.final_detail = error.describe();
  record.spec_history.push_back(
      {"", OutcomeClass::RuntimeError, error.describe()});
  return record;
}

}  // namespace

Result<std::vector<RunRecord>, PipelineError> bench(
    const std::vector<ProblemBundle>& bundles,
    const std::vector<VariantConfig>& matrix, RecordStore& store,
    const PipelineEnv& env, const BenchOptions& options) {
  for (std::size_t i = 0; i < matrix.size(); ++i)
    for (std::size_t j = i + 1; j < matrix.size(); ++j)
      if (matrix[i].label == matrix[j].label)
        return PipelineError{PipelineError::Kind::Config,
                             "duplicate variant label " + matrix[i].label};

  struct Cell {
    const ProblemBundle* bundle;
    const VariantConfig* cfg;
    int run;
  };
  std::vector<Cell> cells;
  for (const auto& bundle : bundles)
    for (const auto& cfg : matrix)
      for (int run = 0; run < std::max(1, cfg.runs); ++run)
        cells.push_back({&bundle, &cfg, run});

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::optional<PipelineError> failure;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      const Cell& cell = cells[i];
      std::string key = RecordStore::cell_key(cell.bundle->id,
                                              cell.cfg->label, cell.run);
      if (options.resume && store.has(key)) continue;

      bool baseline_bundle =
          !cell.bundle->has_binding() && cell.bundle->inline_description;
      auto record = baseline_bundle
                        ? run_baseline(*cell.bundle, *cell.cfg, env, cell.run)
                        : run_variant(*cell.bundle, *cell.cfg, env, cell.run);
      RunRecord final_record =
          record ? std::move(*record)
                 : failure_record(*cell.bundle, *cell.cfg, cell.run,
                                  record.ok() ? PipelineError{}
                                              : record.error());
      auto saved = store.save(final_record);
      if (!saved) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = saved.error();
        return;
      }
    }
  };

  int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) return *failure;

  auto indexed = store.write_index();
  if (!indexed) return indexed.error();
  return store.collect();
}

}  // namespace exeos::pipeline
