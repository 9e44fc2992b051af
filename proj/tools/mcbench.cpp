// mcbench: generates metadata-heavy workload traces, replays them against a
// baseline or cache-enabled configuration, and renders strace-style reports
// plus side-by-side comparisons.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "metacache/replay.hpp"
#include "metacache/report.hpp"
#include "metacache/workload.hpp"

namespace {

using namespace metacache;

int ExitCodeFor(const Status& st) {
  switch (st.code()) {
    case ErrorCode::kOk: return 0;
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kInvalidConfig: return 2;
    case ErrorCode::kIoError: return 3;
    case ErrorCode::kMalformedTrace: return 4;
    case ErrorCode::kTraceMismatch: return 5;
    case ErrorCode::kCorruptValue:
    case ErrorCode::kCorruptTable: return 6;
    default: return 1;
  }
}

int Fail(const Status& st) {
  std::cerr << "mcbench: " << st.ToString() << "\n";
  return ExitCodeFor(st);
}

Status WriteOutput(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return Status::Ok();
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) return Status::IoError("cannot create " + out_path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) return Status::IoError("write failed on " + out_path);
  return Status::Ok();
}

// Scratch data directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  static Result<ScratchDir> Make() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "mcbench-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) {
      return Status::IoError("mkdtemp failed under " + tmpl);
    }
    return ScratchDir(tmpl);
  }

  ScratchDir(ScratchDir&& other) noexcept : path_(std::move(other.path_)) { other.path_.clear(); }
  ScratchDir& operator=(ScratchDir&&) = delete;
  ScratchDir(const ScratchDir&) = delete;
  ~ScratchDir() {
    if (!path_.empty()) {
      std::error_code ec;
      std::filesystem::remove_all(path_, ec);
    }
  }

  std::filesystem::path path() const { return path_; }

 private:
  explicit ScratchDir(std::string path) : path_(std::move(path)) {}
  std::string path_;
};

void AddSpecFlags(CLI::App* cmd, WorkloadSpec* spec) {
  cmd->add_option("--seed", spec->seed, "Trace seed");
  cmd->add_option("--num-files", spec->num_files, "Initial file population");
  cmd->add_option("--fanout", spec->dir_fanout, "Directories per directory");
  cmd->add_option("--depth", spec->tree_depth, "Directory tree depth");
  cmd->add_option("--ops", spec->op_count, "Benchmark op count");
  cmd->add_option("--mix-stat", spec->op_mix.stat, "STAT fraction");
  cmd->add_option("--mix-open-read", spec->op_mix.open_read, "OPEN_READ fraction");
  cmd->add_option("--mix-create", spec->op_mix.create, "CREATE fraction");
  cmd->add_option("--mix-unlink", spec->op_mix.unlink, "UNLINK fraction");
  cmd->add_option("--min-size", spec->file_size_min, "Minimum file size in bytes");
  cmd->add_option("--max-size", spec->file_size_max, "Maximum file size in bytes");
}

void AddSimFlags(CLI::App* cmd, SimConfig* sim) {
  cmd->add_option("--icache-capacity", sim->icache_capacity, "I-cache entry capacity");
  cmd->add_option("--inline-threshold", sim->inline_threshold,
                  "Largest payload co-located with its metadata");
  cmd->add_option("--block-size", sim->block_size, "Disk block size in bytes");
  cmd->add_flag("--metacache,!--no-metacache", sim->metacache_enabled,
                "Serve lookups from the metadata cache");
  cmd->add_flag("--warm,!--no-warm", sim->warm_on_boot,
                "Load all persisted metadata into RAM at boot");
  cmd->add_option("--cost-ram", sim->costs.ram_hit, "Cost units per RAM hit");
  cmd->add_option("--cost-block", sim->costs.block_io, "Cost units per block I/O");
  cmd->add_option("--cost-seek", sim->costs.seek, "Cost units per seek");
}

Result<Report> ReplayWithDir(const Trace& trace, const SimConfig& sim,
                             const std::string& data_dir) {
  ReplayOptions options;
  options.sim = sim;
  if (!data_dir.empty()) {
    options.data_dir = data_dir;
    return Replay(trace, options);
  }
  auto scratch = ScratchDir::Make();
  if (!scratch.ok()) return scratch.status();
  options.data_dir = scratch->path() / "store";
  return Replay(trace, options);
}

int RunGenerate(const WorkloadSpec& spec, const std::string& out_path) {
  auto trace = GenerateTrace(spec);
  if (!trace.ok()) return Fail(trace.status());
  if (Status st = WriteOutput(SerializeTrace(*trace), out_path); !st.ok()) return Fail(st);
  return 0;
}

int RunReplay(const std::string& trace_path, const SimConfig& sim, const std::string& data_dir,
              const std::string& format_name, const std::string& out_path) {
  auto format = ReportFormatFromName(format_name);
  if (!format.ok()) return Fail(format.status());
  auto trace = LoadTrace(trace_path);
  if (!trace.ok()) return Fail(trace.status());
  auto report = ReplayWithDir(*trace, sim, data_dir);
  if (!report.ok()) return Fail(report.status());
  if (Status st = WriteOutput(RenderReport(*report, *format), out_path); !st.ok()) return Fail(st);
  return 0;
}

int RunCompare(const std::string& a_path, const std::string& b_path,
               const std::string& format_name, const std::string& out_path) {
  auto format = ReportFormatFromName(format_name);
  if (!format.ok()) return Fail(format.status());
  auto read_report = [](const std::string& path) -> Result<Report> {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Status::IoError("cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return ReportFromJson(text);
  };
  auto a = read_report(a_path);
  if (!a.ok()) return Fail(a.status());
  auto b = read_report(b_path);
  if (!b.ok()) return Fail(b.status());
  auto comparison = CompareRuns(*a, *b, *format);
  if (!comparison.ok()) return Fail(comparison.status());
  if (Status st = WriteOutput(*comparison, out_path); !st.ok()) return Fail(st);
  return 0;
}

int RunDemo(const WorkloadSpec& spec, SimConfig sim, const std::string& data_dir) {
  auto trace = GenerateTrace(spec);
  if (!trace.ok()) return Fail(trace.status());

  SimConfig baseline = sim;
  baseline.metacache_enabled = false;
  baseline.warm_on_boot = false;
  SimConfig cached = sim;
  cached.metacache_enabled = true;
  cached.warm_on_boot = true;

  std::string base_dir = data_dir.empty() ? "" : data_dir + "/baseline";
  std::string warm_dir = data_dir.empty() ? "" : data_dir + "/metacache";
  auto report_a = ReplayWithDir(*trace, baseline, base_dir);
  if (!report_a.ok()) return Fail(report_a.status());
  auto report_b = ReplayWithDir(*trace, cached, warm_dir);
  if (!report_b.ok()) return Fail(report_b.status());

  std::cout << "=== baseline (metadata cache disabled) ===\n";
  std::cout << RenderReport(*report_a, ReportFormat::kTable) << "\n";
  std::cout << "=== metacache (warm-loaded at boot) ===\n";
  std::cout << RenderReport(*report_b, ReportFormat::kTable) << "\n";
  auto comparison = CompareRuns(*report_a, *report_b, ReportFormat::kTable);
  if (!comparison.ok()) return Fail(comparison.status());
  std::cout << *comparison;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSM-backed filesystem metadata cache benchmark"};
  app.require_subcommand(1);

  WorkloadSpec spec;
  SimConfig sim;
  std::string trace_path, out_path, data_dir;
  std::string format_name = "table";
  std::string compare_a, compare_b;

  CLI::App* generate = app.add_subcommand("generate", "Generate a workload trace");
  AddSpecFlags(generate, &spec);
  generate->add_option("--out", out_path, "Write the trace here (default stdout)");

  CLI::App* replay = app.add_subcommand("replay", "Replay a trace and report costs");
  replay->add_option("--trace", trace_path, "Trace file to replay")->required();
  AddSimFlags(replay, &sim);
  replay->add_option("--data-dir", data_dir, "Store directory (default: fresh temp dir)");
  replay->add_option("--format", format_name, "table, csv, or json");
  replay->add_option("--out", out_path, "Write the report here (default stdout)");

  CLI::App* compare = app.add_subcommand("compare", "Compare two replay reports (JSON)");
  compare->add_option("a", compare_a, "First report (JSON)")->required();
  compare->add_option("b", compare_b, "Second report (JSON)")->required();
  compare->add_option("--format", format_name, "table or csv");
  compare->add_option("--out", out_path, "Write the comparison here (default stdout)");

  CLI::App* demo = app.add_subcommand("demo", "Baseline vs warm metadata cache, side by side");
  AddSpecFlags(demo, &spec);
  AddSimFlags(demo, &sim);
  demo->add_option("--data-dir", data_dir, "Keep store directories under this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (generate->parsed()) return RunGenerate(spec, out_path);
  if (replay->parsed()) return RunReplay(trace_path, sim, data_dir, format_name, out_path);
  if (compare->parsed()) return RunCompare(compare_a, compare_b, format_name, out_path);
  if (demo->parsed()) return RunDemo(spec, sim, data_dir);
  return 2;
}
