#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "metacache/status.hpp"

namespace metacache {

enum class OpKind {
  kMkdir,  // setup phase only
  kStat,
  kOpenRead,
  kCreate,
  kUnlink,
};

const char* OpKindName(OpKind kind);

// Fractions drawn for the benchmark phase. The defaults keep file I/O at
// 21% of requests and metadata operations above half.
struct OpMix {
  double stat = 0.55;
  double open_read = 0.21;
  double create = 0.18;
  double unlink = 0.06;

  double Sum() const { return stat + open_read + create + unlink; }
  bool operator==(const OpMix&) const = default;
};

struct WorkloadSpec {
  uint64_t num_files = 1000;
  uint32_t dir_fanout = 4;
  uint32_t tree_depth = 3;
  uint64_t op_count = 10000;
  OpMix op_mix;
  uint64_t file_size_min = 64;
  uint64_t file_size_max = 4096;
  uint64_t seed = 1;

  Status Validate() const;
  bool operator==(const WorkloadSpec&) const = default;
};

struct TraceOp {
  OpKind kind = OpKind::kStat;
  bool setup = false;
  std::string path;
  uint64_t size = 0;  // payload bytes for kCreate

  bool operator==(const TraceOp&) const = default;
};

// A generated trace: the spec it came from (replay-deterministic header)
// plus the ordered op list. The setup phase builds the directory tree and
// the initial file population; only bench-phase ops are measured.
struct Trace {
  WorkloadSpec spec;
  std::vector<TraceOp> ops;

  uint64_t SetupOpCount() const;
  uint64_t BenchOpCount() const;
};

// Deterministic from spec.seed: MKDIRs for the full fanout^depth tree,
// CREATEs for num_files files in leaf directories, then op_count ops drawn
// from op_mix. STATs target any path ever created (so some hit unlinked
// files); OPEN_READs and UNLINKs target live files only, so an UNLINK never
// repeats a path. Errors: kInvalidSpec.
Result<Trace> GenerateTrace(const WorkloadSpec& spec);

// Trace file: one JSON object per line, header first. Byte-exact for a
// given trace.
std::string SerializeTrace(const Trace& trace);
Status SaveTrace(const Trace& trace, const std::filesystem::path& path);
Result<Trace> ParseTrace(const std::string& text);
Result<Trace> LoadTrace(const std::filesystem::path& path);

// Canonical one-line JSON header; two reports are comparable iff their
// header lines are equal.
std::string TraceHeaderJson(const WorkloadSpec& spec);

}  // namespace metacache
