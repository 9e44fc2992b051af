#pragma once

#include <filesystem>

#include "metacache/report.hpp"
#include "metacache/status.hpp"
#include "metacache/store.hpp"
#include "metacache/vfs_sim.hpp"
#include "metacache/workload.hpp"

namespace metacache {

struct ReplayOptions {
  SimConfig sim;
  std::filesystem::path data_dir;  // must not exist or be an empty directory
  // Store knobs not mirrored in SimConfig; inline_threshold and block_size
  // are always taken from the sim config so both layers agree.
  uint64_t memtable_threshold_bytes = 1 << 20;
  uint32_t max_tables_before_compact = 4;
  bool sync_every_write = false;  // replays measure lookup cost, not durability
};

std::string SimConfigEcho(const SimConfig& config);

// Replays a trace: applies the setup phase to a fresh store, flushes it,
// boots a simulator per the sim config (zeroed counters, optional warm
// load), then applies and measures every bench op. NOT_FOUND and
// IS_DIRECTORY from racing ops land in the errors column; real I/O failures
// abort. Errors: kIoError, kMalformedTrace.
Result<Report> Replay(const Trace& trace, const ReplayOptions& options);

}  // namespace metacache
