#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "metacache/status.hpp"
#include "metacache/store.hpp"
#include "metacache/types.hpp"

namespace metacache {

// Simulated lookup pipeline over a countable disk model:
//
//   1. I-cache hit            -> served by the VFS layer, zero disk work
//   2. MemTable/warm-cache hit-> served by the metadata cache, zero disk work
//   3. everything else        -> disk; with the metadata cache disabled a
//      cold lookup costs depth(path)+1 block reads plus one seek (walk the
//      directory chain, then read the inode), with it enabled it costs the
//      store's actual SSTable block reads.
//
// Costs are pure counters (blocks, seeks, cost units); there is no wall
// clock anywhere, so identical inputs produce identical counters.

struct CostModel {
  uint64_t ram_hit = 1;
  uint64_t block_io = 100;
  uint64_t seek = 1000;
};

struct SimConfig {
  size_t icache_capacity = 1024;
  bool metacache_enabled = true;
  bool warm_on_boot = false;
  uint64_t inline_threshold = 4096;
  uint64_t block_size = 4096;
  CostModel costs;
};

enum class LookupSource {
  kIcache,
  kMetacache,
  kDisk,
};

struct LookupResult {
  LookupSource source = LookupSource::kDisk;
  uint64_t blocks_read = 0;
  uint64_t cost_units = 0;
};

struct SimCounters {
  uint64_t icache_hits = 0;
  uint64_t metacache_hits = 0;
  uint64_t disk_fallbacks = 0;
  uint64_t block_reads = 0;
  uint64_t block_writes = 0;
  uint64_t seeks = 0;
  uint64_t cost_units = 0;
};

// Accumulates simulated disk work. Counters are monotone non-decreasing;
// each charge returns the cost units it added so callers can attribute it
// to an individual lookup.
class DiskModel {
 public:
  explicit DiskModel(const CostModel& costs) : costs_(costs) {}

  uint64_t ChargeRamHit() {
    cost_units_ += costs_.ram_hit;
    return costs_.ram_hit;
  }
  uint64_t ChargeBlockReads(uint64_t blocks) {
    block_reads_ += blocks;
    uint64_t cost = blocks * costs_.block_io;
    cost_units_ += cost;
    return cost;
  }
  uint64_t ChargeBlockWrites(uint64_t blocks) {
    block_writes_ += blocks;
    uint64_t cost = blocks * costs_.block_io;
    cost_units_ += cost;
    return cost;
  }
  uint64_t ChargeSeek() {
    seeks_ += 1;
    cost_units_ += costs_.seek;
    return costs_.seek;
  }

  uint64_t block_reads() const { return block_reads_; }
  uint64_t block_writes() const { return block_writes_; }
  uint64_t seeks() const { return seeks_; }
  uint64_t cost_units() const { return cost_units_; }

 private:
  CostModel costs_;
  uint64_t block_reads_ = 0;
  uint64_t block_writes_ = 0;
  uint64_t seeks_ = 0;
  uint64_t cost_units_ = 0;
};

// Strict-LRU positive cache of resolved inodes, capacity in entries.
class ICache {
 public:
  struct Entry {
    InodeRecord inode;
    bool has_inline = false;
  };

  explicit ICache(size_t capacity) : capacity_(capacity) {}

  // Touches the entry (moves it to most-recently-used).
  const Entry* Get(const PathKey& key);
  void Insert(const PathKey& key, Entry entry);
  void Evict(const PathKey& key);
  size_t size() const { return items_.size(); }

 private:
  size_t capacity_;
  std::list<std::pair<std::string, Entry>> items_;  // MRU at front; key encoded
  std::unordered_map<std::string, std::list<std::pair<std::string, Entry>>::iterator> index_;
};

// Cold-lookup cost when the metadata cache is disabled: one block per path
// component plus one for the inode itself.
inline uint64_t BaselineLookupBlocks(std::string_view path) { return PathDepth(path) + 1; }

class Simulator {
 public:
  struct StatOutcome {
    InodeRecord inode;
    LookupResult lookup;
  };
  struct ReadOutcome {
    uint64_t bytes_len = 0;
    LookupResult lookup;
  };

  // Boot: fresh I-cache, root directory record seeded if missing, warm load
  // if configured, then counters zeroed.
  static Result<std::unique_ptr<Simulator>> Boot(const SimConfig& config, Store& store);

  // Full pipeline lookup. Errors: kNotFound.
  Result<StatOutcome> Stat(const std::string& path);

  // Inserts a file or directory record. Payloads at most inline_threshold
  // are co-located with the metadata; larger ones cost
  // ceil(len/block_size) charged data-block writes plus a seek.
  // Errors: kNotFound (parent missing or not a directory).
  Status Create(const std::string& path, const InodeRecord& inode,
                const std::optional<std::string>& payload);

  // Stat pipeline plus the data cost: zero extra blocks for co-located
  // payloads, ceil(size/block_size) reads plus a seek otherwise.
  // Errors: kNotFound, kIsDirectory.
  Result<ReadOutcome> OpenRead(const std::string& path);

  // Lookup (charged like a stat), then tombstone the record and drop it
  // from the I-cache. Errors: kNotFound.
  Status Unlink(const std::string& path);

  // Directory listing, name order. Errors: kNotFound, kNotFound for
  // non-directories.
  Result<std::vector<DirEntry>> ListDir(const std::string& path);

  SimCounters counters() const;
  uint64_t warm_loaded_entries() const { return warm_loaded_entries_; }
  Store& store() { return store_; }

 private:
  Simulator(const SimConfig& config, Store& store)
      : config_(config), store_(store), icache_(config.icache_capacity), disk_(config.costs) {}

  struct Resolved {
    InodeRecord inode;
    bool has_inline = false;
    LookupResult lookup;
  };
  // The shared stat pipeline; charges costs and maintains the I-cache.
  Result<Resolved> Lookup(const std::string& path);

  void ChargeRam(LookupResult* lr);
  void ChargeBlockReads(uint64_t blocks, LookupResult* lr);
  void ChargeBlockWrites(uint64_t blocks);
  void ChargeSeek(LookupResult* lr);

  SimConfig config_;
  Store& store_;
  ICache icache_;
  DiskModel disk_;
  uint64_t icache_hits_ = 0;
  uint64_t metacache_hits_ = 0;
  uint64_t disk_fallbacks_ = 0;
  uint64_t warm_loaded_entries_ = 0;
};

}  // namespace metacache
