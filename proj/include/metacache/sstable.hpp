#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metacache/bloom.hpp"
#include "metacache/status.hpp"
#include "metacache/types.hpp"

namespace metacache {

// Immutable sorted on-disk run. File layout, bit-exact:
//
//   "MCSS" magic (4) + version 0x01 (1)
//   data blocks   repeated [key len u32le][key][value len u32le][value]
//                 pairs, packed up to block_size per block; a pair never
//                 splits across blocks (blocks may underfill, and a pair
//                 larger than block_size gets a block of its own)
//   bloom section [m bit count u64le][k u8][bit bytes]
//   index section [block count u32le] then per block
//                 [first key len u32le][first key][file offset u64le]
//   footer (24)   [bloom offset u64le][index offset u64le]
//                 [crc32 of bloom+index sections u32le]["MCSS"]
//
// Keys are encoded PathKeys, values encoded ValueRecords, and the order is
// strict across the whole file. Opening reads header, footer, the two
// checksummed sections, and the final block (for the max key); gets then
// touch at most one data block.

struct SstableConfig {
  uint64_t block_size = 4096;
  uint32_t bloom_bits_per_key = 10;
  uint32_t bloom_hashes = 7;
};

struct IndexEntry {
  std::string first_key;  // encoded PathKey of the first pair in the block
  uint64_t offset = 0;    // absolute file offset of the block

  bool operator==(const IndexEntry&) const = default;
};

// Writes entries (strictly sorted by encoded key, non-empty) to `path`,
// staging through `path.tmp` and publishing by rename.
// Errors: kUnsortedInput, kIoError.
Status BuildSstable(const std::filesystem::path& path,
                    std::span<const std::pair<PathKey, ValueRecord>> entries,
                    const SstableConfig& config);

class SstableReader {
 public:
  struct GetOutcome {
    std::optional<ValueRecord> value;  // nullopt = absent
    uint64_t blocks_read = 0;
  };
  struct ScanOutcome {
    std::vector<std::pair<PathKey, ValueRecord>> entries;
    uint64_t blocks_read = 0;
  };

  static Result<std::shared_ptr<SstableReader>> Open(const std::filesystem::path& path,
                                                     uint64_t file_id);

  // Bloom-gated point lookup: a rejected or out-of-range key costs zero
  // block reads, anything else costs exactly one.
  Result<GetOutcome> Get(const PathKey& key) const;

  // All pairs whose key has the given parent path, in key order.
  Result<ScanOutcome> ScanParent(const std::string& parent) const;

  // Streams every pair in key order. Used by compaction and warm load.
  Status ForEach(const std::function<void(const PathKey&, const ValueRecord&)>& fn) const;

  uint64_t file_id() const { return file_id_; }
  const std::string& min_key() const { return min_key_; }
  const std::string& max_key() const { return max_key_; }
  const std::vector<IndexEntry>& sparse_index() const { return index_; }
  const BloomFilter& bloom() const { return *bloom_; }
  uint64_t block_size() const { return block_size_; }

  // Total pair count; computed by a full scan on first use.
  Result<uint64_t> EntryCount() const;

 private:
  SstableReader() = default;

  Result<std::string> ReadBlock(size_t block_index) const;
  Status ParseBlock(const std::string& block,
                    const std::function<void(std::string_view, std::string_view)>& fn) const;
  // Extent of block i: [offset, end) where end is the next block or the
  // bloom section.
  std::pair<uint64_t, uint64_t> BlockExtent(size_t block_index) const;

  std::filesystem::path path_;
  uint64_t file_id_ = 0;
  uint64_t block_size_ = 0;  // inferred upper bound used only for reporting
  uint64_t bloom_offset_ = 0;
  std::string min_key_;
  std::string max_key_;
  std::vector<IndexEntry> index_;
  std::optional<BloomFilter> bloom_;

  mutable std::once_flag count_once_;
  mutable uint64_t entry_count_ = 0;
  mutable Status count_status_;
};

// Merge-sorts whole tables into one run at out_path. For keys present in
// several inputs the value from the highest file_id wins. Tombstones are
// dropped only when drop_tombstones is set (safe only when merging the
// complete table set). Returns the number of entries written; 0 means every
// surviving key was a dropped tombstone and no file was produced.
Result<uint64_t> MergeCompact(const std::vector<std::shared_ptr<SstableReader>>& tables,
                              bool drop_tombstones, const std::filesystem::path& out_path,
                              const SstableConfig& config);

// Canonical file name: file_id zero-padded to 10 digits + ".sst".
std::string SstableFileName(uint64_t file_id);

}  // namespace metacache
