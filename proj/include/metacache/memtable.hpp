#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "metacache/types.hpp"

namespace metacache {

// RAM-resident sorted component. Overwrites and tombstones are both plain
// inserts; approx_bytes tracks the sum of encoded key+value lengths so the
// flush threshold reflects what an SSTable built from this table would hold.
class MemTable {
 public:
  enum class InsertOutcome { kOk, kOkThresholdReached };

  explicit MemTable(uint64_t threshold_bytes) : threshold_bytes_(threshold_bytes) {}

  InsertOutcome Insert(const PathKey& key, ValueRecord value);

  // Newest value for key, or nullptr if never written here. Tombstones are
  // values and are returned as such.
  const ValueRecord* Get(const PathKey& key) const;

  // All entries in key order; the table is immutable afterwards.
  std::vector<std::pair<PathKey, ValueRecord>> Freeze();

  bool empty() const { return entries_.empty(); }
  size_t entry_count() const { return entries_.size(); }
  uint64_t approx_bytes() const { return approx_bytes_; }
  uint64_t threshold_bytes() const { return threshold_bytes_; }
  bool frozen() const { return frozen_; }

  using ConstIterator = std::map<PathKey, ValueRecord>::const_iterator;
  ConstIterator begin() const { return entries_.begin(); }
  ConstIterator end() const { return entries_.end(); }
  // First entry with key >= (parent, "") — the start of a sibling range.
  ConstIterator LowerBoundParent(const std::string& parent) const {
    return entries_.lower_bound(PathKey{parent, ""});
  }

 private:
  std::map<PathKey, ValueRecord> entries_;
  uint64_t approx_bytes_ = 0;
  uint64_t threshold_bytes_;
  bool frozen_ = false;
};

}  // namespace metacache
