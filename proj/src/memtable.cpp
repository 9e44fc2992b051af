#include "metacache/memtable.hpp"

#include <cassert>

#include "metacache/codec.hpp"

namespace metacache {

MemTable::InsertOutcome MemTable::Insert(const PathKey& key, ValueRecord value) {
  assert(!frozen_ && "insert into frozen MemTable");
  uint64_t entry_bytes = key.Encode().size() + EncodedValueSize(value);
  auto [it, inserted] = entries_.try_emplace(key, std::move(value));
  if (!inserted) {
    approx_bytes_ -= it->first.Encode().size() + EncodedValueSize(it->second);
    it->second = std::move(value);
  }
  approx_bytes_ += entry_bytes;
  return approx_bytes_ > threshold_bytes_ ? InsertOutcome::kOkThresholdReached
                                          : InsertOutcome::kOk;
}

const ValueRecord* MemTable::Get(const PathKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::pair<PathKey, ValueRecord>> MemTable::Freeze() {
  frozen_ = true;
  std::vector<std::pair<PathKey, ValueRecord>> out;
  out.reserve(entries_.size());
  for (const auto& [key, value] : entries_) out.emplace_back(key, value);
  return out;
}

}  // namespace metacache
