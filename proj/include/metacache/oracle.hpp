#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metacache/types.hpp"

namespace metacache {

// Brute-force references for differential testing. A single flat ordered map
// stands in for the whole store (last write wins, deletes remove, no
// tombstones, no durability), and a plain list models LRU eviction. Both are
// trivially correct by construction; all confidence in the real engine flows
// from agreement with them. Test-only: not part of any serving path.

class OracleMap {
 public:
  struct Value {
    InodeRecord inode;
    std::optional<std::string> inline_data;

    bool operator==(const Value&) const = default;
  };

  void Put(const PathKey& key, InodeRecord inode, std::optional<std::string> inline_data) {
    map_[key] = Value{std::move(inode), std::move(inline_data)};
  }

  void Remove(const PathKey& key) { map_.erase(key); }

  const Value* Get(const PathKey& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
  }

  std::vector<std::pair<std::string, InodeRecord>> ScanDir(const std::string& parent) const {
    std::vector<std::pair<std::string, InodeRecord>> out;
    for (auto it = map_.lower_bound(PathKey{parent, ""}); it != map_.end(); ++it) {
      if (it->first.parent_path != parent) break;
      out.emplace_back(it->first.name, it->second.inode);
    }
    return out;
  }

  size_t size() const { return map_.size(); }
  const std::map<PathKey, Value>& entries() const { return map_; }

 private:
  std::map<PathKey, Value> map_;
};

// List-backed LRU model. O(n) everything.
template <typename K, typename V>
class OracleLru {
 public:
  explicit OracleLru(size_t capacity) : capacity_(capacity) {}

  const V* Get(const K& key) {
    for (auto it = items_.begin(); it != items_.end(); ++it) {
      if (it->first == key) {
        items_.splice(items_.begin(), items_, it);
        return &items_.front().second;
      }
    }
    return nullptr;
  }

  void Insert(const K& key, V value) {
    if (capacity_ == 0) return;
    for (auto it = items_.begin(); it != items_.end(); ++it) {
      if (it->first == key) {
        it->second = std::move(value);
        items_.splice(items_.begin(), items_, it);
        return;
      }
    }
    items_.emplace_front(key, std::move(value));
    if (items_.size() > capacity_) items_.pop_back();
  }

  void Evict(const K& key) {
    for (auto it = items_.begin(); it != items_.end(); ++it) {
      if (it->first == key) {
        items_.erase(it);
        return;
      }
    }
  }

  size_t size() const { return items_.size(); }

  std::vector<K> KeysMruFirst() const {
    std::vector<K> out;
    for (const auto& [k, v] : items_) out.push_back(k);
    return out;
  }

 private:
  size_t capacity_;
  std::list<std::pair<K, V>> items_;
};

}  // namespace metacache
