#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "metacache/status.hpp"

namespace metacache {

enum class FileType : uint8_t {
  kRegular = 0,
  kDirectory = 1,
  kSymlink = 2,
};

// Full per-file metadata payload. acl and xattrs are opaque byte payloads;
// no semantics are enforced on them.
struct InodeRecord {
  uint64_t inode_number = 0;
  FileType file_type = FileType::kRegular;
  uint64_t size_bytes = 0;
  uint32_t owner_uid = 0;
  uint32_t group_gid = 0;
  uint16_t permissions = 0;
  uint32_t link_count = 1;
  uint32_t generation = 0;
  std::string acl;
  std::vector<std::pair<std::string, std::string>> xattrs;
  std::vector<uint64_t> block_refs;

  // inode_number > 0, link_count >= 1, and directory sizes are either 0 or
  // a multiple of block_size.
  Status Validate(uint64_t block_size) const;

  bool operator==(const InodeRecord&) const = default;
};

// Ordered key: parent directory path plus entry name. The encoded form is
// parent_path ++ 0x00 ++ name, and key order is byte order of encodings.
// Names contain no '/' and no NUL, so all siblings of one directory are
// contiguous under that order. The root directory itself is keyed ("/", "").
struct PathKey {
  std::string parent_path;
  std::string name;

  std::string Encode() const;

  // Tuple order over (parent_path, name) equals byte order of Encode():
  // parents contain no NUL, so the 0x00 separator sorts below every
  // parent-path byte. Checked against a brute-force sort in the tests.
  friend std::strong_ordering operator<=>(const PathKey& a, const PathKey& b) {
    if (int c = a.parent_path.compare(b.parent_path); c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    int c = a.name.compare(b.name);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const PathKey&) const = default;
};

// A directory entry: key of the child plus its inode number. Used for
// directory listings.
struct DirEntry {
  PathKey key;
  uint64_t child_inode = 0;

  bool operator==(const DirEntry&) const = default;
};

enum class ValueKind : uint8_t {
  kTombstone = 0,
  kInode = 1,
  kInodeWithInlineData = 2,
};

// What the store keeps per key: an inode record, optionally with the file's
// data inlined next to it, or a tombstone shadowing older versions after a
// delete. version is a store-assigned monotone sequence number; newest wins.
struct ValueRecord {
  ValueKind kind = ValueKind::kTombstone;
  std::optional<InodeRecord> inode;        // absent for tombstones
  std::optional<std::string> inline_data;  // present only for kInodeWithInlineData
  uint64_t version = 0;

  static ValueRecord Tombstone(uint64_t version) {
    ValueRecord v;
    v.kind = ValueKind::kTombstone;
    v.version = version;
    return v;
  }
  static ValueRecord OfInode(InodeRecord inode, uint64_t version) {
    ValueRecord v;
    v.kind = ValueKind::kInode;
    v.inode = std::move(inode);
    v.version = version;
    return v;
  }
  static ValueRecord OfInlineData(InodeRecord inode, std::string data, uint64_t version) {
    ValueRecord v;
    v.kind = ValueKind::kInodeWithInlineData;
    v.inode = std::move(inode);
    v.inline_data = std::move(data);
    v.version = version;
    return v;
  }

  bool is_tombstone() const { return kind == ValueKind::kTombstone; }

  bool operator==(const ValueRecord&) const = default;
};

// True for absolute paths with no NUL bytes, no empty components, and no
// trailing separator (except the root "/" itself).
bool IsNormalizedAbsPath(std::string_view path);

// Number of components: "/" -> 0, "/a" -> 1, "/a/b" -> 2. Requires a
// normalized absolute path.
uint64_t PathDepth(std::string_view path);

// Errors: kInvalidParent if parent is not absolute/normalized; kInvalidName
// if name contains '/' or NUL, or is empty for a non-root key.
Result<PathKey> MakePathKey(std::string_view parent_path, std::string_view name);

// Splits a full path into its key: "/a/b/c" -> ("/a/b", "c"); "/" -> ("/", "").
Result<PathKey> SplitPath(std::string_view path);

// Joins a key back into the full path it names.
std::string PathOf(const PathKey& key);

// Inverse of PathKey::Encode. Errors: kCorruptValue on malformed bytes.
Result<PathKey> DecodePathKey(std::string_view encoded);

}  // namespace metacache
