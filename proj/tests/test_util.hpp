#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "metacache/rng.hpp"
#include "metacache/types.hpp"

namespace metacache::test {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "mc-test-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) std::abort();
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path Sub(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string RandomNameFrom(Rng& rng, size_t max_len = 12) {
  static const char* alphabet = "abcdefghijklmnopqrstuvwxyz0123456789_-.";
  size_t len = 1 + rng.Uniform(max_len);
  std::string out;
  for (size_t i = 0; i < len; i++) out.push_back(alphabet[rng.Uniform(39)]);
  return out;
}

inline std::string RandomBytesFrom(Rng& rng, size_t max_len) {
  size_t len = rng.Uniform(max_len + 1);
  std::string out;
  out.reserve(len);
  for (size_t i = 0; i < len; i++) out.push_back(static_cast<char>(rng.Uniform(256)));
  return out;
}

inline InodeRecord RandomInodeFrom(Rng& rng) {
  InodeRecord ino;
  ino.inode_number = 1 + rng.Uniform(1u << 20);
  ino.file_type = static_cast<FileType>(rng.Uniform(3));
  ino.size_bytes = rng.Uniform(1u << 16);
  if (ino.file_type == FileType::kDirectory) ino.size_bytes = 4096 * rng.Uniform(4);
  ino.owner_uid = static_cast<uint32_t>(rng.Uniform(1u << 16));
  ino.group_gid = static_cast<uint32_t>(rng.Uniform(1u << 16));
  ino.permissions = static_cast<uint16_t>(rng.Uniform(01000));
  ino.link_count = 1 + static_cast<uint32_t>(rng.Uniform(4));
  ino.generation = static_cast<uint32_t>(rng.Uniform(100));
  ino.acl = RandomBytesFrom(rng, 24);
  size_t xattrs = rng.Uniform(4);
  for (size_t i = 0; i < xattrs; i++) {
    ino.xattrs.emplace_back("user." + RandomNameFrom(rng, 6), RandomBytesFrom(rng, 32));
  }
  size_t refs = rng.Uniform(6);
  for (size_t i = 0; i < refs; i++) ino.block_refs.push_back(rng.NextU64());
  return ino;
}

inline ValueRecord RandomValueFrom(Rng& rng, uint64_t max_inline = 256) {
  uint64_t version = 1 + rng.Uniform(1u << 20);
  switch (rng.Uniform(3)) {
    case 0: return ValueRecord::Tombstone(version);
    case 1: return ValueRecord::OfInode(RandomInodeFrom(rng), version);
    default:
      return ValueRecord::OfInlineData(RandomInodeFrom(rng), RandomBytesFrom(rng, max_inline),
                                       version);
  }
}

inline PathKey RandomKeyFrom(Rng& rng, size_t num_parents = 10) {
  std::string parent = "/p" + std::to_string(rng.Uniform(num_parents));
  return PathKey{parent, RandomNameFrom(rng)};
}

}  // namespace metacache::test
