#include "metacache/types.hpp"

namespace metacache {

Status InodeRecord::Validate(uint64_t block_size) const {
  if (inode_number == 0) return Status::InvalidConfig("inode_number must be > 0");
  if (link_count < 1) return Status::InvalidConfig("link_count must be >= 1");
  if (file_type == FileType::kDirectory && block_size > 0 && size_bytes % block_size != 0) {
    return Status::InvalidConfig("directory size_bytes must be 0 or a multiple of block_size");
  }
  return Status::Ok();
}

std::string PathKey::Encode() const {
  std::string out;
  out.reserve(parent_path.size() + 1 + name.size());
  out.append(parent_path);
  out.push_back('\0');
  out.append(name);
  return out;
}

bool IsNormalizedAbsPath(std::string_view path) {
  if (path.empty() || path[0] != '/') return false;
  if (path == "/") return true;
  if (path.back() == '/') return false;
  char prev = '\0';
  for (char c : path) {
    if (c == '\0') return false;
    if (c == '/' && prev == '/') return false;
    prev = c;
  }
  return true;
}

uint64_t PathDepth(std::string_view path) {
  if (path == "/") return 0;
  uint64_t depth = 0;
  for (char c : path) {
    if (c == '/') depth++;
  }
  return depth;
}

Result<PathKey> MakePathKey(std::string_view parent_path, std::string_view name) {
  if (!IsNormalizedAbsPath(parent_path)) {
    return Status::InvalidParent("parent path must be absolute and normalized");
  }
  if (name.empty()) {
    if (parent_path != "/") return Status::InvalidName("empty name is only valid for the root key");
  } else {
    for (char c : name) {
      if (c == '/' || c == '\0') return Status::InvalidName("name may not contain '/' or NUL");
    }
  }
  return PathKey{std::string(parent_path), std::string(name)};
}

Result<PathKey> SplitPath(std::string_view path) {
  if (!IsNormalizedAbsPath(path)) {
    return Status::InvalidParent("path must be absolute and normalized");
  }
  if (path == "/") return PathKey{"/", ""};
  size_t slash = path.rfind('/');
  std::string_view parent = slash == 0 ? "/" : path.substr(0, slash);
  return MakePathKey(parent, path.substr(slash + 1));
}

std::string PathOf(const PathKey& key) {
  if (key.name.empty()) return key.parent_path;
  if (key.parent_path == "/") return "/" + key.name;
  return key.parent_path + "/" + key.name;
}

Result<PathKey> DecodePathKey(std::string_view encoded) {
  size_t sep = encoded.find('\0');
  if (sep == std::string_view::npos) {
    return Status::CorruptValue("encoded key has no separator");
  }
  auto key = MakePathKey(encoded.substr(0, sep), encoded.substr(sep + 1));
  if (!key.ok()) return Status::CorruptValue("encoded key is malformed: " + key.status().ToString());
  return key;
}

}  // namespace metacache
