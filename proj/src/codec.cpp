#include "metacache/codec.hpp"

#include "metacache/coding.hpp"

namespace metacache {

namespace {

void EncodeInodeBody(std::string* out, const InodeRecord& ino) {
  PutFixed64(out, ino.inode_number);
  out->push_back(static_cast<char>(ino.file_type));
  PutFixed64(out, ino.size_bytes);
  PutFixed32(out, ino.owner_uid);
  PutFixed32(out, ino.group_gid);
  PutFixed16(out, ino.permissions);
  PutFixed32(out, ino.link_count);
  PutFixed32(out, ino.generation);
  PutFixed32(out, static_cast<uint32_t>(ino.acl.size()));
  out->append(ino.acl);
  PutFixed32(out, static_cast<uint32_t>(ino.xattrs.size()));
  for (const auto& [name, value] : ino.xattrs) {
    PutFixed16(out, static_cast<uint16_t>(name.size()));
    out->append(name);
    PutFixed32(out, static_cast<uint32_t>(value.size()));
    out->append(value);
  }
  PutFixed32(out, static_cast<uint32_t>(ino.block_refs.size()));
  for (uint64_t ref : ino.block_refs) PutFixed64(out, ref);
}

bool DecodeInodeBody(ByteReader* r, InodeRecord* ino) {
  uint8_t ftype = 0;
  if (!r->ReadU64(&ino->inode_number)) return false;
  if (!r->ReadU8(&ftype)) return false;
  if (ftype > static_cast<uint8_t>(FileType::kSymlink)) return false;
  ino->file_type = static_cast<FileType>(ftype);
  if (!r->ReadU64(&ino->size_bytes)) return false;
  if (!r->ReadU32(&ino->owner_uid)) return false;
  if (!r->ReadU32(&ino->group_gid)) return false;
  if (!r->ReadU16(&ino->permissions)) return false;
  if (!r->ReadU32(&ino->link_count)) return false;
  if (!r->ReadU32(&ino->generation)) return false;

  uint32_t acl_len = 0;
  std::string_view bytes;
  if (!r->ReadU32(&acl_len) || !r->ReadBytes(acl_len, &bytes)) return false;
  ino->acl.assign(bytes);

  uint32_t xattr_count = 0;
  if (!r->ReadU32(&xattr_count)) return false;
  ino->xattrs.clear();
  for (uint32_t i = 0; i < xattr_count; i++) {
    uint16_t name_len = 0;
    uint32_t value_len = 0;
    std::string_view name, value;
    if (!r->ReadU16(&name_len) || !r->ReadBytes(name_len, &name)) return false;
    if (!r->ReadU32(&value_len) || !r->ReadBytes(value_len, &value)) return false;
    ino->xattrs.emplace_back(std::string(name), std::string(value));
  }

  uint32_t ref_count = 0;
  if (!r->ReadU32(&ref_count)) return false;
  if (r->remaining() < static_cast<size_t>(ref_count) * 8) return false;
  ino->block_refs.clear();
  ino->block_refs.reserve(ref_count);
  for (uint32_t i = 0; i < ref_count; i++) {
    uint64_t ref = 0;
    if (!r->ReadU64(&ref)) return false;
    ino->block_refs.push_back(ref);
  }
  return true;
}

}  // namespace

std::string EncodeValue(const ValueRecord& v) {
  std::string out;
  out.reserve(EncodedValueSize(v));
  out.push_back(static_cast<char>(v.kind));
  PutFixed64(&out, v.version);
  if (v.kind == ValueKind::kTombstone) return out;
  EncodeInodeBody(&out, *v.inode);
  if (v.kind == ValueKind::kInodeWithInlineData) {
    PutFixed32(&out, static_cast<uint32_t>(v.inline_data->size()));
    out.append(*v.inline_data);
  }
  return out;
}

Result<ValueRecord> DecodeValue(std::string_view bytes) {
  ByteReader r(bytes);
  uint8_t kind = 0;
  ValueRecord v;
  if (!r.ReadU8(&kind)) return Status::CorruptValue("empty or truncated value");
  if (kind > static_cast<uint8_t>(ValueKind::kInodeWithInlineData)) {
    return Status::CorruptValue("unknown value kind tag");
  }
  v.kind = static_cast<ValueKind>(kind);
  if (!r.ReadU64(&v.version)) return Status::CorruptValue("truncated version");
  if (v.kind != ValueKind::kTombstone) {
    InodeRecord ino;
    if (!DecodeInodeBody(&r, &ino)) return Status::CorruptValue("truncated inode body");
    v.inode = std::move(ino);
    if (v.kind == ValueKind::kInodeWithInlineData) {
      uint32_t len = 0;
      std::string_view data;
      if (!r.ReadU32(&len) || !r.ReadBytes(len, &data)) {
        return Status::CorruptValue("truncated inline data");
      }
      v.inline_data = std::string(data);
    }
  }
  if (!r.exhausted()) return Status::CorruptValue("trailing bytes after value");
  return v;
}

uint64_t EncodedValueSize(const ValueRecord& v) {
  uint64_t n = 1 + 8;  // kind + version
  if (v.kind == ValueKind::kTombstone) return n;
  const InodeRecord& ino = *v.inode;
  n += 8 + 1 + 8 + 4 + 4 + 2 + 4 + 4;
  n += 4 + ino.acl.size();
  n += 4;
  for (const auto& [name, value] : ino.xattrs) n += 2 + name.size() + 4 + value.size();
  n += 4 + 8 * static_cast<uint64_t>(ino.block_refs.size());
  if (v.kind == ValueKind::kInodeWithInlineData) n += 4 + v.inline_data->size();
  return n;
}

}  // namespace metacache
