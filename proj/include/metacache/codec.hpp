#pragma once

#include <string>
#include <string_view>

#include "metacache/status.hpp"
#include "metacache/types.hpp"

namespace metacache {

// Binary codec for ValueRecord. This is the bit-exact payload format shared
// by the WAL and the SSTable files.
//
//   [kind: u8] [version: u64le] [body]
//
// body for kInode and kInodeWithInlineData:
//   inode_number u64, file_type u8, size_bytes u64, owner_uid u32,
//   group_gid u32, permissions u16, link_count u32, generation u32,
//   acl (u32 len + bytes),
//   xattrs (u32 count, each: u16 name len + name + u32 value len + value),
//   block_refs (u32 count + u64 each)
// kInodeWithInlineData appends: inline_data (u32 len + bytes).
// kTombstone has no body (9 bytes total).
//
// All integers are little-endian fixed-width. Every variable-length field is
// length-prefixed, and DecodeValue requires the buffer to be fully consumed,
// so any truncation or overrun surfaces as kCorruptValue.

std::string EncodeValue(const ValueRecord& v);

Result<ValueRecord> DecodeValue(std::string_view bytes);

// Encoded size without materializing the encoding.
uint64_t EncodedValueSize(const ValueRecord& v);

}  // namespace metacache
