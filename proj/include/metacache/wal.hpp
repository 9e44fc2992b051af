#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "metacache/status.hpp"
#include "metacache/types.hpp"

namespace metacache {

// One logged write: a monotone sequence number plus the encoded key and the
// encoded value exactly as they will later land in an SSTable.
struct WalRecord {
  uint64_t seq = 0;
  std::string key;    // encoded PathKey
  std::string value;  // encoded ValueRecord

  bool operator==(const WalRecord&) const = default;
};

// Append-only log file. Frame format, bit-exact:
//
//   [payload length: u32le] [crc32 of payload: u32le] [payload]
//
// payload = seq u64le ++ key length u32le ++ key ++ value length u32le ++
// value. No file header or footer. The CRC is the IEEE polynomial (zlib).
//
// Appends are buffered in memory; Sync() pushes the buffer to the file. A
// writer dropped without Sync() loses its buffered tail; replay recovers
// whatever frames reached the file.
class WalWriter {
 public:
  // Opens for appending. last_seq seeds the monotonicity check when the file
  // already holds records (recovery); pass 0 for a fresh log.
  static Result<WalWriter> Open(const std::filesystem::path& path, uint64_t last_seq = 0);

  WalWriter(WalWriter&&) noexcept;
  WalWriter& operator=(WalWriter&&) noexcept;
  WalWriter(const WalWriter&) = delete;
  WalWriter& operator=(const WalWriter&) = delete;
  ~WalWriter();

  // rec.seq must be last appended seq + 1 (or 1 on an empty log), otherwise
  // kSeqGap. The record is durable only after the next Sync().
  Result<uint64_t> Append(const WalRecord& rec);

  Status Sync();

  // Drops any unsynced buffer and closes. Test hook for crash simulation.
  void Abandon();

  uint64_t last_seq() const { return last_seq_; }

 private:
  WalWriter(int fd, uint64_t last_seq) : fd_(fd), last_seq_(last_seq) {}

  int fd_ = -1;
  uint64_t last_seq_ = 0;
  std::string buffer_;
};

struct WalReplayOutcome {
  std::vector<WalRecord> records;
  // Byte length of the valid frame prefix; anything past it is a torn tail.
  uint64_t valid_bytes = 0;
};

// Reads back the longest valid prefix of records. A torn or corrupt tail
// (bad length, bad checksum, non-monotone seq) silently ends the replay; only
// an unreadable file is an error.
Result<WalReplayOutcome> WalReplay(const std::filesystem::path& path);

}  // namespace metacache
