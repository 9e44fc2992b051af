#include "metacache/wal.hpp"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include "metacache/coding.hpp"

namespace metacache {

namespace {

uint32_t Crc32(std::string_view data) {
  return static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::string EncodeWalPayload(const WalRecord& rec) {
  std::string payload;
  payload.reserve(8 + 4 + rec.key.size() + 4 + rec.value.size());
  PutFixed64(&payload, rec.seq);
  PutFixed32(&payload, static_cast<uint32_t>(rec.key.size()));
  payload.append(rec.key);
  PutFixed32(&payload, static_cast<uint32_t>(rec.value.size()));
  payload.append(rec.value);
  return payload;
}

bool DecodeWalPayload(std::string_view payload, WalRecord* rec) {
  ByteReader r(payload);
  uint32_t klen = 0, vlen = 0;
  std::string_view key, value;
  if (!r.ReadU64(&rec->seq)) return false;
  if (!r.ReadU32(&klen) || !r.ReadBytes(klen, &key)) return false;
  if (!r.ReadU32(&vlen) || !r.ReadBytes(vlen, &value)) return false;
  if (!r.exhausted()) return false;
  rec->key.assign(key);
  rec->value.assign(value);
  return true;
}

}  // namespace

Result<WalWriter> WalWriter::Open(const std::filesystem::path& path, uint64_t last_seq) {
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) {
    return Status::IoError("open " + path.string() + ": " + std::strerror(errno));
  }
  return WalWriter(fd, last_seq);
}

WalWriter::WalWriter(WalWriter&& other) noexcept
    : fd_(other.fd_), last_seq_(other.last_seq_), buffer_(std::move(other.buffer_)) {
  other.fd_ = -1;
}

WalWriter& WalWriter::operator=(WalWriter&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    last_seq_ = other.last_seq_;
    buffer_ = std::move(other.buffer_);
    other.fd_ = -1;
  }
  return *this;
}

WalWriter::~WalWriter() {
  if (fd_ >= 0) ::close(fd_);
}

Result<uint64_t> WalWriter::Append(const WalRecord& rec) {
  if (fd_ < 0) return Status::IoError("log is closed");
  if (rec.seq != last_seq_ + 1) {
    return Status::SeqGap("expected seq " + std::to_string(last_seq_ + 1) + ", got " +
                          std::to_string(rec.seq));
  }
  std::string payload = EncodeWalPayload(rec);
  std::string frame;
  frame.reserve(8 + payload.size());
  PutFixed32(&frame, static_cast<uint32_t>(payload.size()));
  PutFixed32(&frame, Crc32(payload));
  frame.append(payload);
  buffer_.append(frame);
  last_seq_ = rec.seq;
  return rec.seq;
}

Status WalWriter::Sync() {
  if (fd_ < 0) return Status::IoError("log is closed");
  size_t off = 0;
  while (off < buffer_.size()) {
    ssize_t n = ::write(fd_, buffer_.data() + off, buffer_.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return Status::IoError(std::string("write: ") + std::strerror(errno));
    }
    off += static_cast<size_t>(n);
  }
  buffer_.clear();
  return Status::Ok();
}

void WalWriter::Abandon() {
  buffer_.clear();
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Result<WalReplayOutcome> WalReplay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Status::IoError("cannot read " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) return Status::IoError("read failed on " + path.string());

  WalReplayOutcome out;
  size_t pos = 0;
  uint64_t expect_seq = 1;
  while (data.size() - pos >= 8) {
    uint32_t len = DecodeFixed32(data.data() + pos);
    uint32_t crc = DecodeFixed32(data.data() + pos + 4);
    if (data.size() - pos - 8 < len) break;  // torn tail
    std::string_view payload(data.data() + pos + 8, len);
    if (Crc32(payload) != crc) break;
    WalRecord rec;
    if (!DecodeWalPayload(payload, &rec)) break;
    if (rec.seq != expect_seq) break;
    out.records.push_back(std::move(rec));
    expect_seq++;
    pos += 8 + len;
    out.valid_bytes = pos;
  }
  return out;
}

}  // namespace metacache
