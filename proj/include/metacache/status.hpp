#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace metacache {

enum class ErrorCode {
  kOk = 0,
  kInvalidName,
  kInvalidParent,
  kCorruptValue,
  kIoError,
  kSeqGap,
  kUnsortedInput,
  kCorruptTable,
  kInlineTooLarge,
  kNotFound,
  kIsDirectory,
  kInvalidConfig,
  kInvalidSpec,
  kMalformedTrace,
  kTraceMismatch,
};

const char* ErrorCodeName(ErrorCode code);

// Cheap value-type status. Ok status carries no allocation.
class Status {
 public:
  Status() : code_(ErrorCode::kOk) {}

  static Status Ok() { return Status(); }
  static Status InvalidName(std::string msg) { return Status(ErrorCode::kInvalidName, std::move(msg)); }
  static Status InvalidParent(std::string msg) { return Status(ErrorCode::kInvalidParent, std::move(msg)); }
  static Status CorruptValue(std::string msg) { return Status(ErrorCode::kCorruptValue, std::move(msg)); }
  static Status IoError(std::string msg) { return Status(ErrorCode::kIoError, std::move(msg)); }
  static Status SeqGap(std::string msg) { return Status(ErrorCode::kSeqGap, std::move(msg)); }
  static Status UnsortedInput(std::string msg) { return Status(ErrorCode::kUnsortedInput, std::move(msg)); }
  static Status CorruptTable(std::string msg) { return Status(ErrorCode::kCorruptTable, std::move(msg)); }
  static Status InlineTooLarge(std::string msg) { return Status(ErrorCode::kInlineTooLarge, std::move(msg)); }
  static Status NotFound(std::string msg) { return Status(ErrorCode::kNotFound, std::move(msg)); }
  static Status IsDirectory(std::string msg) { return Status(ErrorCode::kIsDirectory, std::move(msg)); }
  static Status InvalidConfig(std::string msg) { return Status(ErrorCode::kInvalidConfig, std::move(msg)); }
  static Status InvalidSpec(std::string msg) { return Status(ErrorCode::kInvalidSpec, std::move(msg)); }
  static Status MalformedTrace(std::string msg) { return Status(ErrorCode::kMalformedTrace, std::move(msg)); }
  static Status TraceMismatch(std::string msg) { return Status(ErrorCode::kTraceMismatch, std::move(msg)); }

  bool ok() const { return code_ == ErrorCode::kOk; }
  ErrorCode code() const { return code_; }
  const std::string& message() const { return msg_; }

  std::string ToString() const {
    if (ok()) return "OK";
    std::string s = ErrorCodeName(code_);
    if (!msg_.empty()) {
      s += ": ";
      s += msg_;
    }
    return s;
  }

 private:
  Status(ErrorCode code, std::string msg) : code_(code), msg_(std::move(msg)) {}

  ErrorCode code_;
  std::string msg_;
};

// Status plus a value. The value is only accessible when ok().
template <typename T>
class Result {
 public:
  Result(T value) : value_(std::move(value)) {}          // NOLINT(google-explicit-constructor)
  Result(Status status) : status_(std::move(status)) {}  // NOLINT(google-explicit-constructor)

  bool ok() const { return status_.ok(); }
  const Status& status() const { return status_; }

  T& value() { return *value_; }
  const T& value() const { return *value_; }
  T& operator*() { return *value_; }
  const T& operator*() const { return *value_; }
  T* operator->() { return &*value_; }
  const T* operator->() const { return &*value_; }

 private:
  Status status_;
  std::optional<T> value_;
};

}  // namespace metacache
