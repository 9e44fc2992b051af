#include "metacache/status.hpp"

namespace metacache {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "OK";
    case ErrorCode::kInvalidName: return "INVALID_NAME";
    case ErrorCode::kInvalidParent: return "INVALID_PARENT";
    case ErrorCode::kCorruptValue: return "CORRUPT_VALUE";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kSeqGap: return "SEQ_GAP";
    case ErrorCode::kUnsortedInput: return "UNSORTED_INPUT";
    case ErrorCode::kCorruptTable: return "CORRUPT_TABLE";
    case ErrorCode::kInlineTooLarge: return "INLINE_TOO_LARGE";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kIsDirectory: return "IS_DIRECTORY";
    case ErrorCode::kInvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::kInvalidSpec: return "INVALID_SPEC";
    case ErrorCode::kMalformedTrace: return "MALFORMED_TRACE";
    case ErrorCode::kTraceMismatch: return "TRACE_MISMATCH";
  }
  return "UNKNOWN";
}

}  // namespace metacache
