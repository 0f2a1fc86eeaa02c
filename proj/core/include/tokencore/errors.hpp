#pragma once

#include <stdexcept>
#include <string>

namespace tokencore {

// Every failure raised by the library derives from Error so callers can map
// categories onto exit codes without string matching.
enum class ErrorKind {
  kIo,
  kFormat,
  kSchema,
  kData,
  kEmptyInput,
  kContamination,
  kParam,
  kDegenerate,
  kRecall,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define TOKENCORE_DEFINE_ERROR(Name, Kind)                          \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(Kind, message) {} \
  };

TOKENCORE_DEFINE_ERROR(IoError, ErrorKind::kIo)
TOKENCORE_DEFINE_ERROR(FormatError, ErrorKind::kFormat)
TOKENCORE_DEFINE_ERROR(SchemaError, ErrorKind::kSchema)
TOKENCORE_DEFINE_ERROR(DataError, ErrorKind::kData)
TOKENCORE_DEFINE_ERROR(EmptyInputError, ErrorKind::kEmptyInput)
TOKENCORE_DEFINE_ERROR(ContaminationError, ErrorKind::kContamination)
TOKENCORE_DEFINE_ERROR(ParamError, ErrorKind::kParam)
TOKENCORE_DEFINE_ERROR(DegenerateError, ErrorKind::kDegenerate)
TOKENCORE_DEFINE_ERROR(RecallError, ErrorKind::kRecall)

#undef TOKENCORE_DEFINE_ERROR

}  // namespace tokencore
