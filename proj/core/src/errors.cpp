#include "tokencore/errors.hpp"

namespace tokencore {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kFormat: return "FormatError";
    case ErrorKind::kSchema: return "SchemaError";
    case ErrorKind::kData: return "DataError";
    case ErrorKind::kEmptyInput: return "EmptyInputError";
    case ErrorKind::kContamination: return "ContaminationError";
    case ErrorKind::kParam: return "ParamError";
    case ErrorKind::kDegenerate: return "DegenerateError";
    case ErrorKind::kRecall: return "RecallError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace tokencore
