#include "mmlab/error.hpp"

namespace mmlab {

ParseError::ParseError(std::size_t row, const std::string& what)
    : InputError("row " + std::to_string(row) + ": " + what), row_(row) {}

ValidationError::ValidationError(std::size_t row, const std::string& what)
    : InputError("row " + std::to_string(row) + ": " + what), row_(row) {}

}  // namespace mmlab
