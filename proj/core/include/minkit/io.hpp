#pragma once

// State files: {"dims":[dA,dB], "re":[[...]], "im":[[...]]}, row-major real
// and imaginary parts. "im" may be omitted for real matrices.

#include <filesystem>
#include <string>
#include <string_view>

#include "minkit/states.hpp"

namespace minkit {

/// Raw contents of a state file before validation.
struct StateFile {
  Dims dims;
  ComplexMatrix matrix;
};

/// Throws FormatError for malformed JSON or shape errors within the file.
StateFile parse_state_json(std::string_view text);

/// parse_state_json followed by DensityMatrix::validate.
DensityMatrix read_state(std::string_view text);
DensityMatrix read_state_file(const std::filesystem::path& path);

/// Serializes with round-trip precision; output is deterministic.
std::string write_state_json(const DensityMatrix& rho);
std::string write_state_json(const ComplexMatrix& m, Dims dims);

}  // namespace minkit
