#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osr/common.h"
#include "osr/matrix_tuple.h"

namespace osr::cli {

/// Malformed input document; the message carries the position or the
/// offending matrix index.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A tuple read from a document of the form
///   {"n": 2, "d": 1, "name": "...", "matrices": [[[[re, im], ...], ...]]}
/// with each matrix given as an array of rows.
struct TupleFile {
  std::optional<std::string> name;
  MatrixTuple tuple;
  /// "sha256:<hex>" of the raw document bytes.
  std::string digest;
};

TupleFile ParseTupleFile(std::string_view text);
/// Throws ParseError when the file cannot be read.
TupleFile LoadTupleFile(const std::string& path);

/// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDomain = 2,
  kExitNumerical = 3,
};

struct CliResult {
  int exit_code = kExitOk;
  std::string output;  // stdout
  std::string error;   // stderr
};

/// Runs one command line (without the program name).
CliResult RunCli(const std::vector<std::string>& args);

}  // namespace osr::cli
