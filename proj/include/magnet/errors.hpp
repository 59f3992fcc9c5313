#pragma once

#include <stdexcept>
#include <string>

namespace magnet {

/// Base class for all magnet errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unrecognized byte sequence while tokenizing; carries line/column (1-based).
struct LexError : Error {
    LexError(const std::string& msg, int line, int column)
        : Error(msg + " at line " + std::to_string(line) + ", column " +
                std::to_string(column)),
          line(line),
          column(column) {}
    int line;
    int column;
};

/// Malformed syntax or unsupported construct; carries the offending token index.
struct ParseError : Error {
    ParseError(const std::string& msg, int token_index)
        : Error(msg + " (token " + std::to_string(token_index) + ")"),
          token_index(token_index) {}
    int token_index;
};

/// Schema violation in a graph document, manifest, or split file.
struct FormatError : Error {
    using Error::Error;
};

/// Node type name outside the closed vocabulary.
struct UnknownTypeError : Error {
    using Error::Error;
};

/// Operand shapes incompatible with a tensor operation.
struct ShapeError : Error {
    using Error::Error;
};

/// backward() called on a non-scalar tensor.
struct NotScalarError : Error {
    using Error::Error;
};

/// split_by_time found a record without an update date.
struct MissingDateError : Error {
    using Error::Error;
};

/// centroid_distance needs at least one sample per class.
struct MissingClassError : Error {
    using Error::Error;
};

/// Prediction and label vectors differ in length.
struct LengthMismatch : Error {
    using Error::Error;
};

/// Checkpoint missing, truncated, or of an unknown version.
struct CheckpointError : Error {
    using Error::Error;
};

}  // namespace magnet
