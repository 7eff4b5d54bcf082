#pragma once

// Reading and writing CUDF files: UTF-8 stanzas started by postmarks,
// "Name: value" lines, stanza-level error recovery and canonical output.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cudf/document.hpp"

namespace cudf {

enum class StanzaKind { package, problem, preamble };

struct RawField {
  std::string name;
  std::string value;
  std::size_t line = 0;
};

/// One file stanza before typing. For problem stanzas the postmark line is not
/// a field; its text is kept in `postmark_value`.
struct RawStanza {
  StanzaKind kind = StanzaKind::package;
  std::size_t begin = 0;  // byte offsets into the input
  std::size_t end = 0;
  std::size_t first_line = 0;
  std::string postmark_value;
  std::vector<RawField> fields;
  std::optional<std::string> error;  // first line-level error, if any
  std::size_t error_line = 0;
};

/// Splits at "Package: " / "Problem: " postmarks found at the start of input
/// or right after a newline. Blank lines are skipped, a trailing CR on each
/// line is dropped, and each line is split at its first ": ".
std::vector<RawStanza> split_stanzas(std::string_view text);

struct RecoveredError {
  std::size_t stanza_index = 0;
  std::size_t begin = 0;  // byte range of the dropped stanza
  std::size_t end = 0;
  std::size_t line = 0;
  std::string reason;
};

enum class FatalKind { encoding, no_problem_stanza, multiple_problem_stanzas };

struct FatalError {
  FatalKind kind;
  std::string message;
};

struct ParseReport {
  std::optional<CudfDocument> document;
  std::vector<RecoveredError> recovered_errors;
  std::vector<std::string> warnings;
  std::optional<FatalError> fatal;
};

struct ParseOptions {
  /// Drop properties that have no schema instead of keeping them as raw text.
  bool strict_extras = false;
  TypeOptions types;
};

ParseReport parse_cudf(std::string_view bytes, const SchemaRegistry& registry = SchemaRegistry::core(),
                       const ParseOptions& options = {});

class ParseFailure : public std::runtime_error {
public:
  explicit ParseFailure(FatalError error)
      : std::runtime_error(error.message), error_(std::move(error)) {}
  const FatalError& error() const noexcept { return error_; }

private:
  FatalError error_;
};

/// parse_cudf that throws ParseFailure on fatal errors.
CudfDocument read_cudf(std::string_view bytes, const SchemaRegistry& registry = SchemaRegistry::core(),
                       const ParseOptions& options = {});

struct PackageStanzas {
  std::vector<PackageItem> packages;
  std::vector<RecoveredError> recovered_errors;
  std::vector<std::string> warnings;
};

/// Parses text holding only package stanzas. Problem stanzas are reported as
/// errors.
PackageStanzas parse_package_stanzas(std::string_view bytes, const SchemaRegistry& registry = SchemaRegistry::core(),
                                     const ParseOptions& options = {});

class InvalidDocument : public std::invalid_argument {
public:
  explicit InvalidDocument(const std::string& what) : std::invalid_argument(what) {}
};

struct SerializeOptions {
  /// Omit properties equal to their default (and None values).
  bool canonical = true;
};

/// Package stanzas first, problem stanza last, one blank line between
/// stanzas. Throws InvalidDocument if validate_document reports anything or a
/// value cannot be written on one line.
std::string serialize_cudf(const CudfDocument& doc, const SchemaRegistry& registry = SchemaRegistry::core(),
                           const SerializeOptions& options = {});

std::string serialize_package_stanza(const PackageItem& item, const SchemaRegistry& registry,
                                     const SerializeOptions& options = {});

}  // namespace cudf
