#pragma once

// DUDF submissions: the skeleton model, its XML form, validation of the
// side conditions, and a toy conversion to CUDF.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cudf/document.hpp"

namespace cudf::dudf {

inline constexpr std::string_view namespace_uri = "http://www.mancoosi.org/2008/cudf/dudf";

/// Hole content sent inline; opaque text.
struct Extensional {
  std::string text;
  friend bool operator==(const Extensional&, const Extensional&) = default;
};

/// Hole content given by reference (checksum, URL, ...). Never dereferenced.
struct Intensional {
  std::string reference;
  friend bool operator==(const Intensional&, const Intensional&) = default;
};

using HolePayload = std::variant<Extensional, Intensional>;

struct Tool {
  std::string name;
  std::string version;
  friend bool operator==(const Tool&, const Tool&) = default;
};

struct PackageStatus {
  HolePayload installer;
  std::optional<HolePayload> meta_installer;
  friend bool operator==(const PackageStatus&, const PackageStatus&) = default;
};

struct PackageList {
  std::string format;
  std::optional<std::string> filename;
  HolePayload payload;
  friend bool operator==(const PackageList&, const PackageList&) = default;
};

struct DudfProblem {
  PackageStatus package_status;
  std::vector<PackageList> package_universe;
  HolePayload action;
  std::optional<HolePayload> desiderata;
  friend bool operator==(const DudfProblem&, const DudfProblem&) = default;
};

enum class Result { success, failure };
std::string_view to_string(Result r) noexcept;

struct DudfOutcome {
  Result result = Result::success;
  std::optional<HolePayload> error;     // failure only
  std::optional<PackageStatus> status;  // success only
  friend bool operator==(const DudfOutcome&, const DudfOutcome&) = default;
};

struct DudfDocument {
  std::string version = "1.0";
  std::string timestamp;
  std::string uid;
  std::string distribution;
  Tool installer;
  Tool meta_installer;
  DudfProblem problem;
  std::optional<DudfOutcome> outcome;  // absent for sole-problem submissions
  friend bool operator==(const DudfDocument&, const DudfDocument&) = default;
};

enum class SubmissionKind { sole_problem, problem_outcome };
SubmissionKind submission_kind(const DudfDocument& doc) noexcept;

enum class Severity { error, warning };

struct Violation {
  Severity severity = Severity::error;
  std::string path;  // e.g. "/dudf/uid"
  std::string code;  // e.g. "timestamp", "schema"
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidateOptions {
  /// Also require a non-empty package universe.
  bool strict = false;
};

/// Side conditions the XML structure cannot express.
std::vector<Violation> validate_dudf(const DudfDocument& doc, const ValidateOptions& options = {});

/// Throws InvalidDocument when validate_dudf reports an error.
std::string dudf_to_xml(const DudfDocument& doc);

/// Structural error in DUDF XML input.
class SchemaViolation : public std::runtime_error {
public:
  SchemaViolation(std::string path, std::string reason);
  const std::string& path() const noexcept { return path_; }
  const std::string& reason() const noexcept { return reason_; }

private:
  std::string path_;
  std::string reason_;
};

struct ReadOptions {
  /// Fixed sibling order; reject elements and attributes from other
  /// namespaces.
  bool strict = false;
};

DudfDocument xml_to_dudf(std::string_view bytes, const ReadOptions& options = {});

/// Parse and validate. A SchemaViolation becomes a single "schema" error.
struct CheckReport {
  std::optional<DudfDocument> document;
  std::vector<Violation> violations;
  bool ok() const noexcept;
};

CheckReport check_dudf_xml(std::string_view bytes, bool strict = false);

class ConversionError : public std::runtime_error {
public:
  explicit ConversionError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedFormat : public ConversionError {
public:
  explicit UnsupportedFormat(const std::string& format)
      : ConversionError("unsupported package list format '" + format + "'") {}
};

class IntensionalHole : public ConversionError {
public:
  explicit IntensionalHole(const std::string& path)
      : ConversionError("hole " + path + " is intensional and must be expanded first") {}
};

inline constexpr std::string_view cudf_stanzas_format = "cudf-stanzas";

/// Builds a CUDF document from holes holding CUDF text: installer status
/// stanzas (forced installed), universe stanzas, and an action hole in
/// problem-stanza syntax. The problem identifier is the DUDF uid.
CudfDocument toy_convert(const DudfDocument& doc, std::string_view universe_format = cudf_stanzas_format,
                         const SchemaRegistry& registry = SchemaRegistry::core());

}  // namespace cudf::dudf
