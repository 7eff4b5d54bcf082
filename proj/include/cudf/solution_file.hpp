#pragma once

// Solution files: package stanzas carrying only Package, Version and
// Installed, read back against the problem they solve.

#include <stdexcept>
#include <string>
#include <string_view>

#include "cudf/document.hpp"

namespace cudf {

/// Malformed solution text (bad stanza, missing Version, duplicate entry).
class SolutionFormatError : public std::runtime_error {
public:
  explicit SolutionFormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A solution names a (name, version) outside the problem domain.
class UnknownPackage : public std::runtime_error {
public:
  UnknownPackage(std::string name, Version version);
  const std::string& name() const noexcept { return name_; }
  const Version& version() const noexcept { return version_; }

private:
  std::string name_;
  Version version_;
};

/// One stanza per package installed in `solution`, followed by one
/// "Installed: false" stanza per package that `problem` had installed and
/// `solution` does not. Both lists are sorted by (name, version).
std::string write_solution(const CudfDocument& problem, const CudfDocument& solution);

/// Copy of `problem` whose Installed flags come from the solution text.
/// Packages the solution does not mention are not installed. Problem stanzas
/// and properties other than Package/Version/Installed are ignored.
CudfDocument apply_solution(const CudfDocument& problem, std::string_view text);

}  // namespace cudf
