#pragma once

// Installation cost, the cost quasi-order, criteria presets and an exhaustive
// optimal solver for small universes.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cudf/document.hpp"

namespace cudf {

struct PackageKey {
  std::string name;
  Version version;
  friend auto operator<=>(const PackageKey&, const PackageKey&) = default;
  friend bool operator==(const PackageKey&, const PackageKey&) = default;
};

/// Total map from (name, version) to an integer; unset keys cost 0.
class CostAssignment {
public:
  const Integer& operator()(const PackageKey& key) const;
  const Integer& operator()(const PackageItem& p) const { return (*this)(PackageKey{p.name, p.version}); }
  void set(PackageKey key, Integer cost);
  const std::map<PackageKey, Integer>& entries() const noexcept { return costs_; }

private:
  std::map<PackageKey, Integer> costs_;
};

enum class Criterion { installed_size, download_size, prefer_latest, min_new, min_removed };

std::string_view to_string(Criterion c) noexcept;
std::optional<Criterion> parse_criterion(std::string_view name) noexcept;

/// How prefer-latest scores an older version: 1 for any non-latest version,
/// or the number of versions of the package in [v, latest).
enum class PreferLatestMetric { binary, outdatedness };

class MissingSizeProperty : public std::runtime_error {
public:
  MissingSizeProperty(std::string property, std::string package, Version version);
  const std::string& property() const noexcept { return property_; }

private:
  std::string property_;
};

class MissingCostProperty : public std::runtime_error {
public:
  explicit MissingCostProperty(const std::string& property)
      : std::runtime_error("no package carries property '" + property + "'") {}
};

class BadCostValue : public std::runtime_error {
public:
  explicit BadCostValue(const std::string& what) : std::runtime_error(what) {}
};

/// Sum of costs over installed packages.
Integer installation_cost(const CudfDocument& doc, const CostAssignment& costs);

/// a ≲ b: a's installation costs no more than b's.
bool at_most_as_expensive(const CudfDocument& a, const CudfDocument& b, const CostAssignment& costs);

/// Property names read by the size presets.
inline constexpr std::string_view installed_size_property = "Installed-Size";
inline constexpr std::string_view download_size_property = "Download-Size";

CostAssignment preset_costs(const CudfDocument& doc, const RequestItem& request, Criterion criterion,
                            PreferLatestMetric metric = PreferLatestMetric::binary);

/// Costs read from an integer extra property. Stanzas without a value cost 0;
/// raw (unregistered) values are parsed as int. Throws MissingCostProperty if
/// no package stanza carries the property.
CostAssignment costs_from_property(const CudfDocument& doc, std::string_view property);

struct SolveOptions {
  std::uint64_t budget = std::uint64_t{1} << 20;  // max candidates enumerated
  unsigned threads = 1;
};

enum class SolveStatus { solution, no_solution, budget_exceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::no_solution;
  std::optional<CudfDocument> document;  // set iff status == solution
  Integer cost = 0;
  std::uint64_t explored = 0;    // candidates checked
  std::uint64_t candidates = 0;  // size of the search space after pinning
};

/// Enumerates Installed flags over the domain of `doc` and returns a
/// minimum-cost successor satisfying `request`. Ties go to the
/// lexicographically smallest sorted list of installed (name, version).
SolveResult solve(const CudfDocument& doc, const RequestItem& request, const CostAssignment& costs,
                  const SolveOptions& options = {});

/// Sorted (name, version) keys of installed packages.
std::vector<PackageKey> installed_keys(const CudfDocument& doc);

}  // namespace cudf
