#pragma once

// Installations, feature expansion, satisfaction, consistency, the successor
// relation and request semantics over CUDF documents.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cudf/document.hpp"

namespace cudf {

/// A set of versions: either finite or every positive integer.
class VersionSet {
public:
  VersionSet() = default;
  static VersionSet all() {
    VersionSet s;
    s.all_ = true;
    return s;
  }
  static VersionSet finite(std::set<Version> versions) {
    VersionSet s;
    s.versions_ = std::move(versions);
    return s;
  }

  bool is_all() const noexcept { return all_; }
  bool empty() const noexcept { return !all_ && versions_.empty(); }
  /// Finite members; meaningless when is_all().
  const std::set<Version>& versions() const noexcept { return versions_; }
  bool contains(const Version& v) const { return all_ || versions_.contains(v); }

  void insert(const Version& v) {
    if (!all_) versions_.insert(v);
  }
  void make_all() {
    all_ = true;
    versions_.clear();
  }
  void unite(const VersionSet& other);

  friend bool operator==(const VersionSet&, const VersionSet&) = default;

private:
  bool all_ = false;
  std::set<Version> versions_;
};

/// Total map from package names to version sets; unmapped names are empty.
class Installation {
public:
  const VersionSet& operator()(std::string_view name) const;
  VersionSet& at(const std::string& name) { return map_[name]; }
  void add(const std::string& name, const Version& v) { map_[name].insert(v); }
  void add_all(const std::string& name) { map_[name].make_all(); }

  /// Names with a non-empty set, in order.
  std::vector<std::string> names() const;

  friend bool operator==(const Installation& a, const Installation& b);

private:
  std::map<std::string, VersionSet, std::less<>> map_;
};

Installation current_installation(const CudfDocument& doc);
Installation current_features(const CudfDocument& doc);
Installation merge(const Installation& a, const Installation& b);

/// merge(current_installation(doc), current_features(doc))
Installation merged_installation(const CudfDocument& doc);

bool satisfies_constraint(const Version& n, const std::optional<VersionConstraint>& c) noexcept;
bool set_satisfies(const VersionSet& vs, const std::optional<VersionConstraint>& c);
bool satisfies_formula(const Installation& installation, const VpkgFormula& formula);
bool satisfies_list(const Installation& installation, const VpkgList& list);
bool disjoint(const Installation& installation, const VpkgList& list);

/// One failed obligation. `clause` names the rule, e.g. "depends",
/// "conflicts", "domain", "keep-version", "install", "upgrade".
struct Violation {
  std::string clause;
  std::string package;
  std::optional<Version> version;
  std::string reason;

  std::string to_string() const;
};

struct ConsistencyVerdict {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

struct SuccessorVerdict {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

struct ClauseResult {
  int clause = 0;  // 1 successor, 2 consistency, 3 install, 4 remove, 5 upgrade
  std::string name;
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

struct RequestVerdict {
  std::vector<ClauseResult> clauses;
  bool ok() const noexcept;
  std::vector<Violation> violations() const;
};

/// Every installed package has its dependencies met by the merged
/// installation and no conflict with any other installed package or feature.
ConsistencyVerdict is_consistent(const CudfDocument& doc);

SuccessorVerdict is_successor(const CudfDocument& before, const CudfDocument& after);

RequestVerdict satisfies_request(const CudfDocument& before, const RequestItem& request, const CudfDocument& after);

}  // namespace cudf
