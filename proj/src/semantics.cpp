#include "cudf/semantics.hpp"

#include <algorithm>
#include <map>

namespace cudf {

void VersionSet::unite(const VersionSet& other) {
  if (all_) return;
  if (other.all_) {
    make_all();
    return;
  }
  versions_.insert(other.versions_.begin(), other.versions_.end());
}

const VersionSet& Installation::operator()(std::string_view name) const {
  static const VersionSet empty;
  auto it = map_.find(name);
  return it == map_.end() ? empty : it->second;
}

std::vector<std::string> Installation::names() const {
  std::vector<std::string> out;
  for (const auto& [name, set] : map_) {
    if (!set.empty()) out.push_back(name);
  }
  return out;
}

bool operator==(const Installation& a, const Installation& b) {
  auto na = a.names();
  if (na != b.names()) return false;
  return std::all_of(na.begin(), na.end(), [&](const std::string& n) { return a(n) == b(n); });
}

Installation current_installation(const CudfDocument& doc) {
  Installation out;
  for (const auto& p : doc.packages) {
    if (p.installed) out.add(p.name, p.version);
  }
  return out;
}

namespace {

void expand_features(Installation& out, const VpkgList& provides) {
  for (const auto& f : provides) {
    if (!f.constraint)
      out.add_all(f.name);
    else
      out.add(f.name, f.constraint->version);
  }
}

// Where each name's versions come from: one entry per installed package and
// per feature it provides. Lets conflict checks leave out a single package
// without rebuilding the installation.
struct Contribution {
  std::size_t source;  // index into doc.packages
  std::optional<Version> version;  // nullopt: every version
};

class ProvenanceIndex {
public:
  explicit ProvenanceIndex(const CudfDocument& doc) {
    for (std::size_t i = 0; i < doc.packages.size(); ++i) {
      const auto& p = doc.packages[i];
      if (!p.installed) continue;
      by_name_[p.name].push_back({i, p.version});
      for (const auto& f : p.provides) {
        by_name_[f.name].push_back({i, f.constraint ? std::optional(f.constraint->version) : std::nullopt});
      }
    }
  }

  /// Versions of `name` in the merged installation of the document with
  /// package `excluded` removed that satisfy `c`; returns one witness source.
  std::optional<std::size_t> witness(const VPkg& atom, std::optional<std::size_t> excluded) const {
    auto it = by_name_.find(atom.name);
    if (it == by_name_.end()) return std::nullopt;
    for (const auto& c : it->second) {
      if (excluded && c.source == *excluded) continue;
      bool hit = c.version ? satisfies_constraint(*c.version, atom.constraint)
                           : set_satisfies(VersionSet::all(), atom.constraint);
      if (hit) return c.source;
    }
    return std::nullopt;
  }

private:
  std::map<std::string, std::vector<Contribution>, std::less<>> by_name_;
};

std::string describe(const VPkg& v) { return serialize_value(v); }

std::string describe(const Disjunction& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += " | ";
    out += describe(d[i]);
  }
  return out;
}

std::string key_of(const PackageItem& p) { return p.name + " " + p.version.to_string(); }

}  // namespace

Installation current_features(const CudfDocument& doc) {
  Installation out;
  for (const auto& p : doc.packages) {
    if (p.installed) expand_features(out, p.provides);
  }
  return out;
}

Installation merge(const Installation& a, const Installation& b) {
  Installation out = a;
  for (const auto& name : b.names()) out.at(name).unite(b(name));
  return out;
}

Installation merged_installation(const CudfDocument& doc) {
  return merge(current_installation(doc), current_features(doc));
}

bool satisfies_constraint(const Version& n, const std::optional<VersionConstraint>& c) noexcept {
  if (!c) return true;
  const Version& v = c->version;
  switch (c->relop) {
    case Relop::eq: return n == v;
    case Relop::neq: return n != v;
    case Relop::gt: return n > v;
    case Relop::geq: return n >= v;
    case Relop::lt: return n < v;
    case Relop::leq: return n <= v;
  }
  return false;
}

bool set_satisfies(const VersionSet& vs, const std::optional<VersionConstraint>& c) {
  if (vs.is_all()) {
    // Only "< 1" has no witness among the positive integers.
    return !(c && c->relop == Relop::lt && c->version == Version(1));
  }
  return std::any_of(vs.versions().begin(), vs.versions().end(),
                     [&](const Version& n) { return satisfies_constraint(n, c); });
}

bool satisfies_formula(const Installation& installation, const VpkgFormula& formula) {
  return std::all_of(formula.conjuncts.begin(), formula.conjuncts.end(), [&](const Disjunction& d) {
    return std::any_of(d.begin(), d.end(),
                       [&](const VPkg& atom) { return set_satisfies(installation(atom.name), atom.constraint); });
  });
}

bool satisfies_list(const Installation& installation, const VpkgList& list) {
  return std::all_of(list.begin(), list.end(),
                     [&](const VPkg& atom) { return set_satisfies(installation(atom.name), atom.constraint); });
}

bool disjoint(const Installation& installation, const VpkgList& list) {
  // For every (c, p) no installed version of p satisfies c; that is, the set
  // I(p) has no witness for c.
  return std::none_of(list.begin(), list.end(),
                      [&](const VPkg& atom) { return set_satisfies(installation(atom.name), atom.constraint); });
}

std::string Violation::to_string() const {
  std::string out = clause;
  if (!package.empty()) {
    out += " [" + package;
    if (version) out += " " + version->to_string();
    out += "]";
  }
  if (!reason.empty()) out += ": " + reason;
  return out;
}

bool RequestVerdict::ok() const noexcept {
  return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.ok(); });
}

std::vector<Violation> RequestVerdict::violations() const {
  std::vector<Violation> out;
  for (const auto& c : clauses) out.insert(out.end(), c.violations.begin(), c.violations.end());
  return out;
}

ConsistencyVerdict is_consistent(const CudfDocument& doc) {
  ConsistencyVerdict verdict;
  Installation merged = merged_installation(doc);
  ProvenanceIndex index(doc);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < doc.packages.size(); ++i) {
    if (doc.packages[i].installed) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = doc.packages[a];
    const auto& pb = doc.packages[b];
    return std::tie(pa.name, pa.version) < std::tie(pb.name, pb.version);
  });

  for (std::size_t i : order) {
    const PackageItem& p = doc.packages[i];
    for (const auto& d : p.depends.conjuncts) {
      bool met = std::any_of(d.begin(), d.end(),
                             [&](const VPkg& atom) { return set_satisfies(merged(atom.name), atom.constraint); });
      if (!met) verdict.violations.push_back({"depends", p.name, p.version, "unsatisfied dependency " + describe(d)});
    }
    for (const auto& atom : p.conflicts) {
      if (auto w = index.witness(atom, i)) {
        verdict.violations.push_back(
            {"conflicts", p.name, p.version, "conflict " + describe(atom) + " hit by " + key_of(doc.packages[*w])});
      }
    }
  }
  return verdict;
}

SuccessorVerdict is_successor(const CudfDocument& before, const CudfDocument& after) {
  SuccessorVerdict verdict;
  using Key = std::pair<std::string, Version>;
  std::map<Key, const PackageItem*> b_index;
  std::map<Key, const PackageItem*> a_index;
  for (const auto& p : before.packages) b_index.emplace(Key{p.name, p.version}, &p);
  for (const auto& p : after.packages) a_index.emplace(Key{p.name, p.version}, &p);

  for (const auto& [key, item] : b_index) {
    if (!a_index.contains(key))
      verdict.violations.push_back({"domain", key.first, key.second, "package missing from the successor"});
  }
  for (const auto& [key, item] : a_index) {
    if (!b_index.contains(key))
      verdict.violations.push_back({"domain", key.first, key.second, "package not in the original description"});
  }

  for (const auto& [key, b] : b_index) {
    auto it = a_index.find(key);
    if (it == a_index.end()) continue;
    const PackageItem* a = it->second;
    auto differs = [&](const char* what) {
      verdict.violations.push_back({"properties", key.first, key.second, std::string(what) + " changed"});
    };
    if (a->keep != b->keep) differs("Keep");
    if (a->depends != b->depends) differs("Depends");
    if (a->conflicts != b->conflicts) differs("Conflicts");
    if (a->provides != b->provides) differs("Provides");
  }

  Installation after_installed = current_installation(after);
  Installation after_merged = merge(after_installed, current_features(after));
  std::set<std::string> package_keep_checked;
  for (const auto& [key, b] : b_index) {
    if (!b->installed || !b->keep) continue;
    switch (*b->keep) {
      case Keep::version:
        if (!after_installed(key.first).contains(key.second))
          verdict.violations.push_back({"keep-version", key.first, key.second, "kept version was removed"});
        break;
      case Keep::package:
        if (package_keep_checked.insert(key.first).second && after_installed(key.first).empty())
          verdict.violations.push_back(
              {"keep-package", key.first, key.second, "no version of the package remains installed"});
        break;
      case Keep::feature:
        for (const auto& f : b->provides) {
          if (!set_satisfies(after_merged(f.name), f.constraint))
            verdict.violations.push_back(
                {"keep-feature", key.first, key.second, "feature " + describe(f) + " no longer provided"});
        }
        break;
    }
  }
  return verdict;
}

RequestVerdict satisfies_request(const CudfDocument& before, const RequestItem& request, const CudfDocument& after) {
  RequestVerdict verdict;

  ClauseResult successor{1, "successor", is_successor(before, after).violations};
  ClauseResult consistency{2, "consistency", is_consistent(after).violations};

  Installation after_installed = current_installation(after);
  Installation after_merged = merge(after_installed, current_features(after));
  Installation before_installed = current_installation(before);

  ClauseResult install{3, "install", {}};
  for (const auto& atom : request.install) {
    if (!set_satisfies(after_merged(atom.name), atom.constraint))
      install.violations.push_back({"install", atom.name, std::nullopt, describe(atom) + " is not installed"});
  }

  ClauseResult remove{4, "remove", {}};
  for (const auto& atom : request.remove) {
    if (set_satisfies(after_merged(atom.name), atom.constraint))
      remove.violations.push_back({"remove", atom.name, std::nullopt, describe(atom) + " is still installed"});
  }

  ClauseResult upgrade{5, "upgrade", {}};
  for (const auto& atom : request.upgrade) {
    if (!set_satisfies(after_merged(atom.name), atom.constraint)) {
      upgrade.violations.push_back({"upgrade", atom.name, std::nullopt, describe(atom) + " is not installed"});
      continue;
    }
    const VersionSet& now = after_installed(atom.name);
    if (now.versions().size() != 1) {
      upgrade.violations.push_back({"upgrade", atom.name, std::nullopt,
                                    std::to_string(now.versions().size()) +
                                        " versions installed; exactly one is required"});
      continue;
    }
    const Version& n = *now.versions().begin();
    const VersionSet& was = before_installed(atom.name);
    if (!was.versions().empty() && n < *was.versions().rbegin()) {
      upgrade.violations.push_back({"upgrade", atom.name, n,
                                    "installed version is older than previously installed version " +
                                        was.versions().rbegin()->to_string()});
    }
  }

  verdict.clauses = {std::move(successor), std::move(consistency), std::move(install), std::move(remove),
                     std::move(upgrade)};
  return verdict;
}

}  // namespace cudf
