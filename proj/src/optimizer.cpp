#include "cudf/optimizer.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include <boost/dynamic_bitset.hpp>

#include "cudf/semantics.hpp"

namespace cudf {

const Integer& CostAssignment::operator()(const PackageKey& key) const {
  static const Integer zero = 0;
  auto it = costs_.find(key);
  return it == costs_.end() ? zero : it->second;
}

void CostAssignment::set(PackageKey key, Integer cost) {
  if (cost == 0)
    costs_.erase(key);
  else
    costs_[std::move(key)] = std::move(cost);
}

std::string_view to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::installed_size: return "installed-size";
    case Criterion::download_size: return "download-size";
    case Criterion::prefer_latest: return "prefer-latest";
    case Criterion::min_new: return "min-new";
    case Criterion::min_removed: return "min-removed";
  }
  return "?";
}

std::optional<Criterion> parse_criterion(std::string_view name) noexcept {
  for (auto c : {Criterion::installed_size, Criterion::download_size, Criterion::prefer_latest, Criterion::min_new,
                 Criterion::min_removed}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

MissingSizeProperty::MissingSizeProperty(std::string property, std::string package, Version version)
    : std::runtime_error("package " + package + " (version " + version.to_string() + ") has no " + property +
                         " property"),
      property_(std::move(property)) {}

Integer installation_cost(const CudfDocument& doc, const CostAssignment& costs) {
  Integer total = 0;
  for (const auto& p : doc.packages) {
    if (p.installed) total += costs(p);
  }
  return total;
}

bool at_most_as_expensive(const CudfDocument& a, const CudfDocument& b, const CostAssignment& costs) {
  return installation_cost(a, costs) <= installation_cost(b, costs);
}

std::vector<PackageKey> installed_keys(const CudfDocument& doc) {
  std::vector<PackageKey> out;
  for (const auto& p : doc.packages) {
    if (p.installed) out.push_back({p.name, p.version});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Integer value of an extra property: typed, or raw text parsed as `type`.
std::optional<Integer> integer_extra(const PackageItem& p, std::string_view property, TypeKind type) {
  auto it = p.extra.find(std::string(property));
  if (it == p.extra.end()) return std::nullopt;
  const PropertyValue& v = it->second;
  if (const auto* raw = std::get_if<RawValue>(&v)) {
    try {
      return std::get<Integer>(parse_value(type, raw->text));
    } catch (const LexicalError& e) {
      throw BadCostValue("package " + p.name + " (version " + p.version.to_string() + "): " + e.what());
    }
  }
  if (const auto* typed = std::get_if<TypedValue>(&v)) {
    if (const auto* n = std::get_if<Integer>(typed)) return *n;
    throw BadCostValue("package " + p.name + ": property '" + std::string(property) + "' is not an integer");
  }
  return std::nullopt;
}

Integer size_of(const PackageItem& p, std::string_view property) {
  auto n = integer_extra(p, property, TypeKind::posint);
  if (!n) throw MissingSizeProperty(std::string(property), p.name, p.version);
  return *n;
}

}  // namespace

CostAssignment preset_costs(const CudfDocument& doc, const RequestItem& request, Criterion criterion,
                            PreferLatestMetric metric) {
  CostAssignment costs;
  std::map<std::string, std::set<Version>> versions;
  for (const auto& p : doc.packages) versions[p.name].insert(p.version);

  for (const auto& p : doc.packages) {
    PackageKey key{p.name, p.version};
    switch (criterion) {
      case Criterion::installed_size:
        costs.set(key, size_of(p, installed_size_property));
        break;
      case Criterion::download_size:
        costs.set(key, p.installed ? Integer(0) : size_of(p, download_size_property));
        break;
      case Criterion::prefer_latest: {
        const auto& vs = versions[p.name];
        const Version& latest = *vs.rbegin();
        if (p.version == latest) break;
        if (metric == PreferLatestMetric::binary) {
          costs.set(key, 1);
        } else {
          auto n = std::distance(vs.lower_bound(p.version), vs.lower_bound(latest));
          costs.set(key, Integer(n));
        }
        break;
      }
      case Criterion::min_new: {
        auto required = [&](const VpkgList& list) {
          return std::any_of(list.begin(), list.end(), [&](const VPkg& a) {
            return a.name == p.name && satisfies_constraint(p.version, a.constraint);
          });
        };
        if (!p.installed && !required(request.install) && !required(request.upgrade)) costs.set(key, 1);
        break;
      }
      case Criterion::min_removed:
        if (p.installed) costs.set(key, -1);
        break;
    }
  }
  return costs;
}

CostAssignment costs_from_property(const CudfDocument& doc, std::string_view property) {
  CostAssignment costs;
  bool seen = false;
  for (const auto& p : doc.packages) {
    auto n = integer_extra(p, property, TypeKind::integer);
    if (!n) continue;
    seen = true;
    costs.set({p.name, p.version}, *n);
  }
  if (!seen) throw MissingCostProperty(std::string(property));
  return costs;
}

namespace {

using Bits = boost::dynamic_bitset<std::uint64_t>;

// The request and successor obligations compiled to bitmasks over stanzas, so
// each candidate is checked with word operations only.
class CompiledProblem {
public:
  CompiledProblem(const CudfDocument& doc, const RequestItem& request, const CostAssignment& costs)
      : doc_(doc), n_(doc.packages.size()) {
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& p = doc.packages[i];
      Bits& m = name_mask_.try_emplace(p.name, n_).first->second;
      m.set(i);
      cost_.push_back(costs(p));
    }

    pin_true_ = Bits(n_);
    pin_false_ = Bits(n_);
    depends_.resize(n_);
    conflicts_.resize(n_, Bits(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& p = doc.packages[i];
      for (const auto& d : p.depends.conjuncts) {
        Bits any(n_);
        for (const auto& atom : d) any |= witnesses(atom);
        if (any.none()) pin_false_.set(i);
        depends_[i].push_back(std::move(any));
      }
      for (const auto& atom : p.conflicts) conflicts_[i] |= witnesses(atom);
      conflicts_[i].reset(i);

      if (!p.installed || !p.keep) continue;
      switch (*p.keep) {
        case Keep::version: pin_true_.set(i); break;
        case Keep::package: keep_masks_.push_back(name_mask(p.name)); break;
        case Keep::feature:
          for (const auto& f : p.provides) keep_masks_.push_back(witnesses(f));
          break;
      }
    }

    for (const auto& atom : request.install) install_.push_back(witnesses(atom));
    for (const auto& atom : request.remove) pin_false_ |= witnesses(atom);
    for (const auto& atom : request.upgrade) {
      Upgrade u{witnesses(atom), name_mask(atom.name), Bits(n_)};
      std::optional<Version> newest;
      for (const auto& p : doc.packages) {
        if (p.installed && p.name == atom.name && (!newest || p.version > *newest)) newest = p.version;
      }
      for (std::size_t i = 0; i < n_; ++i) {
        const auto& p = doc.packages[i];
        if (p.name == atom.name && (!newest || p.version >= *newest)) u.allowed.set(i);
      }
      upgrade_.push_back(std::move(u));
    }

    for (std::size_t i = 0; i < n_; ++i) {
      if (!pin_true_.test(i) && !pin_false_.test(i)) free_.push_back(i);
    }
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<std::size_t>& free_positions() const noexcept { return free_; }
  bool pins_contradict() const { return pin_true_.intersects(pin_false_); }

  Bits candidate(std::uint64_t assignment) const {
    Bits installed = pin_true_;
    for (std::size_t k = 0; k < free_.size(); ++k) {
      if ((assignment >> k) & 1U) installed.set(free_[k]);
    }
    return installed;
  }

  bool accepts(const Bits& installed) const {
    for (const auto& m : keep_masks_) {
      if (!m.intersects(installed)) return false;
    }
    for (const auto& m : install_) {
      if (!m.intersects(installed)) return false;
    }
    for (const auto& u : upgrade_) {
      if (!u.witness.intersects(installed)) return false;
      if ((u.same_name & installed).count() != 1) return false;
      if (!u.allowed.intersects(installed)) return false;
    }
    for (auto i = installed.find_first(); i != Bits::npos; i = installed.find_next(i)) {
      if (conflicts_[i].intersects(installed)) return false;
      for (const auto& d : depends_[i]) {
        if (!d.intersects(installed)) return false;
      }
    }
    return true;
  }

  Integer cost(const Bits& installed) const {
    Integer total = 0;
    for (auto i = installed.find_first(); i != Bits::npos; i = installed.find_next(i)) total += cost_[i];
    return total;
  }

  std::vector<PackageKey> keys(const Bits& installed) const {
    std::vector<PackageKey> out;
    for (auto i = installed.find_first(); i != Bits::npos; i = installed.find_next(i))
      out.push_back({doc_.packages[i].name, doc_.packages[i].version});
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  struct Upgrade {
    Bits witness;
    Bits same_name;
    Bits allowed;  // same name, not older than anything installed before
  };

  Bits name_mask(const std::string& name) const {
    auto it = name_mask_.find(name);
    return it == name_mask_.end() ? Bits(n_) : it->second;
  }

  // Stanzas whose installation puts a version satisfying `atom` into the
  // merged installation.
  Bits witnesses(const VPkg& atom) const {
    Bits out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& p = doc_.packages[i];
      if (p.name == atom.name && satisfies_constraint(p.version, atom.constraint)) {
        out.set(i);
        continue;
      }
      for (const auto& f : p.provides) {
        if (f.name != atom.name) continue;
        bool hit = f.constraint ? satisfies_constraint(f.constraint->version, atom.constraint)
                                : set_satisfies(VersionSet::all(), atom.constraint);
        if (hit) {
          out.set(i);
          break;
        }
      }
    }
    return out;
  }

  const CudfDocument& doc_;
  std::size_t n_;
  std::map<std::string, Bits> name_mask_;
  std::vector<Integer> cost_;
  Bits pin_true_;
  Bits pin_false_;
  std::vector<std::vector<Bits>> depends_;
  std::vector<Bits> conflicts_;
  std::vector<Bits> keep_masks_;
  std::vector<Bits> install_;
  std::vector<Upgrade> upgrade_;
  std::vector<std::size_t> free_;
};

struct Best {
  std::optional<Bits> installed;
  Integer cost = 0;
  std::vector<PackageKey> keys;
  std::uint64_t explored = 0;

  void offer(const CompiledProblem& problem, Bits candidate, Integer c) {
    if (installed && c > cost) return;
    if (installed && c == cost) {
      auto k = problem.keys(candidate);
      if (!(k < keys)) return;
      keys = std::move(k);
    } else {
      keys = problem.keys(candidate);
    }
    installed = std::move(candidate);
    cost = std::move(c);
  }
};

Best search(const CompiledProblem& problem, std::uint64_t first, std::uint64_t last) {
  Best best;
  for (std::uint64_t a = first; a < last; ++a) {
    Bits installed = problem.candidate(a);
    ++best.explored;
    if (!problem.accepts(installed)) continue;
    Integer c = problem.cost(installed);
    best.offer(problem, std::move(installed), std::move(c));
  }
  return best;
}

}  // namespace

SolveResult solve(const CudfDocument& doc, const RequestItem& request, const CostAssignment& costs,
                  const SolveOptions& options) {
  SolveResult result;
  CompiledProblem problem(doc, request, costs);
  if (problem.pins_contradict()) return result;

  std::size_t free = problem.free_positions().size();
  if (free >= 64 || (std::uint64_t{1} << free) > options.budget) {
    result.status = SolveStatus::budget_exceeded;
    result.candidates = free >= 64 ? UINT64_MAX : (std::uint64_t{1} << free);
    return result;
  }
  std::uint64_t total = std::uint64_t{1} << free;
  result.candidates = total;

  unsigned threads = std::max(1U, options.threads);
  if (threads > total) threads = static_cast<unsigned>(total);
  Best best;
  if (threads == 1) {
    best = search(problem, 0, total);
  } else {
    std::vector<Best> parts(threads);
    std::vector<std::thread> workers;
    std::uint64_t chunk = (total + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::uint64_t lo = std::min(total, t * chunk);
      std::uint64_t hi = std::min(total, lo + chunk);
      workers.emplace_back([&, t, lo, hi] { parts[t] = search(problem, lo, hi); });
    }
    for (auto& w : workers) w.join();
    for (auto& part : parts) {
      best.explored += part.explored;
      if (part.installed) best.offer(problem, *part.installed, part.cost);
    }
  }

  result.explored = best.explored;
  if (!best.installed) return result;

  CudfDocument out = doc;
  for (std::size_t i = 0; i < out.packages.size(); ++i) out.packages[i].installed = best.installed->test(i);
  if (!satisfies_request(doc, request, out).ok())
    throw std::logic_error("solver produced a candidate rejected by the request semantics");

  result.status = SolveStatus::solution;
  result.cost = installation_cost(out, costs);
  result.document = std::move(out);
  return result;
}

}  // namespace cudf
