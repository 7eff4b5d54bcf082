#pragma once

// Random valid documents for property tests.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cudf/document.hpp"
#include "cudf/dudf.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::string pkgname(Rng& rng) {
  static const std::string first = "abcdefghijklmnopqrstuvwxyz";
  static const std::string rest = "abcdefghijklmnopqrstuvwxyz0123456789-.";
  std::string s(1, first[uniform(rng, 0, 25)]);
  for (int n = uniform(rng, 1, 8); n > 0; --n) s += rest[uniform(rng, 0, static_cast<int>(rest.size()) - 1)];
  return s;
}

inline cudf::Integer big(Rng& rng, bool positive) {
  cudf::Integer v = uniform(rng, positive ? 1 : 0, 20);
  if (coin(rng, 0.1)) {
    // Past 64 bits now and then.
    v = cudf::Integer(1) << uniform(rng, 64, 130);
    v += uniform(rng, 0, 1000);
  }
  return v;
}

inline cudf::Version version(Rng& rng) { return cudf::Version(big(rng, true)); }

inline cudf::VPkg vpkg(Rng& rng, bool eq_only = false) {
  cudf::VPkg p{pkgname(rng), std::nullopt};
  if (coin(rng)) {
    auto op = eq_only ? cudf::Relop::eq : static_cast<cudf::Relop>(uniform(rng, 0, 5));
    p.constraint = cudf::VersionConstraint{op, version(rng)};
  }
  return p;
}

inline cudf::VpkgList vpkglist(Rng& rng, bool eq_only = false, int max = 3) {
  cudf::VpkgList out;
  for (int n = uniform(rng, 0, max); n > 0; --n) out.push_back(vpkg(rng, eq_only));
  return out;
}

inline cudf::VpkgFormula formula(Rng& rng, bool allow_true = true) {
  cudf::VpkgFormula f;
  int n = uniform(rng, allow_true ? 0 : 1, 3);
  for (int i = 0; i < n; ++i) {
    cudf::Disjunction d;
    for (int k = uniform(rng, 1, 3); k > 0; --k) d.push_back(vpkg(rng));
    f.conjuncts.push_back(std::move(d));
  }
  return f;
}

// One line of text: printable ASCII, blanks and some multi-byte UTF-8.
inline std::string oneliner(Rng& rng, int max = 20) {
  static const std::vector<std::string> pieces = {"a", "Z", "0", " ", "\t", ":", ": ", ",", "|", "'", "\"", "<", "&",
                                                  "\xC3\xA9", "\xE2\x82\xAC", "\xF0\x9F\x93\xA6", "Package", "x y"};
  std::string s;
  for (int n = uniform(rng, 0, max); n > 0; --n) s += pieces[uniform(rng, 0, static_cast<int>(pieces.size()) - 1)];
  return s;
}

/// Package extras of every type, some with defaults.
inline cudf::SchemaRegistry roundtrip_registry() {
  using namespace cudf;
  SchemaRegistry r = SchemaRegistry::core();
  auto opt = [&](std::string name, TypeId type, std::optional<TypedValue> def) {
    r = register_extra_schema(r, PropertySchema{std::move(name), std::move(type), ItemKind::package,
                                                Optionality::optional, std::move(def)});
  };
  opt("Installed-Size", TypeKind::posint, std::nullopt);
  opt("Essential", TypeKind::boolean, false);
  opt("Bugs", TypeKind::integer, Integer(0));
  opt("Epoch", TypeKind::natural, std::nullopt);
  opt("Description", TypeKind::string, std::string());
  opt("Summary", TypeKind::oneliner, std::nullopt);
  opt("Source", TypeKind::pkgname, std::nullopt);
  opt("Priority", TypeId::enumeration({"low", "high", "urgent"}), EnumValue{"low"});
  opt("Replaces", TypeKind::vpkg, std::nullopt);
  opt("Origin", TypeKind::veqpkg, std::nullopt);
  opt("Recommends", TypeKind::vpkgformula, std::nullopt);
  opt("Suggests", TypeKind::vpkglist, VpkgList{});
  opt("Breaks", TypeKind::veqpkglist, std::nullopt);
  return r;
}

inline cudf::TypedValue value_of(Rng& rng, const cudf::TypeId& t) {
  using cudf::TypeKind;
  switch (t.kind) {
    case TypeKind::boolean: return coin(rng);
    case TypeKind::integer: return coin(rng) ? big(rng, false) : cudf::Integer(-big(rng, true));
    case TypeKind::natural: return big(rng, false);
    case TypeKind::posint: return big(rng, true);
    case TypeKind::string:
    case TypeKind::oneliner: return oneliner(rng);
    case TypeKind::pkgname: return pkgname(rng);
    case TypeKind::enumeration: return cudf::EnumValue{t.symbols[uniform(rng, 0, static_cast<int>(t.symbols.size()) - 1)]};
    case TypeKind::vpkg: return vpkg(rng);
    case TypeKind::veqpkg: return vpkg(rng, true);
    case TypeKind::vpkgformula: return formula(rng, false);
    case TypeKind::vpkglist: return vpkglist(rng);
    case TypeKind::veqpkglist: return vpkglist(rng, true);
  }
  return false;
}

/// A valid document in parsed normal form: every registered extra present,
/// None only where there is no default.
inline cudf::CudfDocument document(Rng& rng, const cudf::SchemaRegistry& registry, int max_packages = 12) {
  using namespace cudf;
  CudfDocument doc;
  std::set<std::pair<std::string, Version>> keys;
  for (int n = uniform(rng, 0, max_packages); n > 0; --n) {
    PackageItem p;
    p.name = pkgname(rng);
    p.version = version(rng);
    if (!keys.insert({p.name, p.version}).second) continue;
    p.depends = formula(rng);
    p.conflicts = vpkglist(rng);
    p.provides = vpkglist(rng, true);
    p.installed = coin(rng);
    if (coin(rng, 0.3)) p.keep = static_cast<Keep>(uniform(rng, 0, 2));
    for (const auto& s : registry.extra_schemas(ItemKind::package)) {
      if (!s.default_value && coin(rng, 0.3))
        p.extra[s.name] = NoneValue{};
      else
        p.extra[s.name] = value_of(rng, s.type);
    }
    doc.packages.push_back(std::move(p));
  }
  doc.request.problem_id = oneliner(rng, 6);
  doc.request.install = vpkglist(rng);
  doc.request.remove = vpkglist(rng);
  doc.request.upgrade = vpkglist(rng);
  return doc;
}

// ---- DUDF ----

inline cudf::dudf::HolePayload hole(Rng& rng) {
  if (coin(rng, 0.25)) return cudf::dudf::Intensional{"md5:" + pkgname(rng)};
  std::string text;
  for (int n = uniform(rng, 0, 4); n > 0; --n) {
    text += oneliner(rng, 8);
    text += coin(rng) ? "\n" : "\r\n";
  }
  return cudf::dudf::Extensional{text};
}

inline cudf::dudf::DudfDocument dudf_document(Rng& rng) {
  using namespace cudf::dudf;
  static const std::vector<std::string> dates = {"Tue, 15 Jan 2008 10:03:00 +0100", "1 Feb 2009 23:59 GMT",
                                                 "Sun, 29 Feb 2004 00:00:60 -0730", "Fri, 13 Mar 2009 12:00:00 Z"};
  DudfDocument d;
  d.timestamp = dates[uniform(rng, 0, static_cast<int>(dates.size()) - 1)];
  d.uid = pkgname(rng) + oneliner(rng, 4);
  d.distribution = oneliner(rng, 5);
  d.installer = {oneliner(rng, 4), oneliner(rng, 3)};
  d.meta_installer = {oneliner(rng, 4), oneliner(rng, 3)};
  d.problem.package_status.installer = hole(rng);
  if (coin(rng)) d.problem.package_status.meta_installer = hole(rng);
  for (int n = uniform(rng, 1, 3); n > 0; --n) {
    PackageList l{pkgname(rng) + oneliner(rng, 3), std::nullopt, hole(rng)};
    if (coin(rng)) l.filename = "/var/lib/" + oneliner(rng, 4);
    d.problem.package_universe.push_back(std::move(l));
  }
  d.problem.action = hole(rng);
  if (coin(rng)) d.problem.desiderata = hole(rng);
  if (coin(rng)) {
    DudfOutcome o;
    o.result = coin(rng) ? Result::success : Result::failure;
    if (o.result == Result::failure) {
      o.error = hole(rng);
    } else {
      PackageStatus s{hole(rng), std::nullopt};
      if (coin(rng)) s.meta_installer = hole(rng);
      o.status = std::move(s);
    }
    d.outcome = std::move(o);
  }
  return d;
}

}  // namespace gen
