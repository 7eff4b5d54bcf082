#include "cudf/document.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace cudf {

namespace {

PropertySchema optional_with(std::string name, TypeId type, ItemKind item, std::optional<TypedValue> def) {
  return PropertySchema{std::move(name), std::move(type), item, Optionality::optional, std::move(def)};
}

std::vector<PropertySchema> make_core() {
  std::vector<PropertySchema> core;
  core.push_back({"Package", TypeKind::pkgname, ItemKind::package, Optionality::required, std::nullopt});
  core.push_back({"Version", TypeKind::posint, ItemKind::package, Optionality::required, std::nullopt});
  core.push_back(optional_with("Depends", TypeKind::vpkgformula, ItemKind::package, VpkgFormula::truth()));
  core.push_back(optional_with("Conflicts", TypeKind::vpkglist, ItemKind::package, VpkgList{}));
  core.push_back(optional_with("Provides", TypeKind::veqpkglist, ItemKind::package, VpkgList{}));
  core.push_back(optional_with("Installed", TypeKind::boolean, ItemKind::package, false));
  core.push_back(optional_with("Keep", TypeId::enumeration({"version", "package", "feature"}), ItemKind::package,
                               std::nullopt));
  core.push_back(optional_with("Install", TypeKind::vpkglist, ItemKind::problem, VpkgList{}));
  core.push_back(optional_with("Remove", TypeKind::vpkglist, ItemKind::problem, VpkgList{}));
  core.push_back(optional_with("Upgrade", TypeKind::vpkglist, ItemKind::problem, VpkgList{}));
  return core;
}

std::optional<Version> version_of(const PackageItem& p) { return p.version; }

}  // namespace

std::string_view to_string(Keep keep) noexcept {
  switch (keep) {
    case Keep::version: return "version";
    case Keep::package: return "package";
    case Keep::feature: return "feature";
  }
  return "?";
}

std::optional<Keep> keep_from_symbol(std::string_view symbol) noexcept {
  if (symbol == "version") return Keep::version;
  if (symbol == "package") return Keep::package;
  if (symbol == "feature") return Keep::feature;
  return std::nullopt;
}

SchemaRegistry SchemaRegistry::core() {
  SchemaRegistry r;
  r.core_ = make_core();
  return r;
}

const PropertySchema* SchemaRegistry::find(ItemKind item, std::string_view name) const {
  for (const auto* list : {&core_, &extra_}) {
    for (const auto& s : *list) {
      if (s.item == item && s.name == name) return &s;
    }
  }
  return nullptr;
}

std::vector<PropertySchema> SchemaRegistry::extra_schemas(ItemKind item) const {
  std::vector<PropertySchema> out;
  std::copy_if(extra_.begin(), extra_.end(), std::back_inserter(out),
               [&](const PropertySchema& s) { return s.item == item; });
  return out;
}

bool SchemaRegistry::is_core_name(std::string_view name) noexcept {
  static const std::set<std::string, std::less<>> names = {
      "Package", "Version", "Depends", "Conflicts", "Provides", "Installed",
      "Keep",    "Install", "Remove",  "Upgrade",   "Problem"};
  return names.contains(name);
}

SchemaRegistry register_extra_schema(const SchemaRegistry& registry, PropertySchema schema) {
  if (!is_identifier(schema.name)) throw InvalidSchema("'" + schema.name + "' is not an identifier");
  if (SchemaRegistry::is_core_name(schema.name) || registry.find(schema.item, schema.name))
    throw NameCollision(schema.name);
  if (schema.optionality == Optionality::required && schema.default_value)
    throw InvalidSchema("required property '" + schema.name + "' cannot have a default");
  if (schema.default_value && !is_subtype_value(*schema.default_value, schema.type))
    throw InvalidSchema("default of '" + schema.name + "' is not a " + schema.type.to_string());
  SchemaRegistry out = registry;
  out.extra_.push_back(std::move(schema));
  return out;
}

PropertySchema cost_schema(std::string name) {
  return optional_with(std::move(name), TypeKind::integer, ItemKind::package, Integer(0));
}

const PackageItem* lookup(const CudfDocument& doc, std::string_view name, const Version& version) {
  auto it = std::find_if(doc.packages.begin(), doc.packages.end(),
                         [&](const PackageItem& p) { return p.name == name && p.version == version; });
  return it == doc.packages.end() ? nullptr : &*it;
}

CudfDocument remove_package(const CudfDocument& doc, std::string_view name, const Version& version) {
  CudfDocument out;
  out.request = doc.request;
  out.packages.reserve(doc.packages.size());
  for (const auto& p : doc.packages) {
    if (!(p.name == name && p.version == version)) out.packages.push_back(p);
  }
  return out;
}

std::string DocumentViolation::to_string() const {
  std::string where = package.empty() ? std::string("request") : package;
  if (version) where += " (version " + version->to_string() + ")";
  if (!property.empty()) where += ", property " + property;
  switch (kind) {
    case ViolationKind::duplicate_key: return where + ": duplicate package/version key";
    case ViolationKind::bad_value: return where + ": " + reason;
    case ViolationKind::missing_required: return where + ": missing required property";
    case ViolationKind::unknown_property: return where + ": " + reason;
  }
  return where + ": " + reason;
}

namespace {

void check_extras(const ExtraProperties& extra, ItemKind item, const SchemaRegistry& registry,
                  const TypeOptions& options, const std::string& package, const std::optional<Version>& version,
                  std::vector<DocumentViolation>& out) {
  for (const auto& [name, value] : extra) {
    if (SchemaRegistry::is_core_name(name)) {
      out.push_back({ViolationKind::unknown_property, package, version, name, "extra property shadows a core name"});
      continue;
    }
    if (!is_identifier(name)) {
      out.push_back({ViolationKind::unknown_property, package, version, name, "property name is not an identifier"});
      continue;
    }
    const PropertySchema* schema = registry.find(item, name);
    if (!schema) continue;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, NoneValue>) {
            if (schema->optionality == Optionality::required)
              out.push_back({ViolationKind::missing_required, package, version, name, ""});
            else if (schema->default_value)
              out.push_back({ViolationKind::bad_value, package, version, name, "None for a property with a default"});
          } else if constexpr (std::is_same_v<T, RawValue>) {
            out.push_back({ViolationKind::bad_value, package, version, name, "unparsed value for a registered property"});
          } else {
            if (!is_subtype_value(v, schema->type, options))
              out.push_back({ViolationKind::bad_value, package, version, name,
                             "value is not a " + schema->type.to_string()});
          }
        },
        value);
  }
  for (const auto& schema : registry.extra_schemas(item)) {
    if (schema.optionality == Optionality::required && !extra.contains(schema.name))
      out.push_back({ViolationKind::missing_required, package, version, schema.name, ""});
  }
}

}  // namespace

std::vector<DocumentViolation> validate_document(const CudfDocument& doc, const SchemaRegistry& registry,
                                                 const TypeOptions& options) {
  std::vector<DocumentViolation> out;
  std::set<std::pair<std::string, Version>> seen;
  std::set<std::pair<std::string, Version>> reported;
  for (const auto& p : doc.packages) {
    auto key = std::make_pair(p.name, p.version);
    if (!seen.insert(key).second && reported.insert(key).second)
      out.push_back({ViolationKind::duplicate_key, p.name, p.version, "", ""});

    if (!is_pkgname(p.name, options))
      out.push_back({ViolationKind::bad_value, p.name, version_of(p), "Package", "invalid package name"});
    if (!is_subtype_value(p.depends, TypeKind::vpkgformula, options))
      out.push_back({ViolationKind::bad_value, p.name, version_of(p), "Depends", "malformed formula"});
    if (!is_subtype_value(p.conflicts, TypeKind::vpkglist, options))
      out.push_back({ViolationKind::bad_value, p.name, version_of(p), "Conflicts", "malformed package list"});
    if (!is_subtype_value(p.provides, TypeKind::veqpkglist, options))
      out.push_back({ViolationKind::bad_value, p.name, version_of(p), "Provides",
                     "provided features must be unversioned or use '='"});
    check_extras(p.extra, ItemKind::package, registry, options, p.name, p.version, out);
  }

  const RequestItem& r = doc.request;
  if (!is_subtype_value(r.problem_id, TypeKind::oneliner))
    out.push_back({ViolationKind::bad_value, "", std::nullopt, "Problem", "identifier contains a newline"});
  for (const auto& [name, list] : {std::pair{"Install", &r.install}, {"Remove", &r.remove}, {"Upgrade", &r.upgrade}}) {
    if (!is_subtype_value(*list, TypeKind::vpkglist, options))
      out.push_back({ViolationKind::bad_value, "", std::nullopt, name, "malformed package list"});
  }
  check_extras(r.extra, ItemKind::problem, registry, options, "", std::nullopt, out);
  return out;
}

void apply_extra_defaults(ExtraProperties& extra, ItemKind item, const SchemaRegistry& registry) {
  for (const auto& schema : registry.extra_schemas(item)) {
    if (extra.contains(schema.name)) continue;
    if (schema.default_value)
      extra.emplace(schema.name, PropertyValue(*schema.default_value));
    else if (schema.optionality == Optionality::optional)
      extra.emplace(schema.name, PropertyValue(NoneValue{}));
  }
}

}  // namespace cudf
