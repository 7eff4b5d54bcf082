#pragma once

// CUDF documents as information items: package descriptions, the request,
// property schemata and the package/version key constraint.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cudf/types.hpp"

namespace cudf {

enum class ItemKind { package, problem };
enum class Optionality { required, optional };

struct PropertySchema {
  std::string name;
  TypeId type;
  ItemKind item = ItemKind::package;
  Optionality optionality = Optionality::optional;
  std::optional<TypedValue> default_value;
};

/// Marks an optional property that was absent and has no default.
struct NoneValue {
  friend bool operator==(const NoneValue&, const NoneValue&) = default;
};

/// An extra property with no known schema; kept verbatim and never interpreted.
struct RawValue {
  std::string text;
  friend bool operator==(const RawValue&, const RawValue&) = default;
};

using PropertyValue = std::variant<NoneValue, TypedValue, RawValue>;
using ExtraProperties = std::map<std::string, PropertyValue>;

enum class Keep { version, package, feature };

std::string_view to_string(Keep keep) noexcept;
std::optional<Keep> keep_from_symbol(std::string_view symbol) noexcept;

struct PackageItem {
  std::string name;
  Version version;
  VpkgFormula depends;
  VpkgList conflicts;
  VpkgList provides;
  bool installed = false;
  std::optional<Keep> keep;
  ExtraProperties extra;

  friend bool operator==(const PackageItem&, const PackageItem&) = default;
};

struct RequestItem {
  std::string problem_id;
  VpkgList install;
  VpkgList remove;
  VpkgList upgrade;
  ExtraProperties extra;

  friend bool operator==(const RequestItem&, const RequestItem&) = default;
};

struct CudfDocument {
  std::vector<PackageItem> packages;
  RequestItem request;

  friend bool operator==(const CudfDocument&, const CudfDocument&) = default;
};

class NameCollision : public std::invalid_argument {
public:
  explicit NameCollision(const std::string& name)
      : std::invalid_argument("property name '" + name + "' collides with a core or registered property"),
        name_(name) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

class InvalidSchema : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Core schemata plus any registered extra properties. Values are immutable;
/// registering returns a new registry.
class SchemaRegistry {
public:
  /// The core property set only.
  static SchemaRegistry core();

  const PropertySchema* find(ItemKind item, std::string_view name) const;
  const std::vector<PropertySchema>& core_schemas() const noexcept { return core_; }
  const std::vector<PropertySchema>& extra_schemas() const noexcept { return extra_; }
  std::vector<PropertySchema> extra_schemas(ItemKind item) const;

  static bool is_core_name(std::string_view name) noexcept;

  friend SchemaRegistry register_extra_schema(const SchemaRegistry& registry, PropertySchema schema);

private:
  std::vector<PropertySchema> core_;
  std::vector<PropertySchema> extra_;
};

/// Throws NameCollision for core or already-registered names and InvalidSchema
/// when the default is inconsistent with the schema.
SchemaRegistry register_extra_schema(const SchemaRegistry& registry, PropertySchema schema);

/// The `Cost` property: optional int with default 0.
PropertySchema cost_schema(std::string name = "Cost");

/// Finds the package with the given key, or nullptr.
const PackageItem* lookup(const CudfDocument& doc, std::string_view name, const Version& version);

CudfDocument remove_package(const CudfDocument& doc, std::string_view name, const Version& version);

enum class ViolationKind { duplicate_key, bad_value, missing_required, unknown_property };

struct DocumentViolation {
  ViolationKind kind;
  std::string package;
  std::optional<Version> version;
  std::string property;
  std::string reason;

  std::string to_string() const;
};

std::vector<DocumentViolation> validate_document(const CudfDocument& doc,
                                                 const SchemaRegistry& registry = SchemaRegistry::core(),
                                                 const TypeOptions& options = {});

/// Fills registered extra properties that are missing with their default or None.
void apply_extra_defaults(ExtraProperties& extra, ItemKind item, const SchemaRegistry& registry);

}  // namespace cudf
