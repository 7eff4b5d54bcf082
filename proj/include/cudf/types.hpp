#pragma once

// CUDF value spaces, lexical spaces and the subtyping lattice between them.

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cudf {

/// Unbounded integer; CUDF `int` has no fixed width.
using Integer = boost::multiprecision::cpp_int;

/// A package version: a positive integer of arbitrary size.
class Version {
public:
  Version() : value_(1) {}
  explicit Version(Integer value);
  explicit Version(long long value) : Version(Integer(value)) {}

  const Integer& value() const noexcept { return value_; }
  std::string to_string() const { return value_.str(); }

  friend bool operator==(const Version& a, const Version& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Version& a, const Version& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

private:
  Integer value_;
};

enum class Relop { eq, neq, gt, geq, lt, leq };

std::string_view to_string(Relop op) noexcept;

struct VersionConstraint {
  Relop relop = Relop::eq;
  Version version;

  friend bool operator==(const VersionConstraint&, const VersionConstraint&) = default;
};

/// Versioned package name. An empty constraint is the unconstrained predicate (top).
struct VPkg {
  std::string name;
  std::optional<VersionConstraint> constraint;

  friend bool operator==(const VPkg&, const VPkg&) = default;
};

using Disjunction = std::vector<VPkg>;
using VpkgList = std::vector<VPkg>;

/// CNF formula over versioned package names. The empty conjunction is `true`.
struct VpkgFormula {
  std::vector<Disjunction> conjuncts;

  bool is_true() const noexcept { return conjuncts.empty(); }
  static VpkgFormula truth() { return {}; }

  friend bool operator==(const VpkgFormula&, const VpkgFormula&) = default;
};

struct EnumValue {
  std::string symbol;

  friend bool operator==(const EnumValue&, const EnumValue&) = default;
};

/// An element of the union of all CUDF value spaces. Which types a value
/// belongs to is decided by is_subtype_value, not by the alternative alone.
using TypedValue =
    std::variant<bool, Integer, std::string, EnumValue, VPkg, VpkgFormula, VpkgList>;

enum class TypeKind {
  boolean,
  integer,
  natural,
  posint,
  string,
  oneliner,
  pkgname,
  enumeration,
  vpkg,
  veqpkg,
  vpkgformula,
  vpkglist,
  veqpkglist,
};

/// A CUDF type identifier. Enumerations carry their symbol set.
struct TypeId {
  TypeKind kind = TypeKind::string;
  std::vector<std::string> symbols;

  TypeId() = default;
  TypeId(TypeKind k) : kind(k) {}  // NOLINT(google-explicit-constructor)
  static TypeId enumeration(std::vector<std::string> symbols);

  /// Parses "int", "posint", "enum(a,b,c)" and so on. Throws UnknownType.
  static TypeId parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const TypeId&, const TypeId&) = default;
};

class UnknownType : public std::invalid_argument {
public:
  explicit UnknownType(const std::string& name)
      : std::invalid_argument("unknown CUDF type '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

class LexicalError : public std::runtime_error {
public:
  LexicalError(TypeId type, std::size_t position, std::string reason);

  const TypeId& type() const noexcept { return type_; }
  std::size_t position() const noexcept { return position_; }
  const std::string& reason() const noexcept { return reason_; }

private:
  TypeId type_;
  std::size_t position_;
  std::string reason_;
};

struct TypeOptions {
  /// Accept uppercase letters after the first character of package names.
  bool lenient_names = false;
};

bool is_identifier(std::string_view s) noexcept;
bool is_pkgname(std::string_view s, const TypeOptions& options = {}) noexcept;

TypedValue parse_value(const TypeId& type, std::string_view lexical,
                       const TypeOptions& options = {});

/// Canonical lexical form. The `true` formula has no lexical form and throws
/// std::invalid_argument; documents express it by omitting the property.
std::string serialize_value(const TypedValue& value);

bool is_subtype_value(const TypedValue& value, const TypeId& target,
                      const TypeOptions& options = {});
bool is_subtype_value(const TypedValue& value, std::string_view target,
                      const TypeOptions& options = {});

/// True iff sub <: super in the subtyping lattice (reflexive, transitive).
bool is_subtype(const TypeId& sub, const TypeId& super);

/// The immediate supertype, if any.
std::optional<TypeId> direct_supertype(const TypeId& type);

}  // namespace cudf
