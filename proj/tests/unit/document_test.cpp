#include <gtest/gtest.h>

#include "cudf/document.hpp"

using namespace cudf;

namespace {

PackageItem pkg(std::string name, long long version) {
  PackageItem p;
  p.name = std::move(name);
  p.version = Version(version);
  return p;
}

}  // namespace

TEST(SchemaRegistry, CoreSchemata) {
  SchemaRegistry r = SchemaRegistry::core();
  const PropertySchema* depends = r.find(ItemKind::package, "Depends");
  ASSERT_NE(depends, nullptr);
  EXPECT_EQ(depends->type.kind, TypeKind::vpkgformula);
  EXPECT_EQ(depends->default_value, TypedValue(VpkgFormula::truth()));

  const PropertySchema* version = r.find(ItemKind::package, "Version");
  ASSERT_NE(version, nullptr);
  EXPECT_EQ(version->optionality, Optionality::required);

  const PropertySchema* keep = r.find(ItemKind::package, "Keep");
  ASSERT_NE(keep, nullptr);
  EXPECT_FALSE(keep->default_value.has_value());

  EXPECT_NE(r.find(ItemKind::problem, "Upgrade"), nullptr);
  EXPECT_EQ(r.find(ItemKind::problem, "Depends"), nullptr);
}

TEST(SchemaRegistry, RegistersCost) {
  SchemaRegistry r = register_extra_schema(SchemaRegistry::core(), cost_schema());
  const PropertySchema* cost = r.find(ItemKind::package, "Cost");
  ASSERT_NE(cost, nullptr);
  EXPECT_EQ(cost->type.kind, TypeKind::integer);
  EXPECT_EQ(cost->default_value, TypedValue(Integer(0)));
}

TEST(SchemaRegistry, RejectsCollisionsAndBadSchemata) {
  SchemaRegistry core = SchemaRegistry::core();
  EXPECT_THROW(register_extra_schema(core, {"Depends", TypeKind::string, ItemKind::package, Optionality::optional,
                                            std::nullopt}),
               NameCollision);
  SchemaRegistry once = register_extra_schema(core, cost_schema());
  EXPECT_THROW(register_extra_schema(once, cost_schema()), NameCollision);
  EXPECT_THROW(register_extra_schema(core, {"Bad Name", TypeKind::string, ItemKind::package, Optionality::optional,
                                            std::nullopt}),
               InvalidSchema);
  EXPECT_THROW(register_extra_schema(core, {"Size", TypeKind::posint, ItemKind::package, Optionality::required,
                                            TypedValue(Integer(1))}),
               InvalidSchema);
  EXPECT_THROW(register_extra_schema(core, {"Size", TypeKind::posint, ItemKind::package, Optionality::optional,
                                            TypedValue(Integer(0))}),
               InvalidSchema);
}

TEST(Document, LookupAndRemove) {
  CudfDocument doc;
  doc.packages = {pkg("aa", 1), pkg("aa", 2), pkg("bb", 1)};
  ASSERT_NE(lookup(doc, "aa", Version(2)), nullptr);
  EXPECT_EQ(lookup(doc, "aa", Version(3)), nullptr);
  CudfDocument smaller = remove_package(doc, "aa", Version(1));
  EXPECT_EQ(smaller.packages.size(), 2u);
  EXPECT_EQ(lookup(smaller, "aa", Version(1)), nullptr);
  EXPECT_EQ(remove_package(doc, "zz", Version(1)), doc);
}

TEST(Validate, DuplicateKeyReportedOnce) {
  CudfDocument doc;
  doc.packages = {pkg("aa", 1), pkg("aa", 1), pkg("aa", 1)};
  auto v = validate_document(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::duplicate_key);
}

TEST(Validate, ProvidesMustBeEqualityOnly) {
  CudfDocument doc;
  doc.packages = {pkg("aa", 1)};
  doc.packages[0].provides = {VPkg{"feat", VersionConstraint{Relop::geq, Version(2)}}};
  auto v = validate_document(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].property, "Provides");
}

TEST(Validate, ExtraPropertiesAgainstSchemata) {
  SchemaRegistry r = register_extra_schema(
      SchemaRegistry::core(),
      {"Installed-Size", TypeKind::posint, ItemKind::package, Optionality::required, std::nullopt});
  CudfDocument doc;
  doc.packages = {pkg("aa", 1), pkg("bb", 1), pkg("cc", 1)};
  doc.packages[0].extra["Installed-Size"] = TypedValue(Integer(10));
  doc.packages[1].extra["Installed-Size"] = TypedValue(Integer(0));
  auto v = validate_document(doc, r);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].kind, ViolationKind::bad_value);
  EXPECT_EQ(v[0].package, "bb");
  EXPECT_EQ(v[1].kind, ViolationKind::missing_required);
  EXPECT_EQ(v[1].package, "cc");
}

TEST(Validate, ProblemIdentifierIsOneLine) {
  CudfDocument doc;
  doc.request.problem_id = "two\nlines";
  EXPECT_EQ(validate_document(doc).size(), 1u);
}

TEST(ExtraDefaults, FillsDefaultsAndNone) {
  SchemaRegistry r = register_extra_schema(SchemaRegistry::core(), cost_schema());
  r = register_extra_schema(r, {"Note", TypeKind::string, ItemKind::package, Optionality::optional, std::nullopt});
  ExtraProperties extra;
  apply_extra_defaults(extra, ItemKind::package, r);
  EXPECT_EQ(extra.at("Cost"), PropertyValue(TypedValue(Integer(0))));
  EXPECT_EQ(extra.at("Note"), PropertyValue(NoneValue{}));
}

TEST(Keep, Symbols) {
  EXPECT_EQ(keep_from_symbol("feature"), Keep::feature);
  EXPECT_EQ(keep_from_symbol("all"), std::nullopt);
  EXPECT_EQ(to_string(Keep::package), "package");
}
