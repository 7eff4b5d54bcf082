#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cudf/text_io.hpp"
#include "support/generators.hpp"

using namespace cudf;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::filesystem::path golden = std::filesystem::path(CUDF_TEST_DATA) / "golden";

}  // namespace

TEST(SplitStanzas, PostmarksBlankLinesAndCrlf) {
  auto s = split_stanzas("Package: aa\r\nVersion: 1\r\n\r\n\r\nPackage: bb\nVersion: 2\nProblem: x\nInstall: aa\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].kind, StanzaKind::package);
  ASSERT_EQ(s[0].fields.size(), 2u);
  EXPECT_EQ(s[0].fields[1].value, "1");
  EXPECT_EQ(s[1].fields[0].value, "bb");
  EXPECT_EQ(s[2].kind, StanzaKind::problem);
  EXPECT_EQ(s[2].postmark_value, "x");
  EXPECT_EQ(s[2].fields[0].line, 8u);
}

TEST(SplitStanzas, SplitsAtFirstSeparatorOnly) {
  auto s = split_stanzas("Package: aa\nDescription: a: b: c\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].fields[1].value, "a: b: c");
}

TEST(SplitStanzas, PreambleIsAnError) {
  auto s = split_stanzas("junk: here\nPackage: aa\nVersion: 1\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].kind, StanzaKind::preamble);
  EXPECT_TRUE(s[0].error.has_value());
}

TEST(ParseCudf, Mta) {
  CudfDocument doc = read_cudf(slurp(golden / "mta.cudf"));
  ASSERT_EQ(doc.packages.size(), 3u);
  EXPECT_EQ(doc.request.problem_id, "mta-switch");
  EXPECT_TRUE(doc.packages[0].installed);
  EXPECT_FALSE(doc.packages[1].installed);
  EXPECT_EQ(doc.request.install.size(), 1u);
}

TEST(ParseCudf, RecoversFromBadPackageStanza) {
  ParseReport r = parse_cudf(slurp(golden / "recovery.cudf"));
  ASSERT_TRUE(r.document);
  EXPECT_EQ(r.document->packages.size(), 2u);
  ASSERT_EQ(r.recovered_errors.size(), 1u);
  EXPECT_EQ(r.recovered_errors[0].stanza_index, 1u);
  EXPECT_EQ(r.recovered_errors[0].line, 6u);
}

TEST(ParseCudf, FatalErrors) {
  EXPECT_EQ(parse_cudf("Package: aa\nVersion: 1\n").fatal->kind, FatalKind::no_problem_stanza);
  EXPECT_EQ(parse_cudf("Problem: a\n\nProblem: b\n").fatal->kind, FatalKind::multiple_problem_stanzas);
  EXPECT_EQ(parse_cudf("Problem: \xC3\x28\n").fatal->kind, FatalKind::encoding);
  EXPECT_THROW(read_cudf("Package: aa\nVersion: 1\n"), ParseFailure);
}

TEST(ParseCudf, MissingVersionIsRecovered) {
  ParseReport r = parse_cudf("Package: aa\nInstalled: true\n\nProblem: p\n");
  ASSERT_TRUE(r.document);
  EXPECT_TRUE(r.document->packages.empty());
  EXPECT_EQ(r.recovered_errors.size(), 1u);
}

TEST(ParseCudf, UnknownPropertyKeptRawOrDropped) {
  const char* text = "Package: aa\nVersion: 1\nColour: blue\n\nProblem: p\n";
  CudfDocument lenient = read_cudf(text);
  EXPECT_EQ(lenient.packages[0].extra.at("Colour"), PropertyValue(RawValue{"blue"}));
  ParseReport strict = parse_cudf(text, SchemaRegistry::core(), ParseOptions{true, {}});
  EXPECT_TRUE(strict.document->packages[0].extra.empty());
  EXPECT_FALSE(strict.warnings.empty());
}

TEST(ParseCudf, RegisteredExtrasAreTypedAndDefaulted) {
  SchemaRegistry r = register_extra_schema(SchemaRegistry::core(), cost_schema());
  CudfDocument doc = read_cudf("Package: aa\nVersion: 1\nCost: -4\n\nPackage: bb\nVersion: 1\n\nProblem: p\n", r);
  EXPECT_EQ(doc.packages[0].extra.at("Cost"), PropertyValue(TypedValue(Integer(-4))));
  EXPECT_EQ(doc.packages[1].extra.at("Cost"), PropertyValue(TypedValue(Integer(0))));
  ParseReport bad = parse_cudf("Package: aa\nVersion: 1\nCost: cheap\n\nProblem: p\n", r);
  EXPECT_EQ(bad.recovered_errors.size(), 1u);
}

TEST(ParseCudf, KeepSymbols) {
  CudfDocument doc = read_cudf("Package: aa\nVersion: 1\nKeep: feature\n\nProblem: p\n");
  EXPECT_EQ(doc.packages[0].keep, Keep::feature);
  EXPECT_EQ(parse_cudf("Package: aa\nVersion: 1\nKeep: all\n\nProblem: p\n").recovered_errors.size(), 1u);
}

TEST(ParsePackageStanzas, ProblemStanzaIsAnError) {
  PackageStanzas s = parse_package_stanzas("Package: aa\nVersion: 1\n\nProblem: p\n");
  EXPECT_EQ(s.packages.size(), 1u);
  ASSERT_EQ(s.recovered_errors.size(), 1u);
  EXPECT_EQ(s.recovered_errors[0].reason, "unexpected problem stanza");
}

TEST(Serialize, RejectsInvalidDocuments) {
  CudfDocument doc;
  doc.packages.resize(2);
  doc.packages[0].name = doc.packages[1].name = "aa";
  EXPECT_THROW(serialize_cudf(doc), InvalidDocument);
}

TEST(Serialize, NonCanonicalKeepsDefaults) {
  SchemaRegistry r = register_extra_schema(SchemaRegistry::core(), cost_schema());
  CudfDocument doc = read_cudf("Package: aa\nVersion: 1\n\nProblem: p\n", r);
  EXPECT_EQ(serialize_cudf(doc, r).find("Cost"), std::string::npos);
  EXPECT_NE(serialize_cudf(doc, r, SerializeOptions{false}).find("Cost: 0"), std::string::npos);
}

class Golden : public ::testing::TestWithParam<std::string> {};

TEST_P(Golden, FormatsToExpectedAndIsIdempotent) {
  std::string input = slurp(golden / (GetParam() + ".cudf"));
  std::string expected = slurp(golden / (GetParam() + ".expected"));
  std::string once = serialize_cudf(read_cudf(input));
  EXPECT_EQ(once, expected);
  EXPECT_EQ(serialize_cudf(read_cudf(once)), once);
}

INSTANTIATE_TEST_SUITE_P(Corpus, Golden,
                         ::testing::Values("mta", "car_glass", "install_chain", "upgrade", "keep", "messy", "recovery"));

TEST(RoundTrip, RandomDocuments) {
  gen::Rng rng(7001);
  SchemaRegistry r = gen::roundtrip_registry();
  for (int i = 0; i < 200; ++i) {
    CudfDocument doc = gen::document(rng, r);
    std::string text = serialize_cudf(doc, r);
    ParseReport back = parse_cudf(text, r);
    ASSERT_TRUE(back.document) << text;
    EXPECT_TRUE(back.recovered_errors.empty()) << text;
    EXPECT_EQ(*back.document, doc) << text;
    EXPECT_EQ(serialize_cudf(*back.document, r), text);
  }
}
