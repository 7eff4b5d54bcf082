#include <gtest/gtest.h>

#include <expat.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cudf/dudf.hpp"
#include "cudf/semantics.hpp"
#include "cudf/text_io.hpp"
#include "support/generators.hpp"

using namespace cudf;
using namespace cudf::dudf;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::filesystem::path(CUDF_TEST_DATA) / "dudf" / name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DudfDocument minimal() {
  DudfDocument d;
  d.timestamp = "Tue, 15 Jan 2008 10:03:00 +0100";
  d.uid = "u-1";
  d.distribution = "debian";
  d.installer = {"dpkg", "1.14"};
  d.meta_installer = {"apt-get", "0.7"};
  d.problem.package_status.installer = Extensional{"Package: aa\nVersion: 1\n"};
  d.problem.package_universe.push_back({"deb", std::nullopt, Intensional{"md5:abc"}});
  d.problem.action = Extensional{"install bb"};
  return d;
}

// Collects (element or attribute, namespace) pairs straight from expat.
struct Names {
  std::vector<std::string> elements;
  std::vector<std::string> attributes;
};

Names expat_names(const std::string& xml) {
  Names names;
  XML_Parser p = XML_ParserCreateNS(nullptr, '|');
  XML_SetUserData(p, &names);
  XML_SetStartElementHandler(p, [](void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* n = static_cast<Names*>(data);
    n->elements.emplace_back(name);
    for (int i = 0; attrs[i]; i += 2) n->attributes.emplace_back(attrs[i]);
  });
  EXPECT_EQ(XML_Parse(p, xml.data(), static_cast<int>(xml.size()), 1), XML_STATUS_OK);
  XML_ParserFree(p);
  return names;
}

}  // namespace

TEST(DudfModel, SubmissionKind) {
  DudfDocument d = minimal();
  EXPECT_EQ(submission_kind(d), SubmissionKind::sole_problem);
  d.outcome = DudfOutcome{Result::failure, Extensional{"E: broken"}, std::nullopt};
  EXPECT_EQ(submission_kind(d), SubmissionKind::problem_outcome);
}

TEST(DudfValidate, MinimalIsClean) { EXPECT_TRUE(validate_dudf(minimal(), {true}).empty()); }

TEST(DudfValidate, SideConditions) {
  DudfDocument d = minimal();
  d.version = "2.0";
  d.timestamp = "yesterday";
  d.uid.clear();
  auto v = validate_dudf(d);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].code, "version");
  EXPECT_EQ(v[1].code, "timestamp");
  EXPECT_EQ(v[2].code, "uid");
  EXPECT_THROW(dudf_to_xml(d), InvalidDocument);
}

TEST(DudfValidate, TwoDigitYearIsAWarning) {
  DudfDocument d = minimal();
  d.timestamp = "15 Jan 08 10:03 GMT";
  auto v = validate_dudf(d);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].severity, Severity::warning);
  EXPECT_NO_THROW(dudf_to_xml(d));
}

TEST(DudfValidate, EmptyUniverseOnlyInStrictMode) {
  DudfDocument d = minimal();
  d.problem.package_universe.clear();
  EXPECT_TRUE(validate_dudf(d).empty());
  ASSERT_EQ(validate_dudf(d, {true}).size(), 1u);
  EXPECT_EQ(validate_dudf(d, {true})[0].code, "universe");
}

TEST(DudfValidate, OutcomeShape) {
  DudfDocument d = minimal();
  d.outcome = DudfOutcome{Result::failure, std::nullopt, std::nullopt};
  EXPECT_EQ(validate_dudf(d).at(0).code, "outcome");
  d.outcome = DudfOutcome{Result::success, Extensional{"x"}, PackageStatus{Extensional{""}, std::nullopt}};
  EXPECT_EQ(validate_dudf(d).at(0).code, "outcome");
}

TEST(DudfValidate, UnrepresentableCharacters) {
  DudfDocument d = minimal();
  d.problem.action = Extensional{std::string("bad\x01", 4)};
  EXPECT_EQ(validate_dudf(d).at(0).code, "character");
}

TEST(DudfXml, AttributesAreNamespaceQualified) {
  DudfDocument d = minimal();
  d.problem.package_universe[0].filename = "/var/lib/x";
  d.outcome = DudfOutcome{Result::failure, Extensional{"E"}, std::nullopt};
  Names n = expat_names(dudf_to_xml(d));
  const std::string ns(namespace_uri);
  EXPECT_EQ(n.elements.front(), ns + "|dudf");
  for (const auto& e : n.elements) EXPECT_EQ(e.rfind(ns + "|", 0), 0u) << e;
  for (const auto& a : n.attributes) EXPECT_EQ(a.rfind(ns + "|", 0), 0u) << a;
  for (const char* a : {"version", "format", "filename", "reference", "result"})
    EXPECT_NE(std::find(n.attributes.begin(), n.attributes.end(), ns + "|" + a), n.attributes.end()) << a;
}

TEST(DudfXml, CarriageReturnsSurvive) {
  DudfDocument d = minimal();
  d.problem.action = Extensional{"line one\r\nline\ttwo\r\n"};
  d.problem.package_universe[0].filename = "tab\there\nand \"quote\"";
  EXPECT_EQ(xml_to_dudf(dudf_to_xml(d)), d);
}

TEST(DudfXml, RandomRoundTrips) {
  gen::Rng rng(2008);
  for (int i = 0; i < 200; ++i) {
    DudfDocument d = gen::dudf_document(rng);
    std::string xml = dudf_to_xml(d);
    EXPECT_EQ(xml_to_dudf(xml, {true}), d) << xml;
  }
}

TEST(DudfXml, ValidPairFixture) {
  CheckReport r = check_dudf_xml(slurp("valid_pair.xml"), true);
  EXPECT_TRUE(r.ok());
  ASSERT_TRUE(r.document);
  EXPECT_EQ(submission_kind(*r.document), SubmissionKind::problem_outcome);
  EXPECT_EQ(r.document->problem.package_universe[0].payload, HolePayload(Intensional{"md5:0123456789abcdef"}));
  EXPECT_EQ(r.document->problem.package_universe[0].format, "deb-packages-822");
}

struct BrokenCase {
  const char* file;
  const char* path;
  const char* code;
};

class DudfBroken : public ::testing::TestWithParam<BrokenCase> {};

TEST_P(DudfBroken, ReportsOneErrorAtPath) {
  CheckReport r = check_dudf_xml(slurp(GetParam().file), true);
  EXPECT_FALSE(r.ok());
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].path, GetParam().path);
  EXPECT_EQ(r.violations[0].code, GetParam().code);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, DudfBroken,
                         ::testing::Values(BrokenCase{"wrong_namespace.xml", "/", "schema"},
                                           BrokenCase{"missing_uid.xml", "/dudf/uid", "schema"},
                                           BrokenCase{"bad_timestamp.xml", "/dudf/timestamp", "timestamp"},
                                           BrokenCase{"failure_with_status.xml", "/dudf/outcome/package-status",
                                                      "schema"}),
                         [](const ::testing::TestParamInfo<BrokenCase>& info) {
                           std::string n = info.param.file;
                           return n.substr(0, n.find('.'));
                         });

TEST(DudfXml, StrictRejectsForeignContentLenientSkipsIt) {
  std::string xml = dudf_to_xml(minimal());
  std::string foreign = xml;
  foreign.replace(foreign.find("<uid>"), 5, "<x:note xmlns:x=\"urn:x\">hi</x:note>\n  <uid>");
  EXPECT_THROW(xml_to_dudf(foreign, {true}), SchemaViolation);
  EXPECT_EQ(xml_to_dudf(foreign, {false}), minimal());
}

TEST(DudfXml, MalformedXml) {
  EXPECT_THROW(xml_to_dudf("<dudf"), SchemaViolation);
  EXPECT_FALSE(check_dudf_xml("not xml").ok());
}

TEST(ToyConvert, ConvertibleFixture) {
  DudfDocument d = xml_to_dudf(slurp("convertible.xml"), {true});
  CudfDocument doc = toy_convert(d);
  EXPECT_EQ(doc.request.problem_id, "toy-0002");
  EXPECT_EQ(doc.packages.size(), 4u);
  EXPECT_TRUE(lookup(doc, "car", Version(1))->installed);
  EXPECT_FALSE(lookup(doc, "car", Version(2))->installed);
  EXPECT_EQ(doc.request.upgrade.size(), 1u);
  std::string text = serialize_cudf(doc);
  ParseReport back = parse_cudf(text);
  EXPECT_TRUE(back.recovered_errors.empty());
  EXPECT_EQ(*back.document, doc);
}

TEST(ToyConvert, Refusals) {
  DudfDocument d = xml_to_dudf(slurp("valid_pair.xml"));
  EXPECT_THROW(toy_convert(d), ConversionError);
  DudfDocument c = xml_to_dudf(slurp("convertible.xml"));
  EXPECT_THROW(toy_convert(c, "deb"), UnsupportedFormat);
  c.problem.action = Intensional{"md5:x"};
  EXPECT_THROW(toy_convert(c), IntensionalHole);
}
