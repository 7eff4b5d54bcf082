#include <algorithm>

#include "cudf/dudf.hpp"
#include "cudf/rfc822.hpp"
#include "cudf/utf8.hpp"

namespace cudf::dudf {

std::string_view to_string(Result r) noexcept { return r == Result::success ? "success" : "failure"; }

SubmissionKind submission_kind(const DudfDocument& doc) noexcept {
  return doc.outcome ? SubmissionKind::problem_outcome : SubmissionKind::sole_problem;
}

SchemaViolation::SchemaViolation(std::string path, std::string reason)
    : std::runtime_error(path + ": " + reason), path_(std::move(path)), reason_(std::move(reason)) {}

bool CheckReport::ok() const noexcept {
  return document && std::none_of(violations.begin(), violations.end(),
                                  [](const Violation& v) { return v.severity == Severity::error; });
}

namespace {

// Offset of the first character XML 1.0 cannot carry, if any.
std::optional<std::size_t> unrepresentable(std::string_view s) {
  if (auto bad = find_invalid_utf8(s)) return bad;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x20 && c != '\t' && c != '\n' && c != '\r') return i;
    // U+FFFE and U+FFFF
    if (c == 0xEF && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xBF &&
        (static_cast<unsigned char>(s[i + 2]) & 0xFE) == 0xBE)
      return i;
  }
  return std::nullopt;
}

class Checker {
public:
  explicit Checker(std::vector<Violation>& out) : out_(out) {}

  void text(const std::string& path, std::string_view s) {
    if (auto at = unrepresentable(s))
      out_.push_back({Severity::error, path, "character",
                      "character at byte " + std::to_string(*at) + " cannot be written in XML"});
  }

  void hole(const std::string& path, const HolePayload& h) {
    if (const auto* e = std::get_if<Extensional>(&h))
      text(path, e->text);
    else
      text(path + "/@reference", std::get<Intensional>(h).reference);
  }

  void status(const std::string& path, const PackageStatus& s) {
    hole(path + "/installer", s.installer);
    if (s.meta_installer) hole(path + "/meta-installer", *s.meta_installer);
  }

private:
  std::vector<Violation>& out_;
};

}  // namespace

std::vector<Violation> validate_dudf(const DudfDocument& doc, const ValidateOptions& options) {
  std::vector<Violation> out;
  Checker check(out);

  if (doc.version != "1.0")
    out.push_back({Severity::error, "/dudf/@version", "version", "version must be 1.0, got '" + doc.version + "'"});

  if (auto date = parse_rfc822_date(doc.timestamp); !date) {
    out.push_back({Severity::error, "/dudf/timestamp", "timestamp", "'" + doc.timestamp + "' is not an RFC822 date"});
  } else if (date->two_digit_year) {
    out.push_back({Severity::warning, "/dudf/timestamp", "timestamp", "two-digit year"});
  }

  if (doc.uid.empty()) out.push_back({Severity::error, "/dudf/uid", "uid", "uid must not be empty"});

  check.text("/dudf/@version", doc.version);
  check.text("/dudf/timestamp", doc.timestamp);
  check.text("/dudf/uid", doc.uid);
  check.text("/dudf/distribution", doc.distribution);
  check.text("/dudf/installer/name", doc.installer.name);
  check.text("/dudf/installer/version", doc.installer.version);
  check.text("/dudf/meta-installer/name", doc.meta_installer.name);
  check.text("/dudf/meta-installer/version", doc.meta_installer.version);

  const DudfProblem& p = doc.problem;
  check.status("/dudf/problem/package-status", p.package_status);
  if (p.package_universe.empty() && options.strict)
    out.push_back({Severity::error, "/dudf/problem/package-universe", "universe", "package universe is empty"});
  for (std::size_t i = 0; i < p.package_universe.size(); ++i) {
    const PackageList& list = p.package_universe[i];
    std::string path = "/dudf/problem/package-universe/package-list[" + std::to_string(i + 1) + "]";
    if (list.format.empty()) out.push_back({Severity::error, path + "/@format", "format", "format must not be empty"});
    check.text(path + "/@format", list.format);
    if (list.filename) check.text(path + "/@filename", *list.filename);
    check.hole(path, list.payload);
  }
  check.hole("/dudf/problem/action", p.action);
  if (p.desiderata) check.hole("/dudf/problem/desiderata", *p.desiderata);

  if (doc.outcome) {
    const DudfOutcome& o = *doc.outcome;
    if (o.result == Result::failure) {
      if (!o.error) out.push_back({Severity::error, "/dudf/outcome/error", "outcome", "failure outcome without error"});
      if (o.status)
        out.push_back({Severity::error, "/dudf/outcome/package-status", "outcome",
                       "failure outcome must not carry a package status"});
    } else {
      if (!o.status)
        out.push_back({Severity::error, "/dudf/outcome/package-status", "outcome",
                       "success outcome without package status"});
      if (o.error)
        out.push_back({Severity::error, "/dudf/outcome/error", "outcome", "success outcome must not carry an error"});
    }
    if (o.error) check.hole("/dudf/outcome/error", *o.error);
    if (o.status) check.status("/dudf/outcome/package-status", *o.status);
  }
  return out;
}

}  // namespace cudf::dudf
