#include "cudf/dudf.hpp"
#include "cudf/text_io.hpp"

namespace cudf::dudf {

namespace {

const std::string& extensional(const HolePayload& hole, const std::string& path) {
  if (const auto* e = std::get_if<Extensional>(&hole)) return e->text;
  throw IntensionalHole(path);
}

std::vector<PackageItem> stanzas(const std::string& text, const std::string& path, const SchemaRegistry& registry) {
  PackageStanzas parsed = parse_package_stanzas(text, registry);
  if (!parsed.recovered_errors.empty()) {
    const auto& e = parsed.recovered_errors.front();
    throw ConversionError(path + ": line " + std::to_string(e.line) + ": " + e.reason);
  }
  return std::move(parsed.packages);
}

}  // namespace

CudfDocument toy_convert(const DudfDocument& doc, std::string_view universe_format, const SchemaRegistry& registry) {
  if (universe_format != cudf_stanzas_format) throw UnsupportedFormat(std::string(universe_format));

  CudfDocument out;
  const std::string status_path = "/dudf/problem/package-status/installer";
  for (auto& p : stanzas(extensional(doc.problem.package_status.installer, status_path), status_path, registry)) {
    p.installed = true;
    out.packages.push_back(std::move(p));
  }

  for (std::size_t i = 0; i < doc.problem.package_universe.size(); ++i) {
    const PackageList& list = doc.problem.package_universe[i];
    std::string path = "/dudf/problem/package-universe/package-list[" + std::to_string(i + 1) + "]";
    if (list.format != universe_format) throw UnsupportedFormat(list.format);
    for (auto& p : stanzas(extensional(list.payload, path), path, registry)) out.packages.push_back(std::move(p));
  }

  const std::string action_path = "/dudf/problem/action";
  const std::string& action = extensional(doc.problem.action, action_path);
  if (doc.uid.find('\n') != std::string::npos) throw ConversionError("uid cannot be used as a problem identifier");
  ParseReport request = parse_cudf("Problem: " + doc.uid + "\n" + action, registry);
  if (request.fatal) throw ConversionError(action_path + ": " + request.fatal->message);
  if (!request.recovered_errors.empty())
    throw ConversionError(action_path + ": " + request.recovered_errors.front().reason);
  if (!request.document->packages.empty()) throw ConversionError(action_path + ": package stanza in the action hole");
  out.request = std::move(request.document->request);

  auto violations = validate_document(out, registry);
  if (!violations.empty()) throw InvalidDocument(violations.front().to_string());
  return out;
}

}  // namespace cudf::dudf
