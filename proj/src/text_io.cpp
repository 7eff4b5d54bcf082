#include "cudf/text_io.hpp"

#include <set>
#include <sstream>

#include "cudf/utf8.hpp"

namespace cudf {

namespace {

constexpr std::string_view kPackagePostmark = "Package: ";
constexpr std::string_view kProblemPostmark = "Problem: ";

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

// Accepts "Package: x" and, for an empty value, a bare "Package:".
std::optional<std::string_view> postmark_value(std::string_view line, std::string_view postmark) {
  if (line.starts_with(postmark)) return line.substr(postmark.size());
  if (line == postmark.substr(0, postmark.size() - 1)) return std::string_view{};
  return std::nullopt;
}

struct StanzaError {
  std::string reason;
  std::size_t line;
};

class StanzaParser {
public:
  StanzaParser(const SchemaRegistry& registry, const ParseOptions& options, std::vector<std::string>& warnings)
      : registry_(registry), options_(options), warnings_(warnings) {}

  std::variant<PackageItem, StanzaError> package(const RawStanza& raw) {
    if (raw.error) return StanzaError{*raw.error, raw.error_line};
    if (auto dup = duplicate(raw)) return *dup;

    PackageItem item;
    bool has_version = false;
    std::string label = "package";
    for (const auto& f : raw.fields) {
      if (f.name == "Package") label = "package '" + f.value + "'";
    }
    for (const auto& f : raw.fields) {
      const PropertySchema* schema = registry_.find(ItemKind::package, f.name);
      if (!schema) {
        if (auto err = unsupported(f, label, item.extra)) return *err;
        continue;
      }
      TypedValue value;
      try {
        value = parse_value(schema->type, f.value, options_.types);
      } catch (const LexicalError& e) {
        return StanzaError{"property " + f.name + ": " + e.what(), f.line};
      }
      if (f.name == "Package") {
        item.name = std::get<std::string>(value);
      } else if (f.name == "Version") {
        item.version = Version(std::get<Integer>(value));
        has_version = true;
      } else if (f.name == "Depends") {
        item.depends = std::get<VpkgFormula>(value);
      } else if (f.name == "Conflicts") {
        item.conflicts = std::get<VpkgList>(value);
      } else if (f.name == "Provides") {
        item.provides = std::get<VpkgList>(value);
      } else if (f.name == "Installed") {
        item.installed = std::get<bool>(value);
      } else if (f.name == "Keep") {
        item.keep = keep_from_symbol(std::get<EnumValue>(value).symbol);
      } else {
        item.extra[f.name] = std::move(value);
      }
    }
    if (!has_version) return StanzaError{"missing required property Version", raw.first_line};
    if (auto missing = missing_required(ItemKind::package, item.extra)) return StanzaError{*missing, raw.first_line};
    apply_extra_defaults(item.extra, ItemKind::package, registry_);
    return item;
  }

  std::variant<RequestItem, StanzaError> problem(const RawStanza& raw) {
    if (raw.error) return StanzaError{*raw.error, raw.error_line};
    if (auto dup = duplicate(raw)) return *dup;

    RequestItem item;
    item.problem_id = raw.postmark_value;
    for (const auto& f : raw.fields) {
      const PropertySchema* schema = registry_.find(ItemKind::problem, f.name);
      if (!schema) {
        if (auto err = unsupported(f, "problem stanza", item.extra)) return *err;
        continue;
      }
      TypedValue value;
      try {
        value = parse_value(schema->type, f.value, options_.types);
      } catch (const LexicalError& e) {
        return StanzaError{"property " + f.name + ": " + e.what(), f.line};
      }
      if (f.name == "Install") {
        item.install = std::get<VpkgList>(value);
      } else if (f.name == "Remove") {
        item.remove = std::get<VpkgList>(value);
      } else if (f.name == "Upgrade") {
        item.upgrade = std::get<VpkgList>(value);
      } else {
        item.extra[f.name] = std::move(value);
      }
    }
    if (auto missing = missing_required(ItemKind::problem, item.extra)) return StanzaError{*missing, raw.first_line};
    apply_extra_defaults(item.extra, ItemKind::problem, registry_);
    return item;
  }

private:
  std::optional<StanzaError> duplicate(const RawStanza& raw) const {
    std::set<std::string_view> seen;
    for (const auto& f : raw.fields) {
      if (!seen.insert(f.name).second) return StanzaError{"property " + f.name + " appears twice", f.line};
    }
    return std::nullopt;
  }

  std::optional<StanzaError> unsupported(const RawField& f, const std::string& label, ExtraProperties& extra) {
    if (SchemaRegistry::is_core_name(f.name)) {
      warnings_.push_back("line " + std::to_string(f.line) + ": " + f.name + " is not a property of " + label +
                          "; disregarded");
      return std::nullopt;
    }
    if (options_.strict_extras) {
      warnings_.push_back("line " + std::to_string(f.line) + ": unknown property " + f.name + " dropped");
      return std::nullopt;
    }
    warnings_.push_back("line " + std::to_string(f.line) + ": unknown property " + f.name + " in " + label +
                        " kept unprocessed");
    extra[f.name] = RawValue{f.value};
    return std::nullopt;
  }

  std::optional<std::string> missing_required(ItemKind item, const ExtraProperties& extra) const {
    for (const auto& s : registry_.extra_schemas(item)) {
      if (s.optionality == Optionality::required && !extra.contains(s.name))
        return "missing required property " + s.name;
    }
    return std::nullopt;
  }

  const SchemaRegistry& registry_;
  const ParseOptions& options_;
  std::vector<std::string>& warnings_;
};

RecoveredError make_error(std::size_t index, const RawStanza& raw, StanzaError err) {
  return RecoveredError{index, raw.begin, raw.end, err.line ? err.line : raw.first_line, std::move(err.reason)};
}

void write_line(std::string& out, std::string_view name, std::string_view value) {
  if (value.find_first_of("\r\n") != std::string_view::npos)
    throw InvalidDocument("value of " + std::string(name) + " spans several lines");
  out.append(name).append(": ").append(value).push_back('\n');
}

void write_extras(std::string& out, const ExtraProperties& extra, ItemKind item, const SchemaRegistry& registry,
                  const SerializeOptions& options) {
  for (const auto& [name, value] : extra) {
    if (std::holds_alternative<NoneValue>(value)) continue;
    if (const auto* raw = std::get_if<RawValue>(&value)) {
      write_line(out, name, raw->text);
      continue;
    }
    const auto& typed = std::get<TypedValue>(value);
    const PropertySchema* schema = registry.find(item, name);
    if (options.canonical && schema && schema->default_value && *schema->default_value == typed) continue;
    std::string text;
    try {
      text = serialize_value(typed);
    } catch (const std::invalid_argument& e) {
      throw InvalidDocument("property " + name + ": " + e.what());
    }
    write_line(out, name, text);
  }
}

}  // namespace

std::vector<RawStanza> split_stanzas(std::string_view text) {
  std::vector<RawStanza> stanzas;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t line_end = nl == std::string_view::npos ? text.size() : nl;
    std::size_t next = nl == std::string_view::npos ? text.size() : nl + 1;
    std::string_view line = text.substr(pos, line_end - pos);
    if (line.ends_with('\r')) line.remove_suffix(1);
    ++line_no;

    auto start_stanza = [&](StanzaKind kind) {
      if (!stanzas.empty()) stanzas.back().end = pos;
      RawStanza s;
      s.kind = kind;
      s.begin = pos;
      s.first_line = line_no;
      stanzas.push_back(std::move(s));
    };

    if (auto v = postmark_value(line, kPackagePostmark)) {
      start_stanza(StanzaKind::package);
      stanzas.back().fields.push_back(RawField{"Package", std::string(*v), line_no});
    } else if (auto pv = postmark_value(line, kProblemPostmark)) {
      start_stanza(StanzaKind::problem);
      stanzas.back().postmark_value = std::string(*pv);
    } else if (!is_blank(line)) {
      if (stanzas.empty()) start_stanza(StanzaKind::preamble);
      RawStanza& s = stanzas.back();
      auto fail = [&](std::string reason) {
        if (s.error) return;
        s.error = std::move(reason);
        s.error_line = line_no;
      };
      std::size_t sep = line.find(": ");
      std::string_view name;
      std::string_view value;
      if (sep != std::string_view::npos) {
        name = line.substr(0, sep);
        value = line.substr(sep + 2);
      } else if (line.ends_with(':')) {
        name = line.substr(0, line.size() - 1);
      } else {
        fail("line without ': ' separator");
        name = line;
      }
      if (!is_identifier(name)) fail("invalid property name '" + std::string(name) + "'");
      s.fields.push_back(RawField{std::string(name), std::string(value), line_no});
    }
    pos = next;
  }
  if (!stanzas.empty()) stanzas.back().end = text.size();
  for (auto& s : stanzas) {
    if (s.kind == StanzaKind::preamble && !s.error) {
      s.error = "content before the first stanza";
      s.error_line = s.first_line;
    }
  }
  return stanzas;
}

ParseReport parse_cudf(std::string_view bytes, const SchemaRegistry& registry, const ParseOptions& options) {
  ParseReport report;
  if (auto bad = find_invalid_utf8(bytes)) {
    report.fatal = FatalError{FatalKind::encoding, "invalid UTF-8 at byte " + std::to_string(*bad)};
    return report;
  }

  StanzaParser parser(registry, options, report.warnings);
  CudfDocument doc;
  std::vector<RequestItem> requests;
  auto stanzas = split_stanzas(bytes);
  for (std::size_t i = 0; i < stanzas.size(); ++i) {
    const RawStanza& raw = stanzas[i];
    if (raw.kind == StanzaKind::problem) {
      auto result = parser.problem(raw);
      if (auto* err = std::get_if<StanzaError>(&result))
        report.recovered_errors.push_back(make_error(i, raw, std::move(*err)));
      else
        requests.push_back(std::move(std::get<RequestItem>(result)));
    } else if (raw.kind == StanzaKind::package) {
      auto result = parser.package(raw);
      if (auto* err = std::get_if<StanzaError>(&result))
        report.recovered_errors.push_back(make_error(i, raw, std::move(*err)));
      else
        doc.packages.push_back(std::move(std::get<PackageItem>(result)));
    } else {
      report.recovered_errors.push_back(make_error(i, raw, StanzaError{*raw.error, raw.error_line}));
    }
  }

  if (requests.empty()) {
    report.fatal = FatalError{FatalKind::no_problem_stanza, "no valid problem stanza"};
    return report;
  }
  if (requests.size() > 1) {
    report.fatal = FatalError{FatalKind::multiple_problem_stanzas,
                              std::to_string(requests.size()) + " problem stanzas; exactly one is allowed"};
    return report;
  }
  doc.request = std::move(requests.front());
  report.document = std::move(doc);
  return report;
}

CudfDocument read_cudf(std::string_view bytes, const SchemaRegistry& registry, const ParseOptions& options) {
  ParseReport report = parse_cudf(bytes, registry, options);
  if (report.fatal) throw ParseFailure(*report.fatal);
  return std::move(*report.document);
}

PackageStanzas parse_package_stanzas(std::string_view bytes, const SchemaRegistry& registry,
                                     const ParseOptions& options) {
  PackageStanzas out;
  if (auto bad = find_invalid_utf8(bytes)) {
    out.recovered_errors.push_back(
        RecoveredError{0, 0, bytes.size(), 0, "invalid UTF-8 at byte " + std::to_string(*bad)});
    return out;
  }
  StanzaParser parser(registry, options, out.warnings);
  auto stanzas = split_stanzas(bytes);
  for (std::size_t i = 0; i < stanzas.size(); ++i) {
    const RawStanza& raw = stanzas[i];
    if (raw.kind != StanzaKind::package) {
      std::string reason = raw.kind == StanzaKind::problem ? "unexpected problem stanza" : *raw.error;
      out.recovered_errors.push_back(make_error(i, raw, StanzaError{reason, raw.error_line}));
      continue;
    }
    auto result = parser.package(raw);
    if (auto* err = std::get_if<StanzaError>(&result))
      out.recovered_errors.push_back(make_error(i, raw, std::move(*err)));
    else
      out.packages.push_back(std::move(std::get<PackageItem>(result)));
  }
  return out;
}

std::string serialize_package_stanza(const PackageItem& p, const SchemaRegistry& registry,
                                     const SerializeOptions& options) {
  std::string out;
  write_line(out, "Package", p.name);
  write_line(out, "Version", p.version.to_string());
  if (!p.depends.is_true()) write_line(out, "Depends", serialize_value(p.depends));
  if (!options.canonical || !p.conflicts.empty()) write_line(out, "Conflicts", serialize_value(p.conflicts));
  if (!options.canonical || !p.provides.empty()) write_line(out, "Provides", serialize_value(p.provides));
  if (!options.canonical || p.installed) write_line(out, "Installed", p.installed ? "true" : "false");
  if (p.keep) write_line(out, "Keep", to_string(*p.keep));
  write_extras(out, p.extra, ItemKind::package, registry, options);
  return out;
}

std::string serialize_cudf(const CudfDocument& doc, const SchemaRegistry& registry, const SerializeOptions& options) {
  auto violations = validate_document(doc, registry);
  if (!violations.empty()) {
    std::string msg = "document is not valid:";
    for (const auto& v : violations) msg += "\n  " + v.to_string();
    throw InvalidDocument(msg);
  }

  std::string out;
  for (const auto& p : doc.packages) {
    out += serialize_package_stanza(p, registry, options);
    out += '\n';
  }
  const RequestItem& r = doc.request;
  write_line(out, "Problem", r.problem_id);
  for (const auto& [name, list] : {std::pair{"Install", &r.install}, {"Remove", &r.remove}, {"Upgrade", &r.upgrade}}) {
    if (!options.canonical || !list->empty()) write_line(out, name, serialize_value(*list));
  }
  write_extras(out, r.extra, ItemKind::problem, registry, options);
  return out;
}

}  // namespace cudf
