#include "cudf/solution_file.hpp"

#include <algorithm>
#include <map>

#include "cudf/text_io.hpp"
#include "cudf/utf8.hpp"

namespace cudf {

UnknownPackage::UnknownPackage(std::string name, Version version)
    : std::runtime_error("package " + name + " (version " + version.to_string() + ") is not in the problem"),
      name_(std::move(name)),
      version_(std::move(version)) {}

namespace {

void sort_by_key(std::vector<const PackageItem*>& items) {
  std::sort(items.begin(), items.end(), [](const PackageItem* a, const PackageItem* b) {
    return std::tie(a->name, a->version) < std::tie(b->name, b->version);
  });
}

void write_entry(std::string& out, const PackageItem& p, bool installed) {
  if (!out.empty()) out += "\n";
  out += "Package: " + p.name + "\n";
  out += "Version: " + p.version.to_string() + "\n";
  out += std::string("Installed: ") + (installed ? "true" : "false") + "\n";
}

}  // namespace

std::string write_solution(const CudfDocument& problem, const CudfDocument& solution) {
  std::vector<const PackageItem*> on;
  std::vector<const PackageItem*> off;
  for (const auto& p : solution.packages) {
    if (p.installed) {
      on.push_back(&p);
      continue;
    }
    const PackageItem* before = lookup(problem, p.name, p.version);
    if (before && before->installed) off.push_back(&p);
  }
  sort_by_key(on);
  sort_by_key(off);
  std::string out;
  for (const auto* p : on) write_entry(out, *p, true);
  for (const auto* p : off) write_entry(out, *p, false);
  return out;
}

CudfDocument apply_solution(const CudfDocument& problem, std::string_view text) {
  if (auto bad = find_invalid_utf8(text))
    throw SolutionFormatError("invalid UTF-8 at byte " + std::to_string(*bad));

  std::map<std::pair<std::string, Version>, bool> flags;
  for (const auto& raw : split_stanzas(text)) {
    if (raw.kind == StanzaKind::problem) continue;
    auto where = "line " + std::to_string(raw.first_line) + ": ";
    if (raw.error) throw SolutionFormatError("line " + std::to_string(raw.error_line) + ": " + *raw.error);

    std::optional<std::string> name;
    std::optional<Version> version;
    bool installed = false;
    try {
      for (const auto& f : raw.fields) {
        if (f.name == "Package")
          name = std::get<std::string>(parse_value(TypeKind::pkgname, f.value));
        else if (f.name == "Version")
          version = Version(std::get<Integer>(parse_value(TypeKind::posint, f.value)));
        else if (f.name == "Installed")
          installed = std::get<bool>(parse_value(TypeKind::boolean, f.value));
      }
    } catch (const LexicalError& e) {
      throw SolutionFormatError(where + e.what());
    }
    if (!name || !version) throw SolutionFormatError(where + "stanza without Package and Version");
    if (!lookup(problem, *name, *version)) throw UnknownPackage(*name, *version);
    if (!flags.emplace(std::pair{*name, *version}, installed).second)
      throw SolutionFormatError(where + "package " + *name + " (version " + version->to_string() +
                                ") listed twice");
  }

  CudfDocument out = problem;
  for (auto& p : out.packages) {
    auto it = flags.find({p.name, p.version});
    p.installed = it != flags.end() && it->second;
  }
  return out;
}

}  // namespace cudf
