#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cudf/document.hpp"
#include "cudf/dudf.hpp"
#include "cudf/optimizer.hpp"
#include "cudf/semantics.hpp"
#include "cudf/solution_file.hpp"
#include "cudf/text_io.hpp"

namespace cudf::cli {

namespace {

using nlohmann::json;

/// Reported once and turned into an exit code by run().
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{usage, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Failure{usage, "error reading " + path};
  return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  f << data;
  if (!f) throw Failure{usage, "cannot write " + path};
}

/// "Name:type" or "Name:type=default"; registers an optional package property.
SchemaRegistry registry_with(const std::vector<std::string>& specs) {
  SchemaRegistry registry = SchemaRegistry::core();
  for (const auto& spec : specs) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw Failure{usage, "--property expects Name:type[=default], got '" + spec + "'"};
    std::string name = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    std::optional<std::string> default_text;
    if (auto eq = rest.find('='); eq != std::string::npos) {
      default_text = rest.substr(eq + 1);
      rest.resize(eq);
    }
    try {
      TypeId type = TypeId::parse(rest);
      std::optional<TypedValue> def;
      if (default_text) def = parse_value(type, *default_text);
      registry = register_extra_schema(
          registry, PropertySchema{name, type, ItemKind::package, Optionality::optional, std::move(def)});
    } catch (const std::exception& e) {
      throw Failure{usage, "--property " + spec + ": " + e.what()};
    }
  }
  return registry;
}

CudfDocument read_document(const std::string& path, const SchemaRegistry& registry, std::ostream& err,
                           int fatal_code) {
  ParseReport report = parse_cudf(read_file(path), registry);
  for (const auto& e : report.recovered_errors) err << path << ":" << e.line << ": stanza ignored: " << e.reason << "\n";
  if (report.fatal) throw Failure{fatal_code, path + ": " + report.fatal->message};
  return std::move(*report.document);
}

json version_json(const std::optional<Version>& v) { return v ? json(v->to_string()) : json(nullptr); }

json violation_json(const Violation& v) {
  return {{"clause", v.clause}, {"package", v.package}, {"version", version_json(v.version)}, {"reason", v.reason}};
}

std::string_view kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::duplicate_key: return "duplicate-key";
    case ViolationKind::bad_value: return "bad-value";
    case ViolationKind::missing_required: return "missing-required";
    case ViolationKind::unknown_property: return "unknown-property";
  }
  return "?";
}

struct CommonOptions {
  std::string file;
  std::vector<std::string> properties;
};

void add_properties(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--property", o.properties, "Register a package property, Name:type[=default]");
}

// ---- check ----

struct CheckOptions : CommonOptions {
  bool strict = false;
  bool json = false;
};

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  SchemaRegistry registry = registry_with(o.properties);
  ParseReport report = parse_cudf(read_file(o.file), registry);
  std::vector<DocumentViolation> violations;
  if (report.document) violations = validate_document(*report.document, registry);

  bool parseable = !report.fatal;
  bool clean = parseable && report.recovered_errors.empty() && violations.empty();
  bool pass = o.strict ? clean : parseable;

  std::size_t installed = 0;
  if (report.document) {
    for (const auto& p : report.document->packages) installed += p.installed ? 1 : 0;
  }

  if (o.json) {
    json j;
    j["ok"] = pass;
    j["fatal"] = report.fatal ? json(report.fatal->message) : json(nullptr);
    j["packages"] = report.document ? report.document->packages.size() : 0;
    j["installed"] = installed;
    j["recovered_errors"] = json::array();
    for (const auto& e : report.recovered_errors)
      j["recovered_errors"].push_back({{"line", e.line}, {"reason", e.reason}});
    j["warnings"] = report.warnings;
    j["violations"] = json::array();
    for (const auto& v : violations)
      j["violations"].push_back({{"clause", kind_name(v.kind)},
                                 {"package", v.package},
                                 {"version", version_json(v.version)},
                                 {"reason", v.to_string()}});
    out << j.dump(2) << "\n";
  } else {
    for (const auto& e : report.recovered_errors) err << o.file << ":" << e.line << ": stanza ignored: " << e.reason << "\n";
    for (const auto& w : report.warnings) err << o.file << ": warning: " << w << "\n";
    for (const auto& v : violations) err << o.file << ": invalid: " << v.to_string() << "\n";
    if (report.fatal) {
      err << o.file << ": " << report.fatal->message << "\n";
    } else {
      const auto& r = report.document->request;
      out << "packages: " << report.document->packages.size() << "\n"
          << "installed: " << installed << "\n"
          << "request: install " << r.install.size() << ", remove " << r.remove.size() << ", upgrade "
          << r.upgrade.size() << "\n"
          << "recovered errors: " << report.recovered_errors.size() << "\n"
          << "warnings: " << report.warnings.size() << "\n";
    }
  }
  return pass ? ok : invalid;
}

// ---- fmt ----

int cmd_fmt(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  SchemaRegistry registry = registry_with(o.properties);
  CudfDocument doc = read_document(o.file, registry, err, invalid);
  try {
    out << serialize_cudf(doc, registry);
  } catch (const InvalidDocument& e) {
    throw Failure{invalid, o.file + ": " + e.what()};
  }
  return ok;
}

// ---- verify ----

struct VerifyOptions {
  std::string problem;
  std::string solution;
  std::vector<std::string> properties;
  bool explain = false;
  bool json = false;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  SchemaRegistry registry = registry_with(o.properties);
  CudfDocument before = read_document(o.problem, registry, err, usage);
  CudfDocument after;
  try {
    after = apply_solution(before, read_file(o.solution));
  } catch (const UnknownPackage& e) {
    throw Failure{usage, o.solution + ": " + e.what()};
  } catch (const SolutionFormatError& e) {
    throw Failure{usage, o.solution + ": " + e.what()};
  }

  RequestVerdict verdict = satisfies_request(before, before.request, after);
  if (o.json) {
    json j;
    j["ok"] = verdict.ok();
    j["clauses"] = json::array();
    for (const auto& c : verdict.clauses) {
      json vs = json::array();
      for (const auto& v : c.violations) vs.push_back(violation_json(v));
      j["clauses"].push_back({{"clause", c.clause}, {"name", c.name}, {"ok", c.ok()}, {"violations", vs}});
    }
    out << j.dump(2) << "\n";
  } else if (o.explain) {
    for (const auto& c : verdict.clauses) {
      out << "clause " << c.clause << " (" << c.name << "): " << (c.ok() ? "ok" : "violated") << "\n";
      for (const auto& v : c.violations) out << "  " << v.to_string() << "\n";
    }
  }
  if (!o.json) out << (verdict.ok() ? "solution satisfies the request" : "solution does not satisfy the request") << "\n";
  return verdict.ok() ? ok : invalid;
}

// ---- cost sources shared by solve and cost ----

struct CostOptions : CommonOptions {
  std::string criterion;
  std::string cost_property;
  std::string metric = "binary";
};

void add_cost_options(CLI::App* cmd, CostOptions& o) {
  cmd->add_option("file", o.file, "CUDF document")->required();
  auto* c = cmd->add_option("--criterion", o.criterion,
                            "installed-size, download-size, prefer-latest, min-new or min-removed");
  auto* p = cmd->add_option("--cost-property", o.cost_property, "Integer package property holding the cost");
  c->excludes(p);
  cmd->add_option("--prefer-latest-metric", o.metric, "binary or outdatedness")
      ->check(CLI::IsMember({"binary", "outdatedness"}));
  add_properties(cmd, o);
}

CostAssignment costs_for(const CostOptions& o, const CudfDocument& doc) {
  if (o.criterion.empty() == o.cost_property.empty())
    throw Failure{usage, "give exactly one of --criterion and --cost-property"};
  try {
    if (!o.cost_property.empty()) return costs_from_property(doc, o.cost_property);
    auto criterion = parse_criterion(o.criterion);
    if (!criterion) throw Failure{usage, "unknown criterion '" + o.criterion + "'"};
    auto metric = o.metric == "outdatedness" ? PreferLatestMetric::outdatedness : PreferLatestMetric::binary;
    return preset_costs(doc, doc.request, *criterion, metric);
  } catch (const MissingSizeProperty& e) {
    throw Failure{usage, e.what()};
  } catch (const MissingCostProperty& e) {
    throw Failure{usage, e.what()};
  } catch (const BadCostValue& e) {
    throw Failure{usage, e.what()};
  }
}

// ---- solve ----

struct SolveCliOptions : CostOptions {
  std::uint64_t budget = SolveOptions{}.budget;
  unsigned threads = 1;
  std::string out;
};

int cmd_solve(const SolveCliOptions& o, std::ostream& out, std::ostream& err) {
  SchemaRegistry registry = registry_with(o.properties);
  CudfDocument doc = read_document(o.file, registry, err, invalid);
  CostAssignment costs = costs_for(o, doc);
  SolveResult result = solve(doc, doc.request, costs, SolveOptions{o.budget, o.threads});
  switch (result.status) {
    case SolveStatus::budget_exceeded:
      err << "search space of " << result.candidates << " candidates exceeds the budget of " << o.budget << "\n";
      return budget;
    case SolveStatus::no_solution:
      err << "no solution (" << result.explored << " candidates explored)\n";
      return invalid;
    case SolveStatus::solution: break;
  }
  std::string text = write_solution(doc, *result.document);
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
  err << "cost: " << result.cost << "\n";
  return ok;
}

// ---- cost ----

int cmd_cost(const CostOptions& o, std::ostream& out, std::ostream& err) {
  SchemaRegistry registry = registry_with(o.properties);
  CudfDocument doc = read_document(o.file, registry, err, invalid);
  out << installation_cost(doc, costs_for(o, doc)) << "\n";
  return ok;
}

// ---- dudf ----

struct DudfOptions : CommonOptions {
  bool strict = false;
  std::string out;
};

void print_violations(const std::string& file, const std::vector<dudf::Violation>& vs, std::ostream& err) {
  for (const auto& v : vs) {
    err << file << ": " << (v.severity == dudf::Severity::error ? "error" : "warning") << ": " << v.path << ": "
        << v.message << "\n";
  }
}

int cmd_dudf_validate(const DudfOptions& o, std::ostream& out, std::ostream& err) {
  auto report = dudf::check_dudf_xml(read_file(o.file), o.strict);
  print_violations(o.file, report.violations, err);
  if (report.ok()) {
    auto kind = dudf::submission_kind(*report.document);
    out << "valid " << (kind == dudf::SubmissionKind::sole_problem ? "sole-problem" : "problem/outcome")
        << " submission\n";
  }
  return report.ok() ? ok : invalid;
}

dudf::DudfDocument read_dudf(const DudfOptions& o) {
  try {
    return dudf::xml_to_dudf(read_file(o.file), dudf::ReadOptions{o.strict});
  } catch (const dudf::SchemaViolation& e) {
    throw Failure{invalid, o.file + ": " + e.what()};
  }
}

std::string describe(const dudf::HolePayload& h) {
  if (const auto* e = std::get_if<dudf::Extensional>(&h))
    return "extensional, " + std::to_string(e->text.size()) + " bytes";
  return "intensional, reference " + std::get<dudf::Intensional>(h).reference;
}

void show_status(const dudf::PackageStatus& s, const std::string& indent, std::ostream& out) {
  out << indent << "package-status:\n";
  out << indent << "  installer: " << describe(s.installer) << "\n";
  if (s.meta_installer) out << indent << "  meta-installer: " << describe(*s.meta_installer) << "\n";
}

int cmd_dudf_show(const DudfOptions& o, std::ostream& out, std::ostream&) {
  dudf::DudfDocument d = read_dudf(o);
  out << "version: " << d.version << "\n"
      << "timestamp: " << d.timestamp << "\n"
      << "uid: " << d.uid << "\n"
      << "distribution: " << d.distribution << "\n"
      << "installer: " << d.installer.name << " " << d.installer.version << "\n"
      << "meta-installer: " << d.meta_installer.name << " " << d.meta_installer.version << "\n"
      << "problem:\n";
  show_status(d.problem.package_status, "  ", out);
  out << "  package-universe: " << d.problem.package_universe.size() << " package list(s)\n";
  for (std::size_t i = 0; i < d.problem.package_universe.size(); ++i) {
    const auto& l = d.problem.package_universe[i];
    out << "    package-list[" << i + 1 << "] (format: " << l.format;
    if (l.filename) out << "; filename: " << *l.filename;
    out << "): " << describe(l.payload) << "\n";
  }
  out << "  action: " << describe(d.problem.action) << "\n";
  if (d.problem.desiderata) out << "  desiderata: " << describe(*d.problem.desiderata) << "\n";
  if (!d.outcome) {
    out << "outcome: none (sole problem)\n";
  } else {
    out << "outcome: " << dudf::to_string(d.outcome->result) << "\n";
    if (d.outcome->error) out << "  error: " << describe(*d.outcome->error) << "\n";
    if (d.outcome->status) show_status(*d.outcome->status, "  ", out);
  }
  return ok;
}

int cmd_dudf_convert(const DudfOptions& o, std::ostream& out, std::ostream&) {
  SchemaRegistry registry = registry_with(o.properties);
  dudf::DudfDocument d = read_dudf(o);
  std::string text;
  try {
    text = serialize_cudf(dudf::toy_convert(d, dudf::cudf_stanzas_format, registry), registry);
  } catch (const dudf::ConversionError& e) {
    throw Failure{invalid, o.file + ": " + e.what()};
  } catch (const InvalidDocument& e) {
    throw Failure{invalid, o.file + ": " + e.what()};
  }
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parse, check, verify and solve CUDF documents; handle DUDF submissions.", "cudftool"};
  app.require_subcommand(1);
  std::function<int()> action;

  CheckOptions check_o;
  auto* check = app.add_subcommand("check", "Parse a CUDF document and report errors");
  check->add_option("file", check_o.file, "CUDF document")->required();
  check->add_flag("--strict", check_o.strict, "Fail on recovered errors and validation problems");
  check->add_flag("--json", check_o.json, "Machine-readable report");
  add_properties(check, check_o);
  check->callback([&] { action = [&] { return cmd_check(check_o, out, err); }; });

  CommonOptions fmt_o;
  auto* fmt = app.add_subcommand("fmt", "Print the canonical form of a CUDF document");
  fmt->add_option("file", fmt_o.file, "CUDF document")->required();
  add_properties(fmt, fmt_o);
  fmt->callback([&] { action = [&] { return cmd_fmt(fmt_o, out, err); }; });

  VerifyOptions verify_o;
  auto* verify = app.add_subcommand("verify", "Check a solution against a problem");
  verify->add_option("--problem", verify_o.problem, "CUDF problem document")->required();
  verify->add_option("--solution", verify_o.solution, "Solution file")->required();
  verify->add_flag("--explain", verify_o.explain, "Print a verdict per request clause");
  verify->add_flag("--json", verify_o.json, "Machine-readable report");
  verify->add_option("--property", verify_o.properties, "Register a package property, Name:type[=default]");
  verify->callback([&] { action = [&] { return cmd_verify(verify_o, out, err); }; });

  SolveCliOptions solve_o;
  auto* solve_cmd = app.add_subcommand("solve", "Find a minimum-cost solution by exhaustive search");
  add_cost_options(solve_cmd, solve_o);
  solve_cmd->add_option("--budget", solve_o.budget, "Maximum number of candidates to enumerate");
  solve_cmd->add_option("--threads", solve_o.threads, "Worker threads")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out", solve_o.out, "Write the solution here instead of standard output");
  solve_cmd->callback([&] { action = [&] { return cmd_solve(solve_o, out, err); }; });

  CostOptions cost_o;
  auto* cost = app.add_subcommand("cost", "Print the cost of the current installation");
  add_cost_options(cost, cost_o);
  cost->callback([&] { action = [&] { return cmd_cost(cost_o, out, err); }; });

  DudfOptions dudf_o;
  auto* dudf_cmd = app.add_subcommand("dudf", "DUDF submissions");
  dudf_cmd->require_subcommand(1);
  auto add_dudf = [&](const char* name, const char* about, int (*fn)(const DudfOptions&, std::ostream&, std::ostream&)) {
    auto* sub = dudf_cmd->add_subcommand(name, about);
    sub->add_option("file", dudf_o.file, "DUDF XML document")->required();
    sub->add_flag("--strict", dudf_o.strict, "Fixed element order, no foreign markup");
    sub->callback([&, fn] { action = [&, fn] { return fn(dudf_o, out, err); }; });
    return sub;
  };
  add_dudf("validate", "Check structure and side conditions", &cmd_dudf_validate);
  add_dudf("show", "Print an outline", &cmd_dudf_show);
  auto* convert = add_dudf("convert", "Convert holes holding CUDF stanzas to a CUDF document", &cmd_dudf_convert);
  convert->add_option("--out", dudf_o.out, "Write the document here instead of standard output");
  add_properties(convert, dudf_o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    return action();
  } catch (const Failure& f) {
    err << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
}

}  // namespace cudf::cli
