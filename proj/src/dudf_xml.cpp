#include <expat.h>

#include <algorithm>
#include <map>
#include <memory>

#include "cudf/dudf.hpp"
#include "cudf/text_io.hpp"

namespace cudf::dudf {

namespace {

// ---- writing ----

void escape_text(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
}

void escape_attribute(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\t': out += "&#9;"; break;
      default: escape_text(out, std::string_view(&c, 1));
    }
  }
}

class Writer {
public:
  std::string take() { return std::move(out_); }

  void raw(std::string_view s) { out_ += s; }

  void open(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs = {}) {
    indent();
    start_tag(name, attrs);
    out_ += ">\n";
    ++depth_;
  }

  void close(std::string_view name) {
    --depth_;
    indent();
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }

  void leaf(std::string_view name, std::string_view text,
            const std::vector<std::pair<std::string, std::string>>& attrs = {}) {
    indent();
    start_tag(name, attrs);
    out_ += ">";
    escape_text(out_, text);
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }

  void empty(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs) {
    indent();
    start_tag(name, attrs);
    out_ += "/>\n";
  }

  void hole(std::string_view name, const HolePayload& h,
            std::vector<std::pair<std::string, std::string>> attrs = {}) {
    if (const auto* e = std::get_if<Extensional>(&h)) {
      leaf(name, e->text, attrs);
    } else {
      attrs.emplace_back("dudf:reference", std::get<Intensional>(h).reference);
      empty(name, attrs);
    }
  }

  void tool(std::string_view name, const Tool& t) {
    open(name);
    leaf("name", t.name);
    leaf("version", t.version);
    close(name);
  }

  void status(const PackageStatus& s) {
    open("package-status");
    hole("installer", s.installer);
    if (s.meta_installer) hole("meta-installer", *s.meta_installer);
    close("package-status");
  }

private:
  void indent() { out_.append(static_cast<std::size_t>(depth_) * 2, ' '); }

  void start_tag(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs) {
    out_ += "<";
    out_ += name;
    for (const auto& [k, v] : attrs) {
      out_ += " " + k + "=\"";
      escape_attribute(out_, v);
      out_ += "\"";
    }
  }

  std::string out_;
  int depth_ = 0;
};

// ---- reading ----

constexpr char kSep = '\x1f';

struct Node {
  std::string ns;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;  // (ns, name) joined by kSep
  std::vector<std::unique_ptr<Node>> children;
  std::string text;  // direct character data only
};

std::pair<std::string, std::string> split_name(const char* qualified) {
  std::string_view s(qualified);
  auto pos = s.find(kSep);
  if (pos == std::string_view::npos) return {"", std::string(s)};
  return {std::string(s.substr(0, pos)), std::string(s.substr(pos + 1))};
}

struct Builder {
  std::unique_ptr<Node> root;
  std::vector<Node*> stack;

  static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<Builder*>(data);
    auto node = std::make_unique<Node>();
    std::tie(node->ns, node->name) = split_name(name);
    for (int i = 0; attrs[i]; i += 2) node->attrs.emplace_back(attrs[i], attrs[i + 1]);
    Node* raw = node.get();
    if (self->stack.empty())
      self->root = std::move(node);
    else
      self->stack.back()->children.push_back(std::move(node));
    self->stack.push_back(raw);
  }

  static void on_end(void* data, const XML_Char*) { static_cast<Builder*>(data)->stack.pop_back(); }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<Builder*>(data);
    if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

std::unique_ptr<Node> parse_xml(std::string_view bytes) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreateNS("UTF-8", kSep), &XML_ParserFree);
  if (!parser) throw std::bad_alloc();
  Builder builder;
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &Builder::on_text);
  if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw SchemaViolation("/", std::string("XML is not well-formed: ") + XML_ErrorString(XML_GetErrorCode(parser.get())) +
                                   " at line " + std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }
  return std::move(builder.root);
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

struct Slot {
  std::string_view name;
  bool required;
  bool repeated = false;
};

class Reader {
public:
  explicit Reader(const ReadOptions& options) : strict_(options.strict) {}

  DudfDocument document(const Node& root) {
    if (root.ns != namespace_uri || root.name != "dudf")
      throw SchemaViolation("/", "root element must be 'dudf' in namespace " + std::string(namespace_uri));
    const std::string path = "/dudf";
    auto attrs = attributes(root, path, {"version"});
    if (!attrs.contains("version")) throw SchemaViolation(path + "/@version", "missing required attribute");

    auto kids = children(root, path,
                         {{"timestamp", true},
                          {"uid", true},
                          {"distribution", true},
                          {"installer", true},
                          {"meta-installer", true},
                          {"problem", true},
                          {"outcome", false}});
    DudfDocument doc;
    doc.version = attrs["version"];
    doc.timestamp = leaf(*kids["timestamp"][0], path + "/timestamp");
    doc.uid = leaf(*kids["uid"][0], path + "/uid");
    doc.distribution = leaf(*kids["distribution"][0], path + "/distribution");
    doc.installer = tool(*kids["installer"][0], path + "/installer");
    doc.meta_installer = tool(*kids["meta-installer"][0], path + "/meta-installer");
    doc.problem = problem(*kids["problem"][0], path + "/problem");
    if (!kids["outcome"].empty()) doc.outcome = outcome(*kids["outcome"][0], path + "/outcome");
    return doc;
  }

private:
  bool ours(const Node& n) const { return n.ns == namespace_uri; }

  // Attributes in the DUDF namespace, keyed by local name.
  std::map<std::string, std::string> attributes(const Node& n, const std::string& path,
                                                const std::vector<std::string_view>& allowed) {
    std::map<std::string, std::string> out;
    for (const auto& [qualified, value] : n.attrs) {
      auto [ns, local] = split_name(qualified.c_str());
      if (ns != namespace_uri) {
        if (strict_) throw SchemaViolation(path + "/@" + local, "unexpected attribute");
        continue;
      }
      if (std::find(allowed.begin(), allowed.end(), local) == allowed.end())
        throw SchemaViolation(path + "/@" + local, "unexpected attribute");
      out[local] = value;
    }
    return out;
  }

  void no_text(const Node& n, const std::string& path) {
    if (!blank(n.text)) throw SchemaViolation(path, "unexpected character data");
  }

  std::map<std::string_view, std::vector<const Node*>> children(const Node& n, const std::string& path,
                                                                const std::vector<Slot>& slots) {
    no_text(n, path);
    std::map<std::string_view, std::vector<const Node*>> out;
    for (const auto& s : slots) out[s.name];
    std::size_t cursor = 0;
    for (const auto& child : n.children) {
      if (!ours(*child)) {
        if (strict_) throw SchemaViolation(path + "/" + child->name, "element from a foreign namespace");
        continue;
      }
      auto it = std::find_if(slots.begin(), slots.end(), [&](const Slot& s) { return s.name == child->name; });
      if (it == slots.end()) throw SchemaViolation(path + "/" + child->name, "unexpected element");
      auto& found = out[it->name];
      if (!found.empty() && !it->repeated) throw SchemaViolation(path + "/" + child->name, "duplicate element");
      auto index = static_cast<std::size_t>(it - slots.begin());
      if (strict_ && index < cursor) throw SchemaViolation(path + "/" + child->name, "element out of order");
      cursor = index;
      found.push_back(child.get());
    }
    for (const auto& s : slots) {
      if (s.required && out[s.name].empty())
        throw SchemaViolation(path + "/" + std::string(s.name), "missing required element");
    }
    return out;
  }

  // Character-only content; ignores foreign elements in lenient mode.
  std::string text_content(const Node& n, const std::string& path) {
    for (const auto& child : n.children) {
      if (ours(*child) || strict_) throw SchemaViolation(path + "/" + child->name, "unexpected element");
    }
    return n.text;
  }

  std::string leaf(const Node& n, const std::string& path) {
    attributes(n, path, {});
    return text_content(n, path);
  }

  HolePayload hole(const Node& n, const std::string& path, std::vector<std::string_view> allowed = {}) {
    allowed.push_back("reference");
    auto attrs = attributes(n, path, allowed);
    std::string text = text_content(n, path);
    if (auto it = attrs.find("reference"); it != attrs.end()) {
      if (!text.empty()) throw SchemaViolation(path, "intensional hole must be empty");
      return Intensional{it->second};
    }
    return Extensional{std::move(text)};
  }

  Tool tool(const Node& n, const std::string& path) {
    attributes(n, path, {});
    auto kids = children(n, path, {{"name", true}, {"version", true}});
    return Tool{leaf(*kids["name"][0], path + "/name"), leaf(*kids["version"][0], path + "/version")};
  }

  PackageStatus status(const Node& n, const std::string& path) {
    attributes(n, path, {});
    auto kids = children(n, path, {{"installer", true}, {"meta-installer", false}});
    PackageStatus s{hole(*kids["installer"][0], path + "/installer"), std::nullopt};
    if (!kids["meta-installer"].empty()) s.meta_installer = hole(*kids["meta-installer"][0], path + "/meta-installer");
    return s;
  }

  DudfProblem problem(const Node& n, const std::string& path) {
    attributes(n, path, {});
    auto kids = children(n, path,
                         {{"package-status", true}, {"package-universe", true}, {"action", true}, {"desiderata", false}});
    DudfProblem p;
    p.package_status = status(*kids["package-status"][0], path + "/package-status");

    const Node& universe = *kids["package-universe"][0];
    std::string upath = path + "/package-universe";
    attributes(universe, upath, {});
    auto lists = children(universe, upath, {{"package-list", false, true}});
    std::size_t i = 0;
    for (const Node* list : lists["package-list"]) {
      std::string lpath = upath + "/package-list[" + std::to_string(++i) + "]";
      auto attrs = attributes(*list, lpath, {"format", "filename", "reference"});
      if (!attrs.contains("format")) throw SchemaViolation(lpath + "/@format", "missing required attribute");
      PackageList pl{attrs["format"], std::nullopt, hole(*list, lpath, {"format", "filename"})};
      if (auto it = attrs.find("filename"); it != attrs.end()) pl.filename = it->second;
      p.package_universe.push_back(std::move(pl));
    }

    p.action = hole(*kids["action"][0], path + "/action");
    if (!kids["desiderata"].empty()) p.desiderata = hole(*kids["desiderata"][0], path + "/desiderata");
    return p;
  }

  DudfOutcome outcome(const Node& n, const std::string& path) {
    auto attrs = attributes(n, path, {"result"});
    if (!attrs.contains("result")) throw SchemaViolation(path + "/@result", "missing required attribute");
    DudfOutcome o;
    if (attrs["result"] == "success")
      o.result = Result::success;
    else if (attrs["result"] == "failure")
      o.result = Result::failure;
    else
      throw SchemaViolation(path + "/@result", "result must be 'success' or 'failure'");

    auto kids = children(n, path, {{"error", false}, {"package-status", false}});
    bool failed = o.result == Result::failure;
    if (failed && !kids["package-status"].empty())
      throw SchemaViolation(path + "/package-status", "package status is only allowed when result is success");
    if (!failed && !kids["error"].empty())
      throw SchemaViolation(path + "/error", "error is only allowed when result is failure");
    if (failed && kids["error"].empty()) throw SchemaViolation(path + "/error", "missing required element");
    if (!failed && kids["package-status"].empty())
      throw SchemaViolation(path + "/package-status", "missing required element");

    if (failed)
      o.error = hole(*kids["error"][0], path + "/error");
    else
      o.status = status(*kids["package-status"][0], path + "/package-status");
    return o;
  }

  bool strict_;
};

}  // namespace

std::string dudf_to_xml(const DudfDocument& doc) {
  for (const auto& v : validate_dudf(doc)) {
    if (v.severity == Severity::error) throw InvalidDocument(v.path + ": " + v.message);
  }
  Writer w;
  w.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  w.open("dudf", {{"xmlns", std::string(namespace_uri)},
                  {"xmlns:dudf", std::string(namespace_uri)},
                  {"dudf:version", doc.version}});
  w.leaf("timestamp", doc.timestamp);
  w.leaf("uid", doc.uid);
  w.leaf("distribution", doc.distribution);
  w.tool("installer", doc.installer);
  w.tool("meta-installer", doc.meta_installer);

  w.open("problem");
  w.status(doc.problem.package_status);
  if (doc.problem.package_universe.empty()) {
    w.empty("package-universe", {});
  } else {
    w.open("package-universe");
    for (const auto& list : doc.problem.package_universe) {
      std::vector<std::pair<std::string, std::string>> attrs{{"dudf:format", list.format}};
      if (list.filename) attrs.emplace_back("dudf:filename", *list.filename);
      w.hole("package-list", list.payload, attrs);
    }
    w.close("package-universe");
  }
  w.hole("action", doc.problem.action);
  if (doc.problem.desiderata) w.hole("desiderata", *doc.problem.desiderata);
  w.close("problem");

  if (doc.outcome) {
    const DudfOutcome& o = *doc.outcome;
    w.open("outcome", {{"dudf:result", std::string(to_string(o.result))}});
    if (o.error) w.hole("error", *o.error);
    if (o.status) w.status(*o.status);
    w.close("outcome");
  }
  w.close("dudf");
  return w.take();
}

DudfDocument xml_to_dudf(std::string_view bytes, const ReadOptions& options) {
  auto root = parse_xml(bytes);
  if (!root) throw SchemaViolation("/", "no root element");
  return Reader(options).document(*root);
}

CheckReport check_dudf_xml(std::string_view bytes, bool strict) {
  CheckReport report;
  try {
    report.document = xml_to_dudf(bytes, ReadOptions{strict});
  } catch (const SchemaViolation& e) {
    report.violations.push_back({Severity::error, e.path(), "schema", e.reason()});
    return report;
  }
  report.violations = validate_dudf(*report.document, ValidateOptions{strict});
  return report;
}

}  // namespace cudf::dudf
