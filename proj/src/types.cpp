#include "cudf/types.hpp"

#include <algorithm>
#include <sstream>

namespace cudf {

Version::Version(Integer value) : value_(std::move(value)) {
  if (value_ < 1) throw std::invalid_argument("version must be a positive integer, got " + value_.str());
}

std::string_view to_string(Relop op) noexcept {
  switch (op) {
    case Relop::eq: return "=";
    case Relop::neq: return "!=";
    case Relop::gt: return ">";
    case Relop::geq: return ">=";
    case Relop::lt: return "<";
    case Relop::leq: return "<=";
  }
  return "?";
}

LexicalError::LexicalError(TypeId type, std::size_t position, std::string reason)
    : std::runtime_error("cannot parse " + type.to_string() + " at offset " +
                         std::to_string(position) + ": " + reason),
      type_(std::move(type)),
      position_(position),
      reason_(std::move(reason)) {}

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' '; }

struct NamedKind {
  std::string_view name;
  TypeKind kind;
};

constexpr NamedKind kKindNames[] = {
    {"bool", TypeKind::boolean},
    {"int", TypeKind::integer},
    {"nat", TypeKind::natural},
    {"posint", TypeKind::posint},
    {"string", TypeKind::string},
    {"oneliner", TypeKind::oneliner},
    {"pkgname", TypeKind::pkgname},
    {"vpkg", TypeKind::vpkg},
    {"veqpkg", TypeKind::veqpkg},
    {"vpkgformula", TypeKind::vpkgformula},
    {"vpkglist", TypeKind::vpkglist},
    {"veqpkglist", TypeKind::veqpkglist},
};

// Integer and boolean lexical spaces follow the XML Schema datatypes, which
// collapse surrounding whitespace.
std::string_view trim_blanks(std::string_view s, std::size_t& offset) {
  offset = 0;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
    ++offset;
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

Integer parse_integer(const TypeId& type, std::string_view raw) {
  std::size_t offset = 0;
  std::string_view s = trim_blanks(raw, offset);
  if (s.empty()) throw LexicalError(type, offset, "expected an integer");
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    ++i;
  }
  if (i == s.size()) throw LexicalError(type, offset + i, "sign without digits");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!is_digit(s[j])) throw LexicalError(type, offset + j, "unexpected character in integer");
  }
  Integer value(std::string(s.substr(i)));
  return negative ? Integer(-value) : value;
}

// Hand-written scanner for the vpkg / vpkglist / vpkgformula grammars.
class Scanner {
public:
  Scanner(const TypeId& type, std::string_view text, const TypeOptions& options)
      : type_(type), text_(text), options_(options) {}

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

  void skip_spaces() {
    while (!at_end() && is_space(text_[pos_])) ++pos_;
  }

  [[noreturn]] void fail(std::string reason) const { throw LexicalError(type_, pos_, std::move(reason)); }
  [[noreturn]] void fail_at(std::size_t at, std::string reason) const {
    throw LexicalError(type_, at, std::move(reason));
  }

  VPkg vpkg() {
    skip_spaces();
    std::size_t start = pos_;
    while (!at_end()) {
      char c = text_[pos_];
      if (is_lower(c) || is_upper(c) || is_digit(c) || c == '-' || c == '.') {
        ++pos_;
      } else {
        break;
      }
    }
    std::string_view name = text_.substr(start, pos_ - start);
    if (name.empty()) fail("expected a package name");
    if (!is_pkgname(name, options_)) fail_at(start, "invalid package name '" + std::string(name) + "'");

    VPkg result{std::string(name), std::nullopt};
    skip_spaces();
    if (auto op = relop()) {
      skip_spaces();
      result.constraint = VersionConstraint{*op, version()};
      skip_spaces();
    }
    return result;
  }

private:
  std::optional<Relop> relop() {
    char c = peek();
    auto next_is = [&](char expected) {
      return pos_ + 1 < text_.size() && text_[pos_ + 1] == expected;
    };
    switch (c) {
      case '=':
        ++pos_;
        return Relop::eq;
      case '!':
        if (!next_is('=')) fail("expected '!='");
        pos_ += 2;
        return Relop::neq;
      case '>':
        if (next_is('=')) {
          pos_ += 2;
          return Relop::geq;
        }
        ++pos_;
        return Relop::gt;
      case '<':
        if (next_is('=')) {
          pos_ += 2;
          return Relop::leq;
        }
        ++pos_;
        return Relop::lt;
      default:
        return std::nullopt;
    }
  }

  Version version() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    std::size_t digits = pos_;
    while (!at_end() && is_digit(text_[pos_])) ++pos_;
    if (pos_ == digits) fail("expected a version number");
    Integer value = parse_integer(TypeKind::posint, text_.substr(start, pos_ - start));
    if (value < 1) fail_at(start, "version must be a positive integer");
    return Version(std::move(value));
  }

  TypeId type_;
  std::string_view text_;
  TypeOptions options_;
  std::size_t pos_ = 0;
};

VpkgList parse_list(const TypeId& type, std::string_view text, const TypeOptions& options) {
  VpkgList list;
  Scanner scan(type, text, options);
  scan.skip_spaces();
  if (scan.at_end()) return list;
  for (;;) {
    list.push_back(scan.vpkg());
    if (scan.at_end()) break;
    if (scan.peek() != ',') scan.fail("expected ',' between list elements");
    scan.advance();
  }
  return list;
}

VpkgFormula parse_formula(const TypeId& type, std::string_view text, const TypeOptions& options) {
  VpkgFormula formula;
  Scanner scan(type, text, options);
  scan.skip_spaces();
  if (scan.at_end()) scan.fail("empty formula");
  Disjunction current;
  for (;;) {
    current.push_back(scan.vpkg());
    if (scan.at_end()) break;
    char c = scan.peek();
    if (c == '|') {
      scan.advance();
    } else if (c == ',') {
      scan.advance();
      formula.conjuncts.push_back(std::move(current));
      current.clear();
    } else {
      scan.fail(std::string("unexpected character '") + c + "' in formula");
    }
  }
  formula.conjuncts.push_back(std::move(current));
  return formula;
}

bool is_veqpkg(const VPkg& v) { return !v.constraint || v.constraint->relop == Relop::eq; }

bool valid_vpkg(const VPkg& v, const TypeOptions& options) { return is_pkgname(v.name, options); }

bool has_newline(std::string_view s) { return s.find_first_of("\r\n") != std::string_view::npos; }

std::string join_vpkgs(const std::vector<VPkg>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += serialize_value(items[i]);
  }
  return out;
}

}  // namespace

TypeId TypeId::enumeration(std::vector<std::string> symbols) {
  TypeId t(TypeKind::enumeration);
  t.symbols = std::move(symbols);
  return t;
}

TypeId TypeId::parse(std::string_view text) {
  for (const auto& [name, kind] : kKindNames) {
    if (text == name) return TypeId(kind);
  }
  constexpr std::string_view prefix = "enum(";
  if (text.starts_with(prefix) && text.ends_with(")")) {
    std::string_view body = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    std::vector<std::string> symbols;
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t comma = body.find(',', start);
      std::string_view item = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      std::size_t offset = 0;
      item = trim_blanks(item, offset);
      if (!is_identifier(item)) throw UnknownType(std::string(text));
      symbols.emplace_back(item);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return enumeration(std::move(symbols));
  }
  throw UnknownType(std::string(text));
}

std::string TypeId::to_string() const {
  if (kind == TypeKind::enumeration) {
    std::string out = "enum(";
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (i) out += ',';
      out += symbols[i];
    }
    return out + ")";
  }
  for (const auto& [name, k] : kKindNames) {
    if (k == kind) return std::string(name);
  }
  return "?";
}

bool is_identifier(std::string_view s) noexcept {
  if (s.empty() || !(is_lower(s[0]) || is_upper(s[0]))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return is_lower(c) || is_upper(c) || is_digit(c) || c == '-'; });
}

bool is_pkgname(std::string_view s, const TypeOptions& options) noexcept {
  if (s.size() < 2 || !is_lower(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) {
    return is_lower(c) || is_digit(c) || c == '-' || c == '.' || (options.lenient_names && is_upper(c));
  });
}

TypedValue parse_value(const TypeId& type, std::string_view lexical, const TypeOptions& options) {
  switch (type.kind) {
    case TypeKind::boolean: {
      std::size_t offset = 0;
      std::string_view s = trim_blanks(lexical, offset);
      if (s == "true") return true;
      if (s == "false") return false;
      throw LexicalError(type, offset, "expected 'true' or 'false'");
    }
    case TypeKind::integer:
      return parse_integer(type, lexical);
    case TypeKind::natural: {
      Integer v = parse_integer(type, lexical);
      if (v < 0) throw LexicalError(type, 0, "negative value for nat");
      return v;
    }
    case TypeKind::posint: {
      Integer v = parse_integer(type, lexical);
      if (v < 1) throw LexicalError(type, 0, "posint must be at least 1");
      return v;
    }
    case TypeKind::string:
      return std::string(lexical);
    case TypeKind::oneliner: {
      auto nl = lexical.find_first_of("\r\n");
      if (nl != std::string_view::npos) throw LexicalError(type, nl, "newline in one-line string");
      return std::string(lexical);
    }
    case TypeKind::pkgname:
      if (!is_pkgname(lexical, options)) {
        std::size_t bad = 0;
        if (!lexical.empty() && is_lower(lexical[0])) {
          bad = 1;
          while (bad < lexical.size() && is_pkgname(std::string{'a', lexical[bad]}, options)) ++bad;
        }
        throw LexicalError(type, bad, "invalid package name '" + std::string(lexical) + "'");
      }
      return std::string(lexical);
    case TypeKind::enumeration: {
      std::size_t offset = 0;
      std::string_view s = trim_blanks(lexical, offset);
      if (!is_identifier(s)) throw LexicalError(type, offset, "enumeration symbol is not an identifier");
      if (std::find(type.symbols.begin(), type.symbols.end(), s) == type.symbols.end())
        throw LexicalError(type, offset, "'" + std::string(s) + "' is not a symbol of " + type.to_string());
      return EnumValue{std::string(s)};
    }
    case TypeKind::vpkg:
    case TypeKind::veqpkg: {
      Scanner scan(type, lexical, options);
      VPkg v = scan.vpkg();
      if (!scan.at_end()) scan.fail("trailing characters after package");
      if (type.kind == TypeKind::veqpkg && !is_veqpkg(v)) throw LexicalError(type, 0, "only '=' constraints allowed");
      return v;
    }
    case TypeKind::vpkgformula:
      return parse_formula(type, lexical, options);
    case TypeKind::vpkglist:
      return parse_list(type, lexical, options);
    case TypeKind::veqpkglist: {
      VpkgList list = parse_list(type, lexical, options);
      for (const auto& v : list) {
        if (!is_veqpkg(v)) {
          auto at = lexical.find(v.name);
          throw LexicalError(type, at == std::string_view::npos ? 0 : at,
                             "only '=' constraints allowed for '" + v.name + "'");
        }
      }
      return list;
    }
  }
  throw UnknownType("?");
}

std::string serialize_value(const TypedValue& value) {
  struct Visitor {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const Integer& i) const { return i.str(); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const EnumValue& e) const { return e.symbol; }
    std::string operator()(const VPkg& v) const {
      if (!v.constraint) return v.name;
      return v.name + " " + std::string(to_string(v.constraint->relop)) + " " + v.constraint->version.to_string();
    }
    std::string operator()(const VpkgFormula& f) const {
      if (f.is_true()) throw std::invalid_argument("the true formula has no lexical representation");
      std::string out;
      for (std::size_t i = 0; i < f.conjuncts.size(); ++i) {
        if (i) out += ", ";
        out += join_vpkgs(f.conjuncts[i], " | ");
      }
      return out;
    }
    std::string operator()(const VpkgList& l) const { return join_vpkgs(l, ", "); }
  };
  return std::visit(Visitor{}, value);
}

bool is_subtype_value(const TypedValue& value, const TypeId& target, const TypeOptions& options) {
  switch (target.kind) {
    case TypeKind::boolean:
      return std::holds_alternative<bool>(value);
    case TypeKind::integer:
      return std::holds_alternative<Integer>(value);
    case TypeKind::natural:
      return std::holds_alternative<Integer>(value) && std::get<Integer>(value) >= 0;
    case TypeKind::posint:
      return std::holds_alternative<Integer>(value) && std::get<Integer>(value) >= 1;
    case TypeKind::string:
      return std::holds_alternative<std::string>(value);
    case TypeKind::oneliner:
      return std::holds_alternative<std::string>(value) && !has_newline(std::get<std::string>(value));
    case TypeKind::pkgname:
      return std::holds_alternative<std::string>(value) && is_pkgname(std::get<std::string>(value), options);
    case TypeKind::enumeration: {
      const auto* e = std::get_if<EnumValue>(&value);
      return e && is_identifier(e->symbol) &&
             std::find(target.symbols.begin(), target.symbols.end(), e->symbol) != target.symbols.end();
    }
    case TypeKind::vpkg: {
      const auto* v = std::get_if<VPkg>(&value);
      return v && valid_vpkg(*v, options);
    }
    case TypeKind::veqpkg: {
      const auto* v = std::get_if<VPkg>(&value);
      return v && valid_vpkg(*v, options) && is_veqpkg(*v);
    }
    case TypeKind::vpkgformula: {
      const auto* f = std::get_if<VpkgFormula>(&value);
      if (!f) return false;
      return std::all_of(f->conjuncts.begin(), f->conjuncts.end(), [&](const Disjunction& d) {
        return !d.empty() &&
               std::all_of(d.begin(), d.end(), [&](const VPkg& v) { return valid_vpkg(v, options); });
      });
    }
    case TypeKind::vpkglist:
    case TypeKind::veqpkglist: {
      const auto* l = std::get_if<VpkgList>(&value);
      if (!l) return false;
      bool eq_only = target.kind == TypeKind::veqpkglist;
      return std::all_of(l->begin(), l->end(), [&](const VPkg& v) {
        return valid_vpkg(v, options) && (!eq_only || is_veqpkg(v));
      });
    }
  }
  return false;
}

bool is_subtype_value(const TypedValue& value, std::string_view target, const TypeOptions& options) {
  return is_subtype_value(value, TypeId::parse(target), options);
}

std::optional<TypeId> direct_supertype(const TypeId& type) {
  switch (type.kind) {
    case TypeKind::natural: return TypeId(TypeKind::integer);
    case TypeKind::posint: return TypeId(TypeKind::natural);
    case TypeKind::oneliner: return TypeId(TypeKind::string);
    case TypeKind::pkgname: return TypeId(TypeKind::oneliner);
    case TypeKind::veqpkg: return TypeId(TypeKind::vpkg);
    case TypeKind::veqpkglist: return TypeId(TypeKind::vpkglist);
    default: return std::nullopt;
  }
}

bool is_subtype(const TypeId& sub, const TypeId& super) {
  if (sub.kind == TypeKind::enumeration && super.kind == TypeKind::enumeration) {
    return std::all_of(sub.symbols.begin(), sub.symbols.end(), [&](const std::string& s) {
      return std::find(super.symbols.begin(), super.symbols.end(), s) != super.symbols.end();
    });
  }
  std::optional<TypeId> t = sub;
  while (t) {
    if (*t == super) return true;
    t = direct_supertype(*t);
  }
  return false;
}

}  // namespace cudf
