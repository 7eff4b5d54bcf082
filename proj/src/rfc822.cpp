#include "cudf/rfc822.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

namespace cudf {

namespace {

constexpr std::array<std::string_view, 7> kDays = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
constexpr std::array<std::string_view, 10> kZones = {"UT",  "GMT", "EST", "EDT", "CST",
                                                     "CDT", "MST", "MDT", "PST", "PDT"};

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

int to_int(std::string_view s) {
  int n = 0;
  for (char c : s) n = n * 10 + (c - '0');
  return n;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_zone(std::string_view z) {
  if (std::find(kZones.begin(), kZones.end(), z) != kZones.end()) return true;
  // Military single letters, J excluded.
  if (z.size() == 1 && std::isalpha(static_cast<unsigned char>(z[0])) && z[0] != 'J' && z[0] != 'j') return true;
  if (z.size() == 5 && (z[0] == '+' || z[0] == '-') && all_digits(z.substr(1))) {
    return to_int(z.substr(3, 2)) < 60;
  }
  return false;
}

int days_in_month(int month, int year, bool two_digit) {
  static constexpr std::array<int, 12> days = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month != 2 || two_digit) return days[month - 1];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  return leap ? 29 : 28;
}

}  // namespace

std::optional<Rfc822Date> parse_rfc822_date(std::string_view text) {
  Rfc822Date d;
  std::string_view rest = text;
  if (auto comma = rest.find(','); comma != std::string_view::npos) {
    auto head = tokens(rest.substr(0, comma));
    if (head.size() != 1) return std::nullopt;
    auto it = std::find(kDays.begin(), kDays.end(), head[0]);
    if (it == kDays.end()) return std::nullopt;
    d.weekday = static_cast<int>(it - kDays.begin());
    rest = rest.substr(comma + 1);
  }

  auto t = tokens(rest);
  if (t.size() != 5) return std::nullopt;

  if (!all_digits(t[0]) || t[0].size() > 2) return std::nullopt;
  d.day = to_int(t[0]);

  auto m = std::find(kMonths.begin(), kMonths.end(), t[1]);
  if (m == kMonths.end()) return std::nullopt;
  d.month = static_cast<int>(m - kMonths.begin()) + 1;

  if (!all_digits(t[2]) || (t[2].size() != 2 && t[2].size() != 4)) return std::nullopt;
  d.year = to_int(t[2]);
  d.two_digit_year = t[2].size() == 2;

  if (d.day < 1 || d.day > days_in_month(d.month, d.year, d.two_digit_year)) return std::nullopt;

  std::string_view time = t[3];
  if (time.size() != 5 && time.size() != 8) return std::nullopt;
  if (!all_digits(time.substr(0, 2)) || time[2] != ':' || !all_digits(time.substr(3, 2))) return std::nullopt;
  d.hour = to_int(time.substr(0, 2));
  d.minute = to_int(time.substr(3, 2));
  if (time.size() == 8) {
    if (time[5] != ':' || !all_digits(time.substr(6, 2))) return std::nullopt;
    d.second = to_int(time.substr(6, 2));
    if (*d.second > 60) return std::nullopt;
  }
  if (d.hour > 23 || d.minute > 59) return std::nullopt;

  if (!is_zone(t[4])) return std::nullopt;
  d.zone = std::string(t[4]);
  return d;
}

}  // namespace cudf
