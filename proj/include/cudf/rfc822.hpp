#pragma once

// RFC822 date-time syntax ("Tue, 15 Jan 2008 10:03:00 +0100").

#include <optional>
#include <string>
#include <string_view>

namespace cudf {

struct Rfc822Date {
  std::optional<int> weekday;  // 0 = Mon
  int day = 0;
  int month = 0;  // 1..12
  int year = 0;   // as written; 2-digit years are not widened
  int hour = 0;
  int minute = 0;
  std::optional<int> second;
  std::string zone;
  bool two_digit_year = false;
};

/// Parses `[day ","] date time` with optional surrounding blanks. Accepts
/// 4-digit years as well as the original 2-digit form (flagged in the
/// result). Returns nullopt on any syntax or range error.
std::optional<Rfc822Date> parse_rfc822_date(std::string_view text);

}  // namespace cudf
