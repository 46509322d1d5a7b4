#include "qoeslice/intent/preference_parser.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace qoeslice::intent {

namespace {

constexpr double kMinSum = 0.5;
constexpr double kMaxSum = 2.0;

// U+2212 MINUS SIGN, which models like to emit in place of '-'.
constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

std::string normalise_minus(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.substr(i, kUnicodeMinus.size()) == kUnicodeMinus) {
      out.push_back('-');
      i += kUnicodeMinus.size() - 1;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

// Numbers inside one bracket group, in order. Tokens that are not numbers
// (words, stray symbols) are skipped.
std::vector<double> numbers_in(const std::string& group) {
  std::vector<double> out;
  const char* p = group.c_str();
  const char* end = p + group.size();
  while (p < end) {
    const char c = *p;
    const bool starts_number = (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.' || c == 'n' ||
                               c == 'N' || c == 'i' || c == 'I';
    if (!starts_number) {
      ++p;
      continue;
    }
    char* stop = nullptr;
    const double v = std::strtod(p, &stop);
    if (stop == p) {
      ++p;
      continue;
    }
    out.push_back(v);
    p = stop;
  }
  return out;
}

}  // namespace

qoe::PreferenceVector parse_preference(std::string_view raw) {
  const std::string text = normalise_minus(raw);
  std::size_t pos = 0;
  while ((pos = text.find('[', pos)) != std::string::npos) {
    const auto close = text.find(']', pos + 1);
    if (close == std::string::npos) break;
    const auto nums = numbers_in(text.substr(pos + 1, close - pos - 1));
    if (nums.size() >= 3) {
      const double w[3] = {nums[0], nums[1], nums[2]};
      for (double x : w) {
        if (!std::isfinite(x)) throw PreferenceParseError("non-finite preference weight in: " + text);
        if (x < 0.0) throw PreferenceParseError("negative preference weight in: " + text);
      }
      const double sum = w[0] + w[1] + w[2];
      if (sum < kMinSum || sum > kMaxSum) {
        throw PreferenceParseError("preference weights sum to " + std::to_string(sum) + ": " + text);
      }
      return {w[0] / sum, w[1] / sum, w[2] / sum};
    }
    pos = close + 1;
  }
  throw PreferenceParseError("no bracketed group of three weights in: " + text);
}

}  // namespace qoeslice::intent
