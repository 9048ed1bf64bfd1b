// Copyright 2026 The percwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "percwalk/core.hpp"

#include <charconv>
#include <numeric>

namespace percwalk {

PiFraction PiFraction::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ConfigError("rational angle has zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return PiFraction{num, den};
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t value = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc{} || ptr != last) {
    throw ConfigError("malformed rational multiple of pi: '" + std::string(whole) + "' (expected l/m)");
  }
  return value;
}

}  // namespace

PiFraction PiFraction::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return make(parse_int(text, text), 1);
  return make(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
}

std::string PiFraction::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace percwalk
