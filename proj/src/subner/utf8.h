// Copyright (c) 2026 The subner Authors
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

#ifndef SUBNER_UTF8_H_
#define SUBNER_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace subner::utf8 {

// Decodes to Unicode scalar values. Rejects overlong forms, surrogates and
// truncated sequences with DataError.
std::vector<char32_t> decode(std::string_view text);

void append(std::string& out, char32_t cp);
std::string encode(char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

bool is_valid(std::string_view text);

// Simple case folding for ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic. Other scripts pass through unchanged.
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view text);

}  // namespace subner::utf8

#endif  // SUBNER_UTF8_H_
