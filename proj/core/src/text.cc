// Copyright 2026 The sparql2q Authors.
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

#include "sparql2q/text.h"

namespace sparql2q {

char AsciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (char &c : out) c = AsciiLower(c);
  return out;
}

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (AsciiLower(a[i]) != AsciiLower(b[i])) return false;
  }
  return true;
}

std::string_view Trim(std::string_view text) {
  size_t b = 0;
  size_t e = text.size();
  while (b < e && IsSpace(text[b])) ++b;
  while (e > b && IsSpace(text[e - 1])) --e;
  return text.substr(b, e - b);
}

std::vector<std::string_view> SplitWhitespace(std::string_view text) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string Join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string ReplaceAll(std::string_view text, std::string_view from,
                       std::string_view to) {
  std::string out;
  if (from.empty()) return std::string(text);
  size_t start = 0;
  for (;;) {
    size_t pos = text.find(from, start);
    if (pos == std::string_view::npos) break;
    out.append(text.substr(start, pos - start));
    out.append(to);
    start = pos + from.size();
  }
  out.append(text.substr(start));
  return out;
}

std::vector<TokenSpan> TokenizeSpans(std::string_view text) {
  std::vector<TokenSpan> spans;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = text[i];
    if (IsSpace(c)) {
      ++i;
    } else if (IsWordByte(c)) {
      size_t start = i;
      while (i < text.size() && IsWordByte(text[i])) ++i;
      spans.push_back({start, i});
    } else {
      spans.push_back({i, i + 1});
      ++i;
    }
  }
  return spans;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const TokenSpan &s : TokenizeSpans(text)) {
    out.emplace_back(text.substr(s.begin, s.end - s.begin));
  }
  return out;
}

std::vector<std::string> TokenizeLower(std::string_view text) {
  std::vector<std::string> out = Tokenize(text);
  for (std::string &t : out) t = ToLower(t);
  return out;
}

bool MatchesWholeWordAt(std::string_view haystack, std::string_view needle,
                        size_t at) {
  if (needle.empty() || at + needle.size() > haystack.size()) return false;
  if (!EqualsIgnoreCase(haystack.substr(at, needle.size()), needle)) {
    return false;
  }
  if (IsWordByte(needle.front()) && at > 0 && IsWordByte(haystack[at - 1])) {
    return false;
  }
  size_t end = at + needle.size();
  if (IsWordByte(needle.back()) && end < haystack.size() &&
      IsWordByte(haystack[end])) {
    return false;
  }
  return true;
}

size_t FindWholeWord(std::string_view haystack, std::string_view needle,
                     size_t from) {
  for (size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    if (MatchesWholeWordAt(haystack, needle, i)) return i;
  }
  return std::string_view::npos;
}

}  // namespace sparql2q
