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

#ifndef SPARQL2Q_TEXT_H_
#define SPARQL2Q_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sparql2q {

// Byte span of a token inside its source text.
struct TokenSpan {
  size_t begin = 0;
  size_t end = 0;

  bool operator==(const TokenSpan &) const = default;
};

// True for ASCII letters, digits, underscore and any byte of a multi-byte
// UTF-8 sequence, so non-ASCII letters stay inside their word.
inline bool IsWordByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

inline bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// ASCII case folding; UTF-8 sequences pass through unchanged.
std::string ToLower(std::string_view text);
char AsciiLower(char c);
bool EqualsIgnoreCase(std::string_view a, std::string_view b);

std::string_view Trim(std::string_view text);
std::vector<std::string_view> SplitWhitespace(std::string_view text);
std::vector<std::string_view> Split(std::string_view text, char sep);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);
std::string ReplaceAll(std::string_view text, std::string_view from,
                       std::string_view to);

// Word tokenizer: maximal runs of word bytes, each other non-space byte is
// a token of its own.
std::vector<TokenSpan> TokenizeSpans(std::string_view text);
std::vector<std::string> Tokenize(std::string_view text);
std::vector<std::string> TokenizeLower(std::string_view text);

// Finds `needle` in `haystack` starting at `from`, ignoring ASCII case and
// requiring that the match is not glued to surrounding word bytes.
size_t FindWholeWord(std::string_view haystack, std::string_view needle,
                     size_t from = 0);
bool MatchesWholeWordAt(std::string_view haystack, std::string_view needle,
                        size_t at);

}  // namespace sparql2q

#endif  // SPARQL2Q_TEXT_H_
