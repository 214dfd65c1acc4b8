#include "evchain/text.hpp"

#include <cctype>

namespace evchain {

namespace {

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_edge_punct(unsigned char c) {
  return c < 0x80 && std::ispunct(c);
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_space_byte(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (c < 0x80) {
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == 0xC3 && i + 1 < text.size()) {
      // Latin-1 supplement capitals U+00C0..U+00DE fold by +0x20, except
      // the multiplication sign U+00D7.
      unsigned char next = static_cast<unsigned char>(text[i + 1]);
      out.push_back(static_cast<char>(c));
      if (next >= 0x80 && next <= 0x9E && next != 0x97) {
        out.push_back(static_cast<char>(next + 0x20));
      } else {
        out.push_back(static_cast<char>(next));
      }
      ++i;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::string strip_edge_punct(std::string_view token) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && is_edge_punct(static_cast<unsigned char>(token[begin]))) ++begin;
  while (end > begin && is_edge_punct(static_cast<unsigned char>(token[end - 1]))) --end;
  return std::string(token.substr(begin, end - begin));
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    std::size_t next = normalized.find(' ', pos);
    if (next == std::string_view::npos) next = normalized.size();
    std::string_view raw = normalized.substr(pos, next - pos);
    pos = next + 1;
    if (raw.empty()) continue;
    bool sigil = raw.front() == '#';
    while (!raw.empty() && raw.front() == '#') raw.remove_prefix(1);
    std::string core = strip_edge_punct(raw);
    if (core.empty()) continue;
    tokens.push_back(sigil ? "#" + core : core);
  }
  return tokens;
}

std::vector<std::string> embedding_tokens(std::string_view raw_text) {
  std::vector<std::string> tokens = tokenize(normalize(raw_text));
  for (auto& t : tokens) {
    if (!t.empty() && t.front() == '#') t.erase(t.begin());
  }
  return tokens;
}

std::vector<std::string> hashtags_from_text(std::string_view raw_text) {
  std::vector<std::string> tags;
  for (const auto& token : tokenize(normalize(raw_text))) {
    if (token.empty() || token.front() != '#') continue;
    std::string surface = token.substr(1);
    bool seen = false;
    for (const auto& t : tags) {
      if (t == surface) {
        seen = true;
        break;
      }
    }
    if (!seen) tags.push_back(surface);
  }
  return tags;
}

bool starts_uppercase(std::string_view raw_token) {
  std::size_t i = 0;
  while (i < raw_token.size() && is_edge_punct(static_cast<unsigned char>(raw_token[i]))) {
    if (raw_token[i] == '#') return false;
    ++i;
  }
  if (i >= raw_token.size()) return false;
  unsigned char c = static_cast<unsigned char>(raw_token[i]);
  if (c < 0x80) return std::isupper(c) != 0;
  if (c == 0xC3 && i + 1 < raw_token.size()) {
    unsigned char next = static_cast<unsigned char>(raw_token[i + 1]);
    return next >= 0x80 && next <= 0x9E && next != 0x97;
  }
  return false;
}

}  // namespace evchain
