#include "lexer.hpp"

#include <cctype>

namespace dcds {

bool lex(const std::string& input, std::vector<Token>* out, LexError* error) {
  out->clear();
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (input[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < input.size()) {
    char c = input[i];
    if (c == '#') {
      while (i < input.size() && input[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int tline = line;
    int tcol = col;
    if (c == '\'') {
      size_t end = input.find('\'', i + 1);
      if (end == std::string::npos) {
        if (error) *error = {"unterminated quoted atom", tline, tcol};
        return false;
      }
      std::string text = input.substr(i + 1, end - i - 1);
      advance(end - i + 1);
      out->push_back({Token::Kind::Ident, text, true, tline, tcol});
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      size_t start = i;
      while (i < input.size()) {
        char d = input[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '$') {
          advance(1);
        } else {
          break;
        }
      }
      out->push_back({Token::Kind::Ident, input.substr(start, i - start), false, tline, tcol});
      continue;
    }
    // Multi-char operators first.
    auto starts = [&](const char* s) { return input.compare(i, std::string(s).size(), s) == 0; };
    const char* multi[] = {"~>", "=>", "->"};
    bool matched = false;
    for (const char* op : multi) {
      if (starts(op)) {
        out->push_back({Token::Kind::Punct, op, false, tline, tcol});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    std::string single = "(){},;./=&|!";
    if (single.find(c) != std::string::npos) {
      out->push_back({Token::Kind::Punct, std::string(1, c), false, tline, tcol});
      advance(1);
      continue;
    }
    if (error) *error = {std::string("unexpected character '") + c + "'", tline, tcol};
    return false;
  }
  out->push_back({Token::Kind::End, "", false, line, col});
  return true;
}

}  // namespace dcds
