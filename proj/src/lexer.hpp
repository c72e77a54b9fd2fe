#pragma once

#include <string>
#include <vector>

namespace dcds {

// Token stream shared by the spec and formula parsers. `#` starts a line
// comment. Identifiers may begin with '$' (reserved names produced by
// transforms and the recycling engine use that prefix).
struct Token {
  enum class Kind {
    Ident,    // identifier or number or quoted atom (quoted flag set)
    Punct,    // one of ( ) { } , ; . / = and multi-char arrows & | !
    End,
  };
  Kind kind;
  std::string text;
  bool quoted = false;
  int line = 0;
  int col = 0;
};

struct LexError {
  std::string message;
  int line = 0;
  int col = 0;
};

// Tokenizes the whole input; returns false (and fills error) on a bad char.
bool lex(const std::string& input, std::vector<Token>* out, LexError* error);

}  // namespace dcds
