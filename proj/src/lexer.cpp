#include <cctype>
#include <unordered_map>

#include "apifsm/error.hpp"
#include "apifsm/source_model.hpp"

namespace apifsm {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::StringLiteral: return "string literal";
    case TokenKind::Number: return "number";
    case TokenKind::KwClass: return "'class'";
    case TokenKind::KwIf: return "'if'";
    case TokenKind::KwElse: return "'else'";
    case TokenKind::KwWhile: return "'while'";
    case TokenKind::KwNew: return "'new'";
    case TokenKind::KwNull: return "'null'";
    case TokenKind::KwThis: return "'this'";
    case TokenKind::KwVoid: return "'void'";
    case TokenKind::KwReserved: return "keyword";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Comma: return "','";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Less: return "'<'";
    case TokenKind::Greater: return "'>'";
    case TokenKind::Assign: return "'='";
    case TokenKind::Eq: return "'=='";
    case TokenKind::Neq: return "'!='";
    case TokenKind::Not: return "'!'";
    case TokenKind::AndAnd: return "'&&'";
    case TokenKind::OrOr: return "'||'";
    case TokenKind::At: return "'@'";
    case TokenKind::Other: return "operator";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = [] {
    std::unordered_map<std::string_view, TokenKind> t{
        {"class", TokenKind::KwClass}, {"if", TokenKind::KwIf},     {"else", TokenKind::KwElse},
        {"while", TokenKind::KwWhile}, {"new", TokenKind::KwNew},   {"null", TokenKind::KwNull},
        {"this", TokenKind::KwThis},   {"void", TokenKind::KwVoid},
    };
    for (std::string_view kw :
         {"abstract", "assert",    "boolean",   "break",      "byte",      "case",      "catch",  "char",
          "continue", "default",   "do",        "double",     "enum",      "extends",   "final",  "finally",
          "float",    "for",       "goto",      "implements", "import",    "instanceof", "int",   "interface",
          "long",     "native",    "package",   "private",    "protected", "public",    "return", "short",
          "static",   "strictfp",  "super",     "switch",     "synchronized", "throw",  "throws", "transient",
          "try",      "volatile",  "true",      "false",      "const"})
      t.emplace(kw, TokenKind::KwReserved);
    return t;
  }();
  return table;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  std::size_t line_start = 0;

  auto column = [&](std::size_t at) { return static_cast<int>(at - line_start) + 1; };
  auto push = [&](TokenKind kind, std::size_t start, std::size_t end) {
    out.push_back(Token{kind, std::string(src.substr(start, end - start)), line, column(start)});
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      int start_line = line, start_col = column(i);
      i += 2;
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
        if (src[i] == '\n') {
          ++line;
          line_start = i + 1;
        }
        ++i;
      }
      if (i + 1 >= src.size()) throw LexError("unterminated block comment", start_line, start_col);
      i += 2;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < src.size() && ident_part(src[i])) ++i;
      auto word = src.substr(start, i - start);
      auto kw = keywords().find(word);
      push(kw == keywords().end() ? TokenKind::Identifier : kw->second, start, i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && (ident_part(src[i]) || src[i] == '.')) ++i;
      push(TokenKind::Number, start, i);
      continue;
    }
    if (c == '"' || c == '\'') {
      ++i;
      while (i < src.size() && src[i] != c && src[i] != '\n') {
        if (src[i] == '\\') ++i;
        ++i;
      }
      if (i >= src.size() || src[i] != c) throw LexError("unterminated literal", line, column(start));
      ++i;
      push(c == '"' ? TokenKind::StringLiteral : TokenKind::Other, start, i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "==" || two == "!=" || two == "&&" || two == "||") {
      i += 2;
      push(two == "==" ? TokenKind::Eq : two == "!=" ? TokenKind::Neq : two == "&&" ? TokenKind::AndAnd : TokenKind::OrOr,
           start, i);
      continue;
    }
    TokenKind single = TokenKind::End;
    switch (c) {
      case '.': single = TokenKind::Dot; break;
      case ',': single = TokenKind::Comma; break;
      case ';': single = TokenKind::Semicolon; break;
      case '(': single = TokenKind::LParen; break;
      case ')': single = TokenKind::RParen; break;
      case '{': single = TokenKind::LBrace; break;
      case '}': single = TokenKind::RBrace; break;
      case '<': single = TokenKind::Less; break;
      case '>': single = TokenKind::Greater; break;
      case '=': single = TokenKind::Assign; break;
      case '!': single = TokenKind::Not; break;
      case '@': single = TokenKind::At; break;
      default: break;
    }
    if (single != TokenKind::End) {
      ++i;
      push(single, start, i);
      continue;
    }
    static constexpr std::string_view kOtherPunct = "+-*/%^&|~?:[]";
    if (kOtherPunct.find(c) != std::string_view::npos) {
      ++i;
      while (i < src.size() && kOtherPunct.find(src[i]) != std::string_view::npos) ++i;
      push(TokenKind::Other, start, i);
      continue;
    }
    std::string shown = static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f
                            ? "byte 0x" + [&] {
                                static constexpr char hex[] = "0123456789abcdef";
                                auto u = static_cast<unsigned char>(c);
                                return std::string{hex[u >> 4], hex[u & 15]};
                              }()
                            : std::string("'") + c + "'";
    throw LexError("unrecognized character " + shown, line, column(i));
  }
  out.push_back(Token{TokenKind::End, "", line, column(i)});
  return out;
}

}  // namespace apifsm
