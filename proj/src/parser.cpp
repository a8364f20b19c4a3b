#include <cctype>
#include <set>

#include "focal/surface.hpp"

namespace focal {

namespace {

enum class Tok { Ident, Number, Symbol, Postfix, End };

struct Token {
  Tok type;
  std::string text;
  Span span;
};

const std::set<std::string, std::less<>> kKeywords = {
    "focus", "postulate", "def", "Type", "fun", "let", "in", "as",
    "flat",  "sharp",     "Id",  "refl", "J"};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

[[noreturn]] void syntax_error(std::string_view code, std::string message, Span span) {
  throw TypeError(Diagnostic{std::string(code), std::move(message), "", span, std::nullopt});
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Span sp{line_, col_, line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", sp});
        return out;
      }
      char c = text_[pos_];
      Token tok;
      if (is_ident_start(c)) {
        tok = {Tok::Ident, take_while(is_ident_char), sp};
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        tok = {Tok::Number, take_while([](char d) { return std::isdigit(static_cast<unsigned char>(d)) != 0; }), sp};
      } else if (c == '.') {
        advance();
        std::string word;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          word = take_while([](char d) { return std::isdigit(static_cast<unsigned char>(d)) != 0; });
        } else if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
          word = take_while(is_ident_char);
        } else {
          syntax_error(code::kLexical, "expected a projection or modality after '.'", sp);
        }
        tok = {Tok::Postfix, word, sp};
      } else {
        static const char* kTwo[] = {":=", "->", "=>", "<="};
        std::string sym;
        for (const char* two : kTwo) {
          if (text_.substr(pos_, 2) == two) sym = two;
        }
        if (sym.empty()) {
          if (std::string_view("(){};:,*@").find(c) == std::string_view::npos) {
            syntax_error(code::kLexical, std::string("unexpected character '") + c + "'",
                         Span{line_, col_, line_, col_ + 1});
          }
          sym = std::string(1, c);
        }
        for (std::size_t i = 0; i < sym.size(); ++i) advance();
        tok = {Tok::Symbol, sym, sp};
      }
      tok.span.end_line = line_;
      tok.span.end_col = col_;
      out.push_back(std::move(tok));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (text_.substr(pos_, 2) == "--") {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  template <class Pred>
  std::string take_while(Pred pred) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && pred(text_[pos_])) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

Span join(Span a, Span b) { return Span{a.start_line, a.start_col, b.end_line, b.end_col}; }

RawPtr node(Kind k, Span sp, std::vector<std::string> binders, std::vector<RawPtr> args) {
  auto t = std::make_shared<RawTerm>();
  t->kind = k;
  t->span = sp;
  t->binders = std::move(binders);
  t->args = std::move(args);
  return t;
}

RawPtr modal(Kind k, RawFocus f, RawPtr arg, Span sp) {
  auto t = std::make_shared<RawTerm>();
  t->kind = k;
  t->focus = std::move(f);
  t->args = {std::move(arg)};
  t->span = sp;
  return t;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  bool at_end() const { return peek().type == Tok::End; }

  RawPtr term() { return level0(); }

  std::vector<RawDecl> decl() {
    const Token& kw = peek();
    if (is_kw("focus")) return {focus_decl()};
    if (is_kw("postulate")) {
      next();
      std::vector<std::string> names{ident("a name")};
      while (peek().type == Tok::Ident && !is_keyword(peek().text)) names.push_back(next().text);
      expect(":");
      RawPtr type = term();
      Span sp = join(kw.span, expect(";").span);
      std::vector<RawDecl> out;
      for (auto& n : names) {
        RawDecl d;
        d.tag = RawDecl::Tag::Postulate;
        d.name = n;
        d.type = type;
        d.span = sp;
        out.push_back(std::move(d));
      }
      return out;
    }
    if (is_kw("def")) {
      next();
      RawDecl d;
      d.tag = RawDecl::Tag::Definition;
      d.name = ident("a name");
      expect(":");
      d.type = term();
      expect(":=");
      d.body = term();
      d.span = join(kw.span, expect(";").span);
      return {std::move(d)};
    }
    syntax_error(code::kSyntax, "expected 'focus', 'postulate' or 'def' but found " + describe(kw),
                 kw.span);
  }

  // Error recovery: skip past the next ';'.
  void recover() {
    while (!at_end()) {
      if (next().text == ";") return;
    }
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

 private:
  static bool is_keyword(std::string_view s) { return kKeywords.contains(s); }

  bool is_kw(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Tok::Ident && t.text == kw;
  }
  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Tok::Symbol && t.text == s;
  }

  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    last_ = t.span;
    return t;
  }

  static std::string describe(const Token& t) {
    if (t.type == Tok::End) return "end of input";
    if (t.type == Tok::Postfix) return "'." + t.text + "'";
    return "'" + t.text + "'";
  }

  const Token& expect(std::string_view sym) {
    if (!is_sym(sym)) {
      syntax_error(code::kSyntax,
                   "expected '" + std::string(sym) + "' but found " + describe(peek()),
                   peek().span);
    }
    return next();
  }

  std::string ident(std::string_view what) {
    const Token& t = peek();
    if (t.type != Tok::Ident || is_keyword(t.text)) {
      syntax_error(code::kSyntax, "expected " + std::string(what) + " but found " + describe(t),
                   t.span);
    }
    return next().text;
  }

  RawDecl focus_decl() {
    Span start = next().span;
    RawDecl d;
    d.tag = RawDecl::Tag::Focus;
    std::vector<std::string> chain;
    bool ordered = false;
    while (!is_sym(";")) {
      if (is_sym("<=") && !chain.empty()) {
        next();
        ordered = true;
        chain.push_back(ident("a focus name"));
        d.relations.emplace_back(chain[chain.size() - 2], chain.back());
      } else if (!ordered) {
        chain.push_back(ident("a focus name"));
      } else {
        syntax_error(code::kSyntax, "expected '<=' or ';' but found " + describe(peek()),
                     peek().span);
      }
    }
    if (ordered && d.relations.size() + 1 != chain.size()) {
      syntax_error(code::kSyntax, "a focus order is written `focus g <= h;`", start);
    }
    if (!ordered) d.generators = chain;
    d.span = join(start, expect(";").span);
    return d;
  }

  RawFocus focus_set() {
    RawFocus f;
    Span start = expect("{").span;
    while (!is_sym("}")) f.names.push_back(ident("a focus name"));
    f.span = join(start, next().span);
    return f;
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.type == Tok::Ident) return !is_keyword(t.text);
    return is_sym("(");
  }

  // After '(' : one or more names then ':'.
  bool at_telescope() const {
    if (!is_sym("(")) return false;
    std::size_t i = 1;
    while (peek(i).type == Tok::Ident && !is_keyword(peek(i).text)) ++i;
    return i > 1 && is_sym(":", i);
  }

  struct Binder {
    std::string name;
    RawPtr type;  // may be null for lambdas
    Span span;
  };

  std::vector<Binder> telescope() {
    std::vector<Binder> out;
    while (at_telescope()) {
      Span start = next().span;
      std::vector<std::string> names;
      while (!is_sym(":")) names.push_back(next().text);
      next();
      RawPtr type = term();
      Span sp = join(start, expect(")").span);
      for (auto& n : names) out.push_back({n, type, sp});
    }
    return out;
  }

  RawPtr level0() {
    const Token& first = peek();
    if (is_kw("fun")) {
      next();
      std::vector<Binder> bs;
      while (!is_sym("=>")) {
        if (at_telescope()) {
          for (auto& b : telescope()) bs.push_back(std::move(b));
        } else {
          Span sp = peek().span;
          bs.push_back({ident("a binder"), nullptr, sp});
        }
      }
      if (bs.empty()) syntax_error(code::kSyntax, "'fun' needs at least one binder", first.span);
      next();
      RawPtr body = level0();
      for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
        body = node(Kind::Lam, join(first.span, last_), {it->name}, {it->type, body});
      }
      return body;
    }
    if (is_kw("let")) return let_flat();
    RawPtr lhs = level1();
    if (is_sym("->")) {
      next();
      RawPtr rhs = level0();
      return node(Kind::Pi, join(lhs->span, rhs->span), {"_"}, {lhs, rhs});
    }
    return lhs;
  }

  RawPtr let_flat() {
    Span start = next().span;
    if (!is_kw("flat")) {
      syntax_error(code::kSyntax, "expected 'flat' after 'let' but found " + describe(peek()),
                   peek().span);
    }
    next();
    auto t = std::make_shared<RawTerm>();
    t->kind = Kind::FlatElim;
    t->focus = focus_set();
    std::string u = ident("a binder");
    expect(":=");
    RawPtr scrutinee = level0();
    if (is_sym("@")) {
      next();
      t->crisp = focus_set();
    }
    std::string x;
    RawPtr motive;
    if (is_kw("as")) {
      next();
      x = ident("a binder");
      expect("=>");
      motive = level0();
    }
    if (!is_kw("in")) {
      syntax_error(code::kSyntax, "expected 'in' but found " + describe(peek()), peek().span);
    }
    next();
    RawPtr branch = level0();
    t->binders = {x, u};
    t->args = {motive, scrutinee, branch};
    t->span = join(start, branch->span);
    return t;
  }

  RawPtr level1() {
    if (at_telescope()) {
      Span start = peek().span;
      std::vector<Binder> bs = telescope();
      bool is_pi = is_sym("->");
      if (!is_pi && !is_sym("*")) {
        syntax_error(code::kSyntax, "expected '->' or '*' after a binder but found " + describe(peek()),
                     peek().span);
      }
      next();
      RawPtr body = is_pi ? level0() : level1();
      for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
        body = node(is_pi ? Kind::Pi : Kind::Sigma, join(start, body->span), {it->name},
                    {it->type, body});
      }
      return body;
    }
    RawPtr lhs = level2();
    if (is_sym("*")) {
      next();
      RawPtr rhs = level1();
      return node(Kind::Sigma, join(lhs->span, rhs->span), {"_"}, {lhs, rhs});
    }
    return lhs;
  }

  RawPtr level2() {
    RawPtr head = keyword_form();
    if (!head) head = level3();
    while (starts_atom()) {
      RawPtr a = level3();
      head = node(Kind::App, join(head->span, a->span), {}, {head, a});
    }
    return head;
  }

  // Type n, Id, refl, J, flat{..} A, sharp{..} A; nullptr otherwise.
  RawPtr keyword_form() {
    const Token& first = peek();
    if (is_kw("Type")) {
      next();
      if (peek().type != Tok::Number) {
        syntax_error(code::kSyntax, "expected a universe level after 'Type'", peek().span);
      }
      const Token& n = next();
      auto t = std::make_shared<RawTerm>();
      t->kind = Kind::Universe;
      try {
        t->level = static_cast<unsigned>(std::stoul(n.text));
      } catch (const std::exception&) {
        syntax_error(code::kSyntax, "universe level out of range", n.span);
      }
      t->span = join(first.span, n.span);
      return t;
    }
    if (is_kw("Id")) {
      next();
      RawPtr a = level3();
      RawPtr x = level3();
      RawPtr y = level3();
      return node(Kind::Id, join(first.span, y->span), {}, {a, x, y});
    }
    if (is_kw("refl")) {
      next();
      RawPtr a = level3();
      return node(Kind::Refl, join(first.span, a->span), {}, {a});
    }
    if (is_kw("J")) {
      next();
      expect("(");
      std::string x = ident("a binder");
      std::string y = ident("a binder");
      std::string p = ident("a binder");
      expect("=>");
      RawPtr motive = level0();
      expect(")");
      RawPtr c = level3();
      RawPtr q = level3();
      return node(Kind::J, join(first.span, q->span), {x, y, p}, {motive, c, q});
    }
    if (is_kw("flat") || is_kw("sharp")) {
      Kind k = is_kw("flat") ? Kind::Flat : Kind::Sharp;
      next();
      RawFocus f = focus_set();
      RawPtr a = level3();
      return modal(k, std::move(f), a, join(first.span, a->span));
    }
    return nullptr;
  }

  RawPtr level3() {
    RawPtr t = atom();
    while (peek().type == Tok::Postfix) {
      const Token& op = next();
      if (op.text == "1" || op.text == "2") {
        t = node(op.text == "1" ? Kind::Fst : Kind::Snd, join(t->span, op.span), {}, {t});
      } else if (op.text == "flat" || op.text == "sharp" || op.text == "unsharp") {
        Kind k = op.text == "flat"    ? Kind::FlatIntro
                 : op.text == "sharp" ? Kind::SharpIntro
                                      : Kind::SharpElim;
        RawFocus f = focus_set();
        t = modal(k, f, t, join(t->span, f.span));
      } else {
        syntax_error(code::kSyntax, "unknown postfix operator '." + op.text + "'", op.span);
      }
    }
    return t;
  }

  RawPtr atom() {
    const Token& t = peek();
    if (t.type == Tok::Ident && !is_keyword(t.text)) {
      next();
      auto v = std::make_shared<RawTerm>();
      v->kind = Kind::Var;
      v->name = t.text;
      v->span = t.span;
      return v;
    }
    if (is_sym("(")) {
      Span start = next().span;
      RawPtr inner = term();
      if (is_sym(",")) {
        std::vector<RawPtr> parts{inner};
        while (is_sym(",")) {
          next();
          parts.push_back(term());
        }
        Span sp = join(start, expect(")").span);
        RawPtr out = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;) {
          out = node(Kind::Pair, sp, {}, {parts[i], out});
        }
        return out;
      }
      Span sp = join(start, expect(")").span);
      auto copy = std::make_shared<RawTerm>(*inner);
      copy->span = sp;
      return copy;
    }
    syntax_error(code::kSyntax, "expected a term but found " + describe(t), t.span);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Span last_;
};

}  // namespace

ParseResult parse_file(std::string_view text, const std::string& file) {
  ParseResult out;
  std::vector<Token> toks;
  try {
    toks = Lexer(text).run();
  } catch (TypeError& err) {
    err.diagnostic().file = file;
    out.diagnostics.push_back(err.diagnostic());
    return out;
  }
  Parser p(std::move(toks));
  while (!p.at_end()) {
    try {
      for (auto& d : p.decl()) out.decls.push_back(std::move(d));
    } catch (TypeError& err) {
      err.diagnostic().file = file;
      out.diagnostics.push_back(err.diagnostic());
      p.recover();
    }
  }
  return out;
}

RawPtr parse_term(std::string_view text) {
  Parser p(Lexer(text).run());
  RawPtr t = p.term();
  if (!p.at_end()) {
    syntax_error(code::kSyntax, "unexpected input after the term", p.peek().span);
  }
  return t;
}

}  // namespace focal
