#include "facto/speclang.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "facto/setlike.hpp"

// Tokenizer, recursive-descent parser, canonical pretty-printer and the
// loader that resolves a parsed document into live engine structures.

namespace facto::spec {

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error(fmt("{}:{}: {}", l, c, msg)), line(l), col(c) {}

namespace {

struct Token {
  enum Kind { Ident, Punct, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_char(c)) {
      size_t j = i;
      while (j < text.size()) {
        if (ident_char(text[j])) {
          ++j;
        } else if (text[j] == '-' && j + 1 < text.size() &&
                   ident_char(text[j + 1])) {
          // hyphenated keywords like comonad-product; "->" wins below
          ++j;
        } else {
          break;
        }
      }
      t.kind = Token::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Token::Punct;
      t.text = "->";
      advance(2);
    } else if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Token::Punct;
      t.text = "=>";
      advance(2);
    } else if (std::string("{}():;,=.*").find(c) != std::string::npos) {
      t.kind = Token::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(fmt("unexpected character '{}'", std::string(1, c)),
                       line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Ast parse_document() {
    Ast ast;
    while (peek().kind != Token::End) {
      Decl d;
      d.line = peek().line;
      const std::string kw = expect_ident("declaration keyword");
      if (kw == "category")
        d.node = parse_category();
      else if (kw == "functor")
        d.node = parse_functor();
      else if (kw == "nattrans")
        d.node = parse_nattrans();
      else if (kw == "adjunction")
        d.node = parse_adjunction();
      else if (kw == "monad")
        d.node = parse_monad();
      else if (kw == "comonad")
        d.node = parse_comonad();
      else if (kw == "comonad-product")
        d.node = parse_comonad_product();
      else if (kw == "class")
        d.node = parse_class();
      else if (kw == "dfs")
        d.node = parse_dfs();
      else if (kw == "qfs")
        d.node = parse_qfs();
      else if (kw == "presheaf")
        d.node = parse_presheaf();
      else if (kw == "group")
        d.node = parse_group();
      else if (kw == "window")
        d.node = parse_window();
      else
        throw ParseError(fmt("unknown declaration '{}'", kw), d.line, 1);
      ast.decls.push_back(std::move(d));
    }
    return ast;
  }

 private:
  const Token& peek(int ahead = 0) const {
    size_t j = pos_ + ahead;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  std::string expect_ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Token::Ident)
      throw ParseError(fmt("expected {}, found '{}'", what, t.text), t.line,
                       t.col);
    return take().text;
  }
  void expect_punct(const std::string& p) {
    const Token& t = peek();
    if (t.kind != Token::Punct || t.text != p)
      throw ParseError(fmt("expected '{}', found '{}'", p, t.text), t.line,
                       t.col);
    take();
  }
  bool at_punct(const std::string& p) const {
    return peek().kind == Token::Punct && peek().text == p;
  }
  bool at_ident(const std::string& s) const {
    return peek().kind == Token::Ident && peek().text == s;
  }

  int expect_int(const std::string& what) {
    const Token& t = peek();
    std::string s = expect_ident(what);
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError(fmt("expected {}, found '{}'", what, s), t.line,
                         t.col);
    return std::stoi(s);
  }

  CategoryDecl parse_category() {
    CategoryDecl c;
    c.name = expect_ident("category name");
    if (at_punct("=")) {
      take();
      const Token& t = peek();
      c.builtin = expect_ident("builtin category generator");
      if (c.builtin != "sets" && c.builtin != "chain" &&
          c.builtin != "walking_arrow" && c.builtin != "terminal")
        throw ParseError(fmt("unknown builtin category '{}'", c.builtin),
                         t.line, t.col);
      expect_punct("(");
      while (!at_punct(")")) {
        c.builtin_args.push_back(expect_int("builtin argument"));
        if (at_punct(",")) take();
      }
      expect_punct(")");
      expect_punct(";");
      return c;
    }
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("category entry");
      if (kw == "objects") {
        expect_punct(":");
        while (!at_punct(";")) c.objects.push_back(expect_ident("object name"));
      } else if (kw == "mor") {
        CategoryDecl::MorEntry m;
        m.name = expect_ident("morphism name");
        expect_punct(":");
        m.dom = expect_ident("domain object");
        expect_punct("->");
        m.cod = expect_ident("codomain object");
        c.mors.push_back(std::move(m));
      } else if (kw == "compose") {
        CategoryDecl::ComposeEntry e;
        e.g = expect_ident("outer morphism");
        expect_punct(".");
        e.f = expect_ident("inner morphism");
        expect_punct("=");
        e.gf = expect_ident("composite morphism");
        c.composes.push_back(std::move(e));
      } else if (kw == "generate") {
        expect_punct(":");
        const Token& t = peek();
        if (expect_ident("generate directive") != "compose")
          throw ParseError("only 'generate: compose' is supported", t.line,
                           t.col);
        c.generate_compose = true;
      } else {
        throw ParseError(fmt("unknown category entry '{}'", kw), peek().line,
                         peek().col);
      }
      expect_punct(";");
    }
    expect_punct("}");
    return c;
  }

  FunctorDecl parse_functor() {
    FunctorDecl f;
    f.name = expect_ident("functor name");
    if (at_punct("=")) {
      take();
      const Token& t = peek();
      f.builtin = expect_ident("builtin functor");
      if (f.builtin != "id" && f.builtin != "compose")
        throw ParseError(fmt("unknown builtin functor '{}'", f.builtin),
                         t.line, t.col);
      expect_punct("(");
      while (!at_punct(")")) {
        f.builtin_args.push_back(expect_ident("builtin argument"));
        if (at_punct(",")) take();
      }
      expect_punct(")");
      expect_punct(";");
      return f;
    }
    expect_punct(":");
    f.src = expect_ident("source category");
    expect_punct("->");
    f.dst = expect_ident("target category");
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("functor entry");
      std::string a = expect_ident("name");
      expect_punct("->");
      std::string b = expect_ident("name");
      if (kw == "obj")
        f.obj_entries.emplace_back(std::move(a), std::move(b));
      else if (kw == "mor")
        f.mor_entries.emplace_back(std::move(a), std::move(b));
      else
        throw ParseError(fmt("unknown functor entry '{}'", kw), peek().line,
                         peek().col);
      expect_punct(";");
    }
    expect_punct("}");
    return f;
  }

  NatTransDecl parse_nattrans() {
    NatTransDecl n;
    n.name = expect_ident("nattrans name");
    expect_punct(":");
    n.src = expect_ident("source functor");
    expect_punct("=>");
    n.dst = expect_ident("target functor");
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("nattrans entry");
      if (kw != "at")
        throw ParseError(fmt("unknown nattrans entry '{}'", kw), peek().line,
                         peek().col);
      std::string a = expect_ident("object name");
      expect_punct("=");
      std::string u = expect_ident("morphism name");
      n.at.emplace_back(std::move(a), std::move(u));
      expect_punct(";");
    }
    expect_punct("}");
    return n;
  }

  AdjunctionDecl parse_adjunction() {
    AdjunctionDecl a;
    a.name = expect_ident("adjunction name");
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("adjunction entry");
      expect_punct("=");
      std::string v = expect_ident("name");
      if (kw == "left")
        a.left = v;
      else if (kw == "right")
        a.right = v;
      else if (kw == "unit")
        a.unit = v;
      else if (kw == "counit")
        a.counit = v;
      else
        throw ParseError(fmt("unknown adjunction entry '{}'", kw),
                         peek().line, peek().col);
      expect_punct(";");
    }
    expect_punct("}");
    return a;
  }

  MonadDecl parse_monad() {
    MonadDecl m;
    m.name = expect_ident("monad name");
    if (expect_ident("'on'") != "on")
      throw ParseError("expected 'on'", peek().line, peek().col);
    m.cat = expect_ident("category name");
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("monad entry");
      if (kw == "T") {
        expect_punct("=");
        m.T = expect_ident("functor name");
      } else if (kw == "unit" || kw == "mult") {
        std::string a = expect_ident("object name");
        expect_punct("=");
        std::string u = expect_ident("morphism name");
        (kw == "unit" ? m.unit : m.mult).emplace_back(std::move(a),
                                                      std::move(u));
      } else {
        throw ParseError(fmt("unknown monad entry '{}'", kw), peek().line,
                         peek().col);
      }
      expect_punct(";");
    }
    expect_punct("}");
    return m;
  }

  ComonadDecl parse_comonad() {
    ComonadDecl m;
    m.name = expect_ident("comonad name");
    if (expect_ident("'on'") != "on")
      throw ParseError("expected 'on'", peek().line, peek().col);
    m.cat = expect_ident("category name");
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("comonad entry");
      if (kw == "G") {
        expect_punct("=");
        m.G = expect_ident("functor name");
      } else if (kw == "counit" || kw == "comult") {
        std::string a = expect_ident("object name");
        expect_punct("=");
        std::string u = expect_ident("morphism name");
        (kw == "counit" ? m.counit : m.comult)
            .emplace_back(std::move(a), std::move(u));
      } else {
        throw ParseError(fmt("unknown comonad entry '{}'", kw), peek().line,
                         peek().col);
      }
      expect_punct(";");
    }
    expect_punct("}");
    return m;
  }

  ComonadProductDecl parse_comonad_product() {
    ComonadProductDecl c;
    c.name = expect_ident("comonad-product name");
    if (expect_ident("'on'") != "on")
      throw ParseError("expected 'on'", peek().line, peek().col);
    c.window = expect_ident("window name");
    expect_punct("=");
    c.factor = expect_ident("factor presheaf name");
    expect_punct(";");
    return c;
  }

  ClassDecl parse_class() {
    ClassDecl c;
    c.name = expect_ident("class name");
    if (expect_ident("'in'") != "in")
      throw ParseError("expected 'in'", peek().line, peek().col);
    c.cat = expect_ident("category name");
    expect_punct("=");
    if (at_punct("{")) {
      take();
      c.expr.kind = "literal";
      while (!at_punct("}")) c.expr.args.push_back(expect_ident("morphism"));
      expect_punct("}");
    } else {
      const Token& t = peek();
      c.expr.kind = expect_ident("class expression");
      static const std::vector<std::string> kinds = {
          "epi",       "mono",      "iso",       "all",
          "none",      "perp_right", "perp_left", "box_right",
          "box_left",  "compose",   "union",     "intersect"};
      bool known = false;
      for (const auto& k : kinds) known = known || k == c.expr.kind;
      if (!known)
        throw ParseError(fmt("unknown class expression '{}'", c.expr.kind),
                         t.line, t.col);
      expect_punct("(");
      while (!at_punct(")")) {
        c.expr.args.push_back(expect_ident("argument"));
        if (at_punct(",")) take();
      }
      expect_punct(")");
    }
    expect_punct(";");
    return c;
  }

  DfsDecl parse_dfs() {
    DfsDecl d;
    d.name = expect_ident("dfs name");
    if (expect_ident("'in'") != "in")
      throw ParseError("expected 'in'", peek().line, peek().col);
    d.cat = expect_ident("category name");
    expect_punct("=");
    expect_punct("(");
    d.E = expect_ident("left class");
    expect_punct(",");
    d.J = expect_ident("middle class");
    expect_punct(",");
    d.M = expect_ident("right class");
    expect_punct(")");
    expect_punct(";");
    return d;
  }

  QfsDecl parse_qfs() {
    QfsDecl q;
    q.name = expect_ident("qfs name");
    if (expect_ident("'in'") != "in")
      throw ParseError("expected 'in'", peek().line, peek().col);
    q.cat = expect_ident("category name");
    expect_punct("=");
    expect_punct("(");
    q.Cof = expect_ident("cofibration class");
    expect_punct(",");
    q.W = expect_ident("weak equivalence class");
    expect_punct(",");
    q.Fib = expect_ident("fibration class");
    expect_punct(")");
    expect_punct(";");
    return q;
  }

  PresheafDecl parse_presheaf() {
    PresheafDecl p;
    p.name = expect_ident("presheaf name");
    if (expect_ident("'on'") != "on")
      throw ParseError("expected 'on'", peek().line, peek().col);
    p.base = expect_ident("base category");
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("presheaf entry");
      if (kw == "at") {
        PresheafDecl::AtEntry e;
        e.obj = expect_ident("object name");
        expect_punct("=");
        expect_punct("{");
        while (!at_punct("}")) e.elems.push_back(expect_ident("element"));
        expect_punct("}");
        p.at.push_back(std::move(e));
      } else if (kw == "restrict") {
        PresheafDecl::ResEntry e;
        e.mor = expect_ident("morphism name");
        expect_punct(":");
        while (true) {
          std::string a = expect_ident("element");
          expect_punct("->");
          std::string b = expect_ident("element");
          e.map.emplace_back(std::move(a), std::move(b));
          if (!at_punct(",")) break;
          take();
        }
        p.restricts.push_back(std::move(e));
      } else {
        throw ParseError(fmt("unknown presheaf entry '{}'", kw), peek().line,
                         peek().col);
      }
      expect_punct(";");
    }
    expect_punct("}");
    return p;
  }

  GroupDecl parse_group() {
    GroupDecl g;
    g.name = expect_ident("group name");
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("group entry");
      expect_punct(":");
      if (kw == "elements") {
        while (!at_punct(";")) g.elements.push_back(expect_ident("element"));
      } else if (kw == "table") {
        while (true) {
          GroupDecl::TableEntry e;
          e.a = expect_ident("element");
          expect_punct("*");
          e.b = expect_ident("element");
          expect_punct("=");
          e.c = expect_ident("element");
          g.table.push_back(std::move(e));
          if (!at_punct(",")) break;
          take();
        }
      } else {
        throw ParseError(fmt("unknown group entry '{}'", kw), peek().line,
                         peek().col);
      }
      expect_punct(";");
    }
    expect_punct("}");
    return g;
  }

  WindowDecl parse_window() {
    WindowDecl w;
    w.name = expect_ident("window name");
    if (expect_ident("'on'") != "on")
      throw ParseError("expected 'on'", peek().line, peek().col);
    w.base = expect_ident("base category");
    expect_punct("{");
    while (!at_punct("}")) {
      const std::string kw = expect_ident("window entry");
      if (kw == "seeds") {
        expect_punct(":");
        while (!at_punct(";")) w.seeds.push_back(expect_ident("presheaf"));
      } else if (kw == "max_card") {
        expect_punct("=");
        w.max_card = expect_int("max_card value");
      } else if (kw == "max_objects") {
        expect_punct("=");
        w.max_objects = expect_int("max_objects value");
      } else {
        throw ParseError(fmt("unknown window entry '{}'", kw), peek().line,
                         peek().col);
      }
      expect_punct(";");
    }
    expect_punct("}");
    return w;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

Ast parse(const std::string& text) {
  return Parser(tokenize(text)).parse_document();
}

// -- pretty printer -----------------------------------------------------------

namespace {

struct PrettyVisitor {
  std::ostringstream& out;

  void operator()(const CategoryDecl& c) {
    if (!c.builtin.empty()) {
      out << "category " << c.name << " = " << c.builtin << "(";
      for (size_t i = 0; i < c.builtin_args.size(); ++i)
        out << (i ? ", " : "") << c.builtin_args[i];
      out << ");\n";
      return;
    }
    out << "category " << c.name << " {\n  objects:";
    for (const auto& o : c.objects) out << " " << o;
    out << ";\n";
    for (const auto& m : c.mors)
      out << "  mor " << m.name << " : " << m.dom << " -> " << m.cod << ";\n";
    for (const auto& e : c.composes)
      out << "  compose " << e.g << "." << e.f << " = " << e.gf << ";\n";
    if (c.generate_compose) out << "  generate: compose;\n";
    out << "}\n";
  }

  void operator()(const FunctorDecl& f) {
    if (!f.builtin.empty()) {
      out << "functor " << f.name << " = " << f.builtin << "(";
      for (size_t i = 0; i < f.builtin_args.size(); ++i)
        out << (i ? ", " : "") << f.builtin_args[i];
      out << ");\n";
      return;
    }
    out << "functor " << f.name << " : " << f.src << " -> " << f.dst
        << " {\n";
    for (const auto& [a, b] : f.obj_entries)
      out << "  obj " << a << " -> " << b << ";\n";
    for (const auto& [a, b] : f.mor_entries)
      out << "  mor " << a << " -> " << b << ";\n";
    out << "}\n";
  }

  void operator()(const NatTransDecl& n) {
    out << "nattrans " << n.name << " : " << n.src << " => " << n.dst
        << " {\n";
    for (const auto& [a, u] : n.at) out << "  at " << a << " = " << u << ";\n";
    out << "}\n";
  }

  void operator()(const AdjunctionDecl& a) {
    out << "adjunction " << a.name << " {\n  left = " << a.left
        << ";\n  right = " << a.right << ";\n  unit = " << a.unit
        << ";\n  counit = " << a.counit << ";\n}\n";
  }

  void operator()(const MonadDecl& m) {
    out << "monad " << m.name << " on " << m.cat << " {\n  T = " << m.T
        << ";\n";
    for (const auto& [a, u] : m.unit)
      out << "  unit " << a << " = " << u << ";\n";
    for (const auto& [a, u] : m.mult)
      out << "  mult " << a << " = " << u << ";\n";
    out << "}\n";
  }

  void operator()(const ComonadDecl& m) {
    out << "comonad " << m.name << " on " << m.cat << " {\n  G = " << m.G
        << ";\n";
    for (const auto& [a, u] : m.counit)
      out << "  counit " << a << " = " << u << ";\n";
    for (const auto& [a, u] : m.comult)
      out << "  comult " << a << " = " << u << ";\n";
    out << "}\n";
  }

  void operator()(const ClassDecl& c) {
    out << "class " << c.name << " in " << c.cat << " = ";
    if (c.expr.kind == "literal") {
      out << "{";
      for (size_t i = 0; i < c.expr.args.size(); ++i)
        out << (i ? " " : "") << c.expr.args[i];
      out << "}";
    } else {
      out << c.expr.kind << "(";
      for (size_t i = 0; i < c.expr.args.size(); ++i)
        out << (i ? ", " : "") << c.expr.args[i];
      out << ")";
    }
    out << ";\n";
  }

  void operator()(const DfsDecl& d) {
    out << "dfs " << d.name << " in " << d.cat << " = (" << d.E << ", "
        << d.J << ", " << d.M << ");\n";
  }

  void operator()(const QfsDecl& q) {
    out << "qfs " << q.name << " in " << q.cat << " = (" << q.Cof << ", "
        << q.W << ", " << q.Fib << ");\n";
  }

  void operator()(const PresheafDecl& p) {
    out << "presheaf " << p.name << " on " << p.base << " {\n";
    for (const auto& e : p.at) {
      out << "  at " << e.obj << " = {";
      for (size_t i = 0; i < e.elems.size(); ++i)
        out << (i ? " " : "") << e.elems[i];
      out << "};\n";
    }
    for (const auto& e : p.restricts) {
      out << "  restrict " << e.mor << " : ";
      for (size_t i = 0; i < e.map.size(); ++i)
        out << (i ? ", " : "") << e.map[i].first << " -> " << e.map[i].second;
      out << ";\n";
    }
    out << "}\n";
  }

  void operator()(const GroupDecl& g) {
    out << "group " << g.name << " {\n  elements:";
    for (const auto& e : g.elements) out << " " << e;
    out << ";\n";
    if (!g.table.empty()) {
      out << "  table: ";
      for (size_t i = 0; i < g.table.size(); ++i)
        out << (i ? ", " : "") << g.table[i].a << "*" << g.table[i].b << " = "
            << g.table[i].c;
      out << ";\n";
    }
    out << "}\n";
  }

  void operator()(const WindowDecl& w) {
    out << "window " << w.name << " on " << w.base << " {\n";
    if (!w.seeds.empty()) {
      out << "  seeds:";
      for (const auto& s : w.seeds) out << " " << s;
      out << ";\n";
    }
    out << "  max_card = " << w.max_card << ";\n  max_objects = "
        << w.max_objects << ";\n}\n";
  }

  void operator()(const ComonadProductDecl& c) {
    out << "comonad-product " << c.name << " on " << c.window << " = "
        << c.factor << ";\n";
  }
};

}  // namespace

std::string pretty(const Ast& ast) {
  std::ostringstream out;
  bool first = true;
  for (const auto& d : ast.decls) {
    if (!first) out << "\n";
    first = false;
    PrettyVisitor v{out};
    std::visit(v, d.node);
  }
  return out.str();
}

// -- document lookups ---------------------------------------------------------

const FinCategory* SpecDocument::find_catlike(const std::string& name,
                                              std::string* desc) const {
  for (size_t i = 0; i < categories.size(); ++i)
    if (category_names[i] == name) {
      if (desc)
        *desc = fmt("category {} ({} objects, {} morphisms)", name,
                    categories[i].obj_count(), categories[i].mor_count());
      return &categories[i];
    }
  for (const auto& w : windows)
    if (w.name == name) {
      if (desc)
        *desc = fmt("window {} over {} ({} objects, {} morphisms)", name,
                    w.base, w.w.cat.obj_count(), w.w.cat.mor_count());
      return &w.w.cat;
    }
  return nullptr;
}

const ToposWindow* SpecDocument::find_window(const std::string& name) const {
  for (const auto& w : windows)
    if (w.name == name) return &w.w;
  return nullptr;
}

namespace {
template <typename Seq>
int index_by_name(const Seq& seq, const std::string& name) {
  for (size_t i = 0; i < seq.size(); ++i)
    if (seq[i].name == name) return static_cast<int>(i);
  return -1;
}
}  // namespace

int SpecDocument::class_index(const std::string& n) const {
  return index_by_name(classes, n);
}
int SpecDocument::dfs_index(const std::string& n) const {
  return index_by_name(dfss, n);
}
int SpecDocument::qfs_index(const std::string& n) const {
  return index_by_name(qfss, n);
}
int SpecDocument::monad_index(const std::string& n) const {
  return index_by_name(monads, n);
}
int SpecDocument::comonad_index(const std::string& n) const {
  return index_by_name(comonads, n);
}
int SpecDocument::group_index(const std::string& n) const {
  return index_by_name(groups, n);
}
int SpecDocument::presheaf_index(const std::string& n) const {
  return index_by_name(presheaves, n);
}
int SpecDocument::wcomonad_index(const std::string& n) const {
  return index_by_name(wcomonads, n);
}
int SpecDocument::functor_index(const std::string& n) const {
  for (size_t i = 0; i < functors.size(); ++i)
    if (functor_names[i] == n) return static_cast<int>(i);
  return -1;
}
int SpecDocument::adjunction_index(const std::string& n) const {
  for (size_t i = 0; i < adjunctions.size(); ++i)
    if (adjunction_names[i] == n) return static_cast<int>(i);
  return -1;
}

int SpecDocument::resolve_mor(const FinCategory& C,
                              const std::string& token) const {
  int byname = C.find_mor(token);
  if (byname >= 0) return byname;
  std::string digits = token;
  if (!digits.empty() && digits[0] == '#') digits = digits.substr(1);
  if (digits.empty()) return -1;
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
  int id = std::stoi(digits);
  return id < C.mor_count() ? id : -1;
}

// -- loader -------------------------------------------------------------------

namespace {

struct Loader {
  SpecDocument& doc;
  int line = 0;

  [[noreturn]] void err(const std::string& msg) const {
    throw ParseError(msg, line, 1);
  }

  void check_fresh(const std::string& name) const {
    bool taken =
        doc.find_catlike(name) || doc.class_index(name) >= 0 ||
        doc.dfs_index(name) >= 0 || doc.qfs_index(name) >= 0 ||
        doc.monad_index(name) >= 0 || doc.comonad_index(name) >= 0 ||
        doc.group_index(name) >= 0 || doc.presheaf_index(name) >= 0 ||
        doc.wcomonad_index(name) >= 0 || doc.functor_index(name) >= 0 ||
        doc.adjunction_index(name) >= 0;
    for (const auto& n : doc.nattrans_names) taken = taken || n == name;
    if (taken) err(fmt("duplicate declaration name '{}'", name));
  }

  const FinCategory& catlike(const std::string& name) const {
    const FinCategory* c = doc.find_catlike(name);
    if (!c) err(fmt("unknown category '{}'", name));
    return *c;
  }

  const FinCategory& plain_category(const std::string& name) const {
    for (size_t i = 0; i < doc.categories.size(); ++i)
      if (doc.category_names[i] == name) return doc.categories[i];
    err(fmt("unknown category '{}'", name));
  }

  int mor(const FinCategory& C, const std::string& name) const {
    int f = doc.resolve_mor(C, name);
    if (f < 0) err(fmt("unknown morphism '{}'", name));
    return f;
  }
  int obj(const FinCategory& C, const std::string& name) const {
    int a = C.find_obj(name);
    if (a < 0) err(fmt("unknown object '{}'", name));
    return a;
  }

  void operator()(const CategoryDecl& d) {
    check_fresh(d.name);
    FinCategory C;
    if (!d.builtin.empty()) {
      auto arg = [&](size_t i, const char* what) {
        if (i >= d.builtin_args.size())
          err(fmt("builtin '{}' needs a {} argument", d.builtin, what));
        return d.builtin_args[i];
      };
      if (d.builtin == "sets")
        C = SetSkeleton(arg(0, "size")).cat();
      else if (d.builtin == "chain")
        C = chain_poset(arg(0, "length"));
      else if (d.builtin == "walking_arrow")
        C = walking_arrow();
      else
        C = terminal_category();
    } else {
      std::vector<int> objs;
      for (const auto& o : d.objects) {
        if (C.find_obj(o) >= 0) err(fmt("duplicate object '{}'", o));
        objs.push_back(C.add_object(o));
      }
      for (const auto& m : d.mors) {
        if (C.find_mor(m.name) >= 0) err(fmt("duplicate morphism '{}'", m.name));
        C.add_morphism(obj(C, m.dom), obj(C, m.cod), m.name);
      }
      for (const auto& e : d.composes) {
        int g = mor(C, e.g), f = mor(C, e.f), gf = mor(C, e.gf);
        if (C.cod(f) != C.dom(g))
          err(fmt("compose {}.{}: morphisms are not composable", e.g, e.f));
        C.set_compose(g, f, gf);
      }
      C.finalize();
      if (d.generate_compose) {
        // infer composites that are forced by hom-set shape (posets and the
        // like); ambiguity is an error, never a guess
        for (int f = 0; f < C.mor_count(); ++f)
          for (int g = 0; g < C.mor_count(); ++g) {
            if (!C.composable(g, f) || C.compose(g, f) >= 0) continue;
            const auto& cands = C.hom(C.dom(f), C.cod(g));
            if (cands.size() != 1)
              err(fmt("generate: compose is ambiguous for {}.{}",
                      C.mor_name(g), C.mor_name(f)));
            C.set_compose(g, f, cands[0]);
          }
        C.finalize();
      }
      for (int f = 0; f < C.mor_count(); ++f)
        for (int g = 0; g < C.mor_count(); ++g)
          if (C.composable(g, f) && C.compose(g, f) < 0)
            err(fmt("missing composition entry {}.{}", C.mor_name(g),
                    C.mor_name(f)));
    }
    for (const auto& v : validate_category(C).violations)
      doc.load_report.fail(fmt("category {}: {}", d.name, v));
    doc.categories.push_back(std::move(C));
    doc.category_names.push_back(d.name);
  }

  void operator()(const FunctorDecl& d) {
    check_fresh(d.name);
    Functor F;
    if (d.builtin == "id") {
      if (d.builtin_args.size() != 1) err("id(C) takes one category");
      F = identity_functor(catlike(d.builtin_args[0]));
    } else if (d.builtin == "compose") {
      if (d.builtin_args.size() != 2) err("compose(G, F) takes two functors");
      int g = doc.functor_index(d.builtin_args[0]);
      int f = doc.functor_index(d.builtin_args[1]);
      if (g < 0 || f < 0) err("compose(G, F): unknown functor");
      F = compose_functors(doc.functors[g], doc.functors[f]);
    } else {
      const FinCategory& C = catlike(d.src);
      const FinCategory& D = catlike(d.dst);
      F.source = &C;
      F.target = &D;
      F.obj_map.assign(C.obj_count(), -1);
      F.mor_map.assign(C.mor_count(), -1);
      for (const auto& [a, x] : d.obj_entries)
        F.obj_map[obj(C, a)] = obj(D, x);
      for (const auto& [f, u] : d.mor_entries)
        F.mor_map[mor(C, f)] = mor(D, u);
      for (int a = 0; a < C.obj_count(); ++a)
        if (F.obj_map[a] >= 0 && F.mor_map[C.identity(a)] < 0)
          F.mor_map[C.identity(a)] = D.identity(F.obj_map[a]);
      for (int a = 0; a < C.obj_count(); ++a) F.partial |= F.obj_map[a] < 0;
      for (int f = 0; f < C.mor_count(); ++f) F.partial |= F.mor_map[f] < 0;
    }
    for (const auto& v : validate_functor(F).violations)
      doc.load_report.fail(fmt("functor {}: {}", d.name, v));
    doc.functors.push_back(std::move(F));
    doc.functor_names.push_back(d.name);
  }

  void operator()(const NatTransDecl& d) {
    check_fresh(d.name);
    int s = doc.functor_index(d.src), t = doc.functor_index(d.dst);
    if (s < 0) err(fmt("unknown functor '{}'", d.src));
    if (t < 0) err(fmt("unknown functor '{}'", d.dst));
    const Functor& F = doc.functors[s];
    const Functor& G = doc.functors[t];
    if (F.source != G.source || F.target != G.target)
      err("nattrans endpoints are not parallel functors");
    NatTrans n;
    n.source = &doc.functors[s];
    n.target = &doc.functors[t];
    n.component.assign(F.source->obj_count(), -1);
    for (const auto& [a, u] : d.at)
      n.component[obj(*F.source, a)] = mor(*F.target, u);
    for (const auto& v : validate_nattrans(n).violations)
      doc.load_report.fail(fmt("nattrans {}: {}", d.name, v));
    doc.nattranses.push_back(std::move(n));
    doc.nattrans_names.push_back(d.name);
  }

  void operator()(const AdjunctionDecl& d) {
    check_fresh(d.name);
    int l = doc.functor_index(d.left), r = doc.functor_index(d.right);
    if (l < 0 || r < 0) err("adjunction: unknown functor");
    auto nt = [&](const std::string& n) -> const NatTrans& {
      for (size_t i = 0; i < doc.nattranses.size(); ++i)
        if (doc.nattrans_names[i] == n) return doc.nattranses[i];
      err(fmt("unknown nattrans '{}'", n));
    };
    Adjunction adj{doc.functors[l], doc.functors[r], nt(d.unit), nt(d.counit)};
    for (const auto& v : validate_adjunction(adj).violations)
      doc.load_report.fail(fmt("adjunction {}: {}", d.name, v));
    doc.adjunctions.push_back(std::move(adj));
    doc.adjunction_names.push_back(d.name);
  }

  void operator()(const MonadDecl& d) {
    check_fresh(d.name);
    const FinCategory& C = catlike(d.cat);
    int t = doc.functor_index(d.T);
    if (t < 0) err(fmt("unknown functor '{}'", d.T));
    Monad M;
    M.T = doc.functors[t];
    if (M.T.source != &C || M.T.target != &C)
      err(fmt("functor '{}' is not an endofunctor on {}", d.T, d.cat));
    M.unit.assign(C.obj_count(), -1);
    M.mult.assign(C.obj_count(), -1);
    for (const auto& [a, u] : d.unit) M.unit[obj(C, a)] = mor(C, u);
    for (const auto& [a, u] : d.mult) M.mult[obj(C, a)] = mor(C, u);
    for (const auto& v : validate_monad(M).violations)
      doc.load_report.fail(fmt("monad {}: {}", d.name, v));
    doc.monads.push_back({d.name, std::move(M)});
  }

  void operator()(const ComonadDecl& d) {
    check_fresh(d.name);
    const FinCategory& C = catlike(d.cat);
    int g = doc.functor_index(d.G);
    if (g < 0) err(fmt("unknown functor '{}'", d.G));
    Comonad W;
    W.G = doc.functors[g];
    if (W.G.source != &C || W.G.target != &C)
      err(fmt("functor '{}' is not an endofunctor on {}", d.G, d.cat));
    W.counit.assign(C.obj_count(), -1);
    W.comult.assign(C.obj_count(), -1);
    for (const auto& [a, u] : d.counit) W.counit[obj(C, a)] = mor(C, u);
    for (const auto& [a, u] : d.comult) W.comult[obj(C, a)] = mor(C, u);
    for (const auto& v : validate_comonad(W).violations)
      doc.load_report.fail(fmt("comonad {}: {}", d.name, v));
    doc.comonads.push_back({d.name, std::move(W)});
  }

  MorphismClass class_ref(const std::string& name,
                          const std::string& cat) const {
    int i = doc.class_index(name);
    if (i < 0) err(fmt("unknown class '{}'", name));
    if (doc.classes[i].cat != cat)
      err(fmt("class '{}' lives in '{}', not '{}'", name, doc.classes[i].cat,
              cat));
    return doc.classes[i].cls;
  }

  void operator()(const ClassDecl& d) {
    check_fresh(d.name);
    const FinCategory& C = catlike(d.cat);
    const ToposWindow* W = doc.find_window(d.cat);
    const ClassExpr& e = d.expr;
    auto need_args = [&](size_t n) {
      if (e.args.size() != n)
        err(fmt("class expression '{}' takes {} argument(s)", e.kind, n));
    };
    MorphismClass cls(C, d.name);
    if (e.kind == "literal") {
      for (const auto& m : e.args) cls.insert(mor(C, m));
    } else if (e.kind == "epi" || e.kind == "mono" || e.kind == "iso" ||
               e.kind == "all" || e.kind == "none") {
      need_args(1);
      if (e.args[0] != d.cat)
        err(fmt("class expression argument '{}' must match the ambient "
                "category '{}'",
                e.args[0], d.cat));
      if (e.kind == "epi")
        cls = W ? W->epis() : epi_class(C);
      else if (e.kind == "mono")
        cls = W ? W->monos() : mono_class(C);
      else if (e.kind == "iso")
        cls = iso_class(C);
      else if (e.kind == "all")
        cls = all_morphisms(C);
      else
        cls = no_morphisms(C);
    } else if (e.kind == "perp_right" || e.kind == "perp_left" ||
               e.kind == "box_right" || e.kind == "box_left") {
      need_args(1);
      MorphismClass a = class_ref(e.args[0], d.cat);
      if (e.kind == "perp_right")
        cls = perp_right(C, a);
      else if (e.kind == "perp_left")
        cls = perp_left(C, a);
      else if (e.kind == "box_right")
        cls = box_right(C, a);
      else
        cls = box_left(C, a);
    } else {
      need_args(2);
      MorphismClass a = class_ref(e.args[0], d.cat);
      MorphismClass b = class_ref(e.args[1], d.cat);
      if (e.kind == "compose")
        cls = class_compose(C, a, b);
      else if (e.kind == "union")
        cls = a.unite(b);
      else
        cls = a.intersect(b);
    }
    cls.set_label(d.name);
    doc.classes.push_back({d.name, d.cat, std::move(cls)});
  }

  void operator()(const DfsDecl& d) {
    check_fresh(d.name);
    catlike(d.cat);
    Dfs dfs{class_ref(d.E, d.cat), class_ref(d.J, d.cat),
            class_ref(d.M, d.cat)};
    doc.dfss.push_back({d.name, d.cat, std::move(dfs)});
  }

  void operator()(const QfsDecl& d) {
    check_fresh(d.name);
    catlike(d.cat);
    Qfs qfs{class_ref(d.Cof, d.cat), class_ref(d.W, d.cat),
            class_ref(d.Fib, d.cat)};
    doc.qfss.push_back({d.name, d.cat, std::move(qfs)});
  }

  void operator()(const PresheafDecl& d) {
    check_fresh(d.name);
    const FinCategory& B = plain_category(d.base);
    Presheaf P;
    P.base = &B;
    P.card.assign(B.obj_count(), -1);
    P.label = d.name;
    std::vector<std::vector<std::string>> elems(B.obj_count());
    for (const auto& e : d.at) {
      int b = obj(B, e.obj);
      if (P.card[b] >= 0) err(fmt("duplicate 'at {}' entry", e.obj));
      P.card[b] = static_cast<int>(e.elems.size());
      elems[b] = e.elems;
    }
    for (int b = 0; b < B.obj_count(); ++b)
      if (P.card[b] < 0)
        err(fmt("presheaf {} has no 'at {}' entry", d.name, B.obj_name(b)));
    auto elem_of = [&](int b, const std::string& n) {
      for (size_t i = 0; i < elems[b].size(); ++i)
        if (elems[b][i] == n) return static_cast<int>(i);
      err(fmt("unknown element '{}' at object {}", n, B.obj_name(b)));
    };
    P.res.assign(B.mor_count(), {});
    std::vector<char> given(B.mor_count(), 0);
    for (const auto& e : d.restricts) {
      int f = mor(B, e.mor);
      if (B.is_identity(f)) err("restrict entries for identities are implicit");
      int x = B.dom(f), y = B.cod(f);
      std::vector<int> table(P.card[y], -1);
      for (const auto& [a, b] : e.map) {
        int src = elem_of(y, a);
        if (table[src] >= 0)
          err(fmt("restrict {}: element '{}' mapped twice", e.mor, a));
        table[src] = elem_of(x, b);
      }
      for (int v : table)
        if (v < 0)
          err(fmt("restrict {}: not every element of {} is mapped", e.mor,
                  B.obj_name(y)));
      P.res[f] = std::move(table);
      given[f] = 1;
    }
    for (int f = 0; f < B.mor_count(); ++f) {
      if (given[f]) continue;
      if (B.is_identity(f)) {
        P.res[f].resize(P.card[B.dom(f)]);
        for (int i = 0; i < P.card[B.dom(f)]; ++i) P.res[f][i] = i;
      } else if (P.card[B.cod(f)] == 0) {
        P.res[f] = {};
      } else {
        err(fmt("presheaf {} has no 'restrict {}' entry", d.name,
                B.mor_name(f)));
      }
    }
    for (const auto& v : validate_presheaf(P).violations)
      doc.load_report.fail(fmt("presheaf {}: {}", d.name, v));
    doc.presheaves.push_back({d.name, d.base, std::move(P)});
  }

  void operator()(const GroupDecl& d) {
    check_fresh(d.name);
    const int n = static_cast<int>(d.elements.size());
    if (n == 0) err("group needs at least one element");
    auto elem = [&](const std::string& s) {
      for (int i = 0; i < n; ++i)
        if (d.elements[i] == s) return i;
      err(fmt("unknown group element '{}'", s));
    };
    GroupTable g;
    g.names = d.elements;
    g.mult.assign(n, std::vector<int>(n, -1));
    // the first listed element is the identity; its products are implicit
    for (int i = 0; i < n; ++i) g.mult[0][i] = g.mult[i][0] = i;
    for (const auto& e : d.table) {
      int a = elem(e.a), b = elem(e.b), c = elem(e.c);
      if (g.mult[a][b] >= 0 && g.mult[a][b] != c)
        err(fmt("conflicting table entry {}*{}", e.a, e.b));
      g.mult[a][b] = c;
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (g.mult[a][b] < 0)
          err(fmt("missing table entry {}*{}", d.elements[a], d.elements[b]));
    for (const auto& v : g.validate().violations)
      doc.load_report.fail(fmt("group {}: {}", d.name, v));
    doc.groups.push_back({d.name, std::move(g)});
  }

  void operator()(const WindowDecl& d) {
    check_fresh(d.name);
    const FinCategory& B = plain_category(d.base);
    std::vector<Presheaf> seeds;
    for (const auto& s : d.seeds) {
      int i = doc.presheaf_index(s);
      if (i < 0) err(fmt("unknown presheaf '{}'", s));
      if (doc.presheaves[i].p.base != &B)
        err(fmt("presheaf '{}' lives over '{}', not '{}'", s,
                doc.presheaves[i].base, d.base));
      seeds.push_back(doc.presheaves[i].p);
    }
    WindowOptions opt;
    opt.max_card = d.max_card;
    opt.max_objects = d.max_objects;
    try {
      doc.windows.push_back({d.name, d.base, build_window(B, seeds, opt)});
    } catch (const BoundExceeded& e) {
      err(fmt("window {}: {}", d.name, e.what()));
    }
  }

  void operator()(const ComonadProductDecl& d) {
    check_fresh(d.name);
    const ToposWindow* W = doc.find_window(d.window);
    if (!W) err(fmt("unknown window '{}'", d.window));
    int i = doc.presheaf_index(d.factor);
    if (i < 0) err(fmt("unknown presheaf '{}'", d.factor));
    int b = W->obj_of(doc.presheaves[i].p);
    if (b < 0)
      err(fmt("presheaf '{}' is not an object of window '{}'", d.factor,
              d.window));
    try {
      doc.wcomonads.push_back(
          {d.name, d.window, d.factor, product_comonad(*W, b)});
    } catch (const BoundExceeded& e) {
      err(fmt("comonad-product {}: {}", d.name, e.what()));
    }
  }
};

}  // namespace

SpecDocument load(Ast ast) {
  SpecDocument doc;
  doc.ast = std::move(ast);
  for (const auto& d : doc.ast.decls) {
    Loader l{doc, d.line};
    std::visit(l, d.node);
  }
  return doc;
}

SpecDocument load_text(const std::string& text) { return load(parse(text)); }

SpecDocument load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_text(buf.str());
}

}  // namespace facto::spec
