#include "alba/parse.hpp"

#include <cctype>
#include <sstream>

namespace alba {

namespace {

enum class Tok {
  End, LParen, RParen, Comma, Dot, Leq, And, Or, Amp, Implies, Ident,
  KwBot, KwTop, KwMu, KwNu, KwMu2, KwNu2, KwMuStar, KwNuStar
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  Tok tok = Tok::End;
  std::string text;
  size_t tok_pos = 0;

  explicit Lexer(const std::string& s) : src(s) { next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, static_cast<int>(tok_pos));
  }

  void next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) pos++;
    tok_pos = pos;
    text.clear();
    if (pos >= src.size()) {
      tok = Tok::End;
      return;
    }
    char c = src[pos];
    auto two = [&](char a, char b) {
      return c == a && pos + 1 < src.size() && src[pos + 1] == b;
    };
    if (c == '(') { tok = Tok::LParen; pos++; return; }
    if (c == ')') { tok = Tok::RParen; pos++; return; }
    if (c == ',') { tok = Tok::Comma; pos++; return; }
    if (c == '.') { tok = Tok::Dot; pos++; return; }
    if (c == '&') { tok = Tok::Amp; pos++; return; }
    if (two('<', '=')) { tok = Tok::Leq; pos += 2; return; }
    if (two('=', '>')) { tok = Tok::Implies; pos += 2; return; }
    if (two('/', '\\')) { tok = Tok::And; pos += 2; return; }
    if (two('\\', '/')) { tok = Tok::Or; pos += 2; return; }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        pos++;
      // residual connective names carry a '#<i>' suffix
      if (pos < src.size() && src[pos] == '#') {
        size_t h = pos + 1;
        while (h < src.size() && std::isdigit(static_cast<unsigned char>(src[h]))) h++;
        if (h > pos + 1) pos = h;
      }
      text = src.substr(start, pos - start);
      if (text == "bot") { tok = Tok::KwBot; return; }
      if (text == "top") { tok = Tok::KwTop; return; }
      if (text == "mu2") { tok = Tok::KwMu2; return; }
      if (text == "nu2") { tok = Tok::KwNu2; return; }
      if (text == "mu" || text == "nu") {
        if (pos < src.size() && src[pos] == '*') {
          pos++;
          tok = text == "mu" ? Tok::KwMuStar : Tok::KwNuStar;
        } else {
          tok = text == "mu" ? Tok::KwMu : Tok::KwNu;
        }
        return;
      }
      tok = Tok::Ident;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'",
                     static_cast<int>(pos));
  }
};

bool is_nom_name(const std::string& s, char prefix, int& idx) {
  if (s.size() < 2 || s[0] != prefix) return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  idx = std::stoi(s.substr(1));
  return true;
}

struct Parser {
  Lexer lx;
  const Signature& sig;

  Parser(const std::string& s, const Signature& g) : lx(s), sig(g) {}

  void expect(Tok t, const std::string& what) {
    if (lx.tok != t) lx.fail("expected " + what);
    lx.next();
  }

  Term term() {
    BinderKind bk;
    switch (lx.tok) {
      case Tok::KwMu: bk = BinderKind::Mu; break;
      case Tok::KwNu: bk = BinderKind::Nu; break;
      case Tok::KwMu2: bk = BinderKind::Mu2; break;
      case Tok::KwNu2: bk = BinderKind::Nu2; break;
      case Tok::KwMuStar: bk = BinderKind::MuStar; break;
      case Tok::KwNuStar: bk = BinderKind::NuStar; break;
      default:
        return or_term();
    }
    size_t at = lx.tok_pos;
    lx.next();
    if (lx.tok != Tok::Ident || !std::isupper(static_cast<unsigned char>(lx.text[0])))
      lx.fail("expected fixed point variable after binder");
    std::string var = lx.text;
    lx.next();
    expect(Tok::Dot, "'.'");
    Term body = term();
    try {
      return binder(bk, var, body);
    } catch (const SyntaxError& e) {
      throw ParseError(e.what(), static_cast<int>(at));
    }
  }

  Term or_term() {
    Term t = and_term();
    while (lx.tok == Tok::Or) {
      lx.next();
      t = join(t, and_term());
    }
    return t;
  }

  Term and_term() {
    Term t = atom();
    while (lx.tok == Tok::And) {
      lx.next();
      t = meet(t, atom());
    }
    return t;
  }

  Term atom() {
    switch (lx.tok) {
      case Tok::KwMu:
      case Tok::KwNu:
      case Tok::KwMu2:
      case Tok::KwNu2:
      case Tok::KwMuStar:
      case Tok::KwNuStar:
        // binder in operand position; its body extends maximally rightward
        return term();
      case Tok::KwBot: lx.next(); return bot();
      case Tok::KwTop: lx.next(); return top();
      case Tok::LParen: {
        lx.next();
        Term t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::Ident: {
        std::string name = lx.text;
        size_t at = lx.tok_pos;
        lx.next();
        if (lx.tok == Tok::LParen) {
          ConnPtr c = sig.find(name);
          if (!c) throw ParseError("unknown connective: " + name,
                                   static_cast<int>(at));
          lx.next();
          std::vector<Term> args;
          if (lx.tok != Tok::RParen) {
            args.push_back(term());
            while (lx.tok == Tok::Comma) {
              lx.next();
              args.push_back(term());
            }
          }
          expect(Tok::RParen, "')'");
          try {
            return app(c, std::move(args));
          } catch (const SyntaxError& e) {
            throw ParseError(e.what(), static_cast<int>(at));
          }
        }
        // nullary connective, nominal, co-nominal, fp variable or letter
        if (ConnPtr c = sig.find(name); c && c->arity == 0)
          return app(c, {});
        int idx;
        if (is_nom_name(name, 'j', idx)) return nominal(idx);
        if (is_nom_name(name, 'm', idx)) return conominal(idx);
        if (std::isupper(static_cast<unsigned char>(name[0]))) return fpvar(name);
        return prop(name);
      }
      default:
        lx.fail("expected a term");
    }
  }

  Inequality ineq() {
    Term l = term();
    expect(Tok::Leq, "'<='");
    Term r = term();
    return {l, r};
  }

  QuasiInequality quasi() {
    std::vector<Inequality> parts{ineq()};
    while (lx.tok == Tok::Amp) {
      lx.next();
      parts.push_back(ineq());
    }
    QuasiInequality q;
    if (lx.tok == Tok::Implies) {
      lx.next();
      q.antecedents = std::move(parts);
      q.consequent = ineq();
    } else {
      if (parts.size() != 1) lx.fail("expected '=>'");
      q.consequent = parts[0];
    }
    return q;
  }

  void done() {
    if (lx.tok != Tok::End) lx.fail("trailing input");
  }
};

}  // namespace

Term parse_term(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  Term t = p.term();
  p.done();
  return t;
}

Inequality parse_inequality(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  Inequality i = p.ineq();
  p.done();
  return i;
}

QuasiInequality parse_quasi(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  QuasiInequality q = p.quasi();
  p.done();
  return q;
}

Parsed parse_any(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  Term first = p.term();
  if (p.lx.tok == Tok::End) return first;
  p.expect(Tok::Leq, "'<='");
  Term rhs = p.term();
  Inequality i{first, rhs};
  if (p.lx.tok == Tok::End) return i;
  std::vector<Inequality> parts{i};
  while (p.lx.tok == Tok::Amp) {
    p.lx.next();
    parts.push_back(p.ineq());
  }
  p.expect(Tok::Implies, "'=>'");
  QuasiInequality q;
  q.antecedents = std::move(parts);
  q.consequent = p.ineq();
  p.done();
  return q;
}

// ---------------------------------------------------------------------------
// Printing; parse(print(t)) is the round-trip identity.
// ---------------------------------------------------------------------------

namespace {

const char* binder_kw(BinderKind k) {
  switch (k) {
    case BinderKind::Mu: return "mu";
    case BinderKind::Nu: return "nu";
    case BinderKind::Mu2: return "mu2";
    case BinderKind::Nu2: return "nu2";
    case BinderKind::MuStar: return "mu*";
    case BinderKind::NuStar: return "nu*";
  }
  return "?";
}

void print_rec(const Term& t, std::string& out, bool operand) {
  switch (t->kind) {
    case Tk::Bot: out += "bot"; break;
    case Tk::Top: out += "top"; break;
    case Tk::Prop:
    case Tk::FpVar: out += t->name; break;
    case Tk::Nom: out += "j" + std::to_string(t->index); break;
    case Tk::Conom: out += "m" + std::to_string(t->index); break;
    case Tk::Meet:
    case Tk::Join:
      out += "(";
      print_rec(t->args[0], out, true);
      out += t->kind == Tk::Meet ? " /\\ " : " \\/ ";
      print_rec(t->args[1], out, true);
      out += ")";
      break;
    case Tk::App:
      out += t->conn->name;
      out += "(";
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ", ";
        print_rec(t->args[i], out, false);
      }
      out += ")";
      break;
    case Tk::Binder:
      if (operand) out += "(";
      out += binder_kw(t->binder);
      out += " " + t->var + ". ";
      print_rec(t->args[0], out, false);
      if (operand) out += ")";
      break;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print_rec(t, out, false);
  return out;
}

std::string to_string(const Inequality& i) {
  return to_string(i.lhs) + " <= " + to_string(i.rhs);
}

std::string to_string(const QuasiInequality& q) {
  if (q.antecedents.empty()) return to_string(q.consequent);
  std::string out;
  for (size_t i = 0; i < q.antecedents.size(); ++i) {
    if (i) out += " & ";
    out += to_string(q.antecedents[i]);
  }
  return out + " => " + to_string(q.consequent);
}

// ---------------------------------------------------------------------------
// Signature files
// ---------------------------------------------------------------------------

Signature parse_signature_file(const std::string& text) {
  std::vector<Signature::Decl> decls;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    std::istringstream ls(line);
    std::string kw, name, colon, fam, slash1, slash2, ot;
    int arity;
    if (!(ls >> kw >> name >> colon >> fam >> slash1 >> arity >> slash2 >> ot) ||
        kw != "connective" || colon != ":" || slash1 != "/" || slash2 != "/")
      throw SyntaxError("malformed signature line " + std::to_string(lineno) +
                        ": " + line);
    if (fam != "F" && fam != "G")
      throw SyntaxError("bad family on line " + std::to_string(lineno));
    OrderType e;
    for (char c : ot) {
      if (c == '1') e.entries.push_back(Pol::One);
      else if (c == 'd') e.entries.push_back(Pol::Del);
      else if (c == '(' || c == ')' || c == ',' || c == ';') continue;
      else throw SyntaxError("bad order-type on line " + std::to_string(lineno));
    }
    decls.push_back({name, fam == "F" ? Family::F : Family::G, arity, e});
  }
  return declare_signature(decls);
}

std::string signature_to_string(const Signature& sig) {
  std::string out;
  for (const auto& c : sig.connectives()) {
    if (c->is_residual) continue;
    out += "connective " + c->name + " : " +
           (c->family == Family::F ? "F" : "G") + " / " +
           std::to_string(c->arity) + " / " + c->order_type.str() + ";\n";
  }
  return out;
}

}  // namespace alba
