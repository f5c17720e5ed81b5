#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alba/parse.hpp"
#include "alba/syntax.hpp"
#include "generators.hpp"

using namespace alba;

static Signature sig() { return gen::base_signature(); }
static Signature wide() { return gen::wide_signature(); }

TEST_CASE("order type involution") {
  OrderType e({Pol::One, Pol::Del, Pol::Del});
  CHECK(e.opposite().opposite() == e);
  CHECK(e.opposite()[0] == Pol::Del);
  CHECK(e.str() == "(1,d,d)");
}

TEST_CASE("tense expansion families and order types") {
  Signature t = expand_tense(wide());
  // unary f (F, (1)): residual f#1 in G with the same order type
  ConnPtr f1 = t.residual_of("f", 1);
  REQUIRE(f1);
  CHECK(f1->name == "f#1");
  CHECK(f1->family == Family::G);
  CHECK(f1->order_type == OrderType({Pol::One}));
  // unary g: gb1 in F
  ConnPtr g1 = t.residual_of("g", 1);
  REQUIRE(g1);
  CHECK(g1->name == "gb1");
  CHECK(g1->family == Family::F);
  // binary h (F, (1,d)): coordinate 1 keeps its polarity, others flip
  ConnPtr h1 = t.residual_of("h", 1);
  REQUIRE(h1);
  CHECK(h1->family == Family::G);
  CHECK(h1->order_type == OrderType({Pol::One, Pol::One}));
  // coordinate 2 has epsilon = d: residual stays in F, order type unchanged
  ConnPtr h2 = t.residual_of("h", 2);
  REQUIRE(h2);
  CHECK(h2->family == Family::F);
  CHECK(h2->order_type == OrderType({Pol::One, Pol::Del}));
  // one level only: residuals have no residuals
  CHECK(t.residual_of("f#1", 1) == nullptr);
}

TEST_CASE("binder construction checks positivity") {
  Signature s = sig();
  ConnPtr f = s.find("f");
  CHECK_NOTHROW(binder(BinderKind::Mu, "X", join(prop("p"), app(f, {fpvar("X")}))));
  Signature w = wide();
  ConnPtr h = w.find("h");
  // X in the antitone coordinate of h is a negative occurrence
  CHECK_THROWS_AS(binder(BinderKind::Mu, "X", app(h, {top(), fpvar("X")})),
                  SyntaxError);
}

TEST_CASE("substitution is capture avoiding") {
  Signature s = sig();
  ConnPtr f = s.find("f");
  // (mu X. (p \/ f(X)))[p := X] must rename the bound X
  Term t = binder(BinderKind::Mu, "X", join(prop("p"), app(f, {fpvar("X")})));
  Term r = substitute(t, "p", false, fpvar("X"));
  REQUIRE(r->kind == Tk::Binder);
  CHECK(r->var != "X");
  Term body = r->args[0];
  REQUIRE(body->kind == Tk::Join);
  CHECK(body->args[0]->name == "X");          // the substituted free X
  CHECK(body->args[1]->args[0]->name == r->var);  // the renamed bound one
}

TEST_CASE("star translation") {
  Signature s = sig();
  ConnPtr g = s.find("g");
  Term t = binder(BinderKind::Nu2, "X",
                  meet(app(g, {fpvar("X")}),
                       binder(BinderKind::Mu, "Y", fpvar("Y"))));
  Term r = star_translation(t);
  CHECK(r->binder == BinderKind::NuStar);
  CHECK(r->args[0]->args[1]->binder == BinderKind::MuStar);
  CHECK(in_Lstar(r));
  CHECK(!in_L1(r));
  CHECK(in_L1(t));
}

TEST_CASE("language membership") {
  Signature s = expand_tense(sig());
  Term plain = parse_term("f(p) /\\ g(q)", s);
  CHECK(in_L(plain));
  CHECK(in_L1(plain));
  CHECK(in_L1_plus(plain));
  Term ext = parse_term("f#1(m1) \\/ j2", s);
  CHECK(!in_L1(ext));
  CHECK(in_L1_plus(ext));
  CHECK(in_Lstar_plus(ext));
  Term starred = parse_term("mu* X. (p \\/ f(X))", s);
  CHECK(in_Lstar(starred));
  CHECK(!in_L1(starred));
}

TEST_CASE("signed tree signs flip at antitone coordinates") {
  Signature w = wide();
  Term t = parse_term("h(p, q)", w);
  SignedTree tree = signed_tree(t, true);
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].positive);
  CHECK(tree.nodes[1].positive);   // coordinate 1 of h, epsilon 1
  CHECK(!tree.nodes[2].positive);  // coordinate 2 of h, epsilon d
  std::vector<int> branch = tree.branch_to(2);
  REQUIRE(branch.size() == 2);
  CHECK(branch[0] == 0);
}

TEST_CASE("positivity classification") {
  Signature w = wide();
  Term t = parse_term("h(p, p)", w);
  CHECK(positivity(t, "p", false) == Polarity::Neither);  // mixed
  CHECK(positivity(t, "q", false) == Polarity::Both);     // absent
  CHECK(positivity(parse_term("h(p, q)", w), "p", false) == Polarity::Positive);
  CHECK(positivity(parse_term("h(p, q)", w), "q", false) == Polarity::Negative);
}

TEST_CASE("parse and print round trip on fixed examples") {
  Signature s = expand_tense(sig());
  for (const char* text : {
           "p",
           "bot",
           "(p /\\ q)",
           "f(g(p))",
           "mu X. (p \\/ f(X))",
           "nu* X. g(X)",
           "f#1(m1)",
           "gb1(j1)",
           "(mu2 X. f(X) \\/ top)",
       }) {
    Term t = parse_term(text, s);
    CHECK(term_equal(parse_term(to_string(t), s), t));
  }
}

TEST_CASE("parse errors carry positions") {
  Signature s = sig();
  CHECK_THROWS_AS(parse_term("f(p", s), ParseError);
  CHECK_THROWS_AS(parse_term("unknown(p)", s), ParseError);
  CHECK_THROWS_AS(parse_inequality("p <= ", s), ParseError);
  // mu body must be positive in the bound variable (needs antitone h)
  Signature w = wide();
  CHECK_THROWS_AS(parse_term("mu X. h(top, X)", w), ParseError);
}

TEST_CASE("quasi-inequality parsing and printing") {
  Signature s = sig();
  QuasiInequality q = parse_quasi("j1 <= p & p <= m1 => f(j1) <= g(m1)", s);
  CHECK(q.antecedents.size() == 2);
  CHECK(to_string(q) == "j1 <= p & p <= m1 => f(j1) <= g(m1)");
  QuasiInequality bare = parse_quasi("p <= p", s);
  CHECK(bare.antecedents.empty());
}

TEST_CASE("signature files round trip") {
  std::string text =
      "connective f : F / 1 / (1);\n"
      "connective g : G / 1 / (1);\n"
      "connective h : F / 2 / (1,d);\n";
  Signature s = parse_signature_file(text);
  CHECK(s.find("h")->order_type == OrderType({Pol::One, Pol::Del}));
  Signature again = parse_signature_file(signature_to_string(s));
  CHECK(again.find("h")->family == Family::F);
  CHECK(again.connectives().size() == s.connectives().size());
}

TEST_CASE("randomized parse-print round trip") {
  gen::Rng rng(2024);
  Signature w = wide();
  for (int i = 0; i < 300; ++i) {
    Inequality q = gen::random_l1_inequality(rng, w, 4, 3);
    Inequality r = parse_inequality(to_string(q), w);
    CHECK(ineq_equal(q, r));
  }
}

TEST_CASE("subterm access and replacement") {
  Signature s = sig();
  Term t = parse_term("f(p) \\/ g(q)", s);
  CHECK(to_string(subterm_at(t, {1, 0})) == "q");
  Term r = replace_at(t, {1, 0}, bot());
  CHECK(to_string(r) == "(f(p) \\/ g(bot))");
  CHECK(to_string(subterm_at(t, {1, 0})) == "q");  // original unchanged
}

TEST_CASE("free variables and sentences") {
  Signature s = sig();
  Term t = parse_term("mu X. (X \\/ Y)", s);
  CHECK(free_fpvars(t) == std::set<std::string>{"Y"});
  CHECK(!is_sentence(t));
  CHECK(is_sentence(parse_term("mu X. f(X)", s)));
}
