#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "alba/jsonio.hpp"
#include "alba/parse.hpp"

using namespace alba;

namespace {

std::string slurp_or_inline(const std::string& arg) {
  std::ifstream in(arg);
  if (!in.good()) return arg;
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
    text.pop_back();
  return text;
}

Signature default_signature() {
  return declare_signature({
      {"f", Family::F, 1, OrderType({Pol::One})},
      {"g", Family::G, 1, OrderType({Pol::One})},
  });
}

Epsilon parse_epsilon(const std::string& s) {
  Epsilon eps;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad --epsilon entry: " + item);
    std::string val = item.substr(eq + 1);
    eps[item.substr(0, eq)] = (val == "1") ? Pol::One : Pol::Del;
  }
  return eps;
}

StrictOrder parse_omega(const std::string& s) {
  StrictOrder o;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto lt = item.find('<');
    if (lt == std::string::npos)
      throw std::runtime_error("bad --omega entry: " + item);
    o.edges.push_back({item.substr(0, lt), item.substr(lt + 1)});
  }
  return o;
}

uint64_t env_seed() {
  if (const char* s = std::getenv("ALBA_SEED")) return std::strtoull(s, nullptr, 10);
  return 1;
}

struct Options {
  std::string sig_file, alg_file, ineq_text;
  std::string mode = "proper";
  bool pivotal = true;
  std::string epsilon, omega;
  int max_size = 5, budget = 20;
  std::string format = "text";
  bool trace = false;
};

int run_classify(const Options& o, const Signature& sig) {
  Inequality ineq = parse_inequality(slurp_or_inline(o.ineq_text), sig);
  ClassReport rep = classify_inequality(ineq);
  if (o.format == "json") {
    std::cout << class_report_json(rep).dump(2) << "\n";
    return 0;
  }
  auto show = [&](const char* name, const ClassVerdict& v) {
    std::cout << name << ": " << (v.holds ? "yes" : "no");
    if (v.holds) {
      std::cout << "  epsilon:";
      for (size_t i = 0; i < rep.letters.size(); ++i)
        std::cout << " " << rep.letters[i] << "="
                  << (v.epsilon[i] == Pol::One ? "1" : "d");
      std::cout << "  omega:";
      if (v.omega.edges.empty()) std::cout << " (empty)";
      for (const auto& [a, b] : v.omega.edges) std::cout << " " << a << "<" << b;
    } else if (!v.failures.empty()) {
      std::cout << "  (e.g. " << v.failures.front().reason << ")";
    }
    std::cout << "\n";
  };
  show("recursive ", rep.recursive);
  show("inductive ", rep.inductive);
  show("restricted", rep.restricted);
  show("tame      ", rep.tame);
  return 0;
}

RunConfig make_config(const Options& o) {
  RunConfig cfg;
  cfg.mode = o.mode == "tame" ? RunMode::Tame : RunMode::Proper;
  cfg.pivotal = o.pivotal;
  if (!o.epsilon.empty()) cfg.epsilon = parse_epsilon(o.epsilon);
  if (!o.omega.empty()) cfg.omega = parse_omega(o.omega);
  return cfg;
}

int run_reduce(const Options& o, const Signature& sig) {
  Inequality ineq = parse_inequality(slurp_or_inline(o.ineq_text), sig);
  Engine eng(sig);
  RunOutcome out = eng.run(ineq, make_config(o));
  if (o.format == "json" || o.trace) {
    nlohmann::json j = trace_json(ineq, out);
    if (!o.trace) j.erase("preprocessing_steps");
    std::cout << j.dump(2) << "\n";
  } else if (out.success) {
    for (const auto& q : out.output) std::cout << to_string(q) << "\n";
  }
  if (!out.success) {
    std::cerr << "ALBA failure: " << out.failure_reason << "\n";
    return 1;
  }
  return 0;
}

int run_verify(const Options& o, const Signature& sig) {
  Inequality ineq = parse_inequality(slurp_or_inline(o.ineq_text), sig);
  Engine eng(sig);
  RunOutcome out = eng.run(ineq, make_config(o));
  if (!out.success) {
    std::cerr << "ALBA failure: " << out.failure_reason << "\n";
    return 1;
  }
  std::vector<FiniteLE> corpus;
  if (!o.alg_file.empty()) {
    std::ifstream in(o.alg_file);
    if (!in.good()) throw std::runtime_error("cannot read " + o.alg_file);
    nlohmann::json doc;
    in >> doc;
    corpus.push_back(load_algebra(doc, eng.sig()));
  } else {
    corpus = enumerate_les(o.max_size, eng.sig(), o.budget, env_seed());
  }
  int mismatches = 0;
  for (const auto& le : corpus) {
    bool in_valid = valid(le, ineq);
    bool out_valid = true;
    for (const auto& q : out.output) out_valid = out_valid && valid(le, q);
    if (in_valid != out_valid) {
      ++mismatches;
      std::cout << "MISMATCH on " << le.label << ": input "
                << (in_valid ? "valid" : "invalid") << ", output "
                << (out_valid ? "valid" : "invalid") << "\n";
    }
  }
  std::cout << "checked " << corpus.size() << " algebras, " << mismatches
            << " mismatches\n";
  return mismatches == 0 ? 0 : 1;
}

int run_selftest(const Options& o, const Signature& sig) {
  Engine eng(sig);
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };

  struct Golden {
    const char* input;
    RunMode mode;
    std::vector<const char*> expect;
  };
  std::vector<Golden> goldens = {
      {"f(p) <= g(p)", RunMode::Proper, {"j1 <= m1 => f(j1) <= g(m1)"}},
      {"mu X.(p \\/ f(X)) <= g(p)",
       RunMode::Proper,
       {"j1 <= m1 => mu* X. (j1 \\/ f(X)) <= g(m1)"}},
      {"f(p) \\/ nu X.g(X) <= g(p)",
       RunMode::Tame,
       {"j1 <= m1 => f(j1) <= g(m1)", "nu* X. g(X) <= g(bot)"}},
  };
  std::vector<FiniteLE> corpus =
      enumerate_les(o.max_size, eng.sig(), o.budget, env_seed());
  for (const auto& gcase : goldens) {
    RunConfig cfg;
    cfg.mode = gcase.mode;
    Inequality ineq = parse_inequality(gcase.input, sig);
    RunOutcome out = eng.run(ineq, cfg);
    bool ok = out.success && out.output.size() == gcase.expect.size();
    for (size_t i = 0; ok && i < out.output.size(); ++i)
      ok = to_string(out.output[i]) == gcase.expect[i];
    report(std::string("golden: ") + gcase.input, ok);
    bool oracle_ok = out.success;
    for (const auto& le : corpus) {
      if (!oracle_ok) break;
      bool in_valid = valid(le, ineq);
      bool out_valid = true;
      for (const auto& q : out.output) out_valid = out_valid && valid(le, q);
      oracle_ok = in_valid == out_valid;
    }
    report(std::string("oracle equivalence: ") + gcase.input, oracle_ok);
  }
  ClassReport rep =
      classify_inequality(parse_inequality("g(f(p)) <= f(g(p))", sig));
  report("g(f(p)) <= f(g(p)) not recursive", !rep.recursive.holds);
  bool res_ok = true;
  for (const auto& le : corpus) res_ok = res_ok && residuals_consistent(le);
  report("residual adjunctions on corpus", res_ok);
  std::cout << (failures == 0 ? "all checks passed" : "FAILURES PRESENT")
            << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic workbench for lattice-based fixed point inequalities"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd, bool needs_ineq) {
    cmd->add_option("--sig", o.sig_file, "signature file");
    cmd->add_option("--format", o.format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    if (needs_ineq)
      cmd->add_option("ineq", o.ineq_text, "inequality (inline or file)")
          ->required();
  };

  CLI::App* c_classify = app.add_subcommand("classify", "classify an inequality");
  add_common(c_classify, true);

  CLI::App* c_reduce = app.add_subcommand("reduce", "run the reduction");
  add_common(c_reduce, true);
  c_reduce->add_option("--mode", o.mode, "tame|proper")
      ->check(CLI::IsMember({"tame", "proper"}));
  c_reduce->add_flag("--pivotal,!--no-pivotal", o.pivotal, "pivotal run");
  c_reduce->add_option("--epsilon", o.epsilon, "explicit witness, e.g. p=1,q=d");
  c_reduce->add_option("--omega", o.omega, "explicit order, e.g. p<q");
  c_reduce->add_flag("--trace", o.trace, "emit the full derivation trace");

  CLI::App* c_verify = app.add_subcommand("verify", "reduce and oracle-check");
  add_common(c_verify, true);
  c_verify->add_option("--mode", o.mode, "tame|proper")
      ->check(CLI::IsMember({"tame", "proper"}));
  c_verify->add_flag("--pivotal,!--no-pivotal", o.pivotal, "pivotal run");
  c_verify->add_option("--alg", o.alg_file, "algebra description file");
  c_verify->add_option("--max-size", o.max_size, "largest lattice in the corpus");
  c_verify->add_option("--budget", o.budget, "operation sets per lattice");

  CLI::App* c_selftest = app.add_subcommand("selftest", "built-in checks");
  add_common(c_selftest, false);
  c_selftest->add_option("--max-size", o.max_size, "largest lattice");
  c_selftest->add_option("--budget", o.budget, "operation sets per lattice");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    Signature sig = default_signature();
    if (!o.sig_file.empty()) {
      std::ifstream in(o.sig_file);
      if (!in.good()) throw std::runtime_error("cannot read " + o.sig_file);
      std::stringstream ss;
      ss << in.rdbuf();
      sig = parse_signature_file(ss.str());
    }
    if (c_classify->parsed()) return run_classify(o, sig);
    if (c_reduce->parsed()) return run_reduce(o, sig);
    if (c_verify->parsed()) return run_verify(o, sig);
    return run_selftest(o, sig);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
