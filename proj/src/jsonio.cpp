#include "alba/jsonio.hpp"

#include "alba/parse.hpp"

namespace alba {

using nlohmann::json;

namespace {

json epsilon_json(const std::vector<std::string>& letters,
                  const std::vector<Pol>& eps) {
  json e = json::object();
  for (size_t i = 0; i < letters.size() && i < eps.size(); ++i)
    e[letters[i]] = eps[i] == Pol::One ? "1" : "d";
  return e;
}

json omega_json(const StrictOrder& omega) {
  json edges = json::array();
  for (const auto& [a, b] : omega.edges) edges.push_back(json::array({a, b}));
  return edges;
}

json verdict_json(const std::string& name, const std::vector<std::string>& letters,
                  const ClassVerdict& v) {
  json j;
  j["class"] = name;
  j["holds"] = v.holds;
  j["witnesses"] = json::array();
  if (v.holds)
    j["witnesses"].push_back({{"epsilon", epsilon_json(letters, v.epsilon)},
                              {"omega", omega_json(v.omega)}});
  j["failures"] = json::array();
  for (const auto& f : v.failures)
    j["failures"].push_back({{"epsilon", epsilon_json(letters, f.epsilon)},
                             {"branch", f.reason}});
  return j;
}

json quasi_list(const std::vector<QuasiInequality>& qs) {
  json a = json::array();
  for (const auto& q : qs) a.push_back(to_string(q));
  return a;
}

}  // namespace

json class_report_json(const ClassReport& rep) {
  json j;
  j["letters"] = rep.letters;
  j["classes"] = json::array(
      {verdict_json("recursive", rep.letters, rep.recursive),
       verdict_json("inductive", rep.letters, rep.inductive),
       verdict_json("restricted", rep.letters, rep.restricted),
       verdict_json("tame", rep.letters, rep.tame)});
  return j;
}

json trace_json(const Inequality& input, const RunOutcome& out) {
  json j;
  j["input"] = to_string(input);
  j["preprocessed"] = json::array();
  for (const auto& s : out.preprocessed)
    j["preprocessed"].push_back(to_string(s));
  auto step_json = [](const DerivationStep& s) {
    return json{{"rule", rule_name(s.rule)},
                {"position", s.position},
                {"before", quasi_list(s.before)},
                {"after", quasi_list(s.after)}};
  };
  j["preprocessing_steps"] = json::array();
  for (const auto& s : out.pre_steps)
    j["preprocessing_steps"].push_back(step_json(s));
  j["systems"] = json::array();
  for (const auto& tr : out.systems) {
    json sj;
    sj["steps"] = json::array();
    for (const auto& s : tr.steps) sj["steps"].push_back(step_json(s));
    sj["outcome"] = tr.success ? "success" : "failure: " + tr.failure;
    j["systems"].push_back(std::move(sj));
  }
  j["output"] = json::array();
  if (out.success)
    for (const auto& q : out.output) j["output"].push_back(to_string(q));
  return j;
}

json counterexample_json(const Counterexample& cex, const FiniteLattice& lat) {
  json a = json::object();
  for (const auto& [sym, val] : cex.assignment) a[sym] = lat.name(val);
  return a;
}

FiniteLE load_algebra(const json& doc, const Signature& sig_expanded) {
  std::vector<std::string> names =
      doc.at("elements").get<std::vector<std::string>>();
  std::vector<std::pair<int, int>> covers;
  for (const auto& c : doc.at("covers"))
    covers.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
  FiniteLE le;
  le.lat = FiniteLattice::from_covers(names, covers,
                                      doc.value("label", std::string("file")));
  le.sig = sig_expanded.expanded() ? sig_expanded : expand_tense(sig_expanded);
  le.label = le.lat.label;
  auto elem_index = [&](const std::string& n) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    throw AlgebraError("unknown element name: " + n);
  };
  if (doc.contains("ops"))
    for (const auto& [conn, table] : doc.at("ops").items()) {
      std::vector<uint8_t> t;
      for (const auto& v : table)
        t.push_back(static_cast<uint8_t>(
            v.is_string() ? elem_index(v.get<std::string>()) : v.get<int>()));
      attach_operation(le, conn, std::move(t));
    }
  return le;
}

}  // namespace alba
