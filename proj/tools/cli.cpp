#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "distlab/distortion.hpp"
#include "distlab/generators.hpp"
#include "distlab/mechanisms.hpp"
#include "distlab/objectives.hpp"

namespace distlab::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string kind;  // generator, mechanism or claim
  std::string input, output, format = "json", script, order, matching, trace, weights;
  std::string eps = "1/4", D = "3", k_text = "2";
  std::optional<std::size_t> n, k, ell;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 200, max_n = 7, samples = 1000, policies = 20;
  bool family = false;
  unsigned jobs = 1;
};

// Exit 2: bad flags, unreadable input, construction problems.
struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Usage("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty() || c.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw Usage("cannot write '" + c.output + "'");
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Usage("cannot write '" + path + "'");
  f << text;
}

// Accepts a bare instance/metric/matching document or a bundle holding it.
nlohmann::json section(const nlohmann::json& doc, const char* key) {
  if (doc.is_object() && doc.contains(key)) return doc[key];
  return doc;
}

std::vector<AgentId> agent_list(const nlohmann::json& j) {
  const auto& arr = j.is_object() && j.contains("order") ? j["order"] : j;
  if (!arr.is_array()) throw Usage("order must be a JSON array of agent indices");
  std::vector<AgentId> out;
  for (const auto& v : arr) {
    if (!v.is_number_unsigned()) throw Usage("order must be a JSON array of agent indices");
    out.push_back(agent(v.get<std::size_t>()));
  }
  return out;
}

nlohmann::json agent_list_json(const std::vector<AgentId>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (AgentId x : v) a.push_back(index(x));
  return a;
}

std::size_t need(const std::optional<std::size_t>& v, const char* flag) {
  if (!v) throw Usage(std::string("missing ") + flag);
  return *v;
}

Rational rational_flag(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const InvalidParam&) {
    throw Usage(std::string("bad value for ") + flag + ": '" + text + "'");
  }
}

int cmd_gen(const RunConfig& c, std::ostream& out) {
  nlohmann::json doc;
  const Rational eps = rational_flag(c.eps, "--eps");
  if (c.kind == "line") {
    auto g = gen_line(need(c.n, "--n"), rational_flag(c.k_text, "--k"));
    doc = {{"instance", to_json(g.instance)}, {"metric", to_json(g.metric)}};
  } else if (c.kind == "polygon") {
    auto g = gen_polygon(need(c.n, "--n"), rational_flag(c.D, "--D"));
    doc = {{"instance", to_json(g.instance)}, {"metric", to_json(g.metric)}};
  } else if (c.kind == "domino") {
    auto d = gen_domino(need(c.ell, "--ell"));
    doc = {{"instance", to_json(d.instance)}, {"metric", to_json(d.metric)}, {"script", to_json(domino_script(d))}};
  } else if (c.kind == "tree8") {
    if (c.family) {
      doc = to_json(gen_tree8_family());
    } else {
      auto t = gen_tree8();
      doc = {{"instance", to_json(t.instance)}, {"metric", to_json(t.metric)}};
    }
  } else if (c.kind == "tree") {
    std::vector<Rational> w;
    std::stringstream ss(c.weights);
    for (std::string part; std::getline(ss, part, ',');) w.push_back(rational_flag(part, "--weights"));
    auto t = gen_tree_instance(need(c.ell, "--ell"), w);
    doc = {{"instance", to_json(t.instance)}, {"metric", to_json(t.metric)}};
  } else if (c.kind == "sd") {
    auto g = gen_sd_exponential(need(c.n, "--n"), eps);
    doc = {{"instance", to_json(g.instance)}, {"metric", to_json(g.metric)}, {"order", agent_list_json(g.order)}};
  } else if (c.kind == "boston") {
    const Rational k = rational_flag(c.k_text, "--k");
    if (k.get_den() != 1 || k < 1) throw Usage("--k must be a positive integer for boston");
    auto g = gen_boston(k.get_num().get_ui(), eps);
    doc = {{"instance", to_json(g.instance)}, {"metric", to_json(g.metric)}, {"order", agent_list_json(g.order)}};
  } else {
    throw Usage("unknown generator '" + c.kind + "'");
  }
  write_text(c, dump(doc), out);
  return 0;
}

std::vector<AgentId> resolve_order(const RunConfig& c, const nlohmann::json& bundle, std::size_t n) {
  if (c.order.empty() || c.order == "by-distance") {
    if (!bundle.is_object() || !bundle.contains("order"))
      throw Usage("input has no generator order; pass --order by-index or a file");
    return agent_list(bundle["order"]);
  }
  if (c.order == "by-index") {
    std::vector<AgentId> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(agent(i));
    return v;
  }
  return agent_list(read_json(c.order));
}

int cmd_run(const RunConfig& c, std::ostream& out) {
  if (c.input.empty()) throw Usage("missing --input");
  if (!c.script.empty() && c.kind != "repmatch") throw Usage("--script applies only to repmatch");
  if (!c.order.empty() && c.kind != "sd" && c.kind != "boston") throw Usage("--order applies only to sd and boston");
  if (c.seed && c.kind != "rsd") throw Usage("--seed applies only to rsd");
  const nlohmann::json bundle = read_json(c.input);
  const Instance inst = instance_from_json(section(bundle, "instance"));
  Matching m;
  if (c.kind == "repmatch") {
    const std::size_t k = c.k.value_or(1);
    RepMatchResult r;
    if (!c.script.empty()) {
      r = replay_script(inst, script_from_json(section(read_json(c.script), "script")), k);
    } else {
      r = repmatch(inst, default_policy(), k);
    }
    m = r.matching;
    std::string trace_path = c.trace;
    if (trace_path.empty() && !c.output.empty() && c.output != "-") {
      trace_path = c.output;
      if (trace_path.size() > 5 && trace_path.ends_with(".json")) trace_path.resize(trace_path.size() - 5);
      trace_path += ".trace.json";
    }
    if (!trace_path.empty()) write_file(trace_path, dump(to_json(r.trace)));
  } else if (c.kind == "sd") {
    m = serial_dictatorship(inst, resolve_order(c, bundle, inst.n()));
  } else if (c.kind == "boston") {
    m = boston(inst, resolve_order(c, bundle, inst.n()));
  } else if (c.kind == "rsd") {
    m = random_serial_dictatorship(inst, c.seed.value_or(0));
  } else {
    throw Usage("unknown mechanism '" + c.kind + "'");
  }
  write_text(c, dump(to_json(m)), out);
  return 0;
}

nlohmann::json report_json(const DistortionReport& r) {
  nlohmann::json cost, opt, dist;
  for (std::size_t i = 0; i < r.cost.size(); ++i) {
    std::string key = "k" + std::to_string(i + 1);
    cost[key] = to_string(r.cost[i]);
    opt[key] = to_string(r.optimum[i]);
    dist[key] = r.ratio[i].str();
  }
  return {{"cost", cost},        {"optimal", opt}, {"distortion", dist}, {"fairness", r.fairness.str()},
          {"argmax_k", r.argmax_k}, {"worst_agent", index(r.worst_agent)}};
}

std::string decimal(const Ratio& r) { return r.is_infinite() ? "inf" : to_decimal(r.value()); }

void csv_rows(std::ostringstream& os, const std::string& prefix, const DistortionReport& r) {
  for (std::size_t i = 0; i < r.cost.size(); ++i)
    os << prefix << i + 1 << ',' << to_string(r.cost[i]) << ',' << to_string(r.optimum[i]) << ',' << r.ratio[i].str()
       << ',' << decimal(r.ratio[i]) << '\n';
  os << prefix << "fairness,,," << r.fairness.str() << ',' << decimal(r.fairness) << '\n';
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
  if (c.input.empty()) throw Usage("missing --input");
  if (c.matching.empty()) throw Usage("missing --matching");
  if (c.format != "json" && c.format != "csv") throw Usage("--format must be json or csv");
  const nlohmann::json bundle = read_json(c.input);
  const Matching m = matching_from_json(read_json(c.matching));
  std::ostringstream os;
  if (c.family) {
    if (!bundle.contains("metrics")) throw Usage("--family needs a family document with 'metrics'");
    MetricFamily fam = family_from_json(bundle);
    std::vector<DistortionReport> reports;
    for (const auto& metric : fam.metrics) reports.push_back(distortion_report(m, metric, c.jobs));
    const std::size_t n = fam.instance.n();
    std::vector<FamilyDistortion> worst;
    for (std::size_t k = 0; k < n; ++k) {
      FamilyDistortion best{reports[0].ratio[k], 0};
      for (std::size_t i = 1; i < reports.size(); ++i)
        if (best.value < reports[i].ratio[k]) best = {reports[i].ratio[k], i};
      worst.push_back(best);
    }
    if (c.format == "json") {
      nlohmann::json members = nlohmann::json::array(), mx;
      for (const auto& r : reports) members.push_back(report_json(r));
      for (std::size_t k = 0; k < n; ++k)
        mx["k" + std::to_string(k + 1)] = {{"distortion", worst[k].value.str()}, {"member", worst[k].member}};
      os << dump({{"members", members}, {"max", mx}});
    } else {
      os << "member,k,cost,opt,distortion,decimal\n";
      for (std::size_t i = 0; i < reports.size(); ++i) csv_rows(os, std::to_string(i) + ",", reports[i]);
      for (std::size_t k = 0; k < n; ++k)
        os << "max," << k + 1 << ",,," << worst[k].value.str() << ',' << decimal(worst[k].value) << '\n';
    }
  } else {
    const Metric metric = metric_from_json(section(bundle, "metric"));
    if (metric.n() != m.n()) throw DimensionMismatch("matching and metric sizes differ");
    DistortionReport r = distortion_report(m, metric, c.jobs);
    if (c.format == "json") {
      os << dump(report_json(r));
    } else {
      os << "k,cost,opt,distortion,decimal\n";
      csv_rows(os, "", r);
    }
  }
  write_text(c, os.str(), out);
  return 0;
}

Certificate combine(const std::string& claim, std::vector<Certificate> parts, const std::string& label) {
  Certificate all{claim, true, 0, nlohmann::json::object()};
  nlohmann::json list = nlohmann::json::array();
  for (auto& p : parts) {
    all.pass = all.pass && p.pass;
    all.checked += p.checked;
    list.push_back(to_json(p));
  }
  all.witness[label] = list;
  return all;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const std::uint64_t seed = c.seed.value_or(1);
  Certificate cert;
  if (c.kind == "thm7") {
    cert = certify_thm7(c.jobs);
  } else if (c.kind == "ub-tree") {
    auto tree = gen_tree8();
    std::vector<Certificate> parts{certify_prop_ub_tree(tree.tree, tree.instance, tree.metric, c.jobs)};
    for (const auto& m : gen_tree8_family().metrics)
      parts.push_back(certify_prop_ub_tree(tree.tree, tree.instance, m, c.jobs));
    cert = combine("ub-tree", std::move(parts), "metrics");
  } else if (c.kind == "domino") {
    const std::size_t ell = c.ell.value_or(3);
    if (c.k) {
      cert = certify_domino(ell, *c.k);
    } else {
      std::vector<Certificate> parts;
      for (std::size_t k = 1; k <= (std::size_t{1} << ell); ++k) parts.push_back(certify_domino(ell, k));
      cert = combine("domino", std::move(parts), "per_k");
    }
  } else if (c.kind == "eq2-audit") {
    cert = certify_audit_suite(c.policies, seed);
  } else if (c.kind == "fairness-bound") {
    cert = certify_fairness_suite(c.trials, seed);
  } else if (c.kind == "owa") {
    cert = certify_owa_suite(c.trials, seed);
  } else if (c.kind == "appendix-b") {
    cert = check_appendix_b_claim(c.samples);
  } else if (c.kind == "solver-oracle") {
    cert = certify_solver_oracle(c.trials, c.max_n, seed, c.jobs);
  } else {
    throw Usage("unknown claim '" + c.kind + "'");
  }
  write_text(c, dump(to_json(cert)), out);
  return cert.pass ? 0 : 1;
}

struct Row {
  std::string mechanism, instance;
  std::size_t n;
  Ratio max, sum, fairness;
  std::string claim_max, claim_sum, claim_fairness;
};

Row measure(std::string mechanism, std::string instance, const Matching& m, const Metric& metric,
            std::string cmax, std::string csum, std::string cfair) {
  DistortionReport r = distortion_report(m, metric);
  return {std::move(mechanism), std::move(instance), metric.n(), r.ratio.front(), r.ratio.back(), r.fairness,
          std::move(cmax), std::move(csum), std::move(cfair)};
}

int cmd_table1(const RunConfig& c, std::ostream& out) {
  const Rational eps = rational_flag(c.eps, "--eps");
  std::vector<Row> rows;
  auto sd = gen_sd_exponential(5, eps);
  rows.push_back(measure("serial-dictatorship", "sd-exponential n=5 eps=" + to_string(eps),
                         serial_dictatorship(sd.instance, sd.order), sd.metric, "Omega(2^n)", "Omega(2^n)",
                         "Omega(2^n)"));
  auto bo = gen_boston(4, eps);
  rows.push_back(measure("boston", "boston k=4 eps=" + to_string(eps), boston(bo.instance, bo.order), bo.metric,
                         "Omega(2^sqrt(n))", "Omega(2^sqrt(n))", "Omega(2^sqrt(n))"));
  auto d = gen_domino(3);
  rows.push_back(measure("repmatch-worst-case", "domino ell=3", replay_script(d.instance, domino_script(d), 1).matching,
                         d.metric, "Omega(n); O(n^1.58)", "Theta(n^2)", "O(n^2)"));
  std::ostringstream os;
  os << "mechanism,instance,n,max_distortion,max_decimal,sum_distortion,sum_decimal,fairness,fairness_decimal,"
        "claim_max,claim_sum,claim_fairness\n";
  for (const auto& r : rows)
    os << r.mechanism << ',' << r.instance << ',' << r.n << ',' << r.max.str() << ',' << decimal(r.max) << ','
       << r.sum.str() << ',' << decimal(r.sum) << ',' << r.fairness.str() << ',' << decimal(r.fairness) << ','
       << r.claim_max << ',' << r.claim_sum << ',' << r.claim_fairness << '\n';
  write_text(c, os.str(), out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exact workbench for ordinal matching mechanisms under metric preferences", "distlab"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_option("-o,--output", c.output, "Output path (default stdout)");
    s->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance, metric or family");
  gen->add_option("kind", c.kind, "line|polygon|domino|tree8|tree|sd|boston")
      ->required()
      ->check(CLI::IsMember({"line", "polygon", "domino", "tree8", "tree", "sd", "boston"}));
  gen->add_option("--n", c.n, "Number of agents");
  gen->add_option("--k", c.k_text, "Line ratio k (rational) or boston k (integer)");
  gen->add_option("--ell", c.ell, "Depth parameter");
  gen->add_option("--D", c.D, "Polygon edge length (rational)");
  gen->add_option("--eps", c.eps, "Epsilon as p/q");
  gen->add_option("--weights", c.weights, "Comma-separated per-level tree weights, root to leaf");
  gen->add_flag("--family", c.family, "Emit the eight-metric family (tree8)");
  common(gen);

  auto* runc = app.add_subcommand("run", "Run a mechanism on an instance");
  runc->add_option("kind", c.kind, "repmatch|sd|boston|rsd")
      ->required()
      ->check(CLI::IsMember({"repmatch", "sd", "boston", "rsd"}));
  runc->add_option("-i,--input", c.input, "Instance or generator bundle")->required();
  runc->add_option("--script", c.script, "Merge script JSON");
  runc->add_option("--order", c.order, "by-distance|by-index|PATH");
  runc->add_option("--seed", c.seed, "Seed for rsd");
  runc->add_option("--k", c.k, "k for trace weights");
  runc->add_option("--trace", c.trace, "Trace output path (repmatch)");
  common(runc);

  auto* evalc = app.add_subcommand("eval", "Evaluate a matching");
  evalc->add_option("-i,--input", c.input, "Metric or family bundle")->required();
  evalc->add_option("--matching", c.matching, "Matching JSON")->required();
  evalc->add_option("--format", c.format, "json|csv");
  evalc->add_flag("--family", c.family, "Evaluate against every family member");
  common(evalc);

  auto* verify = app.add_subcommand("verify", "Certify a claim");
  verify->add_option("kind", c.kind, "claim")
      ->required()
      ->check(CLI::IsMember(
          {"thm7", "ub-tree", "domino", "eq2-audit", "fairness-bound", "owa", "appendix-b", "solver-oracle"}));
  verify->add_option("--ell", c.ell, "Domino depth");
  verify->add_option("--k", c.k, "Domino k (default: all)");
  verify->add_option("--trials", c.trials, "Random trials");
  verify->add_option("--max-n", c.max_n, "Largest n for solver-oracle");
  verify->add_option("--samples", c.samples, "Grid points for appendix-b");
  verify->add_option("--policies", c.policies, "Random policies for eq2-audit");
  verify->add_option("--seed", c.seed, "Seed");
  common(verify);

  auto* table = app.add_subcommand("table1", "Desk-scale distortion table as CSV");
  table->add_option("--eps", c.eps, "Epsilon as p/q");
  common(table);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    if (gen->parsed()) return cmd_gen(c, out);
    if (runc->parsed()) return cmd_run(c, out);
    if (evalc->parsed()) return cmd_eval(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
    return cmd_table1(c, out);
  } catch (const IneligibleStep& e) {
    err << "error: step " << e.step << ": " << e.reason << '\n';
    return 2;
  } catch (const Usage& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace distlab::cli
