#include "esst/cli/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "esst/frontend/parser.hpp"

namespace esst::cli {

namespace fs = std::filesystem;
using engine::Verdict;

OracleConfig parse_oracle(const std::string& text) {
  OracleConfig c;
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("oracle expects <v1,v2,...>:<depth>");
  c.values.clear();
  std::istringstream vs(text.substr(0, colon));
  std::string item;
  while (std::getline(vs, item, ',')) {
    std::size_t used = 0;
    c.values.push_back(std::stol(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad oracle value '" + item + "'");
  }
  if (c.values.empty()) throw std::invalid_argument("oracle value set is empty");
  std::size_t used = 0;
  const std::string d = text.substr(colon + 1);
  c.depth = std::stoi(d, &used);
  if (used != d.size() || c.depth < 1) throw std::invalid_argument("bad oracle depth '" + d + "'");
  return c;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Safe: return 0;
    case Verdict::Unsafe: return 1;
    case Verdict::Unknown: return 2;
  }
  return 3;
}

namespace {

std::string quoted(const std::string& s) {
  std::ostringstream os;
  os << std::quoted(s);
  return os.str();
}

std::string hist(const std::map<std::size_t, std::size_t>& h) {
  std::string s;
  for (const auto& [k, v] : h) s += (s.empty() ? "" : ",") + std::to_string(k) + ":" + std::to_string(v);
  return s.empty() ? "-" : s;
}

const char* oracle_name(const RunOutcome& r) {
  if (!r.oracle_error.empty()) return "CAPACITY";
  if (!r.oracle) return "off";
  return r.oracle->verdict == concrete::ReachVerdict::Unsafe ? "UNSAFE" : "NO_ERROR_FOUND";
}

RunOutcome run_one(const concrete::System& sys, const std::string& name, const engine::Options& opts,
                   const std::optional<OracleConfig>& oracle, const std::string& dot_path) {
  RunOutcome r;
  r.program = name;
  engine::Checker checker(sys, opts);
  r.result = checker.run();
  if (!dot_path.empty()) {
    std::ofstream dot(dot_path);
    dot << checker.to_dot();
  }
  if (oracle) {
    concrete::ReachOptions ro;
    ro.value_set = oracle->values;
    ro.depth = oracle->depth;
    try {
      r.oracle = concrete::bounded_reach(sys, ro);
    } catch (const logic::CapacityError& e) {
      r.oracle_error = e.what();
    }
  }
  return r;
}

}  // namespace

std::string report_record(const RunOutcome& r, const engine::Options& opts) {
  const auto& s = r.result.stats;
  std::ostringstream os;
  os << "program=" << r.program << " mode=" << por::mode_name(opts.mode)
     << " verdict=" << engine::verdict_name(r.result.verdict) << " reason=" << quoted(r.result.reason)
     << " arf_nodes=" << s.nodes << " final_nodes=" << s.final_nodes << " covered=" << s.covered
     << " refinements=" << s.refinements << " predicates_total=" << s.predicates
     << " persistent_reductions=" << s.persistent_reductions << " persistent_sizes=" << hist(s.persistent_sizes)
     << " sleep_hits=" << s.sleep_hits << " cycle_reexpansions=" << s.cycle_reexpansions
     << " deadlocks=" << s.deadlocks << " max_preds=" << opts.max_predicates
     << " timeout=" << opts.timeout_seconds << " oracle=" << oracle_name(r);
  if (r.oracle) os << " oracle_states=" << r.oracle->states;
  os << " trace_steps=" << (r.result.trace ? r.result.trace->steps.size() : 0);
  return os.str();
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ESST model checker for cooperative threaded programs", "esst-mc"};
  app.require_subcommand(1);

  std::string por_mode = "both", oracle_text, dot_path, report_path, smt_path, modes_text = "none,persistent,sleep,both";
  std::size_t max_preds = 16;
  double timeout = 60;
  bool thread_placement = false;
  std::string input, dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--oracle", oracle_text, "Run the bounded oracle too: <v1,v2,...>:<depth>");
    sub->add_option("--max-preds", max_preds, "Predicate cap per abstraction query");
    sub->add_option("--timeout", timeout, "Seconds per checker run");
    sub->add_option("--report", report_path, "Write key=value records to this file");
    sub->add_flag("--thread-precision", thread_placement, "Place local predicates in thread precisions");
  };
  auto* check = app.add_subcommand("check", "Check one program");
  check->add_option("file", input, "Program file")->required();
  check->add_option("--por", por_mode, "none|persistent|sleep|both");
  check->add_option("--dump-arf", dot_path, "Write the final ARF as Graphviz");
  check->add_option("--dump-smt", smt_path, "Write the regions of the final ARF as s-expressions");
  add_common(check);
  auto* bench = app.add_subcommand("bench", "Run a corpus directory under several modes");
  bench->add_option("dir", dir, "Directory with *.tp files and expected.txt")->required();
  bench->add_option("--modes", modes_text, "Comma-separated POR modes");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "esst-mc: " << e.what() << "\n";
    return 3;
  }

  try {
    engine::Options opts;
    opts.max_predicates = max_preds;
    opts.timeout_seconds = timeout;
    opts.thread_placement = thread_placement;
    std::optional<OracleConfig> oracle;
    if (!oracle_text.empty()) {
      oracle = parse_oracle(oracle_text);
      opts.replay_values = oracle->values;
    }
    std::ofstream report;
    if (!report_path.empty()) {
      report.open(report_path);
      if (!report) throw std::runtime_error("cannot write " + report_path);
    }

    if (check->parsed()) {
      opts.mode = por::parse_mode(por_mode);
      if (!fs::exists(input)) {
        err << "esst-mc: " << input << ": no such file\n";
        return 3;
      }
      const auto sys = concrete::System::from_file(input);
      const auto r = run_one(sys, fs::path(input).stem().string(), opts, oracle, dot_path);
      const auto& s = r.result.stats;
      out << engine::verdict_name(r.result.verdict) << " (" << r.result.reason << ")\n";
      out << "mode " << por::mode_name(opts.mode) << ": " << s.nodes << " ARF nodes, " << s.refinements
          << " refinements, " << s.predicates << " predicates, " << std::fixed << std::setprecision(1)
          << s.wall_ms << " ms\n";
      if (opts.mode != por::Mode::None)
        out << "persistent reductions " << s.persistent_reductions << ", sleep hits " << s.sleep_hits
            << ", cycle re-expansions " << s.cycle_reexpansions << "\n";
      if (s.deadlocks) out << "deadlocked states: " << s.deadlocks << "\n";
      if (oracle) out << "oracle: " << oracle_name(r) << (r.oracle_error.empty() ? "" : " " + r.oracle_error) << "\n";
      if (r.result.trace) out << "counterexample:\n" << concrete::render_text(sys, *r.result.trace);
      if (report) {
        report << report_record(r, opts) << "\n";
        if (r.result.trace) report << concrete::render_structured(sys, *r.result.trace);
      }
      if (!smt_path.empty()) {
        // regenerate the ARF to dump it; runs are deterministic
        engine::Checker c(sys, opts);
        c.run();
        std::ofstream smt(smt_path);
        for (std::size_t k = 0; k < c.node_count(); ++k) {
          const auto& nd = c.node(static_cast<int>(k));
          if (!nd.removed) smt << "; node " << k << "\n" << logic::to_smtlib(nd.conjunction()) << "\n";
        }
      }
      return exit_code(r.result.verdict);
    }

    // bench
    std::vector<por::Mode> modes;
    {
      std::istringstream ms(modes_text);
      std::string m;
      while (std::getline(ms, m, ',')) modes.push_back(por::parse_mode(m));
    }
    std::map<std::string, std::string> expected;
    if (std::ifstream ex(fs::path(dir) / "expected.txt"); ex) {
      std::string name, verdict;
      while (ex >> name >> verdict) expected[name] = verdict;
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".tp") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    bool all_ok = true;
    out << std::left << std::setw(22) << "program" << std::setw(12) << "mode" << std::setw(9) << "verdict"
        << std::setw(9) << "expected" << std::right << std::setw(9) << "nodes" << std::setw(6) << "refs"
        << std::setw(7) << "preds" << std::setw(10) << "ms" << "  flags\n";
    for (const auto& f : files) {
      const std::string name = f.stem().string();
      const auto sys = concrete::System::from_file(f.string());
      std::optional<Verdict> first;
      for (std::size_t k = 0; k < modes.size(); ++k) {
        opts.mode = modes[k];
        const auto r = run_one(sys, name, opts, k == 0 ? oracle : std::nullopt, "");
        const std::string v = engine::verdict_name(r.result.verdict);
        const auto it = expected.find(name);
        std::string flags;
        if (it != expected.end() && it->second != v) flags += " MISMATCH";
        if (first && *first != r.result.verdict) flags += " MODE-DISAGREE";
        if (r.oracle) {
          const bool o_unsafe = r.oracle->verdict == concrete::ReachVerdict::Unsafe;
          if (o_unsafe != (r.result.verdict == Verdict::Unsafe)) flags += " ORACLE-DISAGREE";
        }
        if (!first) first = r.result.verdict;
        if (!flags.empty()) all_ok = false;
        out << std::left << std::setw(22) << name << std::setw(12) << por::mode_name(modes[k]) << std::setw(9) << v
            << std::setw(9) << (it == expected.end() ? "-" : it->second) << std::right << std::setw(9)
            << r.result.stats.nodes << std::setw(6) << r.result.stats.refinements << std::setw(7)
            << r.result.stats.predicates << std::setw(10) << std::fixed << std::setprecision(0)
            << r.result.stats.wall_ms << " " << (flags.empty() ? " ok" : flags) << "\n";
        if (report) report << report_record(r, opts) << "\n";
      }
    }
    return all_ok ? 0 : 1;
  } catch (const frontend::ParseError& e) {
    err << "esst-mc: parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "esst-mc: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace esst::cli
