#pragma once

// Command-line front end. Every subcommand first echoes its effective
// configuration, then its report; `--records` switches both to one JSON
// object per line. Exit status: 0 success, 1 property violation or oracle
// discrepancy, 2 usage or input error.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bireduct/bireduct.hpp"

namespace bireduct::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

// Decimal or 0x-prefixed hexadecimal.
inline std::uint64_t parse_seed(const std::string& text) {
  if (text.empty()) throw CLI::ValidationError("--seed", "empty seed");
  std::uint64_t value = 0;
  const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  const char* begin = text.data() + (hex ? 2 : 0);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value, hex ? 16 : 10);
  if (ec != std::errc() || ptr != end) throw CLI::ValidationError("--seed", "not a decimal or 0x-hex 64-bit value: " + text);
  return value;
}

inline std::string fmt_double(double x, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

inline std::string hex_seed(std::uint64_t s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, s);
  return buf;
}

inline Json vertex_json(VertexRef v) { return to_string(v); }

inline std::string brace(const std::vector<std::size_t>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out + "}";
}

struct Session {
  std::ostream& out;
  bool records = false;

  void config(const Json& cfg) {
    if (records) {
      Json j = {{"type", "config"}};
      j.update(cfg);
      out << j.dump() << '\n';
    } else {
      out << "# config";
      for (const auto& [k, v] : cfg.items()) out << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
      out << '\n';
    }
  }
  void record(const Json& j) { out << j.dump() << '\n'; }
};

inline int cmd_sample(Session& s, std::size_t m, std::size_t n, std::uint64_t seed, const std::string& path) {
  s.config({{"command", "sample"}, {"m", m}, {"n", n}, {"seed", hex_seed(seed)}, {"output", path}});
  const BipartiteGraph g = sample_graph(m, n, seed);
  const std::string text = format_graph(g);
  if (path == "-") {
    s.out << text;
  } else {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    f << text;
  }
  if (s.records)
    s.record({{"type", "sample"}, {"left", m}, {"right", n}, {"p1_count", g.p1_count()}});
  else
    s.out << "sampled " << m << 'x' << n << " graph, " << g.p1_count() << " P1 cross-edges\n";
  return kExitOk;
}

inline int cmd_theta(Session& s, std::size_t k, const std::string& path) {
  s.config({{"command", "theta"}, {"k", k}, {"file", path}});
  const BipartiteGraph g = parse_graph(read_file(path));
  const ThetaWitness w = check_theta(g, k);
  if (s.records) {
    Json j = {{"type", "theta"}, {"k", k}, {"ok", w.ok}};
    if (w.failing_instance) {
      const auto& f = *w.failing_instance;
      j["side"] = std::string(1, side_letter(f.side));
      j["x1"] = f.x1;
      j["x2"] = f.x2;
    }
    s.record(j);
  } else if (w.ok) {
    s.out << "theta_" << k << " holds on the " << g.left_count() << 'x' << g.right_count() << " graph\n";
  } else {
    const auto& f = *w.failing_instance;
    s.out << "theta_" << k << " fails: X1=" << side_letter(f.side) << brace(f.x1) << " X2=" << side_letter(f.side)
          << brace(f.x2) << " has no witness on side " << side_letter(opposite(f.side)) << '\n';
  }
  return w.ok ? kExitOk : kExitViolation;
}

inline Json classification_json(const Classification& c) {
  Json j = {{"class", std::string(to_string(c.reduct_class))},
            {"aut_kind", std::string(to_string(c.aut_kind))},
            {"decomposable", c.decomposable()}};
  if (c.decomposition) {
    j["pattern"] = format_pattern(c.decomposition->pattern);
    j["global_exchange"] = is_global_exchange(*c.decomposition);
  }
  if (c.certificate) j["certificate"] = {c.certificate->a0, c.certificate->a1, c.certificate->b0, c.certificate->b1};
  return j;
}

inline void print_classification(Session& s, const Classification& c) {
  if (s.records) {
    Json j = {{"type", "classification"}};
    j.update(classification_json(c));
    s.record(j);
    return;
  }
  s.out << "class: " << to_string(c.reduct_class) << '\n';
  if (c.reduct_class == ReductClass::AutStar) s.out << "aut_kind: " << to_string(c.aut_kind) << '\n';
  s.out << "decomposable: " << (c.decomposable() ? "yes" : "no") << '\n';
  if (c.decomposition) {
    s.out << "pattern: " << format_pattern(c.decomposition->pattern) << '\n';
    s.out << "global_exchange: " << (is_global_exchange(*c.decomposition) ? "yes" : "no") << '\n';
  }
  if (c.certificate)
    s.out << "odd minor: rows " << c.certificate->a0 << ',' << c.certificate->a1 << " columns " << c.certificate->b0
          << ',' << c.certificate->b1 << '\n';
}

struct MapInputs {
  BipartiteGraph source;
  BipartiteGraph target;
  SidedMap map;
};

inline MapInputs load_map_inputs(const std::string& src, const std::string& dst, const std::string& map) {
  BipartiteGraph g = parse_graph(read_file(src));
  BipartiteGraph h = parse_graph(read_file(dst));
  SidedMap f = parse_map(read_file(map), h.left_count(), h.right_count());
  if (!f.fits(g, h))
    throw Error(ErrorKind::DimensionMismatch, "map domain is " + std::to_string(f.source_left_count()) + "x" +
                                                  std::to_string(f.source_right_count()) + ", source graph is " +
                                                  std::to_string(g.left_count()) + "x" + std::to_string(g.right_count()));
  return {std::move(g), std::move(h), std::move(f)};
}

inline int cmd_classify(Session& s, const std::string& src, const std::string& dst, const std::string& map) {
  s.config({{"command", "classify"}, {"source", src}, {"target", dst}, {"map", map}});
  const MapInputs in = load_map_inputs(src, dst, map);
  print_classification(s, classify_report(flip_matrix(in.map, in.source, in.target)));
  return kExitOk;
}

inline int cmd_decompose(Session& s, const std::string& path) {
  s.config({{"command", "decompose"}, {"flip", path}});
  const FlipMatrix e = parse_flip_matrix(read_file(path));
  const Classification c = classify_report(e);
  print_classification(s, c);
  return c.decomposable() ? kExitOk : kExitViolation;
}

inline int cmd_analyze(Session& s, const std::string& src, const std::string& dst, const std::string& map,
                       std::size_t m, std::size_t n) {
  s.config({{"command", "analyze"}, {"source", src}, {"target", dst}, {"map", map}, {"m", m}, {"n", n}});
  const MapInputs in = load_map_inputs(src, dst, map);
  const auto trace = mn_analysis(in.map, in.source, in.target, m, n);
  if (!trace) {
    if (s.records)
      s.record({{"type", "analysis"}, {"in_slr", false}});
    else
      s.out << "NotInSLR: the flip matrix has an odd 2x2 minor\n";
    return kExitViolation;
  }
  if (s.records) {
    s.record({{"type", "analysis"},
              {"in_slr", true},
              {"m", trace->m},
              {"n", trace->n},
              {"global_prefix", std::string(to_string(trace->global_prefix))},
              {"final_check", trace->final_check}});
    for (std::size_t j = 0; j < trace->stages.size(); ++j) {
      const auto& st = trace->stages[j];
      Json r = {{"type", "stage"}, {"index", j}, {"kind", std::string(to_string(st.kind))}};
      r["vertex"] = st.vertex ? vertex_json(*st.vertex) : Json(nullptr);
      r["witness_left"] = st.witness_left;
      r["witness_right"] = st.witness_right;
      s.record(r);
    }
  } else {
    s.out << format_trace(*trace);
    s.out << "final_check: " << (trace->final_check ? "pass" : "FAIL") << '\n';
  }
  return trace->final_check ? kExitOk : kExitViolation;
}

inline int cmd_oracle(Session& s, std::size_t max_left, std::size_t max_right) {
  s.config({{"command", "oracle"}, {"max_left", max_left}, {"max_right", max_right}});
  const OracleReport r = verify_equivalence(max_left, max_right);
  if (s.records) {
    for (ReductClass c : kAllReductClasses)
      s.record({{"type", "census"},
                {"class", std::string(to_string(c))},
                {"oracle", r.oracle_census[census_index(c)]},
                {"classifier", r.classifier_census[census_index(c)]}});
    Json sum = {{"type", "oracle_summary"},
                {"left", r.left},
                {"right", r.right},
                {"graph_pairs", r.graph_pairs},
                {"maps", r.total_maps},
                {"discrepancies", r.discrepancies}};
    if (r.first_discrepancy) {
      const auto& d = *r.first_discrepancy;
      sum["first_discrepancy"] = {{"source", format_graph(d.source)},
                                  {"target", format_graph(d.target)},
                                  {"map", format_map(d.map)},
                                  {"oracle", std::string(to_string(d.oracle))},
                                  {"classifier", std::string(to_string(d.classifier))}};
    }
    s.record(sum);
  } else {
    s.out << "shape " << r.left << 'x' << r.right << ": " << r.graph_pairs << " graph pairs, " << r.total_maps
          << " maps\n";
    s.out << "class       oracle  classifier\n";
    for (ReductClass c : kAllReductClasses) {
      char line[96];
      std::snprintf(line, sizeof line, "%-10s %7zu %11zu\n", std::string(to_string(c)).c_str(),
                    r.oracle_census[census_index(c)], r.classifier_census[census_index(c)]);
      s.out << line;
    }
    s.out << "discrepancies: " << r.discrepancies << '\n';
    if (r.first_discrepancy) {
      const auto& d = *r.first_discrepancy;
      s.out << "first discrepancy: oracle " << to_string(d.oracle) << ", classifier " << to_string(d.classifier)
            << "\nsource " << d.source << "\ntarget " << d.target << '\n'
            << format_map(d.map);
    }
  }
  return r.agreed() ? kExitOk : kExitViolation;
}

inline int cmd_sfbsp(Session& s, std::size_t k, const std::vector<std::size_t>& sizes, std::size_t trials,
                     std::uint64_t seed) {
  s.config({{"command", "sfbsp"}, {"k", k}, {"sizes", sizes}, {"trials", trials}, {"seed", hex_seed(seed)}});
  bool violated = false;
  if (!s.records) s.out << "n_total  m_left  n_right  empirical_rate      ci95  analytic_term  within_bound\n";
  for (std::size_t n_total : sizes) {
    const auto [l, r] = chain_sides(n_total);
    const FailureEstimate est = estimate_theta_failure(n_total, k, trials, seed);
    const double term = analytic_failure_term(n_total, k);
    const bool ok = est.rate <= std::min(1.0, term) + 3.0 * est.ci95;
    violated |= !ok;
    if (s.records) {
      s.record({{"type", "sfbsp_row"},
                {"n_total", n_total},
                {"m_left", l},
                {"n_right", r},
                {"empirical_rate", est.rate},
                {"ci95", est.ci95},
                {"analytic_term", term},
                {"within_bound", ok}});
    } else {
      char line[160];
      std::snprintf(line, sizeof line, "%7zu %7zu %8zu %15s %9s %14s  %s\n", n_total, l, r,
                    fmt_double(est.rate).c_str(), fmt_double(est.ci95).c_str(), fmt_double(term, "%.6e").c_str(),
                    ok ? "yes" : "NO");
      s.out << line;
    }
  }
  return violated ? kExitViolation : kExitOk;
}

// Runs one invocation. args[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Side-preserving reducts of the random bipartite graph at finite scale", "bireduct"};
  app.require_subcommand(1);
  bool records = false;
  app.add_flag("--records", records, "Line-delimited JSON records instead of text");

  std::size_t m = 0, n = 0, k = 1, trials = 1000, max_left = 2, max_right = 2;
  std::string seed_text = "0", output = "-", file, source, target, map, flip;
  std::vector<std::size_t> sizes = {20, 40, 80};

  auto* sample = app.add_subcommand("sample", "Sample a random bipartite graph");
  sample->add_option("-m", m, "Left side size")->required()->check(CLI::PositiveNumber);
  sample->add_option("-n", n, "Right side size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed_text, "Seed, decimal or 0x-hex")->capture_default_str();
  sample->add_option("-o,--output", output, "Output graph file, '-' for stdout")->capture_default_str();

  auto* theta = app.add_subcommand("theta", "Check the extension property");
  theta->add_option("-k", k, "Set size bound")->capture_default_str()->check(CLI::PositiveNumber);
  theta->add_option("file", file, "Graph file")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Classify a map between two graphs");
  classify_cmd->add_option("--source", source, "Source graph file")->required();
  classify_cmd->add_option("--target", target, "Target graph file")->required();
  classify_cmd->add_option("--map", map, "Map file")->required();

  auto* decompose_cmd = app.add_subcommand("decompose", "Decompose a flip matrix into a switch pattern");
  decompose_cmd->add_option("--flip", flip, "Flip-matrix file")->required();

  auto* analyze = app.add_subcommand("analyze", "Compute an (m x n)-analysis of a map");
  analyze->add_option("--source", source, "Source graph file")->required();
  analyze->add_option("--target", target, "Target graph file")->required();
  analyze->add_option("--map", map, "Map file")->required();
  analyze->add_option("-m", m, "Core rows (> 2)")->required();
  analyze->add_option("-n", n, "Core columns (> 2)")->required();

  auto* oracle = app.add_subcommand("oracle", "Exhaustive oracle-versus-classifier sweep");
  oracle->add_option("--max-left", max_left, "Left side size")->capture_default_str()->check(CLI::Range(1, 3));
  oracle->add_option("--max-right", max_right, "Right side size")->capture_default_str()->check(CLI::Range(1, 3));

  auto* sfbsp = app.add_subcommand("sfbsp", "Monte Carlo failure rates against the analytic bound");
  sfbsp->add_option("-k", k, "Extension parameter")->capture_default_str()->check(CLI::PositiveNumber);
  sfbsp->add_option("--sizes", sizes, "Total sizes, comma separated")->delimiter(',')->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  sfbsp->add_option("--trials", trials, "Trials per size")->capture_default_str()->check(CLI::PositiveNumber);
  sfbsp->add_option("--seed", seed_text, "Seed, decimal or 0x-hex")->capture_default_str();

  std::vector<std::string> argv_store(args.begin(), args.end());
  if (argv_store.empty()) argv_store.emplace_back("bireduct");
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  Session s{out, records};
  try {
    const std::uint64_t seed = parse_seed(seed_text);
    if (*sample) return cmd_sample(s, m, n, seed, output);
    if (*theta) return cmd_theta(s, k, file);
    if (*classify_cmd) return cmd_classify(s, source, target, map);
    if (*decompose_cmd) return cmd_decompose(s, flip);
    if (*analyze) return cmd_analyze(s, source, target, map, m, n);
    if (*oracle) return cmd_oracle(s, max_left, max_right);
    if (*sfbsp) return cmd_sfbsp(s, k, sizes, trials, seed);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bireduct::cli
