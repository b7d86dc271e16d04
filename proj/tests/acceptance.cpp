// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and sizes
// are pinned below; `--criterion N` runs a single criterion.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "bireduct/analysis.hpp"
#include "bireduct/oracle.hpp"
#include "bireduct/random_lab.hpp"
#include "bireduct/text_format.hpp"

using namespace bireduct;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SwitchPattern random_pattern(SplitMix64& rng, std::size_t l, std::size_t r) {
  SwitchPattern p = SwitchPattern::empty(l, r);
  for (std::size_t a = 0; a < l; ++a) p.left.set(a, rng() >> 63);
  for (std::size_t b = 0; b < r; ++b) p.right.set(b, rng() >> 63);
  return p;
}

std::vector<std::size_t> random_permutation(SplitMix64& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

// Random bijection f and target h such that flip_matrix(f, g, h)(a, b) is
// g(a, b) XOR extra(a, b).
struct MapInstance {
  BipartiteGraph g;
  BipartiteGraph h;
  SidedMap f;
};

MapInstance plant(SplitMix64& rng, std::size_t l, std::size_t r, const FlipMatrix& extra) {
  const auto g = sample_graph(l, r, rng());
  const auto lp = random_permutation(rng, l), rp = random_permutation(rng, r);
  BitMatrix img(l, r);
  for (std::size_t a = 0; a < l; ++a)
    for (std::size_t b = 0; b < r; ++b) img.set(lp[a], rp[b], g.is_p1(a, b) != extra(a, b));
  return {g, BipartiteGraph(img), SidedMap(lp, rp, l, r)};
}

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::size_t maps = 0, bad = 0;
  std::string census;
  for (auto [l, r] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 2}}) {
    const auto rep = verify_equivalence(l, r);
    maps += rep.total_maps;
    bad += rep.discrepancies;
    if (l == 2 && r == 2 && rep.total_maps != 1024) ++bad;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && maps == 1024 + 2 * 64 * 64 * 12 && secs < 120.0,
          fmt("%zu maps at (2,2) (2,3) (3,2), %zu discrepancies, %.2fs (limit 120s)", maps, bad, secs)};
}

Outcome five_class_census() {
  ClassCensus from_classifier{}, from_oracle{};
  const auto id = SidedMap::identity(2, 2);
  const auto zero = BipartiteGraph(BitMatrix(2, 2));
  for (std::uint32_t code = 0; code < 16; ++code) {
    BitMatrix bits(2, 2);
    for (std::size_t i = 0; i < 4; ++i) bits.set(i / 2, i % 2, (code >> i) & 1u);
    const FlipMatrix e(bits);
    ++from_classifier[census_index(classify(e))];
    // Between the empty graph and the graph whose P1 edges are e, the identity
    // map has flip matrix e.
    ++from_oracle[census_index(oracle_class(id, zero, BipartiteGraph(bits)))];
  }
  const ClassCensus expect{2, 2, 2, 2, 8};
  std::string counts;
  for (ReductClass c : kAllReductClasses)
    counts += std::string(to_string(c)) + "=" + std::to_string(from_classifier[census_index(c)]) + " ";
  return {from_classifier == expect && from_oracle == expect,
          counts + (from_oracle == from_classifier ? "(oracle agrees)" : "(oracle disagrees)")};
}

Outcome parity_even_flips() {
  const auto t0 = Clock::now();
  const auto id = SidedMap::identity(2, 2);
  std::size_t cases = 0, bad = 0;
  for (std::uint32_t gc = 0; gc < 16; ++gc)
    for (std::uint32_t fc = 0; fc < 16; ++fc) {
      BitMatrix gb(2, 2), hb(2, 2);
      for (std::size_t i = 0; i < 4; ++i) {
        gb.set(i / 2, i % 2, (gc >> i) & 1u);
        hb.set(i / 2, i % 2, ((gc ^ fc) >> i) & 1u);
      }
      const BipartiteGraph g(gb), h(hb);
      const bool parity_kept = g.p1_count() % 2 == h.p1_count() % 2;
      const bool even_flips = flip_matrix(id, g, h).bits().count() % 2 == 0;
      ++cases;
      if (parity_kept != even_flips) ++bad;
    }
  const double secs = seconds_since(t0);
  return {bad == 0 && cases == 256 && secs < 1.0,
          fmt("%zu graph x flip cases, %zu mismatches, %.4fs (limit 1s)", cases, bad, secs)};
}

Outcome decomposition_round_trip() {
  const auto t0 = Clock::now();
  SplitMix64 rng(0xD3C0);
  std::size_t bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const SwitchPattern p = random_pattern(rng, 8, 8);
    const FlipMatrix e = pattern_flip_matrix(p);
    const auto d = decompose(e);
    if (!d || !(d->flip() == e)) {
      ++bad;
      continue;
    }
    // Every representative of the planted switch normalizes to what decompose
    // returns: the complement, and the exchange with one side complemented.
    const auto n1 = normalize({false, p}), n2 = normalize({false, p.complemented()}),
               n3 = normalize({true, SwitchPattern{~p.left, p.right}});
    if (!(n1 == n2 && n2 == n3 && normalize(*d) == n1 && *d == n1)) ++bad;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 1.0, fmt("1000 planted 8x8 patterns, %zu failures, %.4fs (limit 1s)", bad, secs)};
}

Outcome bound_calculator() {
  constexpr double kValueTol = 1e-12, kRatioTol = 1e-3;
  const double c5 = failure_bound_term(5, 1);
  bool ok = std::abs(c5 - 12.65625) <= kValueTol;
  std::string detail = fmt("C_5(k=1)=%.12f", c5);
  for (std::size_t k : {1u, 2u}) {
    const double ratio = failure_bound_term_ratio(10000, k);
    ok = ok && std::abs(ratio - (1.0 - std::pow(0.25, static_cast<double>(k)))) <= kRatioTol;
    detail += fmt(", C_10001/C_10000(k=%zu)=%.6f", k, ratio);
  }
  return {ok, detail + fmt(" (tol %.0e, %.0e)", kValueTol, kRatioTol)};
}

Outcome monte_carlo_vs_bound() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::size_t n : {20u, 40u, 80u}) {
    const auto est = estimate_theta_failure(n, 1, 1000, 0xACCE55);
    const double limit = std::min(1.0, analytic_failure_term(n, 1)) + 3.0 * est.ci95;
    ok = ok && est.rate <= limit;
    detail += fmt("n=%zu rate=%.4f limit=%.4f; ", n, est.rate, limit);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 60.0, detail + fmt("%.2fs (limit 60s)", secs)};
}

Outcome theta_monotone() {
  std::size_t violations = 0, k2_pass = 0, k1_pass = 0;
  for (std::uint64_t t = 0; t < 500; ++t) {
    const auto g = sample_graph(30, 30, trial_seed(0x7E7A, t));
    const bool k1 = check_theta(g, 1).ok, k2 = check_theta(g, 2).ok;
    k1_pass += k1;
    k2_pass += k2;
    if (k2 && !k1) ++violations;
  }
  return {violations == 0, fmt("500 samples at 30x30, %zu pass k=1, %zu pass k=2, %zu violations of k=2 => k=1",
                               k1_pass, k2_pass, violations)};
}

Outcome analysis_soundness() {
  const auto t0 = Clock::now();
  SplitMix64 rng(0xA7A1);
  std::size_t sound = 0, rejected = 0;
  for (int t = 0; t < 100; ++t) {
    const auto inst = plant(rng, 6, 6, pattern_flip_matrix(random_pattern(rng, 6, 6)));
    const auto trace = mn_analysis(inst.f, inst.g, inst.h, 3, 3);
    if (trace && trace->final_check && verify_trace(*trace, inst.f, inst.g, inst.h)) ++sound;
  }
  for (int t = 0; t < 100; ++t) {
    // A switch pattern with one extra flipped edge has exactly the odd 2x2
    // minors through that edge.
    FlipMatrix e = pattern_flip_matrix(random_pattern(rng, 6, 6));
    BitMatrix bits = e.bits();
    bits.flip(rng.below(6), rng.below(6));
    const auto inst = plant(rng, 6, 6, FlipMatrix(bits));
    if (!mn_analysis(inst.f, inst.g, inst.h, 3, 3)) ++rejected;
  }
  const double secs = seconds_since(t0);
  return {sound == 100 && rejected == 100 && secs < 30.0,
          fmt("planted: %zu/100 verified, odd minor: %zu/100 NotInSLR, %.2fs (limit 30s)", sound, rejected, secs)};
}

// Random partial isomorphism of g with at most `cap` vertices per side, by
// rejection on random injections.
PartialIso random_partial_iso(const BipartiteGraph& g, SplitMix64& rng, std::size_t cap) {
  for (;;) {
    PartialIso f;
    for (Side s : {Side::Left, Side::Right}) {
      const std::size_t count = rng.below(cap + 1), size = g.side_count(s);
      const auto src = random_permutation(rng, size), img = random_permutation(rng, size);
      for (std::size_t i = 0; i < count; ++i) f.side(s).emplace_back(src[i], img[i]);
    }
    if (is_partial_isomorphism(g, f)) return f;
  }
}

std::size_t extension_successes(const BipartiteGraph& g, std::size_t attempts, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::size_t ok = 0;
  for (std::size_t t = 0; t < attempts; ++t) {
    const PartialIso f = random_partial_iso(g, rng, 3);
    VertexRef v;
    do v = VertexRef{rng() >> 63 ? Side::Right : Side::Left, 0}, v.index = rng.below(g.side_count(v.side));
    while (f.in_domain(v));
    const auto ext = extend_partial_iso(g, f, v);
    if (ext && is_partial_isomorphism(g, *ext) && ext->in_domain(v)) ++ok;
  }
  return ok;
}

// Needs a sample that passes the extension property with k = 3. At 60 per
// side a random sample fails it with near certainty, so the search below
// finds none and the criterion fails. The extension count on an unqualified
// sample is printed as a diagnostic only.
Outcome back_and_forth() {
  constexpr std::size_t kSide = 60, kSeeds = 100;
  std::optional<std::uint64_t> qualified;
  for (std::uint64_t s = 0; s < kSeeds && !qualified; ++s)
    if (check_theta(sample_graph(kSide, kSide, trial_seed(0xBAF0, s)), 3).ok) qualified = s;

  // Expected number of violated instances with |X1| = |X2| = 3 on one side.
  const double log_expect = std::log(2.0) + log_binomial(60, 3) + log_binomial(57, 3) + 60 * std::log(63.0 / 64.0);
  if (!qualified) {
    const auto diag = extension_successes(sample_graph(kSide, kSide, trial_seed(0xBAF0, 0)), 200, 0xE7);
    return {false, fmt("no %zux%zu sample among %zu seeds passes k=3 (expected violations per sample ~%.2e); "
                       "diagnostic without the k=3 premise: %zu/200 extensions",
                       kSide, kSide, kSeeds, std::exp(log_expect), diag)};
  }
  const auto ok = extension_successes(sample_graph(kSide, kSide, trial_seed(0xBAF0, *qualified)), 200, 0xE7);
  return {ok == 200, fmt("sample seed index %llu passes k=3, %zu/200 extensions",
                         static_cast<unsigned long long>(*qualified), ok)};
}

// ---------------------------------------------------------------------------

struct Captured {
  int status;
  std::string out;
};

Captured capture(const std::string& command) {
  Captured c{-1, {}};
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), got);
  c.status = pclose(pipe);
  return c;
}

Outcome cli_reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bireduct_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name, std::ios::binary) << text;
    return (dir / name).string();
  };
  SplitMix64 rng(0xC11);
  const auto inst = plant(rng, 6, 6, pattern_flip_matrix(random_pattern(rng, 6, 6)));
  const auto g = put("g.bg", format_graph(inst.g)), h = put("h.bg", format_graph(inst.h)),
             f = put("f.map", format_map(inst.f)), e = put("e.flip", format_flip_matrix(flip_matrix(inst.f, inst.g, inst.h))),
             big = put("big.bg", format_graph(sample_graph(12, 12, 5)));

  const std::vector<std::string> commands = {
      "sample -m 7 -n 9 --seed 0x2a",
      "theta -k 1 " + big,
      "theta -k 2 " + big,
      "classify --source " + g + " --target " + h + " --map " + f,
      "decompose --flip " + e,
      "analyze --source " + g + " --target " + h + " --map " + f + " -m 3 -n 3",
      "oracle --max-left 2 --max-right 3",
      "oracle --max-left 3 --max-right 2",
      "sfbsp -k 1 --sizes 10,20,40 --trials 400 --seed 9",
  };
  std::size_t runs = 0, differing = 0;
  std::string first_diff;
  for (const auto& base : commands)
    for (const std::string records : {"", "--records "}) {
      std::vector<Captured> outs;
      for (const char* threads : {"1", "1", "4", "4"})
        outs.push_back(capture(std::string("THREADS=") + threads + " '" + BIREDUCT_CLI_PATH + "' " + records + base + " 2>&1"));
      runs += outs.size();
      for (const auto& o : outs)
        if (o.out != outs[0].out || o.status != outs[0].status || o.out.empty()) {
          ++differing;
          if (first_diff.empty()) first_diff = records + base;
          break;
        }
    }
  fs::remove_all(dir);
  return {differing == 0, fmt("%zu CLI runs (THREADS=1 and 4, twice each), %zu commands differ", runs, differing) +
                              (first_diff.empty() ? "" : "; first: " + first_diff)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"five-class census", five_class_census},
      {"parity iff even flips", parity_even_flips},
      {"decomposition round-trip", decomposition_round_trip},
      {"failure bound calculator", bound_calculator},
      {"Monte Carlo below bound", monte_carlo_vs_bound},
      {"extension property monotone", theta_monotone},
      {"(m x n)-analysis soundness", analysis_soundness},
      {"back-and-forth extension", back_and_forth},
      {"CLI reproducibility", cli_reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
              << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
