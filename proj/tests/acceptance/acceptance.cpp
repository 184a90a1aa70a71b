// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as arguments to
// run a subset. Exit code 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cabne/bne.hpp"
#include "cabne/cells.hpp"
#include "cabne/io.hpp"
#include "cabne/monotonicity.hpp"
#include "cabne/parallel.hpp"
#include "cabne/reference_cases.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace {

using namespace cabne;
namespace fs = std::filesystem;

// Pinned thresholds.
constexpr double kTable1Seconds = 1.0;
constexpr double kTable2Seconds = 10.0;
constexpr double kCorrigendumSeconds = 1.0;
constexpr double kMonotonicitySeconds = 600.0;
constexpr std::uint64_t kMonotonicityProbes = 100'000;
constexpr std::uint64_t kFamilyProbes = 20'000;
const Rational kCertStep(1, 64);
const Rational kCertTarget(1, 50);
constexpr double kCertSeconds = 1800.0;
constexpr std::size_t kVerifyValuations = 200;
constexpr int kVerifyRefine = 4;
const Rational kVerifySlack(1, 1'000'000'000);
const Rational kTheoremStep(1, 16);
const Rational kTheoremUnit(1, 1024);
constexpr int kTheoremPairs = 100;
constexpr int kTheoremBids = 1000;
const Rational kGridStep(1, 4);
constexpr int kGridInstances = 100;
constexpr int kGridOpponentProfiles = 3;
const Rational kDeterminismStep(1, 16);
constexpr int kConsistencyStates = 50;
constexpr std::size_t kConsistencySamples = 1'000'000;
constexpr double kSigmas = 3.0;

const std::string kData = CABNE_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

struct CliResult {
  int code;
  std::string out;
};

CliResult cli_run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str() + err.str()};
}

PaymentVector pay(PaymentRule rule, const AuctionCase& c) {
  return compute_payments(rule, c.instance, c.bids, winner_determination(c.instance, c.bids).allocations.front());
}

std::vector<Rational> winners_only(const AuctionCase& c, const PaymentVector& p) {
  const Allocation x = winner_determination(c.instance, c.bids).allocations.front();
  std::vector<Rational> out;
  for (int i = 0; i < c.instance.num_bidders(); ++i) {
    if (x[i] != kNoBundle) out.push_back(p[i]);
  }
  return out;
}

std::vector<Rational> twelfths(std::initializer_list<int> nums) {
  std::vector<Rational> out;
  for (int n : nums) out.emplace_back(n, 12);
  return out;
}

Outcome check_all(const std::vector<std::pair<std::string, bool>>& checks, double seconds, double limit) {
  Outcome o;
  std::string failed;
  for (const auto& [name, ok] : checks) {
    if (!ok) failed += " " + name;
  }
  o.pass = failed.empty() && seconds < limit;
  o.detail = failed.empty() ? "exact match" : "mismatch:" + failed;
  o.detail += ", " + fmt(seconds) + " s (limit " + fmt(limit, 0) + " s)";
  return o;
}

Outcome table1() {
  const Stopwatch t;
  const auto cli = cli_run({"repro", "table1"});
  const auto left = table1_case(false);
  const auto right = table1_case(true);
  const std::vector<std::pair<std::string, bool>> checks{
      {"repro", cli.code == 0},
      {"left-vcg", pay(PaymentRule::kVcg, left).amounts == std::vector<Rational>{2, 2, 0}},
      {"left-nearest", pay(PaymentRule::kVcgNearest, left).amounts == std::vector<Rational>{3, 3, 0}},
      {"right-vcg", pay(PaymentRule::kVcg, right).amounts == std::vector<Rational>{3, 2, 0}},
      {"right-nearest",
       pay(PaymentRule::kVcgNearest, right).amounts == std::vector<Rational>{Rational(7, 2), Rational(5, 2), 0}},
  };
  return check_all(checks, t.seconds(), kTable1Seconds);
}

Outcome table2() {
  const Stopwatch t;
  const auto cli = cli_run({"repro", "table2"});
  const auto left = table2_case(false);
  const auto right = table2_case(true);
  const Allocation x = winner_determination(left.instance, left.bids).allocations.front();
  const auto core = core_constraints(left.instance, left.bids, x);
  const std::vector<std::pair<std::string, bool>> checks{
      {"repro", cli.code == 0},
      {"vcg", winners_only(left, pay(PaymentRule::kVcg, left)) == std::vector<Rational>{2, 0, 1, 0, 0, 0}},
      {"coalitions", core.constraints.size() <= 2047},
      {"min-revenue", min_revenue(core) == Rational(19, 2)},
      {"left-nearest", winners_only(left, pay(PaymentRule::kVcgNearest, left)) == twelfths({37, 16, 37, 7, 7, 10})},
      {"right-nearest", winners_only(right, pay(PaymentRule::kVcgNearest, right)) == twelfths({36, 18, 36, 6, 6, 12})},
  };
  return check_all(checks, t.seconds(), kTable2Seconds);
}

Outcome corrigendum() {
  const Stopwatch t;
  const auto base = corrigendum_case(false);
  const auto raised = corrigendum_case(true);
  const fs::path out = fs::temp_directory_path() / "cabne_acceptance_certs.json";
  const auto cli = cli_run({"check-monotone", kData + "/corrigendum.json", "--rule", "proportional", "--out", out.string()});
  bool emitted = false;
  if (fs::exists(out)) {
    const auto certs = nlohmann::json::parse(read_file(out.string()));
    emitted = certs.is_array() && !certs.empty();
  }
  const std::vector<std::pair<std::string, bool>> checks{
      {"base", pay(PaymentRule::kProportional, base).amounts == std::vector<Rational>{8, 6}},
      {"raised", pay(PaymentRule::kProportional, raised).amounts == std::vector<Rational>{5, 3}},
      {"check-monotone-exit", cli.code == cli::kExitViolation},
      {"certificate", emitted},
  };
  return check_all(checks, t.seconds(), kCorrigendumSeconds);
}

Outcome monotonicity() {
  const Stopwatch t;
  SearchOptions opt;
  opt.seed = 2024;
  opt.probe_budget = kMonotonicityProbes;
  opt.multi_coordinate = true;
  opt.threads = default_thread_count();
  const auto fp = search_violations(PaymentRule::kFirstPrice, random_family(2, 4, 3, 3, 10), opt);
  const auto vcg = search_violations(PaymentRule::kVcg, random_family(2, 4, 3, 3, 10), opt);
  opt.probe_budget = kFamilyProbes;
  const auto nearest = search_violations(PaymentRule::kVcgNearest, three_bidder_two_good_family(), opt);
  const auto prop = search_violations(PaymentRule::kProportional, two_bidder_two_good_family(), opt);
  Outcome o;
  o.pass = fp.probes_checked == kMonotonicityProbes && vcg.probes_checked == kMonotonicityProbes &&
           fp.certificates.empty() && vcg.certificates.empty() && !nearest.certificates.empty() &&
           !prop.certificates.empty() && t.seconds() < kMonotonicitySeconds;
  o.detail = "first-price " + std::to_string(fp.certificates.size()) + "/" + std::to_string(fp.probes_checked) +
             ", vcg " + std::to_string(vcg.certificates.size()) + "/" + std::to_string(vcg.probes_checked) +
             " violations/probes; vcg-nearest family found " + std::to_string(nearest.certificates.size()) +
             ", proportional family found " + std::to_string(prop.certificates.size()) + "; " + fmt(t.seconds()) +
             " s";
  return o;
}

Outcome certification() {
  const DomainConfig d = build_llg();
  Outcome o;
  for (const auto rule : {PaymentRule::kProxy, PaymentRule::kProportional}) {
    const Stopwatch t;
    SolverConfig cfg;
    cfg.rule = rule;
    cfg.step = kCertStep;
    cfg.target_epsilon = kCertTarget;
    cfg.threads = default_thread_count();
    const auto cert = solve(d, cfg);
    const double solve_s = t.seconds();
    VerifyConfig v;
    v.rule = rule;
    v.step = cert.step;
    v.refine = kVerifyRefine;
    v.valuations = kVerifyValuations;
    v.seed = cert.seed;
    v.threads = cfg.threads;
    const auto report = verify(d, cert.profile, v);
    const bool ok = cert.exact && cert.epsilon <= kCertTarget && solve_s < kCertSeconds &&
                    report.max_loss <= cert.epsilon + kVerifySlack;
    o.pass = o.pass && ok;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += std::string(rule_name(rule)) + " eps " + cert.epsilon.decimal(5) + " (iteration " +
                std::to_string(cert.best_iteration) + ", " + fmt(solve_s, 1) + " s), measured " +
                report.max_loss.decimal(5) + " over " + std::to_string(report.valuations_checked) + " valuations";
  }
  return o;
}

// Vertex i-optimal bound against interior bids. Opponents play a piecewise-constant profile:
// the locals' iterate and the global's truthful bid rounded down to the grid, which is the
// field the solver uses for its bound.
Outcome theorem() {
  const Stopwatch t;
  DomainConfig d = build_llg();
  SolverConfig cfg;
  cfg.step = kTheoremStep;
  cfg.threads = default_thread_count();
  std::uint64_t violations = 0;
  std::uint64_t comparisons = 0;
  std::mt19937_64 rng(606);
  std::string note;
  for (const auto rule : {PaymentRule::kProxy, PaymentRule::kProportional}) {
    cfg.rule = rule;
    // Mid-solve profile: two best-response steps from truthful play.
    StrategyProfile profile = initial_profile(d, cfg.step);
    for (int step = 0; step < 2; ++step) profile = evaluate_profile(d, profile, cfg).best_responses;
    const StrategyProfile field = bracket_truthful(d, profile, cfg.step, Rounding::kDown);
    DomainConfig all_pc = d;
    all_pc.truthful.assign(3, false);

    std::vector<std::vector<Rational>> interior;
    const int units = static_cast<int>((Rational(1) / kTheoremUnit).floor().to_double());
    for (int k = 0; k <= units; ++k) {
      const Rational b = kTheoremUnit * Rational(k);
      if (!(b / cfg.step).is_integer()) interior.push_back({b});
    }
    const auto vertices = cell_vertex_bids({1}, cfg.step);
    const auto orders = TieBreakOrder::all(1);
    for (int bidder = 0; bidder < 2; ++bidder) {
      const auto dist = exact_opponent_distribution(all_pc, bidder, field);
      OutcomeCache cache(d.auction, rule, {}, kTheoremUnit);
      const auto actual = cache.planes(dist, interior, {TieBreakOrder{}}, cfg.threads);
      const auto opt = cache.planes(dist, vertices, orders, cfg.threads);
      std::uniform_real_distribution<double> value(0.0, 1.0);
      std::uniform_int_distribution<std::size_t> pick(0, interior.size() - 1);
      for (int pair = 0; pair < kTheoremPairs / 4; ++pair) {
        const std::vector<Rational> v{Rational::from_double(value(rng))};
        Rational bound = opt[0][0].value(v);
        for (const auto& row : opt) {
          for (const auto& p : row) bound = max(bound, p.value(v));
        }
        for (int k = 0; k < kTheoremBids; ++k) {
          ++comparisons;
          if (actual[pick(rng)][0].value(v) > bound) ++violations;
        }
      }
    }
  }
  Outcome o;
  o.pass = violations == 0 && comparisons == static_cast<std::uint64_t>(kTheoremPairs) * kTheoremBids;
  o.detail = std::to_string(violations) + " violations in " + std::to_string(comparisons) + " comparisons (" +
             std::to_string(kTheoremPairs) + " bidder-valuation pairs over proxy and proportional), " +
             fmt(t.seconds(), 1) + " s";
  return o;
}

Outcome grid_cells() {
  const Stopwatch t;
  std::mt19937_64 rng(77);
  const Rational c = kGridStep;
  const int steps = 8;
  int instances = 0;
  std::uint64_t off_grid = 0;
  std::uint64_t bad_points = 0;
  std::uint64_t scans = 0;
  std::uint64_t cells = 0;
  while (instances < kGridInstances) {
    const AuctionInstance inst = testing::random_instance(rng, 2, 3, 2);
    if (inst.num_bundles(0) != 2 || inst.num_bundles(1) != 2) continue;
    ++instances;
    std::vector<BidProfile> opponents;
    for (int k = 0; k < kGridOpponentProfiles; ++k) opponents.push_back(testing::random_bids(rng, inst, steps, c));
    for (int axis = 0; axis < 2; ++axis) {
      for (int other = 0; other <= steps; ++other) {
        std::vector<Rational> start(2);
        start[static_cast<std::size_t>(1 - axis)] = c * Rational(other);
        ++scans;
        off_grid += off_grid_changes(inst, 0, opponents, start, axis, c, steps).size();
      }
    }
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; b <= steps; ++b) {
        const std::vector<Rational> own{c * Rational(a), c * Rational(b)};
        const auto sig = choice_signature(inst, 0, opponents, own);
        for (const bool last : {false, true}) {
          std::vector<int> choices;
          for (const auto& s : sig) choices.push_back(last ? s.back() : s.front());
          const BidCell cell = bid_cell(inst, 0, opponents, choices);
          const auto low = pareto_point(cell);
          ++cells;
          bool ok = low.has_value() && coordinate_minima(cell) == low && cell.contains(*low);
          if (ok) {
            for (const auto& y : *low) ok = ok && (y / c).is_integer();
          }
          if (!ok) ++bad_points;
        }
      }
    }
  }
  const std::size_t vertices = cell_vertex_bids({2, 2}, Rational(1, 32)).size();
  Outcome o;
  o.pass = off_grid == 0 && bad_points == 0 && vertices == 4225;
  o.detail = std::to_string(instances) + " instances: " + std::to_string(off_grid) + " off-grid changes in " +
             std::to_string(scans) + " axis scans, " + std::to_string(bad_points) + " off-grid pareto points in " +
             std::to_string(cells) + " cells; r=2 vertex count " + std::to_string(vertices) + "; " +
             fmt(t.seconds(), 2) + " s";
  return o;
}

// Identical command lines give identical manifests; the thread count comes from the
// environment so it can differ between the runs without entering the manifest.
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "cabne_acceptance_determinism";
  const std::vector<std::string> args{"solve-bne", "--domain", "llg", "--rule", "proxy", "--step", kDeterminismStep.str(),
                                      "--out", dir.string()};
  const std::vector<std::string> files{"certificate.json", "strategies.csv", "strategies.json", "trace.csv",
                                       "manifest.json"};
  std::vector<std::vector<std::string>> runs;
  for (const char* threads : {"1", "4"}) {
    fs::remove_all(dir);
    ::setenv("CABNE_THREADS", threads, 1);
    const auto r = cli_run(args);
    ::unsetenv("CABNE_THREADS");
    if (r.code == cli::kExitUsage) return {false, "solve-bne failed: " + r.out};
    std::vector<std::string> bytes;
    for (const auto& f : files) bytes.push_back(read_file((dir / f).string()));
    runs.push_back(std::move(bytes));
  }
  std::string differ;
  for (std::size_t k = 0; k < files.size(); ++k) {
    if (runs[0][k] != runs[1][k]) differ += " " + files[k];
  }
  Outcome o;
  o.pass = differ.empty();
  o.detail = differ.empty() ? "certificate, strategies, trace and manifest byte-identical (threads 1 vs 4)"
                            : "differ:" + differ;
  return o;
}

PiecewiseConstantStrategy random_local(std::mt19937_64& rng, const std::vector<UniformPrior>& box) {
  auto s = PiecewiseConstantStrategy::grid(box, Rational(1, 16));
  std::uniform_int_distribution<int> unit(0, 64);
  for (std::size_t c = 0; c < s.num_cells(); ++c) s.set_bid(c, {Rational(unit(rng), 64)});
  return s;
}

Outcome consistency() {
  const Stopwatch t;
  const DomainConfig d = build_llg();
  const auto samples = sample_valuations(d, kConsistencySamples, 99);
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<int> unit(0, 64);
  double worst = 0;
  int failures = 0;
  for (int state = 0; state < kConsistencyStates; ++state) {
    const int bidder = state % 2;
    StrategyProfile profile{random_local(rng, d.priors[0]), random_local(rng, d.priors[1]), TruthfulStrategy{}};
    const auto field =
        bracket_truthful(d, profile, Rational(1, 16), state % 4 < 2 ? Rounding::kUp : Rounding::kDown);
    DomainConfig all_pc = d;
    all_pc.truthful.assign(3, false);
    const auto exact = exact_opponent_distribution(all_pc, bidder, field);
    const auto sampled = sampled_opponent_distribution(all_pc, bidder, field, samples);
    const std::vector<Rational> bid{Rational(unit(rng), 64)};
    const PaymentRule rule = state % 3 == 0 ? PaymentRule::kProportional : PaymentRule::kProxy;
    const double p = utility_plane(d.auction, rule, bidder, bid, exact).win_prob[0].to_double();
    const double q = utility_plane(d.auction, rule, bidder, bid, sampled).win_prob[0].to_double();
    const double n = static_cast<double>(kConsistencySamples);
    const double sigma = std::max(std::sqrt(p * (1 - p) / n), 1.0 / n);
    const double z = std::abs(q - p) / sigma;
    worst = std::max(worst, z);
    if (z > kSigmas) ++failures;
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = std::to_string(failures) + " of " + std::to_string(kConsistencyStates) +
             " states outside 3 sigma (largest deviation " + fmt(worst, 2) + " sigma, " +
             std::to_string(kConsistencySamples) + " samples), " + fmt(t.seconds(), 1) + " s";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden table 1", table1},
      {"golden table 2", table2},
      {"golden corrigendum", corrigendum},
      {"monotonicity evidence", monotonicity},
      {"LLG certification at c=1/64", certification},
      {"vertex bound dominates interior bids", theorem},
      {"cell corners on the grid", grid_cells},
      {"determinism", determinism},
      {"exact vs sampled planes", consistency},
  };
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::stoi(argv[a]));
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && selected.count(id) == 0) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[k].first << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
