#include "cli.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cabne/bne.hpp"
#include "cabne/errors.hpp"
#include "cabne/io.hpp"
#include "cabne/monotonicity.hpp"
#include "cabne/parallel.hpp"
#include "cabne/payments.hpp"
#include "cabne/reference_cases.hpp"

#ifndef CABNE_VERSION
#define CABNE_VERSION "0.0.0"
#endif

namespace cabne::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int k = 0; k < length; ++k) out << std::hex << std::setw(2) << std::setfill('0') << int{digest[k]};
  return out.str();
}

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Globals {
  int threads = default_thread_count();
  int decimal = -1;
  std::string manifest;
};

/// Exact value, plus a rounded decimal when requested.
std::string num(const Rational& x, const Globals& g) {
  if (g.decimal < 0) return x.str();
  return x.str() + " (" + x.decimal(g.decimal) + ")";
}

std::string vec(const std::vector<Rational>& v, const Globals& g) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + num(v[k], g);
  return s + ")";
}

std::string allocation_text(const AuctionInstance& inst, const Allocation& x) {
  std::string s;
  for (int i = 0; i < inst.num_bidders(); ++i) {
    s += (i ? " " : "") + inst.bidder(i).id + "->" + inst.bundle_label(inst.bundle(i, x[i]));
  }
  return s;
}

/// Records what a run read and wrote so it can be replayed.
class Manifest {
 public:
  Manifest(std::string subcommand, const std::vector<std::string>& args) {
    j_["tool"] = "cabne";
    j_["version"] = CABNE_VERSION;
    j_["subcommand"] = std::move(subcommand);
    j_["argv"] = args;
    j_["inputs"] = json::object();
    j_["outputs"] = json::object();
    j_["config"] = json::object();
  }
  void input(const std::string& path, const std::string& contents) { j_["inputs"][path] = sha256_hex(contents); }
  void output(const std::string& name, const std::string& contents) { j_["outputs"][name] = sha256_hex(contents); }
  template <typename T>
  void config(const std::string& key, const T& value) {
    j_["config"][key] = value;
  }
  void write(const std::string& path) const { write_file(path, j_.dump(2) + "\n"); }

 private:
  json j_;
};

int cmd_wd(const std::string& path, std::uint64_t node_budget, const Globals& g, Manifest& m, std::ostream& out) {
  const std::string text = read_file(path);
  m.input(path, text);
  const AuctionCase c = parse_case(text);
  WdOptions opt;
  opt.node_budget = node_budget;
  const WdResult r = winner_determination(c.instance, c.bids, opt);
  std::ostringstream s;
  s << "welfare " << num(r.welfare, g) << "\n";
  s << "allocations " << r.allocations.size() << "\n";
  for (const auto& x : r.allocations) s << "  " << allocation_text(c.instance, x) << "\n";
  out << s.str();
  m.output("stdout", s.str());
  return kExitOk;
}

bool is_core_rule(PaymentRule rule) {
  return rule == PaymentRule::kVcgNearest || rule == PaymentRule::kProportional || rule == PaymentRule::kProxy;
}

int cmd_pay(const std::string& path, const std::string& rule_text, std::size_t index, const Globals& g, Manifest& m,
            std::ostream& out) {
  const std::string text = read_file(path);
  m.input(path, text);
  const PaymentRule rule = parse_rule(rule_text);
  const AuctionCase c = parse_case(text);
  const WdResult r = winner_determination(c.instance, c.bids);
  if (index >= r.allocations.size()) throw InvalidInput("allocation index out of range");
  const Allocation& x = r.allocations[index];
  const PaymentVector p = compute_payments(rule, c.instance, c.bids, x);
  std::ostringstream s;
  s << "rule " << rule_name(rule) << "\n";
  if (r.allocations.size() > 1) {
    s << "note " << r.allocations.size() << " efficient allocations; using #" << index << " (see --allocation)\n";
  }
  s << "allocation " << allocation_text(c.instance, x) << "\n";
  for (int i = 0; i < c.instance.num_bidders(); ++i) s << "payment " << c.instance.bidder(i).id << " " << num(p[i], g) << "\n";
  s << "revenue " << num(p.total(), g) << "\n";
  if (is_core_rule(rule)) s << "min_core_revenue " << num(min_revenue(core_constraints(c.instance, c.bids, x)), g) << "\n";
  out << s.str();
  m.output("stdout", s.str());
  return kExitOk;
}

struct MonotoneArgs {
  std::string rule;
  std::string case_path;
  bool random = false;
  std::string family = "random";
  std::uint64_t budget = 100'000;
  std::uint64_t seed = 1;
  bool multi = false;
  bool minimize = false;
  std::string out;
};

int cmd_check_monotone(const MonotoneArgs& a, const Globals& g, Manifest& m, std::ostream& out) {
  const PaymentRule rule = parse_rule(a.rule);
  SearchResult result;
  if (!a.case_path.empty()) {
    const std::string text = read_file(a.case_path);
    m.input(a.case_path, text);
    const AuctionCase c = parse_case(text);
    for (const auto& probe : probes_for(c.instance, c.bids, a.multi)) {
      if (result.probes_checked >= a.budget) break;
      ++result.probes_checked;
      try {
        if (auto cert = check_probe(rule, probe)) result.certificates.push_back(std::move(*cert));
      } catch (const InfeasibleForm&) {
        ++result.probes_skipped;
      }
    }
    result.instances_checked = 1;
  } else {
    const std::string family = a.random ? std::string("random") : a.family;
    InstanceGenerator gen;
    if (family == "random") {
      gen = random_family(2, 4, 3, 3, 10);
    } else if (family == "three-bidder") {
      gen = three_bidder_two_good_family();
    } else if (family == "two-bidder") {
      gen = two_bidder_two_good_family();
    } else if (family == "llg") {
      gen = llg_family();
    } else {
      throw InvalidInput("unknown family " + family + " (random, three-bidder, two-bidder, llg)");
    }
    SearchOptions opt;
    opt.seed = a.seed;
    opt.probe_budget = a.budget;
    opt.multi_coordinate = a.multi;
    opt.threads = g.threads;
    result = search_violations(rule, gen, opt);
  }
  if (a.minimize) {
    for (auto& cert : result.certificates) cert = minimize_certificate(cert);
  }
  std::ostringstream s;
  s << "rule " << rule_name(rule) << "\n";
  s << "instances " << result.instances_checked << "\n";
  s << "probes " << result.probes_checked << "\n";
  s << "skipped " << result.probes_skipped << "\n";
  s << "violations " << result.certificates.size() << "\n";
  if (!result.certificates.empty()) {
    const auto& cert = result.certificates.front();
    const auto& p = cert.probe;
    s << "first bidder " << p.instance.bidder(p.bidder).id << " raises " << vec(p.base.bids_of(p.bidder), g) << " to "
      << vec(p.raised, g) << "; payment " << num(cert.payment_before, g) << " -> " << num(cert.payment_after, g) << "\n";
  }
  if (!a.out.empty()) {
    json arr = json::array();
    for (const auto& cert : result.certificates) arr.push_back(json::parse(violation_to_json(cert)));
    const std::string text = arr.dump(2) + "\n";
    write_file(a.out, text);
    m.output(a.out, text);
  }
  out << s.str();
  m.output("stdout", s.str());
  return result.certificates.empty() ? kExitOk : kExitViolation;
}

DomainConfig domain_from(const std::string& path, Manifest& m) {
  if (path == "llg" && !fs::exists(path)) {
    m.config("builtin_domain", "llg");
    return build_llg();
  }
  const std::string text = read_file(path);
  m.input(path, text);
  return parse_domain(text);
}

struct SolveArgs {
  std::string domain;
  std::string rule = "proxy";
  std::string step = "1/64";
  std::string target = "1/50";
  std::uint64_t seed = 1;
  std::string out;
  int max_iter = 50;
  int min_iter = 2;
  std::size_t samples = 100'000;
  bool sampling = false;
  std::uint64_t exact_budget = 1'000'000;
  bool unsound = false;
  bool margin = false;
  std::size_t cache_limit = 4'000'000;
};

int cmd_solve(const SolveArgs& a, const Globals& g, Manifest& m, std::ostream& out) {
  const DomainConfig domain = domain_from(a.domain, m);
  SolverConfig cfg;
  cfg.rule = parse_rule(a.rule);
  cfg.step = Rational::parse(a.step);
  cfg.target_epsilon = Rational::parse(a.target);
  cfg.seed = a.seed;
  cfg.max_iterations = a.max_iter;
  cfg.min_iterations = a.min_iter;
  cfg.samples = a.samples;
  cfg.force_sampling = a.sampling;
  cfg.exact_budget = a.exact_budget;
  cfg.unsound = a.unsound;
  cfg.lipschitz_margin = a.margin;
  cfg.cache_limit = a.cache_limit;
  cfg.threads = g.threads;
  m.config("rule", std::string(rule_name(cfg.rule)));
  m.config("step", cfg.step.str());
  m.config("target_epsilon", cfg.target_epsilon.str());
  m.config("seed", cfg.seed);
  m.config("max_iterations", cfg.max_iterations);
  m.config("min_iterations", cfg.min_iterations);
  m.config("samples", cfg.samples);
  m.config("force_sampling", cfg.force_sampling);
  m.config("exact_budget", cfg.exact_budget);
  m.config("unsound", cfg.unsound);
  m.config("lipschitz_margin", cfg.lipschitz_margin);

  const EpsilonCertificate cert = solve(domain, cfg, [&](const IterationReport& r) {
    out << "iteration " << r.iteration << " epsilon " << num(r.epsilon, g) << (r.exact ? "" : " (sampled)") << "\n";
    out.flush();
  });
  fs::create_directories(a.out);
  const std::map<std::string, std::string> files{
      {"certificate.json", certificate_to_json(domain, cert)},
      {"strategies.csv", strategies_to_csv(domain, cert.profile)},
      {"trace.csv", trace_to_csv(cert)},
  };
  json meta;
  meta["domain"] = domain.name;
  meta["rule"] = std::string(rule_name(cfg.rule));
  meta["step"] = cfg.step.str();
  meta["seed"] = cfg.seed;
  json vmax = json::object();
  for (int i = 0; i < domain.num_bidders(); ++i) {
    json row = json::array();
    for (const auto& p : domain.priors[static_cast<std::size_t>(i)]) row.push_back(p.hi.str());
    vmax[domain.auction.bidder(i).id] = row;
  }
  meta["v_max"] = vmax;
  const std::string meta_text = meta.dump(2) + "\n";
  for (const auto& [name, text] : files) {
    write_file((fs::path(a.out) / name).string(), text);
    m.output(name, text);
  }
  write_file((fs::path(a.out) / "strategies.json").string(), meta_text);
  m.output("strategies.json", meta_text);
  m.write((fs::path(a.out) / "manifest.json").string());

  out << "epsilon " << num(cert.epsilon, g) << " at iteration " << cert.best_iteration << " of " << cert.iterations
      << (cert.exact ? "" : " (sampled)") << "\n";
  for (const auto& w : cert.warnings) out << "warning " << w << "\n";
  out << (cert.converged ? "converged" : "not converged") << "\n";
  return cert.converged ? kExitOk : kExitViolation;
}

struct VerifyArgs {
  std::string certificate;
  std::size_t valuations = 200;
  int refine = 4;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_verify(const VerifyArgs& a, const Globals& g, Manifest& m, std::ostream& out) {
  const std::string text = read_file(a.certificate);
  m.input(a.certificate, text);
  const LoadedCertificate loaded = parse_certificate(text);
  const auto& cert = loaded.certificate;
  VerifyConfig cfg;
  cfg.rule = cert.rule;
  cfg.step = cert.step;
  cfg.refine = a.refine;
  cfg.valuations = a.valuations;
  cfg.seed = a.seed.value_or(cert.seed);
  cfg.samples = cert.samples == 0 ? cfg.samples : cert.samples;
  cfg.threads = g.threads;
  m.config("valuations", cfg.valuations);
  m.config("refine", cfg.refine);
  m.config("seed", cfg.seed);
  const VerifyReport r = verify(loaded.domain, cert.profile, cfg);
  const Rational tolerance(1, 1'000'000'000);
  const bool ok = r.max_loss <= cert.epsilon + tolerance;
  std::ostringstream s;
  s << "valuations " << r.valuations_checked << "\n";
  s << "dense_bids " << r.bids_per_valuation << "\n";
  s << "measured_loss " << num(r.max_loss, g) << "\n";
  s << "certified_epsilon " << num(cert.epsilon, g) << "\n";
  if (r.worst_bidder >= 0) {
    s << "worst bidder " << loaded.domain.auction.bidder(r.worst_bidder).id << " value " << vec(r.worst_valuation, g)
      << " bid " << vec(r.current_bid, g) << " best " << vec(r.best_bid, g) << "\n";
  }
  s << (ok ? "PASS" : "FAIL") << " measured loss " << (ok ? "<=" : ">") << " epsilon + 1e-9\n";
  out << s.str();
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    json j;
    j["measured_loss"] = r.max_loss.str();
    j["certified_epsilon"] = cert.epsilon.str();
    j["valuations"] = r.valuations_checked;
    j["dense_bids"] = r.bids_per_valuation;
    j["pass"] = ok;
    const std::string report = j.dump(2) + "\n";
    write_file((fs::path(a.out) / "verify.json").string(), report);
    m.output("verify.json", report);
    m.write((fs::path(a.out) / "manifest.json").string());
  }
  return ok ? kExitOk : kExitViolation;
}

/// Golden replays of the worked examples.
class Repro {
 public:
  Repro(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

  void check(const std::string& label, const std::vector<Rational>& expected, const std::vector<Rational>& got) {
    const bool pass = expected == got;
    ok_ = ok_ && pass;
    out_ << (pass ? "PASS " : "FAIL ") << label << " expected " << vec(expected, g_) << " got " << vec(got, g_) << "\n";
  }

  void table1() {
    for (const bool raised : {false, true}) {
      const auto c = table1_case(raised);
      const auto x = winner_determination(c.instance, c.bids).allocations.front();
      const std::string side = raised ? "table1 right" : "table1 left";
      check(side + " vcg", raised ? ints({3, 2, 0}) : ints({2, 2, 0}), vcg(c.instance, c.bids, x).amounts);
      check(side + " vcg-nearest", raised ? std::vector<Rational>{Rational(7, 2), Rational(5, 2), 0} : ints({3, 3, 0}),
            vcg_nearest(c.instance, c.bids, x).amounts);
    }
  }

  void table2() {
    const std::vector<std::vector<Rational>> nearest{twelfths({37, 16, 37, 7, 7, 10}), twelfths({36, 18, 36, 6, 6, 12})};
    const std::vector<std::vector<Rational>> vcgs{ints({2, 0, 1, 0, 0, 0}), ints({1, 0, 1, 0, 0, 0})};
    for (const bool raised : {false, true}) {
      const auto c = table2_case(raised);
      const auto x = winner_determination(c.instance, c.bids).allocations.front();
      const std::string side = raised ? "table2 right" : "table2 left";
      const auto winners = [&](const PaymentVector& p) { return std::vector<Rational>(p.amounts.begin(), p.amounts.begin() + 6); };
      check(side + " vcg winners", vcgs[raised], winners(vcg(c.instance, c.bids, x)));
      check(side + " min revenue", {Rational(19, 2)}, {min_revenue(core_constraints(c.instance, c.bids, x))});
      check(side + " vcg-nearest winners", nearest[raised], winners(vcg_nearest(c.instance, c.bids, x)));
    }
  }

  void corrigendum() {
    for (const bool raised : {false, true}) {
      const auto c = corrigendum_case(raised);
      const auto x = winner_determination(c.instance, c.bids).allocations.front();
      const std::string side = raised ? "corrigendum raised" : "corrigendum base";
      check(side + " proportional", raised ? ints({5, 3}) : ints({8, 6}), proportional(c.instance, c.bids, x).amounts);
      check(side + " proxy", raised ? ints({3, 3}) : ints({6, 6}), proxy(c.instance, c.bids, x).amounts);
    }
    // The raise from the worked example is itself a violation certificate.
    const auto base = corrigendum_case(false);
    const auto x = winner_determination(base.instance, base.bids).allocations.front();
    const auto cert = check_probe(PaymentRule::kProportional,
                                  MonotonicityProbe::single(base.instance, base.bids, 0, 0, Rational(15), x));
    const bool pass = cert.has_value();
    ok_ = ok_ && pass;
    out_ << (pass ? "PASS " : "FAIL ") << "corrigendum proportional violation certificate";
    if (cert) out_ << ": bidder 1 raises A 12 -> 15, payment " << num(cert->payment_before, g_) << " -> " << num(cert->payment_after, g_);
    out_ << "\n";
  }

  [[nodiscard]] bool ok() const { return ok_; }

 private:
  static std::vector<Rational> ints(std::initializer_list<int> v) { return {v.begin(), v.end()}; }
  static std::vector<Rational> twelfths(std::initializer_list<int> v) {
    std::vector<Rational> out;
    for (const int x : v) out.emplace_back(x, 12);
    return out;
  }

  const Globals& g_;
  std::ostream& out_;
  bool ok_ = true;
};

int cmd_repro(const std::string& which, const Globals& g, Manifest& m, std::ostream& out) {
  std::ostringstream s;
  Repro r(g, s);
  if (which == "table1" || which == "all") r.table1();
  if (which == "table2" || which == "all") r.table2();
  if (which == "corrigendum" || which == "all") r.corrigendum();
  if (which != "table1" && which != "table2" && which != "corrigendum" && which != "all") {
    throw InvalidInput("unknown case " + which + " (table1, table2, corrigendum, all)");
  }
  s << (r.ok() ? "PASS" : "FAIL") << " " << which << "\n";
  out << s.str();
  m.output("stdout", s.str());
  return r.ok() ? kExitOk : kExitViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Combinatorial auction payments, monotonicity checks and Bayes-Nash equilibrium certificates", "cabne"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", CABNE_VERSION);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (default: $CABNE_THREADS or all cores)")->check(CLI::PositiveNumber);
  app.add_option("--decimal", g.decimal, "Also print numbers rounded to this many decimal digits")->check(CLI::NonNegativeNumber);

  std::string case_path;
  std::uint64_t node_budget = WdOptions{}.node_budget;
  auto* wd = app.add_subcommand("wd", "Winner determination: welfare and every efficient allocation");
  wd->add_option("case", case_path, "Case file (JSON)")->required()->check(CLI::ExistingFile);
  wd->add_option("--node-budget", node_budget, "Branch-and-bound node budget");
  wd->add_option("--manifest", g.manifest, "Write a run manifest here");

  std::string rule = "vcg-nearest";
  std::size_t allocation = 0;
  auto* pay = app.add_subcommand("pay", "Payments for the first efficient allocation");
  pay->add_option("case", case_path, "Case file (JSON)")->required()->check(CLI::ExistingFile);
  pay->add_option("--rule", rule, "first-price, vcg, vcg-nearest, proportional, proxy");
  pay->add_option("--allocation", allocation, "Index into the efficient allocations");
  pay->add_option("--manifest", g.manifest, "Write a run manifest here");

  MonotoneArgs mono;
  auto* cm = app.add_subcommand("check-monotone", "Search for violations of payment monotonicity");
  cm->add_option("case", mono.case_path, "Probe only this case file")->check(CLI::ExistingFile);
  cm->add_option("--rule", mono.rule, "Payment rule")->required();
  cm->add_flag("--random", mono.random, "Use the random instance family");
  cm->add_option("--family", mono.family, "random, three-bidder, two-bidder, llg");
  cm->add_option("--budget", mono.budget, "Probe budget");
  cm->add_option("--seed", mono.seed, "Search seed");
  cm->add_flag("--multi", mono.multi, "Also raise all of a bidder's bids together");
  cm->add_flag("--minimize", mono.minimize, "Shrink every certificate");
  cm->add_option("--out", mono.out, "Write certificates (JSON array) here");
  cm->add_option("--manifest", g.manifest, "Write a run manifest here");

  SolveArgs sa;
  auto* sv = app.add_subcommand("solve-bne", "Iterated best response with a certified epsilon");
  sv->add_option("--domain", sa.domain, "Domain file, or the builtin name llg")->required();
  sv->add_option("--rule", sa.rule, "Payment rule");
  sv->add_option("--step", sa.step, "Grid step c, e.g. 1/64");
  sv->add_option("--target-eps", sa.target, "Stop once epsilon is at most this");
  sv->add_option("--seed", sa.seed, "Sampling seed");
  sv->add_option("--out", sa.out, "Output directory")->required();
  sv->add_option("--max-iter", sa.max_iter, "Maximum iterations")->check(CLI::PositiveNumber);
  sv->add_option("--min-iter", sa.min_iter, "Minimum iterations")->check(CLI::PositiveNumber);
  sv->add_option("--samples", sa.samples, "Samples per iteration in sampling mode")->check(CLI::PositiveNumber);
  sv->add_flag("--sampling", sa.sampling, "Sample opponent bids even when exact enumeration fits");
  sv->add_option("--exact-budget", sa.exact_budget, "Largest exact opponent support");
  sv->add_flag("--unsound", sa.unsound, "Solve rules not declared non-decreasing (epsilon is then not a bound)");
  sv->add_flag("--lipschitz-margin", sa.margin, "Add r*c/2 to every loss bound");
  sv->add_option("--cache-limit", sa.cache_limit, "Maximum cached profile outcomes");

  VerifyArgs va;
  auto* vf = app.add_subcommand("verify", "Measure utility loss of a certified profile on a dense bid grid");
  vf->add_option("--certificate", va.certificate, "certificate.json from solve-bne")->required()->check(CLI::ExistingFile);
  vf->add_option("--valuations", va.valuations, "Sampled valuations per bidder class");
  vf->add_option("--refine", va.refine, "Dense grid spacing is c / refine")->check(CLI::PositiveNumber);
  vf->add_option("--seed", va.seed, "Valuation seed (default: the certificate's)");
  vf->add_option("--out", va.out, "Write verify.json and a manifest here");

  std::string which;
  auto* rp = app.add_subcommand("repro", "Replay the worked examples against their published values");
  rp->add_option("case", which, "table1, table2, corrigendum, all")->required();
  rp->add_option("--manifest", g.manifest, "Write a run manifest here");

  std::vector<std::string> argv_store{"cabne"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  Manifest manifest(sub, args);
  if (sub == "check-monotone" || sub == "solve-bne" || sub == "verify") err << "threads " << g.threads << "\n";
  try {
    int code = kExitOk;
    if (sub == "wd") code = cmd_wd(case_path, node_budget, g, manifest, out);
    if (sub == "pay") code = cmd_pay(case_path, rule, allocation, g, manifest, out);
    if (sub == "check-monotone") code = cmd_check_monotone(mono, g, manifest, out);
    if (sub == "solve-bne") code = cmd_solve(sa, g, manifest, out);
    if (sub == "verify") code = cmd_verify(va, g, manifest, out);
    if (sub == "repro") code = cmd_repro(which, g, manifest, out);
    if (!g.manifest.empty()) manifest.write(g.manifest);
    return code;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
  } catch (const PreconditionViolation& e) {
    err << "refused: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace cabne::cli
