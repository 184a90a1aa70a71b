#include "cabne/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cabne/errors.hpp"

namespace cabne {

namespace {

using nlohmann::json;

Rational to_rational(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number()) return Rational::parse(j.dump());
  throw InvalidInput("expected a number or a \"num/den\" string");
}

json rationals(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

std::vector<Rational> rationals_from(const json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(to_rational(x));
  return out;
}

json instance_json(const AuctionInstance& instance, const BidProfile* bids) {
  json j;
  j["goods"] = instance.goods();
  json bidders = json::array();
  for (int i = 0; i < instance.num_bidders(); ++i) {
    json b;
    b["id"] = instance.bidder(i).id;
    json bundles = json::array();
    for (int k = 0; k < instance.num_bundles(i); ++k) bundles.push_back(instance.bundle_names(instance.bundle(i, k)));
    b["bundles"] = bundles;
    if (bids != nullptr) b["bids"] = rationals(bids->bids_of(i));
    bidders.push_back(b);
  }
  j["bidders"] = bidders;
  return j;
}

json allocation_json(const AuctionInstance& instance, const Allocation& x) {
  json out = json::object();
  for (int i = 0; i < instance.num_bidders(); ++i) {
    out[instance.bidder(i).id] = instance.bundle_names(instance.bundle(i, x[i]));
  }
  return out;
}

json strategy_json(const DomainConfig& domain, int i, const Strategy& s) {
  json j;
  j["bidder"] = domain.auction.bidder(i).id;
  if (std::holds_alternative<TruthfulStrategy>(s)) {
    j["truthful"] = true;
    return j;
  }
  const auto& pc = std::get<PiecewiseConstantStrategy>(s);
  json edges = json::array();
  for (const auto& e : pc.edges()) edges.push_back(rationals(e));
  j["edges"] = edges;
  json bids = json::array();
  for (const auto& b : pc.bids()) bids.push_back(rationals(b));
  j["bids"] = bids;
  return j;
}

Strategy strategy_from(const json& j) {
  if (j.value("truthful", false)) return TruthfulStrategy{};
  std::vector<std::vector<Rational>> edges;
  for (const auto& e : j.at("edges")) edges.push_back(rationals_from(e));
  std::vector<std::vector<Rational>> bids;
  for (const auto& b : j.at("bids")) bids.push_back(rationals_from(b));
  return PiecewiseConstantStrategy(std::move(edges), std::move(bids));
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << contents;
  if (!out) throw InvalidInput("failed writing " + path);
}

AuctionCase parse_case(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>> bidders;
    std::vector<std::vector<Rational>> bids;
    for (const auto& b : j.at("bidders")) {
      bidders.emplace_back(b.at("id").get<std::string>(), b.at("bundles").get<std::vector<std::vector<std::string>>>());
      bids.push_back(b.contains("bids") ? rationals_from(b.at("bids"))
                                        : std::vector<Rational>(b.at("bundles").size()));
    }
    AuctionInstance instance = AuctionInstance::from_names(j.at("goods").get<std::vector<std::string>>(), bidders);
    BidProfile profile(instance, std::move(bids));
    return {std::move(instance), std::move(profile)};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("case file schema error: ") + e.what());
  }
}

AuctionCase load_case(const std::string& path) { return parse_case(read_file(path)); }

std::string case_to_json(const AuctionCase& c) { return instance_json(c.instance, &c.bids).dump(2) + "\n"; }

std::string violation_to_json(const ViolationCertificate& certificate) {
  const auto& p = certificate.probe;
  json j;
  j["rule"] = std::string(rule_name(certificate.rule));
  j["instance"] = instance_json(p.instance, &p.base);
  j["bidder"] = p.instance.bidder(p.bidder).id;
  j["raised_bids"] = rationals(p.raised);
  j["allocation"] = allocation_json(p.instance, p.allocation);
  j["payment_before"] = certificate.payment_before.str();
  j["payment_after"] = certificate.payment_after.str();
  return j.dump(2) + "\n";
}

std::string certificate_to_json(const DomainConfig& domain, const EpsilonCertificate& c) {
  json j;
  j["kind"] = "epsilon-certificate";
  j["domain"] = json::parse(domain_to_json(domain));
  j["rule"] = std::string(rule_name(c.rule));
  j["step"] = c.step.str();
  j["seed"] = c.seed;
  j["exact"] = c.exact;
  j["samples"] = c.samples;
  j["margin"] = c.margin.str();
  j["epsilon"] = c.epsilon.str();
  j["epsilon_decimal"] = c.epsilon.decimal(12);
  j["best_iteration"] = c.best_iteration;
  j["iterations"] = c.iterations;
  j["converged"] = c.converged;
  j["unsound"] = c.unsound;
  j["warnings"] = c.warnings;
  json trace = json::array();
  for (const auto& t : c.trace) {
    json row;
    row["iteration"] = t.iteration;
    row["epsilon"] = t.epsilon.str();
    json bidders = json::array();
    for (const auto& b : t.bidders) {
      bidders.push_back({{"bidder", domain.auction.bidder(b.bidder).id},
                         {"epsilon", b.epsilon.str()},
                         {"worst_valuation", rationals(b.worst_valuation)},
                         {"saturated", b.saturated}});
    }
    row["bidders"] = bidders;
    trace.push_back(row);
  }
  j["trace"] = trace;
  json profile = json::array();
  for (int i = 0; i < domain.num_bidders(); ++i) {
    profile.push_back(strategy_json(domain, i, c.profile.at(static_cast<std::size_t>(i))));
  }
  j["profile"] = profile;
  return j.dump(2) + "\n";
}

LoadedCertificate parse_certificate(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    if (j.value("kind", std::string{}) != "epsilon-certificate") throw InvalidInput("not an epsilon certificate");
    LoadedCertificate out;
    out.domain = parse_domain(j.at("domain").dump());
    auto& c = out.certificate;
    c.domain = out.domain.name;
    c.rule = parse_rule(j.at("rule").get<std::string>());
    c.step = to_rational(j.at("step"));
    c.seed = j.at("seed").get<std::uint64_t>();
    c.exact = j.at("exact").get<bool>();
    c.samples = j.at("samples").get<std::size_t>();
    c.margin = to_rational(j.at("margin"));
    c.epsilon = to_rational(j.at("epsilon"));
    c.best_iteration = j.at("best_iteration").get<int>();
    c.iterations = j.at("iterations").get<int>();
    c.converged = j.at("converged").get<bool>();
    c.unsound = j.at("unsound").get<bool>();
    c.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& t : j.at("trace")) {
      IterationReport r;
      r.iteration = t.at("iteration").get<int>();
      r.epsilon = to_rational(t.at("epsilon"));
      c.trace.push_back(std::move(r));
    }
    c.profile.resize(static_cast<std::size_t>(out.domain.num_bidders()));
    for (const auto& s : j.at("profile")) {
      const int i = out.domain.auction.bidder_index(s.at("bidder").get<std::string>());
      c.profile[static_cast<std::size_t>(i)] = strategy_from(s);
    }
    return out;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("certificate schema error: ") + e.what());
  }
}

std::string trace_to_csv(const EpsilonCertificate& certificate) {
  std::ostringstream out;
  out << "iteration,epsilon,epsilon_decimal,exact,cached_outcomes\n";
  for (const auto& t : certificate.trace) {
    out << t.iteration << ',' << t.epsilon.str() << ',' << t.epsilon.decimal(12) << ',' << (t.exact ? 1 : 0) << ','
        << t.cached_outcomes << '\n';
  }
  return out.str();
}

}  // namespace cabne
