#include "cabne/domains.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cabne/errors.hpp"
#include "cabne/parallel.hpp"

namespace cabne {
namespace {

using nlohmann::json;

Rational rational_from_json(const json& j, const std::string& what) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number()) return Rational::parse(j.dump());
  throw InvalidInput(what + " must be a number or a \"num/den\" string");
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(where + " is missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace

const Rational& DomainConfig::v_max(int i, int k) const {
  return priors.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).hi;
}

std::vector<std::vector<int>> DomainConfig::classes() const {
  std::vector<int> owner(static_cast<std::size_t>(num_bidders()), -1);
  std::vector<std::vector<int>> out;
  for (const auto& cls : symmetry_classes) {
    std::vector<int> members = cls;
    std::sort(members.begin(), members.end());
    out.push_back(members);
  }
  for (int i = 0; i < num_bidders(); ++i) {
    bool listed = false;
    for (const auto& cls : out) listed = listed || std::find(cls.begin(), cls.end(), i) != cls.end();
    if (!listed) out.push_back({i});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool DomainConfig::declares_nondecreasing(PaymentRule rule) const {
  return std::find(nondecreasing_rules.begin(), nondecreasing_rules.end(), rule) != nondecreasing_rules.end();
}

bool DomainConfig::has_nested_bundles() const {
  for (int i = 0; i < num_bidders(); ++i) {
    for (int a = 0; a < auction.num_bundles(i); ++a) {
      for (int b = 0; b < auction.num_bundles(i); ++b) {
        if (a != b && auction.bundle(i, a).subset_of(auction.bundle(i, b))) return true;
      }
    }
  }
  return false;
}

bool operator==(const DomainConfig& a, const DomainConfig& b) {
  return a.schema_version == b.schema_version && a.name == b.name && a.auction == b.auction && a.priors == b.priors &&
         a.classes() == b.classes() && a.truthful == b.truthful && a.nondecreasing_rules == b.nondecreasing_rules &&
         a.free_disposal == b.free_disposal;
}

DomainConfig validate_domain(DomainConfig config) {
  const int n = config.num_bidders();
  if (n == 0) throw InvalidInput("domain has no bidders");
  if (static_cast<int>(config.priors.size()) != n) throw InvalidInput("domain needs one prior list per bidder");
  if (config.truthful.empty()) config.truthful.assign(static_cast<std::size_t>(n), false);
  if (static_cast<int>(config.truthful.size()) != n) throw InvalidInput("truthful flags do not match bidders");
  for (int i = 0; i < n; ++i) {
    const auto& pr = config.priors[static_cast<std::size_t>(i)];
    const std::string& id = config.auction.bidder(i).id;
    if (static_cast<int>(pr.size()) != config.auction.num_bundles(i)) {
      throw InvalidInput("bidder " + id + " needs one prior per bundle of interest");
    }
    for (const auto& p : pr) {
      if (p.lo.sign() < 0 || !(p.lo < p.hi)) throw InvalidInput("bidder " + id + " has a prior without 0 <= lo < hi");
    }
  }
  std::set<int> seen;
  for (const auto& cls : config.symmetry_classes) {
    if (cls.empty()) throw InvalidInput("empty symmetry class");
    for (const int i : cls) {
      if (i < 0 || i >= n) throw InvalidInput("symmetry class names an unknown bidder");
      if (!seen.insert(i).second) throw InvalidInput("bidder appears in two symmetry classes");
    }
    const int first = cls.front();
    for (const int i : cls) {
      if (config.priors[static_cast<std::size_t>(i)] != config.priors[static_cast<std::size_t>(first)] ||
          config.auction.num_bundles(i) != config.auction.num_bundles(first) ||
          config.truthful[static_cast<std::size_t>(i)] != config.truthful[static_cast<std::size_t>(first)]) {
        throw InvalidInput("bidders in a symmetry class need identical priors, bundle counts and roles");
      }
    }
  }
  config.warnings.clear();
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < config.auction.num_bundles(i); ++a) {
      for (int b = 0; b < config.auction.num_bundles(i); ++b) {
        if (a == b || !config.auction.bundle(i, a).subset_of(config.auction.bundle(i, b))) continue;
        const auto& small = config.priors[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
        const auto& big = config.priors[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
        const std::string id = config.auction.bidder(i).id;
        if (big.hi < small.lo) {
          throw InvalidInput("bidder " + id + ": every draw for a sub-bundle exceeds its super-bundle");
        }
        if (big.lo < small.hi) {
          config.warnings.push_back("bidder " + id + ": nested bundle priors overlap; draws are " +
                                    (config.free_disposal == FreeDisposalPolicy::kResample ? "resampled" : "clamped") +
                                    " to keep free disposal");
        }
      }
    }
  }
  return config;
}

DomainConfig build_llg() {
  DomainConfig c;
  c.name = "llg";
  c.auction = AuctionInstance::from_names({"A", "B"}, {{"L1", {{"A"}}}, {"L2", {{"B"}}}, {"G", {{"A", "B"}}}});
  c.priors = {{{0, 1}}, {{0, 1}}, {{0, 2}}};
  c.symmetry_classes = {{0, 1}};
  c.truthful = {false, false, true};
  c.nondecreasing_rules = {PaymentRule::kFirstPrice, PaymentRule::kVcg, PaymentRule::kVcgNearest,
                           PaymentRule::kProportional, PaymentRule::kProxy};
  return validate_domain(std::move(c));
}

DomainConfig parse_domain(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("domain is not valid JSON: ") + e.what());
  }
  DomainConfig c;
  try {
    c.schema_version = require(j, "schema_version", "domain").get<int>();
    if (c.schema_version != kDomainSchemaVersion) {
      throw InvalidInput("unsupported domain schema_version " + std::to_string(c.schema_version));
    }
    c.name = j.value("name", std::string{});
    std::vector<std::string> goods = require(j, "goods", "domain").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>> bidders;
    const json& bj = require(j, "bidders", "domain");
    if (!bj.is_array()) throw InvalidInput("domain \"bidders\" must be an array");
    for (const auto& b : bj) {
      const auto id = require(b, "id", "bidder").get<std::string>();
      bidders.emplace_back(id, require(b, "bundles", "bidder " + id).get<std::vector<std::vector<std::string>>>());
      std::vector<UniformPrior> pr;
      for (const auto& p : require(b, "priors", "bidder " + id)) {
        if (p.is_array() && p.size() == 2) {
          pr.push_back({rational_from_json(p[0], "prior bound"), rational_from_json(p[1], "prior bound")});
        } else {
          pr.push_back({rational_from_json(require(p, "lo", "prior"), "prior lo"),
                        rational_from_json(require(p, "hi", "prior"), "prior hi")});
        }
      }
      c.priors.push_back(std::move(pr));
      c.truthful.push_back(b.value("truthful", false));
    }
    c.auction = AuctionInstance::from_names(std::move(goods), bidders);
    if (j.contains("symmetry_classes")) {
      for (const auto& cls : j.at("symmetry_classes")) {
        std::vector<int> members;
        for (const auto& id : cls) members.push_back(c.auction.bidder_index(id.get<std::string>()));
        c.symmetry_classes.push_back(std::move(members));
      }
    }
    if (j.contains("nondecreasing_rules")) {
      for (const auto& r : j.at("nondecreasing_rules")) c.nondecreasing_rules.push_back(parse_rule(r.get<std::string>()));
    }
    const std::string policy = j.value("free_disposal", std::string("resample"));
    if (policy == "resample") {
      c.free_disposal = FreeDisposalPolicy::kResample;
    } else if (policy == "clamp") {
      c.free_disposal = FreeDisposalPolicy::kClamp;
    } else {
      throw InvalidInput("free_disposal must be \"resample\" or \"clamp\"");
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("domain schema error: ") + e.what());
  }
  return validate_domain(std::move(c));
}

DomainConfig load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read domain file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_domain(ss.str());
}

std::string domain_to_json(const DomainConfig& config) {
  json j;
  j["schema_version"] = config.schema_version;
  j["name"] = config.name;
  j["goods"] = config.auction.goods();
  json bidders = json::array();
  for (int i = 0; i < config.num_bidders(); ++i) {
    json b;
    b["id"] = config.auction.bidder(i).id;
    json bundles = json::array();
    for (int k = 0; k < config.auction.num_bundles(i); ++k) {
      bundles.push_back(config.auction.bundle_names(config.auction.bundle(i, k)));
    }
    b["bundles"] = bundles;
    json priors = json::array();
    for (const auto& p : config.priors[static_cast<std::size_t>(i)]) priors.push_back({p.lo.str(), p.hi.str()});
    b["priors"] = priors;
    b["truthful"] = static_cast<bool>(config.truthful[static_cast<std::size_t>(i)]);
    bidders.push_back(b);
  }
  j["bidders"] = bidders;
  json classes = json::array();
  for (const auto& cls : config.symmetry_classes) {
    json ids = json::array();
    for (const int i : cls) ids.push_back(config.auction.bidder(i).id);
    classes.push_back(ids);
  }
  j["symmetry_classes"] = classes;
  json rules = json::array();
  for (const auto r : config.nondecreasing_rules) rules.push_back(std::string(rule_name(r)));
  j["nondecreasing_rules"] = rules;
  j["free_disposal"] = config.free_disposal == FreeDisposalPolicy::kResample ? "resample" : "clamp";
  return j.dump(2) + "\n";
}

ValuationSamples::ValuationSamples(const DomainConfig& config, std::size_t count) : count_(count) {
  for (int i = 0; i < config.num_bidders(); ++i) {
    offsets_.push_back(stride_);
    stride_ += static_cast<std::size_t>(config.auction.num_bundles(i));
  }
  values_.assign(count_ * stride_, 0.0);
}

ValuationSamples sample_valuations(const DomainConfig& config, std::size_t count, std::uint64_t seed) {
  ValuationSamples out(config, count);
  for (int i = 0; i < config.num_bidders(); ++i) {
    const int r = config.auction.num_bundles(i);
    std::vector<std::pair<int, int>> nested;  // (sub, super)
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) {
        if (a != b && config.auction.bundle(i, a).subset_of(config.auction.bundle(i, b))) nested.emplace_back(a, b);
      }
    }
    std::vector<double> lo, width;
    for (const auto& p : config.priors[static_cast<std::size_t>(i)]) {
      lo.push_back(p.lo.to_double());
      width.push_back((p.hi - p.lo).to_double());
    }
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    for (std::size_t s = 0; s < count; ++s) {
      double* v = out.mutable_bidder_values(s, i);
      for (int attempt = 0;; ++attempt) {
        for (int k = 0; k < r; ++k) v[k] = lo[static_cast<std::size_t>(k)] + width[static_cast<std::size_t>(k)] * unit_double(rng);
        bool ok = true;
        for (const auto& [a, b] : nested) ok = ok && v[a] <= v[b];
        if (ok) break;
        if (config.free_disposal == FreeDisposalPolicy::kClamp || attempt >= 1000) {
          // Raise super-bundles to their sub-bundles' values until consistent.
          for (int round = 0; round < r; ++round) {
            for (const auto& [a, b] : nested) v[b] = std::max(v[b], v[a]);
          }
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace cabne
