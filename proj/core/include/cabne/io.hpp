#pragma once

#include <string>

#include "cabne/bne.hpp"
#include "cabne/domains.hpp"
#include "cabne/monotonicity.hpp"
#include "cabne/reference_cases.hpp"

namespace cabne {

[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Case file: {"goods": [...], "bidders": [{"id", "bundles": [[goods]], "bids": [...]}]}.
/// Bids are numbers or exact "n/d" strings.
[[nodiscard]] AuctionCase parse_case(const std::string& json_text);
[[nodiscard]] AuctionCase load_case(const std::string& path);
[[nodiscard]] std::string case_to_json(const AuctionCase& c);

[[nodiscard]] std::string violation_to_json(const ViolationCertificate& certificate);

/// Certificate with the domain and full strategy profile embedded, so it can be verified
/// on its own.
[[nodiscard]] std::string certificate_to_json(const DomainConfig& domain, const EpsilonCertificate& certificate);

struct LoadedCertificate {
  DomainConfig domain;
  EpsilonCertificate certificate;
};
[[nodiscard]] LoadedCertificate parse_certificate(const std::string& json_text);

/// iteration,epsilon,epsilon_decimal,exact,cached_outcomes
[[nodiscard]] std::string trace_to_csv(const EpsilonCertificate& certificate);

}  // namespace cabne
