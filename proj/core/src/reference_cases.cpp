#include "cabne/reference_cases.hpp"

namespace cabne {

AuctionCase table1_case(bool raised) {
  AuctionInstance instance = AuctionInstance::from_names(
      {"1", "2"}, {{"1", {{"1"}}}, {"2", {{"2"}, {"1", "2"}}}, {"3", {{"1"}, {"2"}, {"1", "2"}}}});
  BidProfile bids(instance, {{4}, {4, raised ? 7 : 5}, {2, 2, 6}});
  return {std::move(instance), std::move(bids)};
}

AuctionCase table2_case(bool raised) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> spec{
      {"1", {"1"}},           {"2", {"2"}},           {"3", {"3"}},           {"4", {"4"}},
      {"5", {"5"}},           {"6", {"6"}},           {"7", {"1", "2", "4"}}, {"8", {"2", "3", "5"}},
      {"9", {"1", "3", "6"}}, {"10", {"4", "5", "6"}}, {"11", {"2", "3", "4"}},
  };
  std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>> bidders;
  for (const auto& [id, bundle] : spec) bidders.push_back({id, {bundle}});
  AuctionInstance instance = AuctionInstance::from_names({"1", "2", "3", "4", "5", "6"}, bidders);
  BidProfile bids(instance, {{5}, {5}, {raised ? 5 : 4}, {1}, {1}, {1}, {5}, {5}, {7}, {2}, {5}});
  return {std::move(instance), std::move(bids)};
}

AuctionCase corrigendum_case(bool raised) {
  AuctionInstance instance = AuctionInstance::from_names({"A", "B"}, {{"1", {{"A"}, {"A", "B"}}}, {"2", {{"B"}}}});
  BidProfile bids(instance, {{raised ? 15 : 12, 18}, {9}});
  return {std::move(instance), std::move(bids)};
}

}  // namespace cabne
