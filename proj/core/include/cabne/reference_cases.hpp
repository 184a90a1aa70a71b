#pragma once

#include <string>
#include <vector>

#include "cabne/auction.hpp"

namespace cabne {

/// A concrete auction: instance plus one bid profile.
struct AuctionCase {
  AuctionInstance instance;
  BidProfile bids;
};

/// Three bidders on goods {1,2}. Bidder 2 bids 5 on {1,2}, or 7 when `raised`.
[[nodiscard]] AuctionCase table1_case(bool raised);

/// Eleven single-minded bidders on goods {1..6}. Bidder 3 bids 4 on {3}, or 5 when `raised`.
[[nodiscard]] AuctionCase table2_case(bool raised);

/// Two bidders on goods {A,B}: b1(A)=12 (15 when `raised`), b1(AB)=18, b2(B)=9.
[[nodiscard]] AuctionCase corrigendum_case(bool raised);

}  // namespace cabne
