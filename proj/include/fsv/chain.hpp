#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsv {

enum class DropReason { None, Monotonicity, Convexity };

const char* to_string(DropReason r);

struct Quote {
    double strike = 0.0;   // USD
    int maturity_days = 0; // calendar days
    double price = 0.0;    // USD, last trade
    bool kept = true;
    DropReason drop_reason = DropReason::None;
};

struct QuoteSet {
    double spot = 0.0; // USD
    std::string as_of;
    std::vector<Quote> quotes; // sorted by (maturity, strike)

    std::size_t kept_count() const;
};

/// Parse the chain CSV (exact header strike_usd,maturity_days,last_price_usd)
/// plus the sidecar JSON {"spot_usd": <number>, "as_of": "<date>"}.
/// Throws SchemaError with the offending line number, NonPositivePrice for
/// non-positive quotes.
QuoteSet load_chain(const std::string& csv_path, const std::string& spot_json_path);

/// Stream variants (unit-testable without touching the filesystem).
QuoteSet parse_chain_csv(std::istream& csv, double spot, const std::string& as_of = "");
double parse_spot_json(std::istream& json, std::string* as_of = nullptr);

/// Strike-arbitrage filter: per maturity, call prices must be nonincreasing
/// in strike and convex across adjacent strike triples
/// C(K) <= (d2 C(K-d1) + d1 C(K+d2)) / (d1+d2). Violators are marked
/// kept = false with the failed condition; passes repeat to a fixpoint, so
/// the filter is idempotent. Kept quotes are never reordered or mutated.
QuoteSet arbitrage_filter(QuoteSet qs);

void write_chain_csv(const QuoteSet& qs, std::ostream& os, bool kept_only = true);

} // namespace fsv
