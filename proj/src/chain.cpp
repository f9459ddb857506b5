#include "fsv/chain.hpp"
#include "fsv/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace fsv {

namespace {

constexpr double kRelEps = 1e-12;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

std::string trimmed(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && issp(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && issp(s[i])) ++i;
    return s.substr(i);
}

} // namespace

const char* to_string(DropReason r) {
    switch (r) {
        case DropReason::None: return "none";
        case DropReason::Monotonicity: return "monotonicity";
        case DropReason::Convexity: return "convexity";
    }
    return "?";
}

std::size_t QuoteSet::kept_count() const {
    return std::size_t(std::count_if(quotes.begin(), quotes.end(), [](const Quote& q) { return q.kept; }));
}

QuoteSet parse_chain_csv(std::istream& csv, double spot, const std::string& as_of) {
    QuoteSet qs;
    qs.spot = spot;
    qs.as_of = as_of;
    if (!(spot > 0.0)) throw SchemaError("chain: spot must be positive");

    std::string line;
    int lineno = 0;
    if (!std::getline(csv, line)) throw SchemaError("chain: empty file (line 1)");
    ++lineno;
    if (trimmed(line) != "strike_usd,maturity_days,last_price_usd")
        throw SchemaError("chain: bad header at line 1, expected "
                          "strike_usd,maturity_days,last_price_usd");

    while (std::getline(csv, line)) {
        ++lineno;
        if (trimmed(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw SchemaError("chain: expected 3 fields at line " + std::to_string(lineno));
        Quote q;
        try {
            q.strike = std::stod(fields[0]);
            q.maturity_days = std::stoi(fields[1]);
            q.price = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw SchemaError("chain: unparsable number at line " + std::to_string(lineno));
        }
        if (!(q.strike > 0.0) || q.maturity_days <= 0)
            throw SchemaError("chain: strike and maturity must be positive at line " +
                              std::to_string(lineno));
        if (!(q.price > 0.0))
            throw NonPositivePrice("chain: non-positive price at line " + std::to_string(lineno));
        qs.quotes.push_back(q);
    }
    std::stable_sort(qs.quotes.begin(), qs.quotes.end(), [](const Quote& a, const Quote& b) {
        return a.maturity_days != b.maturity_days ? a.maturity_days < b.maturity_days
                                                  : a.strike < b.strike;
    });
    return qs;
}

double parse_spot_json(std::istream& json, std::string* as_of) {
    nlohmann::json j;
    try {
        json >> j;
    } catch (const std::exception& e) {
        throw SchemaError(std::string("spot sidecar: invalid JSON: ") + e.what());
    }
    if (!j.contains("spot_usd") || !j["spot_usd"].is_number())
        throw SchemaError("spot sidecar: missing numeric spot_usd");
    if (as_of) *as_of = j.value("as_of", "");
    return j["spot_usd"].get<double>();
}

QuoteSet load_chain(const std::string& csv_path, const std::string& spot_json_path) {
    std::ifstream jf(spot_json_path);
    if (!jf) throw SchemaError("cannot open spot sidecar " + spot_json_path);
    std::string as_of;
    double spot = parse_spot_json(jf, &as_of);
    std::ifstream cf(csv_path);
    if (!cf) throw SchemaError("cannot open chain " + csv_path);
    return parse_chain_csv(cf, spot, as_of);
}

QuoteSet arbitrage_filter(QuoteSet qs) {
    // group indices per maturity (quotes are sorted)
    std::map<int, std::vector<std::size_t>> by_mat;
    for (std::size_t i = 0; i < qs.quotes.size(); ++i)
        if (qs.quotes[i].kept) by_mat[qs.quotes[i].maturity_days].push_back(i);

    for (auto& [mat, idx0] : by_mat) {
        (void)mat;
        std::vector<std::size_t> idx = idx0;
        bool changed = true;
        while (changed) {
            changed = false;
            // condition 1: nonincreasing in strike; the higher-strike quote of
            // a rising pair is the anomaly
            for (std::size_t k = 1; k < idx.size(); ++k) {
                const Quote& lo = qs.quotes[idx[k - 1]];
                Quote& hi = qs.quotes[idx[k]];
                if (hi.price > lo.price * (1.0 + kRelEps)) {
                    hi.kept = false;
                    hi.drop_reason = DropReason::Monotonicity;
                    idx.erase(idx.begin() + long(k));
                    changed = true;
                    break;
                }
            }
            if (changed) continue;
            // condition 2: convexity across adjacent triples; drop the middle
            for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
                const Quote& l = qs.quotes[idx[k - 1]];
                Quote& m = qs.quotes[idx[k]];
                const Quote& r = qs.quotes[idx[k + 1]];
                double d1 = m.strike - l.strike, d2 = r.strike - m.strike;
                if (!(d1 > 0.0) || !(d2 > 0.0)) continue;
                double bound = (d2 * l.price + d1 * r.price) / (d1 + d2);
                if (m.price > bound * (1.0 + kRelEps)) {
                    m.kept = false;
                    m.drop_reason = DropReason::Convexity;
                    idx.erase(idx.begin() + long(k));
                    changed = true;
                    break;
                }
            }
        }
    }
    return qs;
}

void write_chain_csv(const QuoteSet& qs, std::ostream& os, bool kept_only) {
    os << "strike_usd,maturity_days,last_price_usd\n";
    for (const auto& q : qs.quotes) {
        if (kept_only && !q.kept) continue;
        os << q.strike << ',' << q.maturity_days << ',' << q.price << '\n';
    }
}

} // namespace fsv
