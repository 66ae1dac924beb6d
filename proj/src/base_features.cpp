#include "urldet/base_features.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>
#include <string>

namespace urldet {

std::string normalize_domain(std::string_view input) {
    std::string_view s = input;
    if (const auto pos = s.find("://"); pos != std::string_view::npos) s.remove_prefix(pos + 3);
    if (const auto at = s.find('@'); at != std::string_view::npos) s.remove_prefix(at + 1);
    if (const auto slash = s.find_first_of("/?#"); slash != std::string_view::npos) s = s.substr(0, slash);
    if (const auto colon = s.find(':'); colon != std::string_view::npos) s = s.substr(0, colon);

    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (out.rfind("www.", 0) == 0) out.erase(0, 4);
    return out;
}

int domain_length(std::string_view domain) {
    if (domain.empty()) throw std::invalid_argument("domain_length: empty domain");
    return static_cast<int>(domain.size());
}

int max_consecutive(std::string_view domain) {
    if (domain.empty()) throw std::invalid_argument("max_consecutive: empty domain");
    int best = 1;
    int run = 1;
    for (std::size_t i = 1; i < domain.size(); ++i) {
        run = (domain[i] == domain[i - 1]) ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

double domain_entropy(std::string_view domain, double log_base) {
    if (domain.empty()) throw std::invalid_argument("domain_entropy: empty domain");
    std::array<int, 256> counts{};
    for (const char c : domain) counts[static_cast<unsigned char>(c)]++;

    const double n = static_cast<double>(domain.size());
    const double log_div = std::log(log_base);
    double h = 0.0;
    for (const int count : counts) {
        if (count == 0) continue;
        const double p = count / n;
        // each of the `count` positions carrying this character contributes
        // -p*log(p)
        h -= count * p * (std::log(p) / log_div);
    }
    return h;
}

int ip_count(std::span<const DnsSnapshot> dns) {
    std::set<std::string_view> ips;
    for (const auto& s : dns) ips.insert(s.ip);
    return static_cast<int>(ips.size());
}

int geo_count(std::span<const DnsSnapshot> dns) {
    std::set<std::string_view> countries;
    for (const auto& s : dns) countries.insert(s.country);
    return static_cast<int>(countries.size());
}

double ttl_mean(std::span<const DnsSnapshot> dns) {
    if (dns.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : dns) sum += static_cast<double>(s.ttl);
    return sum / static_cast<double>(dns.size());
}

double ttl_std(std::span<const DnsSnapshot> dns) {
    if (dns.size() <= 1) return 0.0;
    const double mean = ttl_mean(dns);
    double acc = 0.0;
    for (const auto& s : dns) {
        const double d = static_cast<double>(s.ttl) - mean;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(dns.size()));
}

namespace {
constexpr double kDaysPerYear = 365.25;
}

double lifetime_years(const WhoisInfo& w) {
    return static_cast<double>(w.expires.to_days() - w.created.to_days()) / kDaysPerYear;
}

double active_years(const WhoisInfo& w) {
    return static_cast<double>(w.updated.to_days() - w.created.to_days()) / kDaysPerYear;
}

BaseFeatureRow extract_base(const DomainRecord& r, double entropy_log_base) {
    BaseFeatureRow row;
    row.length = domain_length(r.domain);
    row.consecutive = max_consecutive(r.domain);
    row.entropy = domain_entropy(r.domain, entropy_log_base);
    row.ip_count = ip_count(r.dns);
    row.geo_count = geo_count(r.dns);
    row.ttl_mean = ttl_mean(r.dns);
    row.ttl_std = ttl_std(r.dns);
    if (r.whois) {
        row.lifetime_years = lifetime_years(*r.whois);
        row.active_years = active_years(*r.whois);
    }
    return row;
}

}  // namespace urldet
