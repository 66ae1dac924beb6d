#include "urldet/novel_features.hpp"

#include <algorithm>
#include <cmath>

namespace urldet {

double communication_rank(std::span<const std::string> items, const RatioTable& table, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("communication_rank: epsilon must be > 0");
    double rank = 0.0;
    for (const auto& item : items) {
        const auto hit = table.lookup(item);
        // log base 0.5 of x is -log2(x)
        rank += -std::log2(hit.ratio + epsilon) / hit.norm;
    }
    return rank;
}

double ccr(const DomainRecord& r, const RatioTable& countries_table, double epsilon) {
    if (countries_table.kind != RatioKind::Countries) {
        throw std::invalid_argument("ccr: table kind mismatch, expected countries");
    }
    if (!r.communication) return 0.0;
    return communication_rank(r.communication->countries, countries_table, epsilon);
}

double car(const DomainRecord& r, const RatioTable& asns_table, double epsilon) {
    if (asns_table.kind != RatioKind::Asns) {
        throw std::invalid_argument("car: table kind mismatch, expected asns");
    }
    if (!r.communication) return 0.0;
    std::vector<std::string> items;
    items.reserve(r.communication->asns.size());
    for (const auto asn : r.communication->asns) items.push_back(std::to_string(asn));
    return communication_rank(items, asns_table, epsilon);
}

std::int64_t pdns_changes(const DomainRecord& r) { return r.pdns_change_count; }

double ssl_remaining(const std::optional<CertificateInfo>& c) {
    if (!c || c->valid == 0) return 0.0;
    return static_cast<double>(std::max<std::int64_t>(0, c->expires - c->updated));
}

NovelFeatureRow extract_novel(const DomainRecord& r, const RatioTable& countries_table,
                              const RatioTable& asns_table, double epsilon) {
    NovelFeatureRow row;
    row.ccr = ccr(r, countries_table, epsilon);
    row.car = car(r, asns_table, epsilon);
    row.pdns_changes = pdns_changes(r);
    row.ssl_remaining = ssl_remaining(r.certificate);
    return row;
}

}  // namespace urldet
