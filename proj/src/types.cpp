#include "urldet/types.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>

namespace urldet {

long long Date::to_days() const {
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    return sys_days{ymd}.time_since_epoch().count();
}

Date Date::from_days(long long days) {
    using namespace std::chrono;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

Date Date::parse(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &y, &m, &d, &extra) != 3 || m < 1 || m > 12 || d < 1 || d > 31) {
        throw DataError("malformed date: " + iso);
    }
    return Date{y, m, d};
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::vector<std::string> validate_record(const DomainRecord& r) {
    std::vector<std::string> out;

    if (r.domain.empty()) {
        out.push_back("domain: empty");
    } else {
        if (r.domain.size() < 4) out.push_back("domain: shorter than four characters");
        if (r.domain.find('.') == std::string::npos) out.push_back("domain: missing dot");
        for (const char c : r.domain) {
            if (std::isupper(static_cast<unsigned char>(c))) {
                out.push_back("domain: not lowercase");
                break;
            }
        }
    }

    for (std::size_t i = 0; i < r.dns.size(); ++i) {
        if (r.dns[i].ttl < 0 || r.dns[i].ttl > kTtlMax) {
            out.push_back("dns[" + std::to_string(i) + "]: ttl out of range");
        }
    }

    if (r.whois) {
        if (r.whois->created > r.whois->updated) out.push_back("whois: created after updated");
        if (r.whois->created > r.whois->expires) out.push_back("whois: created after expires");
    }

    if (r.pdns_change_count < 0) out.push_back("pdns_change_count: negative");

    if (r.communication) {
        for (std::size_t i = 0; i < r.communication->asns.size(); ++i) {
            if (r.communication->asns[i] < 0) {
                out.push_back("communication.asns[" + std::to_string(i) + "]: negative");
            }
        }
    }

    if (r.certificate) {
        if (r.certificate->valid != 0 && r.certificate->valid != 1) {
            out.push_back("certificate: valid flag out of range");
        } else if (r.certificate->valid == 1 && r.certificate->expires < r.certificate->updated) {
            out.push_back("certificate: expires before updated");
        }
    }

    return out;
}

namespace {

const std::vector<std::string> kBaseNames = {
    "length",   "consecutive", "entropy",        "ip_count",    "geo_count",
    "ttl_mean", "ttl_std",     "lifetime_years", "active_years"};

const std::vector<std::string> kRobustNames = {"consecutive", "ttl_mean", "lifetime_years", "active_years"};

const std::vector<std::string> kNovelNames = {"ssl_remaining", "ccr", "car", "pdns_changes"};

std::vector<std::string> concat(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

const std::vector<std::string> kBrTcpNames = concat(kRobustNames, kNovelNames);
const std::vector<std::string> kBTcpNames = concat(kBaseNames, kNovelNames);

}  // namespace

const std::vector<std::string>& feature_names(FeatureSetId id) {
    switch (id) {
        case FeatureSetId::B: return kBaseNames;
        case FeatureSetId::BR: return kRobustNames;
        case FeatureSetId::TCP: return kNovelNames;
        case FeatureSetId::BRTCP: return kBrTcpNames;
        case FeatureSetId::BTCP: return kBTcpNames;
    }
    throw ConfigError("unknown feature set");
}

std::size_t feature_count(FeatureSetId id) { return feature_names(id).size(); }

std::string to_string(FeatureSetId id) {
    switch (id) {
        case FeatureSetId::B: return "B";
        case FeatureSetId::BR: return "BR";
        case FeatureSetId::TCP: return "TCP";
        case FeatureSetId::BRTCP: return "BRTCP";
        case FeatureSetId::BTCP: return "BTCP";
    }
    throw ConfigError("unknown feature set");
}

FeatureSetId feature_set_from_string(const std::string& name) {
    if (name == "B") return FeatureSetId::B;
    if (name == "BR") return FeatureSetId::BR;
    if (name == "TCP") return FeatureSetId::TCP;
    if (name == "BRTCP") return FeatureSetId::BRTCP;
    if (name == "BTCP") return FeatureSetId::BTCP;
    throw ConfigError("unknown feature set: " + name);
}

bool needs_ratio_tables(FeatureSetId id) {
    return id == FeatureSetId::TCP || id == FeatureSetId::BRTCP || id == FeatureSetId::BTCP;
}

}  // namespace urldet
