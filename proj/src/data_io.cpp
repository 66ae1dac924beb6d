#include "urldet/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "urldet/rng.hpp"

namespace urldet {

namespace {
constexpr const char* kRecordsFormat = "urldet.records";
constexpr int kRecordsVersion = 1;
}  // namespace

nlohmann::json record_to_json(const DomainRecord& r) {
    nlohmann::json j{{"url", r.url},
                     {"domain", r.domain},
                     {"label", r.label == Label::Malicious ? "malicious" : "benign"},
                     {"pdns_change_count", r.pdns_change_count}};
    auto dns = nlohmann::json::array();
    for (const auto& s : r.dns) {
        dns.push_back({{"ip", s.ip}, {"country", s.country}, {"ttl", s.ttl}, {"observed_at", s.observed_at}});
    }
    j["dns"] = std::move(dns);
    if (r.whois) {
        j["whois"] = {{"created", r.whois->created.to_string()},
                      {"updated", r.whois->updated.to_string()},
                      {"expires", r.whois->expires.to_string()}};
    }
    if (r.communication) {
        j["communication"] = {{"countries", r.communication->countries}, {"asns", r.communication->asns}};
    }
    if (r.certificate) {
        j["certificate"] = {{"valid", r.certificate->valid},
                            {"updated", r.certificate->updated},
                            {"expires", r.certificate->expires}};
    }
    return j;
}

DomainRecord record_from_json(const nlohmann::json& j) {
    DomainRecord r;
    r.url = j.at("url").get<std::string>();
    r.domain = j.at("domain").get<std::string>();
    const auto label = j.at("label").get<std::string>();
    if (label == "malicious") {
        r.label = Label::Malicious;
    } else if (label == "benign") {
        r.label = Label::Benign;
    } else {
        throw DataError("unknown label: " + label);
    }
    r.pdns_change_count = j.at("pdns_change_count").get<std::int64_t>();
    for (const auto& s : j.at("dns")) {
        r.dns.push_back(DnsSnapshot{s.at("ip").get<std::string>(), s.at("country").get<std::string>(),
                                    s.at("ttl").get<std::int64_t>(), s.at("observed_at").get<std::int64_t>()});
    }
    if (j.contains("whois")) {
        r.whois = WhoisInfo{Date::parse(j.at("whois").at("created").get<std::string>()),
                            Date::parse(j.at("whois").at("updated").get<std::string>()),
                            Date::parse(j.at("whois").at("expires").get<std::string>())};
    }
    if (j.contains("communication")) {
        r.communication = CommunicationProfile{j.at("communication").at("countries").get<std::vector<std::string>>(),
                                               j.at("communication").at("asns").get<std::vector<std::int64_t>>()};
    }
    if (j.contains("certificate")) {
        r.certificate = CertificateInfo{j.at("certificate").at("valid").get<int>(),
                                        j.at("certificate").at("updated").get<std::int64_t>(),
                                        j.at("certificate").at("expires").get<std::int64_t>()};
    }
    return r;
}

LoadResult load_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());

    LoadResult result;
    std::string line;
    if (!std::getline(in, line)) return result;  // empty file: no records, no error

    try {
        const auto header = nlohmann::json::parse(line);
        if (header.value("format", "") != kRecordsFormat) throw IoError("not a records file: " + path.string());
        if (header.value("version", 0) != kRecordsVersion) {
            throw IoError("records schema version mismatch in " + path.string());
        }
    } catch (const nlohmann::json::exception&) {
        throw IoError("malformed header in " + path.string());
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            DomainRecord r = record_from_json(nlohmann::json::parse(line));
            if (auto violations = validate_record(r); !violations.empty()) {
                std::string msg = "invalid record:";
                for (const auto& v : violations) msg += " [" + v + "]";
                result.errors.push_back({line_no, std::move(msg)});
                continue;
            }
            result.records.push_back(std::move(r));
        } catch (const std::exception& e) {
            result.errors.push_back({line_no, e.what()});
        }
    }
    return result;
}

void save_records(std::span<const DomainRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << nlohmann::json{{"format", kRecordsFormat}, {"version", kRecordsVersion}}.dump() << '\n';
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

DatasetSplit split(std::span<const DomainRecord> records, double ratio_pool_fraction, std::uint64_t seed) {
    if (ratio_pool_fraction <= 0.0 || ratio_pool_fraction >= 1.0) {
        throw ConfigError("split: ratio pool fraction must lie in (0, 1)");
    }

    std::vector<int> benign, malicious;
    for (std::size_t i = 0; i < records.size(); ++i) {
        (records[i].label == Label::Malicious ? malicious : benign).push_back(static_cast<int>(i));
    }
    if (benign.size() < 4 || malicious.size() < 4) {
        throw DataError("split: too few records of either class");
    }

    Rng rng(seed);
    rng.shuffle(benign);
    rng.shuffle(malicious);

    DatasetSplit s;
    const auto take = [&](const std::vector<int>& cls, double fraction) {
        const auto cut = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(cls.size())));
        for (std::size_t i = 0; i < cls.size(); ++i) {
            (i < cut ? s.ratio_pool : s.model_pool).push_back(cls[i]);
        }
    };
    take(benign, ratio_pool_fraction);
    take(malicious, ratio_pool_fraction);
    std::sort(s.ratio_pool.begin(), s.ratio_pool.end());
    std::sort(s.model_pool.begin(), s.model_pool.end());

    // fixed 75/25 train/test carve of the model pool, stratified the same way
    std::vector<int> pool_benign, pool_malicious;
    for (const int idx : s.model_pool) {
        (records[static_cast<std::size_t>(idx)].label == Label::Malicious ? pool_malicious : pool_benign)
            .push_back(idx);
    }
    rng.shuffle(pool_benign);
    rng.shuffle(pool_malicious);
    const auto carve = [&](const std::vector<int>& cls) {
        const auto cut = static_cast<std::size_t>(std::llround(0.75 * static_cast<double>(cls.size())));
        for (std::size_t i = 0; i < cls.size(); ++i) {
            (i < cut ? s.train : s.test).push_back(cls[i]);
        }
    };
    carve(pool_benign);
    carve(pool_malicious);
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

}  // namespace urldet
