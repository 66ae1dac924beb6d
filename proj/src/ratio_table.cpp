#include "urldet/ratio_table.hpp"

#include <fstream>
#include <sstream>

namespace urldet {

namespace {
constexpr const char* kMagic = "urldet.ratio-table";
constexpr int kFormatVersion = 1;
}  // namespace

std::string to_string(RatioKind kind) { return kind == RatioKind::Countries ? "countries" : "asns"; }

RatioKind ratio_kind_from_string(const std::string& name) {
    if (name == "countries") return RatioKind::Countries;
    if (name == "asns") return RatioKind::Asns;
    throw ConfigError("unknown ratio-table kind: " + name);
}

RatioTable::Lookup RatioTable::lookup(const std::string& item) const {
    const auto it = entries.find(item);
    if (it == entries.end()) return Lookup{};
    return Lookup{it->second.benign_ratio, it->second.norm, true};
}

RatioTable build_table(std::span<const DomainRecord> records, RatioKind kind, std::int64_t threshold) {
    if (threshold < 1) throw ConfigError("ratio-table threshold must be >= 1");

    std::map<std::string, std::pair<std::int64_t, std::int64_t>> counts;  // item -> (benign, malicious)
    bool any_profile = false;
    for (const auto& r : records) {
        if (!r.communication) continue;
        any_profile = true;
        const bool malicious = r.label == Label::Malicious;
        if (kind == RatioKind::Countries) {
            for (const auto& c : r.communication->countries) {
                auto& [b, m] = counts[c];
                (malicious ? m : b)++;
            }
        } else {
            for (const auto asn : r.communication->asns) {
                auto& [b, m] = counts[std::to_string(asn)];
                (malicious ? m : b)++;
            }
        }
    }
    if (!any_profile) throw DataError("build_table: no records with communication data");

    RatioTable table;
    table.kind = kind;
    table.threshold = threshold;
    for (const auto& [item, bm] : counts) {
        const std::int64_t total = bm.first + bm.second;
        if (total < threshold) continue;
        table.entries.emplace(item, RatioEntry{bm.first, bm.second, 0.0, 0.0});
        table.max_occurrences = std::max(table.max_occurrences, total);
    }
    for (auto& [item, e] : table.entries) {
        e.benign_ratio = static_cast<double>(e.benign_count) / static_cast<double>(e.total());
        e.norm = static_cast<double>(e.total()) / static_cast<double>(table.max_occurrences);
    }
    return table;
}

std::string serialize_table(const RatioTable& table) {
    std::ostringstream out;
    out << kMagic << '\t' << kFormatVersion << '\t' << to_string(table.kind) << '\t' << table.threshold << '\t'
        << table.max_occurrences << '\n';
    for (const auto& [item, e] : table.entries) {
        out << to_string(table.kind) << '\t' << item << '\t' << e.benign_count << '\t' << e.malicious_count << '\n';
    }
    return out.str();
}

void save_table(const RatioTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << serialize_table(table);
    if (!out) throw IoError("write failed: " + path.string());
}

RatioTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw IoError("ratio-table file is empty: " + path.string());

    std::istringstream hs(header);
    std::string magic, kind_name;
    int version = 0;
    RatioTable table;
    if (!(hs >> magic >> version >> kind_name >> table.threshold >> table.max_occurrences) || magic != kMagic) {
        throw IoError("not a ratio-table file: " + path.string());
    }
    if (version != kFormatVersion) {
        throw IoError("ratio-table schema version mismatch: expected " + std::to_string(kFormatVersion) + ", got " +
                      std::to_string(version));
    }
    table.kind = ratio_kind_from_string(kind_name);

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kind_field, item;
        RatioEntry e;
        if (!(std::getline(ls, kind_field, '\t') && std::getline(ls, item, '\t') && ls >> e.benign_count &&
              ls.ignore(1) && ls >> e.malicious_count) ||
            kind_field != to_string(table.kind)) {
            throw IoError("malformed ratio-table line " + std::to_string(line_no) + " in " + path.string());
        }
        if (e.total() <= 0) throw IoError("ratio-table entry with no occurrences at line " + std::to_string(line_no));
        e.benign_ratio = static_cast<double>(e.benign_count) / static_cast<double>(e.total());
        e.norm = static_cast<double>(e.total()) / static_cast<double>(table.max_occurrences);
        table.entries.emplace(std::move(item), e);
    }
    return table;
}

}  // namespace urldet
