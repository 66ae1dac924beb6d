#include "urldet/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "urldet/base_features.hpp"
#include "urldet/novel_features.hpp"

namespace urldet {

ClassStats default_benign_stats() {
    ClassStats s;
    s.length = {14.38, 4.06};
    s.consecutive = {1.29, 0.46};
    s.entropy = {4.85, 1.18};
    s.ip_count = {2.09, 1.25};
    s.geo_count = {1.00, 0.17};
    s.ttl_mean = {7578.13, 17781.47};
    s.ttl_std = {2971.65, 8777.26};
    s.lifetime_years = {10.98, 7.46};
    s.active_years = {8.40, 6.79};
    s.ccr = {31.31, 91.16};
    s.car = {935.59, 12258.99};
    s.pdns_changes = {26.40, 111.99};
    s.ssl_remaining = {1.547e7, 2.304e7};
    return s;
}

ClassStats default_malicious_stats() {
    ClassStats s;
    s.length = {15.54, 4.09};
    s.consecutive = {1.46, 0.50};
    s.entropy = {5.16, 1.34};
    s.ip_count = {1.94, 0.94};
    s.geo_count = {1.02, 0.31};
    s.ttl_mean = {8039.92, 15466.29};
    s.ttl_std = {2531.38, 7456.62};
    s.lifetime_years = {6.75, 5.77};
    s.active_years = {4.64, 5.66};
    s.ccr = {59.40, 215.15};
    s.car = {12979.38, 46384.86};
    s.pdns_changes = {8.01, 16.63};
    s.ssl_remaining = {4.365e6, 1.545e7};
    return s;
}

namespace {

const std::array<std::pair<const char*, FeatureStats ClassStats::*>, 13> kStatFields = {{
    {"length", &ClassStats::length},
    {"consecutive", &ClassStats::consecutive},
    {"entropy", &ClassStats::entropy},
    {"ip_count", &ClassStats::ip_count},
    {"geo_count", &ClassStats::geo_count},
    {"ttl_mean", &ClassStats::ttl_mean},
    {"ttl_std", &ClassStats::ttl_std},
    {"lifetime_years", &ClassStats::lifetime_years},
    {"active_years", &ClassStats::active_years},
    {"ccr", &ClassStats::ccr},
    {"car", &ClassStats::car},
    {"pdns_changes", &ClassStats::pdns_changes},
    {"ssl_remaining", &ClassStats::ssl_remaining},
}};

nlohmann::json stats_to_json(const ClassStats& s) {
    nlohmann::json j;
    for (const auto& [name, field] : kStatFields) {
        j[name] = {{"mean", (s.*field).mean}, {"std", (s.*field).std}};
    }
    return j;
}

void stats_from_json(const nlohmann::json& j, ClassStats& s) {
    for (const auto& [name, field] : kStatFields) {
        if (!j.contains(name)) continue;
        (s.*field).mean = j.at(name).value("mean", (s.*field).mean);
        (s.*field).std = j.at(name).value("std", (s.*field).std);
    }
}

}  // namespace

nlohmann::json GeneratorSpec::to_json() const {
    return nlohmann::json{{"n_records", n_records},
                          {"malicious_fraction", malicious_fraction},
                          {"seed", seed},
                          {"snapshots", snapshots},
                          {"benign", stats_to_json(benign)},
                          {"malicious", stats_to_json(malicious)}};
}

GeneratorSpec GeneratorSpec::from_json(const nlohmann::json& j) {
    GeneratorSpec spec;
    spec.n_records = j.value("n_records", spec.n_records);
    spec.malicious_fraction = j.value("malicious_fraction", spec.malicious_fraction);
    spec.seed = j.value("seed", spec.seed);
    spec.snapshots = j.value("snapshots", spec.snapshots);
    if (j.contains("benign")) stats_from_json(j.at("benign"), spec.benign);
    if (j.contains("malicious")) stats_from_json(j.at("malicious"), spec.malicious);
    if (spec.n_records < 1) throw ConfigError("generator: n_records must be >= 1");
    if (spec.malicious_fraction <= 0.0 || spec.malicious_fraction >= 1.0) {
        throw ConfigError("generator: malicious_fraction must lie in (0, 1)");
    }
    if (spec.snapshots < 2) throw ConfigError("generator: snapshots must be >= 2");
    return spec;
}

TargetVector draw_targets(const ClassStats& s, int snapshots, Rng& rng) {
    // one normal per feature, clamped afterwards, so the stream layout is fixed
    const double d_length = rng.normal(s.length.mean, s.length.std);
    const double d_consec = rng.normal(s.consecutive.mean, s.consecutive.std);
    const double d_entropy = rng.normal(s.entropy.mean, s.entropy.std);
    const double d_ip = rng.normal(s.ip_count.mean, s.ip_count.std);
    const double d_geo = rng.normal(s.geo_count.mean, s.geo_count.std);
    const double d_ttl_mean = rng.normal(s.ttl_mean.mean, s.ttl_mean.std);
    const double d_ttl_std = rng.normal(s.ttl_std.mean, s.ttl_std.std);
    const double d_lifetime = rng.normal(s.lifetime_years.mean, s.lifetime_years.std);
    const double d_active = rng.normal(s.active_years.mean, s.active_years.std);
    const double d_ccr = rng.normal(s.ccr.mean, s.ccr.std);
    const double d_car = rng.normal(s.car.mean, s.car.std);
    const double d_pdns = rng.normal(s.pdns_changes.mean, s.pdns_changes.std);
    const double d_ssl = rng.normal(s.ssl_remaining.mean, s.ssl_remaining.std);

    TargetVector t;
    t.length = static_cast<int>(std::clamp(std::llround(d_length), 4LL, 60LL));
    const long long run_cap = std::max(1, t.length - 4);
    t.consecutive = static_cast<int>(std::clamp(std::llround(d_consec), 1LL, run_cap));
    // the position-summed surprisal of a string without long runs lives
    // between log2(L) (all characters distinct) and roughly L/2 (two or
    // three symbols sharing the string)
    t.entropy = std::clamp(d_entropy, std::log2(static_cast<double>(t.length)),
                           0.5 * static_cast<double>(t.length));
    t.ip_count = static_cast<int>(std::clamp(std::llround(d_ip), 1LL, static_cast<long long>(std::min(10, snapshots))));
    t.geo_count = static_cast<int>(std::clamp(std::llround(d_geo), 1LL, static_cast<long long>(t.ip_count)));
    t.ttl_mean = std::clamp(d_ttl_mean, 0.0, static_cast<double>(kTtlMax));
    const double std_cap = t.ttl_mean <= 0.0 ? 0.0 : t.ttl_mean * std::sqrt(static_cast<double>(snapshots) - 1.0);
    t.ttl_std = std::clamp(d_ttl_std, 0.0, std_cap);
    t.lifetime_years = std::clamp(d_lifetime, 0.0, 80.0);
    t.active_years = std::clamp(d_active, 0.0, 80.0);
    t.ccr = std::max(0.0, d_ccr);
    t.car = std::max(0.0, d_car);
    t.pdns_changes = std::clamp(std::llround(d_pdns), 0LL, 10000000LL);
    t.ssl_remaining = std::clamp(d_ssl, 0.0, 1.26e9);
    return t;
}

namespace {

constexpr std::int64_t kObservedBase = 1577836800;  // 2020-01-01 UTC
constexpr std::int64_t kCertBase = 1577836800;

const std::array<const char*, 40> kDnsCountries = {
    "us", "de", "fr", "gb", "nl", "ru", "cn", "jp", "br", "in", "au", "ca", "it", "es",
    "se", "no", "fi", "dk", "pl", "cz", "at", "ch", "be", "ie", "pt", "gr", "tr", "ua",
    "ro", "hu", "bg", "sk", "lt", "lv", "ee", "kr", "sg", "hk", "za", "mx"};

std::string realize_domain(int length, int run, double entropy_target, Rng& rng) {
    const std::string tld = length >= 5 ? ".com" : ".io";
    const int name_len = length - static_cast<int>(tld.size());
    const int filler_len = name_len - run;

    // filler alphabet avoids the run character and anything in the TLDs
    static constexpr std::string_view kFiller = "abdefghjklnprstuvwxyz0123456789";
    const int offset = static_cast<int>(rng.uniform_int(0, std::max(0, filler_len)));
    const int start = static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(kFiller.size()) - 1));

    std::string best;
    double best_err = std::numeric_limits<double>::infinity();
    const int max_alphabet = std::max(1, std::min<int>(filler_len, static_cast<int>(kFiller.size())));
    for (int m = 1; m <= max_alphabet; ++m) {
        std::string name;
        name.reserve(static_cast<std::size_t>(name_len));
        for (int i = 0; i < offset; ++i) name += kFiller[(start + i % m) % kFiller.size()];
        name.append(static_cast<std::size_t>(run), 'q');
        for (int i = offset; i < filler_len; ++i) name += kFiller[(start + i % m) % kFiller.size()];

        const std::string candidate = name + tld;
        if (max_consecutive(candidate) != run) continue;
        const double err = std::abs(domain_entropy(candidate) - entropy_target);
        if (err < best_err) {
            best_err = err;
            best = candidate;
        }
        if (filler_len == 0) break;  // nothing to vary
    }
    if (best.empty()) {
        // filler cannot avoid extending the run (e.g. run == name length);
        // fall back to the bare run
        best = std::string(static_cast<std::size_t>(std::max(1, name_len)), 'q') + tld;
    }
    return best;
}

struct TtlPlan {
    std::vector<std::int64_t> values;
};

TtlPlan plan_ttls(double mean, double std, int n_base, int min_snapshots) {
    TtlPlan plan;
    const auto push_n = [&](std::int64_t v, int count) {
        for (int i = 0; i < count; ++i) plan.values.push_back(std::clamp<std::int64_t>(v, 0, kTtlMax));
    };

    if (mean < 0.5) {
        push_n(0, std::max(n_base, min_snapshots));
        return plan;
    }
    if (std < mean * 0.005) {
        push_n(std::llround(mean), std::max(n_base, min_snapshots));
        return plan;
    }
    if (mean >= std) {
        // symmetric two-point multiset hits both moments exactly
        int n = std::max(n_base, min_snapshots);
        n += n & 1;
        push_n(std::llround(mean - std), n / 2);
        push_n(std::llround(mean + std), n / 2);
        return plan;
    }

    // heavy-tail case: n_c spikes of height c over a floor of zeros
    int best_n = std::max(n_base, min_snapshots);
    int best_nc = 1;
    std::int64_t best_c = std::llround(mean * best_n);
    double best_err = std::numeric_limits<double>::infinity();
    for (int n = std::max({2, min_snapshots, n_base - 8}); n <= n_base + 8; ++n) {
        for (int nc = 1; nc < n; ++nc) {
            const std::int64_t c = std::llround(static_cast<double>(n) * mean / nc);
            if (c > kTtlMax) continue;
            const double got_mean = static_cast<double>(nc) * static_cast<double>(c) / n;
            const double got_var =
                static_cast<double>(nc) * static_cast<double>(c) * static_cast<double>(c) / n - got_mean * got_mean;
            const double got_std = got_var > 0.0 ? std::sqrt(got_var) : 0.0;
            const double err = std::max(std::abs(got_mean - mean) / mean, std::abs(got_std - std) / std);
            if (err < best_err) {
                best_err = err;
                best_n = n;
                best_nc = nc;
                best_c = c;
            }
        }
    }
    push_n(best_c, best_nc);
    push_n(0, best_n - best_nc);
    return plan;
}

std::vector<DnsSnapshot> realize_dns(const TargetVector& t, int n_base, Rng& rng, std::int64_t& ip_serial) {
    const TtlPlan ttls = plan_ttls(t.ttl_mean, t.ttl_std, n_base, t.ip_count);
    const int n = static_cast<int>(ttls.values.size());

    std::vector<std::string> ips;
    for (int k = 0; k < t.ip_count; ++k) {
        ++ip_serial;
        ips.push_back("10." + std::to_string((ip_serial >> 16) & 255) + "." + std::to_string((ip_serial >> 8) & 255) +
                      "." + std::to_string(ip_serial & 255));
    }
    const int country_start = static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(kDnsCountries.size()) - 1));

    std::vector<DnsSnapshot> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int ip_idx = i % t.ip_count;
        const int country_idx = std::min(ip_idx, t.geo_count - 1);
        out.push_back(DnsSnapshot{ips[static_cast<std::size_t>(ip_idx)],
                                  kDnsCountries[static_cast<std::size_t>((country_start + country_idx) %
                                                                         static_cast<int>(kDnsCountries.size()))],
                                  ttls.values[static_cast<std::size_t>(i)], kObservedBase + 3600LL * i});
    }
    return out;
}

WhoisInfo realize_whois(const TargetVector& t, Rng& rng) {
    constexpr double kDaysPerYear = 365.25;
    const Date created = Date::from_days(10957 + rng.uniform_int(0, 3650));  // on/after 2000-01-01
    WhoisInfo w;
    w.created = created;
    w.updated = Date::from_days(created.to_days() + std::llround(t.active_years * kDaysPerYear));
    w.expires = Date::from_days(created.to_days() + std::llround(t.lifetime_years * kDaysPerYear));
    return w;
}

CertificateInfo realize_certificate(const TargetVector& t, Rng& rng) {
    CertificateInfo c;
    if (t.ssl_remaining >= 0.5) {
        c.valid = 1;
        c.updated = kCertBase + rng.uniform_int(0, 100000000);
        c.expires = c.updated + std::llround(t.ssl_remaining);
    } else {
        c.valid = 0;
        c.updated = kCertBase;
        c.expires = kCertBase;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Communication planning.
//
// Ranks are additive over list items, so every record's target decomposes
// into a small multiset of vocabulary items ("rungs" of a denomination
// ladder). Rung denominations are endogenous: an item's contribution is
// log_0.5(ratio + eps) / norm, and both ratio and norm emerge from how often
// the planner itself uses the item. A short fixed-point iteration settles the
// ladder before the lists are emitted.
// ---------------------------------------------------------------------------

struct LadderPlan {
    std::vector<double> contribution;        // realized value per rung
    std::vector<bool> active;
    std::vector<int> item_counts;            // J_f
    std::vector<std::vector<int>> per_record;  // rung -> count, per record
};

constexpr double kMinItemTotal = 30;  // keeps every item comfortably above the table threshold
constexpr int kTailCap = 4000;        // bounds list length under degenerate ladders

constexpr int kBottomQuota = 12;  // bottom-rung occurrences reserved per record

/// Deterministic per-record, per-rung denomination jitter. With identical
/// targets every record would flip between adjacent integer allocations in
/// unison and keep the planner's fixed point from settling; a +-1.5% jitter
/// of the value a rung is assumed to carry spreads the records across the
/// cliff while costing at most ~1.5% of realized rank.
double rung_jitter(std::size_t record, std::size_t rung) {
    const double u = static_cast<double>(mix_seed(0xd17e5, record * 16 + rung) >> 11) * 0x1.0p-53;
    return 1.0 + 0.03 * (u - 0.5);
}

/// Bottom-rung quota first (it keeps the normalization anchor heavily used),
/// then greedy over the upper rungs, then the remainder returns to the
/// bottom rung.
std::vector<int> decompose(double target, const std::vector<double>& c, const std::vector<bool>& active,
                           std::size_t record) {
    std::vector<int> counts(c.size(), 0);
    const std::size_t bottom = c.size() - 1;
    double rem = target;

    const int quota = static_cast<int>(std::min<double>(std::floor(rem / c[bottom]), kBottomQuota));
    if (quota > 0) {
        counts[bottom] = quota;
        rem -= quota * c[bottom];
    }
    for (std::size_t f = 0; f < bottom; ++f) {
        if (!active[f] || c[f] <= 0.0) continue;
        const int n = static_cast<int>(std::floor(rem / (c[f] * rung_jitter(record, f))));
        if (n > 0) {
            counts[f] = n;
            rem = std::max(rem - n * c[f], 0.0);
        }
    }
    const int tail = static_cast<int>(std::llround(rem / c[bottom]));
    counts[bottom] += std::clamp(tail, 0, kTailCap);
    return counts;
}

/// An item's contribution is log_0.5(ratio + eps) / norm where ratio and
/// norm come from the planner's own emission, so the ladder is a fixed
/// point. The solver runs in phases: a pre-pass under the nominal ladder
/// freezes which rungs exist at all, then the contributions iterate to
/// self-consistency, with a one-dimensional scan solving the bottom rung
/// whose class mix is the normalization anchor.
LadderPlan plan_ladder(const std::vector<double>& targets, const std::vector<int>& labels,
                       std::vector<double> nominal, double epsilon) {
    const std::size_t rungs = nominal.size();
    const std::size_t bottom = rungs - 1;
    LadderPlan plan;
    plan.contribution = nominal;
    plan.contribution[bottom] = 0.5;
    plan.active.assign(rungs, true);
    plan.item_counts.assign(rungs, 1);

    const auto tally = [&](const std::vector<std::vector<int>>& demands, std::vector<double>& benign_total,
                           std::vector<double>& total) {
        benign_total.assign(rungs, 0.0);
        total.assign(rungs, 0.0);
        for (std::size_t r = 0; r < demands.size(); ++r) {
            for (std::size_t f = 0; f < rungs; ++f) {
                total[f] += demands[r][f];
                if (labels[r] == 0) benign_total[f] += demands[r][f];
            }
        }
    };

    // pre-pass: which rungs carry enough mass, with enough benign
    // participation, to exist as table items at all. Near-pure malicious
    // rungs would sit at log_0.5(eps) and destabilize everything downstream,
    // so their demand is pushed a rung lower instead.
    {
        std::vector<std::vector<int>> demands(targets.size());
        for (std::size_t r = 0; r < targets.size(); ++r) {
            demands[r] = decompose(targets[r], plan.contribution, plan.active, r);
        }
        std::vector<double> benign_total, total;
        tally(demands, benign_total, total);
        for (std::size_t f = 0; f < bottom; ++f) {
            plan.active[f] = total[f] >= 2.0 * kMinItemTotal && benign_total[f] >= 20.0 &&
                             benign_total[f] >= 0.05 * total[f];
        }
    }

    const bool trace = std::getenv("URLDET_TRACE_LADDER") != nullptr;
    std::vector<std::vector<int>> demands;
    for (int iter = 0; iter < 16; ++iter) {
        std::vector<std::vector<int>> next(targets.size());
        for (std::size_t r = 0; r < targets.size(); ++r) {
            next[r] = decompose(targets[r], plan.contribution, plan.active, r);
        }
        const bool stable = !demands.empty() && next == demands;
        demands = std::move(next);
        if (trace) {
            std::fprintf(stderr, "ladder iter %d stable=%d c=[", iter, stable);
            for (const double v : plan.contribution) std::fprintf(stderr, " %.3f", v);
            std::fprintf(stderr, " ] active=[");
            for (const bool a : plan.active) std::fprintf(stderr, " %d", int(a));
            std::fprintf(stderr, " ] J=[");
            for (const int j : plan.item_counts) std::fprintf(stderr, " %d", j);
            std::fprintf(stderr, " ]\n");
        }
        if (stable) break;

        std::vector<double> benign_total, total;
        tally(demands, benign_total, total);

        // bottom rung: pick the contribution that reproduces itself through
        // the class mix of the occurrences it would absorb
        double best_c = plan.contribution[bottom];
        double best_err = std::numeric_limits<double>::infinity();
        for (int step = 0; step < 120; ++step) {
            const double cand = 0.05 + 0.025 * step;  // 0.05 .. 3.03
            auto trial = plan.contribution;
            trial[bottom] = cand;
            double benign = 0.0, all = 0.0;
            for (std::size_t r = 0; r < targets.size(); ++r) {
                const auto counts = decompose(targets[r], trial, plan.active, r);
                all += counts[bottom];
                if (labels[r] == 0) benign += counts[bottom];
            }
            if (all <= 0.0) break;
            const double unit = std::max(-std::log2(benign / all + epsilon), 1e-6);
            if (const double err = std::abs(unit - cand); err < best_err) {
                best_err = err;
                best_c = unit;
            }
        }
        plan.contribution[bottom] = best_c;

        double anchor_total = 0.0;
        for (std::size_t r = 0; r < targets.size(); ++r) {
            anchor_total += decompose(targets[r], plan.contribution, plan.active, r)[bottom];
        }
        anchor_total = std::max(anchor_total, 1.0);

        for (std::size_t f = 0; f < bottom; ++f) {
            if (!plan.active[f]) continue;
            // rungs may be retired in the first rounds only, while the ladder
            // still explores; afterwards the structure is frozen so the
            // contributions can settle
            if (iter < 2 &&
                (total[f] <= 0.0 || benign_total[f] < 20.0 || benign_total[f] < 0.05 * total[f])) {
                plan.active[f] = false;
                continue;
            }
            if (total[f] <= 0.0 || benign_total[f] <= 0.0) continue;
            const double ratio = benign_total[f] / total[f];
            const double unit = std::max(-std::log2(ratio + epsilon), 1e-6);
            const double desired_item_total = std::clamp(unit * anchor_total / nominal[f],
                                                         std::min(kMinItemTotal, anchor_total), anchor_total);
            int j = std::max(1, static_cast<int>(std::llround(total[f] / desired_item_total)));
            // no item may outgrow the bottom-rung anchor
            j = std::max(j, static_cast<int>(std::ceil(total[f] / anchor_total)));
            plan.item_counts[f] = j;
            const double candidate = unit * anchor_total * j / total[f];
            // geometric damping assists contraction of the fixed point
            plan.contribution[f] = std::sqrt(plan.contribution[f] * candidate);
        }
        // the ladder must stay strictly descending; rungs squeezed into the
        // level below hand their demand down instead
        if (iter < 2) {
            double below = plan.contribution[bottom];
            for (std::size_t f = bottom; f-- > 0;) {
                if (!plan.active[f]) continue;
                if (plan.contribution[f] <= 2.0 * below) {
                    plan.active[f] = false;
                    continue;
                }
                below = plan.contribution[f];
            }
        }
    }

    plan.per_record = std::move(demands);

    // final alignment: with the demands frozen, pick each rung's item count
    // so the realized contribution (set by per-item totals against the
    // anchor) lands as close as possible to the value the decomposition used
    std::vector<double> benign_total, total;
    tally(plan.per_record, benign_total, total);
    const double anchor_total = std::max(total[bottom], 1.0);
    for (std::size_t f = 0; f < bottom; ++f) {
        if (!plan.active[f] || total[f] <= 0.0) continue;
        const double ratio = benign_total[f] / total[f];
        const double unit = std::max(-std::log2(ratio + epsilon), 1e-6);
        int j = std::max(1, static_cast<int>(std::llround(plan.contribution[f] * total[f] / (unit * anchor_total))));
        j = std::max(j, static_cast<int>(std::ceil(total[f] / anchor_total)));
        if (total[f] >= 2.0 * kMinItemTotal) {
            j = std::min(j, static_cast<int>(std::floor(total[f] / kMinItemTotal)));
        }
        plan.item_counts[f] = std::max(1, j);
    }
    return plan;
}

/// Emits per-record item lists. Items within a rung are dealt per class in
/// round-robin order so each item's class mix matches the rung's.
template <typename MakeItem, typename Push>
void emit_lists(const LadderPlan& plan, const std::vector<int>& labels, MakeItem make_item, Push push) {
    const std::size_t rungs = plan.contribution.size();
    std::vector<std::array<int, 2>> counters(rungs, {0, 0});
    for (std::size_t r = 0; r < plan.per_record.size(); ++r) {
        const int cls = labels[r];
        for (std::size_t f = 0; f < rungs; ++f) {
            for (int k = 0; k < plan.per_record[r][f]; ++k) {
                const int item = counters[f][cls]++ % plan.item_counts[f];
                push(r, make_item(f, item));
            }
        }
    }
}

}  // namespace

std::vector<DomainRecord> generate(const GeneratorSpec& spec) {
    Rng rng(mix_seed(spec.seed, 0));

    const std::size_t n = static_cast<std::size_t>(spec.n_records);
    std::vector<int> labels(n);
    std::vector<TargetVector> targets(n);
    std::vector<DomainRecord> records(n);

    std::int64_t ip_serial = 0;
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = rng.uniform() < spec.malicious_fraction ? 1 : 0;
        const ClassStats& stats = labels[i] == 1 ? spec.malicious : spec.benign;
        targets[i] = draw_targets(stats, spec.snapshots, rng);

        DomainRecord& r = records[i];
        r.label = labels[i] == 1 ? Label::Malicious : Label::Benign;
        r.domain = realize_domain(targets[i].length, targets[i].consecutive, targets[i].entropy, rng);
        r.url = "http://" + r.domain + "/";
        r.dns = realize_dns(targets[i], spec.snapshots, rng, ip_serial);
        r.whois = realize_whois(targets[i], rng);
        r.pdns_change_count = targets[i].pdns_changes;
        r.certificate = realize_certificate(targets[i], rng);
        r.communication = CommunicationProfile{};
    }

    // communication lists are planned over the whole batch
    std::vector<double> ccr_targets(n), car_targets(n);
    for (std::size_t i = 0; i < n; ++i) {
        ccr_targets[i] = targets[i].ccr;
        car_targets[i] = targets[i].car;
    }

    const LadderPlan country_plan = plan_ladder(ccr_targets, labels, {512.0, 64.0, 8.0, 1.0}, kDefaultRankEpsilon);
    emit_lists(
        country_plan, labels,
        [](std::size_t f, int item) { return "z" + std::string(1, static_cast<char>('a' + f)) + std::to_string(item); },
        [&](std::size_t r, std::string item) { records[r].communication->countries.push_back(std::move(item)); });

    const LadderPlan asn_plan = plan_ladder(car_targets, labels, {2048.0, 256.0, 32.0, 4.0, 1.0}, kDefaultRankEpsilon);
    emit_lists(
        asn_plan, labels,
        [](std::size_t f, int item) { return static_cast<std::int64_t>(100000 * (f + 1) + item); },
        [&](std::size_t r, std::int64_t item) { records[r].communication->asns.push_back(item); });

    return records;
}

}  // namespace urldet
