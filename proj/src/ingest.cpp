#include "netdesign/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "netdesign/csv.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::normal: return "normal";
        case Regime::surge: return "surge";
        case Regime::storm: return "storm";
    }
    return "?";
}

Regime regime_from_name(const std::string& name) {
    if (name == "normal") return Regime::normal;
    if (name == "surge") return Regime::surge;
    if (name == "storm") return Regime::storm;
    throw ValidationError("unknown regime label: " + name);
}

int RegimeConfig::total_days() const {
    int t = 0;
    for (const auto& r : regimes) t += r.days;
    return t;
}

void RegimeConfig::validate() const {
    const auto& nrm = at(Regime::normal);
    if (nrm.demand_multiplier != 1.0 || nrm.traveltime_multiplier != 1.0 ||
        nrm.reliability_shift != 0.0) {
        throw ValidationError("normal regime must have unit multipliers and zero shift");
    }
    if (at(Regime::surge).demand_multiplier <= 1.0)
        throw ValidationError("surge demand multiplier must exceed 1");
    if (at(Regime::storm).traveltime_multiplier <= 1.0)
        throw ValidationError("storm travel-time multiplier must exceed 1");
    if (at(Regime::storm).reliability_shift >= 0.0)
        throw ValidationError("storm reliability shift must be negative");
    if (cost_sigma <= 0.0) throw ValidationError("cost sigma must be positive");
    for (const auto& r : regimes) {
        if (r.days < 0) throw ValidationError("regime day count must be nonnegative");
        if (r.demand_multiplier <= 0.0 || r.traveltime_multiplier <= 0.0)
            throw ValidationError("regime multipliers must be positive");
    }
}

RegimeConfig RegimeConfig::sim_defaults() {
    RegimeConfig c;
    c.at(Regime::normal) = {67, 1.0, 1.0, 0.0};
    c.at(Regime::surge) = {24, 2.2, 1.1, -0.25};
    c.at(Regime::storm) = {9, 1.0, 1.8, -1.2};
    c.cost_sigma = 0.30;
    return c;
}

RegimeConfig RegimeConfig::cab_defaults() {
    RegimeConfig c;
    c.at(Regime::normal) = {93, 1.0, 1.0, 0.0};
    c.at(Regime::surge) = {18, 1.35, 1.1, -0.25};
    c.at(Regime::storm) = {9, 1.0, 1.8, -1.2};
    c.cost_sigma = 0.30;
    return c;
}

void NetworkData::validate() const {
    if (node_count <= 0) throw ValidationError("network must have at least one node");
    const std::size_t n = static_cast<std::size_t>(node_count);
    if (distances.rows() != n || distances.cols() != n ||
        flows_baseline.rows() != n || flows_baseline.cols() != n) {
        throw ValidationError("matrix dimensions do not match node count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (distances(i, i) != 0.0) throw ValidationError("distance diagonal must be zero");
        if (flows_baseline(i, i) != 0.0)
            throw ValidationError("baseline flow diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (distances(i, j) < 0.0) throw ValidationError("distances must be nonnegative");
            if (flows_baseline(i, j) < 0.0)
                throw ValidationError("baseline flows must be nonnegative");
            if (std::fabs(distances(i, j) - distances(j, i)) > 1e-9)
                throw ValidationError("distance matrix must be symmetric within 1e-9");
        }
    }
    std::set<int> seen;
    for (int h : candidate_hubs) {
        if (h < 0 || h >= node_count) throw ValidationError("candidate hub index out of range");
        if (!seen.insert(h).second) throw ValidationError("candidate hubs must be distinct");
    }
}

double NetworkData::mean_offdiag_flow() const {
    const std::size_t n = static_cast<std::size_t>(node_count);
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) sum += flows_baseline(i, j);
    return sum / static_cast<double>(n * (n - 1));
}

void HistoricalPanel::validate(int node_count, std::size_t hub_count) const {
    if (days <= 0) throw ValidationError("panel must contain at least one day");
    const std::size_t t = static_cast<std::size_t>(days);
    if (demand.size() != t || travel_time.size() != t || cost_multiplier.size() != t ||
        hub_reliability.size() != t || regimes.size() != t) {
        throw ValidationError("panel component lengths disagree");
    }
    const std::size_t n = static_cast<std::size_t>(node_count);
    for (std::size_t d = 0; d < t; ++d) {
        if (demand[d].rows() != n || travel_time[d].rows() != n)
            throw ValidationError("panel matrix dimension mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            if (demand[d](i, i) != 0) throw ValidationError("demand diagonal must be zero");
            for (std::size_t j = 0; j < n; ++j) {
                if (demand[d](i, j) < 0) throw ValidationError("demand must be nonnegative");
                if (i != j && travel_time[d](i, j) <= 0.0)
                    throw ValidationError("travel times must be positive off-diagonal");
            }
        }
        if (hub_reliability[d].size() != hub_count)
            throw ValidationError("reliability observations must cover every hub");
        for (const auto& obs : hub_reliability[d]) {
            if (obs.trials < 0 || obs.successes < 0 || obs.successes > obs.trials)
                throw ValidationError("reliability successes must not exceed trials");
        }
        if (cost_multiplier[d] <= 0.0)
            throw ValidationError("cost multipliers must be positive");
    }
}

namespace {

struct Token {
    std::string text;
    std::size_t offset;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        tokens.push_back({text.substr(start, i - start), start});
    }
    return tokens;
}

bool parse_number(const std::string& s, double& out) {
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size() && end != begin;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

long long binomial(Substream& rng, long long trials, double p) {
    long long s = 0;
    for (long long i = 0; i < trials; ++i)
        if (rng.uniform() < p) ++s;
    return s;
}

// Largest-remainder allocation of `days` across regimes proportional to
// the configured day counts.
std::array<int, 3> allocate_days(const RegimeConfig& regime, int days) {
    const int total = regime.total_days();
    if (total <= 0) throw ValidationError("regime day counts must sum to a positive total");
    std::array<int, 3> out{};
    std::array<double, 3> rem{};
    int assigned = 0;
    for (int r = 0; r < 3; ++r) {
        double exact = static_cast<double>(days) * regime.regimes[r].days / total;
        out[r] = static_cast<int>(std::floor(exact));
        rem[r] = exact - out[r];
        assigned += out[r];
    }
    while (assigned < days) {
        int best = 0;
        for (int r = 1; r < 3; ++r)
            if (rem[r] > rem[best]) best = r;
        ++out[best];
        rem[best] = -1.0;
        ++assigned;
    }
    return out;
}

}  // namespace

NetworkData parse_cab(const std::string& raw_text, const std::vector<int>& subset,
                      double target_mean_demand, int full_n) {
    if (subset.empty()) throw ValidationError("subset must not be empty");
    std::set<int> seen;
    for (int label : subset) {
        if (label < 1 || label > full_n)
            throw ValidationError("subset label out of range 1.." + std::to_string(full_n) +
                                  ": " + std::to_string(label));
        if (!seen.insert(label).second)
            throw ValidationError("duplicate subset label: " + std::to_string(label));
    }

    const std::vector<Token> tokens = tokenize(raw_text);
    const std::size_t need = 2 * static_cast<std::size_t>(full_n) * full_n;

    // Numeric suffix: everything after the last non-numeric token.
    std::vector<double> values(tokens.size());
    std::size_t start = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!parse_number(tokens[i].text, values[i])) start = i + 1;
    }
    std::size_t count = tokens.size() - start;
    if (count == need + 1 && values[start] == static_cast<double>(full_n)) {
        ++start;  // node-count header token, present in some mirrors
        --count;
    }
    if (count < need) {
        throw ParseError("expected " + std::to_string(need) + " numeric tokens, found " +
                             std::to_string(count),
                         raw_text.size());
    }
    if (count > need) {
        const Token& extra = tokens[start + need];
        throw ParseError("unexpected extra token '" + extra.text + "'", extra.offset);
    }

    DMatrix full_flows = DMatrix::square(full_n);
    DMatrix full_dist = DMatrix::square(full_n);
    std::size_t p = start;
    for (int i = 0; i < full_n; ++i)
        for (int j = 0; j < full_n; ++j) full_flows(i, j) = values[p++];
    for (int i = 0; i < full_n; ++i)
        for (int j = 0; j < full_n; ++j) full_dist(i, j) = values[p++];

    const int n = static_cast<int>(subset.size());
    NetworkData net;
    net.node_count = n;
    net.distances = DMatrix::square(n);
    net.flows_baseline = DMatrix::square(n);
    net.node_labels.reserve(subset.size());
    for (int a = 0; a < n; ++a) {
        net.node_labels.push_back(std::to_string(subset[a]));
        for (int b = 0; b < n; ++b) {
            const int si = subset[a] - 1;
            const int sj = subset[b] - 1;
            net.distances(a, b) = full_dist(si, sj);
            net.flows_baseline(a, b) = (a == b) ? 0.0 : full_flows(si, sj);
        }
        net.distances(a, a) = 0.0;
    }

    const double mean = net.mean_offdiag_flow();
    net.demand_scale = (mean > 0.0) ? target_mean_demand / mean : 1.0;
    for (auto& v : net.flows_baseline.data()) v *= net.demand_scale;

    net.validate();
    return net;
}

std::pair<NetworkData, HistoricalPanel> synth_environment(std::uint64_t seed,
                                                          const RegimeConfig& regime,
                                                          const SynthConfig& cfg) {
    regime.validate();
    if (regime.total_days() <= 0) throw ValidationError("total days must be positive");

    const int n = cfg.nodes;
    NetworkData net;
    net.node_count = n;
    net.distances = DMatrix::square(n);
    net.flows_baseline = DMatrix::square(n);

    Substream geo(seed, Substream::kGeometry, 0);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = geo.uniform() * cfg.box_scale;
        y[i] = geo.uniform() * cfg.box_scale;
    }
    // Candidate hubs anchor three spread regions (jittered per seed) so the
    // hub set covers the demand field instead of landing in one corner.
    constexpr double anchors[3][2] = {{0.25, 0.30}, {0.75, 0.35}, {0.50, 0.78}};
    for (std::size_t k = 0; k < cfg.candidate_hubs_1based.size(); ++k) {
        const int node = cfg.candidate_hubs_1based[k] - 1;
        const auto& a = anchors[k % 3];
        x[node] = (a[0] + 0.12 * (geo.uniform() - 0.5)) * cfg.box_scale;
        y[node] = (a[1] + 0.12 * (geo.uniform() - 0.5)) * cfg.box_scale;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            net.distances(i, j) = std::sqrt(dx * dx + dy * dy);
        }
    }
    // Exact symmetry, not just within fp rounding of sqrt.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) net.distances(j, i) = net.distances(i, j);

    Substream field(seed, Substream::kGeometry, 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                net.flows_baseline(i, j) =
                    cfg.demand_base * std::exp(field.normal(0.0, cfg.demand_log_sd));

    for (int h : cfg.candidate_hubs_1based) net.candidate_hubs.push_back(h - 1);
    for (int i = 0; i < n; ++i) net.node_labels.push_back(std::to_string(i + 1));
    net.validate();

    HistoricalPanel panel =
        build_pseudo_panel(net, seed, regime, regime.total_days(), cfg.gen);
    return {std::move(net), std::move(panel)};
}

HistoricalPanel build_pseudo_panel(const NetworkData& network, std::uint64_t seed,
                                   const RegimeConfig& regime, int days,
                                   const PanelGenConfig& gen) {
    if (days <= 0) throw ValidationError("panel days must be positive");
    network.validate();
    regime.validate();

    const int n = network.node_count;
    const std::size_t hubs = network.candidate_hubs.size();
    const std::array<int, 3> counts = allocate_days(regime, days);

    HistoricalPanel panel;
    panel.days = days;
    panel.regimes.reserve(days);
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < counts[r]; ++k) panel.regimes.push_back(static_cast<Regime>(r));

    const double base_logit = logit(gen.reliability_base);
    panel.demand.reserve(days);
    panel.travel_time.reserve(days);

    for (int t = 0; t < days; ++t) {
        const RegimeParams& rp = regime.at(panel.regimes[t]);
        IMatrix dem = IMatrix::square(n);
        DMatrix tau = DMatrix::square(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const std::uint64_t od = static_cast<std::uint64_t>(i) * n + j;
                Substream ds(seed, Substream::kDemand, static_cast<std::uint64_t>(t), od);
                dem(i, j) = ds.poisson(network.flows_baseline(i, j) * rp.demand_multiplier);
                Substream ts(seed, Substream::kTravelTime, static_cast<std::uint64_t>(t), od);
                const double median =
                    (network.distances(i, j) / gen.speed) * rp.traveltime_multiplier;
                tau(i, j) = ts.lognormal(std::log(median), gen.travel_log_sd);
            }
        }
        panel.demand.push_back(std::move(dem));
        panel.travel_time.push_back(std::move(tau));

        std::vector<ReliabilityObs> obs(hubs);
        const double p = logistic(base_logit + rp.reliability_shift);
        for (std::size_t h = 0; h < hubs; ++h) {
            Substream rs(seed, Substream::kReliability, static_cast<std::uint64_t>(t), h);
            obs[h] = {binomial(rs, gen.reliability_trials, p), gen.reliability_trials};
        }
        panel.hub_reliability.push_back(std::move(obs));

        Substream cs(seed, Substream::kCost, static_cast<std::uint64_t>(t), 0);
        panel.cost_multiplier.push_back(cs.lognormal(0.0, regime.cost_sigma));
    }

    panel.validate(n, hubs);
    return panel;
}

void export_panel(const HistoricalPanel& panel, const std::string& stem,
                  const std::string& manifest_ref) {
    {
        CsvWriter w(stem + "_od.csv", manifest_ref,
                    {"day", "origin", "destination", "demand", "travel_time"});
        const std::size_t n = panel.demand.empty() ? 0 : panel.demand[0].rows();
        for (int t = 0; t < panel.days; ++t)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    w.cell(t).cell(i).cell(j).cell(panel.demand[t](i, j));
                    w.cell_full(panel.travel_time[t](i, j));
                    w.end_row();
                }
    }
    {
        CsvWriter w(stem + "_cost.csv", manifest_ref, {"day", "cost_multiplier"});
        for (int t = 0; t < panel.days; ++t) {
            w.cell(t).cell_full(panel.cost_multiplier[t]);
            w.end_row();
        }
    }
    {
        CsvWriter w(stem + "_reliability.csv", manifest_ref,
                    {"day", "hub", "successes", "trials"});
        for (int t = 0; t < panel.days; ++t)
            for (std::size_t h = 0; h < panel.hub_reliability[t].size(); ++h) {
                const auto& obs = panel.hub_reliability[t][h];
                w.cell(t).cell(h).cell(obs.successes).cell(obs.trials);
                w.end_row();
            }
    }
    {
        CsvWriter w(stem + "_regimes.csv", manifest_ref, {"day", "regime"});
        for (int t = 0; t < panel.days; ++t) {
            w.cell(t).cell(regime_name(panel.regimes[t]));
            w.end_row();
        }
    }
}

HistoricalPanel import_panel(const std::string& stem, int node_count,
                             std::size_t hub_count) {
    HistoricalPanel panel;
    const auto regimes = read_csv(stem + "_regimes.csv");
    panel.days = static_cast<int>(regimes.size()) - 1;
    if (panel.days <= 0) throw ValidationError("panel regime file is empty");
    panel.regimes.reserve(panel.days);
    for (std::size_t r = 1; r < regimes.size(); ++r)
        panel.regimes.push_back(regime_from_name(regimes[r][1]));

    panel.demand.assign(panel.days, IMatrix::square(node_count));
    panel.travel_time.assign(panel.days, DMatrix::square(node_count));
    for (const auto& row : read_csv(stem + "_od.csv")) {
        if (row[0] == "day") continue;
        const int t = std::stoi(row[0]);
        const int i = std::stoi(row[1]);
        const int j = std::stoi(row[2]);
        panel.demand[t](i, j) = std::stoll(row[3]);
        panel.travel_time[t](i, j) = std::stod(row[4]);
    }

    panel.cost_multiplier.assign(panel.days, 1.0);
    for (const auto& row : read_csv(stem + "_cost.csv")) {
        if (row[0] == "day") continue;
        panel.cost_multiplier[std::stoi(row[0])] = std::stod(row[1]);
    }

    panel.hub_reliability.assign(panel.days, std::vector<ReliabilityObs>(hub_count));
    for (const auto& row : read_csv(stem + "_reliability.csv")) {
        if (row[0] == "day") continue;
        panel.hub_reliability[std::stoi(row[0])][std::stoul(row[1])] = {std::stoll(row[2]),
                                                                        std::stoll(row[3])};
    }

    panel.validate(node_count, hub_count);
    return panel;
}

}  // namespace netdesign
