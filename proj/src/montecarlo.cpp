#include "gosx/montecarlo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "gosx/emit.hpp"
#include "gosx/errors.hpp"
#include "gosx/limit_laws.hpp"

namespace gosx {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    return mix64(x);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::string lowercase(const std::string& s) {
    std::string out;
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(s);
    while (std::getline(is, cell, sep)) out.push_back(cell);
    return out;
}

// Lower ranks (1-based) to extract from a sample of size nu.
struct Picks {
    int first;
    int second;
};

Picks picks_for(const SimConfig& cfg, int nu) {
    if (cfg.statistic != SimStatistic::pair) return {1, nu};
    const int r = cfg.ranks.r;
    const int s = cfg.ranks.s;
    switch (cfg.ranks.regime) {
        case Regime::upper_upper: return {nu - r + 1, nu - s + 1};
        case Regime::lower_lower: return {r, s};
        case Regime::lower_upper: return {r, nu - s + 1};
    }
    return {1, nu};
}

int min_sample_size(const SimConfig& cfg) {
    if (cfg.statistic != SimStatistic::pair) return 2;
    return cfg.ranks.max_rank() + 1;
}

struct Normalizer {
    SimConfig const* cfg;
    NormingConstants nc;
    RangeNormalization rn;

    // Returns the normalized (first, second); second unused for ranges.
    std::pair<double, double> apply(double lo_value, double hi_value) const {
        switch (cfg->statistic) {
            case SimStatistic::range: return {(hi_value - lo_value - rn.shift) / rn.scale, 0.0};
            case SimStatistic::midrange: return {(0.5 * (hi_value + lo_value) - rn.shift) / rn.scale, 0.0};
            case SimStatistic::pair: break;
        }
        switch (cfg->ranks.regime) {
            case Regime::upper_upper: return {(lo_value - nc.b) / nc.a, (hi_value - nc.b) / nc.a};
            case Regime::lower_lower: return {(lo_value - nc.d) / nc.c, (hi_value - nc.d) / nc.c};
            case Regime::lower_upper: return {(lo_value - nc.d) / nc.c, (hi_value - nc.b) / nc.a};
        }
        return {0.0, 0.0};
    }
};

// ln of a Beta(a, b) variate; b = 0 gives the point mass at 1.
double log_beta_draw(double a, double b, Rng& rng) {
    if (b == 0.0) return 0.0;
    const double ga = std::gamma_distribution<double>(a)(rng);
    const double gb = std::gamma_distribution<double>(b)(rng);
    return -std::log1p(gb / ga);
}

// One replication: draws nu and returns the normalized pair.
std::pair<double, double> replicate(const SimConfig& cfg, const Normalizer& norm, std::uint64_t rep) {
    Rng rng(cfg.seed, rep);
    double aux = 0.0;
    const int nu = sample_random_index(cfg.index, cfg.params.n, min_sample_size(cfg), rng, &aux);
    const Picks pk = picks_for(cfg, nu);
    const double ell = cfg.params.ell();
    const double m1 = cfg.params.m + 1.0;
    const double w = cfg.index.mode == IndexMode::dependent ? aux : rng.uniform();
    // ln Lbar_m at the two lower ranks, pk.first < pk.second
    const double log_first = std::log(w) / (ell + nu - 1.0) + log_beta_draw(ell + nu - pk.first, pk.first - 1.0, rng);
    const double log_second = log_first + log_beta_draw(ell + nu - pk.second, pk.second - pk.first, rng);
    return norm.apply(cfg.model.from_log_survival(log_first / m1), cfg.model.from_log_survival(log_second / m1));
}

void check_setup(const SimConfig& cfg) {
    cfg.params.validate();
    cfg.index.validate();
    if (cfg.replications < 1) throw DomainError("replications must be at least 1");
    if (cfg.threads < 0) throw DomainError("threads must be nonnegative");
    if (cfg.statistic == SimStatistic::pair) cfg.ranks.validate(cfg.params.n);
}

// Runs body(rep) for every replication over contiguous per-thread chunks.
template <class Body>
void for_each_replication(const SimConfig& cfg, const Body& body) {
    const std::uint64_t reps = static_cast<std::uint64_t>(cfg.replications);
    int threads = cfg.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : cfg.threads;
    threads = std::clamp<int>(threads, 1, static_cast<int>(std::min<std::uint64_t>(reps, 256)));
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](int t) {
        try {
            const std::uint64_t begin = reps * t / threads;
            const std::uint64_t end = reps * (t + 1) / threads;
            for (std::uint64_t rep = begin; rep < end; ++rep) body(t, rep);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

Normalizer make_normalizer(const SimConfig& cfg) {
    Normalizer norm{&cfg, norming_constants(cfg.model, cfg.params), {}};
    if (cfg.statistic != SimStatistic::pair) {
        norm.rn = range_normalization(cfg.model, cfg.params,
                                      cfg.statistic == SimStatistic::range ? RangeStatistic::range
                                                                           : RangeStatistic::midrange);
    }
    return norm;
}

std::vector<std::uint64_t> tally(const SimConfig& cfg, const Normalizer& norm) {
    const int slots = std::max(cfg.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : cfg.threads, 1);
    std::vector<std::vector<std::uint64_t>> partial(std::min(slots, 256), std::vector<std::uint64_t>(cfg.grid.size(), 0));
    const bool two_d = cfg.statistic == SimStatistic::pair;
    for_each_replication(cfg, [&](int t, std::uint64_t rep) {
        const auto [z1, z2] = replicate(cfg, norm, rep);
        auto& counts = partial[t];
        for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
            if (z1 <= cfg.grid[g].x && (!two_d || z2 <= cfg.grid[g].y)) ++counts[g];
        }
    });
    std::vector<std::uint64_t> counts(cfg.grid.size(), 0);
    for (const auto& p : partial) {
        for (std::size_t g = 0; g < counts.size(); ++g) counts[g] += p[g];
    }
    return counts;
}

double analytic_point(const SimConfig& cfg, const IndexLaw& law, const GridPoint& pt) {
    if (cfg.statistic != SimStatistic::pair) {
        const RangeStatistic st =
            cfg.statistic == SimStatistic::range ? RangeStatistic::range : RangeStatistic::midrange;
        return range_statistic_df(make_range_query(cfg.model, cfg.params, law, st, cfg.range_route), pt.x);
    }
    auto up = [&] { return cfg.model.attraction(ExtremeSide::upper); };
    auto low = [&] { return cfg.model.attraction(ExtremeSide::lower); };
    MixtureQuery q{cfg.params, cfg.ranks, {}, law};
    switch (cfg.ranks.regime) {
        case Regime::upper_upper: q.point = {kappa(up(), pt.x), kappa(up(), pt.y)}; break;
        case Regime::lower_lower: q.point = {rho(low(), pt.x), rho(low(), pt.y)}; break;
        case Regime::lower_upper: q.point = {rho(low(), pt.x), kappa(up(), pt.y)}; break;
    }
    return mixture(q);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = mix64(seed ^ 0x6A09E667F3BCC909ULL) ^ mix64(stream + 0x9E3779B97F4A7C15ULL);
    for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

IndexSpec IndexSpec::parse(const std::string& text) {
    const auto parts = split(lowercase(text), ':');
    if (parts.empty()) throw DomainError("empty index specification");
    IndexSpec spec;
    if (parts[0] == "fixed" && parts.size() == 1) {
        spec.mode = IndexMode::fixed;
    } else if (parts[0] == "geometric" && parts.size() == 1) {
        spec.mode = IndexMode::geometric;
    } else if (parts[0] == "dependent" && (parts.size() == 2 || parts.size() == 3)) {
        spec.mode = IndexMode::dependent;
        spec.t_low = parse_real(parts[1]);
        spec.t_high = parts.size() == 3 ? parse_real(parts[2]) : spec.t_low;
    } else {
        throw DomainError("unknown index mode '" + text + "' (expected fixed, geometric, dependent:c or dependent:a:b)");
    }
    spec.validate();
    return spec;
}

std::string IndexSpec::describe() const {
    switch (mode) {
        case IndexMode::fixed: return "fixed";
        case IndexMode::geometric: return "geometric";
        case IndexMode::dependent:
            if (t_low == t_high) return "dependent:" + format_number(t_low);
            return "dependent:" + format_number(t_low) + ":" + format_number(t_high);
    }
    return "?";
}

void IndexSpec::validate() const {
    if (mode != IndexMode::dependent) return;
    if (!(t_low > 0.0) || !std::isfinite(t_high) || !(t_high >= t_low)) {
        throw DomainError("dependent index needs 0 < a <= b < inf");
    }
}

IndexLaw IndexSpec::limit_law() const {
    switch (mode) {
        case IndexMode::fixed: return IndexLaw::degenerate(1.0);
        case IndexMode::geometric: return IndexLaw::unit_exponential();
        case IndexMode::dependent:
            if (t_low == t_high) return IndexLaw::degenerate(t_low);
            return IndexLaw::tabulated({{0.0, 0.0}, {t_low, 0.0}, {t_high, 1.0}});
    }
    return IndexLaw::degenerate(1.0);
}

std::vector<double> sample_uniform_gos(const GosParams& params, int size, Rng& rng) {
    params.validate();
    if (size < 1) throw DomainError("sample size must be at least 1");
    const double m1 = params.m + 1.0;
    std::vector<double> out(size);
    double log_surv = 0.0;
    for (int j = 1; j <= size; ++j) {
        log_surv += std::log(rng.uniform()) / (params.k + (size - j) * m1);
        out[j - 1] = -std::expm1(log_surv);
    }
    return out;
}

int sample_random_index(const IndexSpec& spec, int n, int min_size, Rng& rng, double* aux) {
    if (n < 2) throw DomainError("sample_random_index needs n >= 2");
    spec.validate();
    int nu = n;
    switch (spec.mode) {
        case IndexMode::fixed: return n;
        case IndexMode::geometric: {
            const double u = rng.uniform();
            const double draw = 1.0 + std::floor(std::log(u) / std::log1p(-1.0 / n));
            nu = static_cast<int>(std::min(draw, 2e9));
            break;
        }
        case IndexMode::dependent: {
            const double v = rng.uniform();
            if (aux) *aux = v;
            const double t = spec.t_low + (spec.t_high - spec.t_low) * v;
            nu = static_cast<int>(std::ceil(n * t));
            break;
        }
    }
    return std::max(nu, min_size);
}

std::string to_string(SimStatistic statistic) {
    switch (statistic) {
        case SimStatistic::pair: return "pair";
        case SimStatistic::range: return "range";
        case SimStatistic::midrange: return "midrange";
    }
    return "?";
}

SimStatistic parse_sim_statistic(const std::string& text) {
    const std::string t = lowercase(text);
    if (t == "pair") return SimStatistic::pair;
    if (t == "range") return SimStatistic::range;
    if (t == "midrange") return SimStatistic::midrange;
    throw DomainError("unknown statistic '" + text + "' (expected pair, range or midrange)");
}

void SimConfig::validate() const {
    check_setup(*this);
    if (grid.empty()) throw DomainError("evaluation grid is empty");
}

std::vector<GridPoint> simulate_normalized(const SimConfig& config) {
    check_setup(config);
    const Normalizer norm = make_normalizer(config);
    std::vector<GridPoint> out(static_cast<std::size_t>(config.replications));
    for_each_replication(config, [&](int, std::uint64_t rep) {
        const auto [z1, z2] = replicate(config, norm, rep);
        out[rep] = {z1, z2};
    });
    return out;
}

std::vector<double> simulate_empirical_df(const SimConfig& config) {
    config.validate();
    const Normalizer norm = make_normalizer(config);
    const auto counts = tally(config, norm);
    std::vector<double> out(counts.size());
    for (std::size_t g = 0; g < counts.size(); ++g) {
        out[g] = static_cast<double>(counts[g]) / config.replications;
    }
    return out;
}

SimulationReport run_bivariate_sim(const SimConfig& config) {
    config.validate();
    SimulationReport rep;
    rep.config = config;
    const Normalizer norm = make_normalizer(config);
    rep.norming = norm.nc;
    rep.range_norm = norm.rn;
    rep.empirical = simulate_empirical_df(config);

    const IndexLaw law = config.index.limit_law();
    const IndexLaw fixed = IndexLaw::degenerate(1.0);
    const double reps = config.replications;
    for (std::size_t g = 0; g < config.grid.size(); ++g) {
        const double p = rep.empirical[g];
        rep.analytic.push_back(analytic_point(config, law, config.grid[g]));
        rep.fixed_limit.push_back(analytic_point(config, fixed, config.grid[g]));
        rep.standard_error.push_back(std::sqrt(p * (1.0 - p) / reps));
    }
    rep.sup_distance = ks_distance(rep.empirical, rep.analytic);
    rep.sup_distance_fixed = ks_distance(rep.empirical, rep.fixed_limit);
    rep.max_standard_error = *std::max_element(rep.standard_error.begin(), rep.standard_error.end());
    return rep;
}

double ks_distance(const std::vector<double>& empirical, const std::vector<double>& analytic) {
    if (empirical.size() != analytic.size()) throw DomainError("ks_distance: grids differ in shape");
    double d = 0.0;
    for (std::size_t i = 0; i < empirical.size(); ++i) d = std::max(d, std::fabs(empirical[i] - analytic[i]));
    return d;
}

std::string SimulationReport::to_json() const {
    nlohmann::json cfg;
    cfg["model"] = config.model.spec();
    cfg["m"] = json_number(config.params.m);
    cfg["k"] = json_number(config.params.k);
    cfg["n"] = config.params.n;
    cfg["statistic"] = to_string(config.statistic);
    if (config.statistic == SimStatistic::pair) {
        cfg["regime"] = to_string(config.ranks.regime);
        cfg["r"] = config.ranks.r;
        cfg["s"] = config.ranks.s;
    } else {
        cfg["route"] = to_string(config.range_route);
    }
    cfg["index"] = config.index.describe();
    cfg["index_law"] = config.index.limit_law().describe();
    cfg["replications"] = config.replications;
    cfg["seed"] = config.seed;
    nlohmann::json nc;
    nc["a"] = json_number(norming.a);
    nc["b"] = json_number(norming.b);
    nc["c"] = json_number(norming.c);
    nc["d"] = json_number(norming.d);
    cfg["norming"] = nc;
    if (config.statistic != SimStatistic::pair) {
        cfg["range_scale"] = json_number(range_norm.scale);
        cfg["range_shift"] = json_number(range_norm.shift);
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : config.grid) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    nlohmann::json doc;
    if (!command.empty()) doc["command"] = command;
    doc["config"] = cfg;
    doc["seed"] = config.seed;
    doc["x"] = json_numbers(xs);
    if (config.statistic == SimStatistic::pair) doc["y"] = json_numbers(ys);
    doc["empirical_df"] = json_numbers(empirical);
    doc["analytic_df"] = json_numbers(analytic);
    doc["fixed_limit_df"] = json_numbers(fixed_limit);
    doc["standard_errors"] = json_numbers(standard_error);
    doc["sup_distance"] = json_number(sup_distance);
    doc["sup_distance_fixed"] = json_number(sup_distance_fixed);
    doc["max_standard_error"] = json_number(max_standard_error);
    return doc.dump(2) + "\n";
}

std::string SimulationReport::to_csv() const {
    std::ostringstream os;
    const bool pair = config.statistic == SimStatistic::pair;
    if (!command.empty()) os << "# " << command << "\n";
    os << (pair ? "x,y," : "x,") << "empirical,analytic,fixed_limit,standard_error\n";
    for (std::size_t g = 0; g < config.grid.size(); ++g) {
        os << format_number(config.grid[g].x) << ",";
        if (pair) os << format_number(config.grid[g].y) << ",";
        os << format_number(empirical[g]) << "," << format_number(analytic[g]) << ","
           << format_number(fixed_limit[g]) << "," << format_number(standard_error[g]) << "\n";
    }
    return os.str();
}

}  // namespace gosx
