#pragma once

// Simulation of extreme m-GOS under fixed or random sample size.
//
// Extremes are drawn without generating the full sample: with c = ell + nu - p
// the value Lbar_m at lower rank p is W^{1/(ell+nu-1)} times a Beta(c, p - 1)
// variate, and moving up from rank p to q multiplies by an independent
// Beta(ell + nu - q, q - p) variate.
//
// Every replication owns an independent generator stream derived from
// (seed, replication index), and grid tallies are integers, so a report is a
// pure function of its configuration regardless of the thread count.

#include <cstdint>
#include <string>
#include <vector>

#include "gosx/distributions.hpp"
#include "gosx/gos.hpp"
#include "gosx/params.hpp"
#include "gosx/random_index.hpp"
#include "gosx/ranges.hpp"

namespace gosx {

/// xoshiro256** seeded through SplitMix64. Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }

    std::uint64_t next();
    /// Uniform on the open interval (0, 1).
    double uniform();

private:
    std::uint64_t state_[4];
};

enum class IndexMode { fixed, geometric, dependent };

/// How nu_n is drawn. For the dependent mode T is uniform on [t_low, t_high]
/// (degenerate when equal) and nu_n = max(min_size, ceil(n T)).
struct IndexSpec {
    IndexMode mode = IndexMode::fixed;
    double t_low = 1.0;
    double t_high = 1.0;

    /// `fixed`, `geometric`, `dependent:c` or `dependent:a:b`.
    static IndexSpec parse(const std::string& text);
    std::string describe() const;
    void validate() const;
    /// Weak limit H of nu_n / n.
    IndexLaw limit_law() const;
};

/// Ascending uniform m-GOS sample U(1) <= ... <= U(size).
std::vector<double> sample_uniform_gos(const GosParams& params, int size, Rng& rng);

/// Draw nu_n, at least min_size. The dependent mode consumes one uniform
/// which the caller may reuse; it is returned through aux when non-null.
int sample_random_index(const IndexSpec& spec, int n, int min_size, Rng& rng, double* aux = nullptr);

enum class SimStatistic { pair, range, midrange };

std::string to_string(SimStatistic statistic);
SimStatistic parse_sim_statistic(const std::string& text);

struct GridPoint {
    double x = 0.0;
    double y = 0.0;  // unused for range and midrange

    bool operator==(const GridPoint&) const = default;
};

struct SimConfig {
    GosParams params;
    DistributionModel model = DistributionModel::exponential(1.0);
    RankPair ranks;
    IndexSpec index;
    int replications = 10000;
    std::uint64_t seed = 1;
    std::vector<GridPoint> grid;
    SimStatistic statistic = SimStatistic::pair;
    RangeRoute range_route = RangeRoute::mixture;
    /// Worker threads; 0 picks the hardware concurrency. Does not affect results.
    int threads = 1;

    void validate() const;
};

struct SimulationReport {
    SimConfig config;
    NormingConstants norming;
    RangeNormalization range_norm;  // meaningful for range and midrange
    std::vector<double> empirical;
    std::vector<double> analytic;
    std::vector<double> fixed_limit;
    std::vector<double> standard_error;
    double sup_distance = 0.0;
    double sup_distance_fixed = 0.0;
    double max_standard_error = 0.0;
    /// Resolved command line, echoed when non-empty.
    std::string command;

    std::string to_json() const;
    std::string to_csv() const;
};

/// Empirical df of the normalized extremes on the grid, with the random-index
/// limit (analytic) and the fixed-size limit (fixed_limit) alongside.
SimulationReport run_bivariate_sim(const SimConfig& config);

/// Empirical df only; no analytic evaluation.
std::vector<double> simulate_empirical_df(const SimConfig& config);

/// Normalized (first, second) per replication in replication order; second
/// is unused for range and midrange. The grid is ignored.
std::vector<GridPoint> simulate_normalized(const SimConfig& config);

/// max |a_i - b_i|
double ks_distance(const std::vector<double>& empirical, const std::vector<double>& analytic);

}  // namespace gosx
