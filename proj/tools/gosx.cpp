// gosx: exact, limit and random-index distribution functions of extreme
// m-GOS pairs, Monte Carlo checks, and range/midrange reproductions.
//
// Exit status: 0 success, 1 usage error, 2 validation or numerical failure.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gosx/distributions.hpp"
#include "gosx/emit.hpp"
#include "gosx/errors.hpp"
#include "gosx/gos.hpp"
#include "gosx/limit_laws.hpp"
#include "gosx/montecarlo.hpp"
#include "gosx/random_index.hpp"
#include "gosx/ranges.hpp"
#include "gosx/selftest.hpp"

namespace {

using namespace gosx;

constexpr int kUsage = 1;
constexpr int kFailure = 2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest text that parses back to the same double.
std::string exact_text(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string shell_quote(const std::string& s) {
    const bool plain = !s.empty() && s.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._:/=+-,") == std::string::npos;
    if (plain) return s;
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

int parse_int(const std::string& text, const char* what) {
    const double v = parse_real(text);
    if (!std::isfinite(v) || v != std::floor(v) || std::fabs(v) > 2e9) {
        throw DomainError(std::string(what) + " must be an integer, got '" + text + "'");
    }
    return static_cast<int>(v);
}

std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw DomainError("seed must be a nonnegative integer, got '" + text + "'");
    }
    return v;
}

/// `min:max:count` or a single value.
struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    static Grid parse(const std::string& text) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string cell;
        while (std::getline(ss, cell, ':')) parts.push_back(cell);
        Grid g;
        if (parts.size() == 1) {
            g.lo = g.hi = parse_real(parts[0]);
            return g;
        }
        if (parts.size() != 3) throw DomainError("grid must be min:max:count or a single value, got '" + text + "'");
        g.lo = parse_real(parts[0]);
        g.hi = parse_real(parts[1]);
        g.count = parse_int(parts[2], "grid count");
        if (g.count < 1) throw DomainError("grid count must be at least 1");
        if (g.count > 1 && !(std::isfinite(g.lo) && std::isfinite(g.hi) && g.hi > g.lo)) {
            throw DomainError("grid needs finite min < max, got '" + text + "'");
        }
        return g;
    }

    std::vector<double> values() const {
        if (count == 1) return {lo};
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i) out[i] = i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
        return out;
    }

    std::string spec() const {
        if (count == 1) return exact_text(lo);
        return exact_text(lo) + ":" + exact_text(hi) + ":" + std::to_string(count);
    }
};

/// Resolved command line, rebuilt from parsed values in a fixed order.
class Echo {
public:
    explicit Echo(std::string verb) : text_("gosx " + std::move(verb)) {}
    void positional(const std::string& v) { text_ += " " + shell_quote(v); }
    void add(const std::string& flag, const std::string& v) { text_ += " --" + flag + " " + shell_quote(v); }
    void add(const std::string& flag, double v) { add(flag, exact_text(v)); }
    void add(const std::string& flag, int v) { add(flag, std::to_string(v)); }
    void flag(const std::string& flag) { text_ += " --" + flag; }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

// ------------------------------------------------------------ option sets

struct ModelOptions {
    std::string model = "exponential";
    std::string m = "0";
    std::string k = "1";
    std::string n = "100";

    void attach(CLI::App* app) {
        app->add_option("--model", model, "parent df, e.g. normal, pareto(sigma=2), beta(alpha=2,beta=2)")->capture_default_str();
        app->add_option("--m", m, "m > -1 (gamma_j - gamma_{j+1} = m + 1)")->capture_default_str();
        app->add_option("--k", k, "k > 0 (gamma_n = k)")->capture_default_str();
        app->add_option("--n", n, "sample size n >= 2")->capture_default_str();
    }

    DistributionModel resolved_model() const { return DistributionModel::parse(model); }
    GosParams resolved_params() const {
        GosParams p = make_params(parse_real(m), parse_real(k), parse_int(n, "n"));
        p.validate();
        return p;
    }
    void echo(Echo& e) const {
        const GosParams p = resolved_params();
        e.add("model", resolved_model().spec());
        e.add("m", p.m);
        e.add("k", p.k);
        e.add("n", p.n);
    }
};

struct RankOptions {
    std::string regime = "uu";
    std::string r = "2";
    std::string s = "1";

    void attach(CLI::App* app) {
        app->add_option("--regime", regime, "uu (upper-upper), ll (lower-lower) or lu (lower-upper)")->capture_default_str();
        app->add_option("--r", r, "first rank (upper ranks count from the top, s < r; ll needs r < s)")->capture_default_str();
        app->add_option("--s", s, "second rank")->capture_default_str();
    }

    RankPair resolved(int n) const {
        RankPair pair{parse_int(r, "r"), parse_int(s, "s"), parse_regime(regime)};
        pair.validate(n);
        return pair;
    }
    void echo(Echo& e, const RankPair& pair) const {
        e.add("regime", to_string(pair.regime));
        e.add("r", pair.r);
        e.add("s", pair.s);
    }
};

struct GridOptions {
    std::string x = "-2:4:41";
    std::string y = "-2:4:41";

    void attach(CLI::App* app, bool with_y = true) {
        app->add_option("--grid-x", x, "min:max:count or a single value")->capture_default_str();
        if (with_y) app->add_option("--grid-y", y, "min:max:count or a single value")->capture_default_str();
    }
};

struct OutputOptions {
    std::string format = "csv";
    std::string out;

    void attach(CLI::App* app) {
        app->add_option("--format", format, "csv or json")->capture_default_str();
        app->add_option("--out", out, "output file; relative paths resolve under $GOSX_OUTPUT_DIR when set");
    }
};

// ----------------------------------------------------------------- output

void write_output(const std::string& text, const OutputOptions& oo) {
    if (oo.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::filesystem::path path(oo.out);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("GOSX_OUTPUT_DIR"); dir && *dir) path = std::filesystem::path(dir) / path;
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw std::runtime_error("failed writing " + path.string());
    std::cerr << "wrote " << path.string() << "\n";
}

nlohmann::json params_json(const DistributionModel& model, const GosParams& p) {
    nlohmann::json j;
    j["model"] = model.spec();
    j["m"] = json_number(p.m);
    j["k"] = json_number(p.k);
    j["n"] = p.n;
    return j;
}

// Grid value to raw coordinate on the given side.
double denormalize(const NormingConstants& nc, ExtremeSide side, double v) {
    return side == ExtremeSide::upper ? nc.a * v + nc.b : nc.c * v + nc.d;
}

std::pair<ExtremeSide, ExtremeSide> regime_sides(Regime regime) {
    switch (regime) {
        case Regime::upper_upper: return {ExtremeSide::upper, ExtremeSide::upper};
        case Regime::lower_lower: return {ExtremeSide::lower, ExtremeSide::lower};
        case Regime::lower_upper: return {ExtremeSide::lower, ExtremeSide::upper};
    }
    return {ExtremeSide::upper, ExtremeSide::upper};
}

double transform(const DistributionModel& model, ExtremeSide side, double v) {
    const TailTransform tt = model.attraction(side);
    return side == ExtremeSide::upper ? kappa(tt, v) : rho(tt, v);
}

// ------------------------------------------------------------------ verbs

struct PairVerb {
    ModelOptions mo;
    RankOptions ro;
    GridOptions go;
    OutputOptions oo;
};

struct ExactVerb : PairVerb {
    bool raw = false;

    std::string run() const {
        const auto model = mo.resolved_model();
        const auto params = mo.resolved_params();
        const auto pair = ro.resolved(params.n);
        const Grid gx = Grid::parse(go.x);
        const Grid gy = Grid::parse(go.y);
        const Format format = parse_format(oo.format);
        if (pair.regime == Regime::lower_upper && !(pair.r < params.n - pair.s + 1)) {
            throw RegimeError("lu needs r < n - s + 1 so the lower member lies below the upper one");
        }
        const auto sides = regime_sides(pair.regime);
        NormingConstants nc;
        if (!raw) nc = norming_constants(model, params);

        Echo echo("exact");
        mo.echo(echo);
        ro.echo(echo, pair);
        echo.add("grid-x", gx.spec());
        echo.add("grid-y", gy.spec());
        if (raw) echo.flag("raw");
        echo.add("format", to_string(format));

        Table t;
        t.command = echo.str();
        t.columns = {"x", "y", "df"};
        t.config = params_json(model, params);
        t.config["regime"] = to_string(pair.regime);
        t.config["r"] = pair.r;
        t.config["s"] = pair.s;
        t.config["coordinates"] = raw ? "raw" : "normalized";
        if (!raw) t.config["norming"] = {{"a", json_number(nc.a)}, {"b", json_number(nc.b)}, {"c", json_number(nc.c)}, {"d", json_number(nc.d)}};
        for (double x : gx.values()) {
            for (double y : gy.values()) {
                const double X = raw ? x : denormalize(nc, sides.first, x);
                const double Y = raw ? y : denormalize(nc, sides.second, y);
                double df = 0.0;
                switch (pair.regime) {
                    case Regime::upper_upper: df = joint_upper_df(params, model, pair, X, Y); break;
                    case Regime::lower_lower: df = joint_df_direct(params, model, pair.r, pair.s, X, Y); break;
                    case Regime::lower_upper:
                        df = joint_df_direct(params, model, pair.r, params.n - pair.s + 1, X, Y);
                        break;
                }
                t.rows.push_back({x, y, df});
            }
        }
        return emit(t, format);
    }
};

struct LimitVerb : PairVerb {
    // Non-empty turns this into the mixture verb.
    std::string law;
    std::string lu_form = "product";
    bool mixing = false;

    std::string run() const {
        const auto model = mo.resolved_model();
        const auto params = mo.resolved_params();
        const auto pair = ro.resolved(0);
        const Grid gx = Grid::parse(go.x);
        const Grid gy = Grid::parse(go.y);
        const Format format = parse_format(oo.format);
        const auto sides = regime_sides(pair.regime);
        std::optional<IndexLaw> h;
        if (mixing) h = IndexLaw::parse(law);
        if (lu_form != "product" && lu_form != "joint") throw DomainError("--lu-form must be product or joint");

        Echo echo(mixing ? "mix" : "limit");
        echo.add("model", model.spec());
        echo.add("m", params.m);
        echo.add("k", params.k);
        ro.echo(echo, pair);
        if (mixing) {
            echo.add("H", law);
            if (pair.regime == Regime::lower_upper) echo.add("lu-form", lu_form);
        }
        echo.add("grid-x", gx.spec());
        echo.add("grid-y", gy.spec());
        echo.add("format", to_string(format));

        Table t;
        t.command = echo.str();
        t.columns = {"x", "y", "df"};
        t.config = {{"model", model.spec()}, {"m", json_number(params.m)}, {"k", json_number(params.k)},
                    {"regime", to_string(pair.regime)}, {"r", pair.r}, {"s", pair.s},
                    {"first_transform", model.attraction(sides.first).describe()},
                    {"second_transform", model.attraction(sides.second).describe()}};
        if (mixing) t.config["index_law"] = h->describe();
        for (double x : gx.values()) {
            for (double y : gy.values()) {
                const LimitPoint pt{transform(model, sides.first, x), transform(model, sides.second, y)};
                double df = 0.0;
                if (mixing) {
                    const MixtureQuery q{params, pair, pt, *h};
                    df = pair.regime == Regime::lower_upper && lu_form == "joint" ? mixture_lu_joint(q) : mixture(q);
                } else {
                    switch (pair.regime) {
                        case Regime::upper_upper: df = omega_uu(params, pair.r, pair.s, pt.first, pt.second); break;
                        case Regime::lower_lower: df = omega_ll(pair.r, pair.s, pt.first, pt.second); break;
                        case Regime::lower_upper: df = omega_lu_product(params, pair.r, pair.s, pt.first, pt.second); break;
                    }
                }
                t.rows.push_back({x, y, df});
            }
        }
        return emit(t, format);
    }
};

struct SimulateVerb : PairVerb {
    std::string index = "geometric";
    std::string reps = "20000";
    std::string seed = "1";
    std::string threads = "0";
    std::string statistic = "pair";
    std::string route = "mixture";

    std::string run() const {
        SimConfig cfg;
        cfg.model = mo.resolved_model();
        cfg.params = mo.resolved_params();
        cfg.statistic = parse_sim_statistic(statistic);
        const bool pair = cfg.statistic == SimStatistic::pair;
        if (pair) cfg.ranks = ro.resolved(cfg.params.n);
        cfg.index = IndexSpec::parse(index);
        cfg.replications = parse_int(reps, "reps");
        cfg.seed = parse_seed(seed);
        cfg.threads = parse_int(threads, "threads");
        cfg.range_route = parse_range_route(route);
        const Format format = parse_format(oo.format);
        const Grid gx = Grid::parse(go.x);
        const Grid gy = Grid::parse(go.y);
        for (double x : gx.values()) {
            if (!pair) {
                cfg.grid.push_back({x, 0.0});
                continue;
            }
            for (double y : gy.values()) cfg.grid.push_back({x, y});
        }
        cfg.validate();

        Echo echo("simulate");
        mo.echo(echo);
        echo.add("statistic", to_string(cfg.statistic));
        if (pair) {
            ro.echo(echo, cfg.ranks);
        } else {
            echo.add("route", to_string(cfg.range_route));
        }
        echo.add("index", cfg.index.describe());
        echo.add("reps", cfg.replications);
        echo.add("seed", std::to_string(cfg.seed));
        echo.add("grid-x", gx.spec());
        if (pair) echo.add("grid-y", gy.spec());
        echo.add("format", to_string(format));

        SimulationReport rep = run_bivariate_sim(cfg);
        rep.command = echo.str();
        return format == Format::json ? rep.to_json() : rep.to_csv();
    }
};

struct ExampleVerb {
    std::string name;
    ModelOptions mo;
    GridOptions go;
    OutputOptions oo;
    std::string at;
    std::string route = "published";
    bool simulate = false;
    std::string reps = "20000";
    std::string seed = "1";
    std::string threads = "0";
    bool m_given = false;

    static std::vector<std::string> names() {
        return {"normal-range", "normal-midrange", "cauchy-range", "geometric-max", "range", "midrange"};
    }

    std::string run() const {
        const Format format = parse_format(oo.format);
        DistributionModel model = mo.resolved_model();
        GosParams params = mo.resolved_params();
        std::string default_grid = "-2:6:41";
        if (name == "normal-range" || name == "normal-midrange") {
            model = DistributionModel::normal();
            params = make_params(0.0, 1.0, params.n);
            if (name == "normal-midrange") default_grid = "-3:3:41";
        } else if (name == "cauchy-range") {
            model = DistributionModel::cauchy();
            if (!m_given) params.m = 0.5;
            if (!(params.m > 0.0)) throw UnsupportedCaseError("cauchy-range is the m > 0 case");
            default_grid = "0.25:5:41";
        } else if (name == "geometric-max") {
            model = DistributionModel::exponential(1.0);
            params = make_params(0.0, 1.0, params.n);
            default_grid = "-4:6:41";
        } else if (name != "range" && name != "midrange") {
            throw DomainError("unknown example '" + name + "'");
        }
        const bool is_mid = name == "normal-midrange" || name == "midrange";
        const RangeStatistic stat = is_mid ? RangeStatistic::midrange : RangeStatistic::range;
        const RangeRoute rr = parse_range_route(route);
        const Grid grid = !at.empty() ? Grid::parse(at) : Grid::parse(go.x.empty() ? default_grid : go.x);
        if (!at.empty() && grid.count != 1) throw DomainError("--at takes a single value");

        Echo echo("example");
        echo.positional(name);
        echo.add("model", model.spec());
        echo.add("m", params.m);
        echo.add("k", params.k);
        echo.add("n", params.n);
        if (name == "range" || name == "midrange") echo.add("route", to_string(rr));
        if (!at.empty()) {
            echo.add("at", grid.spec());
        } else {
            echo.add("grid-x", grid.spec());
        }
        if (simulate) {
            echo.flag("simulate");
            echo.add("reps", parse_int(reps, "reps"));
            echo.add("seed", std::to_string(parse_seed(seed)));
        }
        echo.add("format", to_string(format));

        Table t;
        t.command = echo.str();
        t.config = params_json(model, params);
        t.config["example"] = name;
        t.config["index_law"] = IndexLaw::unit_exponential().describe();
        const auto law = IndexLaw::unit_exponential();
        const auto xs = grid.values();
        if (name == "normal-range" || name == "normal-midrange") {
            t.columns = {is_mid ? "v" : "r", "closed_form", "integral", "limit_df"};
            const auto q = make_range_query(model, params, law, stat, RangeRoute::published);
            for (double x : xs) {
                t.rows.push_back({x, is_mid ? normal_midrange_closed_form(x) : normal_range_closed_form(x),
                                  is_mid ? normal_midrange_integral(x) : normal_range_integral(x), range_statistic_df(q, x)});
            }
        } else if (name == "cauchy-range") {
            t.columns = {"r", "closed_form", "published", "mixture"};
            const auto pub = make_range_query(model, params, law, stat, RangeRoute::published);
            const auto mix = make_range_query(model, params, law, stat, RangeRoute::mixture);
            for (double x : xs) {
                t.rows.push_back({x, x > 0.0 ? -std::expm1(-1.0 / x) : 1.0, range_statistic_df(pub, x), range_statistic_df(mix, x)});
            }
        } else if (name == "geometric-max") {
            t.columns = {"x", "mixture", "logistic"};
            const TailTransform up = model.attraction(ExtremeSide::upper);
            for (double x : xs) {
                t.rows.push_back({x, mixture_marginal(ExtremeSide::upper, params, 1, kappa(up, x), law), 1.0 / (1.0 + std::exp(-x))});
            }
        } else {
            t.columns = {"t", "limit_df"};
            t.config["route"] = to_string(rr);
            const auto q = make_range_query(model, params, law, stat, rr);
            for (double x : xs) t.rows.push_back({x, range_statistic_df(q, x)});
        }

        if (simulate) {
            SimConfig cfg;
            cfg.model = model;
            cfg.params = params;
            cfg.index = IndexSpec::parse("geometric");
            cfg.replications = parse_int(reps, "reps");
            cfg.seed = parse_seed(seed);
            cfg.threads = parse_int(threads, "threads");
            if (name == "geometric-max") {
                cfg.statistic = SimStatistic::pair;
                cfg.ranks = {2, 1, Regime::upper_upper};
                for (double x : xs) cfg.grid.push_back({kInf, x});
            } else {
                cfg.statistic = is_mid ? SimStatistic::midrange : SimStatistic::range;
                for (double x : xs) cfg.grid.push_back({x, 0.0});
            }
            const auto emp = simulate_empirical_df(cfg);
            t.columns.push_back("empirical");
            t.columns.push_back("standard_error");
            t.config["simulation"] = {{"index", "geometric"}, {"replications", cfg.replications}, {"seed", cfg.seed}};
            for (std::size_t i = 0; i < emp.size(); ++i) {
                t.rows[i].push_back(emp[i]);
                t.rows[i].push_back(std::sqrt(emp[i] * (1.0 - emp[i]) / cfg.replications));
            }
        }
        return emit(t, format);
    }
};

struct SelftestVerb {
    bool quick = false;
    std::vector<std::string> modules;
    std::string seed = "2024";
    std::string threads = "0";
    std::string format = "text";
    OutputOptions oo;

    int run(std::string& text) const {
        SelftestOptions opts;
        opts.quick = quick;
        opts.modules = modules;
        opts.seed = parse_seed(seed);
        opts.threads = parse_int(threads, "threads");
        for (const auto& m : modules) {
            const auto known = selftest_modules();
            if (std::find(known.begin(), known.end(), m) == known.end()) throw DomainError("unknown module '" + m + "'");
        }
        if (format != "text" && format != "json") throw DomainError("selftest --format must be text or json");
        const bool streaming = format == "text" && oo.out.empty();
        const auto report = run_selftest(opts, [&](const CheckResult& c) {
            if (!streaming) return;
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.module << ": " << c.name << " (" << format_number(c.measure)
                      << ", tolerance " << format_number(c.tolerance) << ")";
            if (!c.passed && !c.detail.empty()) std::cout << "\n     " << c.detail;
            std::cout << std::endl;
        });
        std::ostringstream os;
        if (format == "json") {
            nlohmann::json doc;
            doc["passed"] = report.passed();
            doc["failed"] = report.failed();
            doc["quick"] = quick;
            doc["seed"] = opts.seed;
            nlohmann::json checks = nlohmann::json::array();
            for (const auto& c : report.checks) {
                checks.push_back({{"module", c.module}, {"name", c.name}, {"passed", c.passed},
                                  {"measure", json_number(c.measure)}, {"tolerance", json_number(c.tolerance)},
                                  {"detail", c.detail}});
            }
            doc["checks"] = checks;
            os << doc.dump(2) << "\n";
        } else {
            if (!streaming) {
                for (const auto& c : report.checks) {
                    os << (c.passed ? "PASS " : "FAIL ") << c.module << ": " << c.name << " (" << format_number(c.measure)
                       << ", tolerance " << format_number(c.tolerance) << ")\n";
                }
            }
            os << report.passed() << " passed, " << report.failed() << " failed\n";
        }
        text = os.str();
        return report.failed() == 0 ? 0 : kFailure;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extreme m-generalized order statistics under fixed and random sample size"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "gosx 0.1.0");

    ExactVerb exact;
    auto* exact_cmd = app.add_subcommand("exact", "exact finite-n joint df over a grid");
    exact.mo.attach(exact_cmd);
    exact.ro.attach(exact_cmd);
    exact.go.attach(exact_cmd);
    exact.oo.attach(exact_cmd);
    exact_cmd->add_flag("--raw", exact.raw, "grid values are raw x, y rather than normalized");

    LimitVerb limit;
    auto* limit_cmd = app.add_subcommand("limit", "fixed-size limit df over a normalized grid");
    limit_cmd->add_option("--model", limit.mo.model, "parent df")->capture_default_str();
    limit_cmd->add_option("--m", limit.mo.m, "m > -1")->capture_default_str();
    limit_cmd->add_option("--k", limit.mo.k, "k > 0")->capture_default_str();
    limit.ro.attach(limit_cmd);
    limit.go.attach(limit_cmd);
    limit.oo.attach(limit_cmd);

    LimitVerb mix;
    mix.mixing = true;
    mix.law = "exponential";
    auto* mix_cmd = app.add_subcommand("mix", "random-index mixture of the limit df");
    mix_cmd->add_option("--model", mix.mo.model, "parent df")->capture_default_str();
    mix_cmd->add_option("--m", mix.mo.m, "m > -1")->capture_default_str();
    mix_cmd->add_option("--k", mix.mo.k, "k > 0")->capture_default_str();
    mix.ro.attach(mix_cmd);
    mix.go.attach(mix_cmd);
    mix.oo.attach(mix_cmd);
    mix_cmd->add_option("--H", mix.law, "index law: degenerate:c, exponential, uniform:a:b, tabulated:file.csv")->capture_default_str();
    mix_cmd->add_option("--lu-form", mix.lu_form, "lu mixture: product of mixed marginals or joint")->capture_default_str();

    SimulateVerb sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check against the analytic limit");
    sim.mo.attach(sim_cmd);
    sim.ro.attach(sim_cmd);
    sim.go.attach(sim_cmd);
    sim.oo.attach(sim_cmd);
    sim_cmd->add_option("--index", sim.index, "fixed, geometric, dependent:c or dependent:a:b")->capture_default_str();
    sim_cmd->add_option("--reps", sim.reps, "replications")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "generator seed")->capture_default_str();
    sim_cmd->add_option("--threads", sim.threads, "worker threads, 0 for all cores; results do not depend on it")->capture_default_str();
    sim_cmd->add_option("--statistic", sim.statistic, "pair, range or midrange")->capture_default_str();
    sim_cmd->add_option("--route", sim.route, "range limit route: published or mixture")->capture_default_str();

    ExampleVerb ex;
    ex.go.x.clear();
    auto* ex_cmd = app.add_subcommand("example", "range and midrange reproductions");
    ex_cmd->add_option("name", ex.name, "normal-range, normal-midrange, cauchy-range, geometric-max, range, midrange")
        ->required()
        ->check(CLI::IsMember(ExampleVerb::names()));
    ex.mo.n = "500";
    ex.mo.attach(ex_cmd);
    ex_cmd->add_option("--grid-x", ex.go.x, "min:max:count (default depends on the example)");
    ex.oo.attach(ex_cmd);
    ex_cmd->add_option("--at", ex.at, "single evaluation point, e.g. ln4");
    ex_cmd->add_option("--route", ex.route, "published or mixture (range and midrange)")->capture_default_str();
    ex_cmd->add_flag("--simulate", ex.simulate, "add a geometric-index simulation overlay at --n");
    ex_cmd->add_option("--reps", ex.reps, "replications for --simulate")->capture_default_str();
    ex_cmd->add_option("--seed", ex.seed, "seed for --simulate")->capture_default_str();
    ex_cmd->add_option("--threads", ex.threads, "worker threads for --simulate")->capture_default_str();

    SelftestVerb st;
    auto* st_cmd = app.add_subcommand("selftest", "run the invariant suite");
    st_cmd->add_flag("--quick", st.quick, "skip Monte Carlo checks");
    st_cmd->add_option("--module", st.modules, "restrict to a module (repeatable)");
    st_cmd->add_option("--seed", st.seed, "seed for randomized checks")->capture_default_str();
    st_cmd->add_option("--threads", st.threads, "worker threads")->capture_default_str();
    st_cmd->add_option("--format", st.format, "text or json")->capture_default_str();
    st_cmd->add_option("--out", st.oo.out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (exact_cmd->parsed()) {
            write_output(exact.run(), exact.oo);
        } else if (limit_cmd->parsed()) {
            write_output(limit.run(), limit.oo);
        } else if (mix_cmd->parsed()) {
            write_output(mix.run(), mix.oo);
        } else if (sim_cmd->parsed()) {
            write_output(sim.run(), sim.oo);
        } else if (ex_cmd->parsed()) {
            ex.m_given = ex_cmd->count("--m") > 0;
            write_output(ex.run(), ex.oo);
        } else if (st_cmd->parsed()) {
            std::string text;
            const int code = st.run(text);
            write_output(text, st.oo);
            if (code != 0) std::cerr << "gosx: selftest failed\n";
            return code;
        }
    } catch (const std::exception& e) {
        std::cerr << "gosx: error: " << e.what() << "\n";
        return kFailure;
    }
    return 0;
}
