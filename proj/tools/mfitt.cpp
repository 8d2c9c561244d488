// mfitt: tick-data analysis pipeline
//   ingest -> itt/bin -> deseason -> {stats | acf | mfdfa | mfdcca | rho |
//   cdf | fit | synth | surrogate}
// All I/O is delimited text; every output starts with '#' header lines
// echoing the effective configuration, so runs are reproducible from their
// own outputs.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfitt/mfitt.hpp"

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// small CLI plumbing
// ---------------------------------------------------------------------------

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    double step = 0.0;     // arithmetic when > 0
    int per_decade = 0;    // log-spaced when > 0
    bool parsed = false;
};

// "lo:hi:step" (arithmetic) or "lo:hi:xN" (log-spaced, N per decade)
GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    std::size_t a = text.find(':');
    std::size_t b = text.rfind(':');
    if (a == std::string::npos || b == a)
        throw CLI::ValidationError("grid", "expected lo:hi:step or lo:hi:xN, got '" + text + "'");
    g.lo = std::stod(text.substr(0, a));
    g.hi = std::stod(text.substr(a + 1, b - a - 1));
    std::string tail = text.substr(b + 1);
    if (!tail.empty() && (tail[0] == 'x' || tail[0] == 'X'))
        g.per_decade = std::stoi(tail.substr(1));
    else
        g.step = std::stod(tail);
    if (g.hi <= g.lo || (g.step <= 0.0 && g.per_decade <= 0))
        throw CLI::ValidationError("grid", "bad grid '" + text + "'");
    g.parsed = true;
    return g;
}

std::vector<double> q_grid_from(const GridSpec& g) {
    if (g.step > 0.0) return mfitt::default_q_grid(g.lo, g.hi, g.step);
    std::vector<std::int64_t> s = mfitt::log_spaced_scales(
        static_cast<std::int64_t>(g.lo), static_cast<std::int64_t>(g.hi), g.per_decade);
    return {s.begin(), s.end()};
}

std::vector<std::int64_t> s_grid_from(const GridSpec& g) {
    if (g.per_decade > 0)
        return mfitt::log_spaced_scales(static_cast<std::int64_t>(std::llround(g.lo)),
                                        static_cast<std::int64_t>(std::llround(g.hi)), g.per_decade);
    std::vector<std::int64_t> s;
    for (double v = g.lo; v <= g.hi + 1e-9; v += g.step) {
        auto k = static_cast<std::int64_t>(std::llround(v));
        if (s.empty() || k > s.back()) s.push_back(k);
    }
    return s;
}

struct OutStream {
    explicit OutStream(const std::string& path) {
        if (path.empty() || path == "-") {
            os = &std::cout;
        } else {
            file = std::make_unique<std::ofstream>(path);
            if (!*file) throw mfitt::Error("cannot open output file '" + path + "'");
            os = file.get();
        }
    }
    std::ostream& get() { return *os; }
    std::unique_ptr<std::ofstream> file;
    std::ostream* os = nullptr;
};

struct InStream {
    explicit InStream(const std::string& path) {
        if (path.empty() || path == "-") {
            is = &std::cin;
        } else {
            file = std::make_unique<std::ifstream>(path);
            if (!*file) throw mfitt::Error("cannot open input file '" + path + "'");
            is = file.get();
        }
    }
    std::istream& get() { return *is; }
    std::unique_ptr<std::ifstream> file;
    std::istream* is = nullptr;
};

// '#'-prefixed run header recording subcommand and every effective setting
std::string run_header(const std::string& sub, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream os;
    os << "# mfitt " << sub << '\n';
    os << "#";
    for (const auto& [k, v] : kv) os << ' ' << k << '=' << v;
    os << '\n';
    return os.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// shared option groups
// ---------------------------------------------------------------------------

struct TickFormatOpts {
    std::string delim = ",";
    std::string ts_unit = "s";
    std::string columns = "1,2,3";
    bool header = false;

    void attach(CLI::App* app) {
        app->add_option("--delim", delim, "field delimiter for tick files")->capture_default_str();
        app->add_option("--ts-unit", ts_unit, "timestamp unit: s, ms or us")
            ->check(CLI::IsMember({"s", "ms", "us"}))
            ->capture_default_str();
        app->add_option("--columns", columns, "1-based positions of timestamp,price,volume")
            ->capture_default_str();
        app->add_flag("--header", header, "skip the first line of tick files");
    }

    mfitt::FormatSpec spec() const {
        mfitt::FormatSpec s;
        if (delim.size() != 1) throw mfitt::Error("--delim must be a single character");
        s.delimiter = delim[0];
        s.ts_unit = ts_unit == "ms"  ? mfitt::TimestampUnit::milliseconds
                    : ts_unit == "us" ? mfitt::TimestampUnit::microseconds
                                      : mfitt::TimestampUnit::seconds;
        int cols[3];
        if (std::sscanf(columns.c_str(), "%d,%d,%d", &cols[0], &cols[1], &cols[2]) != 3)
            throw mfitt::Error("--columns must be like 1,2,3");
        s.col_timestamp = cols[0] - 1;
        s.col_price = cols[1] - 1;
        s.col_volume = cols[2] - 1;
        s.has_header = header;
        return s;
    }
};

struct SeriesInputOpts {
    std::string in;
    bool ticks = false;       // input is a raw tick file; extract ITT
    std::string order = "reject";
    int tcol = 0, vcol = 0;   // 1-based column picks for series files
    bool abs_values = false;
    TickFormatOpts fmt;

    void attach(CLI::App* app, const char* what = "input series file ('-' for stdin)") {
        app->add_option("--in", in, what)->required();
        app->add_flag("--ticks", ticks, "treat input as raw ticks and extract the ITT series");
        app->add_option("--order", order, "tick ordering policy: reject or sort")
            ->check(CLI::IsMember({"reject", "sort"}));
        app->add_option("--tcol", tcol, "1-based timestamp column of a series file (0 = auto)");
        app->add_option("--vcol", vcol, "1-based value column of a series file (0 = auto)");
        app->add_flag("--abs", abs_values, "take absolute values after loading (e.g. |r|)");
        fmt.attach(app);
    }

    mfitt::SeriesData load() const {
        mfitt::SeriesData data;
        InStream input(in);
        if (ticks) {
            mfitt::TickSeries t = mfitt::parse_trades(input.get(), fmt.spec());
            t = mfitt::validate_ordering(std::move(t), order == "sort" ? mfitt::OrderingPolicy::sort
                                                                       : mfitt::OrderingPolicy::reject);
            mfitt::IttSeries itt = mfitt::extract_itt(t);
            data.values = std::move(itt.values);
            data.timestamps = std::move(itt.timestamps);
        } else {
            data = mfitt::read_series(input.get(), tcol, vcol);
        }
        if (abs_values)
            for (double& v : data.values) v = std::fabs(v);
        return data;
    }

    void describe(std::vector<std::pair<std::string, std::string>>& kv) const {
        kv.emplace_back("in", in);
        kv.emplace_back("ticks", ticks ? "1" : "0");
        if (abs_values) kv.emplace_back("abs", "1");
    }
};

struct DeseasonOpts {
    std::string mode = "none";

    void attach(CLI::App* app) {
        app->add_option("--deseason", mode, "deseasonalize first: none, daily or daily+weekly")
            ->check(CLI::IsMember({"none", "daily", "daily+weekly"}))
            ->capture_default_str();
    }

    void apply(mfitt::SeriesData& data) const {
        if (mode == "none") return;
        if (!data.has_timestamps())
            throw mfitt::Error("--deseason needs a series with timestamps");
        const auto m = mode == "daily" ? mfitt::DeseasonMode::daily : mfitt::DeseasonMode::daily_weekly;
        mfitt::SeasonalPattern p = mfitt::estimate_pattern(data.values, data.timestamps, m);
        data.values = mfitt::deseasonalize(data.values, data.timestamps, p, m);
    }
};

int g_threads = 1;

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

void cmd_stats(const SeriesInputOpts& input, const std::string& out_path, bool as_json,
               bool rolling, double window, double step, const std::string& stat) {
    mfitt::SeriesData data = input.load();
    OutStream out(out_path);
    if (rolling) {
        const auto st = stat == "mean-abs" ? mfitt::RollingStatistic::mean_abs
                                           : mfitt::RollingStatistic::mean;
        if (!data.has_timestamps()) throw mfitt::Error("stats --rolling needs timestamps");
        mfitt::RollingSeries rs =
            mfitt::rolling_stat(data.timestamps, data.values, st, window, step);
        out.get() << run_header("stats", {{"in", input.in},
                                          {"rolling", "1"},
                                          {"stat", stat},
                                          {"window", fmt(window)},
                                          {"step", fmt(step)}});
        out.get() << "# columns: window_end_time value (nan = empty window)\n";
        mfitt::write_series(out.get(), rs.window_end_times, rs.values);
        return;
    }
    mfitt::SeriesStats st = mfitt::compute_stats(data.values);
    if (as_json) {
        json j{{"count", st.count},
               {"mean", st.mean},
               {"std", st.stddev},
               {"zero_fraction", st.zero_fraction}};
        if (input.ticks) j["tick_count"] = st.count + 1;
        out.get() << j.dump(2) << '\n';
        return;
    }
    out.get() << run_header("stats", {{"in", input.in}, {"ticks", input.ticks ? "1" : "0"}});
    if (input.ticks) out.get() << "T " << st.count + 1 << '\n';
    out.get() << "count " << st.count << '\n'
              << "mean " << fmt(st.mean) << '\n'
              << "std " << fmt(st.stddev) << '\n'
              << "zero_fraction " << fmt(st.zero_fraction) << '\n';
}

void cmd_bin(const std::string& in, const TickFormatOpts& tf, const std::string& order, double dt,
             const std::string& out_path) {
    InStream input(in);
    mfitt::TickSeries t = mfitt::parse_trades(input.get(), tf.spec());
    t = mfitt::validate_ordering(std::move(t), order == "sort" ? mfitt::OrderingPolicy::sort
                                                               : mfitt::OrderingPolicy::reject);
    mfitt::BinnedSeries b = mfitt::bin_ticks(t, dt);
    OutStream out(out_path);
    out.get() << run_header("bin", {{"in", in}, {"dt", fmt(dt)}});
    out.get() << "# columns: bin_start_time n v r\n";
    char buf[160];
    for (std::size_t i = 0; i < b.size(); ++i) {
        int n = std::snprintf(buf, sizeof buf, "%.6f %lld %.17g %.17g\n", b.bin_timestamps[i],
                              static_cast<long long>(b.n[i]), b.v[i], b.r[i]);
        out.get().write(buf, n);
    }
}

void cmd_deseason(const SeriesInputOpts& input, const std::string& mode,
                  const std::string& pattern_out, const std::string& pattern_in,
                  const std::string& out_path) {
    mfitt::SeriesData data = input.load();
    std::vector<double> values = data.values;
    if (mode != "none") {
        if (!data.has_timestamps()) throw mfitt::Error("deseason needs a series with timestamps");
        const auto m = mode == "daily" ? mfitt::DeseasonMode::daily : mfitt::DeseasonMode::daily_weekly;
        mfitt::SeasonalPattern p;
        if (!pattern_in.empty()) {
            std::ifstream daily(pattern_in + ".daily");
            if (!daily) throw mfitt::Error("cannot open pattern file " + pattern_in + ".daily");
            if (m == mfitt::DeseasonMode::daily_weekly) {
                std::ifstream weekly(pattern_in + ".weekly");
                if (!weekly) throw mfitt::Error("cannot open pattern file " + pattern_in + ".weekly");
                p = mfitt::read_pattern(daily, &weekly);
            } else {
                p = mfitt::read_pattern(daily, nullptr);
            }
        } else {
            p = mfitt::estimate_pattern(values, data.timestamps, m);
        }
        if (!pattern_out.empty()) {
            std::ofstream daily(pattern_out + ".daily");
            std::ofstream weekly;
            if (p.has_weekly) weekly.open(pattern_out + ".weekly");
            mfitt::write_pattern(p, daily, p.has_weekly ? &weekly : nullptr);
        }
        values = mfitt::deseasonalize(values, data.timestamps, p, m);
    }
    OutStream out(out_path);
    out.get() << run_header("deseason", {{"in", input.in}, {"mode", mode}});
    mfitt::write_series(out.get(), data.timestamps, values);
}

void cmd_acf(const SeriesInputOpts& input, const DeseasonOpts& des, std::int64_t max_lag,
             int per_decade, bool linear, const std::string& estimator, double mean_dt,
             const std::string& out_path) {
    mfitt::SeriesData data = input.load();
    des.apply(data);
    if (max_lag <= 0) max_lag = static_cast<std::int64_t>(data.values.size()) / 10;
    double dt = mean_dt;
    if (dt <= 0.0) {
        // ITT input: tau_k = k * <dt> uses the mean interval of the series
        dt = input.ticks ? mfitt::compute_stats(data.values).mean
             : data.has_timestamps() && data.timestamps.size() >= 2
                 ? (data.timestamps.back() - data.timestamps.front()) /
                       static_cast<double>(data.timestamps.size() - 1)
                 : 1.0;
    }
    const auto est = estimator == "raw" ? mfitt::AcfEstimator::raw : mfitt::AcfEstimator::standard;
    mfitt::AcfResult r;
    if (linear)
        r = mfitt::acf(data.values, max_lag, est, dt);
    else
        r = mfitt::acf(data.values, mfitt::log_spaced_lags(max_lag, per_decade), est, dt);

    OutStream out(out_path);
    out.get() << run_header("acf", {{"in", input.in},
                                    {"deseason", des.mode},
                                    {"estimator", estimator},
                                    {"max_lag", std::to_string(max_lag)},
                                    {"lags_per_decade", linear ? "linear" : std::to_string(per_decade)},
                                    {"mean_dt", fmt(dt)}});
    out.get() << "# columns: k tau_seconds C\n";
    for (std::size_t i = 0; i < r.lags.size(); ++i)
        out.get() << r.lags[i] << ' ' << fmt(r.tau[i]) << ' ' << fmt(r.c[i]) << '\n';
}

mfitt::MfdfaConfig make_config(const mfitt::SeriesData& data, const std::string& q_text,
                               const std::string& s_text, int degree) {
    mfitt::MfdfaConfig cfg;
    cfg.detrend_degree = degree;
    cfg.q_grid = q_text.empty() ? mfitt::default_q_grid() : q_grid_from(parse_grid(q_text));
    if (s_text.empty()) {
        const std::int64_t lo = mfitt::min_scale(data.values, degree);
        const std::int64_t hi = mfitt::max_scale(data.values.size(), degree);
        if (hi <= lo)
            throw mfitt::Error("automatic scale rules give an empty range (s_min " +
                               std::to_string(lo) + ", s_max " + std::to_string(hi) + ")");
        cfg.s_grid = mfitt::log_spaced_scales(lo, hi, 20);
    } else {
        cfg.s_grid = s_grid_from(parse_grid(s_text));
    }
    return cfg;
}

void write_surface(std::ostream& os, const mfitt::FluctuationSurface& surf) {
    os << "# columns: q s F M_s skipped\n";
    for (std::size_t qi = 0; qi < surf.q_grid.size(); ++qi)
        for (std::size_t si = 0; si < surf.s_grid.size(); ++si)
            os << fmt(surf.q_grid[qi]) << ' ' << surf.s_grid[si] << ' ' << fmt(surf.at(qi, si))
               << ' ' << surf.segment_counts[si] << ' ' << surf.skipped_segments[si] << '\n';
}

void cmd_mfdfa(const SeriesInputOpts& input, const DeseasonOpts& des, const std::string& q_text,
               const std::string& s_text, int degree, const std::string& fit_text,
               const std::string& prefix) {
    mfitt::SeriesData data = input.load();
    des.apply(data);
    mfitt::MfdfaConfig cfg = make_config(data, q_text, s_text, degree);
    mfitt::FluctuationSurface surf = mfitt::fluctuation_surface(data.values, cfg, g_threads);

    const auto header = run_header(
        "mfdfa", {{"in", input.in},
                  {"deseason", des.mode},
                  {"q", q_text.empty() ? "-4:4:0.25" : q_text},
                  {"s", s_text.empty() ? (std::to_string(cfg.s_grid.front()) + ":" +
                                          std::to_string(cfg.s_grid.back()) + ":x20 (auto)")
                                       : s_text},
                  {"m", std::to_string(degree)},
                  {"fit", fit_text},
                  {"threads", std::to_string(g_threads)}});
    {
        OutStream out(prefix + ".surface.txt");
        out.get() << header;
        write_surface(out.get(), surf);
    }
    double lo = static_cast<double>(cfg.s_grid.front());
    double hi = static_cast<double>(cfg.s_grid.back());
    if (!fit_text.empty()) {
        GridSpec g;
        std::size_t c = fit_text.find(':');
        if (c == std::string::npos) throw mfitt::Error("--fit expects lo:hi");
        lo = std::stod(fit_text.substr(0, c));
        hi = std::stod(fit_text.substr(c + 1));
        (void)g;
    }
    mfitt::GeneralizedHurst gh = mfitt::fit_hurst(surf, lo, hi);
    {
        OutStream out(prefix + ".hq.txt");
        out.get() << header << "# columns: q h r2\n";
        for (std::size_t i = 0; i < gh.q_grid.size(); ++i)
            out.get() << fmt(gh.q_grid[i]) << ' ' << fmt(gh.h[i]) << ' ' << fmt(gh.fit_r2[i]) << '\n';
    }
    mfitt::SingularitySpectrum sp = mfitt::singularity_spectrum(gh);
    {
        OutStream out(prefix + ".falpha.txt");
        out.get() << header;
        out.get() << "# width=" << fmt(sp.width) << " asymmetry=" << fmt(sp.asymmetry)
                  << " alpha_q0=" << fmt(sp.alpha_q0) << '\n';
        out.get() << "# columns: q alpha f_alpha\n";
        for (std::size_t i = 0; i < sp.q_grid.size(); ++i)
            out.get() << fmt(sp.q_grid[i]) << ' ' << fmt(sp.alpha[i]) << ' ' << fmt(sp.f_alpha[i])
                      << '\n';
    }
}

void cmd_mfdcca(const SeriesInputOpts& in_x, const std::string& in_y_path, const DeseasonOpts& des,
                const std::string& q_text, const std::string& s_text, int degree,
                const std::string& out_path) {
    mfitt::SeriesData x = in_x.load();
    SeriesInputOpts in_y = in_x;
    in_y.in = in_y_path;
    mfitt::SeriesData y = in_y.load();
    des.apply(x);
    des.apply(y);
    if (x.values.size() != y.values.size()) throw mfitt::Error("mfdcca: inputs differ in length");
    mfitt::MfdfaConfig cfg = make_config(x, q_text, s_text, degree);
    mfitt::FluctuationSurface surf = mfitt::cross_fluctuation(x.values, y.values, cfg, g_threads);
    OutStream out(out_path);
    out.get() << run_header("mfdcca", {{"in-x", in_x.in},
                                       {"in-y", in_y_path},
                                       {"deseason", des.mode},
                                       {"m", std::to_string(degree)},
                                       {"threads", std::to_string(g_threads)}});
    write_surface(out.get(), surf);
}

void cmd_rho(const SeriesInputOpts& in_x, const std::string& in_y_path, const DeseasonOpts& des,
             double q, const std::string& s_text, int degree, bool rolling, std::int64_t scale,
             double window, double step, const std::string& out_path) {
    mfitt::SeriesData x = in_x.load();
    SeriesInputOpts in_y = in_x;
    in_y.in = in_y_path;
    mfitt::SeriesData y = in_y.load();
    des.apply(x);
    des.apply(y);
    if (x.values.size() != y.values.size()) throw mfitt::Error("rho: inputs differ in length");
    OutStream out(out_path);
    if (rolling) {
        if (!x.has_timestamps()) throw mfitt::Error("rho --rolling needs timestamps");
        mfitt::RhoResult r = mfitt::rolling_rho(x.values, y.values, x.timestamps, q, scale, window,
                                                step, degree, 1e-15, g_threads);
        out.get() << run_header("rho", {{"in-x", in_x.in},
                                        {"in-y", in_y_path},
                                        {"deseason", des.mode},
                                        {"q", fmt(q)},
                                        {"s", std::to_string(scale)},
                                        {"window", fmt(window)},
                                        {"step", fmt(step)}});
        out.get() << "# columns: window_end_time rho (nan = window below 10*s samples)\n";
        mfitt::write_series(out.get(), r.window_end_times, r.rho_t);
        return;
    }
    mfitt::MfdfaConfig cfg = make_config(x, "", s_text, degree);
    mfitt::RhoResult r = mfitt::rho_q(x.values, y.values, cfg, q, g_threads);
    out.get() << run_header("rho", {{"in-x", in_x.in},
                                    {"in-y", in_y_path},
                                    {"deseason", des.mode},
                                    {"q", fmt(q)},
                                    {"m", std::to_string(degree)}});
    if (r.out_of_unit_range)
        out.get() << "# warning: q <= 0 values outside [-1,1] are reported verbatim\n";
    out.get() << "# columns: s rho\n";
    for (std::size_t i = 0; i < r.s_grid.size(); ++i)
        out.get() << r.s_grid[i] << ' ' << fmt(r.rho[i]) << '\n';
}

void cmd_cdf(const SeriesInputOpts& input, bool normalize, int per_decade,
             const std::string& out_path) {
    mfitt::SeriesData data = input.load();
    std::vector<double> values =
        normalize ? mfitt::normalize_by_sigma(data.values) : std::move(data.values);
    mfitt::EcdfCurve curve = mfitt::ecdf_complementary(values, per_decade);
    OutStream out(out_path);
    out.get() << run_header("cdf", {{"in", input.in},
                                    {"normalize", normalize ? "1" : "0"},
                                    {"per_decade", std::to_string(per_decade)}});
    out.get() << "# columns: x ccdf\n";
    mfitt::write_series(out.get(), curve.x, curve.p);
}

void cmd_fit(const SeriesInputOpts& input, const std::string& model, double xmin, bool as_json,
             const std::string& out_path) {
    mfitt::SeriesData data = input.load();
    mfitt::DistModel m;
    if (model == "se")
        m = mfitt::fit_se_mle(data.values);
    else
        m = mfitt::fit_powerlaw_tail(data.values,
                                     xmin > 0.0 ? std::optional<double>(xmin) : std::nullopt);
    OutStream out(out_path);
    if (as_json) {
        json j{{"kind", mfitt::dist_kind_name(m.kind)},
               {"sample_count", m.sample_count},
               {"converged", m.converged}};
        if (model == "se") {
            j["alpha"] = m.alpha;
            j["x0"] = m.x0;
            j["log_likelihood"] = m.log_likelihood;
            j["excluded_zero_fraction"] = m.excluded_zero_fraction;
        } else {
            j["beta"] = m.beta;
            j["x_min"] = m.x_min;
            j["ks_distance"] = m.ks_distance;
            j["tail_count"] = m.tail_count;
        }
        out.get() << j.dump(2) << '\n';
        return;
    }
    out.get() << run_header("fit", {{"in", input.in}, {"model", model}});
    out.get() << "kind " << mfitt::dist_kind_name(m.kind) << '\n';
    out.get() << "sample_count " << m.sample_count << '\n';
    if (model == "se") {
        out.get() << "alpha " << fmt(m.alpha) << '\n'
                  << "x0 " << fmt(m.x0) << '\n'
                  << "log_likelihood " << fmt(m.log_likelihood) << '\n'
                  << "excluded_zero_fraction " << fmt(m.excluded_zero_fraction) << '\n';
    } else {
        out.get() << "beta " << fmt(m.beta) << '\n'
                  << "x_min " << fmt(m.x_min) << '\n'
                  << "ks_distance " << fmt(m.ks_distance) << '\n'
                  << "tail_count " << m.tail_count << '\n';
    }
    out.get() << "converged " << (m.converged ? 1 : 0) << '\n';
}

void cmd_synth(const std::string& kind, std::size_t length, std::uint64_t seed, double hurst,
               double p, int levels, double alpha, double x0, double beta, double xmin, double phi,
               const std::string& out_path) {
    mfitt::GeneratorSpec spec;
    spec.length = length;
    spec.seed = seed;
    spec.hurst = hurst;
    spec.p = p;
    spec.levels = levels;
    spec.alpha = alpha;
    spec.x0 = x0;
    spec.beta = beta;
    spec.x_min = xmin;
    spec.phi = phi;
    if (kind == "white") spec.kind = mfitt::GeneratorKind::white;
    else if (kind == "ar1") spec.kind = mfitt::GeneratorKind::ar1;
    else if (kind == "fgn") spec.kind = mfitt::GeneratorKind::fgn;
    else if (kind == "cascade") spec.kind = mfitt::GeneratorKind::binomial_cascade;
    else if (kind == "weibull-renewal") spec.kind = mfitt::GeneratorKind::weibull_renewal;
    else if (kind == "pareto") spec.kind = mfitt::GeneratorKind::pareto;
    else throw mfitt::Error("synth: unknown kind '" + kind + "'");

    std::vector<double> values = mfitt::generate(spec);
    OutStream out(out_path);
    out.get() << run_header("synth", {{"kind", kind},
                                      {"length", std::to_string(values.size())},
                                      {"seed", std::to_string(seed)},
                                      {"hurst", fmt(hurst)},
                                      {"p", fmt(p)},
                                      {"levels", std::to_string(levels)},
                                      {"alpha", fmt(alpha)},
                                      {"x0", fmt(x0)},
                                      {"beta", fmt(beta)},
                                      {"x-min", fmt(xmin)},
                                      {"phi", fmt(phi)}});
    mfitt::write_series(out.get(), {}, values);
}

void cmd_surrogate(const SeriesInputOpts& input, std::uint64_t seed, const std::string& out_path) {
    mfitt::SeriesData data = input.load();
    std::vector<double> shuffled = mfitt::shuffle_surrogate(data.values, seed);
    OutStream out(out_path);
    out.get() << run_header("surrogate", {{"in", input.in}, {"seed", std::to_string(seed)}});
    mfitt::write_series(out.get(), data.timestamps, shuffled);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfitt: inter-transaction-time and market-activity analysis toolkit"};
    app.require_subcommand(1);
    app.add_option("--threads", g_threads, "cap on internal parallelism")->capture_default_str();

    // stats
    auto* stats = app.add_subcommand("stats", "summary statistics (count, mean, std, zero fraction)");
    SeriesInputOpts stats_in;
    stats_in.attach(stats);
    std::string stats_out{"-"};
    bool stats_json = false, stats_rolling = false;
    double stats_window = 30.0 * 86400.0, stats_step = 86400.0;
    std::string stats_stat = "mean";
    stats->add_option("--out", stats_out, "output file");
    stats->add_flag("--json", stats_json, "emit the report as JSON");
    stats->add_flag("--rolling", stats_rolling, "emit a moving-window statistic instead");
    stats->add_option("--window", stats_window, "rolling window length, seconds")->capture_default_str();
    stats->add_option("--step", stats_step, "rolling step, seconds")->capture_default_str();
    stats->add_option("--stat", stats_stat, "rolling statistic: mean or mean-abs")
        ->check(CLI::IsMember({"mean", "mean-abs"}));

    // bin
    auto* bin = app.add_subcommand("bin", "aggregate ticks into fixed intervals (n, v, log-return)");
    std::string bin_in, bin_out{"-"}, bin_order{"reject"};
    double bin_dt = 10.0;
    TickFormatOpts bin_fmt;
    bin->add_option("--in", bin_in, "tick file")->required();
    bin->add_option("--dt", bin_dt, "bin width, seconds")->capture_default_str();
    bin->add_option("--order", bin_order, "tick ordering policy")->check(CLI::IsMember({"reject", "sort"}));
    bin->add_option("--out", bin_out, "output file");
    bin_fmt.attach(bin);

    // deseason
    auto* des = app.add_subcommand("deseason", "estimate/apply daily and weekly activity patterns");
    SeriesInputOpts des_in;
    des_in.attach(des);
    std::string des_mode{"daily+weekly"}, des_pat_out, des_pat_in, des_out{"-"};
    des->add_option("--mode", des_mode, "none, daily or daily+weekly")
        ->check(CLI::IsMember({"none", "daily", "daily+weekly"}))
        ->capture_default_str();
    des->add_option("--pattern-out", des_pat_out, "write pattern files <base>.daily/.weekly");
    des->add_option("--pattern-in", des_pat_in, "apply pattern files <base>.daily/.weekly");
    des->add_option("--out", des_out, "output file");

    // acf
    auto* acf_cmd = app.add_subcommand("acf", "autocorrelation with lags mapped to real time");
    SeriesInputOpts acf_in;
    acf_in.attach(acf_cmd);
    DeseasonOpts acf_des;
    acf_des.attach(acf_cmd);
    std::int64_t acf_maxlag = 0;
    int acf_per_decade = 25;
    bool acf_linear = false;
    std::string acf_est{"standard"}, acf_out{"-"};
    double acf_mean_dt = 0.0;
    acf_cmd->add_option("--max-lag", acf_maxlag, "largest lag (default length/10)");
    acf_cmd->add_option("--lags-per-decade", acf_per_decade, "log-spaced lag density")->capture_default_str();
    acf_cmd->add_flag("--linear", acf_linear, "evaluate every lag up to max-lag");
    acf_cmd->add_option("--estimator", acf_est, "standard (mean-subtracted) or raw")
        ->check(CLI::IsMember({"standard", "raw"}))
        ->capture_default_str();
    acf_cmd->add_option("--mean-dt", acf_mean_dt, "seconds per lag unit (default: mean interval)");
    acf_cmd->add_option("--out", acf_out, "output file");

    // mfdfa
    auto* mf = app.add_subcommand("mfdfa", "multifractal detrended fluctuation analysis");
    SeriesInputOpts mf_in;
    mf_in.attach(mf);
    DeseasonOpts mf_des;
    mf_des.attach(mf);
    std::string mf_q, mf_s, mf_fit, mf_prefix{"mfdfa"};
    int mf_m = 2;
    mf->add_option("--q", mf_q, "q grid lo:hi:step (default -4:4:0.25)");
    mf->add_option("--s", mf_s, "scale grid lo:hi:step or lo:hi:xN (default: zero-run/T10 rules)");
    mf->add_option("--m", mf_m, "detrending polynomial degree")->capture_default_str();
    mf->add_option("--fit", mf_fit, "h(q) fit range lo:hi in scale units (default: whole grid)");
    mf->add_option("--out-prefix", mf_prefix, "writes <prefix>.surface.txt/.hq.txt/.falpha.txt")
        ->capture_default_str();

    // mfdcca
    auto* mc = app.add_subcommand("mfdcca", "detrended cross-covariance fluctuation surface");
    SeriesInputOpts mc_in;
    std::string mc_in_y, mc_q, mc_s, mc_out{"-"};
    int mc_m = 2;
    mc_in.attach(mc, "first input series");
    DeseasonOpts mc_des;
    mc_des.attach(mc);
    mc->add_option("--in-y", mc_in_y, "second input series")->required();
    mc->add_option("--q", mc_q, "q grid lo:hi:step");
    mc->add_option("--s", mc_s, "scale grid lo:hi:step or lo:hi:xN");
    mc->add_option("--m", mc_m, "detrending polynomial degree")->capture_default_str();
    mc->add_option("--out", mc_out, "output file");

    // rho
    auto* rho = app.add_subcommand("rho", "q-dependent detrended cross-correlation coefficient");
    SeriesInputOpts rho_in;
    rho_in.attach(rho, "first input series");
    DeseasonOpts rho_des;
    rho_des.attach(rho);
    std::string rho_in_y, rho_s, rho_out{"-"};
    double rho_q_val = 2.0, rho_window = 30.0 * 86400.0, rho_step = 86400.0;
    std::int64_t rho_scale = 60;
    int rho_m = 2;
    bool rho_rolling = false;
    rho->add_option("--in-y", rho_in_y, "second input series")->required();
    rho->add_option("--q", rho_q_val, "order q")->capture_default_str();
    rho->add_option("--s", rho_s, "scale grid lo:hi:step or lo:hi:xN (per-scale mode)");
    rho->add_option("--m", rho_m, "detrending polynomial degree")->capture_default_str();
    rho->add_flag("--rolling", rho_rolling, "rho(t) in moving windows at one scale");
    rho->add_option("--scale", rho_scale, "scale in samples for --rolling")->capture_default_str();
    rho->add_option("--window", rho_window, "rolling window, seconds")->capture_default_str();
    rho->add_option("--step", rho_step, "rolling step, seconds")->capture_default_str();
    rho->add_option("--out", rho_out, "output file");

    // cdf
    auto* cdf = app.add_subcommand("cdf", "complementary cumulative distribution function");
    SeriesInputOpts cdf_in;
    cdf_in.attach(cdf);
    bool cdf_norm = false;
    int cdf_per_decade = 0;
    std::string cdf_out{"-"};
    cdf->add_flag("--normalize", cdf_norm, "divide by the population standard deviation first");
    cdf->add_option("--per-decade", cdf_per_decade, "log-downsample output points (0 = keep all)");
    cdf->add_option("--out", cdf_out, "output file");

    // fit
    auto* fit = app.add_subcommand("fit", "maximum-likelihood distribution fits");
    SeriesInputOpts fit_in;
    fit_in.attach(fit);
    std::string fit_model{"se"}, fit_out{"-"};
    double fit_xmin = 0.0;
    bool fit_json = false;
    fit->add_option("--model", fit_model, "se (Weibull/stretched-exponential MLE) or powerlaw")
        ->check(CLI::IsMember({"se", "powerlaw"}))
        ->capture_default_str();
    fit->add_option("--xmin", fit_xmin, "power-law tail threshold (omit to select by KS distance)");
    fit->add_flag("--json", fit_json, "emit the report as JSON");
    fit->add_option("--out", fit_out, "output file");

    // synth
    auto* synth = app.add_subcommand("synth", "seeded synthetic series with known properties");
    std::string synth_kind{"white"}, synth_out{"-"};
    std::size_t synth_len = 0;
    std::uint64_t synth_seed = 1;
    double synth_h = 0.5, synth_p = 0.5, synth_alpha = 1.0, synth_x0 = 1.0, synth_beta = 3.0,
           synth_xmin = 1.0, synth_phi = 0.0;
    int synth_levels = 0;
    synth->add_option("--kind", synth_kind,
                      "white, ar1, fgn, cascade, weibull-renewal or pareto")
        ->check(CLI::IsMember({"white", "ar1", "fgn", "cascade", "weibull-renewal", "pareto"}))
        ->capture_default_str();
    synth->add_option("--length", synth_len, "series length (cascade: 2^levels, implied)");
    synth->add_option("--seed", synth_seed, "64-bit seed")->capture_default_str();
    synth->add_option("--hurst", synth_h, "fgn Hurst exponent")->capture_default_str();
    synth->add_option("--p", synth_p, "cascade weight")->capture_default_str();
    synth->add_option("--levels", synth_levels, "cascade dyadic refinements");
    synth->add_option("--alpha", synth_alpha, "weibull-renewal shape")->capture_default_str();
    synth->add_option("--x0", synth_x0, "weibull-renewal scale")->capture_default_str();
    synth->add_option("--beta", synth_beta, "pareto survival exponent")->capture_default_str();
    synth->add_option("--xmin", synth_xmin, "pareto threshold")->capture_default_str();
    synth->add_option("--phi", synth_phi, "ar1 coefficient")->capture_default_str();
    synth->add_option("--out", synth_out, "output file");

    // surrogate
    auto* sur = app.add_subcommand("surrogate", "shuffled surrogate preserving the value multiset");
    SeriesInputOpts sur_in;
    sur_in.attach(sur);
    std::uint64_t sur_seed = 1;
    std::string sur_out{"-"};
    sur->add_option("--seed", sur_seed, "shuffle seed")->capture_default_str();
    sur->add_option("--out", sur_out, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (stats->parsed())
            cmd_stats(stats_in, stats_out, stats_json, stats_rolling, stats_window, stats_step,
                      stats_stat);
        else if (bin->parsed())
            cmd_bin(bin_in, bin_fmt, bin_order, bin_dt, bin_out);
        else if (des->parsed())
            cmd_deseason(des_in, des_mode, des_pat_out, des_pat_in, des_out);
        else if (acf_cmd->parsed())
            cmd_acf(acf_in, acf_des, acf_maxlag, acf_per_decade, acf_linear, acf_est, acf_mean_dt,
                    acf_out);
        else if (mf->parsed())
            cmd_mfdfa(mf_in, mf_des, mf_q, mf_s, mf_m, mf_fit, mf_prefix);
        else if (mc->parsed())
            cmd_mfdcca(mc_in, mc_in_y, mc_des, mc_q, mc_s, mc_m, mc_out);
        else if (rho->parsed())
            cmd_rho(rho_in, rho_in_y, rho_des, rho_q_val, rho_s, rho_m, rho_rolling, rho_scale,
                    rho_window, rho_step, rho_out);
        else if (cdf->parsed())
            cmd_cdf(cdf_in, cdf_norm, cdf_per_decade, cdf_out);
        else if (fit->parsed())
            cmd_fit(fit_in, fit_model, fit_xmin, fit_json, fit_out);
        else if (synth->parsed())
            cmd_synth(synth_kind, synth_len, synth_seed, synth_h, synth_p, synth_levels,
                      synth_alpha, synth_x0, synth_beta, synth_xmin, synth_phi, synth_out);
        else if (sur->parsed())
            cmd_surrogate(sur_in, sur_seed, sur_out);
    } catch (const std::exception& e) {
        std::cerr << "mfitt: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
