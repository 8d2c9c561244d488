// End-to-end checks of the mfitt binary: each test shells out to the built
// executable and inspects its output files.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mfitt/series_io.hpp"
#include "mfitt/synth.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = MFITT_BIN;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mfitt_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " 2>/dev/null";
    return std::system(cmd.c_str());
}

int run_sh(const std::string& shell_line) { return std::system(("sh -c '" + shell_line + "' 2>/dev/null").c_str()); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

mfitt::SeriesData load(const std::string& path, int tcol = 0, int vcol = 0) {
    std::ifstream in(path);
    return mfitt::read_series(in, tcol, vcol);
}

// key-value report files: "key value" lines after '#' headers
double report_value(const std::string& text, const std::string& key) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size() + 1));
    }
    ADD_FAILURE() << "key '" << key << "' not found in report:\n" << text;
    return 0.0;
}

} // namespace

TEST(Cli, SynthIsDeterministicAndSelfDescribing) {
    TempDir dir;
    ASSERT_EQ(run("synth --kind ar1 --phi 0.5 --length 1000 --seed 9 --out " + dir.file("a.txt")), 0);
    ASSERT_EQ(run("synth --kind ar1 --phi 0.5 --length 1000 --seed 9 --out " + dir.file("b.txt")), 0);
    const std::string a = slurp(dir.file("a.txt"));
    EXPECT_EQ(a, slurp(dir.file("b.txt"))); // byte-identical reruns
    EXPECT_EQ(a.rfind("# mfitt synth", 0), 0u);
    EXPECT_NE(a.find("seed=9"), std::string::npos);
    EXPECT_EQ(load(dir.file("a.txt")).values.size(), 1000u);
}

TEST(Cli, StatsReportOnTicks) {
    TempDir dir;
    {
        std::ofstream ticks(dir.file("ticks.csv"));
        ticks << "100,10.0,1\n101,10.5,2\n101,10.4,1\n104,10.2,0.5\n";
    }
    ASSERT_EQ(run("stats --in " + dir.file("ticks.csv") + " --ticks --out " + dir.file("r.txt")), 0);
    const std::string rep = slurp(dir.file("r.txt"));
    EXPECT_DOUBLE_EQ(report_value(rep, "T"), 4.0);
    EXPECT_DOUBLE_EQ(report_value(rep, "count"), 3.0);
    EXPECT_NEAR(report_value(rep, "mean"), 4.0 / 3.0, 1e-9);
    EXPECT_NEAR(report_value(rep, "zero_fraction"), 1.0 / 3.0, 1e-9);
}

TEST(Cli, StatsJsonMirror) {
    TempDir dir;
    ASSERT_EQ(run("synth --kind white --length 5000 --seed 3 --out " + dir.file("w.txt")), 0);
    ASSERT_EQ(run("stats --in " + dir.file("w.txt") + " --json --out " + dir.file("w.json")), 0);
    auto j = nlohmann::json::parse(slurp(dir.file("w.json")));
    EXPECT_EQ(j["count"], 5000);
    EXPECT_NEAR(j["mean"].get<double>(), 0.0, 0.1);
    EXPECT_NEAR(j["std"].get<double>(), 1.0, 0.05);
}

TEST(Cli, BinConservesCountsAndVolume) {
    TempDir dir;
    {
        std::ofstream ticks(dir.file("ticks.csv"));
        double t = 0.0;
        for (int i = 0; i < 100; ++i) {
            t += 3.0;
            ticks << t << "," << 10.0 + (i % 5) * 0.1 << "," << (i % 3) << "\n";
        }
    }
    ASSERT_EQ(run("bin --in " + dir.file("ticks.csv") + " --dt 10 --out " + dir.file("b.txt")), 0);
    mfitt::SeriesData n = load(dir.file("b.txt"), 1, 2);
    double total = 0.0;
    for (double v : n.values) total += v;
    EXPECT_DOUBLE_EQ(total, 100.0);
}

TEST(Cli, DeseasonFlattensPeriodicSeries) {
    TempDir dir;
    {
        std::ofstream f(dir.file("s.txt"));
        f.precision(17);
        for (int i = 0; i < 5 * 144; ++i) { // 5 days, 10-minute sampling
            const double ts = 1.6e9 + i * 600.0;
            const int hour = static_cast<int>(std::fmod(ts, 86400.0) / 3600.0);
            f << ts << ' ' << 1.0 + 0.5 * std::sin(2 * 3.14159265358979 * hour / 24.0) << '\n';
        }
    }
    ASSERT_EQ(run("deseason --in " + dir.file("s.txt") + " --mode daily --pattern-out " +
                  dir.file("pat") + " --out " + dir.file("d.txt")),
              0);
    mfitt::SeriesData out = load(dir.file("d.txt"));
    for (double v : out.values) EXPECT_NEAR(v, 1.0, 1e-9);
    // pattern file is reusable
    ASSERT_EQ(run("deseason --in " + dir.file("s.txt") + " --mode daily --pattern-in " +
                  dir.file("pat") + " --out " + dir.file("d2.txt")),
              0);
    EXPECT_EQ(slurp(dir.file("d.txt")), slurp(dir.file("d2.txt")));
}

TEST(Cli, AcfOnAr1) {
    TempDir dir;
    ASSERT_EQ(run("synth --kind ar1 --phi 0.5 --length 100000 --seed 5 --out " + dir.file("x.txt")), 0);
    ASSERT_EQ(run("acf --in " + dir.file("x.txt") + " --max-lag 10 --linear --out " + dir.file("c.txt")), 0);
    mfitt::SeriesData c = load(dir.file("c.txt"), 1, 3);
    ASSERT_EQ(c.values.size(), 10u);
    EXPECT_NEAR(c.values[0], 0.5, 0.02);  // C(1)
    EXPECT_NEAR(c.values[1], 0.25, 0.02); // C(2)
}

// the spec's own end-to-end pipeline: synth cascade | mfdfa, h(2) close to
// the analytic cascade exponent
TEST(Cli, SynthPipesToMfdfa) {
    TempDir dir;
    const std::string prefix = dir.file("mf");
    ASSERT_EQ(run_sh(kBin + " synth --kind cascade --p 0.3 --levels 16 --seed 7 | " + kBin +
                     " mfdfa --in - --q -4:4:0.25 --s 16:6553:x20 --fit 64:6553 --out-prefix " +
                     prefix),
              0);
    mfitt::SeriesData hq = load(prefix + ".hq.txt", 1, 2);
    double h2 = 0.0;
    std::ifstream f(prefix + ".hq.txt");
    std::string line;
    while (std::getline(f, line)) {
        if (line.rfind("2 ", 0) == 0 || line.rfind("2\t", 0) == 0)
            h2 = std::stod(line.substr(2));
    }
    EXPECT_NEAR(h2, mfitt::cascade_analytic_hq(0.3, 2.0), 0.05);
    EXPECT_TRUE(fs::exists(prefix + ".surface.txt"));
    EXPECT_TRUE(fs::exists(prefix + ".falpha.txt"));
    const std::string surface = slurp(prefix + ".surface.txt");
    EXPECT_EQ(surface.rfind("# mfitt mfdfa", 0), 0u); // config header present
}

TEST(Cli, MfdfaOutputsAreReproducibleAcrossThreadCounts) {
    TempDir dir;
    ASSERT_EQ(run("synth --kind fgn --hurst 0.7 --length 65536 --seed 13 --out " + dir.file("x.txt")), 0);
    ASSERT_EQ(run("--threads 1 mfdfa --in " + dir.file("x.txt") + " --q -2:2:0.5 --s 16:6000:x10 " +
                  "--fit 16:6000 --out-prefix " + dir.file("t1")),
              0);
    ASSERT_EQ(run("--threads 8 mfdfa --in " + dir.file("x.txt") + " --q -2:2:0.5 --s 16:6000:x10 " +
                  "--fit 16:6000 --out-prefix " + dir.file("t8")),
              0);
    EXPECT_EQ(slurp(dir.file("t1.surface.txt")).substr(200), slurp(dir.file("t8.surface.txt")).substr(200));
    EXPECT_EQ(slurp(dir.file("t1.hq.txt")).substr(200), slurp(dir.file("t8.hq.txt")).substr(200));
}

TEST(Cli, RhoSelfPairIsUnity) {
    TempDir dir;
    ASSERT_EQ(run("synth --kind fgn --hurst 0.6 --length 20000 --seed 2 --out " + dir.file("x.txt")), 0);
    ASSERT_EQ(run("rho --in " + dir.file("x.txt") + " --in-y " + dir.file("x.txt") +
                  " --q 2 --s 8:2000:x5 --out " + dir.file("rho.txt")),
              0);
    mfitt::SeriesData rho = load(dir.file("rho.txt"), 1, 2);
    for (double v : rho.values) EXPECT_NEAR(v, 1.0, 1e-9);
}

TEST(Cli, CdfAndFitRoundTrip) {
    TempDir dir;
    ASSERT_EQ(run("synth --kind weibull-renewal --alpha 0.7 --x0 1 --length 200000 --seed 21 --out " +
                  dir.file("w.txt")),
              0);
    ASSERT_EQ(run("cdf --in " + dir.file("w.txt") + " --normalize --per-decade 20 --out " + dir.file("c.txt")), 0);
    mfitt::SeriesData curve = load(dir.file("c.txt"), 1, 2);
    for (std::size_t i = 1; i < curve.values.size(); ++i)
        ASSERT_LE(curve.values[i], curve.values[i - 1]);

    ASSERT_EQ(run("fit --in " + dir.file("w.txt") + " --model se --json --out " + dir.file("f.json")), 0);
    auto j = nlohmann::json::parse(slurp(dir.file("f.json")));
    EXPECT_NEAR(j["alpha"].get<double>(), 0.7, 0.02);
    EXPECT_EQ(j["kind"], "stretched-exponential");
}

TEST(Cli, SurrogatePreservesMultiset) {
    TempDir dir;
    ASSERT_EQ(run("synth --kind pareto --beta 2 --length 5000 --seed 4 --out " + dir.file("p.txt")), 0);
    ASSERT_EQ(run("surrogate --in " + dir.file("p.txt") + " --seed 11 --out " + dir.file("s.txt")), 0);
    auto orig = load(dir.file("p.txt")).values;
    auto shuf = load(dir.file("s.txt")).values;
    ASSERT_EQ(orig.size(), shuf.size());
    EXPECT_NE(orig, shuf);
    std::sort(orig.begin(), orig.end());
    std::sort(shuf.begin(), shuf.end());
    for (std::size_t i = 0; i < orig.size(); ++i) ASSERT_DOUBLE_EQ(orig[i], shuf[i]);
}

TEST(Cli, ErrorsExitNonzeroWithDiagnostic) {
    TempDir dir;
    EXPECT_NE(run("stats --in " + dir.file("missing.txt")), 0);
    {
        std::ofstream bad(dir.file("bad.csv"));
        bad << "1,2,3\nnot,a,row\n";
    }
    // diagnostic lands on stderr and names the line
    const std::string cmd =
        kBin + " stats --ticks --in " + dir.file("bad.csv") + " 2>" + dir.file("err.txt");
    EXPECT_NE(std::system(cmd.c_str()), 0);
    EXPECT_NE(slurp(dir.file("err.txt")).find("line 2"), std::string::npos);
    EXPECT_NE(run("nonsense-subcommand"), 0);
}
