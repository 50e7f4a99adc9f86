// Process-level tests of the spcorr command-line tool: runs the real binary
// on scratch files and checks outputs, exit codes and reproducibility.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spcorr/io.hpp"

namespace fs = std::filesystem;
using namespace spcorr;

namespace {

const std::string kBin = SPCORR_BIN;
const fs::path kWork = SPCORR_WORKDIR;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const fs::path out_file = kWork / "stdout.txt";
    const std::string cmd = kBin + " " + args + " > " + out_file.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("setup scratch directory") {
    fs::create_directories(kWork);
    CHECK(fs::exists(kWork));
}

TEST_CASE("corr: documented examples") {
    {
        const auto r = run("corr --family classical --beta 1 --regime markov --pairing PV "
                           "--m 2 --n 2 --t 3 --s 2");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("m,n,t,s,pairing,regime,value,lower,upper,asymptotic") !=
              std::string::npos);
        const double v = std::stod(r.out.substr(r.out.find("PV,markov,") + 10));
        CHECK(v == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    }
    {
        // zero lag under the inverse clock: bracket collapses to 1
        const auto r = run("corr --family classical --beta 1 --regime inverse --sub stable:0.5 "
                           "--pairing PP --m 1 --n 1 --t 1 --s 1");
        CHECK(r.exit_code == 0);
        const double v = std::stod(r.out.substr(r.out.find("PP,inverse,") + 11));
        CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
    }
    {
        const auto r = run("corr --family classical --beta 1 --regime bochner --sub poisson:2 "
                           "--pairing PV --m 1 --n 2 --t 2 --s 1");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("PV,bochner,0,") != std::string::npos);
    }
}

TEST_CASE("corr: actionable errors and 17-digit output") {
    {
        const auto r = run("corr --regime bochner --m 1 --n 1 --t 1 --s 1");
        CHECK(r.exit_code != 0);
        CHECK(r.out.find("requires --sub") != std::string::npos);
    }
    {
        const auto r = run("corr --regime warp --m 1 --n 1 --t 1 --s 1");
        CHECK(r.exit_code != 0);
        CHECK(r.out.find("unknown regime") != std::string::npos);
    }
    {
        // PP at m = n multiplies by an exact cosine of 1: the printed value
        // is exp(-1) to the last digit, with 17 significant digits.
        const auto r = run("corr --family classical --beta 1 --regime markov --pairing PP "
                           "--m 1 --n 1 --t 2 --s 1");
        CHECK(r.out.find("0.36787944117144233") != std::string::npos);
    }
}

TEST_CASE("simulate: row count, determinism, manifest round trip") {
    const fs::path a = kWork / "a.csv";
    const fs::path b = kWork / "b.csv";
    const std::string common = "simulate --family classical --beta 1 --regime markov "
                               "--paths 1000 --grid 0,1,2 --seed 42 --out ";
    CHECK(run(common + a.string()).exit_code == 0);
    CHECK(run(common + b.string()).exit_code == 0);

    // 1000 paths x 3 grid times + header
    std::ifstream in(a);
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3001);

    CHECK(slurp(a) == slurp(b));  // same seed, byte-identical

    // manifest accompanies the output and reruns bit-exactly
    const RunManifest m = RunManifest::from_json_file(a.string() + ".manifest.json");
    CHECK(m.command == "simulate");
    CHECK(m.seed == 42);
    const fs::path c = kWork / "c.csv";
    std::string cmd = "simulate";
    for (const auto& [k, v] : m.parameters) {
        if (k == "out" || v.empty()) continue;
        cmd += " --" + (k == "summary_m" ? std::string("summary-m") : k) + " " + v;
    }
    cmd += " --out " + c.string();
    CHECK(run(cmd).exit_code == 0);
    CHECK(slurp(a) == slurp(c));
}

TEST_CASE("simulate: summary lag correlation near the closed form") {
    const fs::path paths = kWork / "sum_paths.csv";
    const fs::path summary = kWork / "sum.csv";
    const auto r = run("simulate --family classical --beta 1 --regime markov --paths 20000 "
                       "--grid 0,1 --seed 7 --out " +
                       paths.string() + " --summary " + summary.string());
    CHECK(r.exit_code == 0);
    const CsvTable t = read_csv(summary.string());
    const std::size_t c_rho = csv_column(t, "rho");
    const std::size_t c_se = csv_column(t, "se");
    REQUIRE(t.rows.size() == 1);
    const double rho = std::stod(t.rows[0][c_rho]);
    const double se = std::stod(t.rows[0][c_se]);
    CHECK(std::abs(rho - std::exp(-1.0)) < 3.0 * se);
}

TEST_CASE("estimate: end-to-end verdicts on diffusion data") {
    const fs::path paths = kWork / "est_paths.csv";
    const fs::path verdicts = kWork / "verdicts.json";
    CHECK(run("simulate --family classical --beta 1 --regime markov --paths 30000 "
              "--grid 0,1 --seed 3 --out " +
              paths.string())
              .exit_code == 0);
    CHECK(run("estimate --input " + paths.string() +
              " --candidates \"classical:1;smallpert:2\" --m 1,2,3 --out " + verdicts.string())
              .exit_code == 0);

    nlohmann::json v;
    std::ifstream(verdicts) >> v;
    for (const auto& s : v.at("symmetry")) {
        bool classical_ok = false, smallpert_rejected = true;
        for (const auto& name : s.at("accepted")) {
            if (name.get<std::string>().find("classical") != std::string::npos)
                classical_ok = true;
            if (name.get<std::string>().find("smallpert") != std::string::npos)
                smallpert_rejected = false;
        }
        CHECK(classical_ok);
        CHECK(smallpert_rejected);
    }
    CHECK(v.at("jump_activity").at("label").get<std::string>() == "pure-diffusion");
    CHECK(fs::exists(verdicts.string() + ".manifest.json"));
}

TEST_CASE("corr: --out writes CSV plus manifest; reruns are byte-identical") {
    const fs::path a = kWork / "corr_a.csv";
    const fs::path b = kWork / "corr_b.csv";
    const std::string common = "corr --family smallpert --b 2 --regime inverse --sub poisson:2 "
                               "--pairing PV --m 2 --n 2 --t 2,5 --s 1 --out ";
    CHECK(run(common + a.string()).exit_code == 0);
    CHECK(run(common + b.string()).exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(fs::exists(a.string() + ".manifest.json"));
    const RunManifest m = RunManifest::from_json_file(a.string() + ".manifest.json");
    CHECK(m.command == "corr");
}

TEST_CASE("estimate: identical runs produce byte-identical verdict files") {
    const fs::path paths = kWork / "det_paths.csv";
    const fs::path v1 = kWork / "det1.json";
    const fs::path v2 = kWork / "det2.json";
    CHECK(run("simulate --family classical --beta 1 --regime markov --paths 5000 "
              "--grid 0,1 --seed 77 --out " +
              paths.string())
              .exit_code == 0);
    const std::string est = "estimate --input " + paths.string() +
                            " --candidates classical:1 --m 1,2 --out ";
    CHECK(run(est + v1.string()).exit_code == 0);
    CHECK(run(est + v2.string()).exit_code == 0);
    // only the requested output name differs between the two runs
    std::string s1 = slurp(v1), s2 = slurp(v2);
    const auto scrub = [](std::string s, const std::string& name) {
        for (std::size_t pos = s.find(name); pos != std::string::npos; pos = s.find(name))
            s.replace(pos, name.size(), "OUT");
        return s;
    };
    CHECK(scrub(s1, v1.string()) == scrub(s2, v2.string()));
}

TEST_CASE("estimate: malformed CSV reports the line") {
    const fs::path bad = kWork / "bad.csv";
    std::ofstream(bad) << "path_id,t,value\n0,0,1.5\n0,oops,2.5\n";
    const auto r = run("estimate --input " + bad.string() + " --candidates classical:1");
    CHECK(r.exit_code != 0);
    CHECK(r.out.find("line 3") != std::string::npos);
}

TEST_CASE("simulate: inverse regime through the CLI") {
    const fs::path out = kWork / "inv.csv";
    const auto r = run("simulate --family classical --beta 1 --regime inverse "
                       "--sub poisson:2 --paths 2000 --grid 1,3 --seed 5 --out " +
                       out.string() + " --summary " + (kWork / "inv_sum.csv").string());
    CHECK(r.exit_code == 0);
    const CsvTable t = read_csv((kWork / "inv_sum.csv").string());
    const double rho = std::stod(t.rows[0][csv_column(t, "rho")]);
    const double se = std::stod(t.rows[0][csv_column(t, "se")]);
    // closed-form bracket for the inverse-Poisson clock at (t,s) = (3,1)
    const double want = std::pow(1.5, std::floor(2.0) - std::floor(4.0));
    CHECK(std::abs(rho - want) < 4.0 * se);
    // regimes that need a subordinator refuse to run without one
    CHECK(run("simulate --regime inverse --paths 10 --grid 1,2 --out " +
              (kWork / "x.csv").string())
              .exit_code != 0);
}

TEST_CASE("validate: exit codes follow the checks") {
    {
        const auto r = run("validate --family classical");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("[PASS]") != std::string::npos);
        CHECK(r.out.find("[FAIL]") == std::string::npos);
    }
    {
        const auto r = run("validate --family gausslag --alpha 0.6 --b 1");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("biorthogonality/gausslag") != std::string::npos);
    }
    {
        // deliberately corrupted tolerance: everything fails, exit nonzero
        const auto r = run("validate --family classical --tolerance 1e-30");
        CHECK(r.exit_code != 0);
        CHECK(r.out.find("[FAIL]") != std::string::npos);
    }
}

TEST_CASE("config file: flags take precedence over file values") {
    const fs::path cfg = kWork / "run.cfg";
    std::ofstream(cfg) << "# defaults for corr\ncorr.m = 3\ncorr.n = 3\ncorr.t = 2\ncorr.s = 1\n";
    {
        const auto r = run("--config " + cfg.string() +
                           " corr --family classical --beta 1 --regime markov --pairing PP");
        CHECK(r.exit_code == 0);
        // from the config: m = n = 3, lag 1
        const double v = std::stod(r.out.substr(r.out.find("PP,markov,") + 10));
        CHECK(v == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
    }
    {
        const auto r = run("--config " + cfg.string() +
                           " corr --family classical --beta 1 --regime markov --pairing PP --m 1 --n 1");
        const double v = std::stod(r.out.substr(r.out.find("PP,markov,") + 10));
        CHECK(v == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    }
}
