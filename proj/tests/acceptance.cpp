// Acceptance checks: one PASS/FAIL line per criterion, tolerances fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aicg/bias_t3.hpp"
#include "aicg/cli.hpp"
#include "aicg/monte_carlo.hpp"
#include "aicg/selection.hpp"
#include "aicg/special.hpp"

using namespace aicg;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > limit_seconds) {
        o.pass = false;
        o.detail += fmt("; runtime over %.3g s", limit_seconds);
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

McSettings mc(std::uint64_t seed, std::int64_t samples) {
    McSettings s;
    s.seed = seed;
    s.samples = samples;
    return s;
}

std::string run_cli(const std::vector<std::string>& args, int* code) {
    std::ostringstream out, err;
    *code = cli::run(args, out, err);
    return out.str();
}

EstimatorRule plugin() {
    EstimatorRule r;
    r.method = Method::PlugIn;
    return r;
}

}  // namespace

int main() {
    criterion(1, "T1 closed form", 1e-3, [] {
        const double b0 = bias_t1(0.0).value;
        const double b5 = bias_t1(5.0).value;
        const double err = std::abs(b5 - (1.0 + 0.999999426696856241612));
        return Outcome{b0 == 1.0 && err <= 1e-9, fmt("bias(0)=%.17g", b0) + fmt(", |bias(5)-oracle|=%.3g", err)};
    });

    criterion(2, "T3 singular constant", 1.0, [] {
        const double q = bias_t3(0.0, kPi / 6.0).value;
        const double closed = 2.0 + 3.0 * std::sqrt(3.0) / (2.0 * kPi);
        const double hl = bias_halflines_at_singularity(ModelSpec::halflines({2.0 * kPi / 3.0, 4.0 * kPi / 3.0, 2.0 * kPi}))
                              .value;
        const double e1 = std::abs(q - closed);
        const double e2 = std::abs(q - hl);
        return Outcome{e1 <= 1e-6 && e2 <= 1e-9, fmt("|quad-closed|=%.3g", e1) + fmt(", |quad-halflines|=%.3g", e2)};
    });

    criterion(3, "half-lines corollaries", 1.0, [] {
        const double l1 = bias_halflines_at_singularity(ModelSpec::halflines({2.0 * kPi})).value;
        const double l2 = bias_halflines_at_singularity(ModelSpec::halflines({kPi, 2.0 * kPi})).value;
        const double lbig = halflines_equal_sectors(10000);
        std::mt19937_64 gen(20240101);
        std::uniform_real_distribution<double> u(0.01, 1.0);
        double worst = 0.0;
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> w(static_cast<std::size_t>(1 + rep % 6));
            double s = 0.0;
            for (auto& x : w) s += (x = u(gen));
            std::vector<double> sectors{kPi};
            for (double x : w) sectors.push_back(x / s * kPi);
            worst = std::max(worst, std::abs(halflines_small_first_sector(sectors) - halflines_large_first_sector(sectors)));
        }
        const bool ok = l1 == 1.0 && std::abs(l2 - 2.0) <= 1e-15 && std::abs(lbig - 4.0) <= 1e-6 && worst <= 1e-12;
        return Outcome{ok, fmt("l=1 -> %.17g", l1) + fmt(", l=2 -> %.17g", l2) + fmt(", l=1e4 -> %.12g", lbig) +
                               fmt(", max branch gap at pi=%.3g", worst)};
    });

    criterion(4, "Monte Carlo vs closed form / quadrature", 120.0, [] {
        int bad = 0;
        double worst_z = 0.0;
        std::uint64_t k = 0;
        for (const ModelSpec& m : {ModelSpec::t1(1), ModelSpec::t3()}) {
            for (int i = 0; i <= 10; ++i, ++k) {
                const double mu = 0.5 * i;
                const Cone cone = cone_of(m, GeometryParams::from_mu0y(mu, 1e6));
                const BiasEstimate b = mc_bias_gaussian(cone, {0.0, mu}, mc(derive_seed(4, k), 1000000));
                const double truth = bias_at(m, mu, 1e6);
                const double z = std::abs(b.value - truth) / *b.std_error;
                worst_z = std::max(worst_z, z);
                if (z > 3.0) ++bad;
            }
        }
        return Outcome{bad == 0, std::to_string(bad) + " of 22 points beyond 3 SE" + fmt(", max |z|=%.3f", worst_z)};
    });

    criterion(5, "pointwise nonnegativity", 60.0, [] {
        struct Case {
            Cone cone;
            TransformedPoint mu0;
        };
        const std::vector<Case> cases{
            {cone_of(ModelSpec::t1(1), GeometryParams::from_mu0y(1.0, 1e6)), {0.0, 1.0}},
            {cone_of(ModelSpec::t3(), GeometryParams::from_mu0y(0.0, 1e6)), {0.0, 0.0}},
            {cone_of(ModelSpec::t3(), GeometryParams::from_mu0y(1.0, 1e6)), {0.0, 1.0}},
            {cone_of(ModelSpec::polytomy(), GeometryParams{}), {0.0, 0.0}},
            {cone_of(ModelSpec::unconstrained(), GeometryParams{}), {0.3, -0.7}},
            {cone_of(ModelSpec::halflines({1.2 * kPi, 1.6 * kPi, 2.0 * kPi}), GeometryParams{}), {0.0, 0.0}},
        };
        double worst = INFINITY;
        std::uint64_t k = 0;
        for (const auto& c : cases) {
            worst = std::min(worst, mc_bias_gaussian_summary(c.cone, c.mu0, mc(derive_seed(5, k++), 1000000)).min_statistic);
        }
        return Outcome{worst >= -1e-12, "6 cones x 1e6 draws, min statistic " + fmt("%.3g", worst)};
    });

    criterion(6, "finite-n target", 300.0, [] {
        std::string detail;
        bool ok = true;
        const auto grid = GridSpec::parse("0:5:0.5").points();
        std::uint64_t k = 0;
        for (const ModelSpec& m : {ModelSpec::t1(1), ModelSpec::t3()}) {
            const auto rows = curve_grid(m, 1000, grid, {}, mc(derive_seed(6, k++), 100000));
            double worst = 0.0, worst_mu = 0.0, worst_gap = 0.0;
            for (const auto& r : rows) {
                const double gap = std::abs(r.target.estimate - r.aicg_bias);
                const double allowed = std::max(3.0 * r.target.std_error, 0.05);
                if (gap / allowed > worst) {
                    worst = gap / allowed;
                    worst_mu = r.mu0y;
                    worst_gap = gap;
                }
                if (gap > allowed) ok = false;
            }
            detail += m.id() + fmt(" worst gap/allowed=%.3f", worst) + fmt(" (gap %.4f", worst_gap) +
                      fmt(" at mu=%.1f); ", worst_mu);
        }
        const BiasEstimate u =
            mc_target_trinomial(ModelSpec::unconstrained(), SimplexPoint::centroid(), 1000, mc(derive_seed(6, k), 100000));
        const double gap = std::abs(u.value - 4.0);
        if (gap > std::max(3.0 * *u.std_error, 0.05)) ok = false;
        detail += fmt("unconstrained target=%.4f", u.value);
        return Outcome{ok, detail};
    });

    criterion(7, "neighborhood radii", 300.0, [] {
        const auto grid = GridSpec::parse("0:5:0.02").points();
        const double t1m = minimax_radius(ModelSpec::t1(1), grid, 1e6).radius;
        const double t3u = uo_radius(ModelSpec::t3(), grid, 1e6, 1.02e-14).radius;
        const double t3m = minimax_radius(ModelSpec::t3(), grid, 1e6).radius;
        const bool ok = std::abs(t1m - 0.95) <= 0.05 && std::abs(t3u - 1.77) <= 0.1 && std::abs(t3m - 2.21) <= 0.1;
        return Outcome{ok, fmt("T1 minimax=%.4f", t1m) + fmt(", T3 uo=%.4f", t3u) + fmt(", T3 minimax=%.4f", t3m)};
    });

    criterion(8, "T1 uniformly-outperforming dominance", 1.0, [] {
        int bad = 0;
        for (int i = 0; i <= 500; ++i) {
            const double mu = 0.01 * i;
            const double truth = 2.0 * normal_cdf(mu);
            const double uo = 2.0 - normal_cdf(-mu);
            if (!(truth < uo && uo < 2.0)) ++bad;
        }
        return Outcome{bad == 0, std::to_string(bad) + " of 501 grid points violate 2Phi(mu) < 2 - Phi(-mu) < 2"};
    });

    criterion(9, "consistency simulation", 120.0, [] {
        const McSettings s = mc(9, 10000);
        const double at = consistency_frequency(ModelSpec::t1(1), SimplexPoint::centroid(), 1000000, EtaRate{}, s).frequency;
        const double away =
            consistency_frequency(ModelSpec::t1(1), point_on_topology(1, 0.9), 1000000, EtaRate{}, s.with_seed(10)).frequency;
        return Outcome{at >= 0.999 && away <= 0.001, fmt("P(snap | boundary)=%.4f", at) + fmt(", P(snap | phi0=0.9)=%.4f", away)};
    });

    criterion(10, "determinism across reruns and worker counts", 300.0, [] {
        const std::vector<std::vector<std::string>> commands{
            {"bias", "--model", "t3", "--mu0y", "1.2", "--method", "monte-carlo", "--seed", "17", "--samples", "200000"},
            {"bias", "--model", "t1", "--counts", "400,300,300", "--method", "bootstrap", "--seed", "5", "--replicates", "20000"},
            {"target", "--model", "t3", "--n", "1000", "--grid", "0:2:0.5", "--samples", "20000", "--seed", "8",
             "--estimators", "plugin,bootstrap", "--replicates", "50"},
            {"select", "--counts", "90,60,50", "--models", "t1:1,t3,polytomy,unconstrained", "--method", "bootstrap",
             "--seed", "3", "--replicates", "5000"},
            {"regions", "--pair", "t3,unconstrained", "--n", "200", "--resolution", "50", "--method", "bootstrap",
             "--seed", "4", "--replicates", "200"},
        };
        int bad = 0;
        for (const auto& base : commands) {
            std::string first;
            for (const char* workers : {"1", "1", "4"}) {
                auto args = base;
                args.insert(args.end(), {"--workers", workers});
                int code = 0;
                const std::string out = run_cli(args, &code);
                if (code != 0 || out.empty()) {
                    ++bad;
                    break;
                }
                if (first.empty()) first = out;
                else if (out != first) ++bad;
            }
        }
        return Outcome{bad == 0, std::to_string(commands.size()) + " stochastic commands x 3 runs, " +
                                     std::to_string(bad) + " mismatches"};
    });

    criterion(11, "decision-region properties", 120.0, [] {
        const auto t1p = region_grid({ModelSpec::t1(1), ModelSpec::polytomy()}, 200, 200, plugin(), 0);
        const auto t3u = region_grid({ModelSpec::t3(), ModelSpec::unconstrained()}, 200, 200, plugin(), 0);
        std::int64_t violations = symmetry_violations(t1p, {0, 2, 1});
        for (const std::array<int, 3>& p :
             {std::array<int, 3>{1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}}) {
            violations += symmetry_violations(t3u, p);
        }
        bool probes = true;
        for (const RegionCell* c : centroid_cells(t1p)) probes = probes && c->winner == "polytomy";
        probes = probes && t1p.at(120, 40).winner == "t1:1";
        probes = probes && t3u.at(100, 50).winner == "t3";
        probes = probes && t3u.at(90, 90).winner == "unconstrained";
        const bool connected = label_connected(t1p, "polytomy");
        return Outcome{violations == 0 && probes && connected,
                       std::to_string(violations) + " symmetry violations, probes " + (probes ? "ok" : "failed") +
                           ", polytomy region " + (connected ? "connected" : "disconnected")};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
