#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sar/errors.hpp"
#include "sar/rng.hpp"
#include "sar/stats.hpp"
#include "support.hpp"

using namespace sar;

namespace {

std::vector<double> draw(DistFamily family, double p1, double p2, std::size_t n,
                         std::uint64_t seed) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        StreamRng rng(seed, i);
        x[i] = sample_amplitude(family, p1, p2, rng);
    }
    return x;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, eps / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, eps / 2.0, depth - 1);
}

// panel-split so a narrow peak inside a wide interval cannot be missed
double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    const int panels = 64;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + (b - a) * i / panels;
        const double hi = a + (b - a) * (i + 1) / panels;
        const double m = 0.5 * (lo + hi);
        total += adaptive_simpson(f, lo, hi, f(lo), f(m), f(hi), eps / panels, 30);
    }
    return total;
}

} // namespace

TEST_CASE("pdf_eval: closed-form spot values") {
    FittedModel expo{DistFamily::Weibull, 1.0, 2.0, 0, 0.0};
    CHECK(pdf_eval(expo, 0.0) == doctest::Approx(0.5)); // alpha=1 reduces to exponential

    FittedModel ray{DistFamily::Rayleigh, 1.0, 0.0, 0, 0.0};
    CHECK(pdf_eval(ray, 1.0) == doctest::Approx(std::exp(-0.5)));

    // Weibull(2, sigma*sqrt(2)) is exactly Rayleigh(sigma)
    const double sigma = 0.73;
    FittedModel ray2{DistFamily::Rayleigh, sigma, 0.0, 0, 0.0};
    FittedModel weib{DistFamily::Weibull, 2.0, sigma * std::sqrt(2.0), 0, 0.0};
    testsup::TestRng rng(5);
    for (int i = 0; i < 20; ++i) {
        const double x = 3.0 * rng.uniform();
        CHECK(pdf_eval(weib, x) == doctest::Approx(pdf_eval(ray2, x)).epsilon(1e-12));
    }

    // support conventions at x = 0
    FittedModel ln{DistFamily::LogNormal, -1.0, 0.6, 0, 0.0};
    FittedModel ig{DistFamily::InverseGaussian, 0.4, 0.7, 0, 0.0};
    FittedModel gam{DistFamily::Gamma, 3.0, 0.14, 0, 0.0};
    CHECK(pdf_eval(ln, 0.0) == 0.0);
    CHECK(pdf_eval(ig, 0.0) == 0.0);
    CHECK(pdf_eval(gam, 0.0) == 0.0);
    CHECK_THROWS_AS((void)pdf_eval(ray, -0.1), std::invalid_argument);
}

TEST_CASE("model_mean: closed forms") {
    FittedModel weib{DistFamily::Weibull, 1.9521, 0.4835, 0, 0.0};
    CHECK(model_mean(weib) == doctest::Approx(0.4287).epsilon(5e-4));

    FittedModel gam{DistFamily::Gamma, 3.0486, 0.1406, 0, 0.0};
    CHECK(model_mean(gam) == doctest::Approx(3.0486 * 0.1406).epsilon(1e-12));
    CHECK(model_mean(gam) == doctest::Approx(0.42863).epsilon(1e-4));

    FittedModel ray{DistFamily::Rayleigh, std::sqrt(2.0 / std::numbers::pi), 0.0, 0, 0.0};
    CHECK(model_mean(ray) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit: weibull recovery near the reference sea-clutter parameters") {
    const auto x = draw(DistFamily::Weibull, 1.9521, 0.4835, 100000, 21);
    const FittedModel m = fit(DistFamily::Weibull, x);
    CHECK(m.p1 == doctest::Approx(1.9521).epsilon(0.03));
    CHECK(m.p2 == doctest::Approx(0.4835).epsilon(0.03));
    CHECK(m.n_samples == x.size());

    // at convergence the profile equation residual is below tolerance
    double num = 0.0, den = 0.0, mean_log = 0.0;
    for (double v : x) {
        const double p = std::pow(v, m.p1);
        num += p * std::log(v);
        den += p;
        mean_log += std::log(v);
    }
    mean_log /= static_cast<double>(x.size());
    const double residual = std::abs(1.0 / m.p1 - (num / den - mean_log));
    CHECK(residual < 1e-7);
}

TEST_CASE("fit: rejects degenerate input") {
    const std::vector<double> same(12, 1.0);
    CHECK_THROWS_AS((void)fit(DistFamily::Rayleigh, same), FitError);
    const std::vector<double> four{1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)fit(DistFamily::Rayleigh, four), FitError);
    std::vector<double> with_zero(20, 0.5);
    with_zero[3] = 0.0;
    CHECK_THROWS_AS((void)fit(DistFamily::Weibull, with_zero), FitError);
}

TEST_CASE("fit: gamma recovery beats a parameter grid around the truth") {
    const auto x = draw(DistFamily::Gamma, 3.0486, 0.1406, 100000, 33);
    const FittedModel m = fit(DistFamily::Gamma, x);
    CHECK(m.p1 == doctest::Approx(3.0486).epsilon(0.05));
    CHECK(m.p2 == doctest::Approx(0.1406).epsilon(0.05));

    double sum = 0.0, sum_log = 0.0;
    for (double v : x) {
        sum += v;
        sum_log += std::log(v);
    }
    const double n = static_cast<double>(x.size());
    double best = -1e300;
    for (int i = 0; i < 200; ++i) {
        const double a = 3.0486 * (0.8 + 0.4 * i / 199.0);
        for (int j = 0; j < 200; ++j) {
            const double b = 0.1406 * (0.8 + 0.4 * j / 199.0);
            const double ll =
                -n * a * std::log(b) - n * std::lgamma(a) + (a - 1.0) * sum_log - sum / b;
            best = std::max(best, ll);
        }
    }
    CHECK(m.log_likelihood >= best - 1e-3 * n);
}

TEST_CASE("fit: every family integrates to one and matches draws") {
    struct Case {
        DistFamily family;
        double p1, p2;
    };
    const Case cases[] = {
        {DistFamily::Weibull, 1.9521, 0.4835},
        {DistFamily::LogNormal, -1.0201, 0.6484},
        {DistFamily::InverseGaussian, 0.4286, 0.7422},
        {DistFamily::Gamma, 3.0486, 0.1406},
        {DistFamily::Rayleigh, 0.3337, 0.0},
    };
    for (const auto& c : cases) {
        CAPTURE(std::string(family_name(c.family)));
        const auto x = draw(c.family, c.p1, c.p2, 50000, 55);
        const FittedModel m = fit(c.family, x);
        // fitted density integrates to 1 over [0, inf)
        double hi = 1.0;
        while (pdf_eval(m, hi) > 1e-16 || hi < 2.0 * model_mean(m)) hi *= 2.0;
        const double integral =
            integrate([&](double t) { return pdf_eval(m, t); }, 1e-12, hi, 1e-9);
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("fit: parameter error shrinks as the sample grows") {
    struct Case {
        DistFamily family;
        double p1, p2;
    };
    const Case cases[] = {
        {DistFamily::Weibull, 1.9521, 0.4835},
        {DistFamily::LogNormal, -1.0201, 0.6484},
        {DistFamily::InverseGaussian, 0.4286, 0.7422},
        {DistFamily::Gamma, 3.0486, 0.1406},
        {DistFamily::Rayleigh, 0.3337, 0.0},
    };
    const std::size_t sizes[] = {1000, 10000, 100000};
    for (const auto& c : cases) {
        CAPTURE(family_name(c.family));
        double med_err[3];
        for (int s = 0; s < 3; ++s) {
            std::vector<double> errs;
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const auto x = draw(c.family, c.p1, c.p2, sizes[s], 100 + seed);
                const FittedModel m = fit(c.family, x);
                const double e1 = std::abs(m.p1 - c.p1) / std::abs(c.p1);
                const double e2 =
                    c.family == DistFamily::Rayleigh ? 0.0 : std::abs(m.p2 - c.p2) / std::abs(c.p2);
                errs.push_back(std::max(e1, e2));
            }
            std::nth_element(errs.begin(), errs.begin() + 10, errs.end());
            med_err[s] = errs[10];
        }
        CHECK(med_err[0] > med_err[1]);
        CHECK(med_err[1] > med_err[2]);
    }
}

TEST_CASE("build_histogram: hand-counted densities and normalization") {
    // six 0.5s, five 1.5s, one 2.0 over [0,2] in two unit-width bins
    std::vector<double> samples;
    samples.insert(samples.end(), 6, 0.5);
    samples.insert(samples.end(), 5, 1.5);
    samples.push_back(2.0);
    const EmpiricalPdf pdf = build_histogram(samples, 2);
    REQUIRE(pdf.bins() == 2);
    CHECK(pdf.bin_edges[0] == doctest::Approx(0.0));
    CHECK(pdf.bin_edges[1] == doctest::Approx(1.0));
    CHECK(pdf.bin_edges[2] == doctest::Approx(2.0));
    CHECK(pdf.density[0] == doctest::Approx(0.5)); // 6 of 12 per unit width
    CHECK(pdf.density[1] == doctest::Approx(0.5));
    pdf.validate();

    testsup::TestRng rng(9);
    std::vector<double> random(5000);
    for (auto& v : random) v = 0.01 + rng.uniform() * 4.0;
    const EmpiricalPdf auto_pdf = build_histogram(random);
    CHECK(auto_pdf.bins() == static_cast<std::size_t>(std::ceil(2.0 * std::cbrt(5000.0))));
    double integral = 0.0;
    for (std::size_t i = 0; i < auto_pdf.bins(); ++i) {
        integral += auto_pdf.density[i] * auto_pdf.bin_width(i);
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS((void)build_histogram(std::vector<double>{}), FitError);
}

TEST_CASE("build_histogram: converges to the generating density") {
    const auto x = draw(DistFamily::Weibull, 1.9521, 0.4835, 1000000, 3);
    const FittedModel truth{DistFamily::Weibull, 1.9521, 0.4835, 0, 0.0};
    const EmpiricalPdf pdf = build_histogram(x, 50); // fixed binning
    double peak = 0.0;
    for (std::size_t i = 0; i < pdf.bins(); ++i) peak = std::max(peak, pdf.density[i]);
    for (std::size_t i = 0; i < pdf.bins(); ++i) {
        const double expect = pdf_eval(truth, pdf.bin_mid(i));
        CHECK(std::abs(pdf.density[i] - expect) < 0.02 * peak);
    }
}

TEST_CASE("kl_distance: zero against own density, hand value, nonnegativity") {
    // histogram assembled from the model's exact bin probabilities
    const FittedModel m{DistFamily::Weibull, 1.9521, 0.4835, 0, 0.0};
    const std::size_t bins = 4000;
    const double hi = 3.0;
    EmpiricalPdf exact;
    exact.n_samples = 1;
    exact.bin_edges.resize(bins + 1);
    exact.density.resize(bins);
    auto cdf = [&](double x) { return testsup::family_cdf(DistFamily::Weibull, m.p1, m.p2, x); };
    const double total = cdf(hi);
    for (std::size_t i = 0; i <= bins; ++i) exact.bin_edges[i] = hi * i / bins;
    for (std::size_t i = 0; i < bins; ++i) {
        const double p = (cdf(exact.bin_edges[i + 1]) - cdf(exact.bin_edges[i])) / total;
        exact.density[i] = p / exact.bin_width(i);
    }
    exact.validate();
    CHECK(std::abs(kl_distance(exact, m)) < 1e-6);

    // two-bin hand computation: 0.5 ln 2 + 0.5 ln(2/3)
    EmpiricalPdf two;
    two.n_samples = 4;
    two.bin_edges = {0.0, 1.0, 2.0};
    two.density = {0.5, 0.5};
    const double d = kl_distance(two, [](double x) { return x < 1.0 ? 0.25 : 0.75; });
    CHECK(d == doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)).epsilon(1e-12));
    CHECK(d == doctest::Approx(0.1438).epsilon(1e-3));

    // nonnegative across random histogram/model pairs
    testsup::TestRng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> samples(50);
        for (auto& v : samples) v = 0.05 + rng.uniform() * 2.0;
        const EmpiricalPdf pdf = build_histogram(samples, 8);
        FittedModel model{DistFamily::Weibull, 0.5 + 3.0 * rng.uniform(),
                          0.2 + 2.0 * rng.uniform(), 0, 0.0};
        CHECK(kl_distance(pdf, model) >= 0.0);
    }
}

TEST_CASE("select_model: picks the generating family") {
    {
        const auto x = draw(DistFamily::Weibull, 1.9521, 0.4835, 100000, 4);
        const KlReport report = select_model(x);
        CHECK(report.best_family == DistFamily::Weibull);
        REQUIRE(report.entries.size() == 5);
        for (const auto& e : report.entries) CHECK(e.fitted);
    }
    {
        const auto x = draw(DistFamily::Rayleigh, 0.3337, 0.0, 100000, 4);
        const KlReport report = select_model(x);
        const bool ok = report.best_family == DistFamily::Rayleigh ||
                        report.best_family == DistFamily::Weibull;
        CHECK(ok); // the Weibull family nests Rayleigh at shape 2
    }
    {
        const auto x = draw(DistFamily::LogNormal, -1.0201, 0.6484, 100000, 4);
        const KlReport report = select_model(x);
        CHECK(report.best_family == DistFamily::LogNormal);
    }
}

TEST_CASE("select_model: best family attains the minimum and order does not matter") {
    auto x = draw(DistFamily::Weibull, 1.9521, 0.4835, 20000, 8);
    const KlReport a = select_model(x);
    double best_kl = 1e300;
    for (const auto& e : a.entries) {
        if (e.fitted) best_kl = std::min(best_kl, e.kl);
    }
    for (const auto& e : a.entries) {
        if (e.family == a.best_family) CHECK(e.kl == doctest::Approx(best_kl));
    }

    std::mt19937_64 shuffler(7);
    std::shuffle(x.begin(), x.end(), shuffler);
    const KlReport b = select_model(x);
    CHECK(b.best_family == a.best_family);
    REQUIRE(b.entries.size() == a.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].model.p1 == b.entries[i].model.p1);
        CHECK(a.entries[i].model.p2 == b.entries[i].model.p2);
        CHECK(a.entries[i].kl == b.entries[i].kl);
    }
}
