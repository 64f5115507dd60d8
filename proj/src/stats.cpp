#include "sar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sar/errors.hpp"

namespace sar {

namespace {

constexpr double kPi = std::numbers::pi;

double digamma(double x) {
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
    return result;
}

double trigamma(double x) {
    double result = 0.0;
    while (x < 6.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += inv * (1.0 + 0.5 * inv + inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0)));
    return result;
}

struct SampleStats {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;       // biased (divides by n)
    double mean_log = 0.0;
    double var_log = 0.0;   // biased
    double sum_sq = 0.0;
    double sum_inv = 0.0;
};

SampleStats compute_stats(std::span<const double> x) {
    SampleStats s;
    s.n = x.size();
    double sum = 0.0, sum_log = 0.0;
    for (double v : x) {
        sum += v;
        sum_log += std::log(v);
        s.sum_sq += v * v;
        s.sum_inv += 1.0 / v;
    }
    s.mean = sum / s.n;
    s.mean_log = sum_log / s.n;
    double acc = 0.0, acc_log = 0.0;
    for (double v : x) {
        const double d = v - s.mean;
        const double dl = std::log(v) - s.mean_log;
        acc += d * d;
        acc_log += dl * dl;
    }
    s.var = acc / s.n;
    s.var_log = acc_log / s.n;
    return s;
}

// Profile equation for the Weibull shape, evaluated on scale-normalized
// samples y = x/max(x) so that y^alpha never overflows:
//   1/alpha = sum(y^a ln y)/sum(y^a) - mean(ln y)
double weibull_shape_fixed_point(std::span<const double> y, double mean_log_y, double alpha,
                                 double tol, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        double num = 0.0, den = 0.0;
        for (double v : y) {
            const double p = std::pow(v, alpha);
            num += p * std::log(v);
            den += p;
        }
        const double next = 1.0 / (num / den - mean_log_y);
        if (!(next > 0.0) || !std::isfinite(next)) {
            throw FitError("weibull shape iteration left the parameter domain");
        }
        if (std::abs(next - alpha) < tol) return next;
        alpha = next;
    }
    throw FitError("weibull shape fixed point did not converge");
}

FittedModel fit_sorted(DistFamily family, std::span<const double> x, double tol, int max_iter) {
    const SampleStats s = compute_stats(x);
    FittedModel m;
    m.family = family;
    m.n_samples = s.n;

    switch (family) {
    case DistFamily::Weibull: {
        const double cv = std::sqrt(s.var) / s.mean;
        double alpha0 = std::pow(cv, -1.086);
        alpha0 = std::clamp(alpha0, 1e-2, 1e3);
        const double xmax = x.back();
        std::vector<double> y(x.size());
        double mean_log_y = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = x[i] / xmax;
            mean_log_y += std::log(y[i]);
        }
        mean_log_y /= static_cast<double>(x.size());
        const double alpha = weibull_shape_fixed_point(y, mean_log_y, alpha0, tol, max_iter);
        double mean_pow = 0.0;
        for (double v : y) mean_pow += std::pow(v, alpha);
        mean_pow /= static_cast<double>(x.size());
        m.p1 = alpha;
        m.p2 = xmax * std::pow(mean_pow, 1.0 / alpha);
        break;
    }
    case DistFamily::LogNormal:
        m.p1 = s.mean_log;
        m.p2 = std::sqrt(s.var_log);
        break;
    case DistFamily::InverseGaussian: {
        m.p1 = s.mean;
        const double denom = s.sum_inv - static_cast<double>(s.n) / s.mean;
        if (!(denom > 0.0)) throw FitError("inverse gaussian shape estimate is degenerate");
        m.p2 = static_cast<double>(s.n) / denom;
        break;
    }
    case DistFamily::Gamma: {
        const double target = std::log(s.mean) - s.mean_log; // > 0 by Jensen
        if (!(target > 0.0)) throw FitError("gamma likelihood equation is degenerate");
        double a = s.mean * s.mean / s.var; // moment-matching start
        a = std::clamp(a, 1e-3, 1e6);
        bool converged = false;
        for (int it = 0; it < max_iter; ++it) {
            const double f = std::log(a) - digamma(a) - target;
            const double fp = 1.0 / a - trigamma(a);
            double next = a - f / fp;
            if (!(next > 0.0) || !std::isfinite(next)) next = a / 2.0;
            if (std::abs(next - a) < tol * std::max(1.0, a)) {
                a = next;
                converged = true;
                break;
            }
            a = next;
        }
        if (!converged) throw FitError("gamma shape Newton iteration did not converge");
        m.p1 = a;
        m.p2 = s.mean / a;
        break;
    }
    case DistFamily::Rayleigh:
        m.p1 = std::sqrt(s.sum_sq / (2.0 * static_cast<double>(s.n)));
        m.p2 = 0.0;
        break;
    }

    m.validate();
    m.log_likelihood = log_likelihood(m, x);
    return m;
}

} // namespace

void FittedModel::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    bool ok = true;
    switch (family) {
    case DistFamily::Weibull:
    case DistFamily::InverseGaussian:
    case DistFamily::Gamma:
        ok = positive(p1) && positive(p2);
        break;
    case DistFamily::LogNormal:
        ok = std::isfinite(p1) && positive(p2);
        break;
    case DistFamily::Rayleigh:
        ok = positive(p1);
        break;
    }
    if (!ok) {
        throw FitError(std::string("invalid parameters for family ") + family_name(family));
    }
}

void EmpiricalPdf::validate() const {
    if (bin_edges.size() != density.size() + 1 || density.empty()) {
        throw FitError("histogram edge/density lengths inconsistent");
    }
    double integral = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        if (bin_edges[i + 1] <= bin_edges[i]) throw FitError("histogram edges must increase");
        if (density[i] < 0.0) throw FitError("histogram density must be nonnegative");
        integral += density[i] * (bin_edges[i + 1] - bin_edges[i]);
    }
    if (std::abs(integral - 1.0) > 1e-9) {
        throw FitError("histogram does not integrate to 1");
    }
}

double pdf_eval(const FittedModel& model, double x) {
    if (x < 0.0) throw std::invalid_argument("amplitude must be nonnegative");
    const double p1 = model.p1, p2 = model.p2;
    switch (model.family) {
    case DistFamily::Weibull: {
        if (x == 0.0) {
            if (p1 > 1.0) return 0.0;
            if (p1 == 1.0) return 1.0 / p2;
            return std::numeric_limits<double>::infinity();
        }
        const double r = x / p2;
        return p1 / p2 * std::pow(r, p1 - 1.0) * std::exp(-std::pow(r, p1));
    }
    case DistFamily::LogNormal: {
        if (x == 0.0) return 0.0;
        const double z = (std::log(x) - p1) / p2;
        return std::exp(-0.5 * z * z) / (x * p2 * std::sqrt(2.0 * kPi));
    }
    case DistFamily::InverseGaussian: {
        if (x == 0.0) return 0.0;
        const double d = x - p1;
        return std::sqrt(p2 / (2.0 * kPi * x * x * x)) *
               std::exp(-p2 * d * d / (2.0 * p1 * p1 * x));
    }
    case DistFamily::Gamma: {
        if (x == 0.0) return 0.0;
        return std::exp((p1 - 1.0) * std::log(x) - x / p2 - p1 * std::log(p2) - std::lgamma(p1));
    }
    case DistFamily::Rayleigh:
        return x / (p1 * p1) * std::exp(-x * x / (2.0 * p1 * p1));
    }
    throw std::invalid_argument("unknown distribution family");
}

double model_mean(const FittedModel& model) {
    switch (model.family) {
    case DistFamily::Weibull:
        return model.p2 * std::tgamma(1.0 + 1.0 / model.p1);
    case DistFamily::LogNormal:
        return std::exp(model.p1 + model.p2 * model.p2 / 2.0);
    case DistFamily::InverseGaussian:
        return model.p1;
    case DistFamily::Gamma:
        return model.p1 * model.p2;
    case DistFamily::Rayleigh:
        return model.p1 * std::sqrt(kPi / 2.0);
    }
    throw std::invalid_argument("unknown distribution family");
}

double log_likelihood(const FittedModel& model, std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double p1 = model.p1, p2 = model.p2;
    double sum_log = 0.0;
    for (double v : x) sum_log += std::log(v);

    switch (model.family) {
    case DistFamily::Weibull: {
        double sum_pow = 0.0;
        for (double v : x) sum_pow += std::pow(v / p2, p1);
        return n * std::log(p1) - n * p1 * std::log(p2) + (p1 - 1.0) * sum_log - sum_pow;
    }
    case DistFamily::LogNormal: {
        double ss = 0.0;
        for (double v : x) {
            const double z = std::log(v) - p1;
            ss += z * z;
        }
        return -sum_log - n * std::log(p2) - 0.5 * n * std::log(2.0 * kPi) -
               ss / (2.0 * p2 * p2);
    }
    case DistFamily::InverseGaussian: {
        double ss = 0.0;
        for (double v : x) {
            const double d = v - p1;
            ss += d * d / v;
        }
        return 0.5 * n * std::log(p2 / (2.0 * kPi)) - 1.5 * sum_log -
               p2 * ss / (2.0 * p1 * p1);
    }
    case DistFamily::Gamma: {
        double sum = 0.0;
        for (double v : x) sum += v;
        return -n * p1 * std::log(p2) - n * std::lgamma(p1) + (p1 - 1.0) * sum_log - sum / p2;
    }
    case DistFamily::Rayleigh: {
        double sum_sq = 0.0;
        for (double v : x) sum_sq += v * v;
        return sum_log - 2.0 * n * std::log(p1) - sum_sq / (2.0 * p1 * p1);
    }
    }
    throw std::invalid_argument("unknown distribution family");
}

FittedModel fit(DistFamily family, std::span<const double> samples, double tol, int max_iter) {
    if (samples.size() < 10) throw FitError("need at least 10 samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    if (!(x.front() > 0.0)) throw FitError("samples must be strictly positive");
    if (x.front() == x.back()) throw FitError("samples are all identical");
    return fit_sorted(family, x, tol, max_iter);
}

EmpiricalPdf build_histogram(std::span<const double> samples, std::size_t bins) {
    if (samples.size() < 10) throw FitError("need at least 10 samples");
    double xmax = 0.0;
    for (double v : samples) {
        if (!(v > 0.0)) throw FitError("samples must be strictly positive");
        xmax = std::max(xmax, v);
    }
    if (bins == 0) {
        bins = static_cast<std::size_t>(
            std::ceil(2.0 * std::cbrt(static_cast<double>(samples.size()))));
    }
    EmpiricalPdf pdf;
    pdf.n_samples = samples.size();
    pdf.bin_edges.resize(bins + 1);
    const double width = xmax / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) pdf.bin_edges[i] = width * static_cast<double>(i);
    std::vector<std::size_t> counts(bins, 0);
    for (double v : samples) {
        auto idx = static_cast<std::size_t>(v / width);
        if (idx >= bins) idx = bins - 1; // x == max lands in the last bin
        ++counts[idx];
    }
    pdf.density.resize(bins);
    const double norm = 1.0 / (static_cast<double>(samples.size()) * width);
    for (std::size_t i = 0; i < bins; ++i) pdf.density[i] = static_cast<double>(counts[i]) * norm;
    return pdf;
}

double kl_distance(const EmpiricalPdf& emp, const std::function<double(double)>& density) {
    constexpr double kFloor = 1e-12;
    double d = 0.0;
    for (std::size_t i = 0; i < emp.bins(); ++i) {
        const double pd = emp.density[i];
        if (pd <= 0.0) continue;
        const double pe = std::max(density(emp.bin_mid(i)), kFloor);
        d += pd * std::log(pd / pe) * emp.bin_width(i);
    }
    return d;
}

double kl_distance(const EmpiricalPdf& emp, const FittedModel& model) {
    model.validate();
    return kl_distance(emp, [&](double x) { return pdf_eval(model, x); });
}

KlReport select_model(std::span<const double> samples, std::size_t bins, double tol,
                      int max_iter) {
    static constexpr DistFamily kFamilies[] = {
        DistFamily::Weibull, DistFamily::LogNormal, DistFamily::InverseGaussian,
        DistFamily::Gamma, DistFamily::Rayleigh};

    KlReport report;
    report.entries.resize(std::size(kFamilies));
    const EmpiricalPdf hist = build_histogram(samples, bins);

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(std::size(kFamilies)); ++i) {
        KlEntry& entry = report.entries[i];
        entry.family = kFamilies[i];
        try {
            entry.model = fit(kFamilies[i], samples, tol, max_iter);
            entry.kl = kl_distance(hist, entry.model);
            entry.fitted = true;
        } catch (const std::exception& e) {
            entry.fitted = false;
            entry.error = e.what();
        }
    }

    bool found = false;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& entry : report.entries) {
        if (entry.fitted && entry.kl < best) {
            best = entry.kl;
            report.best_family = entry.family;
            found = true;
        }
    }
    if (!found) throw FitError("every candidate family failed to fit");
    return report;
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of empty range");
    q = std::clamp(q, 0.0, 1.0);
    std::vector<double> v(values.begin(), values.end());
    const auto idx = static_cast<std::size_t>(
        std::llround(q * static_cast<double>(v.size() - 1)));
    std::nth_element(v.begin(), v.begin() + idx, v.end());
    return v[idx];
}

} // namespace sar
