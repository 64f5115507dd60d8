#include "sar/cfar.hpp"

#include <cmath>
#include <stdexcept>

#include "sar/errors.hpp"

namespace sar {

void CfarConfig::validate() const {
    if (guard_az < 0 || guard_rg < 0 || train_az < 0 || train_rg < 0) {
        throw ConfigError("cfar window extents must be nonnegative");
    }
    if (train_az + train_rg < 1) {
        throw ConfigError("cfar needs at least one training cell");
    }
    if (!(p_fa > 0.0) || !(p_fa < 1.0)) {
        throw ConfigError("p_fa must lie strictly inside (0, 1)");
    }
    if (!q_override) model.validate();
}

double weibull_threshold(double alpha, double beta, double p_fa) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("weibull parameters must be positive");
    }
    if (!(p_fa > 0.0) || !(p_fa < 1.0)) {
        throw std::invalid_argument("p_fa must lie strictly inside (0, 1)");
    }
    return beta * std::pow(std::log(1.0 / p_fa), 1.0 / alpha);
}

double design_q(const FittedModel& model, double p_fa) {
    model.validate();
    if (model.family != DistFamily::Weibull) {
        throw std::invalid_argument("adaptive threshold is defined for the Weibull model only");
    }
    return weibull_threshold(model.p1, model.p2, p_fa) / model_mean(model);
}

bool cell_decision(double x_cut, double mu_c, double sigma_c, double q) {
    if (sigma_c < 0.0) throw std::invalid_argument("sigma_c must be nonnegative");
    return x_cut > mu_c + sigma_c * q;
}

namespace {

// Inclusive-rectangle sums over (n+1)-padded prefix tables.
struct PrefixTables {
    int n_az, n_rg;
    std::vector<double> sum;
    std::vector<double> sum_sq;

    double& s(int r, int c) { return sum[static_cast<std::size_t>(r) * (n_rg + 1) + c]; }
    double& s2(int r, int c) { return sum_sq[static_cast<std::size_t>(r) * (n_rg + 1) + c]; }
    double s(int r, int c) const { return sum[static_cast<std::size_t>(r) * (n_rg + 1) + c]; }
    double s2(int r, int c) const { return sum_sq[static_cast<std::size_t>(r) * (n_rg + 1) + c]; }

    double rect_sum(int r0, int r1, int c0, int c1) const {
        return s(r1 + 1, c1 + 1) - s(r0, c1 + 1) - s(r1 + 1, c0) + s(r0, c0);
    }
    double rect_sum_sq(int r0, int r1, int c0, int c1) const {
        return s2(r1 + 1, c1 + 1) - s2(r0, c1 + 1) - s2(r1 + 1, c0) + s2(r0, c0);
    }
};

PrefixTables build_prefix_tables(const MagnitudeImage& img) {
    PrefixTables t;
    t.n_az = img.n_az;
    t.n_rg = img.n_rg;
    t.sum.assign(static_cast<std::size_t>(img.n_az + 1) * (img.n_rg + 1), 0.0);
    t.sum_sq.assign(t.sum.size(), 0.0);

    // row-wise prefixes, then column accumulation; both passes are
    // per-line sequential so the tables are thread-count independent
#pragma omp parallel for schedule(static)
    for (int r = 0; r < img.n_az; ++r) {
        double acc = 0.0, acc2 = 0.0;
        for (int c = 0; c < img.n_rg; ++c) {
            const double x = img.at(r, c);
            acc += x;
            acc2 += x * x;
            t.s(r + 1, c + 1) = acc;
            t.s2(r + 1, c + 1) = acc2;
        }
    }
#pragma omp parallel for schedule(static)
    for (int c = 1; c <= img.n_rg; ++c) {
        for (int r = 2; r <= img.n_az; ++r) {
            t.s(r, c) += t.s(r - 1, c);
            t.s2(r, c) += t.s2(r - 1, c);
        }
    }
    return t;
}

} // namespace

DetectionMap cfar_scan(const MagnitudeImage& img, const CfarConfig& cfg) {
    img.validate();
    cfg.validate();

    const int half_az = cfg.guard_az + cfg.train_az;
    const int half_rg = cfg.guard_rg + cfg.train_rg;
    const int center_r = img.n_az / 2;
    const int center_c = img.n_rg / 2;
    if (center_r - half_az < 0 || center_r + half_az > img.n_az - 1 ||
        center_c - half_rg < 0 || center_c + half_rg > img.n_rg - 1) {
        throw ConfigError("cfar window does not fit inside the image");
    }

    const double q = cfg.q_override ? *cfg.q_override : design_q(cfg.model, cfg.p_fa);
    const PrefixTables tables = build_prefix_tables(img);

    DetectionMap map;
    map.n_az = img.n_az;
    map.n_rg = img.n_rg;
    map.mask.assign(img.data.size(), 0);
    map.config = cfg;

    std::vector<std::vector<Detection>> per_row(img.n_az);

#pragma omp parallel for schedule(static)
    for (int r = 0; r < img.n_az; ++r) {
        const int or0 = std::max(0, r - half_az);
        const int or1 = std::min(img.n_az - 1, r + half_az);
        const int gr0 = std::max(0, r - cfg.guard_az);
        const int gr1 = std::min(img.n_az - 1, r + cfg.guard_az);
        for (int c = 0; c < img.n_rg; ++c) {
            const int oc0 = std::max(0, c - half_rg);
            const int oc1 = std::min(img.n_rg - 1, c + half_rg);
            const int gc0 = std::max(0, c - cfg.guard_rg);
            const int gc1 = std::min(img.n_rg - 1, c + cfg.guard_rg);

            const double n_outer = static_cast<double>(or1 - or0 + 1) * (oc1 - oc0 + 1);
            const double n_guard = static_cast<double>(gr1 - gr0 + 1) * (gc1 - gc0 + 1);
            const double n_train = n_outer - n_guard;

            const double s = tables.rect_sum(or0, or1, oc0, oc1) -
                             tables.rect_sum(gr0, gr1, gc0, gc1);
            const double s2 = tables.rect_sum_sq(or0, or1, oc0, oc1) -
                              tables.rect_sum_sq(gr0, gr1, gc0, gc1);

            const double mu = s / n_train;
            double sigma = 0.0;
            if (n_train > 1.5) {
                sigma = std::sqrt(std::max(0.0, (s2 - s * s / n_train) / (n_train - 1.0)));
            }
            const double threshold = mu + sigma * q;
            const double x = img.at(r, c);
            if (x > threshold) {
                map.mask[static_cast<std::size_t>(r) * img.n_rg + c] = 1;
                per_row[r].push_back({r, c, x, threshold});
            }
        }
    }

    for (auto& row : per_row) {
        map.detections.insert(map.detections.end(), row.begin(), row.end());
    }
    return map;
}

} // namespace sar
