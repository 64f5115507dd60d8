#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sar/types.hpp"

namespace sar {

/// A fitted amplitude model: one of the five candidate families plus its
/// maximum-likelihood parameters.
///   Weibull:          p1 = shape alpha, p2 = scale beta
///   LogNormal:        p1 = location of log gamma, p2 = scale of log eta
///   InverseGaussian:  p1 = mean mu, p2 = shape lambda
///   Gamma:            p1 = shape a, p2 = scale b
///   Rayleigh:         p1 = sigma, p2 unused
struct FittedModel {
    DistFamily family = DistFamily::Weibull;
    double p1 = 0.0;
    double p2 = 0.0;
    std::size_t n_samples = 0;
    double log_likelihood = 0.0;

    /// Throws sar::FitError when parameters violate the family's domain.
    void validate() const;
};

/// Normalized histogram: density over consecutive bins, integrates to 1.
struct EmpiricalPdf {
    std::vector<double> bin_edges; ///< length B+1, strictly increasing
    std::vector<double> density;   ///< length B, nonnegative
    std::size_t n_samples = 0;

    std::size_t bins() const { return density.size(); }
    double bin_mid(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
    double bin_width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }

    /// Throws sar::FitError when the density does not integrate to 1 (1e-9).
    void validate() const;
};

struct KlEntry {
    DistFamily family;
    bool fitted = false;     ///< false when the MLE failed; kl is then unset
    FittedModel model;
    double kl = 0.0;
    std::string error;       ///< failure note when !fitted
};

struct KlReport {
    std::vector<KlEntry> entries; ///< one per candidate family, fixed order
    DistFamily best_family = DistFamily::Weibull;
};

/// Closed-form density of the model's family at amplitude x >= 0.
/// Families supported only on x > 0 return 0 at x = 0 by continuity.
double pdf_eval(const FittedModel& model, double x);

/// Mean amplitude implied by the fitted model.
double model_mean(const FittedModel& model);

/// Log-likelihood of the samples under the model.
double log_likelihood(const FittedModel& model, std::span<const double> samples);

/// Maximum-likelihood fit of one family. Weibull uses the profile fixed
/// point on the shape; Gamma uses Newton on the digamma equation; the rest
/// are closed form. Samples are sorted internally, so the result is
/// invariant under permutation of the input.
///
/// Throws sar::FitError on fewer than 10 samples, nonpositive or
/// all-identical samples, or non-convergence within max_iter.
FittedModel fit(DistFamily family, std::span<const double> samples,
                double tol = 1e-9, int max_iter = 200);

/// Equal-width histogram over [0, max(samples)], normalized to unit area.
/// bins = 0 selects the Rice rule ceil(2*N^(1/3)).
EmpiricalPdf build_histogram(std::span<const double> samples, std::size_t bins = 0);

/// Discretized KL distance D(p_d || p_e): sum over bins of
/// p_d * ln(p_d / p_e(mid)) * width, model density floored at 1e-12,
/// empty bins contribute zero.
double kl_distance(const EmpiricalPdf& emp, const std::function<double(double)>& density);
double kl_distance(const EmpiricalPdf& emp, const FittedModel& model);

/// Fits all five families, builds one shared histogram, scores each fit by
/// KL distance and reports the minimizer. Families whose fit fails are
/// retained in the report with a failure note and excluded from the argmin.
KlReport select_model(std::span<const double> samples, std::size_t bins = 0,
                      double tol = 1e-9, int max_iter = 200);

/// Exact order statistic at fraction q of the sorted values (q in [0,1]).
double quantile(std::span<const double> values, double q);

} // namespace sar
