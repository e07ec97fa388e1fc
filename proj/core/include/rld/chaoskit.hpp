#pragma once

#include <cstddef>
#include <vector>

#include "rld/errors.hpp"

namespace rld {

/// Uniformly sampled scalar observable (dimensionless; callers usually
/// z-score the raw signal first, which the exponent estimate is invariant to).
struct ScalarSeries {
    double dt = 1.0; ///< seconds per sample
    std::vector<double> values;
};

/// Throws ValidationError unless length >= 2, dt > 0, all samples finite.
void validate(const ScalarSeries& series);

/// Returns the series shifted and scaled to zero mean, unit variance.
[[nodiscard]] ScalarSeries zscored(const ScalarSeries& series);

/// Takens delay-embedding parameters.
struct EmbeddingSpec {
    int delay = 1;     ///< tau, in samples
    int dimension = 2; ///< m
};

struct AmiPoint {
    int delay = 0;
    double bits = 0.0; ///< I(tau)
};

/// I(tau) = sum p(a,b) log2(p(a,b)/(p(a) p(b))) over a uniform bins x bins
/// histogram of the pairs (x_n, x_{n+tau}), for tau = 0 ... max_delay; the
/// marginals are the histogram's row and column sums, so I(0) equals the
/// series' histogram entropy. Bin edges span the full series range.
/// Requires bins >= 2, max_delay < length/4; a constant series has zero
/// entropy and throws ValidationError.
[[nodiscard]] std::vector<AmiPoint> average_mutual_information(
    const ScalarSeries& series, int max_delay, int bins = 64);

/// Delay choice from an AMI curve. fallback is set when no interior local
/// minimum I(tau-1) > I(tau) <= I(tau+1) exists and the argmin over tau >= 1
/// is returned instead.
struct DelayChoice {
    int delay = 1;
    bool fallback = false;
};

/// Smallest tau with I(tau-1) > I(tau) <= I(tau+1); needs >= 3 entries.
[[nodiscard]] DelayChoice first_minimum(const std::vector<AmiPoint>& ami);

struct FnnPoint {
    int dimension = 0;
    double fraction = 0.0;
};

/// Kennel-style false-nearest-neighbor fractions for m = 1 ... m_max at the
/// given delay. A point's nearest neighbor (Euclidean, in the m-dimensional
/// embedding, self excluded, ties to the lowest index) is false when the
/// (m+1)-th coordinate jump exceeds r_tol times the neighbor distance, or
/// when the (m+1)-dimensional separation sqrt(d_m^2 + jump^2) exceeds a_tol
/// times the series standard deviation (the loneliness test that keeps noise
/// flagged at every m). Only points whose (m+1)-th coordinate exists
/// participate. max_points > 0 caps the scan to the first max_points embedded
/// points (the search stays exact within that prefix); jobs > 1 parallelizes
/// the per-point searches without changing results.
[[nodiscard]] std::vector<FnnPoint> false_nearest_neighbors(
    const ScalarSeries& series, int delay, int m_max, double r_tol = 15.0,
    double a_tol = 2.0, std::size_t max_points = 0, int jobs = 1);

/// Delay-embedded series, row-major: point(n)[k] = x_{n + k*delay}.
struct EmbeddedSeries {
    EmbeddingSpec spec;
    std::size_t count = 0;
    std::vector<double> coords;

    [[nodiscard]] const double* point(std::size_t n) const {
        return coords.data() + n * static_cast<std::size_t>(spec.dimension);
    }
};

/// point_n = (x_n, x_{n+tau}, ..., x_{n+(m-1)tau}); count = length - (m-1)tau.
[[nodiscard]] EmbeddedSeries embed(const ScalarSeries& series,
                                   const EmbeddingSpec& spec);

/// One audit entry per follow interval of the divergence tracking.
struct DivergenceStep {
    std::size_t interval = 0;   ///< interval index
    double t = 0.0;             ///< fiducial time, seconds
    double cumulative_log = 0.0; ///< running sum of ln(d_after/d_before)
};

struct LyapunovReport {
    EmbeddingSpec embedding;
    double exponent = 0.0;       ///< lambda_max, 1/seconds
    long replacement_count = 0;
    double follow_time = 0.0;    ///< total followed time, seconds
    std::vector<DivergenceStep> divergence;
};

/// Wolf-style maximal Lyapunov exponent from neighbor tracking.
///
/// Follows the embedded fiducial trajectory together with its nearest
/// neighbor outside the Theiler window, accumulating ln(d_after/d_before)
/// every follow_steps samples; when the separation leaves the band
/// [min_separation, replace_threshold] x extent the neighbor is replaced by
/// the shell candidate minimizing orientation change (nearest eligible point
/// as fallback). extent is the embedded bounding-box diagonal; the
/// min_separation floor keeps coincident points (numerical rounding twins on
/// periodic orbits) from polluting the log ratios. lambda = (log sum) /
/// (followed time).
///
/// Requires >= 100 embedded points and theiler_window >= delay * dimension.
/// Throws NumericalError when no eligible neighbor exists.
[[nodiscard]] LyapunovReport max_lyapunov(const ScalarSeries& series,
                                          const EmbeddingSpec& spec,
                                          int theiler_window,
                                          int follow_steps = 3,
                                          double replace_threshold = 0.1,
                                          double min_separation = 1e-9);

} // namespace rld
