#include "rld/chaoskit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace rld {

void validate(const ScalarSeries& series) {
    if (series.values.size() < 2)
        throw ValidationError("series must hold at least 2 samples");
    if (!(series.dt > 0.0)) throw ValidationError("series dt must be > 0");
    for (double v : series.values)
        if (!std::isfinite(v)) throw ValidationError("series contains non-finite samples");
}

ScalarSeries zscored(const ScalarSeries& series) {
    validate(series);
    const auto& v = series.values;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    if (!(var > 0.0))
        throw ValidationError("cannot z-score a constant series");
    const double inv = 1.0 / std::sqrt(var);
    ScalarSeries out;
    out.dt = series.dt;
    out.values.reserve(v.size());
    for (double x : v) out.values.push_back((x - mean) * inv);
    return out;
}

std::vector<AmiPoint> average_mutual_information(const ScalarSeries& series,
                                                 int max_delay, int bins) {
    validate(series);
    if (bins < 2) throw ValidationError("ami: bins must be >= 2");
    if (max_delay < 0) throw ValidationError("ami: max_delay must be >= 0");
    const auto& v = series.values;
    const std::size_t n = v.size();
    if (static_cast<std::size_t>(max_delay) >= n / 4)
        throw ValidationError("ami: max_delay must be below length/4");

    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (!(range > 0.0))
        throw ValidationError("ami: constant series has zero entropy, "
                              "delay undefined");

    std::vector<int> idx(n);
    const double scale = static_cast<double>(bins) / range;
    for (std::size_t k = 0; k < n; ++k)
        idx[k] = std::min(bins - 1, static_cast<int>((v[k] - lo) * scale));

    const std::size_t nb = static_cast<std::size_t>(bins);
    std::vector<double> joint(nb * nb);
    std::vector<double> pa(nb), pb(nb);
    std::vector<AmiPoint> out;
    out.reserve(static_cast<std::size_t>(max_delay) + 1);
    for (int tau = 0; tau <= max_delay; ++tau) {
        std::fill(joint.begin(), joint.end(), 0.0);
        std::fill(pa.begin(), pa.end(), 0.0);
        std::fill(pb.begin(), pb.end(), 0.0);
        const std::size_t pairs = n - static_cast<std::size_t>(tau);
        const double w = 1.0 / static_cast<double>(pairs);
        for (std::size_t k = 0; k < pairs; ++k) {
            const std::size_t a = static_cast<std::size_t>(idx[k]);
            const std::size_t b = static_cast<std::size_t>(idx[k + static_cast<std::size_t>(tau)]);
            joint[a * nb + b] += w;
        }
        for (std::size_t a = 0; a < nb; ++a)
            for (std::size_t b = 0; b < nb; ++b) {
                pa[a] += joint[a * nb + b];
                pb[b] += joint[a * nb + b];
            }
        double bits = 0.0;
        for (std::size_t a = 0; a < nb; ++a)
            for (std::size_t b = 0; b < nb; ++b) {
                const double p = joint[a * nb + b];
                if (p > 0.0) bits += p * std::log2(p / (pa[a] * pb[b]));
            }
        out.push_back(AmiPoint{tau, bits});
    }
    return out;
}

DelayChoice first_minimum(const std::vector<AmiPoint>& ami) {
    if (ami.size() < 3)
        throw ValidationError("first_minimum: need at least 3 AMI entries");
    for (std::size_t k = 1; k + 1 < ami.size(); ++k)
        if (ami[k - 1].bits > ami[k].bits && ami[k].bits <= ami[k + 1].bits)
            return DelayChoice{ami[k].delay, false};
    // no interior minimum: fall back to the argmin over positive delays
    std::size_t best = ami.size() - 1;
    for (std::size_t k = 0; k < ami.size(); ++k) {
        if (ami[k].delay < 1) continue;
        if (ami[k].bits < ami[best].bits) best = k;
    }
    return DelayChoice{ami[best].delay, true};
}

EmbeddedSeries embed(const ScalarSeries& series, const EmbeddingSpec& spec) {
    validate(series);
    if (spec.delay < 1) throw ValidationError("embed: delay must be >= 1");
    if (spec.dimension < 1) throw ValidationError("embed: dimension must be >= 1");
    const std::size_t span =
        static_cast<std::size_t>(spec.dimension - 1) * static_cast<std::size_t>(spec.delay);
    if (span >= series.values.size())
        throw ValidationError("embed: (dimension-1)*delay must be below length");
    EmbeddedSeries out;
    out.spec = spec;
    out.count = series.values.size() - span;
    out.coords.resize(out.count * static_cast<std::size_t>(spec.dimension));
    for (std::size_t k = 0; k < out.count; ++k)
        for (int d = 0; d < spec.dimension; ++d)
            out.coords[k * static_cast<std::size_t>(spec.dimension) +
                       static_cast<std::size_t>(d)] =
                series.values[k + static_cast<std::size_t>(d) *
                                      static_cast<std::size_t>(spec.delay)];
    return out;
}

namespace {

double sq_distance(const double* a, const double* b, int m) {
    double s = 0.0;
    for (int d = 0; d < m; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

void for_each_chunk(std::size_t n, int jobs, const auto& body) {
    if (jobs <= 1 || n < 2048) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace

std::vector<FnnPoint> false_nearest_neighbors(const ScalarSeries& series,
                                              int delay, int m_max, double r_tol,
                                              double a_tol, std::size_t max_points,
                                              int jobs) {
    validate(series);
    if (delay < 1) throw ValidationError("fnn: delay must be >= 1");
    if (m_max < 2) throw ValidationError("fnn: m_max must be >= 2");
    const auto& v = series.values;
    const std::size_t n = v.size();

    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sigma = std::sqrt(var / static_cast<double>(n));

    std::vector<FnnPoint> out;
    out.reserve(static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        const std::size_t reach =
            static_cast<std::size_t>(m) * static_cast<std::size_t>(delay);
        if (reach >= n || n - reach < 10)
            throw ValidationError("fnn: fewer than 10 embedded points at m = " +
                                  std::to_string(m));
        std::size_t count = n - reach; // points whose (m+1)-th coordinate exists
        if (max_points > 0) count = std::min(count, max_points);

        // row-major m-dimensional embedding of the participating points
        std::vector<double> pts(count * static_cast<std::size_t>(m));
        for (std::size_t k = 0; k < count; ++k)
            for (int d = 0; d < m; ++d)
                pts[k * static_cast<std::size_t>(m) + static_cast<std::size_t>(d)] =
                    v[k + static_cast<std::size_t>(d) * static_cast<std::size_t>(delay)];

        std::vector<std::uint8_t> flags(count, 0);
        for_each_chunk(count, jobs, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const double* pk = pts.data() + k * static_cast<std::size_t>(m);
                double best = std::numeric_limits<double>::infinity();
                std::size_t best_j = k;
                for (std::size_t j = 0; j < count; ++j) {
                    if (j == k) continue;
                    const double d2 =
                        sq_distance(pk, pts.data() + j * static_cast<std::size_t>(m), m);
                    if (d2 < best) {
                        best = d2;
                        best_j = j;
                    }
                }
                const double dist = std::sqrt(best);
                const double jump = std::abs(v[k + reach] - v[best_j + reach]);
                const double grown = std::sqrt(best + jump * jump);
                if (jump > r_tol * dist || grown > a_tol * sigma) flags[k] = 1;
            }
        });
        std::size_t flagged = 0;
        for (std::uint8_t f : flags) flagged += f;
        out.push_back(FnnPoint{m, static_cast<double>(flagged) /
                                      static_cast<double>(count)});
    }
    return out;
}

namespace {

struct NeighborQuery {
    const EmbeddedSeries& emb;
    std::size_t limit;      // candidates must satisfy j < limit (followable)
    long theiler;
    double min_sep2;

    [[nodiscard]] std::size_t nearest(std::size_t i) const {
        const int m = emb.spec.dimension;
        const double* pi = emb.point(i);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = emb.count; // sentinel: none
        for (std::size_t j = 0; j < limit; ++j) {
            if (std::labs(static_cast<long>(j) - static_cast<long>(i)) <= theiler)
                continue;
            const double d2 = sq_distance(pi, emb.point(j), m);
            if (d2 >= min_sep2 && d2 < best) {
                best = d2;
                best_j = j;
            }
        }
        return best_j;
    }

    // shell candidate in [min_sep, max_sep] minimizing orientation change
    // against the displacement to the previous neighbor
    [[nodiscard]] std::size_t best_oriented(std::size_t i, std::size_t j_old,
                                            double max_sep2) const {
        const int m = emb.spec.dimension;
        const double* pi = emb.point(i);
        const double* po = emb.point(j_old);
        double old_norm2 = sq_distance(pi, po, m);
        if (!(old_norm2 > 0.0)) return emb.count;
        double best_cos = -2.0;
        std::size_t best_j = emb.count;
        for (std::size_t j = 0; j < limit; ++j) {
            if (std::labs(static_cast<long>(j) - static_cast<long>(i)) <= theiler)
                continue;
            const double* pj = emb.point(j);
            const double d2 = sq_distance(pi, pj, m);
            if (d2 < min_sep2 || d2 > max_sep2) continue;
            double dot = 0.0;
            for (int d = 0; d < m; ++d)
                dot += (pj[d] - pi[d]) * (po[d] - pi[d]);
            const double c = dot / std::sqrt(d2 * old_norm2);
            if (c > best_cos) {
                best_cos = c;
                best_j = j;
            }
        }
        return best_j;
    }
};

} // namespace

LyapunovReport max_lyapunov(const ScalarSeries& series, const EmbeddingSpec& spec,
                            int theiler_window, int follow_steps,
                            double replace_threshold, double min_separation) {
    const EmbeddedSeries emb = embed(series, spec);
    if (emb.count < 100)
        throw ValidationError("max_lyapunov: need at least 100 embedded points");
    if (theiler_window < spec.delay * spec.dimension)
        throw ValidationError("max_lyapunov: theiler_window must be >= delay * dimension");
    if (follow_steps < 1) throw ValidationError("max_lyapunov: follow_steps must be >= 1");
    if (!(replace_threshold > 0.0 && replace_threshold < 1.0))
        throw ValidationError("max_lyapunov: replace_threshold must lie in (0, 1)");
    if (!(min_separation > 0.0 && min_separation < replace_threshold))
        throw ValidationError("max_lyapunov: min_separation must lie in "
                              "(0, replace_threshold)");

    const int m = spec.dimension;
    double extent2 = 0.0;
    for (int d = 0; d < m; ++d) {
        double lo = emb.coords[static_cast<std::size_t>(d)];
        double hi = lo;
        for (std::size_t k = 0; k < emb.count; ++k) {
            const double x = emb.point(k)[d];
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        extent2 += (hi - lo) * (hi - lo);
    }
    const double extent = std::sqrt(extent2);
    if (!(extent > 0.0))
        throw NumericalError("max_lyapunov: degenerate embedded series");
    const double min_sep = min_separation * extent;
    const double max_sep = replace_threshold * extent;

    const std::size_t follow = static_cast<std::size_t>(follow_steps);
    if (emb.count <= follow)
        throw ValidationError("max_lyapunov: series shorter than follow_steps");
    const NeighborQuery query{emb, emb.count - follow,
                              static_cast<long>(theiler_window),
                              min_sep * min_sep};

    LyapunovReport report;
    report.embedding = spec;

    std::size_t i = 0;
    std::size_t j = query.nearest(0);
    if (j >= emb.count)
        throw NumericalError("max_lyapunov: no eligible neighbor; supply a "
                             "longer series");
    double d_before = std::sqrt(sq_distance(emb.point(i), emb.point(j), m));

    double log_sum = 0.0;
    std::size_t followed = 0;
    std::size_t interval = 0;
    while (i + follow < emb.count) {
        if (j + follow >= emb.count) {
            const std::size_t jn = query.nearest(i);
            if (jn >= emb.count) break;
            j = jn;
            d_before = std::sqrt(sq_distance(emb.point(i), emb.point(j), m));
            ++report.replacement_count;
            continue;
        }
        const std::size_t i2 = i + follow;
        const std::size_t j2 = j + follow;
        const double d_after =
            std::sqrt(sq_distance(emb.point(i2), emb.point(j2), m));
        if (d_before >= min_sep && d_after >= min_sep) {
            log_sum += std::log(d_after / d_before);
            followed += follow;
            report.divergence.push_back(DivergenceStep{
                interval, static_cast<double>(i2) * series.dt, log_sum});
        }
        ++interval;
        i = i2;
        j = j2;
        d_before = d_after;
        if (d_before > max_sep || d_before < min_sep) {
            std::size_t jn = query.best_oriented(i, j, max_sep * max_sep);
            if (jn >= emb.count) jn = query.nearest(i);
            if (jn >= emb.count) break;
            j = jn;
            d_before = std::sqrt(sq_distance(emb.point(i), emb.point(j), m));
            ++report.replacement_count;
        }
    }
    if (followed == 0)
        throw NumericalError("max_lyapunov: no usable follow intervals; supply "
                             "a longer series");
    report.follow_time = static_cast<double>(followed) * series.dt;
    report.exponent = log_sum / report.follow_time;
    return report;
}

} // namespace rld
