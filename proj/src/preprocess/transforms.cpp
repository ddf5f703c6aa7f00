#include "gridcast/preprocess/transforms.hpp"
#include "gridcast/core/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace gridcast::preprocess {

using core::is_missing;
using core::Series;

Series interpolate_missing(const Series& s) {
    const auto& v = s.values();
    const std::size_t n = v.size();
    std::vector<double> out(v);

    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_missing(v[i])) known.push_back(i);
    }
    if (known.empty()) throw AllMissing("series '" + s.name() + "' has no observed values");

    // Nearest-value extension at the edges.
    for (std::size_t i = 0; i < known.front(); ++i) out[i] = v[known.front()];
    for (std::size_t i = known.back() + 1; i < n; ++i) out[i] = v[known.back()];

    // Straight line between consecutive observed neighbours.
    for (std::size_t k = 0; k + 1 < known.size(); ++k) {
        const std::size_t a = known[k], b = known[k + 1];
        if (b == a + 1) continue;
        const double step = (v[b] - v[a]) / static_cast<double>(b - a);
        for (std::size_t i = a + 1; i < b; ++i) {
            out[i] = v[a] + step * static_cast<double>(i - a);
        }
    }
    return s.with_values(std::move(out));
}

namespace {

// Least-squares polynomial fit over window values, evaluated at the
// (relative) center position.
double polyfit_eval(const std::vector<double>& v, std::size_t lo, std::size_t hi,
                    std::size_t center, int degree) {
    const auto rows = static_cast<Eigen::Index>(hi - lo + 1);
    const auto cols = static_cast<Eigen::Index>(degree + 1);
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double x = static_cast<double>(lo + static_cast<std::size_t>(r)) -
                         static_cast<double>(center);
        double pw = 1.0;
        for (Eigen::Index c = 0; c < cols; ++c) {
            X(r, c) = pw;
            pw *= x;
        }
        y(r) = v[lo + static_cast<std::size_t>(r)];
    }
    Eigen::VectorXd coef = X.householderQr().solve(y);
    return coef(0); // value at x = 0, i.e. at the center index
}

} // namespace

Series savgol_smooth(const Series& s, int window, int polyorder) {
    if (s.has_missing()) {
        throw ConstraintViolation("savgol_smooth requires a missing-free series");
    }
    if (window < 3 || window % 2 == 0) {
        throw BadOrder("window must be an odd integer >= 3");
    }
    if (polyorder < 0 || polyorder >= window) {
        throw BadOrder("polyorder must satisfy 0 <= polyorder < window");
    }
    const std::size_t n = s.size();
    if (static_cast<std::size_t>(window) > n) {
        throw WindowTooLarge("window " + std::to_string(window) + " exceeds series length " +
                             std::to_string(n));
    }

    const std::size_t half = static_cast<std::size_t>(window) / 2;
    const auto& v = s.values();
    std::vector<double> out(n);

    // Interior points share one set of convolution weights.
    std::vector<double> weights(static_cast<std::size_t>(window));
    {
        std::vector<double> unit(static_cast<std::size_t>(window), 0.0);
        for (std::size_t j = 0; j < weights.size(); ++j) {
            unit[j] = 1.0;
            weights[j] = polyfit_eval(unit, 0, weights.size() - 1, half, polyorder);
            unit[j] = 0.0;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (i >= half && i + half < n) {
            double acc = 0.0;
            for (std::size_t j = 0; j < weights.size(); ++j) {
                acc += weights[j] * v[i - half + j];
            }
            out[i] = acc;
        } else {
            const std::size_t lo = (i >= half) ? i - half : 0;
            const std::size_t hi = std::min(i + half, n - 1);
            out[i] = polyfit_eval(v, lo, hi, i, polyorder);
        }
    }
    return s.with_values(std::move(out));
}

Series log_transform(const Series& s) {
    TransformChain scratch;
    return log_transform(s, scratch);
}

Series log_transform(const Series& s, TransformChain& chain) {
    std::vector<double> out;
    out.reserve(s.size());
    for (double v : s.values()) {
        if (is_missing(v)) {
            out.push_back(v);
            continue;
        }
        if (v <= -1.0) {
            throw NonPositiveAfterOffset("value " + std::to_string(v) +
                                         " is <= -1; ln(1+y) undefined");
        }
        out.push_back(std::log1p(v));
    }
    chain.log_applied = true;
    return s.with_values(std::move(out));
}

Series invert_log(const Series& s) {
    std::vector<double> out;
    out.reserve(s.size());
    for (double v : s.values()) out.push_back(is_missing(v) ? v : std::expm1(v));
    return s.with_values(std::move(out));
}

Series invert_log(const Series& s, const TransformChain& chain) {
    if (!chain.log_applied) throw NoLogStep("transform chain records no log step");
    return invert_log(s);
}

DifferencedSeries difference(const std::vector<double>& values, int d, int D, int s_period) {
    if (d < 0 || D < 0 || s_period < 1) throw BadOrder("differencing orders must be valid");
    const int consumed = d + D * s_period;
    if (static_cast<int>(values.size()) <= consumed) {
        throw TooShort("series of length " + std::to_string(values.size()) +
                       " cannot absorb d=" + std::to_string(d) + ", D=" + std::to_string(D) +
                       ", s=" + std::to_string(s_period));
    }
    for (double v : values) {
        if (is_missing(v)) throw ConstraintViolation("difference requires missing-free values");
    }

    DifferencedSeries out;
    out.d = d;
    out.D = D;
    out.s = s_period;
    out.head.assign(values.begin(), values.begin() + consumed);

    std::vector<double> work = values;
    for (int k = 0; k < D; ++k) {
        std::vector<double> next(work.size() - static_cast<std::size_t>(s_period));
        for (std::size_t t = 0; t < next.size(); ++t) {
            next[t] = work[t + static_cast<std::size_t>(s_period)] - work[t];
        }
        work = std::move(next);
    }
    for (int k = 0; k < d; ++k) {
        std::vector<double> next(work.size() - 1);
        for (std::size_t t = 0; t < next.size(); ++t) next[t] = work[t + 1] - work[t];
        work = std::move(next);
    }
    out.values = std::move(work);
    return out;
}

DifferencedSeries difference(const Series& s, int d, int D, int s_period) {
    return difference(s.values(), d, D, s_period);
}

std::vector<double> differencing_polynomial(int d, int D, int s_period) {
    std::vector<double> poly{1.0};
    const std::vector<double> first{1.0, -1.0};
    std::vector<double> seasonal(static_cast<std::size_t>(s_period) + 1, 0.0);
    seasonal.front() = 1.0;
    seasonal.back() = -1.0;

    auto multiply = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> out(a.size() + b.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        }
        return out;
    };
    for (int k = 0; k < d; ++k) poly = multiply(poly, first);
    for (int k = 0; k < D; ++k) poly = multiply(poly, seasonal);
    return poly;
}

std::vector<double> invert_difference(const DifferencedSeries& ds,
                                      const std::vector<double>& future_diffs) {
    const std::size_t consumed = static_cast<std::size_t>(ds.d) +
                                 static_cast<std::size_t>(ds.D) * static_cast<std::size_t>(ds.s);
    if (ds.head.size() != consumed) {
        throw HeadMismatch("head has " + std::to_string(ds.head.size()) + " values, orders need " +
                           std::to_string(consumed));
    }
    if (consumed == 0) return future_diffs;

    // Stage-by-stage integration, undoing one operator at a time. Each
    // stage is a plain cumulative sum, so rounding error grows linearly
    // instead of polynomially as it would in the expanded recursion. The
    // intermediate stage prefixes are recomputed from the head with the
    // same subtractions the forward pass used, making integer cases exact.
    const std::size_t s = static_cast<std::size_t>(ds.s);

    // Prefix of each seasonal stage: S_0 = head, S_j = seasonal diff.
    std::vector<std::vector<double>> seasonal_prefix(static_cast<std::size_t>(ds.D) + 1);
    seasonal_prefix[0] = ds.head;
    for (int j = 1; j <= ds.D; ++j) {
        const auto& prev = seasonal_prefix[static_cast<std::size_t>(j - 1)];
        std::vector<double> cur(prev.size() - s);
        for (std::size_t t = 0; t < cur.size(); ++t) cur[t] = prev[t + s] - prev[t];
        seasonal_prefix[static_cast<std::size_t>(j)] = std::move(cur);
    }

    // Prefix of each regular stage on top of S_D.
    std::vector<std::vector<double>> regular_prefix(static_cast<std::size_t>(ds.d) + 1);
    regular_prefix[0] = seasonal_prefix[static_cast<std::size_t>(ds.D)];
    for (int k = 1; k <= ds.d; ++k) {
        const auto& prev = regular_prefix[static_cast<std::size_t>(k - 1)];
        std::vector<double> cur(prev.size() - 1);
        for (std::size_t t = 0; t < cur.size(); ++t) cur[t] = prev[t + 1] - prev[t];
        regular_prefix[static_cast<std::size_t>(k)] = std::move(cur);
    }

    // Integrate the regular stages in extended precision (nested
    // integrators amplify rounding noise polynomially, so the working
    // accumulators carry extra bits): T_{k-1}[t+1] = T_{k-1}[t] + T_k[t].
    std::vector<long double> cur(future_diffs.begin(), future_diffs.end());
    for (int k = ds.d; k >= 1; --k) {
        const auto& prefix = regular_prefix[static_cast<std::size_t>(k - 1)];
        long double last = prefix.back();
        for (long double& v : cur) {
            last += v;
            v = last;
        }
    }

    // Integrate the seasonal stages: S_{j-1}[t+s] = S_{j-1}[t] + S_j[t].
    for (int j = ds.D; j >= 1; --j) {
        const auto& prefix = seasonal_prefix[static_cast<std::size_t>(j - 1)];
        std::vector<long double> level(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const long double base =
                (i < s) ? static_cast<long double>(prefix[prefix.size() - s + i])
                        : level[i - s];
            level[i] = base + cur[i];
        }
        cur = std::move(level);
    }
    return std::vector<double>(cur.begin(), cur.end());
}

DifferencedSeries continuation_state(const std::vector<double>& values, int d, int D,
                                     int s_period) {
    const std::size_t consumed = static_cast<std::size_t>(d) +
                                 static_cast<std::size_t>(D) * static_cast<std::size_t>(s_period);
    if (values.size() < consumed) {
        throw TooShort("need at least " + std::to_string(consumed) + " trailing values");
    }
    DifferencedSeries state;
    state.d = d;
    state.D = D;
    state.s = s_period;
    state.head.assign(values.end() - static_cast<std::ptrdiff_t>(consumed), values.end());
    return state;
}

} // namespace gridcast::preprocess
