#include "sirlab/models.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sirlab/errors.hpp"

namespace sirlab {

namespace {

// Regularised incomplete gamma by series (x < a+1) or continued fraction,
// the classic split from Numerical Recipes.
double gammp_series(double a, double x) {
    const double gln = std::lgamma(a);
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - gln);
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
}

double gammq_cf(double a, double x) {
    const double gln = std::lgamma(a);
    const double fpmin = std::numeric_limits<double>::min() / 1e-16;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Monte Carlo standard errors come from the spread of 20 contiguous blocks.
constexpr int kSeBlocks = 20;

}  // namespace

double gammp(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw InvalidInput("gammp: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gammp_series(a, x);
    return 1.0 - gammq_cf(a, x);
}

double chi2_median(int d) {
    if (d < 1) throw InvalidInput("chi2_median: d must be at least 1");
    const double a = 0.5 * d;
    auto cdf = [a](double x) { return gammp(a, 0.5 * x); };
    double lo = 0.0;
    double hi = d + 40.0 * std::sqrt(double(d)) + 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < 0.5)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * std::max(1.0, lo)) break;
    }
    const double m = 0.5 * (lo + hi);
    if (std::fabs(cdf(m) - 0.5) > 1e-10)
        throw std::logic_error("chi2_median: bisection failed to reach tolerance");
    return m;
}

int psi(const Eigen::VectorXd& z, double m_d) {
    if (!z.allFinite()) throw InvalidInput("psi: non-finite input");
    if (z.squaredNorm() > m_d) return 0;
    return psi0(z);
}

int psi0(const Eigen::VectorXd& z) {
    if (!z.allFinite()) throw InvalidInput("psi0: non-finite input");
    const Eigen::Index d = z.size();
    Eigen::Index imax = 0;
    double best = -1.0;
    bool tied = false;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double v = std::fabs(z(i));
        if (v > best) {
            best = v;
            imax = i;
            tied = false;
        } else if (v == best) {
            tied = true;
        }
    }
    if (tied || best == 0.0) return 0;
    return static_cast<int>(sgn(z(imax))) * static_cast<int>(imax + 1);
}

LowerBoundModel make_lower_bound_model(int p, int d, double rho, double sigma,
                                       const Eigen::MatrixXd& b) {
    if (d < 1 || p < d) throw InvalidInput("lower-bound model: need 1 <= d <= p");
    if (rho < 0.0 || rho >= 1.0) throw InvalidInput("lower-bound model: rho must lie in [0, 1)");
    if (sigma <= 0.0 || sigma > 0.5)
        throw InvalidInput("lower-bound model: sigma must lie in (0, 1/2]");

    LowerBoundModel model;
    model.p = p;
    model.d = d;
    model.rho = rho;
    model.sigma = sigma;
    if (b.size() == 0) {
        model.b = Eigen::MatrixXd::Zero(p, d);
        model.b.topLeftCorner(d, d).setIdentity();
    } else {
        if (b.rows() != p || b.cols() != d)
            throw InvalidInput("lower-bound model: basis shape mismatch");
        const double dev =
            (b.transpose() * b - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
        if (dev > 1e-8)
            throw InvalidInput("lower-bound model: basis is not orthonormal");
        model.b = b;
    }
    model.m_d = chi2_median(d);
    if (model.m_d <= 0.0 || model.m_d > double(d) * std::exp(-1.0 / (3.0 * d)))
        throw std::logic_error("lower-bound model: chi-square median bound violated");
    return model;
}

LowerBoundSample sample_lower_bound(const LowerBoundModel& model, Eigen::Index n, Rng& rng) {
    if (n < 1) throw InvalidInput("sample_lower_bound: n must be at least 1");
    const int p = model.p;
    const int d = model.d;
    const double mix = std::sqrt(1.0 - model.rho * model.rho);

    LowerBoundSample out;
    out.data.x.resize(n, p);
    out.data.y.resize(n);
    out.w.resize(static_cast<std::size_t>(n));
    out.z.resize(n, d);

    Eigen::VectorXd xrow(p), zrow(d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) xrow(j) = rng.normal();
        zrow.noalias() = model.rho * (model.b.transpose() * xrow);
        for (int j = 0; j < d; ++j) zrow(j) += mix * rng.normal();
        const int w = psi(zrow, model.m_d);
        out.data.x.row(i) = xrow;
        out.z.row(i) = zrow;
        out.w[static_cast<std::size_t>(i)] = w;
        out.data.y(i) = double(w) + rng.uniform(-model.sigma, model.sigma);
    }
    return out;
}

double m1_link(const Eigen::VectorXd& x) {
    if (x.size() != 15) throw InvalidInput("m1_link: x must have 15 entries");
    return x(0) + std::exp(x(1)) + std::log(std::fabs(x(2) + 1.0) + 1.0) + std::sin(x(3)) +
           std::atan(x(4));
}

double m2_link(const Eigen::VectorXd& x) {
    if (x.size() != 15) throw InvalidInput("m2_link: x must have 15 entries");
    const double denom = (1.0 + x(2)) * (1.0 + x(2));
    // no clipping near X3 = -1; extreme responses stay in the sample
    return x(0) * x(0) * x(0) + x(1) / denom +
           sgn(x(3)) * std::log(std::fabs(x(4) + 0.02) + 5.0);
}

namespace {

Dataset sample_link(Eigen::Index n, Rng& rng, double (*link)(const Eigen::VectorXd&)) {
    constexpr int p = 15;
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    Eigen::VectorXd row(p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) row(j) = rng.normal();
        x.row(i) = row;
        y(i) = link(row) + 0.01 * rng.normal();
    }
    return Dataset(std::move(x), std::move(y));
}

}  // namespace

Dataset sample_m1(Eigen::Index n, Rng& rng) {
    if (n < 1) throw InvalidInput("sample_m1: n must be at least 1");
    return sample_link(n, rng, m1_link);
}

Dataset sample_m2(Eigen::Index n, Rng& rng) {
    if (n < 1) throw InvalidInput("sample_m2: n must be at least 1");
    return sample_link(n, rng, m2_link);
}

Eigen::VectorXd sample_gp_values(const Eigen::MatrixXd& inputs, Rng& rng,
                                 const GpLinkSpec& spec) {
    const Eigen::Index n = inputs.rows();
    if (n < 1) throw InvalidInput("sample_gp_values: need at least one input row");
    if (n > spec.cap)
        throw ResourceLimit("sample_gp_values: n exceeds the factorisation cap " +
                            std::to_string(spec.cap));

    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double sq = (inputs.row(i) - inputs.row(j)).squaredNorm();
            k(i, j) = k(j, i) = std::exp(-0.5 * sq);
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = spec.jitter;
    for (;;) {
        Eigen::MatrixXd kj = k;
        kj.diagonal().array() += jitter;
        llt.compute(kj);
        if (llt.info() == Eigen::Success) break;
        jitter *= 10.0;
        if (jitter > spec.jitter_max)
            throw FactorizationFailed("sample_gp_values: Cholesky failed up to jitter " +
                                      std::to_string(spec.jitter_max));
    }

    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = rng.normal();
    return llt.matrixL() * g;
}

Dataset sample_gp_model(Eigen::Index n, int d, Rng& rng, const GpLinkSpec& spec) {
    if (n < 1) throw InvalidInput("sample_gp_model: n must be at least 1");
    if (d < 1 || d > 15) throw InvalidInput("sample_gp_model: need 1 <= d <= 15");
    if (n > spec.cap)
        throw ResourceLimit("sample_gp_model: n exceeds the factorisation cap " +
                            std::to_string(spec.cap));
    constexpr int p = 15;

    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) x(i, j) = rng.normal();

    const Eigen::VectorXd f = sample_gp_values(x.leftCols(d), rng, spec);

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = f(i) + spec.noise_sd * rng.normal();
    return Dataset(std::move(x), std::move(y));
}

MonteCarloEstimate expected_max_in_ball(int d, long long samples, Rng& rng) {
    if (d < 1) throw InvalidInput("expected_max_in_ball: d must be at least 1");
    if (samples < kSeBlocks) throw InvalidInput("expected_max_in_ball: too few samples");
    const double m_d = chi2_median(d);

    double block_vals[kSeBlocks];
    double total = 0.0;
    Eigen::VectorXd z(d);
    long long done = 0;
    for (int blk = 0; blk < kSeBlocks; ++blk) {
        const long long count = samples * (blk + 1) / kSeBlocks - done;
        double sum = 0.0;
        for (long long i = 0; i < count; ++i) {
            double nrm2 = 0.0, mx = 0.0;
            for (int j = 0; j < d; ++j) {
                z(j) = rng.normal();
                nrm2 += z(j) * z(j);
                mx = std::max(mx, std::fabs(z(j)));
            }
            if (nrm2 <= m_d) sum += mx;
        }
        block_vals[blk] = sum / double(count);
        total += sum;
        done += count;
    }
    MonteCarloEstimate est;
    est.samples = samples;
    est.value = total / double(samples);
    double var = 0.0;
    for (double v : block_vals) var += (v - est.value) * (v - est.value);
    est.se = std::sqrt(var / (kSeBlocks - 1.0) / kSeBlocks);
    return est;
}

MonteCarloEstimate lambda_0d(int d, long long samples, Rng& rng) {
    if (d < 1) throw InvalidInput("lambda_0d: d must be at least 1");
    if (samples < 100000) throw InvalidInput("lambda_0d: need at least 1e5 samples");
    const double m_d = chi2_median(d);

    // A_1 = { ||z||^2 <= m_d, z_1 > 0, |z_1| strictly the largest }.
    double blk_lambda[kSeBlocks];
    double sum_all = 0.0;
    long long hits_all = 0;
    Eigen::VectorXd z(d);
    long long done = 0;
    for (int blk = 0; blk < kSeBlocks; ++blk) {
        const long long count = samples * (blk + 1) / kSeBlocks - done;
        double sum = 0.0;
        long long hits = 0;
        for (long long i = 0; i < count; ++i) {
            for (int j = 0; j < d; ++j) z(j) = rng.normal();
            if (psi(z, m_d) == 1) {
                sum += z(0);
                ++hits;
            }
        }
        blk_lambda[blk] = hits > 0 ? (sum / hits) * (sum / hits) / (2.0 * d) : 0.0;
        sum_all += sum;
        hits_all += hits;
        done += count;
    }
    MonteCarloEstimate est;
    est.samples = samples;
    const double cond_mean = hits_all > 0 ? sum_all / double(hits_all) : 0.0;
    est.value = cond_mean * cond_mean / (2.0 * d);
    double var = 0.0;
    for (double v : blk_lambda) var += (v - est.value) * (v - est.value);
    est.se = std::sqrt(var / (kSeBlocks - 1.0) / kSeBlocks);
    return est;
}

MonteCarloEstimate gsnr_formula(int d, double rho, long long samples, Rng& rng) {
    // rho = 1 is admitted to read off the constant itself
    if (rho <= 0.0 || rho > 1.0) throw InvalidInput("gsnr_formula: rho must lie in (0, 1]");
    const MonteCarloEstimate emax = expected_max_in_ball(d, samples, rng);
    MonteCarloEstimate est;
    est.samples = samples;
    est.value = 2.0 / d * rho * rho * emax.value * emax.value;
    // delta method: d(c m^2)/dm = 2 c m
    est.se = 2.0 * (2.0 / d) * rho * rho * emax.value * emax.se;
    return est;
}

double theta_to_rho(double theta, int d, long long samples, Rng& rng) {
    if (theta < 0.0) throw InvalidInput("theta_to_rho: theta must be nonnegative");
    if (theta == 0.0) return 0.0;
    const MonteCarloEstimate emax = expected_max_in_ball(d, samples, rng);
    const double rho = theta * std::sqrt(double(d)) / emax.value;
    if (rho >= 1.0)
        throw ThetaTooLarge("theta_to_rho: theta " + std::to_string(theta) + " maps to rho " +
                            std::to_string(rho));
    return rho;
}

double exact_kl_xz(const Basis& b1, const Basis& b2, double rho) {
    if (b1.rows() != b2.rows() || b1.cols() != b2.cols())
        throw InvalidInput("exact_kl_xz: shape mismatch");
    if (rho <= 0.0 || rho >= 1.0) throw InvalidInput("exact_kl_xz: rho must lie in (0, 1)");
    const Eigen::Index p = b1.rows();
    const Eigen::Index d = b1.cols();
    for (const Basis* b : {&b1, &b2}) {
        const double dev =
            (b->m.transpose() * b->m - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
        if (dev > 1e-6) throw InvalidInput("exact_kl_xz: basis is not orthonormal");
    }

    auto joint = [&](const Basis& b) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Identity(p + d, p + d);
        s.topRightCorner(p, d) = rho * b.m;
        s.bottomLeftCorner(d, p) = rho * b.m.transpose();
        return s;
    };
    const Eigen::MatrixXd s1 = joint(b1);
    const Eigen::MatrixXd s2 = joint(b2);

    Eigen::LLT<Eigen::MatrixXd> llt1(s1), llt2(s2);
    if (llt1.info() != Eigen::Success || llt2.info() != Eigen::Success)
        throw Degenerate("exact_kl_xz: joint covariance is not positive definite");

    auto logdet = [](const Eigen::LLT<Eigen::MatrixXd>& llt) {
        return 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    };
    const double trace = llt2.solve(s1).trace();
    return 0.5 * (trace - double(p + d) + logdet(llt2) - logdet(llt1));
}

}  // namespace sirlab
