#include "sirlab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sirlab/errors.hpp"
#include "sirlab/rng.hpp"
#include "sirlab/sir.hpp"
#include "sirlab/slicing.hpp"

namespace sirlab {

namespace {

// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<Eigen::Index> split_permutation(Eigen::Index n, std::uint64_t seed) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Rng rng(seed, stream_hash("sparse/split"));
    for (Eigen::Index i = n - 1; i > 0; --i) {
        // rejection sampling for an unbiased draw in [0, i]
        const std::uint64_t m = static_cast<std::uint64_t>(i) + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % m;
        std::uint64_t x;
        do {
            x = rng.next_u64();
        } while (x >= limit);
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(x % m)]);
    }
    return perm;
}

Dataset take_rows(const Dataset& data, const std::vector<Eigen::Index>& rows,
                  std::size_t begin, std::size_t end) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(end - begin), data.p());
    Eigen::VectorXd y(static_cast<Eigen::Index>(end - begin));
    for (std::size_t k = begin; k < end; ++k) {
        x.row(static_cast<Eigen::Index>(k - begin)) = data.x.row(rows[k]);
        y(static_cast<Eigen::Index>(k - begin)) = data.y(rows[k]);
    }
    return Dataset(std::move(x), std::move(y));
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()),
                        static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b)
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                m(idx[a], idx[b]);
    return out;
}

// Restricted whitened fit: maximise Tr(B' Lambda1 B) s.t. B' Sigma B = I_d on
// the rows of `support`. Returns the s x d coefficient block.
Eigen::MatrixXd restricted_fit(const Eigen::MatrixXd& lambda1, const Eigen::MatrixXd& sigma,
                               const std::vector<int>& support, int d, double eig_floor) {
    const Eigen::MatrixXd sigma_l = submatrix(sigma, support);
    SymMatrix w;
    try {
        w = spd_inv_sqrt(SymMatrix(sigma_l), eig_floor);
    } catch (const SingularCovariance&) {
        std::string names;
        for (int j : support) names += (names.empty() ? "" : ",") + std::to_string(j);
        throw SingularCovariance("restricted covariance singular on support {" + names + "}");
    }
    const Eigen::MatrixXd lam_l = submatrix(lambda1, support);
    Eigen::MatrixXd m = w.m * lam_l * w.m;
    const EigenDecomposition eig = sym_eig(SymMatrix(0.5 * (m + m.transpose())));
    return w.m * eig.vectors.leftCols(d);
}

bool next_combination(std::vector<int>& comb, int p) {
    const int s = static_cast<int>(comb.size());
    int i = s - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == p - s + i) --i;
    if (i < 0) return false;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

}  // namespace

long long binomial_count(int p, int s) {
    if (s < 0 || s > p) return 0;
    s = std::min(s, p - s);
    unsigned long long result = 1;
    constexpr unsigned long long kMax = 1ULL << 62;
    for (int i = 1; i <= s; ++i) {
        const unsigned long long factor = static_cast<unsigned long long>(p - s + i);
        if (result > kMax / factor) return -1;
        // the intermediate is C(p-s+i, i), integral and increasing in i
        result = result * factor / static_cast<unsigned long long>(i);
    }
    return static_cast<long long>(result);
}

std::pair<Dataset, Dataset> split_halves(const Dataset& data, std::uint64_t split_seed) {
    const Eigen::Index n = data.n() - data.n() % 2;  // drop an odd trailing sample
    if (n < 2) throw InvalidInput("split_halves: need at least 2 samples");
    const auto perm = split_permutation(n, split_seed);
    return {take_rows(data, perm, 0, static_cast<std::size_t>(n / 2)),
            take_rows(data, perm, static_cast<std::size_t>(n / 2), static_cast<std::size_t>(n))};
}

AggregationFit fit_aggregation(const Dataset& data, const SparseConfig& cfg,
                               std::uint64_t split_seed) {
    const Eigen::Index p = data.p();
    if (cfg.d < 1 || cfg.d >= cfg.s || cfg.s > p)
        throw InvalidInput("fit_aggregation: need 1 <= d < s <= p");
    if (cfg.h < cfg.d) throw InvalidInput("fit_aggregation: need H >= d");

    const long long n_subsets = binomial_count(static_cast<int>(p), cfg.s);
    if (n_subsets < 0 || n_subsets > cfg.enumeration_cap)
        throw EnumerationTooLarge(
            "fit_aggregation: C(p, s) = " +
            (n_subsets < 0 ? std::string(">= 2^62") : std::to_string(n_subsets)) +
            " exceeds the cap " + std::to_string(cfg.enumeration_cap));

    const Eigen::Index n = data.n() - data.n() % 2;
    if (n / 2 <= cfg.s)
        throw SingularCovariance("fit_aggregation: half-sample size must exceed s");

    const auto [half1, half2] = split_halves(data, split_seed);

    const Eigen::MatrixXd lambda1 =
        candidate_matrix(half1, slice(half1, cfg.h)).lambda_hat.m;
    const Eigen::MatrixXd lambda2 =
        candidate_matrix(half2, slice(half2, cfg.h)).lambda_hat.m;
    const Eigen::MatrixXd sigma1 = sample_covariance(half1.x).m;

    std::vector<int> comb(static_cast<std::size_t>(cfg.s));
    std::iota(comb.begin(), comb.end(), 0);

    double best_score = -std::numeric_limits<double>::infinity();
    std::vector<int> best_support;
    Eigen::MatrixXd best_block;
    do {
        const Eigen::MatrixXd block = restricted_fit(lambda1, sigma1, comb, cfg.d, cfg.eig_floor);
        const double score = (block.transpose() * submatrix(lambda2, comb) * block).trace();
        // lexicographic enumeration + strict improvement = smallest support wins ties
        if (score > best_score) {
            best_score = score;
            best_support = comb;
            best_block = block;
        }
    } while (next_combination(comb, static_cast<int>(p)));

    AggregationFit out;
    out.selected_support = best_support;
    out.oracle_score = best_score;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(p, cfg.d);
    for (std::size_t k = 0; k < best_support.size(); ++k)
        basis.row(best_support[k]) = best_block.row(static_cast<Eigen::Index>(k));
    out.basis = Basis{std::move(basis), true};
    return out;
}

Basis fit_oracle(const Dataset& data, const std::vector<int>& support, int d, int h,
                 std::uint64_t split_seed, double eig_floor) {
    const Eigen::Index p = data.p();
    if (support.empty() || static_cast<Eigen::Index>(support.size()) > p)
        throw InvalidInput("fit_oracle: bad support size");
    if (static_cast<int>(support.size()) < d)
        throw InvalidInput("fit_oracle: support smaller than d");
    std::vector<int> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
        sorted.back() >= p)
        throw InvalidInput("fit_oracle: support indices must be distinct and within [0, p)");

    const Eigen::Index n = data.n() - data.n() % 2;
    if (n / 2 <= static_cast<Eigen::Index>(sorted.size()))
        throw SingularCovariance("fit_oracle: half-sample size must exceed the support size");

    const Dataset half1 = split_halves(data, split_seed).first;

    const Eigen::MatrixXd lambda1 =
        candidate_matrix(half1, slice(half1, h)).lambda_hat.m;
    const Eigen::MatrixXd sigma1 = sample_covariance(half1.x).m;
    const Eigen::MatrixXd block = restricted_fit(lambda1, sigma1, sorted, d, eig_floor);

    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(p, d);
    for (std::size_t k = 0; k < sorted.size(); ++k)
        basis.row(sorted[k]) = block.row(static_cast<Eigen::Index>(k));
    return Basis{std::move(basis), true};
}

}  // namespace sirlab
