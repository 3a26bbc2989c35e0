#include "declab/quadrature.hpp"

#include "declab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

namespace declab {

// Golub-Welsch on the Jacobi matrix of the Jacobi polynomials P^(alpha, 0),
// mapped from [-1, 1] to [0, 1].
void gauss_jacobi01(int points, double alpha, Eigen::VectorXd& x, Eigen::VectorXd& w)
{
    const double beta = 0;
    const int N = points;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        const double s = 2.0 * k + alpha + beta;
        J(k, k) = k == 0 ? (beta - alpha) / (alpha + beta + 2)
                         : (beta * beta - alpha * alpha) / (s * (s + 2));
        if (k >= 1) {
            const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta);
            const double den = s * s * (s + 1) * (s - 1);
            J(k, k - 1) = J(k - 1, k) = std::sqrt(num / den);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    x = (eig.eigenvalues().array() + 1.0) / 2.0;
    w = eig.eigenvectors().row(0).transpose().array().square();
    w /= w.sum();
}

namespace {

QuadratureRule make_rule(int m, int degree)
{
    QuadratureRule rule;
    rule.dim = m;
    rule.degree = degree;
    if (m == 0) {
        rule.nodes = Eigen::MatrixXd::Ones(1, 1);
        rule.weights = Eigen::VectorXd::Ones(1);
        return rule;
    }
    const int N = std::max(1, (degree + 2) / 2);
    std::vector<Eigen::VectorXd> xs(m), ws(m);
    for (int j = 0; j < m; ++j)
        gauss_jacobi01(N, double(m - 1 - j), xs[j], ws[j]);

    long count = 1;
    for (int j = 0; j < m; ++j)
        count *= N;
    rule.nodes.resize(m + 1, count);
    rule.weights.resize(count);
    std::vector<int> idx(m, 0);
    for (long q = 0; q < count; ++q) {
        double remaining = 1, weight = 1;
        for (int j = 0; j < m; ++j) {
            const double t = xs[j](idx[j]);
            rule.nodes(j + 1, q) = remaining * t;
            remaining *= 1 - t;
            weight *= ws[j](idx[j]);
        }
        rule.nodes(0, q) = remaining;
        rule.weights(q) = weight;
        for (int j = m - 1; j >= 0; --j) {
            if (++idx[j] < N)
                break;
            idx[j] = 0;
        }
    }
    rule.weights /= rule.weights.sum();
    return rule;
}

} // namespace

const QuadratureRule& simplex_quadrature(int m, int degree)
{
    if (m < 0 || m > 3 || degree < 0 || degree > 40)
        throw range_error("no quadrature rule for dimension " + std::to_string(m) + ", degree " +
                          std::to_string(degree));
    static std::mutex lock;
    static std::map<std::pair<int, int>, QuadratureRule> cache;
    std::lock_guard<std::mutex> guard(lock);
    auto key = std::make_pair(m, degree);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, make_rule(m, degree)).first;
    return it->second;
}

} // namespace declab
