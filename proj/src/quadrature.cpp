// SPDX-License-Identifier: Apache-2.0
#include "psam/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace psam {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the orthogonal
// polynomial recurrence, weights mu0 * (first eigenvector component)^2.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                            double mu0) {
    const auto n = diag.size();
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    jacobi.diagonal() = diag;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        jacobi(i, i + 1) = offdiag(i);
        jacobi(i + 1, i) = offdiag(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("golub_welsch: eigendecomposition failed");

    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
    }
    return rule;
}

QuadratureRule make_hermite(int n) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd off(n - 1);
    for (int i = 1; i < n; ++i) off(i - 1) = std::sqrt(0.5 * i);
    return golub_welsch(diag, off, std::sqrt(M_PI));
}

QuadratureRule make_laguerre(int n) {
    Eigen::VectorXd diag(n), off(n - 1);
    for (int i = 0; i < n; ++i) diag(i) = 2.0 * i + 1.0;
    for (int i = 1; i < n; ++i) off(i - 1) = static_cast<double>(i);
    return golub_welsch(diag, off, 1.0);
}

const QuadratureRule& cached(int n, std::map<int, QuadratureRule>& cache, std::mutex& mtx,
                             QuadratureRule (*make)(int)) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    return cached(n, cache, mtx, make_hermite);
}

const QuadratureRule& gauss_laguerre(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    return cached(n, cache, mtx, make_laguerre);
}

}  // namespace psam
