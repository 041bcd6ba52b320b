#include "dampflow/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dampflow/errors.hpp"

namespace dampflow::quad {

double beta_function(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double jacobi_mass(double alpha, double beta) {
    return std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                    std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
}

Rule gauss_jacobi(int order, double alpha, double beta) {
    if (order < 1) throw DomainError("gauss_jacobi: order must be positive");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw DomainError("gauss_jacobi: exponents must exceed -1");

    const int n = order;
    const double s = alpha + beta;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 1));

    for (int k = 0; k < n; ++k) {
        if (k == 0) {
            diag(k) = (beta - alpha) / (s + 2.0);
        } else {
            const double t = 2.0 * k + s;
            diag(k) = (beta * beta - alpha * alpha) / (t * (t + 2.0));
        }
    }
    for (int k = 1; k < n; ++k) {
        double b2;
        if (k == 1) {
            // closed form avoids 0/0 when alpha + beta = -1
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
        } else {
            const double t = 2.0 * k + s;
            b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + s) / (t * t * (t + 1.0) * (t - 1.0));
        }
        sub(k - 1) = std::sqrt(b2);
    }

    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mu0 = jacobi_mass(alpha, beta);
    if (n == 1) {
        rule.nodes[0] = diag(0);
        rule.weights[0] = mu0;
        return rule;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& x = solver.eigenvalues();

    // Christoffel numbers from the orthonormal three-term recurrence.
    for (int i = 0; i < n; ++i) {
        double p_prev = 0.0;
        double p = 1.0 / std::sqrt(mu0);
        double sum = p * p;
        for (int k = 0; k + 1 < n; ++k) {
            const double b_next = sub(k);
            const double b_cur = (k == 0) ? 0.0 : sub(k - 1);
            const double p_next = ((x(i) - diag(k)) * p - b_cur * p_prev) / b_next;
            p_prev = p;
            p = p_next;
            sum += p * p;
        }
        rule.nodes[i] = x(i);
        rule.weights[i] = 1.0 / sum;
    }
    return rule;
}

PiecewiseJacobi::PiecewiseJacobi(std::vector<double> exponents, std::vector<int> orders)
    : exponents_(std::move(exponents)), orders_(std::move(orders)) {
    if (std::find(exponents_.begin(), exponents_.end(), 0.0) == exponents_.end())
        exponents_.push_back(0.0);
    std::sort(orders_.begin(), orders_.end());
    const int m = static_cast<int>(exponents_.size());
    for (int order : orders_)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                rules_.emplace(std::make_tuple(order, i, j),
                               gauss_jacobi(order, exponents_[i], exponents_[j]));
}

const Rule* PiecewiseJacobi::cached(int order, double alpha, double beta) const {
    auto index_of = [this](double e) {
        for (std::size_t i = 0; i < exponents_.size(); ++i)
            if (exponents_[i] == e) return static_cast<int>(i);
        return -1;
    };
    const int ia = index_of(alpha);
    const int ib = index_of(beta);
    if (ia < 0 || ib < 0) return nullptr;
    auto it = rules_.find(std::make_tuple(order, ia, ib));
    return it == rules_.end() ? nullptr : &it->second;
}

double PiecewiseJacobi::piece(double lo, double hi, std::span<const PowerFactor> factors,
                              const std::function<double(double)>& smooth, int order,
                              int depth) const {
    const double len = hi - lo;
    if (!(len > 0.0)) return 0.0;

    double e_lo = 0.0;
    double e_hi = 0.0;
    double nearest_lo = std::numeric_limits<double>::infinity();
    double nearest_hi = std::numeric_limits<double>::infinity();
    for (const auto& f : factors) {
        if (f.exponent == 0.0 && !f.odd) continue;
        if (f.point == lo) {
            e_lo += f.exponent;
        } else if (f.point == hi) {
            e_hi += f.exponent;
        } else {
            nearest_lo = std::min(nearest_lo, std::abs(f.point - lo));
            nearest_hi = std::min(nearest_hi, std::abs(f.point - hi));
        }
    }

    constexpr int max_depth = 80;
    if (depth < max_depth && (nearest_lo < 0.5 * len || nearest_hi < 0.5 * len)) {
        const double mid = lo + 0.5 * len;
        return piece(lo, mid, factors, smooth, order, depth + 1) +
               piece(mid, hi, factors, smooth, order, depth + 1);
    }

    Rule local;
    const Rule* rule = cached(order, e_hi, e_lo);
    if (rule == nullptr) {
        local = gauss_jacobi(order, e_hi, e_lo);
        rule = &local;
    }

    const double half = 0.5 * len;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
        const double t = rule->nodes[i];
        const double z = lo + (t + 1.0) * half;
        double value = smooth(z);
        for (const auto& f : factors) {
            if (f.point == lo) {
                continue;  // (z - lo)^e lives in the weight; sign is +1
            }
            if (f.point == hi) {
                if (f.odd) value = -value;
                continue;
            }
            const double d = z - f.point;
            value *= std::pow(std::abs(d), f.exponent);
            if (f.odd && d < 0.0) value = -value;
        }
        sum += rule->weights[i] * value;
    }
    return std::pow(half, 1.0 + e_lo + e_hi) * sum;
}

double PiecewiseJacobi::integrate(double a, double b, std::span<const PowerFactor> factors,
                                  const std::function<double(double)>& smooth,
                                  int order) const {
    if (b < a) return -integrate(b, a, factors, smooth, order);
    std::vector<double> cuts{a, b};
    for (const auto& f : factors)
        if (f.point > a && f.point < b) cuts.push_back(f.point);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += piece(cuts[i], cuts[i + 1], factors, smooth, order, 0);
    return total;
}

double PiecewiseJacobi::integrate_adaptive(double a, double b,
                                           std::span<const PowerFactor> factors,
                                           const std::function<double(double)>& smooth,
                                           double rel_tol, double abs_tol) const {
    double previous = integrate(a, b, factors, smooth, orders_.front());
    for (std::size_t k = 1; k < orders_.size(); ++k) {
        const double current = integrate(a, b, factors, smooth, orders_[k]);
        if (std::abs(current - previous) <= std::max(rel_tol * std::abs(current), abs_tol))
            return current;
        previous = current;
    }
    return previous;
}

}  // namespace dampflow::quad
