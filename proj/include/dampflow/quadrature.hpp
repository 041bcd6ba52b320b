#pragma once

#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace dampflow::quad {

/// Gauss rule on [-1, 1] for the weight (1 - t)^alpha (1 + t)^beta.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Integral of (1 - t)^alpha (1 + t)^beta over [-1, 1].
double jacobi_mass(double alpha, double beta);

/// Golub-Welsch nodes with Christoffel weights. Requires alpha, beta > -1.
Rule gauss_jacobi(int order, double alpha, double beta);

inline Rule gauss_legendre(int order) { return gauss_jacobi(order, 0.0, 0.0); }

/// Beta function B(a, b) via lgamma.
double beta_function(double a, double b);

/// Algebraic factor |z - point|^exponent, times sign(z - point) when odd.
struct PowerFactor {
    double point = 0.0;
    double exponent = 0.0;
    bool odd = false;
};

/// Composite Gauss-Jacobi integration of G(z) * prod_j PowerFactor_j(z).
///
/// The interval is split at every factor point it contains. Each piece
/// carries the algebraic endpoint behaviour in its Jacobi weight, and a
/// piece is bisected while some other factor point lies closer than half
/// its length, so nearby singularities outside a piece are resolved by
/// geometric grading. Rules for the exponents named at construction are
/// built once; any other exponent pair is built on the fly.
class PiecewiseJacobi {
public:
    PiecewiseJacobi(std::vector<double> exponents, std::vector<int> orders);

    double integrate(double a, double b, std::span<const PowerFactor> factors,
                     const std::function<double(double)>& smooth, int order) const;

    /// Doubles the per-piece order through the configured orders until two
    /// successive values agree to rel_tol (relative) or abs_tol.
    double integrate_adaptive(double a, double b, std::span<const PowerFactor> factors,
                              const std::function<double(double)>& smooth,
                              double rel_tol, double abs_tol = 0.0) const;

    const std::vector<int>& orders() const { return orders_; }

private:
    const Rule* cached(int order, double alpha, double beta) const;
    double piece(double lo, double hi, std::span<const PowerFactor> factors,
                 const std::function<double(double)>& smooth, int order, int depth) const;

    std::vector<double> exponents_;
    std::vector<int> orders_;
    std::map<std::tuple<int, int, int>, Rule> rules_;
};

}  // namespace dampflow::quad
