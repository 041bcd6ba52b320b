#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dampflow/entropy.hpp"

using namespace dampflow;
using namespace dampflow::entropy;

TEST(Chi, KernelValues) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    EXPECT_EQ(chi(m, 0.3, 0.0, 0.0), 0.0);
    EXPECT_NEAR(chi(m, 0.4, 1.7, 0.4), std::pow(1.7, (m.gamma - 1) * m.lambda), 1e-15);
    const double c = std::pow(1.7, m.theta);
    EXPECT_EQ(chi(m, 0.4 + c, 1.7, 0.4), 0.0);
    EXPECT_EQ(chi(m, 0.4 - c * 1.0001, 1.7, 0.4), 0.0);
    EXPECT_NEAR(chi(m, 0.4 + 0.3, 1.7, 0.4), chi(m, 0.4 - 0.3, 1.7, 0.4), 1e-15);
}

TEST(Chi, KernelReproducesEntropy) {
    // integral of g(xi) chi over xi equals rho^{...} times the z-form; the
    // substitution xi = u + z rho^theta gives rho^{theta (1 + 2 lambda)} = rho
    const GasModel m = derive_gas_model(1.6, 0.0);
    const double rho = 0.8, u = -0.3;
    boost::math::quadrature::tanh_sinh<double> ts;
    const double c = std::pow(rho, m.theta);
    auto g = [](double xi) { return std::exp(0.4 * xi) + xi * xi * xi; };
    const double by_chi = ts.integrate([&](double xi) { return g(xi) * chi(m, xi, rho, u); }, u - c, u + c);
    const auto w = EntropyWeight::custom(g, false);
    EXPECT_NEAR(entropy_pair(m, w, rho, rho * u).eta / by_chi, 1.0, 1e-10);
}

TEST(EntropyPair, QuadraticIsMechanicalEnergy) {
    for (double g : {1.4, 2.0, 3.0, 5.0}) {
        const GasModel m = derive_gas_model(g, 0.0);
        for (int i = 1; i <= 50; ++i)
            for (int j = 0; j < 50; ++j) {
                const double rho = 2.0 * i / 50.0;
                const double u = -2.0 + 4.0 * j / 49.0;
                const auto pair = entropy_pair(m, EntropyWeight::quadratic(), rho, rho * u);
                const double e = mechanical_energy(m, rho, rho * u);
                EXPECT_NEAR(pair.eta, e, 1e-8 * std::max(1.0, e));
                const double q = mechanical_energy_flux(m, rho, rho * u);
                EXPECT_NEAR(pair.q, q, 1e-8 * std::max(1.0, std::abs(q)));
            }
    }
}

TEST(EntropyPair, ExampleValues) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    EXPECT_NEAR(entropy_pair(m, EntropyWeight::quadratic(), 1.0, 0.0).eta, 0.125, 1e-14);
    EXPECT_NEAR(entropy_pair(m, EntropyWeight::quadratic(), 0.7, 0.0).q, 0.0, 1e-15);
    EXPECT_NEAR(mechanical_energy(m, 1.0, 1.0), 0.625, 1e-15);
    EXPECT_EQ(mechanical_energy(m, 0.0, 0.0), 0.0);
    const GasModel m3 = derive_gas_model(3.0, 0.0);
    for (double rho : {0.3, 1.0, 1.9})
        EXPECT_NEAR(entropy_pair(m3, EntropyWeight::power(), rho, 0.0).eta / (0.5 * std::pow(rho, 4)), 1.0, 1e-13);
}

TEST(EntropyPair, VacuumRules) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    EXPECT_THROW(entropy_pair(m, EntropyWeight::quadratic(), 0.0, 0.1), std::domain_error);
    EXPECT_THROW(entropy_pair(m, EntropyWeight::quadratic(), -1.0, 0.0), std::domain_error);
    const auto v = entropy_pair(m, EntropyWeight::power(), 0.0, 0.0);
    EXPECT_EQ(v.eta, 0.0);
    EXPECT_EQ(v.q, 0.0);
}

TEST(EntropyPair, PowerFluxMatchesOracle) {
    const GasModel m = derive_gas_model(1.5, 0.0);
    const double rho = 0.6, u = 0.25;
    const double c = std::pow(rho, m.theta);
    const double p = m.power_exponent();
    boost::math::quadrature::tanh_sinh<double> ts;
    const double zk = -u / c;
    auto f = [&](double z) {
        return rho * std::pow(std::abs(u + z * c), p) * (u + m.theta * z * c) *
               std::pow(1 - z * z, m.lambda);
    };
    const double ref = ts.integrate(f, -1.0, zk) + ts.integrate(f, zk, 1.0);
    EXPECT_NEAR(entropy_pair(m, EntropyWeight::power(), rho, rho * u).q / ref, 1.0, 1e-11);
}

TEST(BregmanPower, StableNearDiagonal) {
    for (double g : {1.2, 2.0, 3.7}) {
        const double y = 0.9;
        for (double d : {1e-3, -1e-6, 1e-10, 0.2, -0.24}) {
            const double x = y * (1 + d);
            // leading-order behaviour g(g-1)/2 y^g d^2
            const double lead = g * (g - 1) / 2 * std::pow(y, g) * d * d;
            const double v = bregman_power(g, x, y);
            EXPECT_GT(v, 0.0);
            if (std::abs(d) < 1e-5) EXPECT_NEAR(v / lead, 1.0, 1e-4);
        }
        EXPECT_NEAR(bregman_power(g, 1.7, 0.3),
                    std::pow(1.7, g) - std::pow(0.3, g) - g * std::pow(0.3, g - 1) * 1.4, 1e-13);
        EXPECT_EQ(bregman_power(g, 0.0, 0.0), 0.0);
        EXPECT_NEAR(bregman_power(g, 0.0, 2.0), (g - 1) * std::pow(2.0, g), 1e-13);
    }
}

TEST(RelativeEntropy, IdentityAndPurePressure) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    const auto same = relative_entropy(m, 0.7, 0.3, 0.7, 0.3);
    EXPECT_EQ(same.eta_star, 0.0);
    EXPECT_EQ(same.p_star, 0.0);
    EXPECT_EQ(same.q_quad, 0.0);
    EXPECT_NEAR(same.q_star_flux, 0.0, 1e-16);
    const auto pr = relative_entropy(m, 1.3, 0.0, 0.4, 0.0);
    EXPECT_EQ(pr.q_quad, 0.0);
    EXPECT_NEAR(pr.eta_star, m.kappa / (m.gamma - 1) * pr.p_star, 1e-16);
    EXPECT_THROW(relative_entropy(m, 1.0, 0.0, 0.0, 0.2), std::domain_error);
}

TEST(RelativeEntropy, RandomStatesAgreeWithDefinition) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> r(0.0, 2.0), v(-2.0, 2.0);
    for (double g : {1.4, 2.0, 3.0}) {
        const GasModel m = derive_gas_model(g, 0.0);
        for (int i = 0; i < 100000; ++i) {
            const double rho = 2.0 - r(rng), rb = 2.0 - r(rng);  // (0, 2]
            const double u = v(rng), ub = v(rng);
            const double mm = rho * u, mb = rb * ub;
            const auto e = relative_entropy(m, rho, mm, rb, mb);
            // expanded kinetic form with cross terms
            const double q_lit = mm * mm / rho - mb * mb / rb + mb * mb / (rb * rb) * (rho - rb) -
                                 2 * mb / rb * (mm - mb);
            const double scale = mm * mm / rho + mb * mb / rb + std::pow(rho, g) + std::pow(rb, g);
            ASSERT_GE(e.p_star, 0.0);
            ASSERT_GE(e.q_quad, 0.0);
            ASSERT_NEAR(e.q_quad, q_lit, 1e-13 * scale);
            ASSERT_NEAR(e.eta_star, relative_entropy_definitional(m, rho, mm, rb, mb), 1e-13 * scale);
            ASSERT_NEAR(e.eta_star, 0.5 * e.q_quad + m.kappa / (g - 1) * e.p_star, 1e-15 * scale);
        }
    }
}

TEST(RelativeEntropy, VacuumConventions) {
    const GasModel m = derive_gas_model(1.5, 0.0);
    const auto a = relative_entropy(m, 0.0, 0.0, 0.5, 0.2);
    EXPECT_EQ(a.q_quad, 0.0);
    EXPECT_NEAR(a.p_star, 0.5 * std::pow(0.5, 1.5), 1e-15);
    const auto b = relative_entropy(m, 0.5, 0.2, 0.0, 0.0);
    EXPECT_NEAR(b.q_quad, 0.2 * 0.2 / 0.5, 1e-15);
    EXPECT_NEAR(b.eta_star, mechanical_energy(m, 0.5, 0.2), 1e-15);
}

TEST(HFunction, HAtZeroAndEvenness) {
    for (double g : {1.2, 1.5, 2.0, 3.0, 5.0}) {
        const GasModel m = derive_gas_model(g, 0.0);
        EXPECT_NEAR(h_function(m, 0.0) / ((g - 1) * (g - 1) / (g * (g + 1)) * m.c2), 1.0, 1e-10);
        for (double a : {0.1, 0.5, 0.99, 1.0, 1.7, 4.2})
            EXPECT_NEAR(h_function(m, a) - h_function(m, -a), 0.0, 1e-10 * h_function(m, a));
    }
}

TEST(HFunction, HMatchesOracle) {
    const GasModel m = derive_gas_model(4.0, 0.0);  // lambda < 0, exponent < 1
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double b : {0.0, 0.37, 0.999}) {
        auto f = [&](double z) {
            return std::pow(std::abs(b + z), m.h_exponent()) * std::pow(1 - z * z, m.lambda);
        };
        const double ref = ts.integrate(f, -1.0, -b) + ts.integrate(f, -b, 1.0);
        EXPECT_NEAR(h_function(m, b) / ref, 1.0, 1e-10) << b;
    }
}

TEST(HFunction, HMonotoneAndH1Nonnegative) {
    for (double g : {1.3, 2.0, 3.0, 5.0}) {
        const GasModel m = derive_gas_model(g, 0.0);
        double prev = h_function(m, 0.0);
        for (int i = 1; i <= 200; ++i) {
            const double a = 5.0 * i / 200.0;
            const double h = h_function(m, a);
            EXPECT_LE(prev, h + 1e-10);
            prev = h;
            EXPECT_GE(h1_function(m, 0.7, a), 0.0);
            EXPECT_NEAR(h1_function(m, 0.7, a), h1_function(m, 0.7, -a), 1e-10 * std::abs(h1_function(m, 0.7, a)));
        }
    }
}

TEST(HFunction, BFormsAgree) {
    for (double g : {1.4, 2.0, 3.0}) {
        const GasModel m = derive_gas_model(g, 0.0);
        for (double rho : {0.05, 0.5, 1.7})
            for (double u : {-1.5, 0.2, 0.9}) {
                const double b1 = B_function(m, rho, rho * u);
                const double b2 = B_by_subtraction(m, rho, rho * u);
                const double scale = m.c1 * std::pow(rho, g + 1) + m.c2 * rho * rho * u * u;
                EXPECT_NEAR(b1, b2, 1e-9 * scale) << g << " " << rho << " " << u;
                EXPECT_GE(b1, 0.0);
            }
        EXPECT_EQ(B_function(m, 1.2, 0.0), 0.0);
        EXPECT_EQ(B_function(m, 0.0, 0.0), 0.0);
    }
}
