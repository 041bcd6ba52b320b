#pragma once

#include <functional>
#include <vector>

#include "dampflow/params.hpp"

namespace dampflow::barenblatt {

/// Mass-calibrated Barenblatt solution of rho_t = (1+t)^nu (rho^gamma)_xx.
struct Profile {
    GasModel model;
    double mass = 0.0;
    double a0 = 0.0;
    double b0 = 0.0;

    /// (1 + nu) / (gamma + 1): the self-similar spreading exponent.
    double spread() const { return (1.0 + model.nu) / (model.gamma + 1.0); }
};

Profile calibrate(const GasModel& model, double mass);

double density(const Profile& p, double x, double t);
/// Zero outside the support.
double velocity(const Profile& p, double x, double t);
double momentum(const Profile& p, double x, double t);
/// -(1+t)^nu d/dx (rho^gamma) from the analytic derivative.
double darcy_momentum(const Profile& p, double x, double t);
/// u_t + u u_x of the reference velocity; zero outside the support.
double acceleration_ratio(const Profile& p, double x, double t);
double support_edge(const Profile& p, double t);

/// || rho^beta1 |u|^beta2 ||_{L^p} over the support. Throws DomainError
/// unless beta1 * p / (gamma - 1) > -1.
double weighted_lp_norm(const Profile& p, double beta1, double beta2, double lp, double t);
/// || rho^delta (R / rho) ||_{L^p}.
double accel_lp_norm(const Profile& p, double delta, double lp, double t);

/// Closed-form log-log slopes of the two norms above against log(1 + t).
double weighted_lp_slope(const Profile& p, double beta1, double beta2, double lp);
double accel_lp_slope(const Profile& p, double delta, double lp);

/// Pointwise residual f_t - (1+t)^nu (f^gamma)_xx by centred differences of
/// step h; a one-sided second-order difference in t is used when t < h.
double pme_residual_at(const std::function<double(double, double)>& f, double gamma,
                       double nu, double x, double t, double h);

/// Max of |pme_residual_at| over 41 points spread over |x| <= min(0.9 edge, edge - 5h).
double pme_residual(const Profile& p, double h, double t);

/// Exact average of the reference density and momentum over [x_lo, x_hi].
struct CellAverage {
    double rho = 0.0;
    double mom = 0.0;
};
CellAverage cell_average(const Profile& p, double x_lo, double x_hi, double t);

}  // namespace dampflow::barenblatt
