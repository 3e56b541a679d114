#pragma once

#include "warpcmc/hypersurface.hpp"
#include "warpcmc/identities.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace warpcmc {

struct FlowOptions {
    double epsilon_cut = 1e-4;   ///< deactivate nodes with jacobian_factor <= epsilon_cut
    double speed_tol = 1e-11;    ///< per-step drift of the g-hat speed before halving
    int max_halvings = 12;
};

/// Normal-exponential flow of a hypersurface by unit-speed geodesics of
/// g-hat = g / f^2, started with velocity -f nu.
struct FlowState {
    double t = 0.0;
    SphereGrid grid;
    WarpingFunction ambient;
    FlowOptions options;

    /// Chart positions and velocities: 3 x size (full) or meridian-plane
    /// (z, varpi) pairs (axisymmetric).
    Eigen::MatrixXd points, velocities;
    GeometryReport report;
    Eigen::VectorXd initial_area_element;
    Eigen::VectorXd jacobian_factor;
    Eigen::Array<bool, Eigen::Dynamic, 1> active;
    double q_value = 0.0;
    double area = 0.0;

    double swept_weighted_volume = 0.0;  ///< n int_0^t int f^2 d mu dt
    double riccati_slack = -std::numeric_limits<double>::infinity();  ///< max over steps and nodes of d/dt(f/H) + f^2/(n-1)
    double max_speed_drift = 0.0;        ///< max | |v|_g / f - 1 |

    Eigen::VectorXd f_over_H;  ///< NaN on inactive nodes
    Eigen::VectorXd f_rate;    ///< df/dt = h'' v_r, NaN on inactive nodes
    double swept_rate = 0.0;      ///< n int f^2 d mu
    double swept_rate_dot = 0.0;  ///< its time derivative
    Eigen::Index active_count() const { return active.count(); }
};

struct FlowTrace {
    std::vector<double> times, q_values, areas, min_alignment, swept_weighted_volume, riccati_slack;
    std::vector<Eigen::Index> active_count;
    std::vector<Eigen::VectorXd> per_node_fH;
};

FlowState init_flow(const GraphSurface& surface, FlowOptions options = {});

/// Advance by dt.  Throws ParameterError for dt <= 0.
FlowState step(const FlowState& state, double dt);

/// Integrate to t_end (or until no node is active), recording every
/// `stride`-th step plus the initial and final states.
FlowTrace run(FlowState& state, double t_end, double dt, int stride = 1);

struct AuditItem {
    std::string name;
    double worst_slack;  ///< >= 0 means the inequality holds
    double tolerance;
    bool pass;
};

struct MonotonicityAudit {
    std::vector<AuditItem> items;  ///< Q non-increasing, Q(0)-Q(t) >= swept, Riccati, area
    bool all_pass() const;
};

struct AuditTolerances {
    double q_step = 1e-7;     ///< relative to Q(0)
    double swept = 1e-6;      ///< relative to Q(0)
    double riccati = 1e-5;
    double area_step = 1e-7;  ///< relative to initial area
};

MonotonicityAudit monotonicity_audit(const FlowTrace& trace, const std::vector<double>& weighted_volumes,
                                     const AuditTolerances& tol = {});
MonotonicityAudit monotonicity_audit(const FlowTrace& trace, const AuditTolerances& tol = {});

/// min over active nodes of <d/dr, nu>.  NotApplicableError for the ball variant.
double radial_alignment(const FlowState& state);

struct AreaFloorReport {
    IdentityReport area_floor;          ///< mu >= h(0)^{n-1} vol(N)
    IdentityReport weighted_minkowski;  ///< int (H/f)<X,nu> <= (n-1) mu
    IdentityReport q_floor;             ///< Q >= lambda h(0)^n vol(N)
    bool all_hold() const;
};

/// NotApplicableError for the ball variant.
AreaFloorReport area_floor_check(const FlowState& state, double area_tol = 1e-6,
                                 double minkowski_relative_tol = 1e-6);

/// Columns t, Q, area, min_alignment, swept_weighted_volume, active_count.
void write_trace(std::ostream& out, const FlowTrace& trace, const std::string& header);

} // namespace warpcmc
