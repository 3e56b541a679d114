#include "warpcmc/conformal_flow.hpp"
#include "warpcmc/chart.hpp"
#include "warpcmc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace warpcmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Geodesic of g-hat = g / f^2 in the chart:
/// y'' = -S(y', y') + 2 (h''/f) y'_r y' - |y'|_g^2 (h''/f) yhat.
template <int D>
struct Geodesic {
    using Vec = Eigen::Matrix<double, D, 1>;
    const WarpingFunction& w;
    double offset;

    Vec acceleration(const Vec& y, const Vec& v) const {
        const ChartPoint<D> c(w, offset, y);
        const double k = c.h2 / c.h1;
        return -c.connection(v, v) + 2.0 * k * c.radial(v) * v - c.metric(v, v) * k * c.yhat;
    }

    double speed(const Vec& y, const Vec& v) const {
        const ChartPoint<D> c(w, offset, y);
        return std::sqrt(c.metric(v, v)) / c.h1;
    }

    void rk4(Vec& y, Vec& v, double dt) const {
        const Vec k1y = v, k1v = acceleration(y, v);
        const Vec k2y = v + 0.5 * dt * k1v, k2v = acceleration(y + 0.5 * dt * k1y, k2y);
        const Vec k3y = v + 0.5 * dt * k2v, k3v = acceleration(y + 0.5 * dt * k2y, k3y);
        const Vec k4y = v + dt * k3v, k4v = acceleration(y + dt * k3y, k4y);
        y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }

    /// RK4 step, halved recursively while the speed drifts by more than tol.
    void advance(Vec& y, Vec& v, double dt, double tol, int depth) const {
        const double s0 = speed(y, v);
        Vec y1 = y, v1 = v;
        rk4(y1, v1, dt);
        if (depth > 0 && std::abs(speed(y1, v1) - s0) > tol) {
            advance(y, v, 0.5 * dt, tol, depth - 1);
            advance(y, v, 0.5 * dt, tol, depth - 1);
            return;
        }
        y = y1;
        v = v1;
    }
};

Embedding embedding_of(const FlowState& s) {
    Embedding e;
    e.points = s.points;
    if (s.grid.mode() == GridMode::axisymmetric)
        e.points.row(1) = s.points.row(1).cwiseQuotient(s.grid.directions().row(1));
    return e;
}

/// Refresh geometry-derived fields; returns per-node df/dt = h'' v_r.
void refresh(FlowState& s, bool update_mask) {
    s.report = geometry(s.ambient, s.grid, embedding_of(s), false);
    const Eigen::Index count = s.grid.size();
    const int n = s.ambient.dimension();
    const double offset = chart_offset(s.ambient);
    if (s.initial_area_element.size() == 0) s.initial_area_element = s.report.area_element;
    s.jacobian_factor = s.report.area_element.cwiseQuotient(s.initial_area_element);
    if (update_mask) {
        for (Eigen::Index k = 0; k < count; ++k) {
            const double H = s.report.H[k], J = s.jacobian_factor[k];
            if (s.active[k] && !(std::isfinite(H) && H > 0.0 && J > s.options.epsilon_cut)) s.active[k] = false;
        }
    }
    s.f_over_H = Eigen::VectorXd::Constant(count, kNaN);
    s.f_rate = Eigen::VectorXd::Constant(count, kNaN);
    double q = 0.0, area = 0.0, rate = 0.0, rate_dot = 0.0;
    const Eigen::VectorXd& w = s.grid.weights();
    for (Eigen::Index k = 0; k < count; ++k) {
        if (!s.active[k]) continue;
        const double f = s.report.f[k], H = s.report.H[k];
        double h2, vr;
        if (s.grid.mode() == GridMode::full) {
            const ChartPoint<3> c(s.ambient, offset, s.points.col(k).head<3>());
            h2 = c.h2;
            vr = c.radial(s.velocities.col(k).head<3>());
        } else {
            const ChartPoint<2> c(s.ambient, offset, s.points.col(k).head<2>());
            h2 = c.h2;
            vr = c.radial(s.velocities.col(k).head<2>());
        }
        const double fdot = h2 * vr;
        const double dmu = w[k] * s.report.area_element[k];
        s.f_over_H[k] = f / H;
        s.f_rate[k] = fdot;
        q += dmu * f / H;
        area += dmu;
        rate += dmu * f * f;
        rate_dot += dmu * (2.0 * f * fdot - f * f * f * H);
    }
    s.q_value = (n - 1) * q;
    s.area = area;
    s.swept_rate = n * rate;
    s.swept_rate_dot = n * rate_dot;
}

double min_alignment(const FlowState& s) {
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < s.grid.size(); ++k)
        if (s.active[k]) m = std::min(m, s.report.nu_r[k]);
    return m;
}

void record(FlowTrace& trace, const FlowState& s) {
    trace.times.push_back(s.t);
    trace.q_values.push_back(s.q_value);
    trace.areas.push_back(s.area);
    trace.min_alignment.push_back(min_alignment(s));
    trace.swept_weighted_volume.push_back(s.swept_weighted_volume);
    trace.riccati_slack.push_back(s.riccati_slack);
    trace.active_count.push_back(s.active_count());
    trace.per_node_fH.push_back(s.f_over_H);
}

} // namespace

FlowState init_flow(const GraphSurface& surface, FlowOptions options) {
    FlowState s;
    s.grid = surface.grid;
    s.ambient = surface.ambient;
    s.options = options;
    const Embedding e = graph_embedding(surface);
    const GeometryReport g = geometry(surface.ambient, surface.grid, e, true);
    if (!(g.min_H > 0.0)) throw HypothesisError("conformal flow needs positive mean curvature");
    s.points = e.points;
    if (s.grid.mode() == GridMode::axisymmetric)
        s.points.row(1) = e.points.row(1).cwiseProduct(s.grid.directions().row(1));
    s.velocities = -(g.normal * g.f.asDiagonal());
    s.active = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(s.grid.size(), true);
    refresh(s, false);
    return s;
}

FlowState step(const FlowState& state, double dt) {
    if (!(dt > 0.0)) throw ParameterError("flow step needs dt > 0");
    if (state.active_count() == 0) throw GeometryError("flow exhausted: no active nodes");
    FlowState next = state;
    const double offset = chart_offset(state.ambient);
    const int depth = state.options.max_halvings;
    const double tol = state.options.speed_tol;
    for (Eigen::Index k = 0; k < state.grid.size(); ++k) {
        try {
            if (state.grid.mode() == GridMode::full) {
                Eigen::Vector3d y = state.points.col(k), v = state.velocities.col(k);
                Geodesic<3>{state.ambient, offset}.advance(y, v, dt, tol, depth);
                next.points.col(k) = y;
                next.velocities.col(k) = v;
            } else {
                Eigen::Vector2d y = state.points.col(k), v = state.velocities.col(k);
                Geodesic<2>{state.ambient, offset}.advance(y, v, dt, tol, depth);
                next.points.col(k) = y;
                next.velocities.col(k) = v;
            }
        } catch (const Error&) {
            next.active[k] = false;  // the node left the chart; keep its last position
        }
    }
    next.t = state.t + dt;
    refresh(next, true);

    const int n = state.ambient.dimension();
    for (Eigen::Index k = 0; k < state.grid.size(); ++k) {
        if (!next.active[k] || !state.active[k]) continue;
        const double f0 = state.report.f[k], f1 = next.report.f[k];
        const double fd0 = state.f_rate[k], fd1 = next.f_rate[k];
        const double f2_integral = 0.5 * dt * (f0 * f0 + f1 * f1) + dt * dt / 6.0 * (f0 * fd0 - f1 * fd1);
        const double slack = (next.f_over_H[k] - state.f_over_H[k] + f2_integral / (n - 1)) / dt;
        next.riccati_slack = std::max(next.riccati_slack, slack);

        Geodesic<3> g3{state.ambient, offset};
        Geodesic<2> g2{state.ambient, offset};
        const double speed = state.grid.mode() == GridMode::full
                                 ? g3.speed(next.points.col(k).head<3>(), next.velocities.col(k).head<3>())
                                 : g2.speed(next.points.col(k).head<2>(), next.velocities.col(k).head<2>());
        next.max_speed_drift = std::max(next.max_speed_drift, std::abs(speed - 1.0));
    }
    next.swept_weighted_volume += 0.5 * dt * (state.swept_rate + next.swept_rate) +
                                  dt * dt / 12.0 * (state.swept_rate_dot - next.swept_rate_dot);
    return next;
}

FlowTrace run(FlowState& state, double t_end, double dt, int stride) {
    if (!(dt > 0.0)) throw ParameterError("flow run needs dt > 0");
    if (stride < 1) throw ParameterError("flow run needs stride >= 1");
    FlowTrace trace;
    record(trace, state);
    const double span = t_end - state.t;
    if (!(span > 0.0)) return trace;
    const long steps = static_cast<long>(std::ceil(span / dt - 1e-9));
    const double h = span / steps;
    const double t0 = state.t;
    for (long k = 1; k <= steps && state.active_count() > 0; ++k) {
        state = step(state, h);
        state.t = k == steps ? t_end : t0 + k * h;
        if (k % stride == 0 || k == steps || state.active_count() == 0) record(trace, state);
    }
    return trace;
}

bool MonotonicityAudit::all_pass() const {
    return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.pass; });
}

MonotonicityAudit monotonicity_audit(const FlowTrace& trace, const std::vector<double>& volumes,
                                     const AuditTolerances& tol) {
    if (trace.times.empty()) throw ParameterError("monotonicity audit of an empty trace");
    if (volumes.size() != trace.times.size())
        throw ParameterError("weighted volumes must match the trace length");
    const double q0 = trace.q_values.front(), a0 = trace.areas.front();
    double q_step = std::numeric_limits<double>::infinity(), swept = q_step, area_step = q_step;
    for (std::size_t k = 1; k < trace.times.size(); ++k) {
        q_step = std::min(q_step, trace.q_values[k - 1] - trace.q_values[k]);
        area_step = std::min(area_step, trace.areas[k - 1] - trace.areas[k]);
    }
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        swept = std::min(swept, q0 - trace.q_values[k] - volumes[k]);
    const double riccati = -*std::max_element(trace.riccati_slack.begin(), trace.riccati_slack.end());

    MonotonicityAudit audit;
    audit.items.push_back({"q-nonincreasing", q_step, tol.q_step * q0, q_step >= -tol.q_step * q0});
    audit.items.push_back({"q-drop-vs-swept-volume", swept, tol.swept * q0, swept >= -tol.swept * q0});
    audit.items.push_back({"riccati", riccati, tol.riccati, riccati >= -tol.riccati});
    audit.items.push_back({"area-nonincreasing", area_step, tol.area_step * a0, area_step >= -tol.area_step * a0});
    return audit;
}

MonotonicityAudit monotonicity_audit(const FlowTrace& trace, const AuditTolerances& tol) {
    return monotonicity_audit(trace, trace.swept_weighted_volume, tol);
}

double radial_alignment(const FlowState& state) {
    if (state.ambient.variant() == Variant::ball)
        throw NotApplicableError("radial alignment applies to the boundary variant only");
    return min_alignment(state);
}

bool AreaFloorReport::all_hold() const {
    return area_floor.verdict != Verdict::violated && weighted_minkowski.verdict != Verdict::violated &&
           q_floor.verdict != Verdict::violated;
}

AreaFloorReport area_floor_check(const FlowState& state, double area_tol, double minkowski_relative_tol) {
    if (state.ambient.variant() == Variant::ball)
        throw NotApplicableError("area floor applies to the boundary variant only");
    const int n = state.ambient.dimension();
    const double h0 = state.ambient.eval(0.0).v;
    const double vol = state.ambient.vol_N();
    const double floor_area = std::pow(h0, n - 1) * vol;

    double lhs = 0.0;
    const Eigen::VectorXd& w = state.grid.weights();
    for (Eigen::Index k = 0; k < state.grid.size(); ++k) {
        if (!state.active[k]) continue;
        const GeometryReport& g = state.report;
        lhs += w[k] * g.area_element[k] * g.H[k] / g.f[k] * g.x_dot_nu[k];
    }
    const double lambda = radial_alignment(state);
    AreaFloorReport r;
    r.area_floor = judge_inequality("area-floor", state.area, floor_area, +1,
                                    area_tol / std::max(state.area, floor_area));
    r.weighted_minkowski =
        judge_inequality("weighted-minkowski", lhs, (n - 1) * state.area, -1, minkowski_relative_tol);
    r.q_floor = judge_inequality("q-floor", state.q_value, lambda * std::pow(h0, n) * vol, +1, 1e-9);
    return r;
}

void write_trace(std::ostream& out, const FlowTrace& trace, const std::string& header) {
    out << "# " << header << '\n' << "t,Q,area,min_alignment,swept_weighted_volume,active_count\n";
    char line[256];
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%ld\n", trace.times[k], trace.q_values[k],
                      trace.areas[k], trace.min_alignment[k], trace.swept_weighted_volume[k],
                      static_cast<long>(trace.active_count[k]));
        out << line;
    }
}

} // namespace warpcmc
