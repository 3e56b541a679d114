#include "warpcmc/models.hpp"
#include "warpcmc/errors.hpp"
#include "warpcmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace warpcmc {

namespace {

const GaussRule& panel_rule(int points) {
    static const GaussRule rule16 = gauss_legendre(16);
    static const GaussRule rule32 = gauss_legendre(32);
    if (points == 16) return rule16;
    if (points == 32) return rule32;
    thread_local GaussRule custom;
    if (custom.nodes.size() != points) custom = gauss_legendre(points);
    return custom;
}

/// omega(s_lower + e) / e, continued through e = 0 by its Taylor expansion.
double omega_over_excess(const OmegaProfile& p, double e) {
    if (e <= 1e-9 * p.s_lower) {
        const OmegaJet j = p.omega(p.s_lower);
        return j.d1 + 0.5 * j.d2 * e;
    }
    return p.omega(p.s_lower + e).v / e;
}

/// dF/dxi for s = s_lower + xi^2.
double arclength_integrand(const OmegaProfile& p, double xi) {
    return 2.0 / std::sqrt(omega_over_excess(p, xi * xi));
}

double integrate_xi(const OmegaProfile& p, double a, double b, int points) {
    const GaussRule& rule = panel_rule(points);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k)
        acc += rule.weights[k] * arclength_integrand(p, mid + half * rule.nodes[k]);
    return half * acc;
}

std::vector<double> scan_grid(const OmegaProfile& p, int count) {
    std::vector<double> s(count);
    if (std::isfinite(p.domain_hi)) {
        for (int k = 0; k < count; ++k)
            s[k] = p.domain_lo + (p.domain_hi - p.domain_lo) * k / (count - 1.0);
    } else {
        const double lo = std::log(p.domain_lo > 0.0 ? p.domain_lo : 1e-8);
        const double hi = std::log(1e8);
        for (int k = 0; k < count; ++k) s[k] = std::exp(lo + (hi - lo) * k / (count - 1.0));
    }
    return s;
}

/// Root of omega in [lo, hi] (sign change given), bisection then Newton.
double refine_root(const OmegaProfile& p, double lo, double hi) {
    const bool rising = p.omega(lo).v < 0.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-6 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        ((p.omega(mid).v < 0.0) == rising ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int iter = 0; iter < 50; ++iter) {
        const OmegaJet j = p.omega(s);
        if (j.d1 == 0.0) break;
        double next = s - j.v / j.d1;
        if (!(next >= lo && next <= hi)) break;
        if (std::abs(next - s) <= 1e-16 * s) {
            s = next;
            break;
        }
        s = next;
    }
    return s;
}

double power(double s, double e) { return std::pow(s, e); }

} // namespace

std::string to_string(Family family) {
    switch (family) {
    case Family::euclidean: return "euclidean";
    case Family::sphere: return "sphere";
    case Family::hyperbolic: return "hyperbolic";
    case Family::schwarzschild: return "schwarzschild";
    case Family::desitter_schwarzschild: return "desitter-schwarzschild";
    case Family::reissner_nordstrom: return "reissner-nordstrom";
    case Family::tabulated: return "tabulated";
    }
    return "unknown";
}

const std::vector<Family>& all_families() {
    static const std::vector<Family> families{
        Family::euclidean,     Family::sphere,
        Family::hyperbolic,    Family::schwarzschild,
        Family::desitter_schwarzschild, Family::reissner_nordstrom,
        Family::tabulated};
    return families;
}

Family parse_family(const std::string& name) {
    for (Family f : all_families())
        if (to_string(f) == name) return f;
    throw ParameterError("unknown model family '" + name + "'");
}

double desitter_kappa_limit(double m, int n) {
    const double nn = n;
    const double coefficient = std::pow(nn, nn) / (4.0 * std::pow(nn - 2.0, nn - 2.0)) * m * m;
    return std::pow(1.0 / coefficient, 1.0 / (nn - 2.0));
}

Admissibility admissibility(const ModelSpec& spec) {
    if (spec.n < 3) return {false, spec.n - 3.0, "n >= 3"};
    switch (spec.family) {
    case Family::euclidean:
    case Family::tabulated:
        return {true, std::numeric_limits<double>::infinity(), ""};
    case Family::sphere:
    case Family::hyperbolic:
        if (!(spec.curvature > 0.0)) return {false, spec.curvature, "curvature > 0"};
        return {true, spec.curvature, ""};
    case Family::schwarzschild:
        if (!(spec.m > 0.0)) return {false, spec.m, "m > 0"};
        return {true, spec.m, ""};
    case Family::desitter_schwarzschild: {
        if (!(spec.m > 0.0)) return {false, spec.m, "m > 0"};
        if (spec.kappa <= 0.0) return {true, spec.m, ""};
        const double nn = spec.n;
        const double bound = std::pow(nn, nn) / (4.0 * std::pow(nn - 2.0, nn - 2.0)) * spec.m * spec.m *
                             std::pow(spec.kappa, nn - 2.0);
        const double slack = 1.0 - bound;
        if (!(slack > 0.0)) return {false, slack, "n^n / (4 (n-2)^(n-2)) m^2 kappa^(n-2) < 1"};
        return {true, std::min(slack, spec.m), ""};
    }
    case Family::reissner_nordstrom: {
        const double slack = std::min(spec.m - 2.0 * spec.q, spec.q);
        if (!(slack > 0.0)) return {false, slack, "m > 2q > 0"};
        return {true, slack, ""};
    }
    }
    return {false, 0.0, "unknown family"};
}

double horizon_radius(const OmegaProfile& profile) {
    if (std::isfinite(profile.domain_hi)) {
        const OmegaJet j = profile.omega(profile.domain_lo);
        if (std::abs(j.v) <= 1e-14 && j.d1 > 0.0) return profile.domain_lo;
    }
    const auto grid = scan_grid(profile, 8000);
    double prev = profile.omega(grid[0]).v;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double cur = profile.omega(grid[k]).v;
        if (prev < 0.0 && cur >= 0.0) {
            const double s = refine_root(profile, grid[k - 1], grid[k]);
            const double slope = profile.omega(s).d1;
            if (!(slope > 1e-10 * std::max(1.0, 1.0 / s)))
                throw SingularityError("horizon_radius: omega has a degenerate zero (omega'(s) <= 0)");
            return s;
        }
        prev = cur;
    }
    throw ParameterError("horizon_radius: omega has no sign change from negative to positive");
}

OmegaProfile make_omega_profile(const ModelSpec& spec) {
    const Admissibility adm = admissibility(spec);
    if (!adm.ok) throw ParameterError("inadmissible parameters for " + to_string(spec.family) +
                                      ": violates " + adm.violated);
    OmegaProfile p;
    p.n = spec.n;
    p.rho = 1.0;
    p.name = to_string(spec.family);
    const double nn = spec.n;
    const double m = spec.m;
    switch (spec.family) {
    case Family::schwarzschild:
        p.omega = [m, nn](double s) {
            return OmegaJet{1.0 - m * power(s, 2.0 - nn), m * (nn - 2.0) * power(s, 1.0 - nn),
                            -m * (nn - 2.0) * (nn - 1.0) * power(s, -nn)};
        };
        break;
    case Family::desitter_schwarzschild: {
        const double k = spec.kappa;
        p.omega = [m, nn, k](double s) {
            return OmegaJet{1.0 - m * power(s, 2.0 - nn) - k * s * s,
                            m * (nn - 2.0) * power(s, 1.0 - nn) - 2.0 * k * s,
                            -m * (nn - 2.0) * (nn - 1.0) * power(s, -nn) - 2.0 * k};
        };
        break;
    }
    case Family::reissner_nordstrom: {
        const double q2 = spec.q * spec.q;
        p.omega = [m, nn, q2](double s) {
            return OmegaJet{1.0 - m * power(s, 2.0 - nn) + q2 * power(s, 4.0 - 2.0 * nn),
                            m * (nn - 2.0) * power(s, 1.0 - nn) + q2 * (4.0 - 2.0 * nn) * power(s, 3.0 - 2.0 * nn),
                            -m * (nn - 2.0) * (nn - 1.0) * power(s, -nn) +
                                q2 * (4.0 - 2.0 * nn) * (3.0 - 2.0 * nn) * power(s, 2.0 - 2.0 * nn)};
        };
        break;
    }
    case Family::tabulated: {
        OmegaProfile t = read_omega_profile(spec.omega_file, spec.n);
        t.s_max = std::min(spec.s_max_factor * t.s_lower, t.domain_hi);
        return t;
    }
    default:
        throw ParameterError(to_string(spec.family) + " is not an area-radius (omega) family");
    }
    const double scale = std::pow(m, 1.0 / (nn - 2.0));
    p.domain_lo = 1e-6 * scale;
    p.s_lower = horizon_radius(p);

    // second root (cosmological horizon when kappa > 0)
    const double lo = std::log(p.s_lower), hi = std::log(1e8 * scale);
    double prev_s = p.s_lower * (1.0 + 1e-9);
    for (int k = 1; k <= 8000; ++k) {
        const double s = std::exp(lo + (hi - lo) * k / 8000.0);
        if (p.omega(s).v < 0.0) {
            double a = prev_s, b = s;
            for (int iter = 0; iter < 200 && b - a > 1e-15 * b; ++iter) {
                const double mid = 0.5 * (a + b);
                (p.omega(mid).v > 0.0 ? a : b) = mid;
            }
            p.s_upper = 0.5 * (a + b);
            break;
        }
        prev_s = s;
    }
    p.s_max = spec.s_max_factor * p.s_lower;
    if (std::isfinite(p.s_upper)) p.s_max = std::min(p.s_max, p.s_lower + 0.95 * (p.s_upper - p.s_lower));
    return p;
}

OmegaProfile read_omega_profile(const std::string& path, int n, double rho) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open omega profile '" + path + "'");
    std::vector<double> s, w;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double a = 0.0, b = 0.0;
        if (!(fields >> a >> b))
            throw ParameterError(path + ":" + std::to_string(line_no) + ": expected two numbers");
        if (!s.empty() && !(a > s.back()))
            throw ParameterError(path + ":" + std::to_string(line_no) + ": s must be strictly increasing");
        s.push_back(a);
        w.push_back(b);
    }
    if (s.size() < 6) throw ParameterError(path + ": need at least 6 samples");
    const Eigen::VectorXd knots = Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
    const Eigen::VectorXd values = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
    auto table = std::make_shared<const QuinticHermiteTable>(QuinticHermiteTable::from_samples(knots, values));

    OmegaProfile p;
    p.name = "tabulated:" + path;
    p.n = n;
    p.rho = rho;
    p.domain_lo = s.front();
    p.domain_hi = s.back();
    p.omega = [table, lo = s.front(), hi = s.back()](double x) {
        if (x < lo - 1e-12 * std::abs(lo) || x > hi + 1e-12 * std::abs(hi))
            throw DomainError("tabulated omega evaluated outside its data range");
        const Jet3<double> j = table->eval(x);
        return OmegaJet{j.v, j.d1, j.d2};
    };
    p.s_lower = horizon_radius(p);
    p.s_max = std::min(10.0 * p.s_lower, p.domain_hi);
    return p;
}

double area_radius_to_arclength(const OmegaProfile& profile, double s, int panels, int points_per_panel) {
    if (s < profile.s_lower) throw DomainError("area_radius_to_arclength: s below the horizon");
    const double xi = std::sqrt(s - profile.s_lower);
    double total = 0.0;
    for (int k = 0; k < panels; ++k)
        total += integrate_xi(profile, xi * k / panels, xi * (k + 1) / panels, points_per_panel);
    return total;
}

WarpingFunction omega_to_warping(const OmegaProfile& profile, int grid_size) {
    if (!profile.omega) throw ParameterError("omega_to_warping: empty profile");
    const OmegaJet at_horizon = profile.omega(profile.s_lower);
    if (std::abs(at_horizon.v) > 1e-10)
        throw ParameterError("omega_to_warping: omega(s_lower) != 0");
    if (!(at_horizon.d1 > 0.0))
        throw SingularityError("omega_to_warping: omega'(s_lower) must be positive (simple zero)");
    if (!(profile.s_max > profile.s_lower)) throw ParameterError("omega_to_warping: empty s range");

    auto shared = std::make_shared<const OmegaProfile>(profile);
    const double xi_max = std::sqrt(profile.s_max - profile.s_lower);
    const double dxi = xi_max / grid_size;
    Eigen::VectorXd r(grid_size + 1), excess(grid_size + 1), d1(grid_size + 1), d2(grid_size + 1);
    r[0] = 0.0;
    for (int i = 0; i <= grid_size; ++i) {
        const double xi = i * dxi;
        if (i > 0) r[i] = r[i - 1] + integrate_xi(profile, (i - 1) * dxi, xi, 32);
        excess[i] = xi * xi;
        d1[i] = xi * std::sqrt(omega_over_excess(profile, xi * xi));
        d2[i] = 0.5 * profile.omega(profile.s_lower + xi * xi).d1;
    }
    auto table = std::make_shared<const QuinticHermiteTable>(r, excess, d1, d2);
    auto knots_r = std::make_shared<const Eigen::VectorXd>(r);

    WarpingFunction::Info info;
    info.name = profile.name;
    info.kind = WarpingKind::tabulated;
    info.variant = Variant::boundary;
    info.n = profile.n;
    info.rho = profile.rho;
    info.r_bar = r[grid_size];
    info.truncated = true;
    info.smoothness_defect = 0.0;  // derivatives come from omega, not from the table

    auto jet = [shared, table](double radius) {
        const double e = std::max(0.0, table->eval(radius).v);
        const OmegaJet w = shared->omega(shared->s_lower + e);
        const double slope = std::sqrt(e * omega_over_excess(*shared, e));
        return WarpingJet{shared->s_lower + e, slope, 0.5 * w.d1, 0.5 * w.d2 * slope};
    };
    auto inverse = [shared, knots_r, dxi, grid_size](double s) {
        if (s < shared->s_lower) throw DomainError("warping inverse: value below h(0)");
        const double xi = std::sqrt(s - shared->s_lower);
        const int i = std::clamp(static_cast<int>(xi / dxi), 0, grid_size);
        return (*knots_r)[i] + integrate_xi(*shared, i * dxi, xi, 16);
    };
    return WarpingFunction(std::move(info), std::move(jet), std::move(inverse));
}

WarpingFunction make_model(const ModelSpec& spec) {
    const Admissibility adm = admissibility(spec);
    if (!adm.ok)
        throw ParameterError("inadmissible parameters for " + to_string(spec.family) + ": violates " +
                             adm.violated);
    WarpingFunction::Info info;
    info.name = to_string(spec.family);
    info.n = spec.n;
    info.rho = 1.0;
    info.variant = Variant::ball;
    switch (spec.family) {
    case Family::euclidean:
        info.r_bar = spec.r_max > 0.0 ? spec.r_max : 10.0;
        info.truncated = true;
        return closed_form_warping(info, [](double r) { return WarpingJet{r, 1.0, 0.0, 0.0}; });
    case Family::sphere: {
        const double a = std::sqrt(spec.curvature);
        info.r_bar = 0.5 * M_PI / a;
        if (spec.r_max > 0.0) info.r_bar = std::min(info.r_bar, spec.r_max);
        return closed_form_warping(info, [a](double r) {
            const double s = std::sin(a * r), c = std::cos(a * r);
            return WarpingJet{s / a, c, -a * s, -a * a * c};
        });
    }
    case Family::hyperbolic: {
        const double a = std::sqrt(spec.curvature);
        info.r_bar = spec.r_max > 0.0 ? spec.r_max : 5.0 / a;
        info.truncated = true;
        return closed_form_warping(info, [a](double r) {
            const double s = std::sinh(a * r), c = std::cosh(a * r);
            return WarpingJet{s / a, c, a * s, a * a * c};
        });
    }
    default:
        return omega_to_warping(make_omega_profile(spec), spec.table_size);
    }
}

OmegaConditionMargins omega_condition_margins(const OmegaProfile& profile, double s) {
    const OmegaJet w = profile.omega(s);
    const double nn = profile.n;
    const double gap = profile.rho - w.v;
    return {w.d1 / s - (nn - 2.0) * gap / (s * s),
            w.d2 / s - w.d1 / (s * s) - (nn - 2.0) * (-w.d1 / (s * s) - 2.0 * gap / (s * s * s)),
            w.d1 / (2.0 * s) + gap / (s * s)};
}

} // namespace warpcmc
