#include "apsam/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace apsam {

namespace {

Polynomial monic(const std::vector<Complex>& roots) { return Polynomial::from_roots(roots); }

long rhp_count(const Polynomial& p) {
    if (p.degree() < 1) return 0;
    long n = 0;
    for (const Complex z : polynomial_roots(p)) n += z.real() > 1e-9 ? 1 : 0;
    return n;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

GridParams random_grid(std::mt19937_64& rng) {
    GridParams g;
    g.rs = uniform(rng, 0.02, 0.2);
    g.l_total = uniform(rng, 0.5e-3, 3e-3);
    return g;
}

constexpr double kFarRatio = 0.5;

}  // namespace

SyntheticSystem build_system(const SystemSpec& spec, std::string id) {
    spec.grid.validate();
    if (spec.grid.cs) throw Error(ErrorCode::InvalidArgument, "planted systems use a grid without series capacitor");
    if (!(spec.grid.rs > 0.0) || !(spec.grid.l_total > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "planted systems need Rs > 0 and L > 0");
    }
    if (spec.poles.empty() || spec.zeros.size() != spec.poles.size()) {
        throw Error(ErrorCode::InvalidArgument, "zero count must equal the pole count");
    }
    for (const Complex p : spec.poles) {
        if (!(p.real() < 0.0)) throw Error(ErrorCode::InvalidArgument, "planted poles must lie in the LHP");
    }
    if (!(spec.kappa > 0.0) || std::abs(spec.coupling) < 1e-9 || !(spec.beta_pole > 0.0) ||
        !(spec.coupling_pole > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "need kappa > 0, nonzero coupling and positive beta/coupling poles");
    }

    const Polynomial n = monic(spec.zeros);
    const Polynomial p = monic(spec.poles);
    const Polynomial m = n - (1.0 + spec.kappa) * p;
    const Polynomial bn = spec.beta_gain * Polynomial{spec.beta_zero, 1.0};
    const Polynomial bd{spec.beta_pole, 1.0};
    // G12 G21 = G11 G22 - kappa = -(bn m bd + (bn^2 + kappa bd^2) p) / (p bd^2).
    const Polynomial cross = bn * m * bd + (bn * bn + spec.kappa * (bd * bd)) * p;

    const GridPolynomials gp = grid_impedance_polynomials(spec.grid);
    const Polynomial& z1 = gp.num11;
    const Polynomial& z2 = gp.num22;

    SyntheticSystem s;
    s.id = std::move(id);
    s.grid = spec.grid;
    s.device.e11 = RationalFunction(m * bd + bn * p, z1 * p * bd);
    s.device.e22 = RationalFunction(-1.0 * bn, z2 * bd);
    const Polynomial q{spec.coupling_pole, 1.0};
    s.device.e21 = RationalFunction(spec.coupling * q, z2 * bd);
    s.device.e12 = RationalFunction((-1.0 / spec.coupling) * cross, z1 * p * bd * q);
    s.planted_zeros = spec.zeros;
    s.critical_zero = *std::min_element(spec.zeros.begin(), spec.zeros.end(), [](Complex x, Complex y) {
        return std::abs(x.real()) < std::abs(y.real());
    });
    for (const Complex z : spec.zeros) s.planted_rhp += z.real() > 0.0 ? 1 : 0;
    s.diagonal_rhp = rhp_count(n * bd + (bn - spec.kappa * bd) * p) + rhp_count(bd - bn);
    return s;
}

SystemSpec place_critical_zero(const CriticalPlacement& p, const GridParams& grid) {
    if (!(p.delta1 > 0.0) || !(p.delta2 > 0.0) || p.sigma == 0.0 || !(p.clearance > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "invalid critical-zero placement");
    }
    const Complex axis{0.0, p.omega};
    const double gain = p.clearance / std::abs(p.sigma);
    const double inv_sq = 1.0 / (p.delta1 * p.delta1) + 1.0 / (p.delta2 * p.delta2);

    double damping = p.damping > 0.0 ? p.damping : 10.0;
    SystemSpec spec;
    double f = 0.0;
    for (int pass = 0; pass < (p.damping > 0.0 ? 1 : 4); ++pass) {
        spec = SystemSpec{};
        spec.grid = grid;
        spec.poles = {{-damping, p.omega + p.delta1}, {-damping, p.omega - p.delta1},
                      {-damping, p.omega + p.delta2}, {-damping, p.omega - p.delta2}};
        spec.zeros = {{p.sigma, p.omega}};
        if (p.second_zero) {
            spec.zeros.push_back(*p.second_zero);
            spec.poles.push_back({-p.second_pole_damping, p.second_zero->imag()});
        }
        // The remaining three zeros sit at -F + j(omega + {0, +-F/2}); F fixes the local gain.
        double other = 1.0;
        for (std::size_t k = 1; k < spec.zeros.size(); ++k) other *= std::abs(axis - spec.zeros[k]);
        double poles = 1.0;
        for (const Complex q : spec.poles) poles *= std::abs(axis - q);
        f = std::cbrt(gain * poles / (other * (1.0 + kFarRatio * kFarRatio)));
        // Damping that balances the real part of D''/D' between the far zeros and the pole pairs.
        const double far_pull = (1.0 + 2.0 / (1.0 + kFarRatio * kFarRatio)) / f;
        damping = far_pull / (2.0 * inv_sq);
    }
    spec.zeros.push_back({-f, p.omega});
    spec.zeros.push_back({-f, p.omega + kFarRatio * f});
    spec.zeros.push_back({-f, p.omega - kFarRatio * f});
    return spec;
}

std::vector<SyntheticSystem> make_suite(std::size_t count, std::uint64_t seed, const SuiteOptions& opts) {
    std::mt19937_64 rng(seed);
    std::vector<SyntheticSystem> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int cls = static_cast<int>(i % 3);
        for (int attempt = 0;; ++attempt) {
            const GridParams grid = random_grid(rng);
            CriticalPlacement p;
            const double mag = std::exp(uniform(rng, std::log(opts.sigma_min), std::log(opts.sigma_max)));
            p.sigma = cls == 0 ? -mag : mag;
            p.omega = kTwoPi * uniform(rng, opts.f_min_hz, opts.f_max_hz);
            p.clearance = uniform(rng, 0.3, 0.6);
            p.damping = 0.0;
            p.delta1 = uniform(rng, 50.0, 80.0);
            p.delta2 = uniform(rng, 100.0, 150.0);
            if (cls == 2) {
                p.second_pole_damping = uniform(rng, 20.0, 40.0);
                const double w2 = p.omega - kTwoPi * uniform(rng, 400.0, 800.0);
                p.second_zero = Complex{p.second_pole_damping * uniform(rng, 1.5, 3.0), w2};
            }
            SystemSpec spec = place_critical_zero(p, grid);
            spec.kappa = uniform(rng, 0.5, 2.0);
            spec.beta_gain = std::polar(uniform(rng, 0.0, 0.5), uniform(rng, -std::numbers::pi, std::numbers::pi));
            spec.beta_zero = uniform(rng, 50.0, 500.0);
            spec.beta_pole = uniform(rng, 50.0, 500.0);
            spec.coupling_pole = uniform(rng, 50.0, 500.0);
            spec.coupling = std::polar(uniform(rng, 0.5, 1.5), uniform(rng, -std::numbers::pi, std::numbers::pi));
            try {
                out.push_back(build_system(spec, "suite-" + std::to_string(i)));
                break;
            } catch (const Error&) {
                if (attempt > 100) throw;
            }
        }
    }
    return out;
}

std::vector<SyntheticSystem> make_near_critical_suite(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SyntheticSystem> out;
    for (std::size_t i = 0; i < count; ++i) {
        for (int attempt = 0;; ++attempt) {
            const GridParams grid = random_grid(rng);
            const double sigma = (i % 2 == 0 ? 1.0 : -1.0) * uniform(rng, 0.1, 0.3);
            const double omega = kTwoPi * uniform(rng, 20.0, 300.0);
            const double bend = uniform(rng, 40.0, 80.0);
            const double damping = uniform(rng, 10.0, 25.0);
            const double delta = uniform(rng, 350.0, 500.0);
            const double clearance = uniform(rng, 0.3, 0.6);
            const Complex axis{0.0, omega};

            SystemSpec spec;
            spec.grid = grid;
            spec.poles = {{-bend, omega}, {-damping, omega + delta}, {-damping, omega - delta}};
            double poles = 1.0;
            for (const Complex q : spec.poles) poles *= std::abs(axis - q);
            const double gain = clearance / std::abs(sigma);
            const double f = std::sqrt(gain * poles / (1.0 + kFarRatio * kFarRatio));
            spec.zeros = {{sigma, omega}, {-f, omega + kFarRatio * f}, {-f, omega - kFarRatio * f}};
            spec.kappa = uniform(rng, 0.5, 2.0);
            spec.beta_gain = std::polar(uniform(rng, 0.0, 0.5), uniform(rng, -std::numbers::pi, std::numbers::pi));
            spec.beta_zero = uniform(rng, 50.0, 500.0);
            spec.beta_pole = uniform(rng, 50.0, 500.0);
            spec.coupling_pole = uniform(rng, 50.0, 500.0);
            spec.coupling = std::polar(uniform(rng, 0.5, 1.5), uniform(rng, -std::numbers::pi, std::numbers::pi));
            try {
                out.push_back(build_system(spec, "near-critical-" + std::to_string(i)));
                break;
            } catch (const Error&) {
                if (attempt > 100) throw;
            }
        }
    }
    return out;
}

SyntheticSystem make_coupling_misjudgment(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        GridParams grid;
        grid.rs = uniform(rng, 0.02, 0.2);
        grid.l_total = uniform(rng, 0.5e-3, 3e-3);
        CriticalPlacement p;
        p.sigma = uniform(rng, 0.5, 2.0);
        p.omega = kTwoPi * uniform(rng, 20.0, 200.0);
        p.clearance = uniform(rng, 0.3, 0.6);
        p.delta1 = uniform(rng, 50.0, 80.0);
        p.delta2 = uniform(rng, 100.0, 150.0);
        SystemSpec spec = place_critical_zero(p, grid);
        spec.kappa = uniform(rng, 0.5, 2.0);
        // A constant beta beyond the reach of D moves the diagonal-only determinant off the origin.
        double reach = 0.0;
        const Polynomial n = monic(spec.zeros);
        const Polynomial q = monic(spec.poles);
        for (double f = -1000.0; f <= 1000.0; f += 0.5) {
            const Complex s{0.0, kTwoPi * f};
            reach = std::max(reach, std::abs(n(s) / q(s)));
        }
        spec.beta_gain = -(1.5 * reach + spec.kappa);
        spec.beta_zero = spec.beta_pole = uniform(rng, 50.0, 500.0);
        spec.coupling_pole = uniform(rng, 50.0, 500.0);
        spec.coupling = std::polar(uniform(rng, 0.5, 1.5), uniform(rng, -std::numbers::pi, std::numbers::pi));
        try {
            SyntheticSystem sys = build_system(spec, "coupling-misjudgment");
            if (sys.planted_rhp > 0 && sys.diagonal_rhp == 0) return sys;
        } catch (const Error&) {
        }
    }
    throw Error(ErrorCode::InvalidArgument, "no misjudgment fixture found for this seed");
}

namespace {

GridParams demo_grid(double rs, double l) {
    GridParams g;
    g.rs = rs;
    g.l_total = l;
    return g;
}

SyntheticSystem placed(const std::string& name, double sigma, double omega, const GridParams& grid, double kappa,
                       Complex beta_gain, Complex coupling) {
    CriticalPlacement p;
    p.sigma = sigma;
    p.omega = omega;
    p.clearance = 0.45;
    SystemSpec spec = place_critical_zero(p, grid);
    spec.kappa = kappa;
    spec.beta_gain = beta_gain;
    spec.beta_zero = 150.0;
    spec.beta_pole = 250.0;
    spec.coupling_pole = 200.0;
    spec.coupling = coupling;
    return build_system(spec, name);
}

struct WindCase {
    const char* name;
    double sigma;
    double f_hz;
};

constexpr WindCase kWind[] = {
    {"wind-12ms", -1.35, 21.0}, {"wind-10ms", -0.85, 20.2}, {"wind-8ms", -0.32, 19.4},
    {"wind-6ms", 0.41, 18.7},   {"wind-4ms", 1.12, 18.1},
};

}  // namespace

std::vector<std::string> demo_names() {
    std::vector<std::string> names{"sim-stable", "sim-unstable", "exp-1000uF", "exp-800uF", "exp-600uF",
                                   "near-critical", "coupling-misjudgment"};
    for (const WindCase& w : kWind) names.emplace_back(w.name);
    return names;
}

SyntheticSystem demo_system(const std::string& name) {
    const GridParams sim_grid = demo_grid(0.05, 1.5e-3);
    const GridParams exp_grid = demo_grid(0.08, 2.2e-3);
    if (name == "sim-stable") return placed(name, -0.167, 348.818, sim_grid, 1.2, {0.25, -0.1}, {0.9, 0.4});
    if (name == "sim-unstable") return placed(name, 0.261, 345.987, sim_grid, 1.2, {0.25, -0.1}, {0.9, 0.4});
    if (name == "exp-1000uF") return placed(name, -0.262, kTwoPi * 5.0, exp_grid, 0.9, {-0.2, 0.2}, {1.1, -0.3});
    if (name == "exp-800uF") return placed(name, 1.456, 28.475, exp_grid, 0.9, {-0.2, 0.2}, {1.1, -0.3});
    if (name == "exp-600uF") return placed(name, 2.747, 34.579, exp_grid, 0.9, {-0.2, 0.2}, {1.1, -0.3});
    if (name == "near-critical") {
        SyntheticSystem s = make_near_critical_suite(5, 7).back();
        s.id = name;
        return s;
    }
    if (name == "coupling-misjudgment") return make_coupling_misjudgment(11);
    for (const WindCase& w : kWind) {
        if (name == w.name) return placed(name, w.sigma, kTwoPi * w.f_hz, demo_grid(0.06, 1.8e-3), 1.0, {0.3, 0.1}, {0.8, 0.5});
    }
    throw Error(ErrorCode::InvalidArgument, "unknown demo system: " + name);
}

}  // namespace apsam
