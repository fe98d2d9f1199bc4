#include "apsam/sweep.hpp"

#include <algorithm>
#include <cmath>

namespace apsam {

FrequencyPlan FrequencyPlan::default_plan(double f1_hz) {
    return {{{-1000.0, -100.0, 5.0}, {-100.0, 100.0, 1.0}, {100.0, 1000.0, 5.0}}, f1_hz};
}

FrequencyPlan FrequencyPlan::uniform(double f_start_hz, double f_end_hz, double step_hz, double f1_hz) {
    return {{{f_start_hz, f_end_hz, step_hz}}, f1_hz};
}

void FrequencyPlan::validate() const {
    if (bands.empty()) throw Error(ErrorCode::EmptyPlan, "plan has no bands");
    if (!(f1_hz > 0.0) || !std::isfinite(f1_hz)) throw Error(ErrorCode::InvalidArgument, "f1 must be > 0");
    for (std::size_t k = 0; k < bands.size(); ++k) {
        const auto& b = bands[k];
        if (!std::isfinite(b.f_start_hz) || !std::isfinite(b.f_end_hz) || !std::isfinite(b.step_hz)) {
            throw Error(ErrorCode::InvalidArgument, "band limits must be finite");
        }
        if (!(b.step_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "band step must be > 0");
        if (!(b.f_end_hz >= b.f_start_hz)) throw Error(ErrorCode::InvalidArgument, "band end precedes start");
        if (k > 0 && b.f_start_hz < bands[k - 1].f_end_hz) {
            throw Error(ErrorCode::InvalidArgument, "bands overlap or are out of order");
        }
    }
}

bool FrequencyPlan::covers_both_signs() const {
    if (bands.empty()) return false;
    return bands.front().f_start_hz < 0.0 && bands.back().f_end_hz > 0.0;
}

std::vector<double> plan_frequencies_hz(const FrequencyPlan& plan) {
    plan.validate();
    std::vector<double> grid;
    bool any_band = false;
    for (const auto& b : plan.bands) {
        const auto count = static_cast<long>(std::floor((b.f_end_hz - b.f_start_hz) / b.step_hz + 1e-9)) + 1;
        if (count >= 2) any_band = true;
        for (long k = 0; k < count; ++k) {
            grid.push_back(b.f_start_hz + static_cast<double>(k) * b.step_hz);
        }
    }
    if (!any_band) throw Error(ErrorCode::EmptyPlan, "no band yields at least two points");
    std::sort(grid.begin(), grid.end());
    std::vector<double> out;
    out.reserve(grid.size());
    for (const double f : grid) {
        if (!out.empty() && std::abs(f - out.back()) <= 1e-9 * std::max(1.0, std::abs(f))) continue;
        out.push_back(f);
    }
    return out;
}

std::vector<AngularFrequency> plan_frequencies(const FrequencyPlan& plan) {
    std::vector<AngularFrequency> out;
    for (const double f : plan_frequencies_hz(plan)) out.push_back(AngularFrequency::from_hz(f));
    return out;
}

double condition_number(const ComplexMat2& m) {
    const double fro2 = std::norm(m.e11) + std::norm(m.e12) + std::norm(m.e21) + std::norm(m.e22);
    const double det = std::abs(m.det());
    if (det == 0.0) return std::numeric_limits<double>::infinity();
    // sigma1^2 + sigma2^2 = fro2 and sigma1 * sigma2 = |det|.
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
    const double s1 = std::sqrt(0.5 * (fro2 + disc));
    return s1 * s1 / det;
}

MeasurementSet perturb_and_measure(const RationalMatrix2& device, double f_p_hz, double f1_hz,
                                   const std::array<Perturbation, 2>& perturbations, double noise,
                                   std::mt19937_64& rng) {
    (void)f1_hz;  // the coupled component at f_p - 2 f1 lives in the second vector entry
    if (!(noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise level must be >= 0");
    const ComplexMat2 u{perturbations[0][0], perturbations[1][0], perturbations[0][1], perturbations[1][1]};
    if (!(condition_number(u) <= 1e12)) {
        throw Error(ErrorCode::DegeneratePerturbations, "perturbation vectors are (nearly) parallel");
    }
    const ComplexMat2 y = eval_rational_matrix(device, AngularFrequency::from_hz(f_p_hz));
    ComplexMat2 i = y * u;
    if (noise > 0.0) {
        std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
        for (Complex* c : {&i.e11, &i.e12, &i.e21, &i.e22}) {
            const double sd = noise * std::abs(*c);
            const double re = gauss(rng);
            const double im = gauss(rng);
            *c += sd * Complex{re, im};
        }
    }
    return {f_p_hz, u, i};
}

ComplexMat2 estimate_admittance(const MeasurementSet& m) {
    const double n = m.u.norm();
    if (n == 0.0 || std::abs(m.u.det()) < 1e-12 * n * n) {
        throw Error(ErrorCode::SingularMeasurement, "perturbation matrix is singular");
    }
    return m.i * m.u.inverse(0.0);
}

FrequencyResponseTable::FrequencyResponseTable(std::vector<ResponseSample> samples, TableMetadata meta)
    : samples_(std::move(samples)), meta_(std::move(meta)) {
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        if (!std::isfinite(samples_[k].f_hz) || !samples_[k].y.is_finite()) {
            throw Error(ErrorCode::InvalidArgument, "response table contains non-finite values");
        }
        if (k > 0 && !(samples_[k].f_hz > samples_[k - 1].f_hz)) {
            throw Error(ErrorCode::InvalidArgument, "response table frequencies must strictly increase");
        }
    }
}

FrequencyResponseTable FrequencyResponseTable::diagonal_only() const {
    std::vector<ResponseSample> out = samples_;
    for (auto& s : out) {
        s.y.e12 = 0.0;
        s.y.e21 = 0.0;
    }
    return {std::move(out), meta_};
}

FrequencyResponseTable sweep(const RationalMatrix2& device, const FrequencyPlan& plan, const SweepOptions& opts) {
    if (!check_self_stable(device).stable) {
        throw Error(ErrorCode::InvalidArgument, "device model is not self-stable");
    }
    const std::vector<double> grid = plan_frequencies_hz(plan);
    const double amplitude = opts.disturbance_fraction * opts.operating_voltage;
    const std::array<Perturbation, 2> perts{Perturbation{amplitude, 0.0}, Perturbation{0.0, amplitude}};

    std::vector<ResponseSample> samples(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        // Independent stream per frequency index so the sweep can be split freely.
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
        std::mt19937_64 rng(seq);
        try {
            const MeasurementSet m = perturb_and_measure(device, grid[k], plan.f1_hz, perts, opts.noise, rng);
            samples[k] = {grid[k], estimate_admittance(m)};
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " (f=" + std::to_string(grid[k]) + " Hz)");
        }
    }
    return {std::move(samples), TableMetadata{opts.noise, opts.seed, opts.device_id, plan}};
}

FrequencyResponseTable sample_device(const RationalMatrix2& device, const std::vector<double>& f_hz,
                                     std::string device_id) {
    std::vector<ResponseSample> samples;
    samples.reserve(f_hz.size());
    for (const double f : f_hz) {
        samples.push_back({f, eval_rational_matrix(device, AngularFrequency::from_hz(f))});
    }
    TableMetadata meta;
    meta.device_id = std::move(device_id);
    return {std::move(samples), std::move(meta)};
}

}  // namespace apsam
