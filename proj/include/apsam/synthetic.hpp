#pragma once

// Closed-form devices whose return-difference determinant has planted zeros.
//
// With G = Z_grid Y, the device is built so that
//   det(I + G) = N(s) / P(s),  det G = kappa,
//   G11 = X + beta(s),  G22 = -beta(s),  X = N / P - 1 - kappa,
//   beta(s) = beta_gain (s + beta_zero) / (s + beta_pole),
//   G21 = coupling (s + coupling_pole) / (s + beta_pole),
// with N monic carrying the planted zeros and P the monic pole polynomial.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "apsam/model.hpp"

namespace apsam {

struct SystemSpec {
    std::vector<Complex> zeros;  ///< all zeros of D; same count as poles
    std::vector<Complex> poles;  ///< LHP
    double kappa = 1.5;          ///< det G
    Complex beta_gain{0.2, 0.1};
    double beta_zero = 200.0;    ///< rad/s
    double beta_pole = 100.0;    ///< rad/s, > 0
    Complex coupling{0.8, 0.3};  ///< high-frequency value of G21
    double coupling_pole = 300.0;  ///< rad/s, > 0; pole of G12
    GridParams grid;
};

struct SyntheticSystem {
    std::string id;
    RationalMatrix2 device;
    GridParams grid;
    std::vector<Complex> planted_zeros;
    Complex critical_zero;
    long planted_rhp = 0;
    long diagonal_rhp = 0;  ///< RHP zeros of (1 + G11)(1 + G22)
};

/// Throws InvalidArgument when the spec is inconsistent.
SyntheticSystem build_system(const SystemSpec& spec, std::string id = {});

struct CriticalPlacement {
    double sigma = -0.5;     ///< critical zero real part, 1/s
    double omega = 345.0;    ///< critical zero imaginary part, rad/s
    double clearance = 0.4;  ///< |sigma| times the local gain of D
    double damping = 0.0;    ///< pole distance from the axis; 0 picks the curvature-balancing value
    double delta1 = 60.0;    ///< first pole pair at omega +- delta1
    double delta2 = 120.0;   ///< second pole pair at omega +- delta2
    /// Extra RHP zero far from the critical one, paired with an extra LHP pole.
    std::optional<Complex> second_zero;
    double second_pole_damping = 30.0;
};

/// Zeros and poles arranged around the critical zero so D is close to linear near it.
SystemSpec place_critical_zero(const CriticalPlacement& p, const GridParams& grid);

struct SuiteOptions {
    double sigma_min = 0.2;
    double sigma_max = 5.0;
    double f_min_hz = 1.0;
    double f_max_hz = 900.0;
};

/// Systems cycling through 0, 1 and 2 planted RHP zeros.
std::vector<SyntheticSystem> make_suite(std::size_t count, std::uint64_t seed, const SuiteOptions& opts = {});

/// Systems with a small-damping critical zero and an asymmetric nearby pole,
/// for which coarse sweeps misplace the crossing.
std::vector<SyntheticSystem> make_near_critical_suite(std::size_t count, std::uint64_t seed);

/// Planted unstable system whose diagonal-only truncation is stable.
SyntheticSystem make_coupling_misjudgment(std::uint64_t seed);

/// Named demonstration systems (see demo_names()).
SyntheticSystem demo_system(const std::string& name);
std::vector<std::string> demo_names();

}  // namespace apsam
