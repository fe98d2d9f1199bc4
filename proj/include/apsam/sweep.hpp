#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "apsam/model.hpp"

namespace apsam {

struct FrequencyBand {
    double f_start_hz = 0.0;
    double f_end_hz = 0.0;
    double step_hz = 1.0;
};

/// Frequency-sweep plan: ordered, non-overlapping bands (shared endpoints allowed).
struct FrequencyPlan {
    std::vector<FrequencyBand> bands;
    double f1_hz = 50.0;

    /// +-1000 Hz, 1 Hz steps inside [-100, 100] Hz and 5 Hz steps elsewhere.
    static FrequencyPlan default_plan(double f1_hz = 50.0);
    static FrequencyPlan uniform(double f_start_hz, double f_end_hz, double step_hz, double f1_hz = 50.0);

    void validate() const;
    /// True when the plan reaches both negative and positive frequencies.
    [[nodiscard]] bool covers_both_signs() const;
};

/// Sorted, de-duplicated sweep grid in Hz.
std::vector<double> plan_frequencies_hz(const FrequencyPlan& plan);
std::vector<AngularFrequency> plan_frequencies(const FrequencyPlan& plan);

/// Perturbation vectors are the columns of u; responses the columns of i.
struct MeasurementSet {
    double f_p_hz = 0.0;
    ComplexMat2 u;
    ComplexMat2 i;
};

using Perturbation = std::array<Complex, 2>;

/// 2-norm condition number of a 2x2 matrix (infinity when singular).
double condition_number(const ComplexMat2& m);

/// One perturb-and-measure round at f_p: i = Y(j w_p) u plus optional relative noise.
MeasurementSet perturb_and_measure(const RationalMatrix2& device, double f_p_hz, double f1_hz,
                                   const std::array<Perturbation, 2>& perturbations, double noise,
                                   std::mt19937_64& rng);

/// Y = i * inverse(u).
ComplexMat2 estimate_admittance(const MeasurementSet& m);

struct ResponseSample {
    double f_hz = 0.0;
    ComplexMat2 y;

    [[nodiscard]] AngularFrequency omega() const { return AngularFrequency::from_hz(f_hz); }
};

struct TableMetadata {
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string device_id;
    std::optional<FrequencyPlan> plan;
};

/// Discrete device model produced by sweeping: strictly increasing frequencies.
class FrequencyResponseTable {
public:
    FrequencyResponseTable() = default;
    FrequencyResponseTable(std::vector<ResponseSample> samples, TableMetadata meta = {});

    [[nodiscard]] const std::vector<ResponseSample>& samples() const noexcept { return samples_; }
    [[nodiscard]] const TableMetadata& metadata() const noexcept { return meta_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }
    [[nodiscard]] const ResponseSample& operator[](std::size_t k) const { return samples_[k]; }

    /// Same table with every response replaced by its diagonal part.
    [[nodiscard]] FrequencyResponseTable diagonal_only() const;

private:
    std::vector<ResponseSample> samples_;
    TableMetadata meta_;
};

struct SweepOptions {
    double noise = 0.0;          ///< relative Gaussian noise level
    std::uint64_t seed = 0;
    double operating_voltage = 1.0;
    double disturbance_fraction = 0.05;
    std::string device_id;
};

/// Simulated frequency sweep of a closed-form device along the plan.
FrequencyResponseTable sweep(const RationalMatrix2& device, const FrequencyPlan& plan,
                             const SweepOptions& opts = {});

/// Evaluates the device at arbitrary frequencies with no measurement model.
FrequencyResponseTable sample_device(const RationalMatrix2& device, const std::vector<double>& f_hz,
                                     std::string device_id = {});

// Serialization ------------------------------------------------------------

inline constexpr const char* kTableCsvHeader =
    "f_hz, re_y11, im_y11, re_y12, im_y12, re_y21, im_y21, re_y22, im_y22";

void write_table_csv(std::ostream& os, const FrequencyResponseTable& table);
FrequencyResponseTable read_table_csv(std::istream& is);

std::string table_to_json(const FrequencyResponseTable& table);
FrequencyResponseTable table_from_json(const std::string& text);

}  // namespace apsam
