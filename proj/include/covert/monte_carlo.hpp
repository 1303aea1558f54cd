#pragma once

#include "covert/link_model.hpp"
#include "covert/rng.hpp"

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace covert::mc {

/// Trial budget below the minimum for a reportable estimate.
class BudgetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::int64_t kMinTrials = 1000;

struct McConfig {
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    double prior_h1 = 0.5;
    /// Worker threads; 0 picks the hardware concurrency. Results do not
    /// depend on this value.
    unsigned threads = 0;

    void validate() const;
};

struct McEstimate {
    double value = 0.0;
    double std_err = 0.0;
    std::int64_t trials = 0;

    /// Binomial estimate from an exact success count.
    static McEstimate proportion(std::int64_t hits, std::int64_t trials);
};

enum class Hypothesis { H0, H1 };

struct WillieObservation {
    std::vector<std::complex<double>> samples;
    Hypothesis hypothesis = Hypothesis::H0;
};

/// Received energy split by segment: sum |y|^2 over pilots and over data.
struct SegmentEnergy {
    double pilot = 0.0;
    double data = 0.0;

    double total() const noexcept { return pilot + data; }
};

/// Willie knows both segment powers and the boundary index.
struct Lrt {};

/// Mean received power (1/n) sum |y|^2 compared with a threshold.
struct Radiometer {
    double threshold;
};

using Detector = std::variant<Lrt, Radiometer>;

struct WillieEstimate {
    McEstimate alpha;
    McEstimate beta;
    McEstimate xi;  ///< alpha + beta; std_err combines both
};

/// Every symbol of the slot as Willie receives it. Pilots and data are
/// Gaussian from his point of view.
WillieObservation draw_observation(const SystemConfig& cfg, const PowerAllocation& alloc,
                                   Hypothesis h, rng::Xoshiro256& gen);

SegmentEnergy segment_energy(const WillieObservation& obs, int n_p);

/// Draws the segment energies directly: sum of k exponentials with mean v
/// is v * Gamma(k, 1). Same law as segment_energy(draw_observation(...)).
SegmentEnergy draw_segment_energy(const SystemConfig& cfg, const PowerAllocation& alloc,
                                  Hypothesis h, rng::Xoshiro256& gen);

/// true means "decide H1".
bool decide(const Detector& detector, const SystemConfig& cfg, const PowerAllocation& alloc,
            const SegmentEnergy& energy, double prior_h1 = 0.5);

WillieEstimate simulate_willie(const SystemConfig& cfg, const PowerAllocation& alloc,
                               const McConfig& mc, const Detector& detector);

/// Runs the LRT and a radiometer on the same draws.
struct DetectorComparison {
    WillieEstimate lrt;
    WillieEstimate radiometer;
    std::int64_t decisions = 0;     ///< 2 * trials (one H0 and one H1 draw each)
    std::int64_t disagreements = 0;
};

DetectorComparison compare_detectors(const SystemConfig& cfg, const PowerAllocation& alloc,
                                     const McConfig& mc, double threshold);

/// Bob-side channel estimation statistics.
struct BobReport {
    McEstimate sinr;         ///< ratio of means, delta-method standard error
    McEstimate var_h_hat;    ///< E|h_hat|^2
    McEstimate var_h_tilde;  ///< E|h - h_hat|^2
    McEstimate corr_re;      ///< Re E[h_hat conj(h - h_hat)]
    McEstimate corr_im;      ///< Im E[h_hat conj(h - h_hat)]
};

/// Known unit pilots, LMMSE estimate of h from the matched-filter output.
BobReport simulate_bob(const SystemConfig& cfg, const PowerAllocation& alloc, const McConfig& mc);

McEstimate simulate_bob_sinr(const SystemConfig& cfg, const PowerAllocation& alloc,
                             const McConfig& mc);

}  // namespace covert::mc
