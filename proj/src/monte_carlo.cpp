#include "covert/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace covert::mc {

namespace {

// Stream tags keep Willie and Bob draws independent for the same seed.
constexpr std::uint64_t kWillieStream = 0x57494C4C4945ull;
constexpr std::uint64_t kBobStream = 0x424F42ull;

// Fixed chunk layout; partial results are reduced in chunk order so the
// outcome is independent of the thread count.
constexpr std::int64_t kChunk = 4096;

template <typename Partial, typename Fn>
std::vector<Partial> run_chunks(std::int64_t trials, unsigned threads, Fn&& fn) {
    const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<Partial> parts(static_cast<std::size_t>(chunks));
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, chunks));

    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (std::int64_t c = next++; c < chunks; c = next++) {
            const std::int64_t begin = c * kChunk;
            const std::int64_t end = std::min(trials, begin + kChunk);
            parts[static_cast<std::size_t>(c)] = fn(begin, end);
        }
    };
    if (workers <= 1) {
        work();
        return parts;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned i = 0; i + 1 < workers; ++i) pool.emplace_back(work);
    work();
    return parts;
}

double gamma_variate(double shape, rng::Xoshiro256& gen) {
    if (shape <= 0.0) return 0.0;
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(gen);
}

struct SegmentVariances {
    double pilot;
    double data;
};

SegmentVariances variances(const SystemConfig& cfg, const PowerAllocation& alloc, Hypothesis h) {
    if (h == Hypothesis::H0) return {cfg.sigma_w2, cfg.sigma_w2};
    return {alloc.rho_p() + cfg.sigma_w2, alloc.rho_d() + cfg.sigma_w2};
}

McEstimate sample_mean(double sum, double sum_sq, std::int64_t n) {
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean) * n / (n - 1);
    return {mean, std::sqrt(var / n), n};
}

WillieEstimate combine(std::int64_t false_alarms, std::int64_t misses, std::int64_t trials) {
    WillieEstimate e;
    e.alpha = McEstimate::proportion(false_alarms, trials);
    e.beta = McEstimate::proportion(misses, trials);
    e.xi = {e.alpha.value + e.beta.value, std::hypot(e.alpha.std_err, e.beta.std_err), trials};
    return e;
}

}  // namespace

void McConfig::validate() const {
    if (trials < kMinTrials) {
        throw BudgetError("trials: " + std::to_string(trials) + " is below the minimum of " +
                          std::to_string(kMinTrials));
    }
    if (!(prior_h1 > 0.0 && prior_h1 < 1.0)) {
        throw std::invalid_argument("prior_h1: must lie in (0, 1)");
    }
}

McEstimate McEstimate::proportion(std::int64_t hits, std::int64_t trials) {
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

WillieObservation draw_observation(const SystemConfig& cfg, const PowerAllocation& alloc,
                                   Hypothesis h, rng::Xoshiro256& gen) {
    const auto v = variances(cfg, alloc, h);
    std::normal_distribution<double> normal(0.0, 1.0);
    WillieObservation obs;
    obs.hypothesis = h;
    obs.samples.reserve(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) {
        const double component_sd = std::sqrt((i < alloc.n_p() ? v.pilot : v.data) / 2.0);
        const double re = normal(gen);
        const double im = normal(gen);
        obs.samples.emplace_back(component_sd * re, component_sd * im);
    }
    return obs;
}

SegmentEnergy segment_energy(const WillieObservation& obs, int n_p) {
    SegmentEnergy e;
    for (std::size_t i = 0; i < obs.samples.size(); ++i) {
        (static_cast<int>(i) < n_p ? e.pilot : e.data) += std::norm(obs.samples[i]);
    }
    return e;
}

SegmentEnergy draw_segment_energy(const SystemConfig& cfg, const PowerAllocation& alloc,
                                  Hypothesis h, rng::Xoshiro256& gen) {
    const auto v = variances(cfg, alloc, h);
    const double g_pilot = gamma_variate(alloc.n_p(), gen);
    const double g_data = gamma_variate(alloc.n_d(), gen);
    return {v.pilot * g_pilot, v.data * g_data};
}

bool decide(const Detector& detector, const SystemConfig& cfg, const PowerAllocation& alloc,
            const SegmentEnergy& energy, double prior_h1) {
    if (const auto* r = std::get_if<Radiometer>(&detector)) {
        return energy.total() / cfg.n > r->threshold;
    }
    const double s2 = cfg.sigma_w2;
    const double wp = 1.0 / s2 - 1.0 / (alloc.rho_p() + s2);
    const double wd = 1.0 / s2 - 1.0 / (alloc.rho_d() + s2);
    const double statistic = energy.pilot * wp + energy.data * wd;
    const double threshold = alloc.n_p() * std::log1p(alloc.rho_p() / s2) +
                             alloc.n_d() * std::log1p(alloc.rho_d() / s2) +
                             std::log((1.0 - prior_h1) / prior_h1);
    return statistic > threshold;
}

WillieEstimate simulate_willie(const SystemConfig& cfg, const PowerAllocation& alloc,
                               const McConfig& mc, const Detector& detector) {
    mc.validate();
    struct Counts {
        std::int64_t false_alarms = 0;
        std::int64_t misses = 0;
    };
    const auto parts = run_chunks<Counts>(mc.trials, mc.threads, [&](std::int64_t b, std::int64_t e) {
        Counts c;
        for (std::int64_t t = b; t < e; ++t) {
            rng::Xoshiro256 gen(mc.seed, kWillieStream, static_cast<std::uint64_t>(t));
            const auto e0 = draw_segment_energy(cfg, alloc, Hypothesis::H0, gen);
            const auto e1 = draw_segment_energy(cfg, alloc, Hypothesis::H1, gen);
            c.false_alarms += decide(detector, cfg, alloc, e0, mc.prior_h1) ? 1 : 0;
            c.misses += decide(detector, cfg, alloc, e1, mc.prior_h1) ? 0 : 1;
        }
        return c;
    });
    Counts total;
    for (const auto& p : parts) {
        total.false_alarms += p.false_alarms;
        total.misses += p.misses;
    }
    return combine(total.false_alarms, total.misses, mc.trials);
}

DetectorComparison compare_detectors(const SystemConfig& cfg, const PowerAllocation& alloc,
                                     const McConfig& mc, double threshold) {
    mc.validate();
    struct Counts {
        std::int64_t lrt_fa = 0, lrt_md = 0, rad_fa = 0, rad_md = 0, disagree = 0;
    };
    const Detector lrt = Lrt{};
    const Detector rad = Radiometer{threshold};
    const auto parts = run_chunks<Counts>(mc.trials, mc.threads, [&](std::int64_t b, std::int64_t e) {
        Counts c;
        for (std::int64_t t = b; t < e; ++t) {
            rng::Xoshiro256 gen(mc.seed, kWillieStream, static_cast<std::uint64_t>(t));
            const auto e0 = draw_segment_energy(cfg, alloc, Hypothesis::H0, gen);
            const auto e1 = draw_segment_energy(cfg, alloc, Hypothesis::H1, gen);
            const bool l0 = decide(lrt, cfg, alloc, e0, mc.prior_h1);
            const bool l1 = decide(lrt, cfg, alloc, e1, mc.prior_h1);
            const bool r0 = decide(rad, cfg, alloc, e0);
            const bool r1 = decide(rad, cfg, alloc, e1);
            c.lrt_fa += l0;
            c.lrt_md += !l1;
            c.rad_fa += r0;
            c.rad_md += !r1;
            c.disagree += (l0 != r0) + (l1 != r1);
        }
        return c;
    });
    Counts total;
    for (const auto& p : parts) {
        total.lrt_fa += p.lrt_fa;
        total.lrt_md += p.lrt_md;
        total.rad_fa += p.rad_fa;
        total.rad_md += p.rad_md;
        total.disagree += p.disagree;
    }
    DetectorComparison out;
    out.lrt = combine(total.lrt_fa, total.lrt_md, mc.trials);
    out.radiometer = combine(total.rad_fa, total.rad_md, mc.trials);
    out.decisions = 2 * mc.trials;
    out.disagreements = total.disagree;
    return out;
}

BobReport simulate_bob(const SystemConfig& cfg, const PowerAllocation& alloc, const McConfig& mc) {
    mc.validate();
    const double lambda = cfg.lambda_ab;
    const double s2 = cfg.sigma_b2;
    const double rho_d = alloc.rho_d();
    const double sqrt_rho_p = std::sqrt(alloc.rho_p());
    const double n_p = alloc.n_p();
    // Matched-filter output z = sum_i conj(x_i) y_i = n_p sqrt(rho_p) h + w,
    // w ~ CN(0, n_p sigma_b2) for unit pilots x_i = 1.
    const double gain = lambda * sqrt_rho_p / (lambda * n_p * alloc.rho_p() + s2);
    const double h_sd = std::sqrt(lambda / 2.0);
    const double w_sd = std::sqrt(n_p * s2 / 2.0);

    struct Sums {
        double hat = 0, hat2 = 0, tilde = 0, tilde2 = 0, hat_tilde = 0;
        double cre = 0, cre2 = 0, cim = 0, cim2 = 0;
    };
    const auto parts = run_chunks<Sums>(mc.trials, mc.threads, [&](std::int64_t b, std::int64_t e) {
        Sums s;
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::int64_t t = b; t < e; ++t) {
            rng::Xoshiro256 gen(mc.seed, kBobStream, static_cast<std::uint64_t>(t));
            normal.reset();
            const std::complex<double> h(h_sd * normal(gen), h_sd * normal(gen));
            const std::complex<double> w(w_sd * normal(gen), w_sd * normal(gen));
            const std::complex<double> z = n_p * sqrt_rho_p * h + w;
            const std::complex<double> h_hat = gain * z;
            const std::complex<double> h_tilde = h - h_hat;
            const double a = std::norm(h_hat);
            const double c = std::norm(h_tilde);
            const std::complex<double> cross = h_hat * std::conj(h_tilde);
            s.hat += a;
            s.hat2 += a * a;
            s.tilde += c;
            s.tilde2 += c * c;
            s.hat_tilde += a * c;
            s.cre += cross.real();
            s.cre2 += cross.real() * cross.real();
            s.cim += cross.imag();
            s.cim2 += cross.imag() * cross.imag();
        }
        return s;
    });
    Sums s;
    for (const auto& p : parts) {
        s.hat += p.hat;
        s.hat2 += p.hat2;
        s.tilde += p.tilde;
        s.tilde2 += p.tilde2;
        s.hat_tilde += p.hat_tilde;
        s.cre += p.cre;
        s.cre2 += p.cre2;
        s.cim += p.cim;
        s.cim2 += p.cim2;
    }

    const std::int64_t n = mc.trials;
    BobReport r;
    r.var_h_hat = sample_mean(s.hat, s.hat2, n);
    r.var_h_tilde = sample_mean(s.tilde, s.tilde2, n);
    r.corr_re = sample_mean(s.cre, s.cre2, n);
    r.corr_im = sample_mean(s.cim, s.cim2, n);

    // SINR = rho_d A / (rho_d C + sigma_b2) with A, C the sample means above.
    const double mean_a = r.var_h_hat.value;
    const double mean_c = r.var_h_tilde.value;
    const double denom = rho_d * mean_c + s2;
    const double value = denom > 0.0 ? rho_d * mean_a / denom : 0.0;
    const double var_a = r.var_h_hat.std_err * r.var_h_hat.std_err;
    const double var_c = r.var_h_tilde.std_err * r.var_h_tilde.std_err;
    const double cov_ac = (s.hat_tilde / n - mean_a * mean_c) / (n - 1);
    const double da = rho_d / denom;
    const double dc = -rho_d * rho_d * mean_a / (denom * denom);
    const double var_sinr = std::max(0.0, da * da * var_a + dc * dc * var_c + 2.0 * da * dc * cov_ac);
    r.sinr = {value, std::sqrt(var_sinr), n};
    return r;
}

McEstimate simulate_bob_sinr(const SystemConfig& cfg, const PowerAllocation& alloc,
                             const McConfig& mc) {
    return simulate_bob(cfg, alloc, mc).sinr;
}

}  // namespace covert::mc
