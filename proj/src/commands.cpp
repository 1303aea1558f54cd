#include "covert/commands.hpp"

#include "covert/detection.hpp"
#include "covert/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace covert::cli {

namespace {

std::string power_column(const RunConfig& rc, const std::string& name) {
    return rc.units == Units::Dbm ? name + "_dbm" : name;
}

double power_value(const RunConfig& rc, double linear) {
    return rc.units == Units::Dbm ? linear_to_dbm(linear) : linear;
}

SystemConfig with(const SystemConfig& base, int n, double epsilon) {
    SystemConfig cfg = base;
    cfg.n = n;
    cfg.epsilon = epsilon;
    cfg.validate();
    return cfg;
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (const auto& h : header) cell(h);
    end_row();
}

void CsvWriter::sep() {
    if (filled_ == columns_) throw std::logic_error("CsvWriter: too many cells in row");
    if (filled_++ > 0) out_ += ',';
}

CsvWriter& CsvWriter::cell(double v) {
    sep();
    out_ += format_real(v);
    return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
    sep();
    out_ += std::to_string(v);
    return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
    sep();
    out_ += v;
    return *this;
}

void CsvWriter::end_row() {
    if (filled_ != columns_) throw std::logic_error("CsvWriter: incomplete row");
    out_ += '\n';
    filled_ = 0;
}

CommandOutput cmd_design(const RunConfig& rc) {
    const SystemConfig& cfg = rc.system;
    const DesignResult d = design(cfg);
    const std::string hash = rc.config_hash();

    CsvWriter csv({"epsilon", "n", power_column(rc, "rho_star"), "np_continuous", "np_floor",
                   "np_ceil", "np_star", "gamma_eff_star", "xi_star_achieved", "config_hash"});
    csv.cell(cfg.epsilon).cell(cfg.n).cell(power_value(rc, d.rho_star)).cell(d.np_continuous);
    csv.cell(d.np_floor).cell(d.np_ceil).cell(d.np_star).cell(d.gamma_eff_star);
    csv.cell(d.xi_star_achieved).cell(hash).end_row();

    std::ostringstream t;
    char line[160];
    auto row = [&](const char* label, const std::string& value) {
        std::snprintf(line, sizeof line, "  %-22s %s\n", label, value.c_str());
        t << line;
    };
    t << "covert pilot design (config " << hash << ")\n";
    row("n", std::to_string(cfg.n));
    row("epsilon", format_real(cfg.epsilon));
    row(rc.units == Units::Dbm ? "rho* [dBm]" : "rho*", format_real(power_value(rc, d.rho_star)));
    row("n_p (continuous)", format_real(d.np_continuous));
    row("n_p floor / ceil", std::to_string(d.np_floor) + " / " + std::to_string(d.np_ceil));
    row("n_p*", std::to_string(d.np_star));
    row("gamma_eff*", format_real(d.gamma_eff_star));
    row("xi* achieved", format_real(d.xi_star_achieved));
    return {csv.str(), t.str(), true};
}

CommandOutput cmd_fig1(const RunConfig& rc) {
    rc.mc.validate();
    const SystemConfig& cfg = rc.system;
    for (int n_p : rc.fig1.n_p) {
        if (n_p > cfg.n - 1) throw ConfigError("fig1.n_p", "values must lie in [1, n-1]");
    }
    const std::string hash = rc.config_hash();
    CsvWriter csv({"eta", "n_p", "xi_lrt", "xi_lrt_stderr", "kl_bound", "config_hash"});
    for (int n_p : rc.fig1.n_p) {
        for (double eta : rc.fig1.eta) {
            const auto alloc = PowerAllocation::from_fraction(cfg.n, rc.fig1.rho, eta, n_p);
            const auto est = mc::simulate_willie(cfg, alloc, rc.mc, mc::Lrt{});
            const double bound = covertness_lower_bound(kl_divergence(cfg, alloc));
            csv.cell(eta).cell(n_p).cell(est.xi.value).cell(est.xi.std_err).cell(bound).cell(hash);
            csv.end_row();
        }
    }
    return {csv.str(), {}, true};
}

CommandOutput cmd_fig2(const RunConfig& rc) {
    const std::string hash = rc.config_hash();
    CsvWriter csv({"epsilon", "n_p", power_column(rc, "rho_star"), "gamma_eff", "analytic_opt",
                   "config_hash"});
    for (double eps : rc.fig2.epsilon) {
        const SystemConfig cfg = with(rc.system, rc.system.n, eps);
        const double rho = solve_rho_star(cfg);
        const int best = np_star(cfg, rho).np_star;
        for (int n_p = 1; n_p <= cfg.n - 1; ++n_p) {
            const double g = effective_sinr(cfg, PowerAllocation::equal_power(cfg.n, rho, n_p));
            csv.cell(eps).cell(n_p).cell(power_value(rc, rho)).cell(g).cell(n_p == best ? 1 : 0);
            csv.cell(hash).end_row();
        }
    }
    return {csv.str(), {}, true};
}

CommandOutput cmd_fig3(const RunConfig& rc) {
    const std::string hash = rc.config_hash();
    CsvWriter csv({"epsilon", "n", "np_star", "np_star_over_n", "config_hash"});
    for (int n : rc.fig3.n) {
        for (double eps : rc.fig3.epsilon) {
            const SystemConfig cfg = with(rc.system, n, eps);
            const int np = np_star(cfg, solve_rho_star(cfg)).np_star;
            csv.cell(eps).cell(n).cell(np).cell(static_cast<double>(np) / n).cell(hash).end_row();
        }
    }
    return {csv.str(), {}, true};
}

CommandOutput cmd_sweep(const RunConfig& rc) {
    const std::string hash = rc.config_hash();
    CsvWriter csv({"epsilon", "n", power_column(rc, "rho_star"), "np_continuous", "np_star",
                   "gamma_eff_star", "xi_star_achieved", "config_hash"});
    for (int n : rc.sweep.n) {
        for (double eps : rc.sweep.epsilon) {
            const DesignResult d = design(with(rc.system, n, eps));
            csv.cell(eps).cell(n).cell(power_value(rc, d.rho_star)).cell(d.np_continuous);
            csv.cell(d.np_star).cell(d.gamma_eff_star).cell(d.xi_star_achieved).cell(hash);
            csv.end_row();
        }
    }
    return {csv.str(), {}, true};
}

CommandOutput cmd_verify(const RunConfig& rc) {
    rc.mc.validate();
    const std::string hash = rc.config_hash();
    CsvWriter csv({"check", "n", "n_p", power_column(rc, "rho"), "analytic", "estimate", "std_err",
                   "z", "pass", "config_hash"});
    int failures = 0;
    int checks = 0;
    std::ostringstream t;

    for (int n : rc.verify.n) {
        SystemConfig cfg = rc.system;
        cfg.n = n;
        cfg.validate();
        const int n_p = std::clamp(static_cast<int>(std::lround(rc.verify.pilot_fraction * n)), 1, n - 1);
        for (double rho : rc.verify.rho) {
            const auto alloc = PowerAllocation::equal_power(n, rho, n_p);
            const DetectionReport report = min_detection_error(cfg, rho);
            const auto cmp = mc::compare_detectors(cfg, alloc, rc.mc, *report.tau_star);
            const auto bob = mc::simulate_bob(cfg, alloc, rc.mc);

            auto emit = [&](const char* name, double analytic, double estimate, double se, bool pass) {
                const double z = se > 0.0 ? (estimate - analytic) / se : 0.0;
                csv.cell(std::string(name)).cell(n).cell(n_p).cell(power_value(rc, rho));
                csv.cell(analytic).cell(estimate).cell(se).cell(z).cell(pass ? 1 : 0).cell(hash);
                csv.end_row();
                ++checks;
                if (!pass) {
                    ++failures;
                    t << "FAIL " << name << " n=" << n << " rho=" << format_real(rho) << '\n';
                }
            };
            auto within_z = [&](double analytic, const mc::McEstimate& e) {
                return std::abs(e.value - analytic) <= rc.verify.z_limit * e.std_err;
            };
            // Error rates are tested against the binomial spread implied by the
            // analytic value; the estimate's own spread collapses to zero when
            // no error is observed.
            const double trials = static_cast<double>(rc.mc.trials);
            auto null_se = [&](double p) { return std::sqrt(p * (1.0 - p) / trials); };
            auto emit_rate = [&](const char* name, double analytic, double estimate, double se) {
                emit(name, analytic, estimate, se, std::abs(estimate - analytic) <= rc.verify.z_limit * se);
            };

            emit_rate("xi_radiometer", *report.xi_star, cmp.radiometer.xi.value,
                      std::hypot(null_se(*report.alpha), null_se(*report.beta)));
            emit_rate("alpha_radiometer", *report.alpha, cmp.radiometer.alpha.value, null_se(*report.alpha));
            emit_rate("beta_radiometer", *report.beta, cmp.radiometer.beta.value, null_se(*report.beta));
            emit("lrt_radiometer_disagreements", 0.0, static_cast<double>(cmp.disagreements), 0.0,
                 cmp.disagreements == 0);
            emit("kl_bound_vs_lrt", report.xi_lower_bound, cmp.lrt.xi.value, cmp.lrt.xi.std_err,
                 report.xi_lower_bound <= cmp.lrt.xi.value + rc.verify.z_limit * cmp.lrt.xi.std_err);
            const double g = sinr(cfg, alloc);
            emit("bob_sinr", g, bob.sinr.value, bob.sinr.std_err,
                 std::abs(bob.sinr.value - g) <= rc.verify.sinr_rel_tol * g);
            const auto stats = estimation_stats(cfg, alloc);
            emit("bob_var_h_hat", stats.var_h_hat, bob.var_h_hat.value, bob.var_h_hat.std_err,
                 within_z(stats.var_h_hat, bob.var_h_hat));
            emit("bob_orthogonality", 0.0, bob.corr_re.value, bob.corr_re.std_err,
                 within_z(0.0, bob.corr_re) && within_z(0.0, bob.corr_im));
        }
    }
    t << (checks - failures) << '/' << checks << " checks passed\n";
    return {csv.str(), t.str(), failures == 0};
}

}  // namespace covert::cli
