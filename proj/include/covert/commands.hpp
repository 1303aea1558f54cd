#pragma once

#include "covert/design_optimizer.hpp"
#include "covert/run_config.hpp"

#include <string>
#include <vector>

namespace covert::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitBudget = 4,
};

/// Comma-separated, '.' decimal, LF line endings, 17 significant digits.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
    CsvWriter& cell(const std::string& v);
    void end_row();

    const std::string& str() const noexcept { return out_; }

private:
    void sep();

    std::string out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

std::string format_real(double v);

struct CommandOutput {
    std::string csv;
    std::string text;  ///< human-readable summary, may be empty
    bool ok = true;    ///< false when a verification check failed
};

CommandOutput cmd_design(const RunConfig& rc);
CommandOutput cmd_fig1(const RunConfig& rc);
CommandOutput cmd_fig2(const RunConfig& rc);
CommandOutput cmd_fig3(const RunConfig& rc);
CommandOutput cmd_sweep(const RunConfig& rc);
CommandOutput cmd_verify(const RunConfig& rc);

}  // namespace covert::cli
