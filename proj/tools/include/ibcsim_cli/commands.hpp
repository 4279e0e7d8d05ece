#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ibcsim_cli/config.hpp"
#include "ibcsim_cli/output.hpp"

namespace ibccli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct Context {
    RunConfig cfg;
    bool deterministic = false;
    unsigned jobs = 1;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
};

Metadata file_metadata(const Context& ctx, const std::string& command, const ibc::SystemParams& p);

int cmd_bloch(const Context& ctx);
int cmd_wigner(const Context& ctx);
int cmd_coeffs(const Context& ctx);
int cmd_dephasing(const Context& ctx);
int cmd_sweep(const Context& ctx);
int cmd_validate(const Context& ctx);

// Full command-line entry point; never throws, returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace ibccli
