#pragma once

#include <string>
#include <vector>

#include "ibc/coeffode.hpp"
#include "ibc/lindblad_exact.hpp"
#include "ibc/params.hpp"

namespace ibc {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    bool informational = false;  // reported, never fails a suite
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    void add(CheckResult c) { checks.push_back(std::move(c)); }
    void merge(const ValidationReport& other);
};

// |x - y| / max(1, |y|) maximised over all six coefficients; Im f compared modulo 2 pi.
double coeff_deviation(const CoeffState& x, const CoeffState& y);

struct OracleRow {
    double t = 0.0;
    double dev_closedform = 0.0;
    double dev_uncorrected = 0.0;
};

ValidationReport run_oracle_suite(const SystemParams& p, const OdeTolerances& tol = {},
                                  std::vector<OracleRow>* rows = nullptr, std::size_t samples = 401);

ValidationReport run_classical_limit_suite(const std::vector<double>& ladder = {1e-2, 1e-3, 1e-4},
                                           const ClassicalLimitSetup& setup = {},
                                           std::vector<ClassicalLimitPoint>* rows = nullptr);

struct PdeResidualRow {
    double t = 0.0;
    double kappa = 0.0;
    double residual = 0.0;  // max |R| / max sum |terms|
};

// Centred finite differences of W_x on a 9x9 patch spanning +-2 sigma of |W_x|.
double pde_residual(const SystemParams& p, double t, double kappa, const OdeTolerances& tol = {});

ValidationReport run_pde_residual_suite(const SystemParams& p, std::vector<PdeResidualRow>* rows = nullptr);

}  // namespace ibc
