#ifndef NBGAME_REPORT_HPP
#define NBGAME_REPORT_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nbgame/bargaining.hpp"

namespace nbgame {

enum class SystemKind { BandwidthDominant, PowerDominant };

/// Theorem-5 style classification of an SMC+TPC system.
struct Classification {
    SystemKind kind;
    double tau;  // in (-1, 1); <= 0 iff bandwidth-dominant
    // Bandwidth-dominant witness: ordered-bin index and feasible
    // time-share interval on it.
    std::optional<std::size_t> witness_bin;  // position in ratio order
    double witness_lo = 0.0;
    double witness_hi = 0.0;
    std::vector<std::size_t> bin_order;  // ratio-descending permutation
};

/// One endpoint of a time-shared solution: a pure FDM allocation and the
/// rates it yields.
struct SharePoint {
    Allocation alloc;
    std::vector<double> rates;
    std::vector<std::size_t> bins_user1;
    std::vector<std::size_t> bins_user2;
};

struct IterSample {
    int iter;
    std::vector<double> rates;
    double log_nf;
    double dual_objective;
    double residual;
};

/// Uniform result record for every solver in the library.
struct SolveReport {
    std::string solver;
    Allocation alloc;
    std::vector<double> rates;
    std::vector<double> disagreement;
    double log_nf = 0.0;

    int iterations = 0;
    double residual = 0.0;
    std::optional<Classification> classification;

    // Two-user single-shared-bin detail (SMC and bandwidth-dominant paths).
    int shared_bin = -1;  // original bin index, -1 if none fractional
    double beta = 0.0;

    // Time-shared solutions (power-dominant path and the FDM/TS oracle):
    // rates = lambda * a.rates + (1 - lambda) * b.rates.
    std::optional<SharePoint> share_a;
    std::optional<SharePoint> share_b;
    double lambda = 1.0;

    std::vector<IterSample> trace;
};

/// Human-readable report (10 significant digits).
void write_report(std::ostream& out, const SolveReport& report);

/// Machine-readable sidecar: one CSV row per (user, bin) allocation entry
/// plus a rates summary block.
void write_report_csv(std::ostream& out, const SolveReport& report);

/// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string format_double(double value);  // 10 significant digits

}  // namespace nbgame

#endif
