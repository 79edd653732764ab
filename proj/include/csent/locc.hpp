#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "csent/ent.hpp"
#include "csent/state.hpp"

namespace csent {

struct Instrument {
    Party party = Party::A;
    std::vector<std::string> labels;  // factors acted on, in layout order
    std::vector<Mat> kraus;

    // sum K^dag K = I within tol; throws InstrumentError beyond 1e-8.
    void check_complete(double tol = 1e-8) const;
};

struct LocalUnitaryStep {
    Party party = Party::A;
    std::vector<std::string> labels;
    Mat u;
};

// Applies the instrument and discards the outcome.
struct LocalChannelStep {
    Instrument inst;
};

// Records the outcome in a fresh flag factor owned by the acting party.
struct FlaggedInstrumentStep {
    Instrument inst;
    std::string flag_label;
};

// Copies a classical flag to the other party via the modular-addition
// unitary; the copy gets label flag_label + "c".
struct CommunicateStep {
    std::string flag_label;
};

struct DiscardFlagStep {
    std::string label;
};

using LoccStep = std::variant<LocalUnitaryStep, LocalChannelStep, FlaggedInstrumentStep,
                              CommunicateStep, DiscardFlagStep>;

struct LoccProtocol {
    std::vector<LoccStep> rounds;
};

struct StepLog {
    std::string description;
    double trace = 0.0;
    SubsystemLayout layout;
};

// sum_i K_i rho K_i^dag x |i><i| on a fresh flag factor.
MultipartiteState apply_flagged_instrument(const MultipartiteState& s, const Instrument& inst,
                                           const std::string& flag_label);

// Requires the flag factor to be classical (off-diagonal mass <= 1e-8);
// throws ClassicalityError otherwise.
MultipartiteState communicate(const MultipartiteState& s, const std::string& flag_label);

struct RunResult {
    MultipartiteState state;
    std::vector<StepLog> log;
};

RunResult run(const LoccProtocol& protocol, const MultipartiteState& s);

struct RandomLoccOptions {
    int depth = 3;
    int max_outcomes = 2;
    // product of live flag dimensions allowed per side before old flags are
    // discarded; keeps quantifier evaluations tractable
    int flag_budget_per_side = 4;
    double communicate_probability = 0.7;
    bool discard_flags_at_end = false;
};

// Seeded protocol of flagged Stinespring instruments on alternating parties
// with interleaved communication; respects the total dimension cap.
LoccProtocol random_locc(std::uint64_t seed, const SubsystemLayout& start_layout,
                         const RandomLoccOptions& options = {});

enum class Quantifier { BuresEntanglement, CseBures, CseHs };

std::string to_string(Quantifier q);

struct MonotonicityReport {
    double before = 0.0;
    double after = 0.0;
    double violation = 0.0;  // max(0, after - before - tol)
    double tol = 1e-2;
};

// Evaluates the quantifier before and after the protocol at matched
// optimizer settings; flags stay with their owning party in the final
// bipartition.
MonotonicityReport monotonicity_trial(const MultipartiteState& s, const LoccProtocol& protocol,
                                      Quantifier quantifier, const EntOpts& opts = {},
                                      double tol = 1e-2);

} // namespace csent
