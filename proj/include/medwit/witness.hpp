// witness.hpp — Correlation witnesses of non-decomposable dynamics and the
// constructive no-go checks built on them.

#pragma once

#include "medwit/correlations.hpp"
#include "medwit/dynamics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace medwit {

struct WitnessReport {
    double lhs = 0.0;
    double lhs_gap = 0.0;        // optimiser gap of lhs (upper-bounding REE)
    double capacity = 0.0;
    double total_corr = 0.0;
    double bound = 0.0;          // capacity + total_corr
    double raw_violation = 0.0;  // max(0, lhs - bound)
    double violation = 0.0;      // max(0, lhs - lhs_gap - bound)
    double nd_lower_bound = 0.0; // g^{-1}(violation)
    int mediator_dim_assumed = 1;
    std::string cut;             // e.g. "A:MB"
    std::string measure;         // MeasureSpec::id()
    OptStatus lhs_status = OptStatus::exact;
    OptStatus total_corr_status = OptStatus::exact;
    bool capacity_numerical = false;
    bool certified = false;

    OptStatus status() const { return combine(lhs_status, total_corr_status); }
};

struct WitnessOptions {
    ReeOptions ree;
    TotalCorrOptions total_corr;
    // Let the REE solver stop once it proves lhs <= bound.
    bool early_stop = true;
};

// Fills bound, violations, nd_lower_bound and certified from the other fields.
void finalize(WitnessReport& r, const ContinuityFn& g);

// Accessible mediator. AM_then_BM evaluates Q_{A:MB}(rho_t) against the A:M capacity
// plus I_{AM:B}(rho0); BM_then_AM evaluates the mirrored B:MA inequality.
WitnessReport witness_accessible(const QState& rho0, const QState& rho_t, const MeasureSpec& spec,
                                 Order order = Order::AM_then_BM, const WitnessOptions& opts = {});

// Inaccessible mediator of assumed dimension at most m: Q_{A:B}(rho_t) against the
// A:M capacity with d_M = m plus I_{A:B}(rho0).
WitnessReport witness_inaccessible(const QState& rho0_ab, const QState& rho_t_ab, const MeasureSpec& spec, int m,
                                   const WitnessOptions& opts = {});

// Smallest m with log2 m >= E. `resolution` absorbs rounding in E, so E = 1.585 is
// read as log2 3.
int excluded_mediator_dim(double e_obs, double resolution = 1e-3);

struct FalsifyOptions {
    int restarts = 50;
    int max_iter = 3000;
    std::uint64_t seed = 0xfa15eULL;
};

struct FalsifyResult {
    double best_distance = 0.0;              // spectral norm, best restart
    std::vector<double> restart_distances;   // one per restart
    Matrix v_am, v_bm;                       // argmin factors
    int restarts = 0;
    OptStatus status = OptStatus::converged;
};

// Multistart search for V_second V_first close to U_target, with the factors on
// {A,M} and {B,M} applied in `order`.
FalsifyResult falsify_decomposition(const QOp& u_target, Order order, const FalsifyOptions& opts = {});

// max over probe inputs of the trace distance between the kept marginal of the
// dilation output and that of target_ab * probe * target_ab^+.
double dilation_deviation(const DilationSpec& dil, const Matrix& target_ab, const std::vector<Matrix>& probes,
                          const std::string& keep);

// Deviation of a dilation from SWAP on two qubits, probing |00>, |01> and comparing
// A-marginals (mirrored to |00>, |10> and B-marginals for BM_then_AM bodies).
double swap_dilation_test(const DilationSpec& dil);

struct AdversarialResult {
    double deviation = 0.0;
    int evaluations = 0;
};
// Minimise swap_dilation_test over unitary bodies exp(iH) and pure sigma_M.
AdversarialResult adversarial_swap_dilation(int m, Order order, std::uint64_t seed, int max_iter = 3000);

struct StrictInclusion {
    double entanglement = 0.0;   // E_{A:B} of the output on |00>
    WitnessReport below;         // cap m - 1
    WitnessReport at;            // cap m
};
StrictInclusion strict_inclusion_demo(int m, int d, const WitnessOptions& opts = {});

// The dilation body used by strict_inclusion_demo: Fourier-then-shift entangler on
// (A, M), then the exchange of the m-dimensional subspace between M and B.
DilationSpec strict_inclusion_dilation(int m, int d);

struct Sandwich {
    double lower = 0.0;
    double upper = 0.0;
    bool consistent = true;
    WitnessReport report;
};
// Bounds ND_inf of e^{-itH} from both sides. The witness is the BM-first one,
// matching the reference U_AM U_BM; `spec` must use the trace distance.
Sandwich sandwich_check(const QOp& h_am, const QOp& h_bm, double t, const QState& rho0, const MeasureSpec& spec,
                        const WitnessOptions& opts = {});

}  // namespace medwit
