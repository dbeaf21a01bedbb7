// dynamics.hpp — Hamiltonian evolution, Kraus maps, decomposable maps, dilations
// and Trotter product formulas on the (A, M, B) system.

#pragma once

#include "medwit/correlations.hpp"
#include "medwit/layout.hpp"
#include "medwit/random.hpp"
#include "medwit/tensor.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace medwit {

// CPTP map in Kraus form acting on the parts named by `layout` (in that order).
class KrausMap {
public:
    KrausMap(std::vector<Matrix> kraus, SystemLayout layout, double tol = kDefaultTol);

    static KrausMap unitary(const Matrix& u, SystemLayout layout, double tol = kDefaultTol);
    static KrausMap identity(SystemLayout layout);

    const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
    const SystemLayout& layout() const noexcept { return layout_; }
    std::vector<std::string> acting_on() const { return layout_.labels(); }
    bool is_unitary() const noexcept { return kraus_.size() == 1; }

private:
    std::vector<Matrix> kraus_;
    SystemLayout layout_;
};

enum class Order { AM_then_BM, BM_then_AM };
std::string to_string(Order o);

struct DecomposableSpec {
    KrausMap am;
    KrausMap bm;
    Order order = Order::AM_then_BM;

    void validate() const;
};

// Mediator of dimension m prepared in sigma_M, then the decomposable body on (A, M, B).
struct DilationSpec {
    int m = 1;
    QState sigma_m;
    DecomposableSpec body;

    void validate(Index dim_cap = kDefaultDimCap) const;
};

// Canonical (A, M, B) layout holding both Hamiltonians' parts.
SystemLayout joint_layout(const SystemLayout& am, const SystemLayout& bm);

// U rho U^+ with U = e^{-itH}.
QState evolve(const QState& state, const QOp& h, double t);

QState apply_map(const QState& state, const KrausMap& map);
QState apply_map(const QState& state, const DecomposableSpec& spec);
Matrix apply_map_matrix(const Matrix& x, const SystemLayout& layout, const KrausMap& map);

// Tr_M body(rho_AB (x) sigma_M), returned on the layout of rho_AB.
QState marginal_of_dilation(const DilationSpec& dil, const QState& rho_ab);

// Full-space unitary of a decomposable spec whose maps are both unitary.
Matrix decomposable_unitary(const DecomposableSpec& spec, const SystemLayout& target);

// H_AM = -(pi/4) Z_A X_M and H_BM = -(pi/4) Z_B Z_M on qubits; at t = 1 they
// generate (1 + i Z_A X_M)/sqrt2 and (1 + i Z_B Z_M)/sqrt2.
HamiltonianPair appendix_b_hamiltonians();

// H_AM + H_BM embedded in joint_layout.
QOp joint_hamiltonian(const QOp& h_am, const QOp& h_bm);

// (e^{-i(t/r)H_AM} e^{-i(t/r)H_BM})^r on joint_layout.
QOp trotter_unitary(const QOp& h_am, const QOp& h_bm, double t, long r);

double commutator_norm(const QOp& h_am, const QOp& h_bm);

// ||e^{-itH} - trotter_unitary(t, r)||_inf.
double trotter_error(const QOp& h_am, const QOp& h_bm, double t, long r);

struct StepCount {
    long r = 1;          // smallest r found with error <= eps
    long r_bound = 1;    // ceil(t^2 ||[H_AM, H_BM]|| / (2 eps))
    double error = 0.0;  // error at r
};
// Doubling then binary search. Throws std::runtime_error when r would exceed r_cap.
StepCount min_steps(const QOp& h_am, const QOp& h_bm, double t, double eps, long r_cap = 1L << 20);

struct Classicality {
    bool classical = false;
    double commutator_norm = 0.0;
};
Classicality classicality_check(const QOp& h_am, const QOp& h_bm, double tol = kDefaultTol);

// Projectors onto the computational basis of a d-dimensional part.
std::vector<Matrix> computational_projectors(Index d);
// ||H - sum_m P_m H P_m||_inf <= tol, with the projectors acting on `label`.
bool dephasing_invariance(const QOp& h, const std::vector<Matrix>& projectors, const std::string& label = "M",
                          double tol = kDefaultTol);

// Lower estimate of sup_rho d(f(rho), g(rho)) over sampled pure and mixed inputs.
using StateMap = std::function<Matrix(const Matrix&)>;
struct MapDistance {
    double value = 0.0;
    int samples = 0;
};
MapDistance map_distance_estimate(const StateMap& f, const StateMap& g, const SystemLayout& layout, Distance d,
                                  int samples, std::uint64_t seed, std::span<const Matrix> extra_inputs = {});

}  // namespace medwit
