#pragma once

// Two-level atom states and trajectories in the {|g>, |e>} basis (g = 0, e = 1).

#include <Eigen/Core>

#include <complex>
#include <string>
#include <vector>

namespace giant_heom::qubit {

using cplx = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kStateTolerance = 1e-6;

class QubitState {
public:
    static QubitState excited();
    static QubitState ground();
    static QubitState plus();  // (|g> + |e>)/sqrt(2)
    static QubitState maximally_mixed();

    // Throws DomainError unless rho is Hermitian with unit trace and
    // eigenvalues in [-tol, 1 + tol].
    static QubitState from_matrix(const Matrix2& rho, double tol = kStateTolerance);

    const Matrix2& matrix() const noexcept { return rho_; }
    double p_ee() const { return rho_(1, 1).real(); }
    cplx p_eg() const { return rho_(1, 0); }

private:
    explicit QubitState(const Matrix2& rho) : rho_(rho) {}
    Matrix2 rho_;
};

enum class InitialState { excited, plus, mixed };

QubitState initial_state(InitialState which);
std::string to_string(InitialState which);
InitialState parse_initial_state(const std::string& name);  // throws ConfigError

double trace_defect(const Matrix2& rho);
double hermiticity_defect(const Matrix2& rho);  // max-abs entry of rho - rho^dagger
// max(0, -lambda_min) of the Hermitian part.
double positivity_defect(const Matrix2& rho);

struct Trajectory {
    std::vector<double> t;
    std::vector<Matrix2> rho;              // Schroedinger-picture reduced state per time
    std::vector<double> positivity;        // per-time positivity defect
    double max_trace_defect{0.0};
    double max_hermiticity_defect{0.0};
    double max_positivity_defect{0.0};

    std::size_t size() const noexcept { return t.size(); }
    void push_back(double time, const Matrix2& state);
};

struct Observables {
    std::vector<double> p_ee;
    std::vector<cplx> p_eg;

    std::vector<double> abs_p_eg() const;
};

Observables observables(const Trajectory& traj);

}  // namespace giant_heom::qubit
