#include "giant_heom/qubit.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "giant_heom/errors.hpp"

namespace giant_heom::qubit {

QubitState QubitState::excited() {
    Matrix2 m = Matrix2::Zero();
    m(1, 1) = 1.0;
    return QubitState{m};
}

QubitState QubitState::ground() {
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = 1.0;
    return QubitState{m};
}

QubitState QubitState::plus() {
    Matrix2 m;
    m.setConstant(cplx{0.5, 0.0});
    return QubitState{m};
}

QubitState QubitState::maximally_mixed() {
    return QubitState{Matrix2::Identity() * 0.5};
}

QubitState QubitState::from_matrix(const Matrix2& rho, double tol) {
    if (!rho.allFinite()) throw DomainError("qubit state has non-finite entries");
    if (hermiticity_defect(rho) > tol) throw DomainError("qubit state is not Hermitian");
    if (trace_defect(rho) > tol) throw DomainError("qubit state does not have unit trace");
    const Matrix2 h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix2> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol || es.eigenvalues()(1) > 1.0 + tol) {
        throw DomainError("qubit state eigenvalues outside [0, 1]");
    }
    return QubitState{rho};
}

QubitState initial_state(InitialState which) {
    switch (which) {
        case InitialState::excited: return QubitState::excited();
        case InitialState::plus: return QubitState::plus();
        case InitialState::mixed: return QubitState::maximally_mixed();
    }
    return QubitState::excited();
}

std::string to_string(InitialState which) {
    switch (which) {
        case InitialState::excited: return "excited";
        case InitialState::plus: return "plus";
        case InitialState::mixed: return "mixed";
    }
    return "excited";
}

InitialState parse_initial_state(const std::string& name) {
    if (name == "excited") return InitialState::excited;
    if (name == "plus") return InitialState::plus;
    if (name == "mixed") return InitialState::mixed;
    throw ConfigError("init: expected one of excited|plus|mixed, got '" + name + "'");
}

double trace_defect(const Matrix2& rho) { return std::abs(rho.trace() - 1.0); }

double hermiticity_defect(const Matrix2& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double positivity_defect(const Matrix2& rho) {
    const Matrix2 h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix2> es(h, Eigen::EigenvaluesOnly);
    return std::max(0.0, -es.eigenvalues()(0));
}

void Trajectory::push_back(double time, const Matrix2& state) {
    t.push_back(time);
    rho.push_back(state);
    const double pos = positivity_defect(state);
    positivity.push_back(pos);
    max_trace_defect = std::max(max_trace_defect, trace_defect(state));
    max_hermiticity_defect = std::max(max_hermiticity_defect, hermiticity_defect(state));
    max_positivity_defect = std::max(max_positivity_defect, pos);
}

std::vector<double> Observables::abs_p_eg() const {
    std::vector<double> out(p_eg.size());
    std::transform(p_eg.begin(), p_eg.end(), out.begin(), [](cplx v) { return std::abs(v); });
    return out;
}

Observables observables(const Trajectory& traj) {
    Observables out;
    out.p_ee.reserve(traj.size());
    out.p_eg.reserve(traj.size());
    for (const Matrix2& rho : traj.rho) {
        out.p_ee.push_back(rho(1, 1).real());
        out.p_eg.push_back(rho(1, 0));
    }
    return out;
}

}  // namespace giant_heom::qubit
