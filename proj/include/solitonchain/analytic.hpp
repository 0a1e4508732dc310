#pragma once

// Closed-form three-site model of the defect states. Nothing here runs the
// numerical propagator, so results can be checked against it.

#include <Eigen/Dense>

#include <array>

namespace solitonchain::analytic {

/// Effective coupling between neighbouring defects through one dimer.
double effective_eta(double big_delta, double delta);

/// pi / (sqrt(2) eta).
double mirroring_time(double eta);

struct TrimerEigensystem {
    std::array<double, 3>          energies; // -sqrt(2) eta, 0, +sqrt(2) eta
    std::array<Eigen::Vector3d, 3> vectors;  // same order, sites (A, B, C)
};

TrimerEigensystem trimer_eigensystem(double eta);

/// Reduced (A, C) density matrix of the trimer after injecting |+>|+> on the
/// end sites, over {|00>, |01>, |10>, |11>}.
Eigen::Matrix4cd trimer_rho_ac(double eta, double t);

/// Entanglement of formation of trimer_rho_ac.
double analytic_eof_profile(double eta, double t);

/// Spectrum of the trimer with couplings eta+d and eta+e, ascending.
std::array<double, 3> noisy_trimer_eigenvalues(double eta, double d, double e);

} // namespace solitonchain::analytic
