// Frozen reference values for the test suite.
//
// Every number below was produced by the independent high-precision scripts
// in tools/oracles/ (mpmath at 50 digits, sympy exact rationals) and pasted
// here verbatim.  Tests compare library output against these constants; the
// scripts are not executed as part of the build.
//
//   tools/oracles/reference_quadrature.py  -> wave/action/speed fixtures
//   tools/oracles/bf_index_symbolic.py     -> harmonic-point index fixtures
//   tools/oracles/pencil_cofactor.py       -> quartic-pencil coefficient tables
#pragma once

#include <array>

namespace fx {

// Focusing cubic test model: kappa = 1, W(alpha) = -alpha^2/8.
// Effective potential at the standard parameters is rho^2/2 - rho.
namespace ref {
inline constexpr double mu_x = -0.375, c_x = 0.0, omega_phi = -1.0, mu_phi = 0.0;
inline constexpr double rho_min = 0.5, rho_max = 1.5;
inline constexpr double X_x = 4.68568033658707944;
inline constexpr double theta = 0.569744022034728529;
inline constexpr std::array<double, 4> grad = {
    4.68568033658707944, 0.0, -4.36887628549240237, 0.0};
inline constexpr double m_bar = 0.932388889480790229;
inline constexpr double xi_phi = 0.0;
inline constexpr std::array<double, 3> sigma = {
    8.73775257098480474, 0.0, 0.569744022034728529};
inline constexpr std::array<std::array<double, 4>, 4> hess = {{
    {2.27897608813891422, 0.0, 0.633608102189353888, 0.0},
    {0.0, -2.18443814274620119, 0.0, 2.34284016829353972},
    {0.633608102189353888, 0.0, 1.70923206610418609, 0.0},
    {0.0, 2.34284016829353972, 0.0, -2.91258419032826825},
}};
inline constexpr double hess_det = 3.05172910307635506;
inline constexpr std::array<double, 4> hess_eigs = {
    -4.91947072351454595, -0.177551609559923478,
    1.29940177410170849, 2.68880638014139182};
// Pencil eigenvalues come in two conjugate purely imaginary pairs.
inline constexpr double speed_im_small = 1.31561754855086599;
inline constexpr double speed_im_large = 9.55306354937915475;
// Quartic pencil coefficients delta_(m,n,p) for this wave (odd-n vanish).
inline constexpr double d040 = 1.0;
inline constexpr double d121 = -24.151006994673285;
inline constexpr double d202 = -33.044392789539224;
inline constexpr double d220 = 12.925449612205259;
inline constexpr double d301 = -11.595547143584801;
inline constexpr double d400 = 3.0517291030763549;
}  // namespace ref

// Same model close to the harmonic boundary: mu_x = -1/2 + 1e-3.
namespace ref_small {
inline constexpr double mu_x = -0.499, c_x = 0.0, omega_phi = -1.0, mu_phi = 0.0;
inline constexpr double rho_min = 0.955278640450004206;
inline constexpr double rho_max = 1.04472135954999579;
inline constexpr double X_x = 4.44455084404583387;
inline constexpr double X0 = 4.44288293815836625;  // 2 pi / sqrt 2
inline constexpr std::array<std::array<double, 4>, 4> hess = {{
    {1.66973318638846422, 0.0, 0.555881702006387563, 0.0},
    {0.0, -2.22116365861894248, 0.0, 2.22227542202291693},
    {0.555881702006387563, 0.0, 1.66639372001737274, 0.0},
    {0.0, 2.22227542202291693, 0.0, -2.22561488839573395},
}};
inline constexpr double hess_det = 0.0122356963899314889;
inline constexpr double speed_im_small = 1.41350590250089746;
inline constexpr double speed_im_large = 126.340847278218243;
}  // namespace ref_small

// Defocusing cubic test model: kappa = 1, W(alpha) = +alpha^2/8.
namespace refd {
// Generic well with nonzero rotation: (mu_x, c_x, omega_phi, mu_phi).
namespace generic {
inline constexpr double mu_x = 0.99, c_x = 0.0, omega_phi = 1.25, mu_phi = 1.0;
inline constexpr double rho_min = 0.556633537021671262;
inline constexpr double rho_max = 0.757414124116806853;
inline constexpr double rho_dual = 1.18595233886152188;
inline constexpr double X_x = 6.15104360997061365;
inline constexpr double theta = 0.0249910362304468418;
inline constexpr double xi_phi = 4.70189856988995047;
inline constexpr std::array<double, 4> grad = {
    6.15104360997061365, 3.07552180498530682,
    -4.07098555084897524, -4.70189856988995047};
inline constexpr double m_bar = 0.661836561238170803;
inline constexpr double q_bar = 0.5;  // exact: mu_phi/2 with c_x = 0
inline constexpr std::array<double, 3> sigma = {
    8.14197110169795049, 6.15104360997061365, 4.72688960612039731};
}  // namespace generic

// Small-amplitude member of the harmonic family at (c_x, rho0, kphi0) =
// (0, 1, 1): parameters (5/2 + 1e-3, 0, 2, 2).
namespace harmonic_member {
inline constexpr double mu_x = 2.501, c_x = 0.0, omega_phi = 2.0, mu_phi = 2.0;
inline constexpr double rho_min = 0.957155368419842554;
inline constexpr double rho_max = 1.04686890744862375;
inline constexpr double X_x = 4.45805714303549246;
inline constexpr std::array<std::array<double, 4>, 4> hess = {{
    {15.3564405117838212, 15.3564405117838214, -26.7064060383614264, -8.54304397824513197},
    {15.3564405117838214, 13.1217980971693145, -26.7064060383614265, -6.3140154067273859},
    {-26.7064060383614264, -26.7064060383614265, 42.6407395269577996, 15.3564405117838259},
    {-8.54304397824513197, -6.3140154067273859, 15.3564405117838259, 4.00647498520414055},
}};
// All four pencil eigenvalues are real here (weak hyperbolicity holds).
inline constexpr std::array<double, 4> speeds = {
    3.41261561196053918, 0.581339071534349958,
    -1.0346728769030542, -0.955376441469778238};
}  // namespace harmonic_member

// Solitary-wave data at (c_x, rho_endstate, k_phi) = (0, 1, 1/2).
namespace solitary {
inline constexpr double c_x = 0.0, rho_endstate = 1.0, k_phi = 0.5;
inline constexpr double theta_s = 0.0958703398717700474;
inline constexpr double rho_s = 0.5;                      // exact: (1+c_x)^2/2
inline constexpr double dtheta_s_dcx = -0.570796326794896653;  // 1 - pi/2
inline constexpr double vk_index = 2.0;                   // exact
}  // namespace solitary

// Large-period member on the same saddle family: mu_x = 1 - 1e-4,
// (c_x, omega_phi, mu_phi) = (0, 5/4, 1).
namespace large_period {
inline constexpr double mu_x = 0.9999, c_x = 0.0, omega_phi = 1.25, mu_phi = 1.0;
inline constexpr double rho_min = 0.500400963600260571;
inline constexpr double rho_max = 0.979790489705868934;
inline constexpr double rho_dual = 1.01980854669387049;
inline constexpr double epsilon = 0.0834771199802677337;
inline constexpr double X_x = 10.601890275079586;
inline constexpr double theta = 0.0947103913935824807;
inline constexpr std::array<std::array<double, 4>, 4> hess = {{
    {9956.29228666030971, 4978.1461433301486, -9976.81387857307251, -4963.25127452317308},
    {4978.1461433301486, 2484.77334956146356, -4988.40693928653, -2476.32469212404362},
    {-9976.81387857307251, -4988.40693928653, 9984.0907658174944, 4978.14614333014822},
    {-4963.25127452317308, -2476.32469212404362, 4978.14614333014822, 2468.55147975259708},
}};
inline constexpr double hess_det = 1435671.2875481378;
inline constexpr std::array<double, 4> speeds = {
    2.55555384741040506, -0.609869709692336056,
    0.0716994639693645227, -0.0787481204209223609};
}  // namespace large_period
}  // namespace refd

// Harmonic-point index fixtures (exact rationals from the symbolic oracle).
namespace harmonic {
// Focusing model at (c_x, rho0, kphi0) = (0, 1, 0).
namespace ref010 {
inline constexpr double mu_phi0 = 0.0, omega_phi0 = -1.0, mu_x0 = -0.5;
inline constexpr double d2W = 1.0;  // d^2/drho^2 of the effective potential
inline constexpr double d3W = 0.0, d4W = 0.0;
inline constexpr double delta_hyp = -0.25;
inline constexpr double delta_BF = -0.0625;
inline constexpr double a0 = 1.0;
inline constexpr double X0 = 4.44288293815836625;  // pi sqrt 2
}  // namespace ref010
// Defocusing model at (0, 1, 0): endstate is a saddle, not a minimum.
namespace refd010 {
inline constexpr double d2W = -1.0;  // diagnostic value carried by the error
}  // namespace refd010
// Defocusing model at (0, 1, 1): nondegenerate harmonic point.
namespace refd011 {
inline constexpr double mu_phi0 = 2.0, omega_phi0 = 2.0, mu_x0 = 2.5;
inline constexpr double d2W = 1.0, d3W = -6.0, d4W = 24.0;
inline constexpr double delta_hyp = 0.25;
inline constexpr double delta_BF = 0.625;
inline constexpr double a0 = 4.0;
inline constexpr double X0 = 4.44288293815836625;  // pi sqrt 2
}  // namespace refd011
// Defocusing model at (0, 1, 4/5).
namespace refd0108 {
inline constexpr double d2W = 0.28;  // 7/25
inline constexpr double delta_BF = 0.3649;
}  // namespace refd0108
}  // namespace harmonic

// Integer fixture for the quartic-pencil coefficient extractor:
// H as below, (s1, s2, s3) = (2, -3, 5).  All other coefficients vanish.
namespace pencil_int {
inline constexpr std::array<std::array<double, 4>, 4> H = {{
    {2, -1, 3, 0},
    {-1, 4, -2, 1},
    {3, -2, -5, 2},
    {0, 1, 2, -3},
}};
inline constexpr double s1 = 2.0, s2 = -3.0, s3 = 5.0;
// Map (m, n, p) -> value.
inline constexpr double d040 = 1.0;
inline constexpr double d121 = 4.0;
inline constexpr double d130 = 6.0;
inline constexpr double d202 = -6.0;
inline constexpr double d211 = -38.0;
inline constexpr double d220 = -4.0;
inline constexpr double d301 = -205.0;
inline constexpr double d310 = -76.0;
inline constexpr double d400 = 188.0;
}  // namespace pencil_int

}  // namespace fx
