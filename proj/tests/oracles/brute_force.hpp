#ifndef TLAB_TESTS_BRUTE_FORCE_HPP
#define TLAB_TESTS_BRUTE_FORCE_HPP

// Reference values computed by exhaustive grids over closed-form geometry.
// Nothing here calls into the library, so the numbers can serve as fixtures.

#include <array>
#include <vector>

namespace oracle {

/// min over a = s e1, b = t (cos theta, sin theta), 0 < |s|, |t| <= rho on an
/// (2 steps + 1)^2 grid of max{ d(u, N_A(a)), d(-u, N_B(b)) }, u = (b - a)/|b - a|.
double two_lines_itrhat1(double theta, double rho, int steps);

/// Same grid, max of min{ <u, n_A>, <-u, n_B> } over unit normals n_A, n_B.
double two_lines_itrhat2(double theta, double rho, int steps);

// The two-parameter oracles below scan a (grid+1)^2 grid and then `rounds`
// finer grids around the incumbent.

/// Disk of radius 1 centred at (0,1) and the horizontal axis: minimum of
/// max{d(x,A), d(x,B)} / |x| over polar coordinates of the shell factor*rho < |x| <= rho.
double tangential_str(double rho, double factor, int grid, int rounds);

/// Same disk and axis: min over a on the boundary arc (|a| <= rho) and b on the
/// axis (|b| <= rho) of max{ d(u, N_A(a)), d(-u, N_B(b)) }, u = (b - a)/|b - a|.
double tangential_itrhat1(double rho, int grid, int rounds);

/// A = {q = 1} u {origin}, B = horizontal axis; str ratio over the shell.
double stall_str(double rho, double factor, int grid, int rounds);

/// Iterate after each full cycle P_A P_B for two lines through the origin,
/// A the horizontal axis, B at angle theta, starting at x0.
std::vector<std::array<double, 2>> two_lines_cycles(double theta, std::array<double, 2> x0, int cycles);

}  // namespace oracle

#endif  // TLAB_TESTS_BRUTE_FORCE_HPP
