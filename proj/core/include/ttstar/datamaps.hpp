#pragma once

#include <span>
#include <vector>

// Asymptotic data (gamma, rho) <-> monodromy data (m, log e) in reduced
// coordinates, the global-solution constraint and the generating function F.
//
// Reduced lists have length L = floor((n-1)/2) + 1. The full list of n+1 entries
// is (v_0..v_k, -v_k..-v_0) for odd n and (v_0..v_k, 0, -v_k..-v_0) for even n.
//
// The Gamma products X_k are evaluated on the full list of -gamma (equivalently
// 2m). This is the convention under which e^R = 1 singles out solutions that are
// smooth on (0, inf) and under which F generates the map exactly.

namespace ttstar::datamaps {

inline constexpr double kDefaultMargin = 1e-9;

struct AsymptoticData {
  int n = 0;
  std::vector<double> gamma;
  std::vector<double> rho;
};

struct MonodromyData {
  int n = 0;
  std::vector<double> m;
  std::vector<double> log_e;
};

struct ResidualReport {
  double max_residual = 0.0;
  int worst_index = -1;  // row index (or i*L+j for matrices) of the largest residual
};

int reduced_size(int n);

std::vector<double> expand_full(int n, std::span<const double> reduced);

// X_k as a product of Gamma values; log_x_k is its logarithm.
double x_k(int k, std::span<const double> gamma_full, int n);
double log_x_k(int k, std::span<const double> gamma_full, int n);

// Throws GenericityError unless every gap of the periodic full list lies in (-2+margin, 2-margin).
void check_generic(int n, std::span<const double> gamma, double margin = kDefaultMargin);

// Distance of the worst periodic gap from +-2.
double genericity_slack(int n, std::span<const double> gamma);

MonodromyData asymptotic_to_monodromy(const AsymptoticData& a, double margin = kDefaultMargin);
AsymptoticData monodromy_to_asymptotic(const MonodromyData& md, double margin = kDefaultMargin);

// rho with log e = 0.
std::vector<double> global_rho(int n, std::span<const double> gamma, double margin = kDefaultMargin);

// ln X_{n-i} - ln X_i at the full list of -gamma, i = 0..L-1.
std::vector<double> connection_terms(int n, std::span<const double> gamma);

double gen_fun_F(int n, std::span<const double> rho, std::span<const double> m);

// max_i |dF/dm_i + log e_i| with dF/dm_i by central differences.
ResidualReport verify_generating_function(int n, std::span<const double> gamma, std::span<const double> rho,
                                          double h = 1e-4);

// max |A_ij - A_ji| with A_ij = d/dgamma_j of connection_terms()[i].
ResidualReport verify_symplectic(int n, std::span<const double> gamma, double h = 1e-4);

}  // namespace ttstar::datamaps
