#pragma once

// Default tolerances and thresholds for every reported claim.
// The CLI's --tol flag overrides the per-entry tolerance where one applies.

namespace bcv::tolerances {

inline constexpr double sup_C_target = 0.9827;
inline constexpr double sup_C = 3e-3;
inline constexpr double sup_below = 0.99;

inline constexpr double sup_C_tilde_reported = 0.9792;  // value quoted alongside the bound, compared only for the log

inline constexpr double theorem2_target = 15.0477;
inline constexpr double theorem2 = 1e-3;
inline constexpr double theorem2_limit_gap = 1e-6;  // |H1(1e9) - constant|

inline constexpr double upper_bound = 74.8;  // strict
inline constexpr double upper_H1_lo = 74.5;

inline constexpr double K_7_2 = 2.8276;
inline constexpr double K_7_2_tol = 5e-4;

inline constexpr double omega_lo = 3.98;
inline constexpr double omega_hi = 4.00;
inline constexpr double sup_err_max = 0.80;
inline constexpr double ratio_min = 4.9;
inline constexpr double G_minus_g_lo = 0.78;
inline constexpr double G_minus_g_hi = 0.795;

inline constexpr double H_n_sup_max = 1.0;

inline constexpr double closed_form_rel = 1e-11;
inline constexpr double moment_rel = 1e-12;
inline constexpr double derivative_rel = 1e-9;
inline constexpr double orthogonality_rel = 1e-10;
inline constexpr double lemma5 = 1e-12;

inline constexpr double mc_sigmas = 4.0;

}  // namespace bcv::tolerances
