// frozen_values.hpp - Reference values from 50-digit mpmath evaluation
// Regenerate with tests/oracles/generate_oracles.py.

#pragma once

namespace oracle {

struct DecoherencePoint {
    double kappa_bar, delta_bar, tau;
    double gamma, phi, gamma_rate;
};

inline constexpr DecoherencePoint exponential_points[] = {
    {0.01, 5, 30, 3.1363745399287293586e-4, 0.060210823687320849858, -1.057254811144171776e-3},
    {0.1, 1, 10, 0.22993993040086341575, 0.98386407287451740718, -6.8580659146036945169e-3},
    {1, 0, 1, 0.3678794411714423216, 0.0, 0.6321205588285576784},
    {1, 1, 2.5, 1.2254372074373924849, 0.71711906371014232031, 0.55744372885246519482},
    {5, 5, 7, 3.500000000000000027, 3.399999999999999943, 0.50000000000000014991},
    {0.5, 2, 50, 3.0449826989610838857, 11.709342560555026245, 0.058823529409405567854},
};

inline constexpr DecoherencePoint modulated_points[] = {
    {0.01, 5, 30, 4.5949243892350475674e-4, 0.062446426683837128807, 4.6311566579781908274e-5},
    {0.1, 1, 10, 1.861992400324713119, 0.24415268991982691286, 0.32549538012787490756},
    {1, 0, 1, 0.34522006217344390078, 0.0, 0.55539688265334962891},
    {1, 1, 2.5, 1.1059424985270370841, 0.42658555067424089651, 0.54088640012448112284},
    {5, 5, 7, 3.56257816745353039, 3.3288284046637242347, 0.50979608156737318706},
    {0.5, 2, 50, 5.8212417823216770013, 13.885288531777938694, 0.11351351351050838658},
};

inline constexpr double exponential_kernel_at_one = 0.3678794411714423216;
inline constexpr double alpha_k1_d1_z100_re = 0.5;
inline constexpr double alpha_k1_d1_z100_im = 0.5;
inline constexpr double alpha_k1_d0_z100_re = 1.0;
inline constexpr double f_nu_pi3_gamma_half = 0.068977395219645435299;

} // namespace oracle
