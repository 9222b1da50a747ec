#pragma once

#include <array>

// Values produced by tests/oracles/generate_golden.py (mpmath, sympy and numpy,
// independent of the library) and frozen here.
namespace wqed::golden {

inline constexpr double kSingleAtZero = 0.73084797353905110499;  // k=0, chi=0.5, k0=1.2
inline constexpr double kPairAtZero = 1.46169594707810221;       // K=0, q=0
inline constexpr double kPairChiral = 2.6158765284309333935;     // K=0.3, q=0.8, Gamma_R=1

// K=0.2, omega=1, k0=1.2, chi=0.5: c4..c0
inline constexpr std::array<double, 5> kQuartic = {
    1.0, -3.2474596123331179993, 3.7182609180255810195, -3.2474596123331179993, 1.0};

inline constexpr double kChiralZ = 0.070737201667702910088;  // K=0.3, Gamma_R=0
inline constexpr double kChiralOmega = 0.14182968860530489758;
inline constexpr double kSpecialZ = 0.36235775447667357764;  // K=0, k0=1.2
inline constexpr double kSpecialOmega = 0.77755913873640982327;

// N=6, K=0.2, k0=1.2, chi=0.5, row Delta=1
inline constexpr std::array<std::array<double, 2>, 6> kLatticeRow1 = {{
    {0.622142788490793307, -0.32081541139209973},
    {0.548232475221317925, 0.384991934586382189},
    {-0.0718917780993314739, 0.618223459784581328},
    {-0.516196720149035108, 0.221344439067307066},
    {-0.406442861645447386, -0.281401945090159302},
    {-0.00571510323874401813, -0.430520211022541011},
}};
inline constexpr std::array<double, 2> kLattice46 = {0.845435910893543555, 1.0303517440422097};
inline constexpr std::array<double, 2> kLattice55 = {0.223293122402750247, -0.648832844565690571};

// K=0.2, k0=1.2, chi=0.5, grid 4001, 20 bins on [-5, 5]
inline constexpr std::array<double, 20> kDos = {
    0.00745626613134, 0.00975050186407, 0.0120447375968, 0.0166332090622, 0.022368798394,
    0.0338399770576,  0.0579294522512,  0.1261829653,    0.342127903642,  0.00688270719816,
    0.00745626613134, 0.00688270719816, 0.00688270719816, 0.197304273014, 0.0556352165185,
    0.0321193002581,  0.0217952394609,  0.0154860911959, 0.0120447375968, 0.00917694293089};

// Gap bound state, K=1.5, k0=1.2, chi=0.5
inline constexpr double kBoundOmega = -1.93532231908117;
inline constexpr double kBoundZ1 = -0.866045958211529;
inline constexpr double kBoundZ2 = 0.791180471113799;

}  // namespace wqed::golden
