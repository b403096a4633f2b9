// Generated by tests/oracles/gen_fixtures.py. Do not edit.
#pragma once

#include <array>

namespace fixtures {

struct Rec { double x, y; int z, e; };
inline constexpr std::array<Rec, 5> kRecords = {{
    {0.0, 0.0, 0, 0},
    {0.0, 0.0, 0, 1},
    {0.35, 0.0, 1, 0},
    {0.0, 0.42, 0, 1},
    {0.6, 0.25, 1, 1},
}};

struct ToxCase { double rho00, rho10, rho01, alpha3, log_post; };
inline constexpr std::array<ToxCase, 4> kToxLogPost = {{
    {0.05, 0.3, 0.25, 1.0, -4.9353681649244745},
    {0.01, 0.5, 0.2, 0.1, -2.8333897931066581},
    {0.0001, 0.1, 0.6, 4.0, -9.396730868031872},
    {0.2, 0.45, 0.35, 0.5, -3.7739222479990571},
}};

struct EffCase { double beta[6]; double log_post; };
inline constexpr std::array<EffCase, 3> kEffLogPost = {{
    {{-1.0, 0.5, 0.7, 1.2, 0.0, 0.0}, -21.254980429415877},
    {{-2.5, 2.0, 0.3, 0.05, 1.5, -0.5}, -25.784574815475828},
    {{0.4, 0.01, 3.0, 2.0, -1.0, 2.0}, -17.679409776728399},
}};

struct SafetyCase { int n, s; double prob; };
inline constexpr std::array<SafetyCase, 13> kStage2Overdose = {{
    {0, 0, 0.54471025692950847},
    {1, 0, 0.22953524452695778},
    {1, 1, 0.85988526933205911},
    {2, 1, 0.58883475866586554},
    {5, 2, 0.45610587724120971},
    {10, 4, 0.43061879538551912},
    {12, 7, 0.85806449610909574},
    {20, 8, 0.39749767762214699},
    {30, 5, 0.0010894936615127508},
    {30, 20, 0.99548209033755553},
    {45, 20, 0.58011178475310854},
    {60, 25, 0.41978048138624224},
    {60, 40, 0.99988850300189047},
}};

struct QuantileCase { double p, q; };
inline constexpr std::array<QuantileCase, 20> kNormalQuantile = {{
    {1e-300, -37.047096299361201},
    {1e-100, -21.273453560965326},
    {9.9999999999999995e-21, -9.262340089798407},
    {1e-10, -6.3613409024040566},
    {9.9999999999999995e-08, -5.1993375821928165},
    {1.0000000000000001e-05, -4.2648907939228247},
    {0.001, -3.0902323061678136},
    {0.024250000000000001, -1.9729610513118849},
    {0.050000000000000003, -1.6448536269514726},
    {0.20000000000000001, -0.84162123357291418},
    {0.33000000000000002, -0.43991316567323374},
    {0.42499999999999999, -0.18911842627279252},
    {0.5, 0},
    {0.57499999999999996, 0.18911842627279238},
    {0.80000000000000004, 0.84162123357291441},
    {0.94999999999999996, 1.6448536269514722},
    {0.97575000000000001, 1.9729610513118849},
    {0.999, 3.0902323061678132},
    {0.99999990000000005, 5.1993375822906609},
    {0.99999999999900002, 7.0344869100478356},
}};

struct CurveMaxCase { int tox, eff, h1; double max_pi_e; double x_lo; };
inline constexpr std::array<CurveMaxCase, 16> kTrueCurveMax = {{
    {1, 1, 0, 0.14599321370948093, 0.012657399785992098},
    {1, 1, 1, 0.39597705829733815, 0.012657399785992098},
    {1, 2, 0, 0.14599321371223295, 0.012657399785992098},
    {1, 2, 1, 0.39597705830196911, 0.012657399785992098},
    {1, 3, 0, 0.14448490062117891, 0.012657399785992098},
    {1, 3, 1, 0.39728367563376876, 0.012657399785992098},
    {1, 4, 0, 0.1427574430124286, 0.012657399785992098},
    {1, 4, 1, 0.39434485936715458, 0.012657399785992098},
    {2, 1, 0, 0.14808240868582745, 0.1764827258283099},
    {2, 1, 1, 0.40334702086643293, 0.1764827258283099},
    {2, 2, 0, 0.14801804761707066, 0.1764827258283099},
    {2, 2, 1, 0.40323921039190852, 0.1764827258283099},
    {2, 3, 0, 0.14768914759557161, 0.1764827258283099},
    {2, 3, 1, 0.40268789848532349, 0.1764827258283099},
    {2, 4, 0, 0.14284410373507189, 0.1764827258283099},
    {2, 4, 1, 0.39064884832056934, 0.1764827258283099},
}};

}  // namespace fixtures
