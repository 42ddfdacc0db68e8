#pragma once

#include <array>

// Frozen output of tests/oracles/qtrig_reference.py (40-digit mpmath, direct
// term-by-term summation). Zeros are in the combined argument z.
namespace qwd::reference {

inline constexpr std::array<double, 7> kSineZerosQ05 = {
    1.8333658357818809767, 3.9965190982836478457, 7.9999961343963379479, 15.999999999756840826,
    31.999999999999999066, 64.0, 128.0};
inline constexpr std::array<double, 7> kCosineZerosQ05 = {
    0.92703521218567767304, 2.79448944660840418, 5.6566864948482557734, 11.313708455403147614,
    22.627416997968845828, 45.254833995939041561, 90.509667991878083123};

inline constexpr std::array<double, 7> kSineZerosQ03 = {
    3.2836451564992757326, 11.111071298876462376, 37.03703703679916899, 123.45679012345679011,
    411.52263374485596708, 1371.7421124828532236, 4572.473708276177412};
inline constexpr std::array<double, 7> kCosineZerosQ03 = {
    1.5053958091481760151, 6.0831948810555845305, 20.286020470098030906, 67.620068827798190558,
    225.40022942599428537, 751.33409808664761791, 2504.4469936221587264};

inline constexpr std::array<double, 7> kSineZerosQ07 = {
    1.0152520146641874281, 1.9568424391477980634, 2.9109201455083955269, 4.1648873710598115334,
    5.9499017427650789381, 8.4998597522787677865, 12.142656789020120589};
inline constexpr std::array<double, 7> kCosineZerosQ07 = {
    0.51327391388888556813, 1.4966181914967233909, 2.4153048884686628631, 3.484079077242252892,
    4.9780426911536887331, 7.1114928838360070741, 10.159275551295331841};

struct SeriesPoint {
    double q;
    double z;
    double cos_value;
    double sin_value;
};

inline constexpr std::array<SeriesPoint, 4> kSeriesPoints = {{
    {0.5, 0.37, 0.82125742158431394975, 0.70177002754052005819},
    {0.5, 3.7, 5.5415356033397299488, -2.3745843705313384225},
    {0.5, 20.5, 94836.33257474465872, 234962.27393543183461},
    {0.7, 10.0, 56903.313675940421462, 444074.02974821339371},
}};

// Free problem, q = 0.5, omega = 0.5, a = pi.
// Dirichlet-type pair: y1(omega0) = 0, y2(h^{-1}(pi)) = 0.
inline constexpr std::array<double, 7> kEigenCosFamily = {
    0.61217326631786386777, 1.8453578782489924202, 3.735426877607988626, 7.4710752820087781914,
    14.94215062157586981, 29.884301243152631039, 59.768602486305262078};
// y2(omega0) = 0, y2(h^{-1}(pi)) = 0.
inline constexpr std::array<double, 7> kEigenSinFamily = {
    1.2106741332942802402, 2.6391253731665136104, 5.2828454623391202975, 10.565696029866827201,
    21.131392060054797024, 42.262784120109595282, 84.525568240219190564};

}  // namespace qwd::reference
