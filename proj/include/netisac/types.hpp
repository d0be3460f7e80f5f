#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace netisac
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLog2E = 1.44269504088896340736;

/// Thrown when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

inline double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

/// Zero power maps to the export floor of -300 dBW.
inline double watts_to_dbw(double watts)
{
    constexpr double floor_dbw = -300.0;
    if (!(watts > 0.0))
        return floor_dbw;
    const double dbw = 10.0 * std::log10(watts);
    return dbw < floor_dbw ? floor_dbw : dbw;
}

} // namespace netisac
