#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nhse {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hopping amplitude that the caller divides by vanished (|W| = 0).
/// `site` is the 1-based index of the offending amplitude.
class PoleError : public Error {
public:
    PoleError(const std::string& what, long site) : Error(what), site_(site) {}
    long site() const noexcept { return site_; }

private:
    long site_;
};

} // namespace nhse
