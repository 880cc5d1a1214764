#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pseudoh {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define PSEUDOH_ERROR(Name)              \
    struct Name : Error {                \
        using Error::Error;              \
    }

PSEUDOH_ERROR(DimensionMismatch);
PSEUDOH_ERROR(UnknownSignature);
PSEUDOH_ERROR(NonPositiveScale);
PSEUDOH_ERROR(NonPositiveArgument);
PSEUDOH_ERROR(NonSPDQuadraticForm);
PSEUDOH_ERROR(NonSeparableQuadraticForm);
PSEUDOH_ERROR(SingularAffineMap);
PSEUDOH_ERROR(ThetaZero);
PSEUDOH_ERROR(OnConeRegion);
PSEUDOH_ERROR(UnsupportedN);
PSEUDOH_ERROR(PolePosition);
PSEUDOH_ERROR(OddN);
PSEUDOH_ERROR(NonTimelikeEta);
PSEUDOH_ERROR(BumpOutsideK);

#undef PSEUDOH_ERROR

inline void require_dim(long got, long want, const char* what) {
    if (got != want)
        throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(want) +
                                ", got " + std::to_string(got));
}

// P(x) = sum_{j<n} x_j^2 - x_{j+n}^2
template <class V>
auto quad_p(const V& x) {
    const long n = x.size() / 2;
    return x.head(n).squaredNorm() - x.tail(n).squaredNorm();
}

inline Mat tau_matrix(int n) {
    Vec d(2 * n);
    d.head(n).setOnes();
    d.tail(n).setConstant(-1.0);
    return d.asDiagonal();
}

}  // namespace pseudoh
