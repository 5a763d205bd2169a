#ifndef MAZER_SMATRIX_HPP
#define MAZER_SMATRIX_HPP

#include <mazer/channels.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace mazer {

/* numerically singular when the reciprocal condition number drops below this */
inline constexpr double singular_rcond = 1e-14;

class DegenerateInput : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class CompositionError : public std::runtime_error
{
public:
    CompositionError(const std::string& what, double rcond)
        : std::runtime_error(what + " (rcond = " + std::to_string(rcond) + ")"),
          m_rcond(rcond)
    {
    }

    double rcond() const { return m_rcond; }

private:
    double m_rcond;
};

/**
 * Scattering matrix of a region in the local dressed-mode basis.
 *
 * In each uniform region the two-component wavefunction is
 *
 *     psi(z) = sum_j e_j ( A_j exp(i k_j z) + B_j exp(-i k_j z) )
 *
 * with Im k_j >= 0, so A waves travel (or decay) to the right and B waves to
 * the left. The 4x4 matrix maps incoming amplitudes (A on the left side, B on
 * the right side) to outgoing ones (B on the left side, A on the right side):
 *
 *     [ B_left  ]   [ r_left     t_backward ] [ A_left  ]
 *     [ A_right ] = [ t_forward  r_right    ] [ B_right ]
 *
 * Amplitudes are referenced to the region's own left and right edges.
 */
class SMatrix
{
public:
    using Block = Eigen::Matrix2cd;
    using Matrix = Eigen::Matrix4cd;

    SMatrix() : m_data(transparent_matrix()) {}
    explicit SMatrix(const Matrix& data) : m_data(data) {}

    /// Neutral element of the star product: a region of zero thickness.
    static SMatrix transparent() { return SMatrix(); }

    const Matrix& matrix() const { return m_data; }

    Block r_left() const { return m_data.topLeftCorner<2, 2>(); }
    Block t_backward() const { return m_data.topRightCorner<2, 2>(); }
    Block t_forward() const { return m_data.bottomLeftCorner<2, 2>(); }
    Block r_right() const { return m_data.bottomRightCorner<2, 2>(); }

    static SMatrix from_blocks(const Block& r_left, const Block& t_backward,
                               const Block& t_forward, const Block& r_right)
    {
        Matrix m;
        m << r_left, t_backward, t_forward, r_right;
        return SMatrix(m);
    }

    bool is_finite() const { return m_data.allFinite(); }

private:
    static Matrix transparent_matrix()
    {
        Matrix m = Matrix::Zero();
        m.topRightCorner<2, 2>().setIdentity();
        m.bottomLeftCorner<2, 2>().setIdentity();
        return m;
    }

    Matrix m_data;
};

/**
 * Redheffer star product: `first` on the left, `second` on the right.
 * Throws CompositionError if the multiple-reflection operator is singular.
 */
inline SMatrix star_product(const SMatrix& first, const SMatrix& second)
{
    using Block = SMatrix::Block;
    const Block a11 = first.r_left();
    const Block a12 = first.t_backward();
    const Block a21 = first.t_forward();
    const Block a22 = first.r_right();
    const Block b11 = second.r_left();
    const Block b12 = second.t_backward();
    const Block b21 = second.t_forward();
    const Block b22 = second.r_right();

    const Block id = Block::Identity();
    const Eigen::PartialPivLU<Block> lu_fwd(id - a22 * b11);
    const Eigen::PartialPivLU<Block> lu_bwd(id - b11 * a22);
    const double rcond = std::min(lu_fwd.rcond(), lu_bwd.rcond());
    if (!(rcond > singular_rcond)) {
        throw CompositionError("singular star product", rcond);
    }

    /* internal right-going and left-going waves between the two regions */
    const Block fwd = lu_fwd.solve(a21);
    const Block fwd_b = lu_fwd.solve(Block(a22 * b12));
    const Block bwd = lu_bwd.solve(b12);
    const Block bwd_a = lu_bwd.solve(Block(b11 * a21));

    return SMatrix::from_blocks(a11 + a12 * bwd_a, a12 * bwd, b21 * fwd,
                                b22 + b21 * fwd_b);
}

/// Uniform region of the given length; only decaying or oscillating factors.
inline SMatrix propagation_smatrix(const SegmentEigensystem& eig, double length)
{
    if (!(length >= 0.0) || !std::isfinite(length)) {
        throw InvalidParameter("segment length must be finite and >= 0");
    }
    SMatrix::Block phase = SMatrix::Block::Zero();
    for (int j = 0; j < 2; ++j) {
        const complex k = eig.local_wavenumbers[j];
        /* exp(i k l) = exp(-Im k l) exp(i Re k l), Im k >= 0 */
        phase(j, j) = std::exp(complex(0.0, 1.0) * k * length);
    }
    const SMatrix::Block zero = SMatrix::Block::Zero();
    return SMatrix::from_blocks(zero, phase, phase, zero);
}

/**
 * Interface between two uniform regions. Both wavefunction components and
 * their first derivatives are continuous across it.
 */
inline SMatrix interface_smatrix(const SegmentEigensystem& left,
                                 const SegmentEigensystem& right)
{
    using Block = SMatrix::Block;
    const Block overlap = (left.basis().transpose() * right.basis()).cast<complex>();
    Block k_left = Block::Zero();
    Block k_right = Block::Zero();
    for (int j = 0; j < 2; ++j) {
        k_left(j, j) = left.local_wavenumbers[j];
        k_right(j, j) = right.local_wavenumbers[j];
    }
    const Block id = Block::Identity();

    /*
     * A_l + B_l = W (A_r + B_r)
     * K_l (A_l - B_l) = W K_r (A_r - B_r)
     * solved for the outgoing (B_l, A_r).
     */
    SMatrix::Matrix lhs;
    lhs << id, -overlap, -k_left, -overlap * k_right;
    SMatrix::Matrix rhs;
    rhs << -id, overlap, -k_left, -overlap * k_right;

    const Eigen::PartialPivLU<SMatrix::Matrix> lu(lhs);
    const double rcond = lu.rcond();
    if (!(rcond > singular_rcond)) {
        throw DegenerateInput("interface matching is singular (channel at "
                              "threshold), rcond = " + std::to_string(rcond));
    }
    return SMatrix(lu.solve(rhs));
}

} // namespace mazer

#endif
