#include "momentfield/hopf.hpp"

#include <cmath>
#include <complex>

#include "momentfield/errors.hpp"
#include "momentfield/fd.hpp"

namespace mf {

namespace {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Fn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// directional second difference: F(x0 + h u) - 2 F(x0) + F(x0 - h u) over h^2
RVec second_diff(const Fn& F, const RVec& x0, const RVec& u, double h) {
    return (F(x0 + h * u) - 2.0 * F(x0) + F(x0 - h * u)) / (h * h);
}

// directional third difference
RVec third_diff(const Fn& F, const RVec& x0, const RVec& u, double h) {
    return (F(x0 + 2 * h * u) - 2.0 * F(x0 + h * u) + 2.0 * F(x0 - h * u) - F(x0 - 2 * h * u)) /
           (2 * h * h * h);
}

RVec richardson(const RVec& coarse, const RVec& fine) { return (4.0 * fine - coarse) / 3.0; }

// symmetric bilinear form B(u, v) by polarization of second differences
RVec B_real(const Fn& F, const RVec& x0, const RVec& u, const RVec& v, double h) {
    const RVec d1c = second_diff(F, x0, u + v, h), d1f = second_diff(F, x0, u + v, h / 2);
    const RVec d2c = second_diff(F, x0, u - v, h), d2f = second_diff(F, x0, u - v, h / 2);
    return 0.25 * (richardson(d1c, d1f) - richardson(d2c, d2f));
}

// symmetric trilinear form C(u, v, w) by full polarization of third differences
RVec C_real(const Fn& F, const RVec& x0, const RVec& u, const RVec& v, const RVec& w, double h) {
    RVec acc = RVec::Zero(x0.size());
    for (int su = -1; su <= 1; su += 2)
        for (int sv = -1; sv <= 1; sv += 2)
            for (int sw = -1; sw <= 1; sw += 2) {
                const RVec dir = su * u + sv * v + sw * w;
                const RVec c = third_diff(F, x0, dir, h), f = third_diff(F, x0, dir, h / 2);
                acc += (su * sv * sw) * richardson(c, f);
            }
    return acc / 24.0;
}

CVec B_cplx(const Fn& F, const RVec& x0, const CVec& u, const CVec& v, double h) {
    const RVec ur = u.real(), ui = u.imag(), vr = v.real(), vi = v.imag();
    const RVec rr = B_real(F, x0, ur, vr, h), ii = B_real(F, x0, ui, vi, h);
    const RVec ri = B_real(F, x0, ur, vi, h), ir = B_real(F, x0, ui, vr, h);
    return (rr - ii).cast<Cplx>() + Cplx(0, 1) * (ri + ir).cast<Cplx>();
}

CVec C_cplx(const Fn& F, const RVec& x0, const CVec& u, const CVec& v, const CVec& w, double h) {
    CVec acc = CVec::Zero(x0.size());
    const RVec ur = u.real(), ui = u.imag();
    const RVec vr = v.real(), vi = v.imag();
    const RVec wr = w.real(), wi = w.imag();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                Cplx fac(1.0, 0.0);
                if (a) fac *= Cplx(0, 1);
                if (b) fac *= Cplx(0, 1);
                if (c) fac *= Cplx(0, 1);
                acc += fac * C_real(F, x0, a ? ui : ur, b ? vi : vr, c ? wi : wr, h)
                                 .cast<Cplx>();
            }
    return acc;
}

Cplx inner(const CVec& p, const CVec& q) { return (p.conjugate().transpose() * q)(0, 0); }

}  // namespace

double first_lyapunov_coefficient(const Fn& F, const RVec& x0, const Eigen::MatrixXd& J,
                                  double omega0) {
    const Eigen::Index d = x0.size();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(J.cast<Cplx>());
    // right eigenvector q for +i omega0, left eigenvector p with J^T p = -i omega0 p
    Eigen::Index iq = 0, ip = 0;
    double bq = 1e300, bp = 1e300;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> esT(J.transpose().cast<Cplx>());
    for (Eigen::Index k = 0; k < d; ++k) {
        const double dq = std::abs(es.eigenvalues()[k] - Cplx(0, omega0));
        if (dq < bq) { bq = dq; iq = k; }
        const double dp = std::abs(esT.eigenvalues()[k] - Cplx(0, -omega0));
        if (dp < bp) { bp = dp; ip = k; }
    }
    CVec q = es.eigenvectors().col(iq);
    CVec p = esT.eigenvectors().col(ip);
    p /= std::conj(inner(p, q));  // <p, q> = 1

    const double h = 1e-3;
    const CVec qb = q.conjugate();
    const CVec Cqqqb = C_cplx(F, x0, q, q, qb, h);
    const CVec Bqqb = B_cplx(F, x0, q, qb, h);
    const CVec Bqq = B_cplx(F, x0, q, q, h);

    const Eigen::MatrixXcd Jc = J.cast<Cplx>();
    const CVec r1 = Jc.partialPivLu().solve(Bqqb);
    const Eigen::MatrixXcd shift =
        Cplx(0, 2 * omega0) * Eigen::MatrixXcd::Identity(d, d) - Jc;
    const CVec r2 = shift.partialPivLu().solve(Bqq);

    const Cplx total = inner(p, Cqqqb) - 2.0 * inner(p, B_cplx(F, x0, q, r1, h)) +
                       inner(p, B_cplx(F, x0, qb, r2, h));
    return total.real() / (2.0 * omega0);
}

HopfReport hopf_genericity(const NetworkConfig& net) {
    if (net.M != 1) throw EvalError("hopf_genericity: one-population configs only");
    const double w = net.w(0, 0);
    const double I = net.inputs[0];
    const double alpha = net.alpha[0];
    const double N = net.discrete() ? net.sizes[0] : 1.0 / net.n;
    const auto& f = net.f(0);
    const double f0 = f.deriv(0, I), f1 = f.deriv(1, I), f2 = f.deriv(2, I),
                 f3 = f.deriv(3, I);

    if (std::abs(f0) > 1e-8) throw EvalError("not a Hopf candidate: f(I) != 0");
    if (!(f2 < -1e-12))
        throw EvalError("not a Hopf candidate: need f''(I) < 0 (determinant non-positive)");
    if (std::abs(alpha - w * f1) > 1e-8 * std::max(1.0, std::abs(alpha)))
        throw EvalError("not a Hopf candidate: alpha != w f'(I)");

    HopfReport rep;
    rep.omega0_closed_form = std::sqrt(-f1 * f2 * w * w * w / N);

    // numeric eigenvalue pair at the origin of the planar BCC system
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
    const auto F = [&](const Eigen::VectorXd& x) {
        return rhs_flat(ModelVariant::BCC, x, net);
    };
    const Eigen::MatrixXd J = fd_jacobian_hi(F, x0);
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(J).eigenvalues();
    rep.omega0_numeric = std::abs(ev[0].imag()) > std::abs(ev[1].imag())
                             ? std::abs(ev[0].imag())
                             : std::abs(ev[1].imag());

    // transversality d mu / d alpha by central differences on the eigenvalue pair
    NetworkConfig na = net;
    const double ha = 1e-6 * std::max(1.0, std::abs(alpha));
    na.alpha[0] = alpha + ha;
    const auto Fa = [&](const Eigen::VectorXd& x) {
        return rhs_flat(ModelVariant::BCC, x, na);
    };
    const Eigen::MatrixXd Jp = fd_jacobian_hi(Fa, x0);
    na.alpha[0] = alpha - ha;
    const Eigen::MatrixXd Jm = fd_jacobian_hi(Fa, x0);
    const auto max_re = [](const Eigen::MatrixXd& A) {
        const Eigen::VectorXcd e = Eigen::EigenSolver<Eigen::MatrixXd>(A).eigenvalues();
        return 0.5 * (e[0].real() + e[1].real());
    };
    rep.transversality = (max_re(Jp) - max_re(Jm)) / (2 * ha);

    // closed form l1(0), Appendix-C expression
    const double om = rep.omega0_closed_form;
    rep.l1_closed_form = w * w * N / (2 * om * f1 * f1) *
                         (f3 * f1 * (1 + 1 / om) + f2 * f2 * (2 / om - 14.0 / 3.0));

    rep.l1_generic = first_lyapunov_coefficient(F, x0, J, rep.omega0_numeric);

    const double crit = rep.l1_generic;
    rep.criticality = std::abs(crit) < 1e-12
                          ? HopfCriticality::Degenerate
                          : (crit < 0 ? HopfCriticality::Supercritical
                                      : HopfCriticality::Subcritical);
    return rep;
}

}  // namespace mf
