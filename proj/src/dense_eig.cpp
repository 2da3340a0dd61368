#include "riesz/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riesz {

namespace {

constexpr double kEps = 2.220446049250313e-16;

// Diagonal power-of-two balancing; returns the scale factors.
std::vector<double> balance_in_place(CMatrix& A) {
    const int n = A.n;
    std::vector<double> d(n, 1.0);
    for (int sweep = 0; sweep < 8; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            double r = 0, c = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                r += std::abs(A(i, j));
                c += std::abs(A(j, i));
            }
            if (r == 0 || c == 0) continue;
            double f = 1.0;
            const double s = r + c;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= 2.0 * r) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (f != 1.0 && (r + c) < 0.95 * s) {
                changed = true;
                d[i] *= f;
                const double inv = 1.0 / f;
                for (int j = 0; j < n; ++j) A(i, j) *= inv;
                for (int j = 0; j < n; ++j) A(j, i) *= f;
            }
        }
        if (!changed) break;
    }
    return d;
}

// Householder reduction to upper Hessenberg, accumulating the similarity in Q.
void hessenberg(CMatrix& A, CMatrix& Q) {
    const int n = A.n;
    Q = CMatrix(n);
    for (int i = 0; i < n; ++i) Q(i, i) = 1.0;
    std::vector<cx> v(n);
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(A(i, k));
        if (scale == 0) continue;
        double norm2 = 0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = A(i, k) / scale;
            norm2 += std::norm(v[i]);
        }
        const double norm = std::sqrt(norm2);
        if (norm == 0) continue;
        cx alpha = v[k + 1];
        const double aa = std::abs(alpha);
        const cx phase = (aa == 0) ? cx{1, 0} : alpha / aa;
        const cx beta = -phase * norm;
        v[k + 1] -= beta;
        double vnorm2 = 0;
        for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0) continue;
        const double tau = 2.0 / vnorm2;
        // A <- (I - tau v v^H) A
        for (int j = k; j < n; ++j) {
            cx s{0, 0};
            for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * A(i, j);
            s *= tau;
            for (int i = k + 1; i < n; ++i) A(i, j) -= s * v[i];
        }
        // A <- A (I - tau v v^H)
        for (int i = 0; i < n; ++i) {
            cx s{0, 0};
            for (int j = k + 1; j < n; ++j) s += A(i, j) * v[j];
            s *= tau;
            for (int j = k + 1; j < n; ++j) A(i, j) -= s * std::conj(v[j]);
        }
        // Q <- Q (I - tau v v^H)
        for (int i = 0; i < n; ++i) {
            cx s{0, 0};
            for (int j = k + 1; j < n; ++j) s += Q(i, j) * v[j];
            s *= tau;
            for (int j = k + 1; j < n; ++j) Q(i, j) -= s * std::conj(v[j]);
        }
        A(k + 1, k) = beta * scale;
        for (int i = k + 2; i < n; ++i) A(i, k) = 0;
    }
}

// c real, |c|^2 + |s|^2 = 1 with [c, s; -conj(s), c] [x; y] = [r; 0]
void make_givens(cx x, cx y, double& c, cx& s) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ay == 0) {
        c = 1.0;
        s = {0, 0};
        return;
    }
    const double r = std::hypot(ax, ay);
    c = ax / r;
    if (ax == 0) {
        s = std::conj(y) / ay;
    } else {
        s = (x / ax) * std::conj(y) / r;
    }
}

cx wilkinson_shift(const CMatrix& H, int hi) {
    const cx a = H(hi - 1, hi - 1), b = H(hi - 1, hi);
    const cx c = H(hi, hi - 1), d = H(hi, hi);
    const cx tr2 = 0.5 * (a + d);
    const cx disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
    const cx l1 = tr2 + disc, l2 = tr2 - disc;
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

// Explicit single-shift QR sweep on the active window [lo, hi]. The shift is
// subtracted on the window diagonal and restored afterwards; rotations stay
// inside the window block, so this is an exact similarity.
void qr_step(CMatrix& H, CMatrix& Q, int lo, int hi, cx shift) {
    const int n = H.n;
    std::vector<double> cs(hi);
    std::vector<cx> sn(hi);
    for (int i = lo; i <= hi; ++i) H(i, i) -= shift;
    // left pass: Givens elimination of the window subdiagonal
    for (int i = lo; i < hi; ++i) {
        double c;
        cx s;
        make_givens(H(i, i), H(i + 1, i), c, s);
        cs[i] = c;
        sn[i] = s;
        for (int j = i; j < n; ++j) {
            const cx t1 = H(i, j), t2 = H(i + 1, j);
            H(i, j) = c * t1 + s * t2;
            H(i + 1, j) = -std::conj(s) * t1 + c * t2;
        }
    }
    // right pass: R Q^H-conjugates, restoring Hessenberg form
    for (int i = lo; i < hi; ++i) {
        const double c = cs[i];
        const cx s = sn[i];
        const int top = std::min(i + 2, hi);
        for (int r = 0; r <= top; ++r) {
            const cx t1 = H(r, i), t2 = H(r, i + 1);
            H(r, i) = c * t1 + std::conj(s) * t2;
            H(r, i + 1) = -s * t1 + c * t2;
        }
        for (int r = 0; r < n; ++r) {
            const cx t1 = Q(r, i), t2 = Q(r, i + 1);
            Q(r, i) = c * t1 + std::conj(s) * t2;
            Q(r, i + 1) = -s * t1 + c * t2;
        }
    }
    for (int i = lo; i <= hi; ++i) H(i, i) += shift;
}

void schur_decompose(CMatrix& H, CMatrix& Q) {
    const int n = H.n;
    double hnorm = 0;
    for (const cx& e : H.a) hnorm += std::abs(e);
    hnorm = std::max(hnorm, 1e-300);
    const long max_total = 30L * n;
    long total = 0;
    int hi = n - 1;
    int since_deflation = 0;
    while (hi > 0) {
        // deflate negligible subdiagonals
        int lo = hi;
        while (lo > 0) {
            const double sub = std::abs(H(lo, lo - 1));
            if (sub <= kEps * (std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo))) ||
                sub <= kEps * kEps * hnorm) {
                H(lo, lo - 1) = 0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        cx shift = wilkinson_shift(H, hi);
        if (++since_deflation % 12 == 0) {
            // exceptional shift to break symmetry-induced stalls
            shift = H(hi, hi) + cx{0.75 * std::abs(H(hi, hi - 1)), 0.0};
        }
        qr_step(H, Q, lo, hi, shift);
        if (++total > max_total) throw QrError("dense_eigensystem: QR did not converge", hi);
    }
}

} // namespace

EigenSystem dense_eigensystem(const CMatrix& A0, bool balance) {
    const int n = A0.n;
    if (n == 0) return {};
    CMatrix H = A0;
    std::vector<double> d(n, 1.0);
    if (balance) d = balance_in_place(H);
    CMatrix Q;
    hessenberg(H, Q);
    schur_decompose(H, Q);

    double tnorm = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) tnorm = std::max(tnorm, std::abs(H(i, j)));
    const double smallden = std::max(kEps * tnorm, 1e-300);

    // order by (Re, Im)
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const cx a = H(i, i), b = H(j, j);
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    EigenSystem sys;
    sys.values.resize(n);
    sys.right.assign(n, {});
    sys.left.assign(n, {});
    std::vector<cx> x(n), w(n), vec(n);
    for (int oi = 0; oi < n; ++oi) {
        const int i = order[oi];
        const cx lambda = H(i, i);
        sys.values[oi] = lambda;

        // right: (T - lambda) x = 0 by back-substitution
        std::fill(x.begin(), x.end(), cx{0, 0});
        x[i] = 1.0;
        for (int j = i - 1; j >= 0; --j) {
            cx s{0, 0};
            for (int k = j + 1; k <= i; ++k) s += H(j, k) * x[k];
            cx den = H(j, j) - lambda;
            if (std::abs(den) < smallden) den = cx{smallden, 0};
            x[j] = -s / den;
        }
        for (int r = 0; r < n; ++r) {
            cx s{0, 0};
            for (int k = 0; k <= i; ++k) s += Q(r, k) * x[k];
            vec[r] = s * d[r];
        }
        double nrm = 0;
        for (const cx& v : vec) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        for (cx& v : vec) v /= nrm;
        sys.right[oi] = vec;

        // left: (T^H - conj(lambda)) w = 0 by forward substitution
        std::fill(w.begin(), w.end(), cx{0, 0});
        w[i] = 1.0;
        for (int j = i + 1; j < n; ++j) {
            cx s{0, 0};
            for (int k = i; k < j; ++k) s += std::conj(H(k, j)) * w[k];
            cx den = std::conj(H(j, j) - lambda);
            if (std::abs(den) < smallden) den = cx{smallden, 0};
            w[j] = -s / den;
        }
        for (int r = 0; r < n; ++r) {
            cx s{0, 0};
            for (int k = i; k < n; ++k) s += Q(r, k) * w[k];
            vec[r] = s / d[r];
        }
        nrm = 0;
        for (const cx& v : vec) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        for (cx& v : vec) v /= nrm;
        sys.left[oi] = vec;
    }
    return sys;
}

double projection_norm(const std::vector<cx>& right, const std::vector<cx>& left, double tol) {
    if (right.size() != left.size() || right.empty())
        throw std::invalid_argument("projection_norm: size mismatch");
    double nr2 = 0, nl2 = 0;
    cx dot{0, 0};
    for (std::size_t i = 0; i < right.size(); ++i) {
        nr2 += std::norm(right[i]);
        nl2 += std::norm(left[i]);
        dot += std::conj(left[i]) * right[i];
    }
    const double ad2 = std::norm(dot);
    if (ad2 < tol * tol * nr2 * nl2)
        throw std::domain_error("projection_norm: defective pairing (left ~ orthogonal to right)");
    return nr2 * nl2 / ad2;
}

} // namespace riesz
