#include "riesz/localization.hpp"

#include <algorithm>
#include <cmath>

namespace riesz {

Box EnclosureLayout::box(int k) const {
    if (k < 2 || k > static_cast<int>(mu.size()))
        throw std::out_of_range("EnclosureLayout::box: index outside carried range");
    const double half = 0.5 * gaps.kappa;
    Box b;
    b.k = k;
    b.re_lo = mu[k - 1] - half * std::pow(k - 1.0, gaps.gamma - 1.0);
    b.re_hi = mu[k - 1] + half * std::pow(static_cast<double>(k), gaps.gamma - 1.0);
    b.im_half = half * std::pow(static_cast<double>(k), gaps.gamma - 1.0);
    return b;
}

double EnclosureLayout::strip_re_hi() const {
    return mu[N - 1] + 0.5 * gaps.kappa * std::pow(static_cast<double>(N), gaps.gamma - 1.0);
}

EnclosureLayout make_enclosure_layout(std::vector<double> mu, const GapParams& gaps, int N,
                                      double h, int k_hi) {
    EnclosureLayout lay;
    lay.mu = std::move(mu);
    lay.gaps = gaps;
    lay.N = N;
    lay.h = h;
    lay.k_hi = std::min<int>(k_hi, static_cast<int>(lay.mu.size()));
    return lay;
}

double decay_sum_tail(double omega, const GapParams& gaps, int from, double mu_from,
                      double mu_ref) {
    if (!(omega + gaps.gamma > 1.0))
        throw std::invalid_argument("decay_sum_tail: needs omega + gamma > 1");
    if (!(mu_from > mu_ref))
        throw std::out_of_range("decay_sum_tail: reference point beyond the summed range");
    const double g = gaps.gamma;
    const double slope = gaps.kappa / g;
    const double D = mu_from - mu_ref;
    const int j2 = std::max(from + 1, static_cast<int>(std::ceil(std::pow(2.0, 1.0 / g) * from)) + 2);
    double mid = 0.0;
    for (int k = from + 1; k <= j2; ++k) {
        const double growth = std::pow(k - 1.0, g) - std::pow(static_cast<double>(from), g);
        mid += std::pow(static_cast<double>(k), -omega) / (D + slope * growth);
    }
    // beyond j2: (k-1)^g - from^g >= (k-1)^g / 2
    const double fudge = std::pow(2.0, std::max(0.0, -omega));
    const double far = (2.0 * g / gaps.kappa) * fudge * power_tail_sum(omega + g, j2);
    return mid + far;
}

double b_norm_bound(const std::vector<double>& mu, const GapParams& gaps, double alpha,
                    double mb, cx z) {
    const int L = static_cast<int>(mu.size());
    if (L < 8) throw std::invalid_argument("b_norm_bound: range too small");
    if (!(2.0 * alpha + gaps.gamma > 1.0))
        throw std::invalid_argument("b_norm_bound: inadmissible (alpha, gamma)");
    if (z.real() >= mu[L - 1])
        throw std::out_of_range("b_norm_bound: Re z beyond the working range");
    double s = 0.0;
    for (int k = 1; k <= L; ++k) {
        const double dist = std::abs(z - cx{mu[k - 1], 0.0});
        if (dist <= 1e-12 * std::max(1.0, std::abs(mu[k - 1])))
            throw std::domain_error("b_norm_bound: z collides with an unperturbed eigenvalue");
        s += std::pow(static_cast<double>(k), -2.0 * alpha) / dist;
    }
    s += decay_sum_tail(2.0 * alpha, gaps, L, mu[L - 1], z.real());
    return mb * s;
}

namespace {

// boundary samples of a rectangle, midpoint-spaced so corners are not doubled
std::vector<cx> rect_samples(double re_lo, double re_hi, double im_half, int per_side) {
    std::vector<cx> pts;
    pts.reserve(4 * static_cast<std::size_t>(per_side));
    for (int i = 0; i < per_side; ++i) {
        const double t = (i + 0.5) / per_side;
        const double x = re_lo + t * (re_hi - re_lo);
        const double y = -im_half + t * (2.0 * im_half);
        pts.push_back({x, im_half});
        pts.push_back({x, -im_half});
        pts.push_back({re_lo, y});
        pts.push_back({re_hi, y});
    }
    return pts;
}

double max_bound_over(const std::vector<cx>& pts, const std::vector<double>& mu,
                      const GapParams& gaps, double alpha, double mb, Exec exec) {
    std::vector<double> vals(pts.size());
    par_for(static_cast<long>(pts.size()), [&](long i) {
        vals[i] = b_norm_bound(mu, gaps, alpha, mb, pts[i]);
    }, exec);
    double m = 0;
    for (double v : vals) m = std::max(m, v);
    return m;
}

double refined_max(const std::function<std::vector<cx>(int)>& sampler,
                   const std::vector<double>& mu, const GapParams& gaps, double alpha, double mb,
                   const EnclosureSearch& opts, Exec exec) {
    int per_side = opts.samples_per_side;
    double m = max_bound_over(sampler(per_side), mu, gaps, alpha, mb, exec);
    for (int d = 0; d < opts.max_sample_doublings; ++d) {
        per_side *= 2;
        const double m2 = max_bound_over(sampler(per_side), mu, gaps, alpha, mb, exec);
        const bool settled = std::abs(m2 - m) <= 0.01 * std::max(m, m2);
        m = std::max(m, m2);
        if (settled) break;
    }
    return m;
}

} // namespace

EnclosureParams find_enclosure_params(const std::vector<double>& mu, const GapParams& gaps,
                                      double alpha, double mb, int k_hi,
                                      const EnclosureSearch& opts, Exec exec) {
    const int n0 = gaps.n0;
    if (k_hi < n0 + 2) throw std::invalid_argument("find_enclosure_params: k_hi too small");

    // per-box boundary maxima are independent of N; compute them once
    std::vector<double> box_max(k_hi + 1, 0.0);
    EnclosureLayout probe = make_enclosure_layout(mu, gaps, n0 + 1, 1.0, k_hi);
    for (int k = n0 + 2; k <= k_hi; ++k) {
        const Box b = probe.box(k);
        box_max[k] = refined_max(
            [&](int s) { return rect_samples(b.re_lo, b.re_hi, b.im_half, s); }, mu, gaps, alpha,
            mb, opts, exec);
    }
    int N = -1;
    double worst = 0;
    for (int cand = n0 + 1; cand <= k_hi - 1; ++cand) {
        worst = 0;
        for (int k = cand + 1; k <= k_hi; ++k) worst = std::max(worst, box_max[k]);
        if (worst <= opts.threshold) {
            N = cand;
            break;
        }
    }
    if (N < 0)
        throw std::runtime_error("find_enclosure_params: no N achieves the bound in range");

    EnclosureParams out;
    out.N = N;
    out.max_box_bound = worst;
    for (double h = 1.0; h <= opts.h_max; h *= 2.0) {
        EnclosureLayout lay = make_enclosure_layout(mu, gaps, N, h, k_hi);
        const double hi = lay.strip_re_hi();
        const double m = refined_max(
            [&](int s) { return rect_samples(-h, hi, h, s); }, mu, gaps, alpha, mb, opts, exec);
        if (m <= opts.threshold) {
            out.h = h;
            out.max_strip_bound = m;
            return out;
        }
    }
    throw std::runtime_error("find_enclosure_params: no h achieves the bound on the strip");
}

EnclosureReport verify_enclosure(const EnclosureLayout& layout, const std::vector<cx>& values) {
    EnclosureReport rep;
    const int count = static_cast<int>(values.size());
    const int edge_rank = count - std::max(1, count / 10); // top decile by real part

    std::vector<int> rank(count);
    {
        std::vector<int> idx(count);
        for (int i = 0; i < count; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
            return values[a].imag() < values[b].imag();
        });
        for (int r = 0; r < count; ++r) rank[idx[r]] = r;
    }

    std::vector<int> per_box(layout.k_hi + 1, 0);
    for (int i = 0; i < count; ++i) {
        const cx z = values[i];
        if (layout.in_strip(z)) {
            ++rep.strip_count;
            continue;
        }
        bool inside = false;
        for (int k = layout.N + 1; k <= layout.k_hi; ++k) {
            if (layout.box(k).contains(z)) {
                ++per_box[k];
                inside = true;
                break;
            }
        }
        if (!inside) {
            int nearest = 1;
            double best = HUGE_VAL;
            for (int k = 1; k <= static_cast<int>(layout.mu.size()); ++k) {
                const double dd = std::abs(z - cx{layout.mu[k - 1], 0});
                if (dd < best) {
                    best = dd;
                    nearest = k;
                }
            }
            rep.outside.push_back({z, nearest, rank[i] >= edge_rank});
        }
    }
    for (int k = layout.N + 1; k <= layout.k_hi; ++k) rep.boxes.push_back({k, per_box[k]});
    rep.sound = true;
    for (const auto& s : rep.outside)
        if (!s.edge_zone) rep.sound = false;
    return rep;
}

} // namespace riesz
