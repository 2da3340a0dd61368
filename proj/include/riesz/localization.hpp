#pragma once

#include "riesz/models.hpp"
#include "riesz/parallel.hpp"

#include <complex>
#include <vector>

namespace riesz {

struct Box {
    int k = 0;
    double re_lo = 0, re_hi = 0, im_half = 0;
    bool contains(cx z) const {
        return z.real() > re_lo && z.real() < re_hi && std::abs(z.imag()) < im_half;
    }
};

/// Half-strip plus one rectangle per index k > N. Boxes follow the gap
/// parameters: Re in (mu_k - kappa/2 (k-1)^{gamma-1}, mu_k + kappa/2 k^{gamma-1}),
/// |Im| < kappa/2 k^{gamma-1}.
struct EnclosureLayout {
    int N = 0;
    double h = 0;
    int k_hi = 0; // highest box index carried by the layout
    GapParams gaps;
    std::vector<double> mu; // positions 1..size

    Box box(int k) const;
    double strip_re_hi() const;
    bool in_strip(cx z) const {
        return z.real() > -h && z.real() < strip_re_hi() && std::abs(z.imag()) < h;
    }
};

EnclosureLayout make_enclosure_layout(std::vector<double> mu, const GapParams& gaps, int N,
                                      double h, int k_hi);

/// Certified upper bound for sum_{k > from} k^{-omega} / (mu_k - mu_ref), using
/// the gap lower bound mu_k >= mu_from + (kappa/gamma)((k-1)^gamma - from^gamma)
/// and an integral comparison for the far tail. Requires mu_from > mu_ref and
/// omega + gamma > 1.
double decay_sum_tail(double omega, const GapParams& gaps, int from, double mu_from,
                      double mu_ref);

/// Upper bound for the resolvent-side operator norm at z:
/// Mb * [sum_{k<=range} 1/(k^{2 alpha} |mu_k - z|) + tail]. Throws
/// std::domain_error when z collides with some mu_k, std::out_of_range when
/// Re z reaches the end of the supplied range.
double b_norm_bound(const std::vector<double>& mu, const GapParams& gaps, double alpha,
                    double mb, cx z);

struct EnclosureSearch {
    int samples_per_side = 64;
    int max_sample_doublings = 3;   // 64 -> 512, stops when the max moves < 1%
    double h_max = 65536.0;         // geometric grid 1,2,4,...
    double threshold = 0.5;
};

struct EnclosureParams {
    int N = 0;
    double h = 0;
    double max_box_bound = 0;   // over sampled box boundaries with k > N
    double max_strip_bound = 0; // over the sampled strip boundary
};

/// Smallest N > N0 such that every sampled box boundary k in (N, k_hi] stays
/// under the threshold, then the smallest h from the geometric grid doing the
/// same for the strip boundary. Throws std::runtime_error when none exists.
EnclosureParams find_enclosure_params(const std::vector<double>& mu, const GapParams& gaps,
                                      double alpha, double mb, int k_hi,
                                      const EnclosureSearch& opts = {},
                                      Exec exec = Exec::OpenMP);

struct EnclosureReport {
    struct BoxCount {
        int k;
        int count;
    };
    struct Stray {
        cx lambda;
        int nearest_k;
        bool edge_zone;
    };
    std::vector<BoxCount> boxes;
    int strip_count = 0;
    std::vector<Stray> outside;
    bool sound = false; // no stray outside the union below the edge zone
};

/// Counts oracle eigenvalues per box / in the strip; discrepancies are report
/// entries, never errors. Eigenvalues in the top decile (by ascending real
/// part) get the truncation-edge flag when they fall outside.
EnclosureReport verify_enclosure(const EnclosureLayout& layout, const std::vector<cx>& values);

} // namespace riesz
