// SPDX-License-Identifier: Apache-2.0
//
// beamtrace: location-aware mmWave beam alignment toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Reference implementations used only by the tests. They favour the most
// literal formulation (explicit loops, long double, exhaustive search) over
// speed and share no code with the library beyond its plain data types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "beamtrace/alignment.hpp"
#include "beamtrace/estimators.hpp"
#include "beamtrace/propagation.hpp"

namespace oracle {

using beamtrace::BeamPair;
using beamtrace::Point2;
using beamtrace::RssMatrix;
using beamtrace::TrainingSet;
using cld = std::complex<long double>;
using CVec = std::vector<cld>;

inline constexpr long double kPi = std::numbers::pi_v<long double>;

inline CVec steering(long double angle, std::size_t n, long double spacing = 0.5L)
{
    CVec v(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const long double phase = 2.0L * kPi * spacing * static_cast<long double>(k) * std::sin(angle);
        v[k] = cld(std::cos(phase), std::sin(phase)) / std::sqrt(static_cast<long double>(n));
    }
    return v;
}

inline CVec dft_vector(std::size_t m, std::size_t n)
{
    CVec v(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const long double phase = 2.0L * kPi * static_cast<long double>(m) * static_cast<long double>(k) /
                                  static_cast<long double>(n);
        v[k] = cld(std::cos(phase), std::sin(phase)) / std::sqrt(static_cast<long double>(n));
    }
    return v;
}

inline CVec to_cvec(const Eigen::VectorXcd &v)
{
    CVec out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out[static_cast<std::size_t>(i)] = cld(v(i).real(), v(i).imag());
    return out;
}

// H[r][t] = sqrt(Nt Nr) sum_p alpha_p a_r[r] conj(a_t[t]), entry by entry.
inline std::vector<std::vector<cld>> channel(const std::vector<beamtrace::PropPath> &paths, std::size_t nt,
                                             std::size_t nr)
{
    std::vector<std::vector<cld>> h(nr, std::vector<cld>(nt, cld(0, 0)));
    const long double scale = std::sqrt(static_cast<long double>(nt * nr));
    for (const auto &p : paths)
    {
        const CVec ar = steering(p.aoa, nr);
        const CVec at = steering(p.aod, nt);
        const cld alpha(p.complex_gain.real(), p.complex_gain.imag());
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t t = 0; t < nt; ++t)
                h[r][t] += scale * alpha * ar[r] * std::conj(at[t]);
    }
    return h;
}

inline std::vector<std::vector<cld>> to_cmat(const beamtrace::ChannelMatrix &m)
{
    std::vector<std::vector<cld>> out(static_cast<std::size_t>(m.rows()),
                                      std::vector<cld>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = cld(m(r, c).real(), m(r, c).imag());
    return out;
}

// 10 log10(P |w^H H f|^2), floored at -250 dBm.
inline long double rss(const std::vector<std::vector<cld>> &h, const CVec &f, const CVec &w, long double p_dbm)
{
    cld y(0, 0);
    for (std::size_t r = 0; r < h.size(); ++r)
        for (std::size_t t = 0; t < h[r].size(); ++t)
            y += std::conj(w[r]) * h[r][t] * f[t];
    const long double g = std::norm(y);
    if (g <= 0)
        return -250.0L;
    return std::max<long double>(-250.0L, p_dbm + 10.0L * std::log10(g));
}

inline RssMatrix rss_matrix(const std::vector<std::vector<cld>> &h, std::size_t nt, std::size_t nr, long double p)
{
    RssMatrix out(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nr));
    for (std::size_t m = 0; m < nt; ++m)
        for (std::size_t k = 0; k < nr; ++k)
            out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) =
                static_cast<double>(rss(h, dft_vector(m, nt), dft_vector(k, nr), p));
    return out;
}

// Closed segment a-b against the open rectangle interior, decided by
// intersecting the segment with every edge and with a shrunken copy.
inline bool blocked(const Point2 &a, const Point2 &b, const beamtrace::Rect &r)
{
    const int samples = 20000;
    const long double eps = 1e-7L;
    for (int i = 0; i <= samples; ++i)
    {
        const long double t = static_cast<long double>(i) / samples;
        const long double x = a.x() + t * (b.x() - a.x());
        const long double y = a.y() + t * (b.y() - a.y());
        if (x > r.xmin + eps && x < r.xmax - eps && y > r.ymin + eps && y < r.ymax - eps)
            return true;
    }
    return false;
}

struct ImagePath
{
    long double length = 0;
    bool reflected = false;
    Point2 bounce;
};

// Brute-force image method: LOS plus one bounce off every wall.
inline std::vector<ImagePath> image_paths(const beamtrace::Scene &s, const Point2 &ue)
{
    std::vector<ImagePath> out;
    auto clear = [&](const Point2 &a, const Point2 &b) {
        for (const auto &o : s.obstacles)
            if (blocked(a, b, o))
                return false;
        return true;
    };
    const Point2 bs = s.bs_location;
    if (clear(bs, ue))
        out.push_back({static_cast<long double>((ue - bs).norm()), false, {}});
    for (const auto &o : s.obstacles)
    {
        struct Wall
        {
            Point2 p0, p1;
            Point2 outward;
        };
        const Wall walls[] = {
            {{o.xmin, o.ymin}, {o.xmin, o.ymax}, {-1, 0}},
            {{o.xmax, o.ymin}, {o.xmax, o.ymax}, {1, 0}},
            {{o.xmin, o.ymin}, {o.xmax, o.ymin}, {0, -1}},
            {{o.xmin, o.ymax}, {o.xmax, o.ymax}, {0, 1}},
        };
        for (const auto &w : walls)
        {
            if ((bs - w.p0).dot(w.outward) <= 0 || (ue - w.p0).dot(w.outward) <= 0)
                continue;
            const Point2 image = bs - 2.0 * (bs - w.p0).dot(w.outward) * w.outward;
            // Intersect image-ue with the wall segment (2x2 solve).
            const Point2 d1 = ue - image;
            const Point2 d2 = w.p1 - w.p0;
            const long double den = d1.x() * d2.y() - d1.y() * d2.x();
            if (den == 0)
                continue;
            const Point2 q = w.p0 - image;
            const long double t = (q.x() * d2.y() - q.y() * d2.x()) / den;
            const long double u = (q.x() * d1.y() - q.y() * d1.x()) / den;
            if (!(t > 0 && t < 1 && u > 0 && u < 1))
                continue;
            const Point2 hit = image + static_cast<double>(t) * d1;
            if (!clear(bs, hit) || !clear(hit, ue))
                continue;
            out.push_back({static_cast<long double>((bs - hit).norm() + (hit - ue).norm()), true, hit});
        }
    }
    return out;
}

inline std::size_t nearest(const TrainingSet &d, const Point2 &q)
{
    std::size_t best = 0;
    for (std::size_t l = 1; l < d.size(); ++l)
        if ((d.records[l].est_loc - q).squaredNorm() < (d.records[best].est_loc - q).squaredNorm())
            best = l;
    return best;
}

// Gaussian kernel weights in long double, no max subtraction.
inline std::vector<long double> kernel(const Point2 &q, const std::vector<Point2> &locs, long double sigma)
{
    std::vector<long double> w(locs.size());
    long double sum = 0;
    for (std::size_t l = 0; l < locs.size(); ++l)
    {
        const long double dx = static_cast<long double>(locs[l].x()) - q.x();
        const long double dy = static_cast<long double>(locs[l].y()) - q.y();
        w[l] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
        sum += w[l];
    }
    for (auto &x : w)
        x /= sum;
    return w;
}

inline beamtrace::PriorModel prior(const TrainingSet &d, long double noise)
{
    const auto mt = d.records[0].rss_meas.rows();
    const auto mr = d.records[0].rss_meas.cols();
    beamtrace::PriorModel p{RssMatrix(mt, mr), RssMatrix(mt, mr)};
    for (Eigen::Index m = 0; m < mt; ++m)
        for (Eigen::Index k = 0; k < mr; ++k)
        {
            long double s = 0;
            for (const auto &r : d.records)
                s += r.rss_meas(m, k);
            const long double mu = s / d.size();
            long double ss = 0;
            for (const auto &r : d.records)
                ss += (r.rss_meas(m, k) - mu) * (r.rss_meas(m, k) - mu);
            p.mean(m, k) = static_cast<double>(mu);
            p.var(m, k) = static_cast<double>(std::max<long double>(ss / (d.size() - 1) - noise, 1e-6L));
        }
    return p;
}

inline long double shrink(long double meas, long double mu, long double var, long double noise)
{
    if (noise == 0)
        return meas;
    if (var == 0)
        return mu;
    return mu + var / (var + noise) * (meas - mu);
}

// Double Gaussian-kernel estimate written as one explicit nested sum.
inline RssMatrix loren(const TrainingSet &d, const Point2 &q, const beamtrace::PriorModel &p,
                       const beamtrace::ErrorModel &e)
{
    const std::size_t n = d.size();
    const auto mt = d.records[0].rss_meas.rows();
    const auto mr = d.records[0].rss_meas.cols();
    std::vector<Point2> locs;
    for (const auto &r : d.records)
        locs.push_back(r.est_loc);

    std::vector<long double> outer;
    if (e.sigma_test == 0)
    {
        outer.assign(n, 0);
        outer[nearest(d, q)] = 1;
    }
    else
        outer = kernel(q, locs, e.sigma_test);

    RssMatrix out(mt, mr);
    for (Eigen::Index m = 0; m < mt; ++m)
        for (Eigen::Index k = 0; k < mr; ++k)
        {
            long double acc = 0;
            for (std::size_t l = 0; l < n; ++l)
            {
                long double inner = 0;
                if (e.sigma_train == 0)
                    inner = shrink(d.records[l].rss_meas(m, k), p.mean(m, k), p.var(m, k), e.meas_noise_var);
                else
                {
                    const auto w = kernel(locs[l], locs, e.sigma_train);
                    for (std::size_t j = 0; j < n; ++j)
                        inner += w[j] *
                                 shrink(d.records[j].rss_meas(m, k), p.mean(m, k), p.var(m, k), e.meas_noise_var);
                }
                acc += outer[l] * inner;
            }
            out(m, k) = static_cast<double>(acc);
        }
    return out;
}

// Selection sort: repeatedly take the largest remaining prediction, the
// lexicographically smallest pair among equals.
inline std::vector<BeamPair> rank(const RssMatrix &pred)
{
    std::vector<BeamPair> remaining, out;
    for (Eigen::Index m = 0; m < pred.rows(); ++m)
        for (Eigen::Index k = 0; k < pred.cols(); ++k)
            remaining.push_back({static_cast<std::size_t>(m), static_cast<std::size_t>(k)});
    while (!remaining.empty())
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < remaining.size(); ++i)
        {
            const double a = pred(static_cast<Eigen::Index>(remaining[i].tx), static_cast<Eigen::Index>(remaining[i].rx));
            const double b =
                pred(static_cast<Eigen::Index>(remaining[best].tx), static_cast<Eigen::Index>(remaining[best].rx));
            if (a > b)
                best = i;
        }
        out.push_back(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return out;
}

inline std::vector<BeamPair> esba(std::size_t mt, std::size_t mr)
{
    std::vector<BeamPair> out;
    for (std::size_t m = 0; m < mt; ++m)
        for (std::size_t k = 0; k < mr; ++k)
            out.push_back({m, k});
    return out;
}

inline BeamPair argmax(const RssMatrix &r)
{
    BeamPair best{0, 0};
    double v = -std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < r.rows(); ++m)
        for (Eigen::Index k = 0; k < r.cols(); ++k)
            if (r(m, k) > v)
            {
                v = r(m, k);
                best = {static_cast<std::size_t>(m), static_cast<std::size_t>(k)};
            }
    return best;
}

inline std::vector<BeamPair> bim(const TrainingSet &d, const Point2 &q, std::size_t k)
{
    std::vector<bool> used(d.size(), false);
    std::vector<BeamPair> out;
    for (std::size_t step = 0; step < std::min(k, d.size()); ++step)
    {
        std::size_t best = d.size();
        for (std::size_t l = 0; l < d.size(); ++l)
            if (!used[l] && (best == d.size() || (d.records[l].est_loc - q).squaredNorm() <
                                                     (d.records[best].est_loc - q).squaredNorm()))
                best = l;
        used[best] = true;
        const BeamPair p = argmax(d.records[best].rss_meas);
        if (std::find(out.begin(), out.end(), p) == out.end())
            out.push_back(p);
    }
    return out;
}

// DFT indices ordered by pointing sine 2m/n folded into (-1, 1].
inline std::vector<std::size_t> angular_order(std::size_t n)
{
    std::vector<std::pair<long double, std::size_t>> keyed;
    for (std::size_t m = 0; m < n; ++m)
    {
        long double u = 2.0L * m / n;
        if (u > 1)
            u -= 2;
        keyed.push_back({u, m});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> out;
    for (const auto &kv : keyed)
        out.push_back(kv.second);
    return out;
}

// Wide beam covering `count` angularly consecutive DFT beams from `first`.
inline CVec wide_beam(std::size_t n, std::size_t first, std::size_t count)
{
    const auto order = angular_order(n);
    CVec v(n, cld(0, 0));
    for (std::size_t j = first; j < first + count; ++j)
    {
        const CVec b = dft_vector(order[j], n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] += b[i];
    }
    long double norm = 0;
    for (const auto &x : v)
        norm += std::norm(x);
    for (auto &x : v)
        x /= std::sqrt(norm);
    return v;
}

struct HsbaTrace
{
    std::vector<BeamPair> schedule;
    BeamPair final_pair;
};

// Bisection written as an explicit descent over (first leaf, width) blocks.
inline HsbaTrace hsba(const std::vector<std::vector<cld>> &h, std::size_t nt, std::size_t nr, long double p)
{
    const auto tx_order = angular_order(nt);
    const auto rx_order = angular_order(nr);
    auto log2 = [](std::size_t n) {
        int q = 0;
        while ((std::size_t{1} << q) < n)
            ++q;
        return q;
    };
    const int qt = log2(nt), qr = log2(nr);
    auto tag = [&](std::size_t n, const std::vector<std::size_t> &order, int q, int level, std::size_t idx) {
        return level == q ? std::pair<std::size_t, int>{order[idx], 0} : std::pair<std::size_t, int>{idx, level};
    };
    auto beam = [&](std::size_t n, int q, int level, std::size_t idx) {
        const std::size_t width = n >> level;
        return wide_beam(n, idx * width, width);
    };

    HsbaTrace out;
    std::size_t bt = 0, br = 0;
    for (int level = 1; level <= qr; ++level)
    {
        long double best = -std::numeric_limits<long double>::infinity();
        std::size_t nbt = 0, nbr = 0;
        for (std::size_t a = 2 * bt; a < 2 * bt + 2; ++a)
            for (std::size_t b = 2 * br; b < 2 * br + 2; ++b)
            {
                const auto [tx, tl] = tag(nt, tx_order, qt, level, a);
                const auto [rx, rl] = tag(nr, rx_order, qr, level, b);
                out.schedule.push_back({tx, rx, tl, rl});
                const long double v = rss(h, beam(nt, qt, level, a), beam(nr, qr, level, b), p);
                if (v > best)
                {
                    best = v;
                    nbt = a;
                    nbr = b;
                }
            }
        bt = nbt;
        br = nbr;
    }
    for (int level = qr + 1; level <= qt; ++level)
    {
        long double vals[2];
        for (std::size_t a = 0; a < 2; ++a)
        {
            const auto [tx, tl] = tag(nt, tx_order, qt, level, 2 * bt + a);
            const auto [rx, rl] = tag(nr, rx_order, qr, qr, br);
            out.schedule.push_back({tx, rx, tl, rl});
            vals[a] = rss(h, beam(nt, qt, level, 2 * bt + a), beam(nr, qr, qr, br), p);
        }
        bt = vals[1] > vals[0] ? 2 * bt + 1 : 2 * bt;
    }
    out.final_pair = {tx_order[bt], rx_order[br], 0, 0};
    return out;
}

inline std::vector<long double> prefix_max(const std::vector<long double> &xs)
{
    std::vector<long double> out;
    long double m = -std::numeric_limits<long double>::infinity();
    for (long double x : xs)
        out.push_back(m = std::max(m, x));
    return out;
}

inline double mean_nn(const std::vector<Point2> &pts)
{
    long double total = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        long double best = std::numeric_limits<long double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j)
            {
                const long double dx = pts[i].x() - pts[j].x(), dy = pts[i].y() - pts[j].y();
                best = std::min(best, std::sqrt(dx * dx + dy * dy));
            }
        total += best;
    }
    return static_cast<double>(total / pts.size());
}

} // namespace oracle
