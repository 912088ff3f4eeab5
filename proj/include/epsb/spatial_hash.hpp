#pragma once

// Dense uniform bucket grid over a fixed point set (CSR layout).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "epsb/geometry.hpp"

namespace epsb {

class PointGrid {
public:
    PointGrid() = default;

    /// `cell` is a hint; it is enlarged if the grid would exceed ~4 cells per point.
    PointGrid(std::span<const Point2> pts, double cell) { build(pts, cell); }

    void build(std::span<const Point2> pts, double cell) {
        pts_.assign(pts.begin(), pts.end());
        order_.clear();
        start_.clear();
        if (pts_.empty()) return;
        lo_ = hi_ = pts_[0];
        for (const auto& p : pts_) {
            lo_.x = std::min(lo_.x, p.x);
            lo_.y = std::min(lo_.y, p.y);
            hi_.x = std::max(hi_.x, p.x);
            hi_.y = std::max(hi_.y, p.y);
        }
        double ext = std::max(hi_.x - lo_.x, hi_.y - lo_.y);
        if (!(cell > 0.0)) cell = ext > 0.0 ? ext / std::sqrt(double(pts_.size())) : 1.0;
        const double cap = 4.0 * double(pts_.size()) + 16.0;
        for (;;) {
            nx_ = std::int64_t((hi_.x - lo_.x) / cell) + 1;
            ny_ = std::int64_t((hi_.y - lo_.y) / cell) + 1;
            if (double(nx_) * double(ny_) <= cap) break;
            cell *= 2.0;
        }
        cell_ = cell;
        std::vector<std::size_t> key(pts_.size());
        start_.assign(std::size_t(nx_ * ny_) + 1, 0);
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            auto [cx, cy] = cell_of(pts_[i]);
            key[i] = std::size_t(cy * nx_ + cx);
            ++start_[key[i] + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
        order_.resize(pts_.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < pts_.size(); ++i) order_[fill[key[i]]++] = i;
    }

    bool empty() const { return pts_.empty(); }
    std::size_t size() const { return pts_.size(); }
    double cell() const { return cell_; }
    const Point2& point(std::size_t i) const { return pts_[i]; }

    /// Calls fn(index) for every point with |p - q| <= r.
    template <class Fn>
    void for_each_within(Point2 q, double r, Fn&& fn) const {
        if (pts_.empty()) return;
        const double r2 = r * r;
        std::int64_t x0 = std::max<std::int64_t>(0, floor_idx((q.x - r - lo_.x) / cell_));
        std::int64_t x1 = std::min<std::int64_t>(nx_ - 1, floor_idx((q.x + r - lo_.x) / cell_));
        std::int64_t y0 = std::max<std::int64_t>(0, floor_idx((q.y - r - lo_.y) / cell_));
        std::int64_t y1 = std::min<std::int64_t>(ny_ - 1, floor_idx((q.y + r - lo_.y) / cell_));
        for (std::int64_t cy = y0; cy <= y1; ++cy)
            for (std::int64_t cx = x0; cx <= x1; ++cx) {
                std::size_t c = std::size_t(cy * nx_ + cx);
                for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
                    std::size_t i = order_[k];
                    if (norm2(pts_[i] - q) <= r2) fn(i);
                }
            }
    }

    /// True if some point satisfies |p - q|^2 <= r2 (early exit).
    bool any_within2(Point2 q, double r2) const {
        if (pts_.empty()) return false;
        double r = std::sqrt(r2);
        std::int64_t x0 = std::max<std::int64_t>(0, floor_idx((q.x - r - lo_.x) / cell_));
        std::int64_t x1 = std::min<std::int64_t>(nx_ - 1, floor_idx((q.x + r - lo_.x) / cell_));
        std::int64_t y0 = std::max<std::int64_t>(0, floor_idx((q.y - r - lo_.y) / cell_));
        std::int64_t y1 = std::min<std::int64_t>(ny_ - 1, floor_idx((q.y + r - lo_.y) / cell_));
        for (std::int64_t cy = y0; cy <= y1; ++cy)
            for (std::int64_t cx = x0; cx <= x1; ++cx) {
                std::size_t c = std::size_t(cy * nx_ + cx);
                for (std::size_t k = start_[c]; k < start_[c + 1]; ++k)
                    if (norm2(pts_[order_[k]] - q) <= r2) return true;
            }
        return false;
    }

    struct Hit {
        std::size_t index = 0;
        double dist = std::numeric_limits<double>::infinity();
    };

    /// Exact nearest neighbour by ring expansion. Empty grid gives dist = inf.
    Hit nearest(Point2 q) const {
        Hit best;
        if (pts_.empty()) return best;
        std::int64_t qx = floor_idx((q.x - lo_.x) / cell_);
        std::int64_t qy = floor_idx((q.y - lo_.y) / cell_);
        auto cheb = [&](std::int64_t cx, std::int64_t cy) {
            return std::max(std::abs(cx - qx), std::abs(cy - qy));
        };
        std::int64_t rmin = std::max({std::int64_t(0), -qx, qx - (nx_ - 1), -qy, qy - (ny_ - 1)});
        std::int64_t rmax = std::max({cheb(0, 0), cheb(nx_ - 1, 0), cheb(0, ny_ - 1), cheb(nx_ - 1, ny_ - 1)});
        double best2 = std::numeric_limits<double>::infinity();
        for (std::int64_t r = rmin; r <= rmax; ++r) {
            auto visit = [&](std::int64_t cx, std::int64_t cy) {
                if (cx < 0 || cy < 0 || cx >= nx_ || cy >= ny_) return;
                std::size_t c = std::size_t(cy * nx_ + cx);
                for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
                    std::size_t i = order_[k];
                    double d2 = norm2(pts_[i] - q);
                    if (d2 < best2 || (d2 == best2 && i < best.index)) {
                        best2 = d2;
                        best.index = i;
                    }
                }
            };
            if (r == 0) {
                visit(qx, qy);
            } else {
                for (std::int64_t cx = qx - r; cx <= qx + r; ++cx) {
                    visit(cx, qy - r);
                    visit(cx, qy + r);
                }
                for (std::int64_t cy = qy - r + 1; cy <= qy + r - 1; ++cy) {
                    visit(qx - r, cy);
                    visit(qx + r, cy);
                }
            }
            // Anything in ring r+1 is at least r*cell away.
            double bound = double(r) * cell_;
            if (best2 <= bound * bound) break;
        }
        best.dist = std::sqrt(best2);
        return best;
    }

private:
    static std::int64_t floor_idx(double v) {
        if (v > 1e15) return std::int64_t(1e15);
        if (v < -1e15) return std::int64_t(-1e15);
        return std::int64_t(std::floor(v));
    }
    std::pair<std::int64_t, std::int64_t> cell_of(Point2 p) const {
        std::int64_t cx = std::clamp<std::int64_t>(floor_idx((p.x - lo_.x) / cell_), 0, nx_ - 1);
        std::int64_t cy = std::clamp<std::int64_t>(floor_idx((p.y - lo_.y) / cell_), 0, ny_ - 1);
        return {cx, cy};
    }

    std::vector<Point2> pts_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> start_;
    Point2 lo_, hi_;
    double cell_ = 1.0;
    std::int64_t nx_ = 0, ny_ = 0;
};

}  // namespace epsb
