#pragma once

// A finite union of points and closed intervals inside [0, pi/2]: the output
// type of all angular-spectrum computations. Degenerate intervals collapse to
// points; overlapping elements are merged. Hausdorff distances between two
// such unions are computed exactly from endpoints and gap midpoints.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "angular/errors.hpp"

namespace angular {

struct Provenance {
    std::string signature;          // trace-space composition or closed-form case
    std::vector<double> argmin;     // optimizer parameters at the lower endpoint
    std::vector<double> argmax;     // parameters at the upper endpoint
};

struct SpectrumElement {
    double lo = 0.0;
    double hi = 0.0;
    Provenance prov;

    bool is_point() const { return hi == lo; }
};

class AngularSpectrumSet {
public:
    static constexpr double kCollapseTol = 1e-6;
    static constexpr double kMergeTol = 1e-6;

    void add(double lo, double hi, Provenance prov = {}) {
        if (hi < lo) std::swap(lo, hi);
        if (hi - lo < kCollapseTol) {
            // Degenerate interval: store as the point at its center.
            double mid = 0.5 * (lo + hi);
            lo = hi = mid;
        }
        elements_.push_back({lo, hi, std::move(prov)});
        normalized_ = false;
    }

    void add_point(double x, Provenance prov = {}) { add(x, x, std::move(prov)); }

    bool empty() const { return elements_.empty(); }

    const std::vector<SpectrumElement>& elements() const {
        normalize();
        return elements_;
    }

    double min() const {
        require_nonempty();
        normalize();
        return elements_.front().lo;
    }

    double max() const {
        require_nonempty();
        normalize();
        return elements_.back().hi;
    }

    // Distance from a real value to the union.
    double distance_to(double x) const {
        require_nonempty();
        normalize();
        double best = std::abs(x - elements_.front().lo);
        for (const auto& e : elements_) {
            double d = x < e.lo ? e.lo - x : (x > e.hi ? x - e.hi : 0.0);
            best = std::min(best, d);
        }
        return best;
    }

    bool contains(double x, double tol) const { return distance_to(x) <= tol; }

private:
    void require_nonempty() const {
        if (elements_.empty()) throw EmptySet("AngularSpectrumSet is empty");
    }

    void normalize() const {
        if (normalized_) return;
        auto& els = elements_;
        std::sort(els.begin(), els.end(),
                  [](const SpectrumElement& a, const SpectrumElement& b) { return a.lo < b.lo; });
        std::vector<SpectrumElement> merged;
        for (auto& e : els) {
            if (!merged.empty() && e.lo <= merged.back().hi + kMergeTol) {
                merged.back().hi = std::max(merged.back().hi, e.hi);
            } else {
                merged.push_back(e);
            }
        }
        for (auto& e : merged)
            if (e.hi - e.lo < kCollapseTol) {
                double mid = 0.5 * (e.lo + e.hi);
                e.lo = e.hi = mid;
            }
        els = std::move(merged);
        normalized_ = true;
    }

    mutable std::vector<SpectrumElement> elements_;
    mutable bool normalized_ = true;
};

// One-sided distance sup_{x in a} dist(x, b), exact for unions of points and
// closed intervals: the supremum is attained at an endpoint of a or at a gap
// midpoint of b lying inside a.
inline double directed_distance(const AngularSpectrumSet& a, const AngularSpectrumSet& b) {
    if (a.empty() || b.empty()) throw EmptySet("directed_distance: empty operand");
    std::vector<double> candidates;
    for (const auto& e : a.elements()) {
        candidates.push_back(e.lo);
        candidates.push_back(e.hi);
    }
    const auto& be = b.elements();
    for (size_t i = 0; i + 1 < be.size(); ++i) {
        double mid = 0.5 * (be[i].hi + be[i + 1].lo);
        for (const auto& e : a.elements())
            if (mid >= e.lo && mid <= e.hi) {
                candidates.push_back(mid);
                break;
            }
    }
    double worst = 0.0;
    for (double x : candidates) worst = std::max(worst, b.distance_to(x));
    return worst;
}

inline double hausdorff(const AngularSpectrumSet& a, const AngularSpectrumSet& b) {
    return std::max(directed_distance(a, b), directed_distance(b, a));
}

}  // namespace angular
