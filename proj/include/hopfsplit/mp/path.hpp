#pragma once

// Integration paths in the complex x-plane: chains of line segments and
// circular arcs. Restricting to these two primitives keeps the singularity
// guard checks decidable. Arcs carry an explicit signed sweep angle since
// endpoints plus center do not fix the orientation.

#include <vector>

#include "hopfsplit/mp/complex.hpp"
#include "hopfsplit/mp/errors.hpp"

namespace hopfsplit {

struct PathSegment {
    enum class Kind { Line, Arc };
    Kind kind;
    Complex from, to;
    Complex center; // arcs only
    Real sweep;     // arcs only, signed radians, |sweep| <= 2*pi

    // position at s in [0,1]
    Complex at(const Real& s) const {
        if (kind == Kind::Line) return from + s * (to - from);
        Complex rad = from - center;
        Real ang = s * sweep;
        Complex rot{cos(ang), sin(ang)};
        return center + rot * rad;
    }
    // dx/ds at s in [0,1]
    Complex velocity(const Real& s) const {
        if (kind == Kind::Line) return to - from;
        Complex x = at(s);
        return Complex{Real::zero(sweep.prec()), sweep} * (x - center);
    }
    Real length() const {
        if (kind == Kind::Line) return abs(to - from);
        return abs(sweep) * abs(from - center);
    }
};

class ComplexPath {
  public:
    ComplexPath() = default;

    static ComplexPath line(const Complex& a, const Complex& b) {
        ComplexPath p;
        p.append_line(a, b);
        return p;
    }

    void append_line(const Complex& a, const Complex& b) {
        check_start(a);
        segs_.push_back({PathSegment::Kind::Line, a, b, Complex::zero(a.prec()),
                         Real::zero(a.prec())});
    }
    // arc around `center` from `a` to `b`; direction chosen by `ccw`, sweep is
    // the principal angle difference in that direction
    void append_arc(const Complex& center, const Complex& a, const Complex& b, bool ccw) {
        check_start(a);
        prec_t p = a.prec();
        Real ra = abs(a - center), rb = abs(b - center);
        Real reldev = abs(ra - rb) / ra;
        if (reldev > Real::pow2(-24, p))
            throw ParameterError("ComplexPath: arc endpoints not equidistant from center");
        Real ta = arg(a - center), tb = arg(b - center);
        Real two_pi = 2 * Real::pi(p);
        Real sweep = tb - ta;
        if (ccw) {
            while (sweep <= 0) sweep += two_pi;
        } else {
            while (sweep >= 0) sweep -= two_pi;
        }
        segs_.push_back({PathSegment::Kind::Arc, a, b, center, sweep});
    }

    bool empty() const { return segs_.empty(); }
    size_t size() const { return segs_.size(); }
    const PathSegment& operator[](size_t i) const { return segs_[i]; }
    const std::vector<PathSegment>& segments() const { return segs_; }

    const Complex& start() const {
        if (segs_.empty()) throw ParameterError("ComplexPath: empty path has no start");
        return segs_.front().from;
    }
    const Complex& end() const {
        if (segs_.empty()) throw ParameterError("ComplexPath: empty path has no end");
        return segs_.back().to;
    }
    Real length() const {
        Real acc = Real::zero(segs_.empty() ? 64 : segs_[0].from.prec());
        for (const auto& s : segs_) acc += s.length();
        return acc;
    }

    ComplexPath conjugated() const {
        ComplexPath p;
        for (const auto& s : segs_)
            p.segs_.push_back({s.kind, conj(s.from), conj(s.to), conj(s.center), -s.sweep});
        return p;
    }

  private:
    void check_start(const Complex& a) const {
        if (!segs_.empty() && !(segs_.back().to == a))
            throw ParameterError("ComplexPath: segments must share endpoints exactly");
    }
    std::vector<PathSegment> segs_;
};

} // namespace hopfsplit
