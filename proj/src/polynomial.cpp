#include "cnlse/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cnlse {

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) {
    while (!c_.empty() && c_.back() == 0.0) {
        c_.pop_back();
    }
}

double Polynomial::coeff(int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0.0;
}

double Polynomial::operator()(double x) const {
    double s = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        s = s * x + *it;
    }
    return s;
}

std::complex<double> Polynomial::operator()(std::complex<double> x) const {
    std::complex<double> s = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        s = s * x + *it;
    }
    return s;
}

double Polynomial::magnitude(double x) const {
    double s = 0.0;
    const double ax = std::abs(x);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        s = s * ax + std::abs(*it);
    }
    return s;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) {
        return Polynomial();
    }
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) {
        d[i - 1] = static_cast<double>(i) * c_[i];
    }
    return Polynomial(std::move(d));
}

Polynomial::DivMod Polynomial::divmod(const Polynomial& divisor) const {
    const int n = degree();
    const int m = divisor.degree();
    if (m < 0) {
        return {Polynomial(), *this};
    }
    if (n < m) {
        return {Polynomial(), *this};
    }
    std::vector<double> r = c_;
    std::vector<double> q(n - m + 1, 0.0);
    const double lead = divisor.c_.back();
    for (int k = n - m; k >= 0; --k) {
        const double f = r[k + m] / lead;
        q[k] = f;
        for (int j = 0; j <= m; ++j) {
            r[k + j] -= f * divisor.c_[j];
        }
        r[k + m] = 0.0;
    }
    r.resize(m);
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

double root_bound(const Polynomial& p) {
    const int n = p.degree();
    if (n < 1) {
        return 1.0;
    }
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        m = std::max(m, std::abs(p.coeff(i) / p.coeff(n)));
    }
    return 1.0 + m;
}

namespace {

int sign_of(double v) {
    return (v > 0.0) - (v < 0.0);
}

double bisect(const Polynomial& p, double lo, double hi) {
    int slo = sign_of(p(lo));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const int sm = sign_of(p(mid));
        if (sm == 0) {
            return mid;
        }
        if (sm == slo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool is_zero_at(const Polynomial& p, double x, double rel_tol) {
    return std::abs(p(x)) <= rel_tol * p.magnitude(x);
}

// Distinct critical values of p, ascending (multiple roots of p' collapse).
std::vector<double> critical_points(const Polynomial& p, double rel_tol) {
    std::vector<double> out;
    for (const RealRoot& r : real_roots(p.derivative(), rel_tol)) {
        out.push_back(r.value);
    }
    return out;
}

} // namespace

std::vector<RealRoot> real_roots(const Polynomial& p, double rel_tol) {
    const int n = p.degree();
    std::vector<RealRoot> roots;
    if (n < 1) {
        return roots;
    }
    if (n == 1) {
        roots.push_back({-p.coeff(0) / p.coeff(1), 1});
        return roots;
    }

    const double bound = root_bound(p);
    std::vector<double> pts{-bound};
    for (double c : critical_points(p, rel_tol)) {
        if (c > -bound && c < bound) {
            pts.push_back(c);
        }
    }
    pts.push_back(bound);

    std::vector<bool> root_at(pts.size(), false);
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        root_at[i] = is_zero_at(p, pts[i], rel_tol);
    }

    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (root_at[i]) {
            int mult = 1;
            Polynomial d = p.derivative();
            while (d.degree() >= 0 && is_zero_at(d, pts[i], rel_tol) && mult < n) {
                ++mult;
                d = d.derivative();
            }
            roots.push_back({pts[i], mult});
        }
        if (i + 1 < pts.size() && !root_at[i] && !root_at[i + 1]) {
            const double a = pts[i];
            const double b = pts[i + 1];
            if (sign_of(p(a)) * sign_of(p(b)) < 0) {
                roots.push_back({bisect(p, a, b), 1});
            }
        }
    }
    std::sort(roots.begin(), roots.end(),
              [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
    return roots;
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
    std::vector<Polynomial> seq{p, p.derivative()};
    if (seq[1].degree() < 0) {
        seq.pop_back();
        return seq;
    }
    const double scale = p.magnitude(1.0);
    while (seq.back().degree() > 0) {
        Polynomial r = seq[seq.size() - 2].divmod(seq.back()).remainder;
        std::vector<double> c = r.coefficients();
        // Coefficients at rounding level are treated as zero.
        for (double& v : c) {
            if (std::abs(v) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
                v = 0.0;
            }
            v = -v;
        }
        Polynomial next(std::move(c));
        if (next.degree() < 0) {
            break;
        }
        seq.push_back(next);
    }
    return seq;
}

int sturm_count(const std::vector<Polynomial>& seq, double a, double b) {
    auto changes = [&](double x) {
        int count = 0;
        int last = 0;
        for (const Polynomial& q : seq) {
            const int s = sign_of(q(x));
            if (s == 0) {
                continue;
            }
            if (last != 0 && s != last) {
                ++count;
            }
            last = s;
        }
        return count;
    };
    return changes(a) - changes(b);
}

} // namespace cnlse
