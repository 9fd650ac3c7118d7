#include "cnlse/weierstrass.hpp"

#include "cnlse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cnlse {

namespace {

constexpr std::size_t laurent_terms = 64;

double cube(double x) { return x * x * x; }

complex cubic_value(complex s, EllipticInvariants inv) {
    return 4.0 * s * s * s - inv.g2 * s - inv.g3;
}

complex newton_polish(complex s, EllipticInvariants inv) {
    for (int i = 0; i < 2; ++i) {
        const complex d = 12.0 * s * s - inv.g2;
        if (std::abs(d) == 0.0) {
            break;
        }
        const complex step = cubic_value(s, inv) / d;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
            break;
        }
        s -= step;
    }
    return s;
}

double double_root_of(EllipticInvariants inv) {
    return inv.g2 != 0.0 ? -1.5 * inv.g3 / inv.g2 : 0.0;
}

} // namespace

PoleProximity::PoleProximity(complex z, complex lattice_point)
    : Error([&] {
          std::ostringstream os;
          os.precision(17);
          os << "argument " << z << " lies within the pole exclusion radius of lattice point "
             << lattice_point;
          return os.str();
      }()),
      z_(z),
      lattice_point_(lattice_point) {}

double discriminant(EllipticInvariants inv) {
    return cube(inv.g2) - 27.0 * inv.g3 * inv.g3;
}

double discriminant_scale(EllipticInvariants inv) {
    return std::max(std::abs(cube(inv.g2)), 27.0 * inv.g3 * inv.g3);
}

bool is_degenerate(EllipticInvariants inv, double rel_tol) {
    return std::abs(discriminant(inv)) <= rel_tol * discriminant_scale(inv);
}

double CubicRootTriple::real_root() const {
    if (all_real) {
        return e[0].real();
    }
    // Exactly one root carries no imaginary part.
    const auto it = std::min_element(e.begin(), e.end(), [](complex a, complex b) {
        return std::abs(a.imag()) < std::abs(b.imag());
    });
    return it->real();
}

CubicRootTriple cubic_roots(EllipticInvariants inv) {
    CubicRootTriple out;
    if (is_degenerate(inv)) {
        const double c = double_root_of(inv);
        out.e = {complex(c), complex(c), complex(-2.0 * c)};
        out.all_real = true;
    } else if (discriminant(inv) > 0.0) {
        // Trigonometric form for three real roots of s^3 + p s + q.
        const double p = -inv.g2 / 4.0;
        const double q = -inv.g3 / 4.0;
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0);
        const double theta = std::acos(arg);
        for (int k = 0; k < 3; ++k) {
            const double s = r * std::cos(theta / 3.0 - 2.0 * std::numbers::pi * k / 3.0);
            out.e[k] = complex(newton_polish(complex(s), inv).real());
        }
        out.all_real = true;
    } else {
        const double p = -inv.g2 / 4.0;
        const double q = -inv.g3 / 4.0;
        const double sd = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        const double u = std::cbrt(-q / 2.0 + sd) + std::cbrt(-q / 2.0 - sd);
        const double ur = newton_polish(complex(u), inv).real();
        const double im = std::sqrt(std::max(0.0, 3.0 * ur * ur + 4.0 * p)) / 2.0;
        out.e = {complex(ur), newton_polish(complex(-ur / 2.0, im), inv),
                 newton_polish(complex(-ur / 2.0, -im), inv)};
        out.all_real = false;
    }
    std::sort(out.e.begin(), out.e.end(), [](complex a, complex b) {
        if (a.real() != b.real()) {
            return a.real() > b.real();
        }
        return a.imag() > b.imag();
    });
    return out;
}

complex carlson_rf(complex x, complex y, complex z) {
    const int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
    if (zeros >= 2) {
        return complex(infinity);
    }
    static const double tol =
        std::pow(3.0 * std::numeric_limits<double>::epsilon() * 0.01, 1.0 / 8.0);
    const complex a0 = (x + y + z) / 3.0;
    complex an = a0;
    const double q =
        std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)}) / tol;
    complex x0 = x, y0 = y, z0 = z;
    double mul = 1.0;
    for (int it = 0; it < 200 && q >= mul * std::abs(an); ++it) {
        const complex lam = std::sqrt(x0) * std::sqrt(y0) + std::sqrt(y0) * std::sqrt(z0) +
                            std::sqrt(z0) * std::sqrt(x0);
        an = (an + lam) / 4.0;
        x0 = (x0 + lam) / 4.0;
        y0 = (y0 + lam) / 4.0;
        z0 = (z0 + lam) / 4.0;
        mul *= 4.0;
    }
    const complex xx = (a0 - x) / (mul * an);
    const complex yy = (a0 - y) / (mul * an);
    const complex zz = -(xx + yy);
    const complex e2 = xx * yy - zz * zz;
    const complex e3 = xx * yy * zz;
    return (e3 * (6930.0 * e3 + e2 * (15015.0 * e2 - 16380.0) + 17160.0) +
            e2 * ((10010.0 - 5775.0 * e2) * e2 - 24024.0) + 240240.0) /
           (240240.0 * std::sqrt(an));
}

LatticeData real_half_period(EllipticInvariants inv) {
    const WeierstrassP wp(inv);
    return {wp.real_half_period(), wp.degenerate()};
}

WeierstrassP::WeierstrassP(EllipticInvariants inv, double pole_exclusion)
    : inv_(inv), pole_exclusion_(pole_exclusion), roots_(cubic_roots(inv)) {
    using std::numbers::pi;
    degenerate_ = is_degenerate(inv);
    if (degenerate_) {
        const double c = double_root_of(inv);
        double_root_ = c;
        if (c > 0.0) {
            generators_ = {complex(0.0, pi / std::sqrt(3.0 * c))};
            real_min_ = c;
        } else if (c < 0.0) {
            real_period_ = pi / std::sqrt(-3.0 * c);
            generators_ = {complex(real_period_)};
            real_min_ = -2.0 * c;
        } else {
            real_min_ = 0.0;
        }
    } else if (roots_.all_real) {
        const double e1 = roots_.e[0].real();
        const double e2 = roots_.e[1].real();
        const double e3 = roots_.e[2].real();
        const double w1 = 2.0 * carlson_rf(0.0, e1 - e2, e1 - e3).real();
        const double w3 = 2.0 * carlson_rf(0.0, e1 - e3, e2 - e3).real();
        generators_ = {complex(w1), complex(0.0, w3)};
        real_period_ = w1;
        real_min_ = e1;
    } else {
        const double r = roots_.real_root();
        const complex w = roots_.e[0].imag() > 0.0 ? roots_.e[0]
                        : roots_.e[1].imag() > 0.0 ? roots_.e[1]
                                                   : roots_.e[2];
        const double wr = carlson_rf(0.0, r - w, r - std::conj(w)).real();
        const double wi = carlson_rf(0.0, w - r, std::conj(w) - r).real();
        generators_ = {complex(wr, wi), complex(wr, -wi)};
        real_period_ = 2.0 * wr;
        real_min_ = r;
    }

    for (const complex& g : generators_) {
        shortest_ = std::min(shortest_, std::abs(g));
    }
    if (generators_.size() == 2) {
        shortest_ = std::min({shortest_, std::abs(generators_[0] + generators_[1]),
                              std::abs(generators_[0] - generators_[1])});
    }
    if (std::isfinite(shortest_)) {
        series_radius_ = shortest_ / 4.0;
    } else {
        const double scale = std::max(std::pow(std::abs(inv.g2), 0.25), std::cbrt(std::sqrt(std::abs(inv.g3))));
        series_radius_ = scale > 0.0 ? 0.5 / scale : infinity;
    }

    // Scaled Laurent coefficients chat_k = c_k r^(2k) of
    // P(z) = z^-2 + sum_{k>=2} c_k z^(2k-2).
    laurent_.assign(laurent_terms + 1, 0.0);
    if (std::isfinite(series_radius_)) {
        const double r2 = series_radius_ * series_radius_;
        laurent_[2] = inv.g2 * r2 * r2 / 20.0;
        laurent_[3] = inv.g3 * r2 * r2 * r2 / 28.0;
        for (std::size_t k = 4; k <= laurent_terms; ++k) {
            double s = 0.0;
            for (std::size_t m = 2; m + 2 <= k; ++m) {
                s += laurent_[m] * laurent_[k - m];
            }
            laurent_[k] = 3.0 * s / static_cast<double>((2 * k + 1) * (k - 3));
        }
    }

    if (!degenerate_ && generators_.size() == 2) {
        const complex w1 = generators_[0];
        const complex w2 = generators_[1];
        const std::array<complex, 3> base{w1 / 2.0, w2 / 2.0, (w1 + w2) / 2.0};
        std::array<int, 3> which{};
        for (int j = 0; j < 3; ++j) {
            const complex v = series_and_duplicate(base[j]).wp;
            int best = 0;
            for (int i = 1; i < 3; ++i) {
                if (std::abs(v - roots_.e[i]) < std::abs(v - roots_.e[best])) {
                    best = i;
                }
            }
            which[j] = best;
        }
        auto add = [&](complex point, int idx) {
            const complex e = roots_.e[idx];
            const complex k = (e - roots_.e[(idx + 1) % 3]) * (e - roots_.e[(idx + 2) % 3]);
            half_periods_.push_back({point, e, k});
            half_periods_.push_back({-point, e, k});
        };
        add(base[0], which[0]);
        add(base[1], which[1]);
        add(base[2], which[2]);
        add((w1 - w2) / 2.0, which[2]);
    }
}

complex WeierstrassP::nearest_lattice_point(complex z) const {
    if (generators_.empty()) {
        return 0.0;
    }
    if (generators_.size() == 1) {
        const complex w = generators_[0];
        const double n = std::round((z * std::conj(w)).real() / std::norm(w));
        return n * w;
    }
    const complex w1 = generators_[0];
    const complex w2 = generators_[1];
    // Solve z = u w1 + v w2 for real (u, v).
    const double det = w1.real() * w2.imag() - w2.real() * w1.imag();
    const double u = (z.real() * w2.imag() - w2.real() * z.imag()) / det;
    const double v = (w1.real() * z.imag() - z.real() * w1.imag()) / det;
    const double u0 = std::round(u);
    const double v0 = std::round(v);
    complex best = u0 * w1 + v0 * w2;
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            const complex cand = (u0 + i) * w1 + (v0 + j) * w2;
            if (std::abs(z - cand) < std::abs(z - best)) {
                best = cand;
            }
        }
    }
    return best;
}

double WeierstrassP::real_lattice_distance(double x) const {
    if (real_period_ == infinity) {
        return std::abs(x);
    }
    return std::abs(x - real_period_ * std::round(x / real_period_));
}

WpValue WeierstrassP::operator()(complex z) const {
    const complex lattice = nearest_lattice_point(z);
    const complex zr = z - lattice;
    if (std::abs(zr) < pole_exclusion_) {
        throw PoleProximity(z, lattice);
    }
    if (degenerate_) {
        return closed_form(zr);
    }
    // Evaluate from whichever of {0, half periods} is nearest.
    const HalfPeriod* best = nullptr;
    double best_dist = std::abs(zr);
    for (const HalfPeriod& h : half_periods_) {
        const double d = std::abs(zr - h.point);
        if (d < best_dist) {
            best_dist = d;
            best = &h;
        }
    }
    if (best == nullptr) {
        return series_and_duplicate(zr);
    }
    const complex u = zr - best->point;
    if (u == 0.0) {
        return {best->root, 0.0};
    }
    // P(h + u) = e + K / (P(u) - e),  K = (e - e') (e - e'').
    const WpValue v = series_and_duplicate(u);
    const complex q = v.wp - best->root;
    return {best->root + best->k / q, -best->k * v.wp_prime / (q * q)};
}

WpValue WeierstrassP::unreduced(complex z) const {
    if (std::abs(z) < pole_exclusion_) {
        throw PoleProximity(z, 0.0);
    }
    return series_and_duplicate(z);
}

RealWpValue WeierstrassP::real(double x) const {
    const WpValue v = (*this)(complex(x, 0.0));
    return {v.wp.real(), v.wp_prime.real()};
}

WpValue WeierstrassP::closed_form(complex z) const {
    const double c = double_root_;
    if (c > 0.0) {
        const double k = std::sqrt(3.0 * c);
        const complex sh = std::sinh(k * z);
        const complex ch = std::cosh(k * z);
        return {c + 3.0 * c / (sh * sh), -6.0 * c * k * ch / (sh * sh * sh)};
    }
    if (c < 0.0) {
        const double k = std::sqrt(-3.0 * c);
        const complex sn = std::sin(k * z);
        const complex cs = std::cos(k * z);
        return {c - 3.0 * c / (sn * sn), 6.0 * c * k * cs / (sn * sn * sn)};
    }
    return {1.0 / (z * z), -2.0 / (z * z * z)};
}

WpValue WeierstrassP::series_and_duplicate(complex z) const {
    if (inv_.g2 == 0.0 && inv_.g3 == 0.0) {
        return {1.0 / (z * z), -2.0 / (z * z * z)};
    }
    int n = 0;
    complex w = z;
    while (std::abs(w) > series_radius_) {
        w /= 2.0;
        ++n;
    }
    // Coefficients are stored scaled by the series radius r:
    // P(w) = r^-2 [ (r/w)^2 + sum_k chat_k (w/r)^(2k-2) ].
    const double r = series_radius_;
    const complex x = w / r;
    const complex x2 = x * x;
    complex s = 0.0;
    complex ds = 0.0;
    for (std::size_t k = laurent_.size() - 1; k >= 2; --k) {
        s = s * x2 + laurent_[k];
        ds = ds * x2 + static_cast<double>(2 * k - 2) * laurent_[k];
    }
    complex p = (1.0 / x2 + s * x2) / (r * r);
    complex dp = (-2.0 / (x2 * x) + ds * x) / (r * r * r);
    for (int i = 0; i < n; ++i) {
        const complex slope = (6.0 * p * p - inv_.g2 / 2.0) / dp;
        const complex p2 = -2.0 * p + slope * slope / 4.0;
        dp = -dp - slope * (p2 - p);
        p = p2;
    }
    return {p, dp};
}

double WeierstrassP::inverse_real(double v) const {
    if (v < real_min_ - 1e-12 * std::max(1.0, std::abs(real_min_))) {
        throw DomainError("inverse_real: value below the real-axis minimum of P");
    }
    if (degenerate_) {
        const double c = double_root_;
        if (c > 0.0) {
            if (v <= c) {
                return infinity;
            }
            const double k = std::sqrt(3.0 * c);
            return std::asinh(std::sqrt(3.0 * c / (v - c))) / k;
        }
        if (c < 0.0) {
            const double k = std::sqrt(-3.0 * c);
            return std::asin(std::min(1.0, std::sqrt(-3.0 * c / (v - c)))) / k;
        }
        return v > 0.0 ? 1.0 / std::sqrt(v) : infinity;
    }
    const complex r = carlson_rf(complex(v) - roots_.e[0], complex(v) - roots_.e[1],
                                 complex(v) - roots_.e[2]);
    return std::min(r.real(), real_half_period());
}

WpValue wp_eval(complex z, EllipticInvariants inv, double pole_exclusion) {
    return WeierstrassP(inv, pole_exclusion)(z);
}

complex wp_degenerate(complex z, EllipticInvariants inv, double rel_tol) {
    if (!is_degenerate(inv, rel_tol)) {
        throw NotDegenerate("wp_degenerate: invariants are not degenerate");
    }
    const double c = double_root_of(inv);
    if (c > 0.0) {
        const complex sh = std::sinh(std::sqrt(3.0 * c) * z);
        return c + 3.0 * c / (sh * sh);
    }
    if (c < 0.0) {
        const complex sn = std::sin(std::sqrt(-3.0 * c) * z);
        return c - 3.0 * c / (sn * sn);
    }
    return 1.0 / (z * z);
}

} // namespace cnlse
