#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "poa/caps.hpp"
#include "poa/latency.hpp"

namespace poa {

enum class MetricKind { poa, cr_selfish, cr_cooperative };
enum class Mode { weighted, unweighted };

// Efficiency metric: approximate price of anarchy or competitive ratio of
// one-round walks (selfish / cooperative), at approximation level epsilon.
struct Metric {
    MetricKind kind = MetricKind::poa;
    double epsilon = 0.0;
};

inline const char* metric_name(MetricKind k) {
    switch (k) {
        case MetricKind::poa: return "poa";
        case MetricKind::cr_selfish: return "crs";
        case MetricKind::cr_cooperative: return "crc";
    }
    return "?";
}

inline MetricKind metric_from_name(const std::string& s) {
    if (s == "poa") return MetricKind::poa;
    if (s == "crs") return MetricKind::cr_selfish;
    if (s == "crc") return MetricKind::cr_cooperative;
    throw std::invalid_argument("unknown metric: " + s);
}

namespace detail {
inline double sum_f_1_to_k(const LatencyFunction& f, int k) {
    double s = 0.0;
    for (int h = 1; h <= k; ++h) s += f.eval(h);
    return s;
}
inline bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) <= tol * std::max(1.0, std::abs(x));
}
}  // namespace detail

// The per-resource dual-feasibility quantity beta.
//   weighted  : k, o real > 0
//   unweighted: k integer >= 0, o integer >= 1
inline double beta(Mode mode, const Metric& m, double k, double o, const LatencyFunction& f) {
    double eps = m.epsilon;
    if (mode == Mode::weighted) {
        if (!(k > 0.0) || !(o > 0.0))
            throw std::invalid_argument("beta(weighted): k, o must be > 0");
        switch (m.kind) {
            case MetricKind::poa: return -k * f.eval(k) + (1 + eps) * o * f.eval(k + o);
            case MetricKind::cr_selfish:
                return -f.integral(k) + (1 + eps) * o * f.eval(k + o);
            case MetricKind::cr_cooperative:
                return -k * f.eval(k) + (1 + eps) * ((k + o) * f.eval(k + o) - k * f.eval(k));
        }
    } else {
        if (!detail::near_integer(k) || !detail::near_integer(o) || k < -0.5 || o < 0.5)
            throw std::invalid_argument("beta(unweighted): k integer >= 0, o integer >= 1");
        int ki = static_cast<int>(std::llround(k));
        switch (m.kind) {
            case MetricKind::poa: return -k * f.eval(k) + (1 + eps) * o * f.eval(k + 1);
            case MetricKind::cr_selfish:
                return -detail::sum_f_1_to_k(f, ki) + (1 + eps) * o * f.eval(k + 1);
            case MetricKind::cr_cooperative:
                return -k * f.eval(k) + (1 + eps) * ((k + 1) * f.eval(k + 1) - k * f.eval(k));
        }
    }
    return 0.0;
}

// The parametric dual-feasibility ratio gamma(EM, x, k, o, f).
inline double gamma_param(Mode mode, const Metric& m, double x, double k, double o,
                          const LatencyFunction& f) {
    double den = o * f.eval(o);
    if (!(den > 0.0)) throw std::invalid_argument("gamma_param: o f(o) must be > 0");
    return (k * f.eval(k) + x * beta(mode, m, k, o, f)) / den;
}

// Case-1 / Case-2 witness certifying a lower bound on gamma and
// parametrizing the instance generators.
struct WitnessTuple {
    bool case2 = false;
    // Case 1 uses (k1, o1, f1) only.
    double k1 = 0.0, o1 = 1.0;
    LatencyFunction f1;
    double k2 = 0.0, o2 = 1.0;
    LatencyFunction f2;
    double alpha1 = 0.0, alpha2 = 0.0;  // Case 2 multipliers

    static WitnessTuple case_1(double k, double o, LatencyFunction f) {
        WitnessTuple w;
        w.case2 = false;
        w.k1 = k;
        w.o1 = o;
        w.f1 = std::move(f);
        w.k2 = w.k1;
        w.o2 = w.o1;
        w.f2 = w.f1;
        return w;
    }
    // (k1,o1,f1) is the beta<0 tuple, (k2,o2,f2) the beta>0 tuple.
    static WitnessTuple case_2(double k1, double k2, double o1, double o2, LatencyFunction f1,
                               LatencyFunction f2, double alpha1, double alpha2) {
        WitnessTuple w;
        w.case2 = true;
        w.k1 = k1;
        w.o1 = o1;
        w.f1 = std::move(f1);
        w.k2 = k2;
        w.o2 = o2;
        w.f2 = std::move(f2);
        w.alpha1 = alpha1;
        w.alpha2 = alpha2;
        return w;
    }
};

// The lower-bound value a witness certifies: k f(k)/(o f(o)) for Case 1,
// the alpha-weighted ratio for Case 2.
inline double witness_value(const WitnessTuple& w) {
    if (!w.case2) return w.k1 * w.f1.eval(w.k1) / (w.o1 * w.f1.eval(w.o1));
    double num = w.alpha1 * w.k1 * w.f1.eval(w.k1) + w.alpha2 * w.k2 * w.f2.eval(w.k2);
    double den = w.alpha1 * w.o1 * w.f1.eval(w.o1) + w.alpha2 * w.o2 * w.f2.eval(w.o2);
    return num / den;
}

// Recomputes the Case-2 multipliers from beta and validates their signs.
inline void refresh_case2_alphas(Mode mode, const Metric& m, WitnessTuple& w) {
    if (!w.case2) return;
    w.alpha1 = beta(mode, m, w.k2, w.o2, w.f2);
    w.alpha2 = -beta(mode, m, w.k1, w.o1, w.f1);
    if (!(w.alpha1 > 0.0) || !(w.alpha2 > 0.0))
        throw std::invalid_argument("case-2 witness: alpha signs invalid");
}

// Latency class over which gamma is taken: Polynomial(d) or an explicit
// finite set of latency functions.
struct LatencyClass {
    bool polynomial = true;
    int degree = 1;
    std::vector<LatencyFunction> members;

    static LatencyClass poly(int d) {
        if (d < 0) throw std::invalid_argument("LatencyClass: degree < 0");
        LatencyClass c;
        c.polynomial = true;
        c.degree = d;
        return c;
    }
    static LatencyClass explicit_set(std::vector<LatencyFunction> fs) {
        if (fs.empty()) throw std::invalid_argument("LatencyClass: empty set");
        LatencyClass c;
        c.polynomial = false;
        c.members = std::move(fs);
        return c;
    }
};

// ---------------------------------------------------------------------------
// Polynomial closed forms.

// The unique positive root of the polynomial-class defining equation:
//   poa : k^{d+1} = (1+eps)(k+1)^d
//   crs : k^{d+1}/(d+1) = (1+eps)(k+1)^d
//   crc : (2+eps) k^{d+1} = (1+eps)(k+1)^{d+1}
// Solved on the log scale, where the left-hand side is strictly increasing.
inline double poly_phi(MetricKind kind, double eps, int d) {
    if (d < 1) throw std::invalid_argument("poly_phi: d >= 1 required");
    if (!(eps >= 0.0)) throw std::invalid_argument("poly_phi: eps >= 0 required");
    if (kind == MetricKind::cr_cooperative) {
        double q = std::pow((1 + eps) / (2 + eps), 1.0 / (d + 1));
        return q / (1.0 - q);
    }
    double c = (kind == MetricKind::poa) ? 0.0 : std::log(static_cast<double>(d + 1));
    auto h = [&](double k) {
        return (d + 1) * std::log(k) - d * std::log(k + 1) - c - std::log1p(eps);
    };
    auto hp = [&](double k) { return (d + 1) / k - static_cast<double>(d) / (k + 1); };
    double lo = 1.0, hi = 2.0;
    while (h(hi) < 0.0) hi *= 2.0;
    double k = hi;
    for (int it = 0; it < 200; ++it) {
        double v = h(k);
        if (v > 0.0) hi = std::min(hi, k);
        else lo = std::max(lo, k);
        double step = v / hp(k);
        double knext = k - step;
        if (!(knext > lo && knext < hi)) knext = 0.5 * (lo + hi);
        if (std::abs(knext - k) <= 1e-15 * k) { k = knext; break; }
        k = knext;
    }
    // scaled residual on the original equation
    double lhs = std::pow(k, d + 1) * ((kind == MetricKind::cr_selfish) ? 1.0 / (d + 1) : 1.0);
    double rhs = (1 + eps) * std::pow(k + 1, d);
    if (std::abs(lhs - rhs) > 1e-12 * std::max(lhs, rhs))
        throw std::runtime_error("poly_phi: root polish failed");
    return k;
}

// gamma_W(EM, W(P(d))) = phi^{d+1} = k f(k)/f(1) at the beta = 0 witness
// (k = phi, o = 1, f = t^d). Note: phi^{d+1}, not phi^d; the latter does not
// reproduce any of the published table values while the beta = 0 identity
// k f(k)/f(1) forces the exponent d+1.
inline double poly_gamma_weighted(MetricKind kind, double eps, int d) {
    double k = poly_phi(kind, eps, d);
    return std::pow(k, d + 1);
}

struct ClosedFormResult {
    double value = 0.0;
    WitnessTuple witness;
    // crs: the integer-bracket witness is a lower bound, conjectured tight for d > 3.
    bool lower_bound_only = false;
};

// Unweighted polynomial closed forms. PoA/CRc: exact characterization via
// the real root of beta_U(EM, k, 1, t^d) = 0, Case 1 if integral, else
// Case 2 on the integer bracket. CRs: highest-k witness with beta >= 0
// (a lower bound; its tightness beyond d = 3 is an open conjecture).
inline ClosedFormResult unweighted_closed_form(MetricKind kind, double eps, int d) {
    if (d < 1) throw std::invalid_argument("unweighted_closed_form: d >= 1 required");
    LatencyFunction f = LatencyFunction::monomial(d);
    Metric m{kind, eps};
    ClosedFormResult r;
    if (kind == MetricKind::poa || kind == MetricKind::cr_cooperative) {
        double k = poly_phi(kind, eps, d);
        if (detail::near_integer(k)) {
            double ki = std::round(k);
            r.witness = WitnessTuple::case_1(ki, 1.0, f);
            r.value = witness_value(r.witness);
        } else {
            double k2 = std::floor(k), k1 = k2 + 1.0;
            double a1 = beta(Mode::unweighted, m, k2, 1.0, f);
            double a2 = -beta(Mode::unweighted, m, k1, 1.0, f);
            r.witness = WitnessTuple::case_2(k1, k2, 1.0, 1.0, f, f, a1, a2);
            r.value = witness_value(r.witness);
        }
        return r;
    }
    // cr_selfish: highest non-negative integer k with beta_U(crs, k, 1, f) >= 0
    int k = 0;
    while (true) {
        double b = beta(Mode::unweighted, m, k + 1, 1.0, f);
        if (b < 0.0) break;
        ++k;
        if (k > 100000) throw std::runtime_error("unweighted_closed_form: crs scan runaway");
    }
    double bk = beta(Mode::unweighted, m, k, 1.0, f);
    double scale = std::max(1.0, (1 + eps) * f.eval(k + 1));
    if (std::abs(bk) <= 1e-9 * scale) {
        r.witness = WitnessTuple::case_1(k, 1.0, f);
    } else {
        double a1 = bk, a2 = -beta(Mode::unweighted, m, k + 1, 1.0, f);
        r.witness = WitnessTuple::case_2(k + 1, k, 1.0, 1.0, f, f, a1, a2);
    }
    r.value = witness_value(r.witness);
    r.lower_bound_only = true;
    return r;
}

// ---------------------------------------------------------------------------
// Numeric inf-sup search (Eq. (3)/(6)) and witness extraction.

struct GammaBoundResult {
    double value = 0.0;          // inf_x sup_{k,o,f} gamma(EM, x, k, o, f)
    double x = 1.0;              // achieving x
    WitnessTuple witness;        // best concrete tuple(s) found (certified lower bound)
    double witness_value = 0.0;  // value certified by the witness
    bool lower_bound_only = false;  // witness < value beyond tolerance (crs, d>3)
};

class divergence_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double ipow(double b, int e) {
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

struct GridTuple {
    double value = -kInf;
    double k = 0.0, o = 1.0;
    int h = -1;                   // monomial degree (poly classes)
    int member = -1;              // index into explicit set
    double beta_val = 0.0;
};

struct SupResult {
    double sup = -kInf;
    bool divergent = false;
    std::string direction;
    GridTuple best_pos;  // best tuple with beta >= 0
    GridTuple best_neg;  // best tuple with beta < 0
    GridTuple best;
};

// Precomputed per-monomial tables for the unweighted integer grid.
struct UnweightedTables {
    int d = 1;
    double eps = 0.0;
    MetricKind kind = MetricKind::poa;
    int kcap = 0, ocap = 0;
    // per h: kf[k] = k^{h+1}, fk1[k] = (k+1)^h, T[k] metric load term
    std::vector<std::vector<double>> kf, fk1, T;

    UnweightedTables(MetricKind k_, double e_, int d_, const Caps& caps)
        : d(d_), eps(e_), kind(k_), kcap(caps.k_cap), ocap(caps.o_cap) {
        kf.resize(d + 1);
        fk1.resize(d + 1);
        T.resize(d + 1);
        for (int h = 0; h <= d; ++h) {
            auto& a = kf[h];
            auto& b = fk1[h];
            auto& t = T[h];
            a.resize(kcap + 1);
            b.resize(kcap + 1);
            t.resize(kcap + 1);
            double prefix = 0.0;
            for (int k = 0; k <= kcap; ++k) {
                double kd = ipow(k, h);
                a[k] = kd * k;            // k^{h+1}
                b[k] = ipow(k + 1, h);    // (k+1)^h
                if (kind == MetricKind::poa) t[k] = a[k];
                else if (kind == MetricKind::cr_selfish) {
                    if (k > 0) prefix += kd;
                    t[k] = prefix;        // sum_{j<=k} j^h
                } else {
                    // (1+eps)((k+1)^{h+1} - k^{h+1}) - k^{h+1}, the full beta
                    t[k] = (1 + eps) * (ipow(k + 1, h + 1) - a[k]) - a[k];
                }
            }
        }
    }
};

// sup over the capped integer grid plus asymptotic ray families k = r*o,
// o -> inf (whose limit values belong to the closure of the lattice sup).
inline SupResult unweighted_sup(const UnweightedTables& tb, double x) {
    SupResult res;
    auto consider = [&](double v, double k, double o, int h, double bval) {
        if (v > res.best.value) res.best = {v, k, o, h, -1, bval};
        if (bval >= 0.0) {
            if (v > res.best_pos.value) res.best_pos = {v, k, o, h, -1, bval};
        } else {
            if (v > res.best_neg.value) res.best_neg = {v, k, o, h, -1, bval};
        }
        if (v > res.sup) res.sup = v;
    };
    for (int h = 0; h <= tb.d; ++h) {
        const auto& kf = tb.kf[h];
        const auto& fk1 = tb.fk1[h];
        const auto& T = tb.T[h];
        if (tb.kind == MetricKind::cr_cooperative) {
            for (int k = 0; k <= tb.kcap; ++k) {
                double bval = T[k];
                consider(kf[k] + x * bval, k, 1.0, h, bval);
            }
            continue;
        }
        for (int k = 0; k <= tb.kcap; ++k) {
            double A = kf[k] - x * T[k];
            double B = x * (1 + tb.eps) * fk1[k];
            int cand[4] = {1, tb.ocap, 1, 1};
            int ncand = 2;
            if (h >= 1 && A < 0.0 && B > 0.0) {
                double oo = -(h + 1) * A / (h * B);
                cand[2] = static_cast<int>(std::floor(oo));
                cand[3] = cand[2] + 1;
                ncand = 4;
            }
            for (int c = 0; c < ncand; ++c) {
                int o = std::clamp(cand[c], 1, tb.ocap);
                double v = (A + B * o) / ipow(o, h + 1);
                double bval = -T[k] + (1 + tb.eps) * o * fk1[k];
                consider(v, k, o, h, bval);
            }
        }
        // ray family
        double c = (tb.kind == MetricKind::poa) ? 1.0 : 1.0 / (h + 1);
        double slope = 1.0 - x * c;
        if (h == 0) {
            if (slope > 0.0) {
                res.divergent = true;
                res.direction = "k -> inf with o ~ k (h=0)";
                res.sup = kInf;
                return res;
            }
            if (double v = x * (1 + tb.eps); v > res.sup) res.sup = v;
        } else {
            if (slope >= 0.0) {
                res.divergent = true;
                res.direction = "k/o ray, h=" + std::to_string(h);
                res.sup = kInf;
                return res;
            }
            double r = h * x * (1 + tb.eps) / ((h + 1) * (x * c - 1.0));
            double v = ipow(r, h + 1) * slope + x * (1 + tb.eps) * ipow(r, h);
            if (v > res.sup) res.sup = v;  // limit value, not a concrete witness
        }
    }
    return res;
}

// sup over a continuous log grid in (k, o) for explicit weighted classes.
inline SupResult weighted_explicit_sup(const Metric& m, std::span<const LatencyFunction> fs,
                                       double x) {
    SupResult res;
    auto value = [&](double k, double o, const LatencyFunction& f, double& bval) {
        bval = beta(Mode::weighted, m, k, o, f);
        return (k * f.eval(k) + x * bval) / (o * f.eval(o));
    };
    auto consider = [&](double v, double k, double o, int mi, double bval) {
        if (v > res.best.value) res.best = {v, k, o, -1, mi, bval};
        if (bval >= 0.0) {
            if (v > res.best_pos.value) res.best_pos = {v, k, o, -1, mi, bval};
        } else if (v > res.best_neg.value) {
            res.best_neg = {v, k, o, -1, mi, bval};
        }
        if (v > res.sup) res.sup = v;
    };
    const int N = 160;
    const double lo = 1e-3, hi = 1e4;
    const double step = std::log(hi / lo) / (N - 1);
    for (int mi = 0; mi < static_cast<int>(fs.size()); ++mi) {
        const auto& f = fs[mi];
        double bestv = -kInf, bestk = lo, besto = lo;
        for (int a = 0; a < N; ++a) {
            double k = lo * std::exp(step * a);
            for (int b = 0; b < N; ++b) {
                double o = lo * std::exp(step * b);
                double bval;
                double v = value(k, o, f, bval);
                consider(v, k, o, mi, bval);
                if (v > bestv) {
                    bestv = v;
                    bestk = k;
                    besto = o;
                }
            }
        }
        if (bestk > hi * 0.5) {
            res.divergent = true;
            res.direction = "k at grid boundary (member " + std::to_string(mi) + ")";
            res.sup = kInf;
            return res;
        }
        // local refinement around the best cell
        double span = step;
        for (int round = 0; round < 24; ++round) {
            double base_k = bestk, base_o = besto;
            for (int a = -2; a <= 2; ++a)
                for (int b = -2; b <= 2; ++b) {
                    double k = base_k * std::exp(span * a / 2.0);
                    double o = base_o * std::exp(span * b / 2.0);
                    if (k <= 0 || o <= 0) continue;
                    double bval;
                    double v = value(k, o, f, bval);
                    consider(v, k, o, mi, bval);
                    if (v > bestv) {
                        bestv = v;
                        bestk = k;
                        besto = o;
                    }
                }
            span *= 0.5;
        }
    }
    return res;
}

// Golden-section minimization of a convex-in-x supremum function. The
// bracket is first narrowed on a coarse grid to skip divergent regions.
template <typename F>
inline std::pair<double, double> minimize_over_x(F&& sup_at, double x_lo, double x_hi,
                                                 double tol = 1e-10) {
    const int COARSE = 160;
    double best = kInf, best_x = x_lo;
    std::vector<double> xs(COARSE);
    for (int i = 0; i < COARSE; ++i) {
        double t = static_cast<double>(i) / (COARSE - 1);
        xs[i] = x_lo * std::pow(x_hi / x_lo, t);
        double v = sup_at(xs[i]);
        if (v < best) {
            best = v;
            best_x = xs[i];
        }
    }
    if (!std::isfinite(best))
        throw divergence_error("gamma_bound: supremum diverges for every probed x");
    // bracket around the best coarse point
    double a = x_lo, b = x_hi;
    for (int i = 0; i < COARSE; ++i) {
        if (xs[i] < best_x) a = std::max(a, xs[i]);
        if (xs[i] > best_x && b == x_hi) b = xs[i];
    }
    const double g = 0.6180339887498949;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = sup_at(c), fd = sup_at(d);
    while (b - a > tol * std::max(1.0, std::abs(best_x))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = sup_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = sup_at(d);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, sup_at(xm)};
}

inline LatencyFunction tuple_latency(const LatencyClass& cls, const GridTuple& t) {
    if (t.h >= 0) return LatencyFunction::monomial(t.h);
    return cls.members[static_cast<std::size_t>(t.member)];
}

inline WitnessTuple witness_from_sup(Mode mode, const Metric& m, const LatencyClass& cls,
                                     const SupResult& s) {
    double scale = std::max({1.0, std::abs(s.best.value)});
    if (s.best_pos.h != -1 || s.best_pos.member != -1) {
        if (std::abs(s.best_pos.beta_val) <= 1e-7 * scale || s.best_neg.value == -kInf) {
            return WitnessTuple::case_1(s.best_pos.k, s.best_pos.o,
                                        tuple_latency(cls, s.best_pos));
        }
    }
    if (s.best_neg.value == -kInf || (s.best_pos.h == -1 && s.best_pos.member == -1))
        throw std::runtime_error("witness extraction: grid produced no usable tuples");
    WitnessTuple w = WitnessTuple::case_2(
        s.best_neg.k, s.best_pos.k, s.best_neg.o, s.best_pos.o, tuple_latency(cls, s.best_neg),
        tuple_latency(cls, s.best_pos), 0.0, 0.0);
    refresh_case2_alphas(mode, m, w);
    return w;
}

}  // namespace detail

// inf over x >= 1 of sup over (k, o, f in class) of gamma_param.
//  - weighted polynomial: closed form via poly_phi (o = 1 normalization,
//    valid since the class is closed under both scalings).
//  - unweighted: integer grid under the caps plus asymptotic ray families,
//    golden section over x (the supremum is convex in x).
//  - weighted explicit set: continuous log-grid search with refinement.
inline GammaBoundResult gamma_bound(Mode mode, const Metric& m, const LatencyClass& cls,
                                    const Caps& caps = Caps::from_env()) {
    GammaBoundResult r;
    // constant-only classes: every metric is exactly 1 + eps
    bool constant_only = cls.polynomial ? (cls.degree == 0) : [&] {
        for (const auto& f : cls.members)
            if (!f.is_polynomial() || f.degree() > 0) return false;
        return true;
    }();
    if (constant_only) {
        r.value = 1.0 + m.epsilon;
        r.x = 1.0;
        LatencyFunction c = cls.polynomial ? LatencyFunction::polynomial({1.0}) : cls.members[0];
        if (mode == Mode::weighted) {
            r.witness = WitnessTuple::case_1(1.0 + m.epsilon, 1.0, c);
        } else {
            // best integer pair k <= (1+eps) o
            double bestv = 1.0;
            int bk = 1, bo = 1;
            for (int o = 1; o <= std::min(caps.o_cap, 1000); ++o) {
                int k = static_cast<int>(std::floor((1.0 + m.epsilon) * o + 1e-12));
                if (k >= 1 && static_cast<double>(k) / o > bestv) {
                    bestv = static_cast<double>(k) / o;
                    bk = k;
                    bo = o;
                }
            }
            r.witness = WitnessTuple::case_1(bk, bo, c);
        }
        r.witness_value = witness_value(r.witness);
        r.lower_bound_only = r.witness_value < r.value - 1e-9 * r.value;
        return r;
    }

    if (mode == Mode::weighted && cls.polynomial) {
        int d = cls.degree;
        double k = poly_phi(m.kind, m.epsilon, d);
        r.value = std::pow(k, d + 1);
        // the achieving x: tangency of the concave-in-k envelope at k
        // (computed numerically from the monomial h = d problem)
        LatencyFunction f = LatencyFunction::monomial(d);
        auto sup_at = [&](double x) {
            // 1d golden over continuous k at o = 1 (valid for scaling-closed classes)
            double lo = 1e-9, hi = std::max(4.0 * k, 16.0);
            const double g = 0.6180339887498949;
            auto val = [&](double kk) { return gamma_param(Mode::weighted, m, x, kk, 1.0, f); };
            double a = lo, b = hi, c1 = b - g * (b - a), d1 = a + g * (b - a);
            double fc = val(c1), fd = val(d1);
            for (int it = 0; it < 200 && b - a > 1e-12 * b; ++it) {
                if (fc > fd) {
                    b = d1;
                    d1 = c1;
                    fd = fc;
                    c1 = b - g * (b - a);
                    fc = val(c1);
                } else {
                    a = c1;
                    c1 = d1;
                    fc = fd;
                    d1 = a + g * (b - a);
                    fd = val(d1);
                }
            }
            return val(0.5 * (a + b));
        };
        auto [xm, vm] = detail::minimize_over_x(sup_at, 1.0, caps.x_max);
        (void)vm;
        r.x = xm;
        r.witness = WitnessTuple::case_1(k, 1.0, f);
        r.witness_value = witness_value(r.witness);  // = value exactly (beta = 0)
        return r;
    }

    if (mode == Mode::unweighted && cls.polynomial) {
        detail::UnweightedTables tb(m.kind, m.epsilon, cls.degree, caps);
        auto sup_at = [&](double x) { return detail::unweighted_sup(tb, x).sup; };
        auto [xm, vm] = detail::minimize_over_x(sup_at, 1.0, caps.x_max);
        r.value = vm;
        r.x = xm;
        auto s = detail::unweighted_sup(tb, xm);
        r.witness = detail::witness_from_sup(Mode::unweighted, m, cls, s);
        r.witness_value = witness_value(r.witness);
        r.lower_bound_only = r.witness_value < r.value - 1e-6 * std::abs(r.value);
        return r;
    }

    // explicit sets
    if (mode == Mode::unweighted) {
        // integer grid over the provided functions; o on a dense-then-geometric
        // ladder, prefix sums kept incrementally
        std::vector<int> o_ladder;
        for (int o = 1; o <= std::min(64, caps.o_cap); ++o) o_ladder.push_back(o);
        for (int o = 96; o <= caps.o_cap; o = o + std::max(1, o / 2)) o_ladder.push_back(o);
        if (o_ladder.back() != caps.o_cap) o_ladder.push_back(caps.o_cap);
        auto sup_at_full = [&](double x) {
            detail::SupResult res;
            for (int mi = 0; mi < static_cast<int>(cls.members.size()); ++mi) {
                const auto& f = cls.members[mi];
                double prefix = 0.0;
                for (int k = 0; k <= caps.k_cap; ++k) {
                    if (k > 0) prefix += f.eval(k);
                    double kf = k * f.eval(k);
                    double T = (m.kind == MetricKind::cr_selfish) ? prefix : kf;
                    double fk1 = f.eval(k + 1);
                    for (int o : o_ladder) {
                        double bval = (m.kind == MetricKind::cr_cooperative)
                                          ? -kf + (1 + m.epsilon) * ((k + 1) * fk1 - kf)
                                          : -T + (1 + m.epsilon) * o * fk1;
                        double v = (kf + x * bval) / (o * f.eval(o));
                        if (v > res.sup) res.sup = v;
                        if (v > res.best.value) res.best = {v, (double)k, (double)o, -1, mi, bval};
                        if (bval >= 0.0) {
                            if (v > res.best_pos.value)
                                res.best_pos = {v, (double)k, (double)o, -1, mi, bval};
                        } else if (v > res.best_neg.value) {
                            res.best_neg = {v, (double)k, (double)o, -1, mi, bval};
                        }
                        if (m.kind == MetricKind::cr_cooperative) break;  // o = 1 optimal
                    }
                }
            }
            return res;
        };
        auto sup_scalar = [&](double x) { return sup_at_full(x).sup; };
        auto [xm, vm] = detail::minimize_over_x(sup_scalar, 1.0, caps.x_max);
        r.value = vm;
        r.x = xm;
        auto s = sup_at_full(xm);
        r.witness = detail::witness_from_sup(Mode::unweighted, m, cls, s);
        r.witness_value = witness_value(r.witness);
        r.lower_bound_only = r.witness_value < r.value - 1e-6 * std::abs(r.value);
        return r;
    }

    auto sup_scalar = [&](double x) {
        return detail::weighted_explicit_sup(m, cls.members, x).sup;
    };
    auto [xm, vm] = detail::minimize_over_x(sup_scalar, 1.0, caps.x_max);
    r.value = vm;
    r.x = xm;
    auto s = detail::weighted_explicit_sup(m, cls.members, xm);
    r.witness = detail::witness_from_sup(Mode::weighted, m, cls, s);
    r.witness_value = witness_value(r.witness);
    r.lower_bound_only = r.witness_value < r.value - 1e-6 * std::abs(r.value);
    return r;
}

// Searches for a Case-1 or Case-2 tuple certifying a value above M.
inline WitnessTuple find_witness(Mode mode, const Metric& m, const LatencyClass& cls, double M,
                                 const Caps& caps = Caps::from_env()) {
    if (cls.polynomial && cls.degree >= 1) {
        if (mode == Mode::weighted) {
            double k = poly_phi(m.kind, m.epsilon, cls.degree);
            WitnessTuple w =
                WitnessTuple::case_1(k, 1.0, LatencyFunction::monomial(cls.degree));
            if (witness_value(w) > M) return w;
        } else {
            auto cf = unweighted_closed_form(m.kind, m.epsilon, cls.degree);
            if (cf.value > M) return cf.witness;
        }
    }
    auto gb = gamma_bound(mode, m, cls, caps);
    if (gb.witness_value > M) return gb.witness;
    throw std::runtime_error(
        "find_witness: no tuple above M within caps (kcap=" + std::to_string(caps.k_cap) +
        ", ocap=" + std::to_string(caps.o_cap) + "); best found " +
        std::to_string(gb.witness_value));
}

// DLP feasibility: gamma * o f(o) >= k f(k) + x beta(EM, k, o, f) per tuple.
struct CertTuple {
    double k, o;
    LatencyFunction f;
};
struct CertificateCheck {
    bool feasible = true;
    std::vector<std::size_t> violations;
    double worst_slack = std::numeric_limits<double>::infinity();  // min slack seen
};

inline CertificateCheck dual_certificate_check(Mode mode, const Metric& m, double x, double gamma,
                                               std::span<const CertTuple> tuples) {
    if (!(x >= 1.0)) throw std::invalid_argument("dual_certificate_check: x >= 1 required");
    CertificateCheck out;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto& t = tuples[i];
        double lhs = gamma * t.o * t.f.eval(t.o);
        double rhs = t.k * t.f.eval(t.k) + x * beta(mode, m, t.k, t.o, t.f);
        double slack = lhs - rhs;
        out.worst_slack = std::min(out.worst_slack, slack);
        if (slack < -1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)})) {
            out.feasible = false;
            out.violations.push_back(i);
        }
    }
    return out;
}

}  // namespace poa
