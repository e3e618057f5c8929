#include "rkistab/stab_poly.hpp"

#include <cmath>
#include <sstream>
#include <type_traits>

namespace rkistab {

namespace {

using std::size_t;

template <class T>
struct Polys {
    BasicPoly<T> P;
    std::vector<BasicPoly<T>> Q;
};

// (I - alpha - z beta) is unit lower triangular with linear polynomial
// entries, so both solves are plain substitutions in the polynomial ring.
template <class T>
Polys<T> substitute(int s, const std::vector<std::vector<T>>& alpha, const std::vector<std::vector<T>>& beta,
                    const std::vector<T>& arow, const std::vector<T>& brow, const T& v_last, const std::vector<T>& v) {
    auto us = static_cast<size_t>(s);
    std::vector<BasicPoly<T>> x(us);
    for (size_t i = 0; i < us; ++i) {
        x[i] = BasicPoly<T>::constant(v[i]);
        for (size_t j = 0; j < i; ++j) x[i].add_linear_times(alpha[i][j], beta[i][j], x[j]);
        x[i].trim_exact();
    }
    Polys<T> out;
    out.P = BasicPoly<T>::constant(v_last);
    for (size_t j = 0; j < us; ++j) out.P.add_linear_times(arow[j], brow[j], x[j]);
    out.P.trim_exact();

    out.Q.assign(us, BasicPoly<T>());
    for (size_t jj = us; jj-- > 0;) {
        BasicPoly<T> q(std::vector<T>{arow[jj], brow[jj]});
        for (size_t i = jj + 1; i < us; ++i) q.add_linear_times(alpha[i][jj], beta[i][jj], out.Q[i]);
        q.trim_exact();
        out.Q[jj] = std::move(q);
    }
    return out;
}

InternalStabilitySet from_exact(Polys<Rational>&& r) {
    InternalStabilitySet iss;
    iss.P = to_double(r.P);
    for (const auto& q : r.Q) iss.Q.push_back(to_double(q));
    iss.P_exact = std::move(r.P);
    iss.Q_exact = std::move(r.Q);
    return iss;
}

InternalStabilitySet from_double(Polys<double>&& r) {
    InternalStabilitySet iss;
    iss.P = trimmed(r.P);
    for (const auto& q : r.Q) iss.Q.push_back(trimmed(q));
    return iss;
}

}  // namespace

InternalStabilitySet derive_internal_stability(const ShuOsherForm& so) {
    auto us = static_cast<size_t>(so.s);
    if (so.exact()) {
        const auto& al = *so.alpha_exact;
        const auto& be = *so.beta_exact;
        RatVec v = so.v_exact();
        return from_exact(substitute<Rational>(so.s, al, be, al[us], be[us], v[us], v));
    }
    Vec v = so.v();
    return from_double(substitute<double>(so.s, so.alpha, so.beta, so.alpha[us], so.beta[us], v[us], v));
}

InternalStabilitySet derive_internal_stability_butcher(const ButcherTableau& bt) {
    return derive_internal_stability(butcher_to_shu_osher(bt));
}

std::optional<InternalStabilitySet> derive_embedded_internal_stability(const ShuOsherForm& so) {
    if (!so.has_embedded()) return std::nullopt;
    if (so.exact() && so.alpha_hat_exact) {
        RatVec v = so.v_exact();
        Rational vh = 1;
        for (const auto& a : *so.alpha_hat_exact) vh -= a;
        return from_exact(substitute<Rational>(so.s, *so.alpha_exact, *so.beta_exact, *so.alpha_hat_exact,
                                               *so.beta_hat_exact, vh, v));
    }
    return from_double(substitute<double>(so.s, so.alpha, so.beta, *so.alpha_hat, *so.beta_hat, so.v_hat(), so.v()));
}

DefectCoefficients defect_coefficients(const ShuOsherForm& so, int p) {
    if (p < 1) throw std::invalid_argument("defect order must be >= 1");
    auto us = static_cast<size_t>(so.s);
    ButcherTableau bt = shu_osher_to_butcher(so);
    Vec v = so.v();

    // c and A extended by the update row: c_{s+1} = 1, A_{s+1,:} = b
    Vec c = bt.c;
    c.push_back(1.0);
    auto Aext = [&](size_t i, size_t j) -> double {
        if (j >= us) return 0.0;
        return i < us ? bt.A[i][j] : bt.b[j];
    };
    // E = [[I - alpha_{1:s}, 0], [-alpha_{s+1}, 1]]
    auto apply_E = [&](const Vec& x) {
        Vec y(us + 1);
        for (size_t i = 0; i <= us; ++i) {
            double acc = x[i];
            for (size_t j = 0; j < us; ++j) acc -= so.alpha[i][j] * x[j];
            y[i] = acc;
        }
        return y;
    };

    DefectCoefficients out;
    Vec theta0(us + 1);
    for (size_t i = 0; i <= us; ++i) {
        double rs = 0.0;
        for (size_t j = 0; j < us; ++j) rs += so.alpha[i][j];
        theta0[i] = 1.0 - v[i] - rs;
    }
    out.theta.push_back(theta0);

    double kfact = 1.0;
    for (int k = 1; k <= p; ++k) {
        kfact *= k;
        Vec w(us + 1);
        for (size_t i = 0; i <= us; ++i) {
            double acv = 0.0;
            for (size_t j = 0; j <= us; ++j) acv += Aext(i, j) * std::pow(c[j], k - 1);
            w[i] = std::pow(c[i], k) - k * acv;
        }
        Vec th = apply_E(w);
        for (double& x : th) x /= kfact;
        out.theta.push_back(th);
    }
    return out;
}

namespace {

template <class T>
bool negligible(const T& x, double scale);
template <>
bool negligible<Rational>(const Rational& x, double) {
    return x == 0;
}
template <>
bool negligible<double>(const double& x, double scale) {
    return std::abs(x) <= 1e-11 * scale;
}

template <class T>
double magnitude(const T& x) {
    if constexpr (std::is_same_v<T, Rational>) {
        return std::abs(x.get_d());
    } else {
        return std::abs(x);
    }
}

// Solves sum_k M[:,k] x_k = rhs by Gauss-Jordan elimination, pivot columns
// taken left to right; free unknowns are zero. Returns false if inconsistent.
template <class T>
bool solve_free_zero(std::vector<std::vector<T>> M, std::vector<T> rhs, std::vector<T>& x) {
    size_t rows = M.size();
    size_t cols = rows ? M.front().size() : 0;
    double scale = 0.0;
    for (const auto& r : M)
        for (const auto& e : r) scale = std::max(scale, magnitude(e));
    for (const auto& e : rhs) scale = std::max(scale, magnitude(e));
    if (scale == 0.0) scale = 1.0;

    std::vector<long> pivot_row_of_col(cols, -1);
    size_t r = 0;
    for (size_t k = 0; k < cols && r < rows; ++k) {
        size_t best = rows;
        double bestmag = 0.0;
        for (size_t i = r; i < rows; ++i) {
            if (negligible(M[i][k], scale)) continue;
            double m = magnitude(M[i][k]);
            if constexpr (std::is_same_v<T, Rational>) {
                best = i;
                break;
            } else if (m > bestmag) {
                bestmag = m;
                best = i;
            }
        }
        if (best == rows) continue;
        std::swap(M[r], M[best]);
        std::swap(rhs[r], rhs[best]);
        T inv = T(1) / M[r][k];
        for (size_t kk = k; kk < cols; ++kk) M[r][kk] *= inv;
        rhs[r] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][k] == T(0)) continue;
            T f = M[i][k];
            for (size_t kk = k; kk < cols; ++kk) M[i][kk] -= f * M[r][kk];
            rhs[i] -= f * rhs[r];
        }
        pivot_row_of_col[k] = static_cast<long>(r);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (!negligible(rhs[i], scale)) return false;
    x.assign(cols, T(0));
    for (size_t k = 0; k < cols; ++k)
        if (pivot_row_of_col[k] >= 0) x[k] = rhs[static_cast<size_t>(pivot_row_of_col[k])];
    return true;
}

template <class T>
ShuOsherForm retarget(const ButcherTableau& bt, const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                      const std::vector<BasicPoly<T>>& QB, const std::vector<BasicPoly<T>>& targets) {
    auto us = static_cast<size_t>(bt.s);
    if (targets.size() != us) throw std::invalid_argument("need one target polynomial per stage");

    int D = 0;
    for (const auto& q : QB) D = std::max(D, q.degree());
    for (const auto& t : targets) D = std::max(D, t.degree());

    std::vector<std::vector<T>> gamma(us, std::vector<T>(us, T(0)));
    std::vector<T> e(us, T(0));
    for (size_t j = 0; j < us; ++j) {
        gamma[j][j] = T(1);
        e[j] = targets[j].coeff(0);

        int span_deg = QB[j].degree();
        int uniq = span_deg;
        for (size_t i = j + 1; i < us; ++i) {
            int d = QB[i].degree();
            if (d >= uniq) uniq = -1;
            span_deg = std::max(span_deg, d);
        }
        int td = targets[j].degree();
        if (td > span_deg) {
            std::ostringstream os;
            os << "target " << j + 1 << " has degree " << td << " but the available polynomials reach only degree "
               << span_deg;
            throw DegreeMismatch(os.str());
        }
        // Q^B_j alone carries the top degree: its leading coefficient is forced
        if (uniq >= 1 && td == uniq && !negligible<T>(targets[j].coeff(td) - QB[j].coeff(td), magnitude(QB[j].coeff(td)))) {
            std::ostringstream os;
            os << "target " << j + 1 << " must keep leading coefficient " << magnitude(QB[j].coeff(td))
               << " at degree " << td;
            throw DegreeMismatch(os.str());
        }

        size_t nun = us - j - 1;
        if (nun == 0) {
            for (int k = 1; k <= D; ++k)
                if (!negligible<T>(targets[j].coeff(k) - QB[j].coeff(k), 1.0 + magnitude(QB[j].coeff(k))))
                    throw SpanFailure("last stage target must equal its Butcher polynomial up to the constant term");
            continue;
        }
        std::vector<std::vector<T>> M(static_cast<size_t>(D), std::vector<T>(nun, T(0)));
        std::vector<T> rhs(static_cast<size_t>(D), T(0));
        for (int k = 1; k <= D; ++k) {
            auto row = static_cast<size_t>(k - 1);
            rhs[row] = targets[j].coeff(k) - QB[j].coeff(k);
            for (size_t u = 0; u < nun; ++u) M[row][u] = QB[j + 1 + u].coeff(k);
        }
        std::vector<T> x;
        if (!solve_free_zero(M, rhs, x)) {
            std::ostringstream os;
            os << "target " << j + 1 << " is not in the span of the later Butcher internal polynomials";
            throw SpanFailure(os.str());
        }
        for (size_t u = 0; u < nun; ++u) gamma[j + 1 + u][j] = x[u];
    }

    // alpha_{s+1} gamma = e  (gamma unit lower triangular)
    std::vector<T> a(us, T(0));
    for (size_t jj = us; jj-- > 0;) {
        T acc = e[jj];
        for (size_t i = jj + 1; i < us; ++i) acc -= a[i] * gamma[i][jj];
        a[jj] = acc;
    }
    // G = gamma^{-1}
    std::vector<std::vector<T>> G(us, std::vector<T>(us, T(0)));
    for (size_t col = 0; col < us; ++col) {
        G[col][col] = T(1);
        for (size_t i = col + 1; i < us; ++i) {
            T acc = T(0);
            for (size_t k = col; k < i; ++k) acc -= gamma[i][k] * G[k][col];
            G[i][col] = acc;
        }
    }
    std::vector<std::vector<T>> alpha(us + 1, std::vector<T>(us, T(0)));
    std::vector<std::vector<T>> beta(us + 1, std::vector<T>(us, T(0)));
    for (size_t i = 0; i < us; ++i) {
        for (size_t j = 0; j < i; ++j) alpha[i][j] = -G[i][j];
        for (size_t k = 0; k < us; ++k) {
            T acc = T(0);
            for (size_t m = 0; m <= i; ++m) acc += G[i][m] * A[m][k];
            beta[i][k] = acc;
        }
    }
    alpha[us] = a;
    for (size_t k = 0; k < us; ++k) {
        T acc = b[k];
        for (size_t m = 0; m < us; ++m) acc -= a[m] * A[m][k];
        beta[us][k] = acc;
    }

    std::string name = bt.name.empty() ? std::string("retargeted") : bt.name + "-retargeted";
    if constexpr (std::is_same_v<T, Rational>) {
        std::optional<RatVec> ah, bh;
        if (bt.b_embedded_exact) {
            ah = RatVec(us, Rational(0));
            bh = *bt.b_embedded_exact;
        }
        return ShuOsherForm::from_exact(alpha, beta, bt.order, ah, bh, bt.order_embedded, name);
    } else {
        std::optional<Vec> ah, bh;
        if (bt.b_embedded) {
            ah = Vec(us, 0.0);
            bh = *bt.b_embedded;
        }
        return ShuOsherForm::from_double(alpha, beta, bt.order, ah, bh, bt.order_embedded, name);
    }
}

}  // namespace

ShuOsherForm retarget_implementation(const ButcherTableau& bt, const std::vector<RatPoly>& targets) {
    if (!bt.exact()) {
        std::vector<Poly> t;
        for (const auto& p : targets) t.push_back(to_double(p));
        return retarget_implementation(bt, t);
    }
    InternalStabilitySet iss = derive_internal_stability_butcher(bt);
    return retarget<Rational>(bt, *bt.A_exact, *bt.b_exact, *iss.Q_exact, targets);
}

ShuOsherForm retarget_implementation(const ButcherTableau& bt, const std::vector<Poly>& targets) {
    InternalStabilitySet iss = derive_internal_stability_butcher(bt);
    return retarget<double>(bt, bt.A, bt.b, iss.Q, targets);
}

std::vector<RatPoly> zero_constant_targets(const ButcherTableau& bt) {
    if (!bt.exact()) throw std::invalid_argument("zero_constant_targets needs exact coefficients");
    InternalStabilitySet iss = derive_internal_stability_butcher(bt);
    std::vector<RatPoly> out;
    for (const auto& q : *iss.Q_exact) {
        int d = q.degree();
        if (d < 1) {
            out.push_back(RatPoly::constant(0));
            continue;
        }
        RatPoly t = taylor_exp(d, 1);
        t.c[static_cast<std::size_t>(d)] = q.coeff(d);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace rkistab
