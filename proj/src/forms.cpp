#include "rkistab/forms.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace rkistab {

namespace {

template <class T>
std::vector<T> row_sums(const std::vector<std::vector<T>>& m) {
    std::vector<T> out;
    for (const auto& row : m) {
        T acc = 0;
        for (const auto& x : row) acc += x;
        out.push_back(acc);
    }
    return out;
}

// A = (I - alpha_{1:s})^{-1} beta_{1:s} row by row, then the update rows.
template <class T>
void convert(int s, const std::vector<std::vector<T>>& alpha, const std::vector<std::vector<T>>& beta,
             const std::vector<T>* alpha_hat, const std::vector<T>* beta_hat, std::vector<std::vector<T>>& A,
             std::vector<T>& b, std::vector<T>* bhat) {
    A.assign(static_cast<std::size_t>(s), std::vector<T>(static_cast<std::size_t>(s), T(0)));
    for (int i = 0; i < s; ++i) {
        auto& Ai = A[static_cast<std::size_t>(i)];
        Ai = beta[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const T& a = alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (a == T(0)) continue;
            for (int k = 0; k < s; ++k) Ai[static_cast<std::size_t>(k)] += a * A[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        }
    }
    auto update = [&](const std::vector<T>& arow, const std::vector<T>& brow) {
        std::vector<T> out = brow;
        for (int j = 0; j < s; ++j) {
            const T& a = arow[static_cast<std::size_t>(j)];
            if (a == T(0)) continue;
            for (int k = 0; k < s; ++k) out[static_cast<std::size_t>(k)] += a * A[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        }
        return out;
    };
    b = update(alpha[static_cast<std::size_t>(s)], beta[static_cast<std::size_t>(s)]);
    if (alpha_hat && beta_hat && bhat) *bhat = update(*alpha_hat, *beta_hat);
}

std::string where(const char* what, int i, int j) {
    std::ostringstream os;
    os << what << "[" << i + 1 << "][" << j + 1 << "]";
    return os.str();
}

}  // namespace

ButcherTableau ButcherTableau::from_exact(const RatMatrix& A, const RatVec& b, int order,
                                          std::optional<RatVec> b_embedded, std::optional<int> order_embedded,
                                          std::string name) {
    ButcherTableau bt;
    bt.s = static_cast<int>(b.size());
    bt.A = to_double(A);
    bt.b = to_double(b);
    RatVec c = row_sums(A);
    bt.c = to_double(c);
    bt.order = order;
    bt.order_embedded = order_embedded;
    bt.name = std::move(name);
    bt.A_exact = A;
    bt.b_exact = b;
    if (b_embedded) {
        bt.b_embedded = to_double(*b_embedded);
        bt.b_embedded_exact = std::move(b_embedded);
    }
    return bt;
}

ButcherTableau ButcherTableau::from_double(const Matrix& A, const Vec& b, int order, std::optional<Vec> b_embedded,
                                           std::optional<int> order_embedded, std::string name) {
    ButcherTableau bt;
    bt.s = static_cast<int>(b.size());
    bt.A = A;
    bt.b = b;
    bt.c = row_sums(A);
    bt.b_embedded = std::move(b_embedded);
    bt.order = order;
    bt.order_embedded = order_embedded;
    bt.name = std::move(name);
    return bt;
}

Vec ShuOsherForm::v() const {
    Vec out;
    for (const auto& row : alpha) {
        double acc = 1.0;
        for (double a : row) acc -= a;
        out.push_back(acc);
    }
    return out;
}

RatVec ShuOsherForm::v_exact() const {
    RatVec out;
    for (const auto& row : *alpha_exact) {
        Rational acc = 1;
        for (const auto& a : row) acc -= a;
        out.push_back(acc);
    }
    return out;
}

double ShuOsherForm::v_hat() const {
    if (alpha_hat_exact) {
        Rational acc = 1;
        for (const auto& a : *alpha_hat_exact) acc -= a;
        return acc.get_d();
    }
    double acc = 1.0;
    for (double a : *alpha_hat) acc -= a;
    return acc;
}

ShuOsherForm ShuOsherForm::from_exact(const RatMatrix& alpha, const RatMatrix& beta, int order,
                                      std::optional<RatVec> alpha_hat, std::optional<RatVec> beta_hat,
                                      std::optional<int> order_embedded, std::string name) {
    ShuOsherForm so;
    so.s = alpha.empty() ? 0 : static_cast<int>(alpha.front().size());
    so.alpha = to_double(alpha);
    so.beta = to_double(beta);
    so.order = order;
    so.order_embedded = order_embedded;
    so.name = std::move(name);
    so.alpha_exact = alpha;
    so.beta_exact = beta;
    if (alpha_hat && beta_hat) {
        so.alpha_hat = to_double(*alpha_hat);
        so.beta_hat = to_double(*beta_hat);
        so.alpha_hat_exact = std::move(alpha_hat);
        so.beta_hat_exact = std::move(beta_hat);
    }
    return so;
}

ShuOsherForm ShuOsherForm::from_double(const Matrix& alpha, const Matrix& beta, int order, std::optional<Vec> alpha_hat,
                                       std::optional<Vec> beta_hat, std::optional<int> order_embedded,
                                       std::string name) {
    ShuOsherForm so;
    so.s = alpha.empty() ? 0 : static_cast<int>(alpha.front().size());
    so.alpha = alpha;
    so.beta = beta;
    so.alpha_hat = std::move(alpha_hat);
    so.beta_hat = std::move(beta_hat);
    so.order = order;
    so.order_embedded = order_embedded;
    so.name = std::move(name);
    return so;
}

ButcherTableau shu_osher_to_butcher(const ShuOsherForm& so) {
    if (so.exact()) {
        RatMatrix A;
        RatVec b, bhat;
        bool emb = so.alpha_hat_exact && so.beta_hat_exact;
        convert(so.s, *so.alpha_exact, *so.beta_exact, emb ? &*so.alpha_hat_exact : nullptr,
                emb ? &*so.beta_hat_exact : nullptr, A, b, emb ? &bhat : nullptr);
        return ButcherTableau::from_exact(A, b, so.order, emb ? std::optional<RatVec>(bhat) : std::nullopt,
                                          so.order_embedded, so.name);
    }
    Matrix A;
    Vec b, bhat;
    bool emb = so.has_embedded();
    convert(so.s, so.alpha, so.beta, emb ? &*so.alpha_hat : nullptr, emb ? &*so.beta_hat : nullptr, A, b,
            emb ? &bhat : nullptr);
    return ButcherTableau::from_double(A, b, so.order, emb ? std::optional<Vec>(bhat) : std::nullopt,
                                       so.order_embedded, so.name);
}

ShuOsherForm butcher_to_shu_osher(const ButcherTableau& bt) {
    auto s = static_cast<std::size_t>(bt.s);
    if (bt.exact()) {
        RatMatrix alpha(s + 1, RatVec(s, Rational(0)));
        RatMatrix beta = *bt.A_exact;
        beta.push_back(*bt.b_exact);
        std::optional<RatVec> ah, bh;
        if (bt.b_embedded_exact) {
            ah = RatVec(s, Rational(0));
            bh = *bt.b_embedded_exact;
        }
        return ShuOsherForm::from_exact(alpha, beta, bt.order, ah, bh, bt.order_embedded, bt.name);
    }
    Matrix alpha(s + 1, Vec(s, 0.0));
    Matrix beta = bt.A;
    beta.push_back(bt.b);
    std::optional<Vec> ah, bh;
    if (bt.b_embedded) {
        ah = Vec(s, 0.0);
        bh = *bt.b_embedded;
    }
    return ShuOsherForm::from_double(alpha, beta, bt.order, ah, bh, bt.order_embedded, bt.name);
}

namespace {

template <class E>
std::vector<E> map_residual(const ShuOsherForm& so, const std::vector<E>& r, E zero) {
    auto s = static_cast<std::size_t>(so.s);
    if (r.size() != s + 1) throw std::invalid_argument("residual vector must have s+1 entries");
    auto axpy = [](E& y, double a, const E& x) {
        if constexpr (std::is_same_v<E, double>) {
            y += a * x;
        } else {
            for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
        }
    };
    std::vector<E> out(s + 1, zero);
    // unit lower triangular solve (I - alpha) x = r
    for (std::size_t i = 0; i < s; ++i) {
        out[i] = r[i];
        for (std::size_t j = 0; j < i; ++j)
            if (so.alpha[i][j] != 0.0) axpy(out[i], so.alpha[i][j], out[j]);
    }
    out[s] = r[s];
    for (std::size_t j = 0; j < s; ++j)
        if (so.alpha[s][j] != 0.0) axpy(out[s], so.alpha[s][j], out[j]);
    return out;
}

}  // namespace

ResidualVector residual_butcher_from_shu_osher(const ShuOsherForm& so, const ResidualVector& r_so) {
    return map_residual<double>(so, r_so, 0.0);
}

StateResidualVector residual_butcher_from_shu_osher(const ShuOsherForm& so, const StateResidualVector& r_so) {
    std::vector<double> zero(r_so.empty() ? 0 : r_so.front().size(), 0.0);
    return map_residual<std::vector<double>>(so, r_so, zero);
}

std::vector<std::string> validate(const ButcherTableau& bt) {
    std::vector<std::string> out;
    auto s = static_cast<std::size_t>(bt.s);
    if (bt.s <= 0) {
        out.push_back("stage count must be positive");
        return out;
    }
    if (bt.A.size() != s || bt.b.size() != s || bt.c.size() != s) {
        out.push_back("A, b, c must have s rows/entries");
        return out;
    }
    for (std::size_t i = 0; i < s; ++i) {
        if (bt.A[i].size() != s) {
            out.push_back("A row " + std::to_string(i + 1) + " must have s entries");
            continue;
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < s; ++j) {
            if (!std::isfinite(bt.A[i][j])) out.push_back(where("A", static_cast<int>(i), static_cast<int>(j)) + " is not finite");
            if (j >= i && bt.A[i][j] != 0.0)
                out.push_back(where("A", static_cast<int>(i), static_cast<int>(j)) + " nonzero on or above diagonal (not explicit)");
            sum += bt.A[i][j];
        }
        if (std::abs(bt.c[i] - sum) > kValidationTol) {
            std::ostringstream os;
            os << "stage consistency violated in row " << i + 1 << ": c = " << bt.c[i] << ", row sum of A = " << sum;
            out.push_back(os.str());
        }
    }
    if (bt.b_embedded && bt.b_embedded->size() != s) out.push_back("b_embedded must have s entries");
    if (bt.order < 1) out.push_back("declared order must be positive");
    return out;
}

std::vector<std::string> validate(const ShuOsherForm& so) {
    std::vector<std::string> out;
    auto s = static_cast<std::size_t>(so.s);
    if (so.s <= 0) {
        out.push_back("stage count must be positive");
        return out;
    }
    if (so.alpha.size() != s + 1 || so.beta.size() != s + 1) {
        out.push_back("alpha and beta must have s+1 rows");
        return out;
    }
    for (std::size_t i = 0; i <= s; ++i) {
        if (so.alpha[i].size() != s || so.beta[i].size() != s) {
            out.push_back("row " + std::to_string(i + 1) + " of alpha/beta must have s entries");
            continue;
        }
        for (std::size_t j = 0; j < s; ++j) {
            if (!std::isfinite(so.alpha[i][j]) || !std::isfinite(so.beta[i][j]))
                out.push_back("alpha/beta entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") not finite");
            if (i < s && j >= i) {
                if (so.alpha[i][j] != 0.0)
                    out.push_back(where("alpha", static_cast<int>(i), static_cast<int>(j)) + " nonzero on or above diagonal (not explicit)");
                if (so.beta[i][j] != 0.0)
                    out.push_back(where("beta", static_cast<int>(i), static_cast<int>(j)) + " nonzero on or above diagonal (not explicit)");
            }
        }
    }
    // stage 1 must be U itself for an explicit method
    if (std::abs(so.v()[0] - 1.0) > kValidationTol) out.push_back("v[1] must equal 1 (first stage is U_n)");
    if (so.alpha_hat.has_value() != so.beta_hat.has_value()) out.push_back("embedded row needs both alpha_hat and beta_hat");
    if (so.alpha_hat && (so.alpha_hat->size() != s || so.beta_hat->size() != s)) out.push_back("embedded row must have s entries");
    if (so.order < 1) out.push_back("declared order must be positive");
    return out;
}

}  // namespace rkistab
