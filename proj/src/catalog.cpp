#include "rkistab/catalog.hpp"

#include <map>

namespace rkistab {

namespace {

RatMatrix zeros(int rows, int cols) {
    return RatMatrix(static_cast<std::size_t>(rows), RatVec(static_cast<std::size_t>(cols), Rational(0)));
}

Rational& at(RatMatrix& m, int i, int j) {  // 1-based
    return m[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
}

// prod_{l in nodes, l != m} n_m / (n_m - n_l): Lagrange weight of node 1/n_m at 0
RatVec aitken_neville_weights(const std::vector<long>& seq, int first, int last) {
    RatVec w(seq.size(), Rational(0));
    for (int m = first; m <= last; ++m) {
        Rational prod = 1;
        Rational nm = seq[static_cast<std::size_t>(m - 1)];
        for (int l = first; l <= last; ++l)
            if (l != m) prod *= nm / (nm - Rational(seq[static_cast<std::size_t>(l - 1)]));
        w[static_cast<std::size_t>(m - 1)] = prod;
    }
    return w;
}

void require_em_order(int p) {
    if (p < 2 || p % 2) throw OddOrder("midpoint extrapolation needs an even order >= 2", 0);
}

}  // namespace

ExtrapolationWeights ee_weights(int p) {
    if (p < 1) throw std::invalid_argument("extrapolation order must be >= 1");
    std::vector<long> seq;
    for (int m = 1; m <= p; ++m) seq.push_back(m);
    ExtrapolationWeights w;
    w.weights = aitken_neville_weights(seq, 1, p);
    w.embedded = p >= 2 ? aitken_neville_weights(seq, 2, p) : RatVec(1, Rational(0));
    return w;
}

ExtrapolationWeights em_weights(int p) {
    require_em_order(p);
    int r = p / 2;
    std::vector<long> seq;
    for (long m = 1; m <= r; ++m) seq.push_back(m * m);
    ExtrapolationWeights w;
    w.weights = aitken_neville_weights(seq, 1, r);
    w.embedded = r >= 2 ? aitken_neville_weights(seq, 2, r) : RatVec(1, Rational(0));
    return w;
}

ShuOsherForm build_ssp2(int s) {
    if (s < 2) throw std::invalid_argument("ssp2 needs s >= 2");
    RatMatrix al = zeros(s + 1, s), be = zeros(s + 1, s);
    Rational h(1, s - 1);
    for (int j = 2; j <= s; ++j) {
        at(al, j, j - 1) = 1;
        at(be, j, j - 1) = h;
    }
    // U_n enters the update through v, keeping alpha = (s-1) beta entrywise
    at(al, s + 1, s) = Rational(s - 1, s);
    at(be, s + 1, s) = Rational(1, s);
    return ShuOsherForm::from_exact(al, be, 2, std::nullopt, std::nullopt, std::nullopt,
                                    "ssp2:" + std::to_string(s));
}

ShuOsherForm build_ssp3(int n) {
    if (n < 2) throw std::invalid_argument("ssp3 needs n >= 2");
    int s = n * n;
    int k = n * (n + 1) / 2 + 1;
    int mn = (n - 1) * (n - 2) / 2 + 1;
    Rational h(1, n * n - n);
    RatMatrix al = zeros(s + 1, s), be = zeros(s + 1, s);
    for (int j = 2; j <= s + 1; ++j) {
        if (j == k) continue;
        at(al, j, j - 1) = 1;
        at(be, j, j - 1) = h;
    }
    Rational a(n - 1, 2 * n - 1);
    at(al, k, k - 1) = a;
    at(be, k, k - 1) = a * h;
    at(al, k, mn) += Rational(n, 2 * n - 1);
    return ShuOsherForm::from_exact(al, be, 3, std::nullopt, std::nullopt, std::nullopt,
                                    "ssp3:" + std::to_string(n));
}

int ee_stage_index(int m, int j) { return 1 + (m - 1) * (m - 2) / 2 + j; }
int em_stage_index(int m, int j) { return 1 + (m - 1) * (m - 1) + j; }

ShuOsherForm build_ee_extrapolation(int p, bool embedded) {
    if (p < 1) throw std::invalid_argument("extrapolation order must be >= 1");
    int s = 1 + p * (p - 1) / 2;
    ExtrapolationWeights w = ee_weights(p);
    RatMatrix al = zeros(s + 1, s), be = zeros(s + 1, s);
    RatVec ah(static_cast<std::size_t>(s), Rational(0)), bh(static_cast<std::size_t>(s), Rational(0));
    for (int m = 1; m <= p; ++m) {
        Rational h(1, m);
        int prev = 1;
        for (int j = 1; j < m; ++j) {
            int i = ee_stage_index(m, j);
            at(al, i, prev) = 1;
            at(be, i, prev) = h;
            prev = i;
        }
        Rational wm = w.weights[static_cast<std::size_t>(m - 1)];
        at(al, s + 1, prev) += wm;
        at(be, s + 1, prev) += wm * h;
        Rational em = w.embedded[static_cast<std::size_t>(m - 1)];
        ah[static_cast<std::size_t>(prev - 1)] += em;
        bh[static_cast<std::size_t>(prev - 1)] += em * h;
    }
    std::string name = "ee:" + std::to_string(p);
    if (embedded && p >= 2)
        return ShuOsherForm::from_exact(al, be, p, ah, bh, p - 1, name);
    return ShuOsherForm::from_exact(al, be, p, std::nullopt, std::nullopt, std::nullopt, name);
}

ShuOsherForm build_em_extrapolation(int p, bool embedded) {
    require_em_order(p);
    int r = p / 2;
    int s = 1 + r * r;
    ExtrapolationWeights w = em_weights(p);
    RatMatrix al = zeros(s + 1, s), be = zeros(s + 1, s);
    RatVec ah(static_cast<std::size_t>(s), Rational(0)), bh(static_cast<std::size_t>(s), Rational(0));
    for (int m = 1; m <= r; ++m) {
        Rational h(1, m);
        auto idx = [&](int j) { return j == 0 ? 1 : em_stage_index(m, j); };
        at(al, idx(1), 1) = 1;
        at(be, idx(1), 1) = h / 2;
        for (int j = 2; j < 2 * m; ++j) {
            at(al, idx(j), idx(j - 2)) = 1;
            at(be, idx(j), idx(j - 1)) = h;
        }
        // T_{m,1} = Y_{m,2m-2} + (tau/m) F(Y_{m,2m-1})
        Rational wm = w.weights[static_cast<std::size_t>(m - 1)];
        at(al, s + 1, idx(2 * m - 2)) += wm;
        at(be, s + 1, idx(2 * m - 1)) += wm * h;
        Rational em = w.embedded[static_cast<std::size_t>(m - 1)];
        ah[static_cast<std::size_t>(idx(2 * m - 2) - 1)] += em;
        bh[static_cast<std::size_t>(idx(2 * m - 1) - 1)] += em * h;
    }
    std::string name = "em:" + std::to_string(p);
    if (embedded && r >= 2)
        return ShuOsherForm::from_exact(al, be, p, ah, bh, p - 2, name);
    return ShuOsherForm::from_exact(al, be, p, std::nullopt, std::nullopt, std::nullopt, name);
}

namespace {

struct ClassicEntry {
    std::vector<std::vector<const char*>> A;  // rows 2..s, lower part only
    std::vector<const char*> b;
    std::vector<const char*> bhat;
    int order;
    int order_embedded;
};

const std::map<std::string, ClassicEntry>& classic_table() {
    static const std::map<std::string, ClassicEntry> t = {
        {"heun3", {{{"1/3"}, {"0", "2/3"}}, {"1/4", "0", "3/4"}, {}, 3, 0}},
        {"rk4", {{{"1/2"}, {"0", "1/2"}, {"0", "0", "1"}}, {"1/6", "1/3", "1/3", "1/6"}, {}, 4, 0}},
        {"merson43",
         {{{"1/3"}, {"1/6", "1/6"}, {"1/8", "0", "3/8"}, {"1/2", "0", "-3/2", "2"}},
          {"1/6", "0", "0", "2/3", "1/6"},
          {"1/10", "0", "3/10", "2/5", "1/5"},
          4,
          3}},
        {"fehlberg54",
         {{{"1/4"},
           {"3/32", "9/32"},
           {"1932/2197", "-7200/2197", "7296/2197"},
           {"439/216", "-8", "3680/513", "-845/4104"},
           {"-8/27", "2", "-3544/2565", "1859/4104", "-11/40"}},
          {"16/135", "0", "6656/12825", "28561/56430", "-9/50", "2/55"},
          {"25/216", "0", "1408/2565", "2197/4104", "-1/5", "0"},
          5,
          4}},
        {"bogacki_shampine54",
         {{{"1/6"},
           {"2/27", "4/27"},
           {"183/1372", "-162/343", "1053/1372"},
           {"68/297", "-4/11", "42/143", "1960/3861"},
           {"597/22528", "81/352", "63099/585728", "58653/366080", "4617/20480"},
           {"174197/959244", "-30942/79937", "8152137/19744439", "666106/1039181", "-29421/29068", "482048/414219"},
           {"587/8064", "0", "4440339/15491840", "24353/124800", "387/44800", "2152/5985", "7267/94080"}},
          {"587/8064", "0", "4440339/15491840", "24353/124800", "387/44800", "2152/5985", "7267/94080", "0"},
          {"2479/34992", "0", "123/416", "612941/3411720", "43/1440", "2272/6561", "79937/1113912", "3293/556956"},
          5,
          4}},
        // published rational approximations; order conditions hold to about 1e-18
        {"prince_dormand8",
         {{{"1/18"},
           {"1/48", "1/16"},
           {"1/32", "0", "3/32"},
           {"5/16", "0", "-75/64", "75/64"},
           {"3/80", "0", "0", "3/16", "3/20"},
           {"29443841/614563906", "0", "0", "77736538/692538347", "-28693883/1125000000", "23124283/1800000000"},
           {"16016141/946692911", "0", "0", "61564180/158732637", "22789713/633445777", "545815736/2771057229",
            "-180193667/1043307555"},
           {"39632708/573591083", "0", "0", "-433636366/683701615", "-421739975/2616292301", "100302831/723423059",
            "790204164/839813087", "800635310/3783071287"},
           {"246121993/1340847787", "0", "0", "-37695042795/15268766246", "-309121744/1061227803",
            "-12992083/490766935", "6005943493/2108947869", "393006217/1396673457", "123872331/1001029789"},
           {"-1028468189/846180014", "0", "0", "8478235783/508512852", "1311729495/1432422823",
            "-10304129995/1701304382", "-48777925059/3047939560", "15336726248/1032824649",
            "-45442868181/3398467696", "3065993473/597172653"},
           {"185892177/718116043", "0", "0", "-3185094517/667107341", "-477755414/1098053517",
            "-703635378/230739211", "5731566787/1027545527", "5232866602/850066563", "-4093664535/808688257",
            "3962137247/1805957418", "65686358/487910083"},
           {"403863854/491063109", "0", "0", "-5068492393/434740067", "-411421997/543043805", "652783627/914296604",
            "11173962825/925320556", "-13158990841/6184727034", "3936647629/1978049680", "-160528059/685178525",
            "248638103/1413531060", "0"}},
          {"14005451/335480064", "0", "0", "0", "0", "-59238493/1068277825", "181606767/758867731",
           "561292985/797845732", "-1041891430/1371343529", "760417239/1151165299", "118820643/751138087",
           "-528747749/2220607170", "1/4"},
          {"13451932/455176623", "0", "0", "0", "0", "-808719846/976000145", "1757004468/5645159321",
           "656045339/265891186", "-3867574721/1518517206", "465885868/322736535", "53011238/667516719", "2/45",
           "0"},
          8,
          7}},
    };
    return t;
}

// SSP methods in their convex-combination form; U_n enters through v
ShuOsherForm ssp_natural(const std::string& name) {
    if (name == "ssp33") {
        RatMatrix al = zeros(4, 3), be = zeros(4, 3);
        at(al, 2, 1) = 1;
        at(be, 2, 1) = 1;
        at(al, 3, 2) = Rational(1, 4);
        at(be, 3, 2) = Rational(1, 4);
        at(al, 4, 3) = Rational(2, 3);
        at(be, 4, 3) = Rational(2, 3);
        return ShuOsherForm::from_exact(al, be, 3, std::nullopt, std::nullopt, std::nullopt, "ssp33");
    }
    RatMatrix al = zeros(11, 10), be = zeros(11, 10);
    for (int i : {2, 3, 4, 5, 7, 8, 9, 10}) {
        at(al, i, i - 1) = 1;
        at(be, i, i - 1) = Rational(1, 6);
    }
    at(al, 6, 5) = Rational(2, 5);
    at(be, 6, 5) = Rational(1, 15);
    at(al, 11, 5) = Rational(9, 25);
    at(be, 11, 5) = Rational(3, 50);
    at(al, 11, 10) = Rational(3, 5);
    at(be, 11, 10) = Rational(1, 10);
    return ShuOsherForm::from_exact(al, be, 4, std::nullopt, std::nullopt, std::nullopt, "ssp104");
}

}  // namespace

ButcherTableau classic_tableau(const std::string& name) {
    if (name == "ssp33" || name == "ssp104") {
        ButcherTableau bt = shu_osher_to_butcher(ssp_natural(name));
        bt.name = name;
        return bt;
    }
    auto it = classic_table().find(name);
    if (it == classic_table().end()) throw UnknownMethod("unknown classic method '" + name + "'");
    const ClassicEntry& e = it->second;
    int s = static_cast<int>(e.b.size());
    RatMatrix A = zeros(s, s);
    for (std::size_t i = 0; i < e.A.size(); ++i)
        for (std::size_t j = 0; j < e.A[i].size(); ++j) A[i + 1][j] = parse_rational(e.A[i][j]);
    RatVec b;
    for (auto x : e.b) b.push_back(parse_rational(x));
    std::optional<RatVec> bh;
    std::optional<int> oh;
    if (!e.bhat.empty()) {
        bh = RatVec{};
        for (auto x : e.bhat) bh->push_back(parse_rational(x));
        oh = e.order_embedded;
    }
    return ButcherTableau::from_exact(A, b, e.order, bh, oh, name);
}

ShuOsherForm classic_natural_form(const std::string& name) {
    if (name == "ssp33" || name == "ssp104") return ssp_natural(name);
    ShuOsherForm so = butcher_to_shu_osher(classic_tableau(name));
    so.name = name;
    return so;
}

InternalStabilitySet internal_stability_closed_form(const MethodSpec& spec) {
    const int q = spec.parameter;
    std::vector<RatPoly> Q;
    RatPoly P;
    switch (spec.family) {
        case Family::ssp2: {
            int s = q;
            Rational h(1, s - 1), w(s - 1, s);
            for (int j = 1; j <= s; ++j) Q.push_back(binomial_power(1, h, s - j + 1) * w);
            // v_{s+1} = 1/s, so Q_1 = P - 1/s
            Q[0] = binomial_power(1, h, s) * w;
            P = Q[0] + RatPoly::constant(Rational(1, s));
            break;
        }
        case Family::ssp3: {
            int n = q, s = n * n;
            int k = n * (n + 1) / 2 + 1, mn = (n - 1) * (n - 2) / 2 + 1;
            Rational h(1, n * n - n), a(n - 1, 2 * n - 1), c(n, 2 * n - 1);
            P = binomial_power(1, h, s) * a + binomial_power(1, h, (n - 1) * (n - 1)) * c;
            Q.push_back(P);
            for (int j = 2; j <= s; ++j) {
                if (j <= mn)
                    Q.push_back(binomial_power(1, h, s - j + 1) * a + binomial_power(1, h, (n - 1) * (n - 1) - j + 1) * c);
                else if (j < k)
                    Q.push_back(binomial_power(1, h, s - j + 1) * a);
                else
                    Q.push_back(binomial_power(1, h, s - j + 1));
            }
            break;
        }
        case Family::ee_extrap: {
            int p = q;
            P = taylor_exp(p);
            Q.assign(static_cast<std::size_t>(1 + p * (p - 1) / 2), RatPoly());
            Q[0] = P;
            RatVec w = ee_weights(p).weights;
            // stage (m, j) carries the residual with l - 1 = m - j
            for (int m = 2; m <= p; ++m)
                for (int j = 1; j < m; ++j) {
                    int l = m - j + 1;
                    Q[static_cast<std::size_t>(ee_stage_index(m, j) - 1)] =
                        binomial_power(1, Rational(1, m), l - 1) * w[static_cast<std::size_t>(m - 1)];
                }
            break;
        }
        case Family::em_extrap: {
            require_em_order(q);
            int r = q / 2;
            P = taylor_exp(q);
            Q.assign(static_cast<std::size_t>(1 + r * r), RatPoly());
            Q[0] = P;
            RatVec w = em_weights(q).weights;
            for (int m = 1; m <= r; ++m) {
                // q_{m,0} = 0, q_{m,1} = 1, q_{m,j} = (z/m) q_{m,j-1} + q_{m,j-2}
                std::vector<RatPoly> qm(static_cast<std::size_t>(2 * m + 1));
                qm[0] = RatPoly::constant(0);
                qm[1] = RatPoly::constant(1);
                for (int j = 2; j <= 2 * m; ++j) {
                    qm[static_cast<std::size_t>(j)] = qm[static_cast<std::size_t>(j - 2)];
                    qm[static_cast<std::size_t>(j)].add_linear_times(0, Rational(1, m), qm[static_cast<std::size_t>(j - 1)]);
                }
                for (int l = 1; l < 2 * m; ++l)
                    Q[static_cast<std::size_t>(em_stage_index(m, l) - 1)] =
                        qm[static_cast<std::size_t>(2 * m - l + 1)] * w[static_cast<std::size_t>(m - 1)];
            }
            break;
        }
        default:
            throw UnsupportedFamily(std::string("no closed form for family ") + family_name(spec.family));
    }
    InternalStabilitySet iss;
    for (auto& x : Q) x.trim_exact();
    P.trim_exact();
    iss.P = to_double(P);
    for (const auto& x : Q) iss.Q.push_back(to_double(x));
    iss.P_exact = P;
    iss.Q_exact = Q;
    return iss;
}

ShuOsherForm build(const MethodSpec& spec) {
    ShuOsherForm so;
    switch (spec.family) {
        case Family::ssp2: so = build_ssp2(spec.parameter); break;
        case Family::ssp3: so = build_ssp3(spec.parameter); break;
        case Family::ee_extrap: so = build_ee_extrapolation(spec.parameter, spec.embedded); break;
        case Family::em_extrap: so = build_em_extrapolation(spec.parameter, spec.embedded); break;
        case Family::classic: so = classic_natural_form(spec.name); break;
        case Family::taylor:
            throw UnsupportedFamily("taylor:p describes a stability polynomial, not a method");
    }
    if (!spec.embedded) {
        so.alpha_hat.reset();
        so.beta_hat.reset();
        so.alpha_hat_exact.reset();
        so.beta_hat_exact.reset();
        so.order_embedded.reset();
    }
    if (spec.form == FormPreference::butcher) {
        std::string name = so.name;
        so = butcher_to_shu_osher(shu_osher_to_butcher(so));
        so.name = name + "[butcher]";
    }
    return so;
}

ButcherTableau build_tableau(const MethodSpec& spec) {
    if (spec.family == Family::classic) {
        ButcherTableau bt = classic_tableau(spec.name);
        if (!spec.embedded) {
            bt.b_embedded.reset();
            bt.b_embedded_exact.reset();
            bt.order_embedded.reset();
        }
        return bt;
    }
    MethodSpec natural = spec;
    natural.form = FormPreference::natural;
    return shu_osher_to_butcher(build(natural));
}

RatPoly stability_polynomial(const MethodSpec& spec) {
    if (spec.family == Family::taylor) return taylor_exp(spec.parameter);
    ShuOsherForm so = build(spec);
    InternalStabilitySet iss = derive_internal_stability(so);
    if (iss.P_exact) return *iss.P_exact;
    throw UnsupportedFamily("stability polynomial of " + spec.id() + " is not rational");
}

}  // namespace rkistab
