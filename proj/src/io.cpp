#include "rkistab/io.hpp"

#include <stdexcept>

namespace rkistab {

namespace {

json rat_vec(const RatVec& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

json rat_mat(const RatMatrix& m) {
    json out = json::array();
    for (const auto& row : m) out.push_back(rat_vec(row));
    return out;
}

RatVec read_rat_vec(const json& j) {
    RatVec out;
    for (const auto& x : j) out.push_back(parse_rational(x.get<std::string>()));
    return out;
}

RatMatrix read_rat_mat(const json& j) {
    RatMatrix out;
    for (const auto& row : j) out.push_back(read_rat_vec(row));
    return out;
}

json poly_json(const Poly& p) { return json(p.c); }

std::optional<int> opt_int(const json& j, const char* key) {
    if (j.contains(key) && !j[key].is_null()) return j[key].get<int>();
    return std::nullopt;
}

}  // namespace

json to_json(const ButcherTableau& bt) {
    json j;
    j["kind"] = "butcher";
    j["name"] = bt.name;
    j["s"] = bt.s;
    j["order"] = bt.order;
    j["A"] = bt.A;
    j["b"] = bt.b;
    j["c"] = bt.c;
    if (bt.b_embedded) {
        j["b_embedded"] = *bt.b_embedded;
        j["order_embedded"] = bt.order_embedded ? json(*bt.order_embedded) : json();
    }
    if (bt.exact()) {
        json e;
        e["A"] = rat_mat(*bt.A_exact);
        e["b"] = rat_vec(*bt.b_exact);
        if (bt.b_embedded_exact) e["b_embedded"] = rat_vec(*bt.b_embedded_exact);
        j["exact"] = e;
    }
    return j;
}

json to_json(const ShuOsherForm& so) {
    json j;
    j["kind"] = "shu_osher";
    j["name"] = so.name;
    j["s"] = so.s;
    j["order"] = so.order;
    j["alpha"] = so.alpha;
    j["beta"] = so.beta;
    j["v"] = so.v();
    if (so.has_embedded()) {
        j["alpha_embedded"] = *so.alpha_hat;
        j["beta_embedded"] = *so.beta_hat;
        j["order_embedded"] = so.order_embedded ? json(*so.order_embedded) : json();
    }
    if (so.exact()) {
        json e;
        e["alpha"] = rat_mat(*so.alpha_exact);
        e["beta"] = rat_mat(*so.beta_exact);
        if (so.alpha_hat_exact && so.beta_hat_exact) {
            e["alpha_embedded"] = rat_vec(*so.alpha_hat_exact);
            e["beta_embedded"] = rat_vec(*so.beta_hat_exact);
        }
        j["exact"] = e;
    }
    return j;
}

json to_json(const InternalStabilitySet& iss) {
    json j;
    j["P"] = poly_json(iss.P);
    json q = json::array();
    for (const auto& p : iss.Q) q.push_back(poly_json(p));
    j["Q"] = q;
    if (iss.P_exact) {
        RatVec pc = iss.P_exact->c;
        j["P_exact"] = rat_vec(pc);
    }
    if (iss.Q_exact) {
        json qe = json::array();
        for (const auto& p : *iss.Q_exact) qe.push_back(rat_vec(p.c));
        j["Q_exact"] = qe;
    }
    return j;
}

json to_json(const AmplificationReport& r) {
    auto where = [](const Argmax& a) {
        return json{{"stage", a.stage}, {"re", a.z.real()}, {"im", a.z.imag()}};
    };
    return json{{"method", r.method_id},   {"M", r.m_full},
                {"M_half", r.m_half},      {"M0", r.m_zero},
                {"argmax", where(r.argmax_full)}, {"argmax_half", where(r.argmax_half)}};
}

ButcherTableau butcher_from_json(const json& j) {
    std::string name = j.value("name", std::string());
    int order = j.at("order").get<int>();
    std::optional<int> oe = opt_int(j, "order_embedded");
    if (j.contains("exact")) {
        const json& e = j["exact"];
        std::optional<RatVec> bh;
        if (e.contains("b_embedded")) bh = read_rat_vec(e["b_embedded"]);
        return ButcherTableau::from_exact(read_rat_mat(e.at("A")), read_rat_vec(e.at("b")), order, bh, oe, name);
    }
    std::optional<Vec> bh;
    if (j.contains("b_embedded")) bh = j["b_embedded"].get<Vec>();
    return ButcherTableau::from_double(j.at("A").get<Matrix>(), j.at("b").get<Vec>(), order, bh, oe, name);
}

ShuOsherForm shu_osher_from_json(const json& j) {
    std::string name = j.value("name", std::string());
    int order = j.at("order").get<int>();
    std::optional<int> oe = opt_int(j, "order_embedded");
    if (j.contains("exact")) {
        const json& e = j["exact"];
        std::optional<RatVec> ah, bh;
        if (e.contains("alpha_embedded")) {
            ah = read_rat_vec(e["alpha_embedded"]);
            bh = read_rat_vec(e.at("beta_embedded"));
        }
        return ShuOsherForm::from_exact(read_rat_mat(e.at("alpha")), read_rat_mat(e.at("beta")), order, ah, bh, oe,
                                        name);
    }
    std::optional<Vec> ah, bh;
    if (j.contains("alpha_embedded")) {
        ah = j["alpha_embedded"].get<Vec>();
        bh = j.at("beta_embedded").get<Vec>();
    }
    return ShuOsherForm::from_double(j.at("alpha").get<Matrix>(), j.at("beta").get<Matrix>(), order, ah, bh, oe,
                                     name);
}

}  // namespace rkistab
