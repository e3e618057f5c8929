#include "rkistab/tables.hpp"

#include "rkistab/catalog.hpp"
#include "rkistab/stab_poly.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace rkistab {

namespace {

std::string fmt(double x, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

// printed values are rounded up
std::string ceil_fixed(double x, int decimals) {
    double s = std::pow(10.0, decimals);
    return fixed(std::ceil(x * s - 1e-9) / s, decimals);
}

AmplificationReport report_for(const ShuOsherForm& so, const std::string& id, RegionScope scope, int res) {
    InternalStabilitySet iss = derive_internal_stability(so);
    StabilityRegion reg = trace_region(iss.P, res);
    return analyze(iss, reg, id, scope);
}

Table table1(int res) {
    Table t{"table1", {"method", "form", "M", "M0", "reference_M", "reference_M0", "note"}, {}};
    const std::map<std::string, std::pair<double, double>> ref = {
        {"ssp33", {1.7, 0}},    {"heun3", {3.2, 0}},          {"rk4", {1.7, 0}},
        {"merson43", {5.6, 0}}, {"fehlberg54", {5.4, 0}},     {"bogacki_shampine54", {7.0, 0}},
        {"prince_dormand8", {138.8, 0}}, {"ssp104", {2.4, 0.6}}};
    for (const auto& name : classic_names()) {
        AmplificationReport r = classic_report(name, res);
        auto [m, m0] = ref.at(name);
        t.rows.push_back({name, name == "ssp104" ? "shu-osher" : "butcher", fixed(r.m_full, 4), fixed(r.m_zero, 4),
                          fixed(m, 1), fixed(m0, 1), "component containing 0; higher-order weights"});
    }
    t.rows.push_back({"rkc10", "", "", "", "10.0", "10.0", "omitted: RKC methods are not built"});
    t.rows.push_back({"rkc18", "", "", "", "27.8", "22.6", "omitted: RKC methods are not built"});
    return t;
}

Table table2(int res) {
    Table t{"table2", {"method", "M_half_plane", "M_whole", "M0", "reference_M", "reference_M0"}, {}};
    auto row = [&](const std::string& label, const ShuOsherForm& so, const char* rm, const char* rm0) {
        AmplificationReport r = report_for(so, label, RegionScope::whole, res);
        t.rows.push_back({label, fmt(r.m_half), fmt(r.m_full), fmt(r.m_zero), rm, rm0});
    };
    row("fehlberg54", classic_natural_form("fehlberg54"), "5.4", "0");
    ShuOsherForm ee = build_ee_extrapolation(12);
    row("ee12 shu-osher", ee, "3.4e5", "1.3e5");
    row("ee12 butcher", butcher_to_shu_osher(shu_osher_to_butcher(ee)), "1.7e5", "0");
    row("ee12 retargeted", ee12_retargeted(), "8.3e4", "0");
    return t;
}

Table radius_table(int res) {
    Table t{"radius", {"p", "max_abs_z", "max_abs_z_half_plane", "reference", "reference_half_plane"}, {}};
    const double full[] = {2.198, 2.539, 2.961, 3.447, 3.990, 4.582, 5.218, 5.888, 6.585, 7.302,
                           8.035, 8.780, 9.535, 10.298, 11.069, 11.846, 12.628, 13.417, 14.210};
    const double half[] = {2.198, 2.539, 2.961, 3.396, 3.581, 3.961, 4.367, 4.800, 5.262, 5.451,
                           5.825, 6.231, 6.657, 7.108, 7.325, 7.700, 8.092, 8.513, 8.955};
    for (int p = 2; p <= 20; ++p) {
        StabilityRegion reg = trace_region(to_double(taylor_exp(p)), res);
        t.rows.push_back({std::to_string(p), ceil_fixed(max_abs_z(reg, false).radius, 3),
                          ceil_fixed(max_abs_z(reg, true).radius, 3), fixed(full[p - 2], 3), fixed(half[p - 2], 3)});
    }
    return t;
}

Table ee_table(int res) {
    Table t{"ee", {"p", "s", "M", "M_half_plane", "reference_M", "reference_M_half_plane"}, {}};
    const char* full[] = {"2.198", "6.192", "25.614", "115.313", "524.610", "2427.838", "11431.562",
                          "61597.788", "340968.029", "1.871e6", "1.020e7", "5.520e7", "3.168e8"};
    const char* half[] = {"2.198", "6.192", "25.5", "96.305", "190.163", "631.328", "2549.961",
                          "11631.367", "46860.486", "98425.587", "336910.368", "1.444e6", "6.561e6"};
    for (int p = 2; p <= 14; ++p) {
        ExtrapolationRow r = ee_row(p, res);
        t.rows.push_back({std::to_string(p), std::to_string(r.stages), fmt(r.report.m_full, 9),
                          fmt(r.report.m_half, 9), full[p - 2], half[p - 2]});
    }
    return t;
}

Table em_table(int res) {
    Table t{"em", {"p", "s", "M", "M_half_plane", "reference_M_half_plane"}, {}};
    const char* half[] = {"2.198", "7.332", "25.378", "88.755", "<= 836"};
    for (int p = 2; p <= 10; p += 2) {
        ExtrapolationRow r = em_row(p, res);
        t.rows.push_back({std::to_string(p), std::to_string(r.stages), fmt(r.report.m_full, 9),
                          fmt(r.report.m_half, 9), half[p / 2 - 1]});
    }
    return t;
}

Table zero_table(bool ee) {
    Table t{ee ? "ee-zero" : "em-zero", {"p", "M0", "M0_decimal"}, {}};
    for (int p = 2; p <= 20; p += ee ? 1 : 2) {
        Rational q = ee ? ee_zero_closed_form(p) : em_zero_closed_form(p);
        t.rows.push_back({std::to_string(p), to_string(q), fmt(to_double(q), 10)});
    }
    return t;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

const std::vector<std::string>& table_ids() {
    static const std::vector<std::string> ids = {"table1", "table2", "ssp3", "radius",
                                                 "ee",     "ee-zero", "em",  "em-zero"};
    return ids;
}

ShuOsherForm classic_reference_form(const std::string& name) {
    if (name == "ssp104") return classic_natural_form(name);
    ShuOsherForm so = butcher_to_shu_osher(classic_tableau(name));
    so.name = name;
    return so;
}

AmplificationReport classic_report(const std::string& name, int resolution) {
    return report_for(classic_reference_form(name), name, RegionScope::origin_component, resolution);
}

ExtrapolationRow ee_row(int p, int resolution) {
    ShuOsherForm so = build_ee_extrapolation(p);
    return {p, so.s, report_for(so, "ee:" + std::to_string(p), RegionScope::whole, resolution)};
}

ExtrapolationRow em_row(int p, int resolution) {
    ShuOsherForm so = build_em_extrapolation(p);
    return {p, so.s, report_for(so, "em:" + std::to_string(p), RegionScope::whole, resolution)};
}

ShuOsherForm ee12_retargeted() {
    ButcherTableau bt = shu_osher_to_butcher(build_ee_extrapolation(12));
    ShuOsherForm so = retarget_implementation(bt, zero_constant_targets(bt));
    so.name = "ee12-retargeted";
    return so;
}

Table ssp3_rows(int n_max) {
    if (n_max < 2) throw std::invalid_argument("ssp3 table needs n-max >= 2");
    Table t{"ssp3", {"n", "s", "nu_star", "M", "reference_M"}, {}};
    const char* ref[] = {"1.575", "1.794", "1.956", "2.091", "2.209", "2.314", "2.411", "2.501", "2.585"};
    for (int n = 2; n <= n_max; ++n) {
        Ssp3Analysis a = ssp3_analytic(n);
        t.rows.push_back({std::to_string(n), std::to_string(n * n), fixed(a.nu_star, 6), ceil_fixed(a.m_value, 3),
                          n <= 10 ? ref[n - 2] : ""});
    }
    return t;
}

Table make_table(const std::string& id, int resolution) {
    if (id == "table1") return table1(resolution);
    if (id == "table2") return table2(resolution);
    if (id == "ssp3") return ssp3_rows(10);
    if (id == "radius") return radius_table(resolution);
    if (id == "ee") return ee_table(resolution);
    if (id == "ee-zero") return zero_table(true);
    if (id == "em") return em_table(resolution);
    if (id == "em-zero") return zero_table(false);
    throw UnknownTable("unknown table '" + id + "'");
}

std::string to_csv(const Table& t) {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << csv_cell(cells[k]);
        os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return os.str();
}

}  // namespace rkistab
