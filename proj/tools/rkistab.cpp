#include "rkistab/amplification.hpp"
#include "rkistab/catalog.hpp"
#include "rkistab/io.hpp"
#include "rkistab/method_spec.hpp"
#include "rkistab/region.hpp"
#include "rkistab/sim.hpp"
#include "rkistab/stab_poly.hpp"
#include "rkistab/tables.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace rkistab;

namespace {

enum Exit { ok = 0, failure = 1, parse_error = 2, contract_violation = 3 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

MethodSpec spec_with_form(const std::string& text, const std::string& form) {
    MethodSpec spec = parse_method_spec(text);
    if (form == "butcher")
        spec.form = FormPreference::butcher;
    else if (form != "natural")
        throw UsageError("--form must be natural or butcher");
    return spec;
}

// writes to the file if one is given, stdout otherwise
void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

void print_matrix(std::ostream& os, const char* label, const Matrix& m) {
    os << label << ":\n";
    for (const auto& row : m) {
        os << " ";
        for (double x : row) os << " " << num(x);
        os << "\n";
    }
}

void print_vec(std::ostream& os, const char* label, const Vec& v) {
    os << label << ":";
    for (double x : v) os << " " << num(x);
    os << "\n";
}

int cmd_method(const std::string& text, const std::string& form, bool as_json) {
    MethodSpec spec = spec_with_form(text, form);
    ShuOsherForm so = build(spec);
    ButcherTableau bt = shu_osher_to_butcher(so);
    if (as_json) {
        json j{{"method", spec.id()}, {"shu_osher", to_json(so)}, {"butcher", to_json(bt)}};
        std::cout << j.dump(2) << "\n";
        return ok;
    }
    std::ostringstream os;
    os << spec.id() << "  s=" << so.s << "  order=" << so.order;
    if (so.order_embedded) os << "(" << *so.order_embedded << ")";
    os << "\n";
    print_matrix(os, "alpha", so.alpha);
    print_matrix(os, "beta", so.beta);
    print_vec(os, "v", so.v());
    print_matrix(os, "A", bt.A);
    print_vec(os, "b", bt.b);
    print_vec(os, "c", bt.c);
    if (bt.b_embedded) print_vec(os, "b_embedded", *bt.b_embedded);
    std::cout << os.str();
    return ok;
}

int cmd_poly(const std::string& text, const std::string& form, bool as_json) {
    MethodSpec spec = spec_with_form(text, form);
    if (spec.family == Family::taylor) {
        RatPoly P = stability_polynomial(spec);
        if (as_json) {
            json pe = json::array();
            for (const auto& q : P.c) pe.push_back(to_string(q));
            std::cout << json{{"method", spec.id()}, {"P", to_double(P).c}, {"P_exact", pe}}.dump(2) << "\n";
        } else {
            std::cout << "P:";
            for (const auto& q : P.c) std::cout << " " << to_string(q);
            std::cout << "\n";
        }
        return ok;
    }
    InternalStabilitySet iss = derive_internal_stability(build(spec));
    if (as_json) {
        json j = to_json(iss);
        j["method"] = spec.id();
        std::cout << j.dump(2) << "\n";
        return ok;
    }
    auto line = [](const char* label, int j, const Poly& p, const RatPoly* e) {
        std::cout << label;
        if (j > 0) std::cout << j;
        std::cout << ":";
        if (e)
            for (const auto& q : e->c) std::cout << " " << to_string(q);
        else
            for (double x : p.c) std::cout << " " << num(x);
        std::cout << "\n";
    };
    line("P", 0, iss.P, iss.P_exact ? &*iss.P_exact : nullptr);
    for (int j = 0; j < iss.stages(); ++j)
        line("Q", j + 1, iss.Q[static_cast<std::size_t>(j)],
             iss.Q_exact ? &(*iss.Q_exact)[static_cast<std::size_t>(j)] : nullptr);
    return ok;
}

Poly region_polynomial(const MethodSpec& spec) {
    if (spec.family == Family::taylor) return to_double(stability_polynomial(spec));
    return derive_internal_stability(build(spec)).P;
}

int cmd_region(const std::string& text, const std::string& form, bool half, int res, const std::string& out) {
    MethodSpec spec = spec_with_form(text, form);
    StabilityRegion reg = trace_region(region_polynomial(spec), res);
    std::ostringstream os;
    os << "curve,origin_component,re,im\n";
    for (std::size_t l = 0; l < reg.boundary.size(); ++l)
        for (cplx z : reg.boundary[l]) {
            if (half && z.real() > 0.0) continue;
            os << l << "," << (reg.origin_component[l] ? 1 : 0) << "," << num(z.real()) << "," << num(z.imag())
               << "\n";
        }
    emit(os.str(), out);
    RadiusResult r = max_abs_z(reg, half);
    std::cerr << "max |z| = " << num(r.radius) << " at " << num(r.point.real()) << (r.point.imag() < 0 ? "" : "+")
              << num(r.point.imag()) << "i\n";
    return ok;
}

int cmd_amp(const std::string& text, const std::string& form, bool half, const std::string& scope_text, int res,
            bool as_json, bool check) {
    MethodSpec spec = spec_with_form(text, form);
    RegionScope scope = RegionScope::whole;
    if (scope_text == "origin")
        scope = RegionScope::origin_component;
    else if (scope_text != "whole")
        throw UsageError("--scope must be whole or origin");
    InternalStabilitySet iss = derive_internal_stability(build(spec));
    StabilityRegion reg = trace_region(iss.P, res);
    AmplificationReport r = analyze(iss, reg, spec.id(), scope);
    std::vector<BoundCheck> checks;
    if (check) checks = verify_bounds(r, spec, &iss);
    bool violated = false;
    for (const auto& c : checks) violated |= c.applicable && !c.satisfied;

    if (as_json) {
        json j = to_json(r);
        if (half) j["M_selected"] = r.m_half;
        json cj = json::array();
        for (const auto& c : checks)
            cj.push_back({{"name", c.name},   {"applicable", c.applicable}, {"satisfied", c.satisfied},
                          {"value", c.value}, {"bound", c.bound},           {"reason", c.reason}});
        if (check) j["bounds"] = cj;
        std::cout << j.dump(2) << "\n";
    } else {
        const Argmax& a = half ? r.argmax_half : r.argmax_full;
        std::cout << spec.id() << (half ? "  M (Re z <= 0) = " : "  M = ") << num(half ? r.m_half : r.m_full)
                  << "  stage " << a.stage << "  z = " << num(a.z.real()) << (a.z.imag() < 0 ? "" : "+")
                  << num(a.z.imag()) << "i\n";
        std::cout << "M0 = " << num(r.m_zero);
        if (auto e = amplification_at_zero_exact(iss)) std::cout << " (" << to_string(*e) << ")";
        std::cout << "\n";
        for (const auto& c : checks) {
            if (!c.applicable)
                std::cout << "  skip  " << c.name << ": " << c.reason << "\n";
            else
                std::cout << "  " << (c.satisfied ? "ok  " : "FAIL") << "  " << c.name << ": " << num(c.value)
                          << " vs " << num(c.bound) << "\n";
        }
    }
    return violated ? contract_violation : ok;
}

// "1e-4..1e-12" (every decade) or a comma list
std::vector<double> parse_tols(const std::string& text) {
    std::vector<double> out;
    auto dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            double a = std::stod(text.substr(0, dots)), b = std::stod(text.substr(dots + 2));
            if (!(a > 0 && b > 0)) throw UsageError("tolerances must be positive");
            int ea = static_cast<int>(std::lround(std::log10(a))), eb = static_cast<int>(std::lround(std::log10(b)));
            int step = ea <= eb ? 1 : -1;
            for (int e = ea;; e += step) {
                out.push_back(std::pow(10.0, e));
                if (e == eb) break;
            }
            return out;
        }
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const UsageError*>(&e)) throw;
        throw UsageError("cannot read tolerances '" + text + "'");
    }
    if (out.empty()) throw UsageError("no tolerances given");
    for (double t : out)
        if (!(t > 0)) throw UsageError("tolerances must be positive");
    return out;
}

int cmd_experiment(const std::string& which, const std::string& text, const std::string& form,
                   const std::string& tols_text, std::uint64_t seed, const std::string& noise, const std::string& out) {
    if (which != "d2") throw UsageError("unknown experiment '" + which + "' (only d2)");
    MethodSpec spec = spec_with_form(text, form);
    ShuOsherForm so = build(spec);
    if (!so.has_embedded()) throw UsageError(spec.id() + " has no embedded pair");
    PerturbationPolicy pol;
    pol.seed = seed;
    if (noise == "summation")
        pol.mode = PerturbationMode::summation_roundoff;
    else if (noise == "relative")
        pol.mode = PerturbationMode::relative_roundoff;
    else if (noise == "none")
        pol.mode = PerturbationMode::none;
    else
        throw UsageError("--noise must be summation, relative or none");
    IvpProblem d2 = kepler_d2();
    auto sweep = tolerance_sweep(so, d2, parse_tols(tols_text), pol);
    std::ostringstream os;
    os << "tol,steps,rejections,global_error,failed\n";
    for (const auto& p : sweep) {
        char tol[32];
        std::snprintf(tol, sizeof tol, "%.6g", p.tol);
        os << tol << "," << p.run.steps << "," << p.run.rejections << ","
           << (p.run.failed ? std::string("nan") : num(p.run.global_error)) << "," << (p.run.failed ? 1 : 0) << "\n";
    }
    emit(os.str(), out);
    return ok;
}

int cmd_tables(const std::string& id, int res, const std::string& out) {
    emit(to_csv(make_table(id, res)), out);
    return ok;
}

int cmd_amp_table(const std::string& id, int n_max, const std::string& out) {
    if (id != "ssp3") throw UnknownTable("amp --table knows only ssp3, got '" + id + "'");
    if (n_max < 2 || n_max > 400) throw UsageError("--n-max must lie in 2..400");
    emit(to_csv(ssp3_rows(n_max)), out);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Internal stability of Runge-Kutta methods"};
    app.require_subcommand(1);

    std::string method_text, form = "natural", out, scope = "whole", tols = "1e-4..1e-12", noise = "summation",
                              table, experiment;
    bool as_json = false, half = false, check = false;
    int res = kDefaultResolution, n_max = 10;
    std::uint64_t seed = 1;

    auto* method = app.add_subcommand("method", "print the coefficients of a method");
    method->add_option("spec", method_text, "method spec, e.g. ssp2:8, ssp3:n=3, ee:12, em:8, classic:rk4")
        ->required();
    method->add_option("--form", form, "natural or butcher");
    method->add_flag("--json", as_json, "JSON output");

    auto* poly = app.add_subcommand("poly", "print P and the internal stability polynomials");
    poly->add_option("spec", method_text, "method spec or taylor:p")->required();
    poly->add_option("--form", form, "natural or butcher");
    poly->add_flag("--json", as_json, "JSON output");

    auto* region = app.add_subcommand("region", "trace the boundary of the absolute stability region");
    region->add_option("spec", method_text, "method spec or taylor:p")->required();
    region->add_option("--form", form, "natural or butcher");
    region->add_flag("--half-plane", half, "keep only points with Re z <= 0");
    region->add_option("--resolution", res, "grid resolution");
    region->add_option("--out", out, "CSV file (stdout if omitted)");

    auto* amp = app.add_subcommand("amp", "maximum internal amplification factor");
    auto* amp_spec = amp->add_option("spec", method_text, "method spec");
    auto* amp_table = amp->add_option("--table", table, "print a family table instead (ssp3)")->excludes(amp_spec);
    amp->add_option("--n-max", n_max, "largest n for --table ssp3")->needs(amp_table);
    amp->add_option("--out", out, "CSV file for --table (stdout if omitted)")->needs(amp_table);
    amp->add_option("--form", form, "natural or butcher");
    amp->add_flag("--half-plane", half, "report the value over Re z <= 0");
    amp->add_option("--scope", scope, "whole or origin (component containing 0)");
    amp->add_option("--resolution", res, "grid resolution");
    amp->add_flag("--json", as_json, "JSON output");
    amp->add_flag("--check-bounds", check, "check the family's theoretical bounds, exit 3 on a violation");

    auto* exp = app.add_subcommand("experiment", "tolerance sweep on the Kepler problem");
    exp->add_option("name", experiment, "experiment name (d2)")->required();
    exp->add_option("--method", method_text, "method spec with an embedded pair")->required();
    exp->add_option("--form", form, "natural or butcher");
    exp->add_option("--tols", tols, "1e-4..1e-12 or a comma list");
    exp->add_option("--seed", seed, "perturbation seed");
    exp->add_option("--noise", noise, "summation, relative or none");
    exp->add_option("--out", out, "CSV file (stdout if omitted)");

    auto* tables = app.add_subcommand("tables", "reproduce a table as CSV");
    tables->add_option("id", table, "table1 table2 ssp3 radius ee ee-zero em em-zero")->required();
    tables->add_option("--resolution", res, "grid resolution");
    tables->add_option("--out", out, "CSV file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : parse_error;
    }

    try {
        if (*method) return cmd_method(method_text, form, as_json);
        if (*poly) return cmd_poly(method_text, form, as_json);
        if (*region) return cmd_region(method_text, form, half, res, out);
        if (*amp && *amp_table) return cmd_amp_table(table, n_max, out);
        if (*amp && method_text.empty()) throw UsageError("amp needs a method spec or --table");
        if (*amp) return cmd_amp(method_text, form, half, scope, res, as_json, check);
        if (*exp) return cmd_experiment(experiment, method_text, form, tols, seed, noise, out);
        if (*tables) return cmd_tables(table, res, out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_error;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_error;
    } catch (const UnknownMethod& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_error;
    } catch (const UnknownTable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_error;
    } catch (const UnsupportedFamily& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_error;
    } catch (const NonfiniteState& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return contract_violation;
    } catch (const DegenerateP& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return contract_violation;
    } catch (const UntracedRegion& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return contract_violation;
    } catch (const SpanFailure& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return contract_violation;
    } catch (const DegreeMismatch& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return contract_violation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
    return ok;
}
