#include "rkistab/method_spec.hpp"

#include <algorithm>
#include <charconv>

namespace rkistab {

const std::vector<std::string>& classic_names() {
    static const std::vector<std::string> names = {"ssp33",      "heun3",          "rk4",
                                                   "merson43",   "fehlberg54",     "bogacki_shampine54",
                                                   "prince_dormand8", "ssp104"};
    return names;
}

const char* family_name(Family f) {
    switch (f) {
        case Family::ssp2: return "ssp2";
        case Family::ssp3: return "ssp3";
        case Family::ee_extrap: return "ee";
        case Family::em_extrap: return "em";
        case Family::classic: return "classic";
        case Family::taylor: return "taylor";
    }
    return "?";
}

std::string MethodSpec::id() const {
    std::string out = family_name(family);
    out += ':';
    out += family == Family::classic ? name : std::to_string(parameter);
    if (form == FormPreference::butcher) out += "[butcher]";
    return out;
}

namespace {

bool is_classic(const std::string& n) {
    const auto& names = classic_names();
    return std::find(names.begin(), names.end(), n) != names.end();
}

int parse_int(const std::string& text, std::size_t pos, std::size_t len) {
    int v = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (len == 0) throw ParseError("expected an integer at position " + std::to_string(pos), pos);
    if (ec != std::errc() || ptr != first + len)
        throw ParseError("expected an integer at position " + std::to_string(pos) + ", got '" +
                             text.substr(pos, len) + "'",
                         pos);
    return v;
}

}  // namespace

MethodSpec parse_method_spec(const std::string& text) {
    MethodSpec spec;
    auto colon = text.find(':');
    std::string fam = text.substr(0, colon);
    if (fam.empty()) throw ParseError("empty method family at position 0", 0);

    // bare classic names are accepted as shorthand
    if (colon == std::string::npos && is_classic(fam)) {
        spec.family = Family::classic;
        spec.name = fam;
        return spec;
    }

    if (fam == "ssp2")
        spec.family = Family::ssp2;
    else if (fam == "ssp3")
        spec.family = Family::ssp3;
    else if (fam == "ee" || fam == "ee_extrap")
        spec.family = Family::ee_extrap;
    else if (fam == "em" || fam == "em_extrap")
        spec.family = Family::em_extrap;
    else if (fam == "classic")
        spec.family = Family::classic;
    else if (fam == "taylor")
        spec.family = Family::taylor;
    else
        throw ParseError("unknown method family '" + fam + "' at position 0", 0);

    if (colon == std::string::npos)
        throw ParseError("missing parameter after '" + fam + "' at position " + std::to_string(fam.size()),
                         fam.size());

    std::size_t vpos = colon + 1;
    std::string rest = text.substr(vpos);
    auto eq = rest.find('=');
    if (eq != std::string::npos) {
        std::string key = rest.substr(0, eq);
        static const char* expected[] = {"s", "n", "p", "p", "name", "p"};
        const char* want = expected[static_cast<int>(spec.family)];
        if (key != want)
            throw ParseError("unexpected key '" + key + "' at position " + std::to_string(vpos) + " (expected '" +
                                 want + "')",
                             vpos);
        vpos += eq + 1;
        rest = rest.substr(eq + 1);
    }

    if (spec.family == Family::classic) {
        if (!is_classic(rest))
            throw ParseError("unknown classic method '" + rest + "' at position " + std::to_string(vpos), vpos);
        spec.name = rest;
        return spec;
    }

    spec.parameter = parse_int(text, vpos, rest.size());
    switch (spec.family) {
        case Family::ssp2:
            if (spec.parameter < 2) throw ParseError("ssp2 needs s >= 2 (position " + std::to_string(vpos) + ")", vpos);
            break;
        case Family::ssp3:
            if (spec.parameter < 2) throw ParseError("ssp3 needs n >= 2 (position " + std::to_string(vpos) + ")", vpos);
            break;
        case Family::em_extrap:
            if (spec.parameter < 2 || spec.parameter % 2)
                throw OddOrder("midpoint extrapolation needs an even order >= 2, got " +
                                   std::to_string(spec.parameter) + " at position " + std::to_string(vpos),
                               vpos);
            break;
        default:
            if (spec.parameter < 1) throw ParseError("order must be >= 1 (position " + std::to_string(vpos) + ")", vpos);
    }
    return spec;
}

}  // namespace rkistab
