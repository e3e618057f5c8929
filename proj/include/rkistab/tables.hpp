#pragma once

#include "rkistab/amplification.hpp"
#include "rkistab/forms.hpp"
#include "rkistab/region.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rkistab {

struct UnknownTable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Table {
    std::string id;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// table1 table2 ssp3 radius ee ee-zero em em-zero
const std::vector<std::string>& table_ids();
Table make_table(const std::string& id, int resolution = kDefaultResolution);
std::string to_csv(const Table& t);

// SSP3 values through the root of mu for n = 2..n_max
Table ssp3_rows(int n_max);

// The implementation each classic method is measured in: ssp33 in Butcher
// form, ssp104 in its convex-combination form, the rest in Butcher form.
ShuOsherForm classic_reference_form(const std::string& name);

// M over the component of the region that contains the origin
AmplificationReport classic_report(const std::string& name, int resolution = kDefaultResolution);

struct ExtrapolationRow {
    int p = 0;
    int stages = 0;
    AmplificationReport report;
};
// natural form, whole region
ExtrapolationRow ee_row(int p, int resolution = kDefaultResolution);
ExtrapolationRow em_row(int p, int resolution = kDefaultResolution);

// the zero-constant retarget of the EE-12 Butcher tableau
ShuOsherForm ee12_retargeted();

}  // namespace rkistab
