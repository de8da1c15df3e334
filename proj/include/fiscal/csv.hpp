#pragma once

#include <string>

#include "fiscal/series.hpp"

namespace fiscal {

// Two-column CSV: header "DATE,<NAME>", ISO dates at quarter starts
// (01-01, 04-01, 07-01, 10-01). A "." value is missing data and rejected.
QuarterlySeries load_fred_csv(const std::string& path);

void write_fred_csv(const QuarterlySeries& s, const std::string& path);

}  // namespace fiscal
